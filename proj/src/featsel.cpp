#include "cosmix/featsel.hpp"

#include <algorithm>

#include "cosmix/kernels.hpp"

namespace cosmix {

std::vector<double> term_entropy(const DocTermMatrix& matrix) {
  if (matrix.n_docs() < 2)
    throw data_error("entropy undefined for single-document corpus");
  CscView csc = transpose(matrix);
  std::vector<double> h(static_cast<std::size_t>(matrix.n_terms()), 0.0);
  kernels::term_entropy(csc, matrix.n_docs(), h);
  return h;
}

namespace {

DocTermMatrix keep_columns(const DocTermMatrix& matrix, const std::vector<bool>& keep) {
  const std::int32_t p = matrix.n_terms();
  std::vector<std::int32_t> remap(static_cast<std::size_t>(p), -1);
  std::vector<std::string> terms;
  for (std::int32_t h = 0; h < p; ++h) {
    if (keep[static_cast<std::size_t>(h)]) {
      remap[static_cast<std::size_t>(h)] = static_cast<std::int32_t>(terms.size());
      terms.push_back(matrix.vocab.terms[static_cast<std::size_t>(h)]);
    }
  }
  if (terms.empty()) throw data_error("threshold removed all terms");

  DocTermMatrix out;
  out.vocab = Vocabulary::from_sorted_terms(std::move(terms));
  out.weighting = matrix.weighting;
  out.row_start.assign(static_cast<std::size_t>(matrix.n_docs()) + 1, 0);
  for (std::int32_t j = 0; j < matrix.n_docs(); ++j) {
    for (std::int64_t e = matrix.row_start[j]; e < matrix.row_start[j + 1]; ++e) {
      std::int32_t nc = remap[static_cast<std::size_t>(matrix.cols[static_cast<std::size_t>(e)])];
      if (nc >= 0) {
        out.cols.push_back(nc);
        out.vals.push_back(matrix.vals[static_cast<std::size_t>(e)]);
      }
    }
    out.row_start[static_cast<std::size_t>(j) + 1] = static_cast<std::int64_t>(out.cols.size());
  }
  out.recompute_norms();
  return out;
}

}  // namespace

DocTermMatrix select_by_threshold(const DocTermMatrix& matrix, std::span<const double> entropy,
                                  double tau) {
  if (tau < 0.0 || tau > 1.0) throw data_error("select_by_threshold: tau outside [0,1]");
  std::vector<bool> keep(static_cast<std::size_t>(matrix.n_terms()));
  for (std::int32_t h = 0; h < matrix.n_terms(); ++h)
    keep[static_cast<std::size_t>(h)] = entropy[static_cast<std::size_t>(h)] >= tau;
  return keep_columns(matrix, keep);
}

TopNSelection select_top_n(const DocTermMatrix& matrix, std::span<const double> entropy,
                           std::int32_t n_terms) {
  if (n_terms < 1) throw data_error("select_top_n: n_terms must be >= 1");
  const std::int32_t p = matrix.n_terms();
  TopNSelection out;
  if (n_terms >= p) {
    out.matrix = matrix;
    out.truncated_to_all = n_terms > p;
    return out;
  }
  std::vector<std::int32_t> order(static_cast<std::size_t>(p));
  for (std::int32_t h = 0; h < p; ++h) order[static_cast<std::size_t>(h)] = h;
  std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
    double ea = entropy[static_cast<std::size_t>(a)];
    double eb = entropy[static_cast<std::size_t>(b)];
    if (ea != eb) return ea > eb;
    return a < b;  // column order is lexicographic term order
  });
  std::vector<bool> keep(static_cast<std::size_t>(p), false);
  for (std::int32_t r = 0; r < n_terms; ++r)
    keep[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = true;
  out.matrix = keep_columns(matrix, keep);
  return out;
}

std::vector<HistogramBin> entropy_histogram(std::span<const double> entropy, int n_bins) {
  std::vector<HistogramBin> bins(static_cast<std::size_t>(n_bins));
  for (int b = 0; b < n_bins; ++b) {
    bins[static_cast<std::size_t>(b)].lo = static_cast<double>(b) / n_bins;
    bins[static_cast<std::size_t>(b)].hi = static_cast<double>(b + 1) / n_bins;
  }
  for (double h : entropy) {
    int b = static_cast<int>(h * n_bins);
    if (b >= n_bins) b = n_bins - 1;
    if (b < 0) b = 0;
    ++bins[static_cast<std::size_t>(b)].count;
  }
  return bins;
}

}  // namespace cosmix
