#include <cmath>
#include <limits>

#include "cosmix/kernels.hpp"
#include "kernels_detail.hpp"

namespace cosmix::kernels {

void doc_centroid_distances(const DocTermMatrix& m, std::span<const Centroid> centroids,
                            double* out) {
  const std::int32_t n = m.n_docs();
  const std::int32_t k = static_cast<std::int32_t>(centroids.size());
#pragma omp parallel for schedule(static)
  for (std::int32_t j = 0; j < n; ++j) {
    for (std::int32_t i = 0; i < k; ++i)
      out[static_cast<std::int64_t>(j) * k + i] = row_centroid_distance(m, j, centroids[i]);
  }
}

double posteriors_from_distances(std::span<const double> dist, std::int32_t n, std::int32_t k,
                                 std::span<const double> weights, double lambda,
                                 double* posteriors) {
  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> logw(static_cast<std::size_t>(k));
  for (std::int32_t i = 0; i < k; ++i)
    logw[static_cast<std::size_t>(i)] = weights[i] > 0.0 ? std::log(weights[i]) : neg_inf;

  std::vector<double> per_doc(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (std::int32_t j = 0; j < n; ++j) {
    per_doc[static_cast<std::size_t>(j)] =
        detail::posterior_row(dist.data() + static_cast<std::int64_t>(j) * k, logw.data(), k,
                              lambda, posteriors + static_cast<std::int64_t>(j) * k);
  }
  double pll = 0.0;  // fixed-order reduce keeps the result thread-count invariant
  for (std::int32_t j = 0; j < n; ++j) pll += per_doc[static_cast<std::size_t>(j)];
  return pll;
}

void weighted_normalized_sums(const DocTermMatrix& m, std::span<const double> w, std::int32_t k,
                              std::vector<std::vector<double>>& out) {
  const std::int32_t p = m.n_terms();
  out.assign(static_cast<std::size_t>(k), {});
#pragma omp parallel for schedule(static)
  for (std::int32_t i = 0; i < k; ++i) {
    auto& acc = out[static_cast<std::size_t>(i)];
    acc.assign(static_cast<std::size_t>(p), 0.0);
    detail::accumulate_cluster(m, w.data(), k, i, acc.data());
  }
}

void term_entropy(const CscView& csc, std::int32_t n_docs, std::span<double> out) {
  const std::int32_t p = static_cast<std::int32_t>(out.size());
  const double inv_log_n = 1.0 / std::log(static_cast<double>(n_docs));
#pragma omp parallel for schedule(static)
  for (std::int32_t h = 0; h < p; ++h) {
    std::int64_t b = csc.col_start[static_cast<std::size_t>(h)];
    std::int64_t e = csc.col_start[static_cast<std::size_t>(h) + 1];
    out[static_cast<std::size_t>(h)] = detail::column_entropy(csc.vals.data() + b, e - b, inv_log_n);
  }
}

double calibration_lhs(std::span<const double> gaps, std::span<const double> ratios,
                       std::int32_t n, std::int32_t k, double lambda, std::span<double> scratch) {
#pragma omp parallel for schedule(static)
  for (std::int32_t j = 0; j < n; ++j) {
    scratch[static_cast<std::size_t>(j)] =
        detail::lhs_doc(gaps.data() + static_cast<std::int64_t>(j) * k,
                        ratios.data() + static_cast<std::int64_t>(j) * k, k, lambda);
  }
  double s = 0.0;
  for (std::int32_t j = 0; j < n; ++j) s += scratch[static_cast<std::size_t>(j)];
  return s;
}

void nearest_centroid(std::span<const double> dist, std::int32_t n, std::int32_t k,
                      std::int32_t* labels, double* min_dist) {
#pragma omp parallel for schedule(static)
  for (std::int32_t j = 0; j < n; ++j) {
    detail::nearest_in_row(dist.data() + static_cast<std::int64_t>(j) * k, k, labels + j,
                           min_dist ? min_dist + j : nullptr);
  }
}

double mean_pairwise_distance(const DocTermMatrix& m, std::span<const std::int32_t> members) {
  const std::size_t c = members.size();
  if (c < 2) return 0.0;
  std::vector<double> partial(c, 0.0);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t a = 0; a < static_cast<std::int64_t>(c); ++a)
    partial[static_cast<std::size_t>(a)] =
        detail::pair_partial(m, members.data(), c, static_cast<std::size_t>(a));
  double s = 0.0;
  for (std::size_t a = 0; a < c; ++a) s += partial[a];
  return s / (0.5 * static_cast<double>(c) * static_cast<double>(c - 1));
}

void pairwise_distance_batch(const DocTermMatrix& m,
                             std::span<const std::pair<std::int32_t, std::int32_t>> pairs,
                             double* out) {
  const std::int64_t np = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < np; ++i)
    out[i] = row_row_distance(m, pairs[static_cast<std::size_t>(i)].first,
                              pairs[static_cast<std::size_t>(i)].second);
}

}  // namespace cosmix::kernels
