#pragma once

#include <cmath>
#include <limits>

#include "cosmix/geometry.hpp"
#include "cosmix/textprep.hpp"

// Per-element arithmetic shared by the OpenMP kernels and the serial
// reference loops; identical evaluation order keeps the two bit-equal.
namespace cosmix::kernels::detail {

inline double posterior_row(const double* dist_row, const double* logw, std::int32_t k,
                            double lambda, double* post_row) {
  const double neg_inf = -std::numeric_limits<double>::infinity();
  double mx = neg_inf;
  for (std::int32_t i = 0; i < k; ++i) {
    double a = logw[i] == neg_inf ? neg_inf : logw[i] - lambda * dist_row[i];
    post_row[i] = a;
    if (a > mx) mx = a;
  }
  double s = 0.0;
  for (std::int32_t i = 0; i < k; ++i) {
    double e = post_row[i] == neg_inf ? 0.0 : std::exp(post_row[i] - mx);
    post_row[i] = e;
    s += e;
  }
  for (std::int32_t i = 0; i < k; ++i) post_row[i] /= s;
  return mx + std::log(s);
}

inline double column_entropy(const double* vals, std::int64_t len, double inv_log_n) {
  double total = 0.0;
  for (std::int64_t e = 0; e < len; ++e) total += vals[e];
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (std::int64_t e = 0; e < len; ++e) {
    double f = vals[e] / total;
    h -= f * std::log(f);
  }
  return h * inv_log_n;
}

inline double lhs_doc(const double* gaps, const double* ratios, std::int32_t k, double lambda) {
  double s = 0.0;
  for (std::int32_t i = 0; i < k; ++i) s += ratios[i] * std::exp(-lambda * gaps[i]);
  return s;
}

inline void accumulate_cluster(const DocTermMatrix& m, const double* w, std::int32_t k,
                               std::int32_t cluster, double* out) {
  const std::int32_t n = m.n_docs();
  for (std::int32_t j = 0; j < n; ++j) {
    double wj = w[static_cast<std::int64_t>(j) * k + cluster];
    double norm = m.doc_norms[static_cast<std::size_t>(j)];
    if (wj == 0.0 || norm == 0.0) continue;
    double scale = wj / norm;
    for (std::int64_t e = m.row_start[j]; e < m.row_start[j + 1]; ++e)
      out[m.cols[static_cast<std::size_t>(e)]] += scale * m.vals[static_cast<std::size_t>(e)];
  }
}

inline void nearest_in_row(const double* dist_row, std::int32_t k, std::int32_t* label,
                           double* min_dist) {
  std::int32_t best = 0;
  double bd = dist_row[0];
  for (std::int32_t i = 1; i < k; ++i) {
    if (dist_row[i] < bd) {
      bd = dist_row[i];
      best = i;
    }
  }
  *label = best;
  if (min_dist) *min_dist = bd;
}

inline double pair_partial(const DocTermMatrix& m, const std::int32_t* members, std::size_t count,
                           std::size_t a) {
  double s = 0.0;
  for (std::size_t b = a + 1; b < count; ++b) s += row_row_distance(m, members[a], members[b]);
  return s;
}

}  // namespace cosmix::kernels::detail
