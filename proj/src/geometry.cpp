#include "cosmix/geometry.hpp"

#include <atomic>
#include <cmath>
#include <limits>

#include "cosmix/kernels.hpp"
#include "cosmix/rng.hpp"

namespace cosmix {

namespace {

std::atomic<std::uint64_t> g_zero_distance_count{0};

void note_zero_distance() { g_zero_distance_count.fetch_add(1, std::memory_order_relaxed); }

}  // namespace

std::uint64_t zero_distance_count() {
  return g_zero_distance_count.load(std::memory_order_relaxed);
}

void reset_zero_distance_count() { g_zero_distance_count.store(0, std::memory_order_relaxed); }

Centroid Centroid::from_unnormalized(std::vector<double> raw) {
  double s = 0.0;
  for (double x : raw) s += x * x;
  s = std::sqrt(s);
  if (!(s > 0.0)) throw numeric_error("degenerate cluster: zero direction");
  for (double& x : raw) x /= s;
  return Centroid{std::move(raw)};
}

double cosine_distance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw data_error("cosine_distance: dimension mismatch");
  double dot = 0.0, nx = 0.0, ny = 0.0;
  for (std::size_t h = 0; h < x.size(); ++h) {
    dot += x[h] * y[h];
    nx += x[h] * x[h];
    ny += y[h] * y[h];
  }
  if (nx == 0.0 || ny == 0.0) {
    note_zero_distance();
    return 1.0;
  }
  return 1.0 - dot / (std::sqrt(nx) * std::sqrt(ny));
}

double row_centroid_distance(const DocTermMatrix& m, std::int32_t j, const Centroid& c) {
  double norm = m.doc_norms[static_cast<std::size_t>(j)];
  if (norm == 0.0) {
    note_zero_distance();
    return 1.0;
  }
  double dot = 0.0;
  for (std::int64_t e = m.row_start[j]; e < m.row_start[j + 1]; ++e)
    dot += m.vals[static_cast<std::size_t>(e)] * c.v[static_cast<std::size_t>(m.cols[static_cast<std::size_t>(e)])];
  return 1.0 - dot / norm;
}

double row_row_distance(const DocTermMatrix& m, std::int32_t a, std::int32_t b) {
  double na = m.doc_norms[static_cast<std::size_t>(a)];
  double nb = m.doc_norms[static_cast<std::size_t>(b)];
  if (na == 0.0 || nb == 0.0) {
    note_zero_distance();
    return 1.0;
  }
  std::int64_t ea = m.row_start[a], enda = m.row_start[a + 1];
  std::int64_t eb = m.row_start[b], endb = m.row_start[b + 1];
  double dot = 0.0;
  while (ea < enda && eb < endb) {
    std::int32_t ca = m.cols[static_cast<std::size_t>(ea)];
    std::int32_t cb = m.cols[static_cast<std::size_t>(eb)];
    if (ca == cb) {
      dot += m.vals[static_cast<std::size_t>(ea)] * m.vals[static_cast<std::size_t>(eb)];
      ++ea;
      ++eb;
    } else if (ca < cb) {
      ++ea;
    } else {
      ++eb;
    }
  }
  return 1.0 - dot / (na * nb);
}

Centroid spherical_mean(const DocTermMatrix& m, std::span<const double> weights) {
  const std::int32_t n = m.n_docs();
  if (static_cast<std::int32_t>(weights.size()) != n)
    throw data_error("spherical_mean: weight length mismatch");
  double wsum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw data_error("spherical_mean: negative weight");
    wsum += w;
  }
  if (!(wsum > 0.0)) throw numeric_error("degenerate cluster: zero total weight");

  std::vector<std::vector<double>> sums;
  kernels::weighted_normalized_sums(m, weights, 1, sums);
  return Centroid::from_unnormalized(std::move(sums[0]));
}

namespace {

struct RunOutcome {
  std::vector<std::int32_t> labels;
  std::vector<Centroid> centroids;
  double objective = 0.0;
  std::vector<double> objective_trace;
  int n_iter = 0;
};

RunOutcome kmeans_single_run(const DocTermMatrix& m, std::int32_t k,
                             const std::vector<std::int32_t>& nonzero, Rng rng, int max_iter) {
  const std::int32_t n = m.n_docs();

  auto row_as_centroid = [&](std::int32_t j) {
    std::vector<double> dense(static_cast<std::size_t>(m.n_terms()), 0.0);
    for (std::int64_t e = m.row_start[j]; e < m.row_start[j + 1]; ++e)
      dense[static_cast<std::size_t>(m.cols[static_cast<std::size_t>(e)])] =
          m.vals[static_cast<std::size_t>(e)];
    return Centroid::from_unnormalized(std::move(dense));
  };

  // k-means++-style seeding under cosine distance
  std::vector<Centroid> centroids;
  centroids.reserve(static_cast<std::size_t>(k));
  centroids.push_back(row_as_centroid(nonzero[rng.below(nonzero.size())]));
  std::vector<double> best_d2(nonzero.size());
  while (static_cast<std::int32_t>(centroids.size()) < k) {
    double total = 0.0;
    for (std::size_t idx = 0; idx < nonzero.size(); ++idx) {
      double dmin = 2.0;
      for (const auto& c : centroids) {
        double d = row_centroid_distance(m, nonzero[idx], c);
        if (d < dmin) dmin = d;
      }
      best_d2[idx] = dmin * dmin;
      total += best_d2[idx];
    }
    std::int32_t pick;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      double acc = 0.0;
      std::size_t chosen = nonzero.size() - 1;
      for (std::size_t idx = 0; idx < nonzero.size(); ++idx) {
        acc += best_d2[idx];
        if (acc >= target) {
          chosen = idx;
          break;
        }
      }
      pick = nonzero[chosen];
    } else {
      pick = nonzero[rng.below(nonzero.size())];  // all rows coincide with a seed
    }
    centroids.push_back(row_as_centroid(pick));
  }

  std::vector<double> dist(static_cast<std::size_t>(n) * static_cast<std::size_t>(k));
  std::vector<std::int32_t> labels(static_cast<std::size_t>(n), -1);
  std::vector<double> min_dist(static_cast<std::size_t>(n), 0.0);
  std::vector<double> onehot;
  std::vector<double> trace;
  double prev_obj = std::numeric_limits<double>::infinity();
  double objective = 0.0;
  int iter = 0;

  for (iter = 1; iter <= max_iter; ++iter) {
    kernels::doc_centroid_distances(m, centroids, dist.data());
    kernels::nearest_centroid(dist, n, k, labels.data(), min_dist.data());

    // farthest-point reseeding for empty clusters; a farthest distance of 0
    // means no second direction exists and the cluster stays empty
    std::vector<std::int64_t> size(static_cast<std::size_t>(k), 0);
    for (std::int32_t j : nonzero) ++size[static_cast<std::size_t>(labels[static_cast<std::size_t>(j)])];
    for (std::int32_t i = 0; i < k; ++i) {
      if (size[static_cast<std::size_t>(i)] > 0) continue;
      std::int32_t far_row = -1;
      double far_d = 0.0;
      for (std::int32_t j : nonzero) {
        std::int32_t lab = labels[static_cast<std::size_t>(j)];
        if (size[static_cast<std::size_t>(lab)] <= 1) continue;  // don't empty another cluster
        if (min_dist[static_cast<std::size_t>(j)] > far_d) {
          far_d = min_dist[static_cast<std::size_t>(j)];
          far_row = j;
        }
      }
      if (far_row < 0) continue;
      --size[static_cast<std::size_t>(labels[static_cast<std::size_t>(far_row)])];
      labels[static_cast<std::size_t>(far_row)] = i;
      min_dist[static_cast<std::size_t>(far_row)] = 0.0;
      ++size[static_cast<std::size_t>(i)];
      centroids[static_cast<std::size_t>(i)] = row_as_centroid(far_row);
    }

    objective = 0.0;
    for (std::int32_t j : nonzero) objective += min_dist[static_cast<std::size_t>(j)];
    trace.push_back(objective);

    // update step over non-empty clusters
    onehot.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(k), 0.0);
    for (std::int32_t j : nonzero)
      onehot[static_cast<std::int64_t>(j) * k + labels[static_cast<std::size_t>(j)]] = 1.0;
    std::vector<std::vector<double>> sums;
    kernels::weighted_normalized_sums(m, onehot, k, sums);
    for (std::int32_t i = 0; i < k; ++i) {
      if (size[static_cast<std::size_t>(i)] > 0)
        centroids[static_cast<std::size_t>(i)] =
            Centroid::from_unnormalized(std::move(sums[static_cast<std::size_t>(i)]));
    }

    if (std::abs(prev_obj - objective) <= 1e-12 * std::max(1.0, std::abs(objective))) break;
    prev_obj = objective;
  }

  // final assignment against the last centroid update
  kernels::doc_centroid_distances(m, centroids, dist.data());
  kernels::nearest_centroid(dist, n, k, labels.data(), min_dist.data());
  objective = 0.0;
  for (std::int32_t j : nonzero) objective += min_dist[static_cast<std::size_t>(j)];

  trace.push_back(objective);

  RunOutcome out;
  out.labels.assign(static_cast<std::size_t>(n), -1);
  for (std::int32_t j : nonzero) out.labels[static_cast<std::size_t>(j)] = labels[static_cast<std::size_t>(j)];
  out.centroids = std::move(centroids);
  out.objective = objective;
  out.objective_trace = std::move(trace);
  out.n_iter = iter;
  return out;
}

}  // namespace

KmeansResult spherical_kmeans(const DocTermMatrix& m, std::int32_t k, int n_runs,
                              std::uint64_t seed, int max_iter) {
  if (k < 1) throw data_error("spherical_kmeans: k must be >= 1");
  if (n_runs < 1) throw data_error("spherical_kmeans: n_runs must be >= 1");

  std::vector<std::int32_t> nonzero;
  for (std::int32_t j = 0; j < m.n_docs(); ++j)
    if (m.doc_norms[static_cast<std::size_t>(j)] > 0.0) nonzero.push_back(j);
  if (static_cast<std::int32_t>(nonzero.size()) < k)
    throw data_error("spherical_kmeans: fewer nonzero documents than clusters");

  RunOutcome best;
  bool have = false;
  for (int r = 0; r < n_runs; ++r) {
    RunOutcome cand = kmeans_single_run(m, k, nonzero, Rng(Rng::derive(seed, static_cast<std::uint64_t>(r))),
                                        max_iter);
    if (!have || cand.objective < best.objective) {
      best = std::move(cand);
      have = true;
    }
  }

  KmeansResult res;
  res.labels = std::move(best.labels);
  res.centroids = std::move(best.centroids);
  res.objective = best.objective;
  res.objective_trace = std::move(best.objective_trace);
  res.n_iter = best.n_iter;
  return res;
}

}  // namespace cosmix
