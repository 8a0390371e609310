#include "cosmix/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cosmix/kernels.hpp"
#include "cosmix/rng.hpp"

namespace cosmix {

std::string to_string(LambdaMode m) {
  return m == LambdaMode::fixed ? "fixed" : "resolve_each_iter";
}

std::vector<std::int32_t> hard_labels_from_posteriors(std::span<const double> posteriors,
                                                      std::int32_t n, std::int32_t k) {
  std::vector<std::int32_t> labels(static_cast<std::size_t>(n));
  for (std::int32_t j = 0; j < n; ++j) {
    const double* row = posteriors.data() + static_cast<std::int64_t>(j) * k;
    std::int32_t best = 0;
    for (std::int32_t i = 1; i < k; ++i)
      if (row[i] > row[best]) best = i;
    labels[static_cast<std::size_t>(j)] = best;
  }
  return labels;
}

double alpha_from_distances(std::span<const double> distances, std::span<const double> weights,
                            double lambda) {
  const std::int32_t k = static_cast<std::int32_t>(distances.size());
  std::int32_t near = 0;
  for (std::int32_t i = 1; i < k; ++i)
    if (distances[i] < distances[near]) near = i;
  double s = 0.0;
  for (std::int32_t i = 0; i < k; ++i)
    s += weights[i] * std::exp(-lambda * (distances[i] - distances[near]));
  return (s - weights[near]) / s;
}

double per_doc_alpha(const MixtureModel& model, const DocTermMatrix& matrix, std::int32_t j) {
  if (model.vocab_fingerprint != matrix.vocab.fingerprint())
    throw data_error("per_doc_alpha: model and matrix vocabularies differ");
  std::vector<double> d(static_cast<std::size_t>(model.k));
  for (std::int32_t i = 0; i < model.k; ++i)
    d[static_cast<std::size_t>(i)] = row_centroid_distance(matrix, j, model.centroids[static_cast<std::size_t>(i)]);
  return alpha_from_distances(d, model.weights, model.lambda);
}

double solve_lambda(std::span<const double> distances, std::int32_t n, std::int32_t k,
                    std::span<const double> weights, CalibrationTarget target) {
  if (k < 2) throw numeric_error("lambda undefined for single component");
  if (!(target.alpha > 0.0 && target.alpha < 1.0))
    throw data_error("solve_lambda: alpha must lie in (0,1)");

  std::vector<double> gaps(static_cast<std::size_t>(n) * static_cast<std::size_t>(k));
  std::vector<double> ratios(static_cast<std::size_t>(n) * static_cast<std::size_t>(k));
  for (std::int32_t j = 0; j < n; ++j) {
    const double* row = distances.data() + static_cast<std::int64_t>(j) * k;
    std::int32_t near = 0;
    for (std::int32_t i = 1; i < k; ++i)
      if (row[i] < row[near]) near = i;
    double wn = weights[near];
    if (!(wn > 0.0)) throw numeric_error("solve_lambda: nearest component has zero weight");
    for (std::int32_t i = 0; i < k; ++i) {
      gaps[static_cast<std::int64_t>(j) * k + i] = row[i] - row[near];
      ratios[static_cast<std::int64_t>(j) * k + i] = weights[i] / wn;
    }
  }

  std::vector<double> scratch(static_cast<std::size_t>(n));
  auto lhs = [&](double lambda) {
    return kernels::calibration_lhs(gaps, ratios, n, k, lambda, scratch);
  };

  const double tgt = static_cast<double>(n) / (1.0 - target.alpha);
  const double lhs0 = lhs(0.0);
  if (lhs0 <= tgt) {
    double attainable = 1.0 - static_cast<double>(n) / lhs0;
    std::ostringstream msg;
    msg << "corpus too concentrated for requested alpha " << target.alpha
        << "; attainable alpha must be below " << attainable;
    throw numeric_error(msg.str());
  }

  double lo = 0.0;
  double hi = 1.0;
  while (lhs(hi) > tgt) {
    hi *= 2.0;
    if (hi > 1e12)
      throw numeric_error(
          "calibration equation has no root below 1e12 (tied nearest distances keep it above "
          "target)");
  }
  // LHS is nonincreasing in lambda, so the bracketed root is unique
  while (hi - lo > 1e-12 * hi) {
    double mid = 0.5 * (lo + hi);
    if (lhs(mid) > tgt) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

EStepOut e_step(const MixtureModel& model, const DocTermMatrix& matrix) {
  if (model.vocab_fingerprint != matrix.vocab.fingerprint())
    throw data_error("e_step: model and matrix vocabularies differ");
  const std::int32_t n = matrix.n_docs();
  const std::int32_t k = model.k;
  EStepOut out;
  out.distances.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(k));
  kernels::doc_centroid_distances(matrix, model.centroids, out.distances.data());
  out.posteriors.resize(out.distances.size());
  out.partial_loglik = kernels::posteriors_from_distances(out.distances, n, k, model.weights,
                                                          model.lambda, out.posteriors.data());
  return out;
}

MStepOut m_step(const DocTermMatrix& matrix, std::span<const double> posteriors, std::int32_t k,
                CalibrationTarget target, LambdaMode mode, double current_lambda, int iteration) {
  const std::int32_t n = matrix.n_docs();
  MStepOut out;
  out.weights.assign(static_cast<std::size_t>(k), 0.0);
  for (std::int32_t j = 0; j < n; ++j)
    for (std::int32_t i = 0; i < k; ++i)
      out.weights[static_cast<std::size_t>(i)] += posteriors[static_cast<std::int64_t>(j) * k + i];
  for (std::int32_t i = 0; i < k; ++i) {
    if (out.weights[static_cast<std::size_t>(i)] < 1e-12) {
      std::ostringstream msg;
      msg << "component " << i << " collapsed (posterior mass "
          << out.weights[static_cast<std::size_t>(i)] << ")";
      if (iteration >= 0) msg << " at iteration " << iteration;
      throw numeric_error(msg.str());
    }
  }

  std::vector<std::vector<double>> sums;
  kernels::weighted_normalized_sums(matrix, posteriors, k, sums);
  out.centroids.reserve(static_cast<std::size_t>(k));
  for (std::int32_t i = 0; i < k; ++i)
    out.centroids.push_back(Centroid::from_unnormalized(std::move(sums[static_cast<std::size_t>(i)])));

  for (std::int32_t i = 0; i < k; ++i)
    out.weights[static_cast<std::size_t>(i)] /= static_cast<double>(n);

  if (mode == LambdaMode::resolve_each_iter) {
    std::vector<double> dist(static_cast<std::size_t>(n) * static_cast<std::size_t>(k));
    kernels::doc_centroid_distances(matrix, out.centroids, dist.data());
    out.lambda = solve_lambda(dist, n, k, out.weights, target);
  } else {
    out.lambda = current_lambda;
  }
  return out;
}

EmFit fit_em(const DocTermMatrix& matrix, std::int32_t k, CalibrationTarget target,
             const EmInit& init, const EmOptions& options) {
  if (k < 2) throw data_error("fit_em: k must be >= 2");
  if (matrix.weighting != Weighting::idf_weighted)
    throw data_error("fit_em: matrix must be idf_weighted");
  if (options.lambda_mode == LambdaMode::fixed && !(options.fixed_lambda > 0.0))
    throw data_error("fit_em: fixed lambda mode requires a positive lambda");

  const std::int32_t n = matrix.n_docs();

  std::vector<std::int32_t> labels;
  if (init.labels) {
    labels = *init.labels;
    if (static_cast<std::int32_t>(labels.size()) != n)
      throw data_error("fit_em: init label length mismatch");
  } else {
    labels = spherical_kmeans(matrix, k, init.kmeans_runs, Rng::derive(options.seed, 0x6b6d)).labels;
  }

  // one-hot initial responsibilities; unassigned zero rows start uniform
  std::vector<double> posteriors(static_cast<std::size_t>(n) * static_cast<std::size_t>(k), 0.0);
  for (std::int32_t j = 0; j < n; ++j) {
    std::int32_t lab = labels[static_cast<std::size_t>(j)];
    if (lab >= 0 && lab < k) {
      posteriors[static_cast<std::int64_t>(j) * k + lab] = 1.0;
    } else {
      for (std::int32_t i = 0; i < k; ++i)
        posteriors[static_cast<std::int64_t>(j) * k + i] = 1.0 / static_cast<double>(k);
    }
  }

  MixtureModel model;
  model.k = k;
  model.lambda = options.fixed_lambda;
  model.vocab_fingerprint = matrix.vocab.fingerprint();
  model.meta.seed = options.seed;
  model.meta.alpha = target.alpha;
  model.meta.lambda_mode = options.lambda_mode;
  model.meta.init = init.labels ? "labels" : "kmeans";
  model.meta.kmeans_runs = init.kmeans_runs;

  ClusteringResult result;
  result.k = k;
  double prev_pll = -std::numeric_limits<double>::infinity();
  bool converged = false;
  int iter = 0;

  for (iter = 1; iter <= options.max_iter; ++iter) {
    MStepOut ms = m_step(matrix, posteriors, k, target, options.lambda_mode, model.lambda, iter);
    model.centroids = std::move(ms.centroids);
    model.weights = std::move(ms.weights);
    model.lambda = ms.lambda;

    EStepOut es = e_step(model, matrix);
    posteriors = std::move(es.posteriors);
    result.partial_loglik = es.partial_loglik;

    if (iter > 1) {
      double denom = std::max(1.0, std::abs(prev_pll));
      // the EM guarantee holds only while lambda stays put
      if (options.lambda_mode == LambdaMode::fixed &&
          result.partial_loglik < prev_pll - 1e-8 * denom)
        throw numeric_error("EM log-likelihood decreased under fixed lambda");
      if (std::abs(result.partial_loglik - prev_pll) / denom < options.tol) {
        converged = true;
        break;
      }
    }
    prev_pll = result.partial_loglik;
  }

  result.posteriors = std::move(posteriors);
  result.hard_labels = hard_labels_from_posteriors(result.posteriors, n, k);
  result.n_iterations = std::min(iter, options.max_iter);
  result.converged = converged;
  return {std::move(model), std::move(result)};
}

LambdaAverage average_lambda_over_k(const DocTermMatrix& matrix, std::int32_t k_lo,
                                    std::int32_t k_hi, CalibrationTarget target,
                                    std::uint64_t seed, int n_runs) {
  if (k_lo > k_hi || k_lo < 2) throw data_error("average_lambda_over_k: bad k range");
  LambdaAverage out;
  double sum = 0.0;
  for (std::int32_t k = k_lo; k <= k_hi; ++k) {
    try {
      KmeansResult km = spherical_kmeans(matrix, k, n_runs, Rng::derive(seed, static_cast<std::uint64_t>(k)));
      // calibration runs over assigned (nonzero) rows only
      std::vector<std::int32_t> assigned;
      for (std::int32_t j = 0; j < matrix.n_docs(); ++j)
        if (km.labels[static_cast<std::size_t>(j)] >= 0) assigned.push_back(j);
      const std::int32_t na = static_cast<std::int32_t>(assigned.size());

      std::vector<double> pi(static_cast<std::size_t>(k), 0.0);
      for (std::int32_t j : assigned)
        pi[static_cast<std::size_t>(km.labels[static_cast<std::size_t>(j)])] += 1.0;
      for (double& w : pi) w /= static_cast<double>(na);

      std::vector<double> dist_all(static_cast<std::size_t>(matrix.n_docs()) *
                                   static_cast<std::size_t>(k));
      kernels::doc_centroid_distances(matrix, km.centroids, dist_all.data());
      std::vector<double> dist(static_cast<std::size_t>(na) * static_cast<std::size_t>(k));
      for (std::int32_t a = 0; a < na; ++a)
        for (std::int32_t i = 0; i < k; ++i)
          dist[static_cast<std::int64_t>(a) * k + i] =
              dist_all[static_cast<std::int64_t>(assigned[static_cast<std::size_t>(a)]) * k + i];

      double lambda = solve_lambda(dist, na, k, pi, target);
      out.per_k.emplace_back(k, lambda);
      sum += lambda;
    } catch (const numeric_error&) {
      out.skipped.push_back(k);
    } catch (const data_error&) {
      out.skipped.push_back(k);
    }
  }
  if (out.per_k.empty())
    throw numeric_error("lambda calibration failed for every k in the range");
  out.lambda_bar = sum / static_cast<double>(out.per_k.size());
  return out;
}

InfoCriteria information_criteria(const ClusteringResult& result, const MixtureModel& model,
                                  std::int64_t n, std::int64_t p) {
  InfoCriteria ic;
  ic.dof = (model.k - 1) + static_cast<std::int64_t>(model.k) * (p - 1);
  ic.aic = -2.0 * result.partial_loglik + 2.0 * static_cast<double>(ic.dof);
  ic.bic = -2.0 * result.partial_loglik +
           static_cast<double>(ic.dof) * std::log(static_cast<double>(n));
  return ic;
}

std::int32_t best_k_by_aic(std::span<const SweepEntry> entries) {
  if (entries.empty()) throw data_error("best_k_by_aic: no entries");
  for (const auto& e : entries) {
    if (e.lambda != entries[0].lambda)
      throw numeric_error("criteria invalid across differing lambda");
    if (e.vocab_fingerprint != entries[0].vocab_fingerprint)
      throw data_error("criteria invalid across differing vocabularies");
  }
  const SweepEntry* best = &entries[0];
  for (const auto& e : entries)
    if (e.ic.aic < best->ic.aic) best = &e;
  return best->k;
}

}  // namespace cosmix
