#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cosmix/geometry.hpp"
#include "cosmix/textprep.hpp"

namespace cosmix {

struct CalibrationTarget {
  double alpha = 0.05;  // inconsistent clustering rate, in (0,1)
};

enum class LambdaMode { resolve_each_iter, fixed };

std::string to_string(LambdaMode m);

struct FitMeta {
  std::uint64_t seed = 0;
  double alpha = 0.05;
  LambdaMode lambda_mode = LambdaMode::fixed;
  std::string init = "kmeans";
  int kmeans_runs = 5;
};

// Mixture of k cosine-distance densities: pi_i * exp(-lambda d(y, xi_i)),
// normalization left implicit (it cancels from every quantity used here).
struct MixtureModel {
  std::int32_t k = 0;
  std::vector<Centroid> centroids;
  std::vector<double> weights;  // sums to 1, strictly positive
  double lambda = 0.0;
  std::uint64_t vocab_fingerprint = 0;
  FitMeta meta;
};

struct ClusteringResult {
  std::int32_t k = 0;
  std::vector<double> posteriors;  // n x k row-major, rows sum to 1
  std::vector<std::int32_t> hard_labels;  // argmax per row, lowest index on ties
  double partial_loglik = 0.0;  // sum_j log sum_i pi_i exp(-lambda d_ij)
  int n_iterations = 0;
  bool converged = false;

  std::int32_t n_docs() const {
    return k == 0 ? 0 : static_cast<std::int32_t>(hard_labels.size());
  }
};

std::vector<std::int32_t> hard_labels_from_posteriors(std::span<const double> posteriors,
                                                      std::int32_t n, std::int32_t k);

// Inconsistent clustering rate of one document under the model:
// (S - pi_i') / S with S = sum_i pi_i exp(-lambda (d_i - d_i')).
double per_doc_alpha(const MixtureModel& model, const DocTermMatrix& matrix, std::int32_t j);
double alpha_from_distances(std::span<const double> distances, std::span<const double> weights,
                            double lambda);

// Solves sum_j sum_i (pi_i/pi_i') exp(-lambda (d_ij - d_i'j)) = n/(1-alpha)
// by bracketed bisection; the left side is nonincreasing in lambda.
double solve_lambda(std::span<const double> distances, std::int32_t n, std::int32_t k,
                    std::span<const double> weights, CalibrationTarget target);

struct EStepOut {
  std::vector<double> posteriors;
  std::vector<double> distances;  // n x k, reusable by the caller
  double partial_loglik = 0.0;
};

EStepOut e_step(const MixtureModel& model, const DocTermMatrix& matrix);

struct MStepOut {
  std::vector<Centroid> centroids;
  std::vector<double> weights;
  double lambda = 0.0;
};

// pi from posterior column sums, centroids as weighted spherical means,
// lambda re-solved from the new centroids' distances in resolve mode.
MStepOut m_step(const DocTermMatrix& matrix, std::span<const double> posteriors, std::int32_t k,
                CalibrationTarget target, LambdaMode mode, double current_lambda,
                int iteration = -1);

struct EmInit {
  // spherical k-means init by default; explicit labels override it
  std::optional<std::vector<std::int32_t>> labels;
  int kmeans_runs = 5;
};

struct EmOptions {
  LambdaMode lambda_mode = LambdaMode::fixed;
  double fixed_lambda = 0.0;  // required in fixed mode
  int max_iter = 500;
  double tol = 1e-8;  // relative partial_loglik change
  std::uint64_t seed = 0;
};

struct EmFit {
  MixtureModel model;
  ClusteringResult result;
};

EmFit fit_em(const DocTermMatrix& matrix, std::int32_t k, CalibrationTarget target,
             const EmInit& init, const EmOptions& options);

struct LambdaAverage {
  double lambda_bar = 0.0;
  std::vector<std::pair<std::int32_t, double>> per_k;
  std::vector<std::int32_t> skipped;  // k values whose equation had no root
};

// k-means for each k in [k_lo, k_hi], hard proportions as pi, solve lambda
// at the target rate, arithmetic mean of the successes.
LambdaAverage average_lambda_over_k(const DocTermMatrix& matrix, std::int32_t k_lo,
                                    std::int32_t k_hi, CalibrationTarget target,
                                    std::uint64_t seed, int n_runs = 5);

struct InfoCriteria {
  double aic = 0.0;
  double bic = 0.0;
  std::int64_t dof = 0;
};

// dof = (k-1) + k(p-1); valid for comparison only across fits sharing
// lambda, n and vocabulary.
InfoCriteria information_criteria(const ClusteringResult& result, const MixtureModel& model,
                                  std::int64_t n, std::int64_t p);

struct SweepEntry {
  std::int32_t k = 0;
  double lambda = 0.0;
  std::uint64_t vocab_fingerprint = 0;
  double partial_loglik = 0.0;
  InfoCriteria ic;
};

// Verifies the entries are comparable (same lambda and vocabulary) and
// returns the k with minimal AIC; throws on mixed-lambda comparison.
std::int32_t best_k_by_aic(std::span<const SweepEntry> entries);

}  // namespace cosmix
