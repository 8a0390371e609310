#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cosmix/geometry.hpp"
#include "cosmix/textprep.hpp"

// Data-parallel inner loops. The primary entry points run under OpenMP with
// each output element written by exactly one thread and cross-element
// reductions done serially in fixed order, so results are bit-identical for
// any thread count. kernels::serial holds plain-loop reference
// implementations used by the tests and the benchmark.
namespace cosmix::kernels {

// out: n x k row-major distances document -> centroid
void doc_centroid_distances(const DocTermMatrix& m, std::span<const Centroid> centroids,
                            double* out);

// Posterior responsibilities from distances via max-shifted exponentials.
// weights may contain zeros (dead components get posterior 0). Returns the
// partial log-likelihood sum_j log sum_i pi_i exp(-lambda d_ij).
double posteriors_from_distances(std::span<const double> dist, std::int32_t n, std::int32_t k,
                                 std::span<const double> weights, double lambda,
                                 double* posteriors);

// For each cluster i: out[i][h] = sum_j w(j,i) * row_j[h] / |row_j|.
// Zero rows are skipped.
void weighted_normalized_sums(const DocTermMatrix& m, std::span<const double> w, std::int32_t k,
                              std::vector<std::vector<double>>& out);

// Normalized Shannon entropy per term; terms with zero total get 0.
void term_entropy(const CscView& csc, std::int32_t n_docs, std::span<double> out);

// sum_j sum_i ratio(j,i) * exp(-lambda * gap(j,i)); scratch holds n doubles.
double calibration_lhs(std::span<const double> gaps, std::span<const double> ratios,
                       std::int32_t n, std::int32_t k, double lambda, std::span<double> scratch);

// labels[j] = argmin_i dist(j,i) with lowest-index tie-break; min_dist optional
void nearest_centroid(std::span<const double> dist, std::int32_t n, std::int32_t k,
                      std::int32_t* labels, double* min_dist);

// Mean cosine distance over all unordered member pairs (exact O(m^2)).
double mean_pairwise_distance(const DocTermMatrix& m, std::span<const std::int32_t> members);

// Distances for an explicit list of row pairs.
void pairwise_distance_batch(const DocTermMatrix& m,
                             std::span<const std::pair<std::int32_t, std::int32_t>> pairs,
                             double* out);

namespace serial {

void doc_centroid_distances(const DocTermMatrix& m, std::span<const Centroid> centroids,
                            double* out);
double posteriors_from_distances(std::span<const double> dist, std::int32_t n, std::int32_t k,
                                 std::span<const double> weights, double lambda,
                                 double* posteriors);
void weighted_normalized_sums(const DocTermMatrix& m, std::span<const double> w, std::int32_t k,
                              std::vector<std::vector<double>>& out);
void term_entropy(const CscView& csc, std::int32_t n_docs, std::span<double> out);
double calibration_lhs(std::span<const double> gaps, std::span<const double> ratios,
                       std::int32_t n, std::int32_t k, double lambda, std::span<double> scratch);
void nearest_centroid(std::span<const double> dist, std::int32_t n, std::int32_t k,
                      std::int32_t* labels, double* min_dist);
double mean_pairwise_distance(const DocTermMatrix& m, std::span<const std::int32_t> members);
void pairwise_distance_batch(const DocTermMatrix& m,
                             std::span<const std::pair<std::int32_t, std::int32_t>> pairs,
                             double* out);

}  // namespace serial

}  // namespace cosmix::kernels
