#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cosmix/textprep.hpp"

namespace cosmix {

// Dense nonnegative direction vector of unit Euclidean norm.
struct Centroid {
  std::vector<double> v;

  std::int32_t dim() const { return static_cast<std::int32_t>(v.size()); }
  // Normalizes raw to unit norm; throws numeric_error when raw is all zero.
  static Centroid from_unnormalized(std::vector<double> raw);
};

// d = 1 - <x,y>/(|x||y|); all-zero operand -> 1 by convention (and the
// process-wide zero-distance counter is bumped).
double cosine_distance(std::span<const double> x, std::span<const double> y);

// sparse row vs unit centroid
double row_centroid_distance(const DocTermMatrix& m, std::int32_t j, const Centroid& c);

// sparse row vs sparse row (column ids ascend within each row)
double row_row_distance(const DocTermMatrix& m, std::int32_t a, std::int32_t b);

std::uint64_t zero_distance_count();
void reset_zero_distance_count();

// argmin_xi sum_j w_j d(y_j, xi): normalize rows, weighted sum, normalize.
// Zero rows contribute nothing; throws numeric_error("degenerate cluster")
// when nothing remains.
Centroid spherical_mean(const DocTermMatrix& m, std::span<const double> weights);

struct KmeansResult {
  std::vector<std::int32_t> labels;  // -1 marks zero rows left unassigned
  std::vector<Centroid> centroids;
  double objective = 0.0;  // sum of distances of assigned rows to their centroid
  std::vector<double> objective_trace;  // per iteration, non-increasing
  int n_iter = 0;
};

// Lloyd iterations under cosine distance with k-means++-style seeding,
// best of n_runs seeded starts. Empty clusters are reseeded from the row
// farthest from its current centroid.
KmeansResult spherical_kmeans(const DocTermMatrix& m, std::int32_t k, int n_runs,
                              std::uint64_t seed, int max_iter = 100);

}  // namespace cosmix
