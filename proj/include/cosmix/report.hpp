#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cosmix/geometry.hpp"
#include "cosmix/mixture.hpp"
#include "cosmix/textprep.hpp"

namespace cosmix {

struct CohesionValue {
  double value = 0.0;
  bool estimated = false;  // sampled estimator used for very large clusters
};

// C = sqrt(1 - dbar^2), dbar the mean pairwise cosine distance over
// unordered member pairs (self-pairs excluded; singleton -> dbar 0).
// Clusters above exact_limit members use a seeded 200k-pair estimate.
CohesionValue cohesion(const DocTermMatrix& matrix, std::span<const std::int32_t> members,
                       std::size_t exact_limit = 5000, std::uint64_t seed = 0x636f68);

struct RankedTerm {
  std::string term;
  double weight = 0.0;
};

// Terms ranked by summed weight over member documents; ties lexicographic.
std::vector<RankedTerm> top_terms(const DocTermMatrix& matrix,
                                  std::span<const std::int32_t> members, std::int32_t m = 5);

struct RepresentativeDoc {
  std::int32_t doc_id = -1;
  double distance = 0.0;
};

// Member with minimal cosine distance to the centroid; ties -> lowest doc_id.
RepresentativeDoc representative_doc(const DocTermMatrix& matrix,
                                     std::span<const std::int32_t> members, const Centroid& c);

struct MdsLayout {
  std::vector<std::array<double, 2>> points;
  bool rank_deficient = false;  // second axis zeroed
};

// Classical (Torgerson) scaling of a k x k distance matrix (row-major);
// sign convention: first nonzero coordinate of each axis positive.
MdsLayout mds_from_distances(std::span<const double> distances, std::int32_t k);

// Same, over the centroids' pairwise cosine distances.
MdsLayout mds_layout(std::span<const Centroid> centroids);

struct ClusterReport {
  std::int32_t cluster = 0;
  std::int64_t size = 0;
  CohesionValue cohesion;
  std::vector<RankedTerm> terms;
  RepresentativeDoc representative;
  std::array<double, 2> layout{0.0, 0.0};
};

std::vector<ClusterReport> build_reports(const MixtureModel& model,
                                         const ClusteringResult& result,
                                         const DocTermMatrix& matrix, std::int32_t n_top_terms = 5);

// Versioned JSON report and the balloon table `cluster,x,y,size,cohesion`.
std::string reports_to_json(std::span<const ClusterReport> reports);
std::string reports_to_balloon_csv(std::span<const ClusterReport> reports);

}  // namespace cosmix
