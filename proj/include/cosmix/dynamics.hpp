#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cosmix/geometry.hpp"
#include "cosmix/textprep.hpp"

namespace cosmix {

// Which document frequencies weight the matched matrix: the source epoch's
// own (default, avoids leaking future statistics) or the target epoch's.
enum class MatchedIdf { source, target };

struct MatchedMatrix {
  DocTermMatrix raw;     // carried counts over the target vocabulary
  DocTermMatrix matrix;  // idf-weighted, columns exactly the target vocabulary
  std::vector<std::int32_t> provenance;  // new column -> old column, -1 = added-zero
  std::vector<std::int32_t> zeroed_docs;  // rows that lost every term
};

// Re-expresses epoch-t raw counts over the next epoch's vocabulary: shared
// columns carried over, vanished columns dropped, new columns all-zero.
// target mode weights with the supplied per-term idf factors.
MatchedMatrix match_vocabulary(const DocTermMatrix& raw_t, const Vocabulary& vocab_next,
                               MatchedIdf mode = MatchedIdf::source,
                               std::span<const double> target_idf = {});

struct SemisupFit {
  std::vector<double> pi;
  std::vector<double> posteriors;  // n_t x k for the unlabeled docs
  std::vector<std::int32_t> projected_labels;
  double objective = 0.0;  // log-likelihood minus the normalization constant
  std::vector<double> objective_trace;
  int n_iterations = 0;
  bool converged = false;
};

// EM over the mixing weights only; centroids and lambda stay fixed. Labeled
// documents enter through their class counts, unlabeled ones through
// posterior responsibilities. Components may die (pi -> 0) without error.
SemisupFit fit_semisupervised(const DocTermMatrix& matched, const DocTermMatrix& labeled_matrix,
                              std::span<const std::int32_t> labels,
                              std::span<const Centroid> centroids, double lambda,
                              int max_iter = 500, double tol = 1e-10);

struct MigrationMatrix {
  std::int32_t k_from = 0;
  std::int32_t k_to = 0;
  std::vector<std::int64_t> counts;   // k_from x k_to row-major
  std::vector<double> fractions;      // rows sum to 1; empty rows all zero
  std::vector<std::int32_t> empty_rows;

  std::int64_t count(std::int32_t u, std::int32_t v) const {
    return counts[static_cast<std::size_t>(u) * static_cast<std::size_t>(k_to) + static_cast<std::size_t>(v)];
  }
  double fraction(std::int32_t u, std::int32_t v) const {
    return fractions[static_cast<std::size_t>(u) * static_cast<std::size_t>(k_to) + static_cast<std::size_t>(v)];
  }
};

MigrationMatrix migration_matrix(std::span<const std::int32_t> labels_t,
                                 std::span<const std::int32_t> projected, std::int32_t k_t,
                                 std::int32_t k_next);

struct GraphNode {
  int epoch = 0;
  std::int32_t cluster = 0;
  std::int64_t size = 0;
  std::string label;
};

struct GraphEdge {
  int epoch_from = 0;
  std::int32_t from = 0;
  std::int32_t to = 0;
  double fraction = 0.0;
  bool solid = false;
};

struct MigrationGraph {
  std::vector<std::string> epoch_labels;
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;
  double s_dashed = 0.40;
  double s_solid = 0.70;
  std::vector<std::pair<int, std::int32_t>> born;   // no incoming edge
  std::vector<std::pair<int, std::int32_t>> dying;  // no outgoing edge
};

struct EpochClusters {
  std::string epoch_label;
  std::vector<std::int64_t> sizes;
  std::vector<std::string> labels;  // optional display names
};

// Edge u->v iff f_uv >= s_dashed, solid iff f_uv >= s_solid (both closed).
MigrationGraph build_evolution_graph(std::span<const EpochClusters> epochs,
                                     std::span<const MigrationMatrix> migrations,
                                     double s_dashed = 0.40, double s_solid = 0.70);

std::string graph_to_dot(const MigrationGraph& g);
std::string graph_to_json(const MigrationGraph& g, std::span<const MigrationMatrix> migrations);

}  // namespace cosmix
