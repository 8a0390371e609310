#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cosmix/textprep.hpp"

namespace cosmix {

// Normalized Shannon entropy per term: the term's distribution over
// documents, scaled by 1/ln n into [0,1]. Requires n >= 2.
std::vector<double> term_entropy(const DocTermMatrix& matrix);

// Keep columns with entropy >= tau; vocabulary reindexed, norms recomputed.
DocTermMatrix select_by_threshold(const DocTermMatrix& matrix, std::span<const double> entropy,
                                  double tau);

struct TopNSelection {
  DocTermMatrix matrix;
  bool truncated_to_all = false;  // n_terms exceeded p; everything kept
};

// Keep the n_terms highest-entropy columns; ties broken lexicographically
// (the lexicographically smaller term wins at the cut).
TopNSelection select_top_n(const DocTermMatrix& matrix, std::span<const double> entropy,
                           std::int32_t n_terms);

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::int64_t count = 0;
};

std::vector<HistogramBin> entropy_histogram(std::span<const double> entropy, int n_bins = 20);

}  // namespace cosmix
