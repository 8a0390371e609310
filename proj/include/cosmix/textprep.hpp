#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cosmix/core.hpp"

namespace cosmix {

struct Vocabulary {
  std::vector<std::string> terms;  // unique, lexicographically ordered
  std::unordered_map<std::string, std::int32_t> index;

  static Vocabulary from_sorted_terms(std::vector<std::string> sorted_unique);
  std::int32_t size() const { return static_cast<std::int32_t>(terms.size()); }
  // FNV-1a over the ordered term list; binds models to their term space.
  std::uint64_t fingerprint() const;
};

enum class Weighting { raw_count, idf_weighted };

std::string to_string(Weighting w);
Weighting weighting_from_string(const std::string& s);

// Sparse n x p document-term matrix in CSR form. Stored entries are strictly
// positive; doc_norms caches the Euclidean norm of each row.
struct DocTermMatrix {
  Vocabulary vocab;
  Weighting weighting = Weighting::raw_count;
  std::vector<std::int64_t> row_start;  // n+1 offsets into cols/vals
  std::vector<std::int32_t> cols;
  std::vector<double> vals;
  std::vector<double> doc_norms;

  std::int32_t n_docs() const { return static_cast<std::int32_t>(row_start.size()) - 1; }
  std::int32_t n_terms() const { return vocab.size(); }
  std::int64_t nnz() const { return static_cast<std::int64_t>(vals.size()); }

  std::span<const std::int32_t> row_cols(std::int32_t j) const {
    return {cols.data() + row_start[j], static_cast<std::size_t>(row_start[j + 1] - row_start[j])};
  }
  std::span<const double> row_vals(std::int32_t j) const {
    return {vals.data() + row_start[j], static_cast<std::size_t>(row_start[j + 1] - row_start[j])};
  }

  void recompute_norms();
};

// Column-major companion view, built on demand for per-term passes.
struct CscView {
  std::vector<std::int64_t> col_start;  // p+1
  std::vector<std::int32_t> rows;
  std::vector<double> vals;
};

CscView transpose(const DocTermMatrix& m);

struct StopwordPolicy {
  std::unordered_set<std::string> english;
  std::unordered_set<std::string> domain;

  // Snowball English list plus the default domain words
  // (variable, statistics, analysis, data, model).
  static StopwordPolicy defaults();
  bool contains(const std::string& token) const {
    return english.count(token) > 0 || domain.count(token) > 0;
  }
};

// Lowercase alphabetic tokens; anything containing a digit is dropped,
// punctuation and non-ASCII bytes split tokens.
std::vector<std::string> tokenize(std::string_view text);

std::vector<std::string> remove_stopwords(std::vector<std::string> tokens,
                                          const StopwordPolicy& policy);

struct BuildDiagnostics {
  std::vector<std::int32_t> empty_docs;  // rows with no surviving tokens
};

// tokenize -> remove_stopwords -> stem -> drop stems shorter than 2 -> count.
DocTermMatrix build_matrix(const Corpus& corpus, const StopwordPolicy& policy,
                           BuildDiagnostics* diag = nullptr);

// ln(n / df_h) per term of a raw_count matrix; 0 for absent terms.
std::vector<double> idf_factors(const DocTermMatrix& matrix);

// entry <- count * ln(n / df); terms present in every document weight 0 and
// leave storage (the column itself stays).
DocTermMatrix apply_idf(const DocTermMatrix& matrix);

}  // namespace cosmix
