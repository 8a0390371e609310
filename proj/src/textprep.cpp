#include "cosmix/textprep.hpp"

#include <cctype>
#include <cmath>
#include <map>

#include "cosmix/porter.hpp"

namespace cosmix {

Vocabulary Vocabulary::from_sorted_terms(std::vector<std::string> sorted_unique) {
  Vocabulary v;
  v.terms = std::move(sorted_unique);
  for (std::size_t i = 1; i < v.terms.size(); ++i)
    if (!(v.terms[i - 1] < v.terms[i]))
      throw data_error("vocabulary terms must be unique and lexicographically ordered");
  v.index.reserve(v.terms.size());
  for (std::size_t i = 0; i < v.terms.size(); ++i)
    v.index.emplace(v.terms[i], static_cast<std::int32_t>(i));
  return v;
}

std::uint64_t Vocabulary::fingerprint() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 1099511628211ull;
  };
  for (const auto& t : terms) {
    for (char c : t) mix(static_cast<unsigned char>(c));
    mix(0x1f);  // separator
  }
  return h;
}

std::string to_string(Weighting w) {
  return w == Weighting::raw_count ? "raw_count" : "idf_weighted";
}

Weighting weighting_from_string(const std::string& s) {
  if (s == "raw_count") return Weighting::raw_count;
  if (s == "idf_weighted") return Weighting::idf_weighted;
  throw data_error("unknown weighting: " + s);
}

void DocTermMatrix::recompute_norms() {
  const std::int32_t n = n_docs();
  doc_norms.assign(static_cast<std::size_t>(n), 0.0);
  for (std::int32_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (double v : row_vals(j)) s += v * v;
    doc_norms[static_cast<std::size_t>(j)] = std::sqrt(s);
  }
}

CscView transpose(const DocTermMatrix& m) {
  CscView t;
  const std::int32_t p = m.n_terms();
  t.col_start.assign(static_cast<std::size_t>(p) + 1, 0);
  for (std::int32_t c : m.cols) ++t.col_start[static_cast<std::size_t>(c) + 1];
  for (std::int32_t h = 0; h < p; ++h)
    t.col_start[static_cast<std::size_t>(h) + 1] += t.col_start[static_cast<std::size_t>(h)];
  t.rows.resize(m.vals.size());
  t.vals.resize(m.vals.size());
  std::vector<std::int64_t> fill(t.col_start.begin(), t.col_start.end() - 1);
  for (std::int32_t j = 0; j < m.n_docs(); ++j) {
    for (std::int64_t e = m.row_start[j]; e < m.row_start[j + 1]; ++e) {
      std::int64_t slot = fill[static_cast<std::size_t>(m.cols[static_cast<std::size_t>(e)])]++;
      t.rows[static_cast<std::size_t>(slot)] = j;
      t.vals[static_cast<std::size_t>(slot)] = m.vals[static_cast<std::size_t>(e)];
    }
  }
  return t;
}

namespace {

// Snowball English stopword list.
const char* const kEnglishStopwords[] = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your",
    "yours", "yourself", "yourselves", "he", "him", "his", "himself", "she",
    "her", "hers", "herself", "it", "its", "itself", "they", "them", "their",
    "theirs", "themselves", "what", "which", "who", "whom", "this", "that",
    "these", "those", "am", "is", "are", "was", "were", "be", "been", "being",
    "have", "has", "had", "having", "do", "does", "did", "doing", "would",
    "should", "could", "ought", "a", "an", "the", "and", "but", "if", "or",
    "because", "as", "until", "while", "of", "at", "by", "for", "with",
    "about", "against", "between", "into", "through", "during", "before",
    "after", "above", "below", "to", "from", "up", "down", "in", "out", "on",
    "off", "over", "under", "again", "further", "then", "once", "here",
    "there", "when", "where", "why", "how", "all", "any", "both", "each",
    "few", "more", "most", "other", "some", "such", "no", "nor", "not",
    "only", "own", "same", "so", "than", "too", "very", "can", "will",
    "just", "don", "now", "also"};

const char* const kDomainStopwords[] = {"variable", "statistics", "analysis",
                                        "data", "model"};

}  // namespace

StopwordPolicy StopwordPolicy::defaults() {
  StopwordPolicy p;
  for (const char* w : kEnglishStopwords) p.english.insert(w);
  for (const char* w : kDomainStopwords) p.domain.insert(w);
  return p;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  bool has_digit = false;
  auto flush = [&] {
    if (!cur.empty() && !has_digit) out.push_back(cur);
    cur.clear();
    has_digit = false;
  };
  for (char c : text) {
    unsigned char u = static_cast<unsigned char>(c);
    if (u < 0x80 && std::isalpha(u)) {
      cur.push_back(static_cast<char>(std::tolower(u)));
    } else if (u < 0x80 && std::isdigit(u)) {
      cur.push_back(c);
      has_digit = true;
    } else {
      flush();
    }
  }
  flush();
  return out;
}

std::vector<std::string> remove_stopwords(std::vector<std::string> tokens,
                                          const StopwordPolicy& policy) {
  std::erase_if(tokens, [&](const std::string& t) { return policy.contains(t); });
  return tokens;
}

DocTermMatrix build_matrix(const Corpus& corpus, const StopwordPolicy& policy,
                           BuildDiagnostics* diag) {
  const std::int32_t n = static_cast<std::int32_t>(corpus.docs.size());
  if (n == 0) throw data_error("build_matrix: empty corpus");

  // per-document stem counts; map keeps term order deterministic
  std::vector<std::map<std::string, double>> counts(static_cast<std::size_t>(n));
  for (std::int32_t j = 0; j < n; ++j) {
    auto tokens = remove_stopwords(tokenize(corpus.docs[static_cast<std::size_t>(j)].text), policy);
    auto& row = counts[static_cast<std::size_t>(j)];
    for (auto& tok : tokens) {
      std::string s = porter_stem(tok);
      if (s.size() < 2) continue;
      row[std::move(s)] += 1.0;
    }
    if (row.empty() && diag) diag->empty_docs.push_back(j);
  }

  std::vector<std::string> terms;
  {
    std::map<std::string, bool> seen;
    for (const auto& row : counts)
      for (const auto& [t, c] : row) seen.emplace(t, true);
    terms.reserve(seen.size());
    for (auto& [t, unused] : seen) terms.push_back(t);
  }

  DocTermMatrix m;
  m.vocab = Vocabulary::from_sorted_terms(std::move(terms));
  m.weighting = Weighting::raw_count;
  m.row_start.assign(static_cast<std::size_t>(n) + 1, 0);
  for (std::int32_t j = 0; j < n; ++j) {
    const auto& row = counts[static_cast<std::size_t>(j)];
    m.row_start[static_cast<std::size_t>(j) + 1] =
        m.row_start[static_cast<std::size_t>(j)] + static_cast<std::int64_t>(row.size());
    // map iterates terms lexicographically, which is exactly vocab order,
    // so column ids ascend within the row
    for (const auto& [t, c] : row) {
      m.cols.push_back(m.vocab.index.at(t));
      m.vals.push_back(c);
    }
  }
  m.recompute_norms();
  return m;
}

std::vector<double> idf_factors(const DocTermMatrix& matrix) {
  if (matrix.weighting != Weighting::raw_count)
    throw data_error("idf_factors: expected raw counts");
  const std::int32_t n = matrix.n_docs();
  const std::int32_t p = matrix.n_terms();
  std::vector<std::int32_t> df(static_cast<std::size_t>(p), 0);
  for (std::int32_t c : matrix.cols) ++df[static_cast<std::size_t>(c)];
  std::vector<double> idf(static_cast<std::size_t>(p), 0.0);
  for (std::int32_t h = 0; h < p; ++h) {
    if (df[static_cast<std::size_t>(h)] > 0)
      idf[static_cast<std::size_t>(h)] =
          std::log(static_cast<double>(n) / static_cast<double>(df[static_cast<std::size_t>(h)]));
  }
  return idf;
}

DocTermMatrix apply_idf(const DocTermMatrix& matrix) {
  if (matrix.weighting != Weighting::raw_count)
    throw data_error("apply_idf: matrix already idf_weighted");
  const std::int32_t n = matrix.n_docs();
  std::vector<double> idf = idf_factors(matrix);

  DocTermMatrix out;
  out.vocab = matrix.vocab;
  out.weighting = Weighting::idf_weighted;
  out.row_start.assign(static_cast<std::size_t>(n) + 1, 0);
  out.cols.reserve(matrix.cols.size());
  out.vals.reserve(matrix.vals.size());
  for (std::int32_t j = 0; j < n; ++j) {
    for (std::int64_t e = matrix.row_start[j]; e < matrix.row_start[j + 1]; ++e) {
      std::int32_t h = matrix.cols[static_cast<std::size_t>(e)];
      double w = matrix.vals[static_cast<std::size_t>(e)] * idf[static_cast<std::size_t>(h)];
      if (w > 0.0) {
        out.cols.push_back(h);
        out.vals.push_back(w);
      }
    }
    out.row_start[static_cast<std::size_t>(j) + 1] = static_cast<std::int64_t>(out.cols.size());
  }
  out.recompute_norms();
  return out;
}

}  // namespace cosmix
