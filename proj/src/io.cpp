#include "cosmix/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cosmix::io {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write " + path.string());
  out << content;
  if (!out) throw data_error("write failed for " + path.string());
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_corpus_jsonl(const Corpus& corpus, const std::filesystem::path& path) {
  std::ostringstream os;
  for (const auto& d : corpus.docs) {
    nlohmann::ordered_json j;
    j["doc_id"] = d.doc_id;
    j["text"] = d.text;
    if (d.epoch) j["epoch"] = *d.epoch;
    else j["epoch"] = nullptr;
    if (d.journal) j["journal"] = *d.journal;
    else j["journal"] = nullptr;
    os << j.dump() << "\n";
  }
  write_file(path, os.str());
}

Corpus read_corpus_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open " + path.string());
  Corpus corpus;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw data_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    Document d;
    d.doc_id = j.at("doc_id").get<std::int32_t>();
    d.text = j.at("text").get<std::string>();
    if (j.contains("epoch") && !j["epoch"].is_null()) d.epoch = j["epoch"].get<std::string>();
    if (j.contains("journal") && !j["journal"].is_null())
      d.journal = j["journal"].get<std::string>();
    corpus.docs.push_back(std::move(d));
  }
  return corpus;
}

void write_matrix(const DocTermMatrix& matrix, const std::filesystem::path& path) {
  std::ostringstream os;
  os << "cosmix-dtm 1\n";
  os << "n " << matrix.n_docs() << "\n";
  os << "p " << matrix.n_terms() << "\n";
  os << "weighting " << to_string(matrix.weighting) << "\n";
  os << "nnz " << matrix.nnz() << "\n";
  for (const auto& t : matrix.vocab.terms) os << "term " << t << "\n";
  for (std::int32_t j = 0; j < matrix.n_docs(); ++j) {
    for (std::int64_t e = matrix.row_start[j]; e < matrix.row_start[j + 1]; ++e) {
      os << j << " " << matrix.cols[static_cast<std::size_t>(e)] << " "
         << format_double(matrix.vals[static_cast<std::size_t>(e)]) << "\n";
    }
  }
  write_file(path, os.str());
}

DocTermMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open " + path.string());
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "cosmix-dtm" || version != 1)
    throw data_error(path.string() + ": not a cosmix-dtm v1 file");

  std::string key;
  std::int32_t n = -1, p = -1;
  std::int64_t nnz = -1;
  std::string weighting;
  for (int field = 0; field < 4; ++field) {
    if (!(in >> key)) throw data_error(path.string() + ": truncated header");
    if (key == "n") in >> n;
    else if (key == "p") in >> p;
    else if (key == "weighting") in >> weighting;
    else if (key == "nnz") in >> nnz;
    else throw data_error(path.string() + ": unexpected header field " + key);
  }
  if (n < 0 || p < 0 || nnz < 0 || weighting.empty())
    throw data_error(path.string() + ": incomplete header");

  DocTermMatrix m;
  m.weighting = weighting_from_string(weighting);
  std::vector<std::string> terms;
  terms.reserve(static_cast<std::size_t>(p));
  for (std::int32_t h = 0; h < p; ++h) {
    std::string term;
    if (!(in >> key >> term) || key != "term")
      throw data_error(path.string() + ": expected vocabulary line");
    terms.push_back(std::move(term));
  }
  m.vocab = Vocabulary::from_sorted_terms(std::move(terms));

  m.row_start.assign(static_cast<std::size_t>(n) + 1, 0);
  std::vector<std::int32_t> doc_of;
  doc_of.reserve(static_cast<std::size_t>(nnz));
  m.cols.reserve(static_cast<std::size_t>(nnz));
  m.vals.reserve(static_cast<std::size_t>(nnz));
  std::int32_t prev_doc = -1;
  std::int32_t prev_term = -1;
  for (std::int64_t e = 0; e < nnz; ++e) {
    std::int32_t doc, term;
    std::string value;
    if (!(in >> doc >> term >> value)) throw data_error(path.string() + ": truncated triplets");
    if (doc < prev_doc) throw data_error(path.string() + ": triplets out of document order");
    if (doc < 0 || doc >= n || term < 0 || term >= p)
      throw data_error(path.string() + ": triplet indices out of range");
    if (doc == prev_doc && term <= prev_term)
      throw data_error(path.string() + ": term ids must ascend within a document");
    prev_term = term;
    prev_doc = doc;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size())
      throw data_error(path.string() + ": bad triplet value '" + value + "'");
    m.cols.push_back(term);
    m.vals.push_back(v);
    ++m.row_start[static_cast<std::size_t>(doc) + 1];
  }
  for (std::int32_t j = 0; j < n; ++j)
    m.row_start[static_cast<std::size_t>(j) + 1] += m.row_start[static_cast<std::size_t>(j)];
  m.recompute_norms();
  return m;
}

namespace {

std::string lambda_mode_name(LambdaMode m) { return to_string(m); }

LambdaMode lambda_mode_from(const std::string& s) {
  if (s == "fixed") return LambdaMode::fixed;
  if (s == "resolve_each_iter") return LambdaMode::resolve_each_iter;
  throw data_error("unknown lambda mode: " + s);
}

}  // namespace

void write_model(const MixtureModel& model, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["format"] = "cosmix-model";
  j["version"] = 1;
  j["k"] = model.k;
  j["lambda"] = model.lambda;
  j["weights"] = model.weights;
  j["vocab_fingerprint"] = model.vocab_fingerprint;
  j["meta"] = {{"seed", model.meta.seed},
               {"alpha", model.meta.alpha},
               {"lambda_mode", lambda_mode_name(model.meta.lambda_mode)},
               {"init", model.meta.init},
               {"kmeans_runs", model.meta.kmeans_runs}};
  j["centroids"] = nlohmann::ordered_json::array();
  for (const auto& c : model.centroids) j["centroids"].push_back(c.v);
  write_file(path, j.dump(2) + "\n");
}

MixtureModel read_model(const std::filesystem::path& path) {
  nlohmann::json j = nlohmann::json::parse(read_file(path));
  if (j.value("format", "") != "cosmix-model" || j.value("version", 0) != 1)
    throw data_error(path.string() + ": not a cosmix-model v1 file");
  MixtureModel m;
  m.k = j.at("k").get<std::int32_t>();
  m.lambda = j.at("lambda").get<double>();
  m.weights = j.at("weights").get<std::vector<double>>();
  m.vocab_fingerprint = j.at("vocab_fingerprint").get<std::uint64_t>();
  if (j.contains("meta")) {
    m.meta.seed = j["meta"].value("seed", 0ull);
    m.meta.alpha = j["meta"].value("alpha", 0.05);
    m.meta.lambda_mode = lambda_mode_from(j["meta"].value("lambda_mode", "fixed"));
    m.meta.init = j["meta"].value("init", "kmeans");
    m.meta.kmeans_runs = j["meta"].value("kmeans_runs", 5);
  }
  for (const auto& c : j.at("centroids"))
    m.centroids.push_back(Centroid{c.get<std::vector<double>>()});
  if (static_cast<std::int32_t>(m.centroids.size()) != m.k ||
      static_cast<std::int32_t>(m.weights.size()) != m.k)
    throw data_error(path.string() + ": inconsistent model dimensions");
  return m;
}

}  // namespace cosmix::io
