#pragma once

#include <filesystem>
#include <string>

#include "cosmix/core.hpp"
#include "cosmix/mixture.hpp"
#include "cosmix/textprep.hpp"

namespace cosmix::io {

// Corpus interchange: JSON lines, one object per document with
// doc_id, text, epoch, journal (absent fields serialized as null).
void write_corpus_jsonl(const Corpus& corpus, const std::filesystem::path& path);
Corpus read_corpus_jsonl(const std::filesystem::path& path);

// Sparse triplet file: a small header (n, p, weighting, nnz), the
// vocabulary, then one `doc term value` line per stored entry.
// Values print with 17 significant digits and round-trip exactly.
void write_matrix(const DocTermMatrix& matrix, const std::filesystem::path& path);
DocTermMatrix read_matrix(const std::filesystem::path& path);

// Model (k, pi, lambda, centroids, vocabulary fingerprint, fit metadata) as
// JSON; load + classify reproduces posteriors bit-exactly.
void write_model(const MixtureModel& model, const std::filesystem::path& path);
MixtureModel read_model(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

std::string format_double(double v);  // shortest exact round-trip text

}  // namespace cosmix::io
