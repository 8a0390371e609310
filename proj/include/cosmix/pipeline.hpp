#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cosmix/core.hpp"

namespace cosmix::pipeline {

struct RunConfig {
  // inputs
  std::vector<std::filesystem::path> inputs;  // ingest: .bib/.ris files or a directory
  std::string input_format = "auto";          // auto | bib | ris | txt
  std::filesystem::path corpus_path;
  std::filesystem::path outdir;

  // ingest rules
  bool require_abstract = true;
  bool default_title_excludes = true;
  std::vector<std::string> extra_title_excludes;

  // preprocessing
  std::filesystem::path extra_stopwords_path;   // appended to the English list
  std::filesystem::path domain_stopwords_path;  // replaces the domain list

  // feature selection (exactly one for fit/dynamic/select)
  std::optional<double> entropy_threshold;
  std::optional<std::int32_t> top_n_terms;
  bool reweight_idf = false;

  // model
  double alpha = 0.05;
  std::optional<std::int32_t> k;
  std::int32_t k_min = 2;
  std::int32_t k_max = 20;
  std::uint64_t seed = 1;
  int kmeans_runs = 5;
  std::string lambda_mode = "fixed";  // fixed | resolve
  std::optional<double> lambda_override;
  int max_iter = 500;
  double tol = 1e-8;

  // dynamics
  double s_dashed = 0.40;
  double s_solid = 0.70;
  std::string matched_idf = "source";     // source | target
  std::string projection_lambda = "target";  // target | source
  std::vector<std::int32_t> k_per_epoch;

  void validate_selection() const;  // exactly one of threshold / top-n
  void validate_common() const;     // alpha in (0,1), k range nonempty
};

struct IngestStats {
  std::size_t files = 0;
  std::size_t records = 0;
  std::size_t kept = 0;
  std::size_t diagnostics = 0;
  std::size_t epoch_warnings = 0;
};

IngestStats run_ingest(const RunConfig& cfg);
void run_prep(const RunConfig& cfg);
void run_select(const RunConfig& cfg);
void run_calibrate(const RunConfig& cfg);
void run_fit(const RunConfig& cfg);
void run_sweep(const RunConfig& cfg);
void run_dynamic(const RunConfig& cfg);
void run_report(const RunConfig& cfg, const std::filesystem::path& model_path,
                const std::filesystem::path& matrix_path);
void run_synth(const RunConfig& cfg, const std::filesystem::path& scenario_path);

}  // namespace cosmix::pipeline
