#include <omp.h>

#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cosmix/core.hpp"
#include "cosmix/pipeline.hpp"

using cosmix::pipeline::RunConfig;

namespace {

// Gathered CLI state; values move into RunConfig after parsing so that
// key=value config files can fill whatever the command line left unset.
struct CliState {
  RunConfig cfg;
  int threads = 0;
  double tau = 0.0;
  double lambda_override = 0.0;
  std::int32_t topn = 0;
  std::int32_t k = 0;
  std::string config_path;
  std::string scenario;
  std::string model_path;
  std::string matrix_path;
};

void add_common(CLI::App* cmd, CliState& st) {
  cmd->add_option("--threads", st.threads, "worker thread cap (0 = all cores)");
  cmd->add_option("--seed", st.cfg.seed, "root seed for all randomness");
  cmd->add_option("--config", st.config_path, "key=value configuration file; flags win");
}

void add_selection(CLI::App* cmd, CliState& st) {
  auto* a = cmd->add_option("--entropy-threshold", st.tau, "keep terms with entropy >= tau");
  auto* b = cmd->add_option("--top-n", st.topn, "keep the n highest-entropy terms");
  a->excludes(b);
}

void add_model_opts(CLI::App* cmd, CliState& st) {
  cmd->add_option("--alpha", st.cfg.alpha, "target inconsistent clustering rate");
  cmd->add_option("--k-min", st.cfg.k_min, "smallest k for calibration/sweeps");
  cmd->add_option("--k-max", st.cfg.k_max, "largest k for calibration/sweeps");
  cmd->add_option("--kmeans-runs", st.cfg.kmeans_runs, "seeded k-means restarts");
  cmd->add_option("--lambda-mode", st.cfg.lambda_mode, "fixed | resolve");
  cmd->add_option("--max-iter", st.cfg.max_iter, "EM iteration cap");
  cmd->add_option("--tol", st.cfg.tol, "relative log-likelihood tolerance");
  cmd->add_option("--stopwords", st.cfg.extra_stopwords_path, "extra English stopwords file");
  cmd->add_option("--domain-stopwords", st.cfg.domain_stopwords_path,
                  "file replacing the domain stopword list");
  cmd->add_flag("--reweight-idf", st.cfg.reweight_idf,
                "recompute idf after column selection (coincides for ln-idf)");
}

std::vector<std::int32_t> parse_int_list(const std::string& text) {
  std::vector<std::int32_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  return out;
}

// TOML-like `key = value` lines; '#' starts a comment. A key is applied only
// when the matching flag was absent from the command line.
void apply_config_file(CLI::App* sub, CliState& st) {
  if (st.config_path.empty()) return;
  std::ifstream in(st.config_path);
  if (!in) throw cosmix::data_error("cannot open config file " + st.config_path);

  auto flag_given = [&](const std::string& name) {
    const CLI::Option* opt = sub->get_option_no_throw("--" + name);
    return opt != nullptr && opt->count() > 0;
  };

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw cosmix::data_error(st.config_path + ":" + std::to_string(lineno) +
                                 ": expected key = value");
      continue;
    }
    auto trim = [](std::string s) {
      std::size_t b = s.find_first_not_of(" \t\r");
      std::size_t e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) continue;
    if (flag_given(key)) continue;  // flags win

    try {
      if (key == "seed") st.cfg.seed = std::stoull(value);
      else if (key == "threads") st.threads = std::stoi(value);
      else if (key == "alpha") st.cfg.alpha = std::stod(value);
      else if (key == "k") st.cfg.k = std::stoi(value);
      else if (key == "k-min") st.cfg.k_min = std::stoi(value);
      else if (key == "k-max") st.cfg.k_max = std::stoi(value);
      else if (key == "kmeans-runs") st.cfg.kmeans_runs = std::stoi(value);
      else if (key == "max-iter") st.cfg.max_iter = std::stoi(value);
      else if (key == "tol") st.cfg.tol = std::stod(value);
      else if (key == "lambda-mode") st.cfg.lambda_mode = value;
      else if (key == "lambda") st.cfg.lambda_override = std::stod(value);
      else if (key == "entropy-threshold") st.cfg.entropy_threshold = std::stod(value);
      else if (key == "top-n") st.cfg.top_n_terms = std::stoi(value);
      else if (key == "s-dashed") st.cfg.s_dashed = std::stod(value);
      else if (key == "s-solid") st.cfg.s_solid = std::stod(value);
      else if (key == "matched-idf") st.cfg.matched_idf = value;
      else if (key == "projection-lambda") st.cfg.projection_lambda = value;
      else if (key == "k-per-epoch") st.cfg.k_per_epoch = parse_int_list(value);
      else if (key == "stopwords") st.cfg.extra_stopwords_path = value;
      else if (key == "domain-stopwords") st.cfg.domain_stopwords_path = value;
      else if (key == "reweight-idf") st.cfg.reweight_idf = value == "true" || value == "1";
      else
        std::cerr << st.config_path << ":" << lineno << ": ignoring unknown key '" << key
                  << "'\n";
    } catch (const std::invalid_argument&) {
      throw cosmix::data_error(st.config_path + ":" + std::to_string(lineno) +
                               ": bad value for " + key);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cosmix: corpus-to-taxonomy clustering over cosine-distance mixtures"};
  app.require_subcommand(1);

  CliState st;

  auto* ingest = app.add_subcommand("ingest", "parse .bib/.ris/.txt inputs into a corpus file");
  ingest->add_option("inputs", st.cfg.inputs, "files or directories")->required();
  ingest->add_option("--out", st.cfg.corpus_path, "corpus JSONL output")->required();
  ingest->add_option("--format", st.cfg.input_format, "auto | bib | ris | txt");
  ingest->add_flag("!--no-require-abstract", st.cfg.require_abstract,
                   "keep records without an abstract");
  ingest->add_flag("!--no-default-excludes", st.cfg.default_title_excludes,
                   "disable the default title-prefix exclusions");
  ingest->add_option("--exclude-title-prefix", st.cfg.extra_title_excludes,
                     "additional title prefixes to drop");
  add_common(ingest, st);

  auto* prep = app.add_subcommand("prep", "corpus -> raw and idf document-term matrices");
  prep->add_option("--corpus", st.cfg.corpus_path)->required();
  prep->add_option("--outdir", st.cfg.outdir)->required();
  prep->add_option("--stopwords", st.cfg.extra_stopwords_path);
  prep->add_option("--domain-stopwords", st.cfg.domain_stopwords_path);
  add_common(prep, st);

  auto* select = app.add_subcommand("select", "entropy feature selection on a raw matrix");
  select->add_option("--outdir", st.cfg.outdir, "directory holding matrix_raw.dtm")->required();
  add_selection(select, st);
  add_common(select, st);

  auto* calibrate = app.add_subcommand("calibrate", "average lambda over a k range");
  calibrate->add_option("--outdir", st.cfg.outdir, "directory holding matrix_selected_idf.dtm")
      ->required();
  calibrate->add_option("--alpha", st.cfg.alpha);
  calibrate->add_option("--k-min", st.cfg.k_min);
  calibrate->add_option("--k-max", st.cfg.k_max);
  calibrate->add_option("--kmeans-runs", st.cfg.kmeans_runs);
  add_common(calibrate, st);

  auto* fit = app.add_subcommand("fit", "full pipeline: prep, select, calibrate, EM, report");
  fit->add_option("--corpus", st.cfg.corpus_path)->required();
  fit->add_option("--outdir", st.cfg.outdir)->required();
  fit->add_option("--k", st.k, "number of clusters");
  fit->add_option("--lambda", st.lambda_override, "skip calibration and use this lambda");
  add_selection(fit, st);
  add_model_opts(fit, st);
  add_common(fit, st);

  auto* sweep =
      app.add_subcommand("sweep", "fit k in [k-min, k-max] at shared lambda, report AIC/BIC");
  sweep->add_option("--corpus", st.cfg.corpus_path)->required();
  sweep->add_option("--outdir", st.cfg.outdir)->required();
  sweep->add_option("--lambda", st.lambda_override);
  add_selection(sweep, st);
  add_model_opts(sweep, st);
  add_common(sweep, st);

  auto* dynamic = app.add_subcommand("dynamic", "per-epoch fits plus forward topic evolution");
  dynamic->add_option("--corpus", st.cfg.corpus_path)->required();
  dynamic->add_option("--outdir", st.cfg.outdir)->required();
  dynamic->add_option("--k", st.k, "fixed k for every epoch");
  dynamic->add_option("--k-per-epoch", st.cfg.k_per_epoch, "fixed k per epoch, in label order")
      ->delimiter(',');
  dynamic->add_option("--s-dashed", st.cfg.s_dashed, "dashed-edge threshold");
  dynamic->add_option("--s-solid", st.cfg.s_solid, "solid-edge threshold");
  dynamic->add_option("--matched-idf", st.cfg.matched_idf, "source | target");
  dynamic->add_option("--projection-lambda", st.cfg.projection_lambda, "target | source");
  add_selection(dynamic, st);
  add_model_opts(dynamic, st);
  add_common(dynamic, st);

  auto* report = app.add_subcommand("report", "cluster reports from a saved model and matrix");
  report->add_option("--model", st.model_path)->required();
  report->add_option("--matrix", st.matrix_path)->required();
  report->add_option("--outdir", st.cfg.outdir)->required();
  add_common(report, st);

  auto* synth = app.add_subcommand("synth", "generate a planted-topic corpus from a scenario");
  synth->add_option("--scenario", st.scenario)->required();
  synth->add_option("--out", st.cfg.corpus_path, "corpus JSONL output")->required();
  synth->add_option("--outdir", st.cfg.outdir, "ground truth output directory")->required();
  add_common(synth, st);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();

    // command-line values first, then config-file fallbacks
    if (sub->get_option_no_throw("--entropy-threshold") && sub->count("--entropy-threshold"))
      st.cfg.entropy_threshold = st.tau;
    if (sub->get_option_no_throw("--top-n") && sub->count("--top-n"))
      st.cfg.top_n_terms = st.topn;
    if (sub->get_option_no_throw("--lambda") && sub->count("--lambda"))
      st.cfg.lambda_override = st.lambda_override;
    if (sub->get_option_no_throw("--k") && sub->count("--k")) st.cfg.k = st.k;
    apply_config_file(sub, st);

    if (st.threads > 0) omp_set_num_threads(st.threads);

    if (ingest->parsed()) {
      auto stats = cosmix::pipeline::run_ingest(st.cfg);
      std::cerr << "ingest: " << stats.files << " files, " << stats.records << " records, "
                << stats.kept << " kept, " << stats.diagnostics << " parse diagnostics\n";
    } else if (prep->parsed()) {
      cosmix::pipeline::run_prep(st.cfg);
    } else if (select->parsed()) {
      cosmix::pipeline::run_select(st.cfg);
    } else if (calibrate->parsed()) {
      cosmix::pipeline::run_calibrate(st.cfg);
    } else if (fit->parsed()) {
      if (!st.cfg.k) throw cosmix::data_error("fit: --k is required (use sweep to choose k)");
      cosmix::pipeline::run_fit(st.cfg);
    } else if (sweep->parsed()) {
      cosmix::pipeline::run_sweep(st.cfg);
    } else if (dynamic->parsed()) {
      cosmix::pipeline::run_dynamic(st.cfg);
    } else if (report->parsed()) {
      cosmix::pipeline::run_report(st.cfg, st.model_path, st.matrix_path);
    } else if (synth->parsed()) {
      cosmix::pipeline::run_synth(st.cfg, st.scenario);
    }
  } catch (const cosmix::numeric_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const cosmix::data_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
