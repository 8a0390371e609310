#include "cosmix/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cosmix/dynamics.hpp"
#include "cosmix/featsel.hpp"
#include "cosmix/ingest.hpp"
#include "cosmix/io.hpp"
#include "cosmix/mixture.hpp"
#include "cosmix/report.hpp"
#include "cosmix/rng.hpp"
#include "cosmix/testkit.hpp"
#include "cosmix/textprep.hpp"

namespace cosmix::pipeline {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

void RunConfig::validate_selection() const {
  if (entropy_threshold.has_value() == top_n_terms.has_value())
    throw data_error("exactly one of --entropy-threshold and --top-n must be set");
}

void RunConfig::validate_common() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw data_error("alpha must lie in (0,1)");
  if (k_min > k_max || k_min < 2) throw data_error("k range is empty or starts below 2");
  if (!(s_dashed > 0.0 && s_dashed <= s_solid && s_solid <= 1.0))
    throw data_error("thresholds must satisfy 0 < s_dashed <= s_solid <= 1");
}

namespace {

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s)
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out;
}

ExclusionRules rules_from(const RunConfig& cfg) {
  ExclusionRules rules;
  if (cfg.default_title_excludes) rules = ExclusionRules::default_rules();
  rules.require_abstract = cfg.require_abstract;
  for (const auto& p : cfg.extra_title_excludes) rules.title_prefixes.push_back(p);
  return rules;
}

StopwordPolicy policy_from(const RunConfig& cfg) {
  StopwordPolicy policy = StopwordPolicy::defaults();
  auto load_list = [](const fs::path& path) {
    std::vector<std::string> words;
    std::ifstream in(path);
    if (!in) throw data_error("cannot open stopword list " + path.string());
    std::string w;
    while (in >> w) words.push_back(w);
    return words;
  };
  if (!cfg.extra_stopwords_path.empty())
    for (auto& w : load_list(cfg.extra_stopwords_path)) policy.english.insert(w);
  if (!cfg.domain_stopwords_path.empty()) {
    policy.domain.clear();
    for (auto& w : load_list(cfg.domain_stopwords_path)) policy.domain.insert(w);
  }
  return policy;
}

struct PreparedEpoch {
  DocTermMatrix raw_full;
  DocTermMatrix raw_selected;
  DocTermMatrix idf;
  std::vector<double> entropy;  // over the full vocabulary
};

// raw -> entropy on raw counts -> column selection -> idf weighting.
// With reweight_idf the factors are recomputed on the selected matrix;
// otherwise columns are cut from the full idf matrix, keeping pre-selection
// weights. For ln(n/df) the two coincide since each term's factor depends
// only on its own document frequency.
PreparedEpoch prepare_matrix(const Corpus& corpus, const RunConfig& cfg,
                             const StopwordPolicy& policy, BuildDiagnostics* diag) {
  PreparedEpoch out;
  out.raw_full = build_matrix(corpus, policy, diag);
  const bool selecting =
      out.raw_full.n_docs() >= 2 && (cfg.entropy_threshold || cfg.top_n_terms);
  if (out.raw_full.n_docs() >= 2) out.entropy = term_entropy(out.raw_full);

  if (!selecting) {
    out.raw_selected = out.raw_full;
    out.idf = apply_idf(out.raw_selected);
    return out;
  }

  auto cut = [&](const DocTermMatrix& m) {
    if (cfg.entropy_threshold)
      return select_by_threshold(m, out.entropy, *cfg.entropy_threshold);
    TopNSelection sel = select_top_n(m, out.entropy, *cfg.top_n_terms);
    if (sel.truncated_to_all)
      std::cerr << "select: top-n " << *cfg.top_n_terms << " exceeds " << m.n_terms()
                << " terms; keeping all\n";
    return std::move(sel.matrix);
  };
  out.raw_selected = cut(out.raw_full);
  if (cfg.reweight_idf) {
    out.idf = apply_idf(out.raw_selected);
  } else {
    out.idf = cut(apply_idf(out.raw_full));
  }
  return out;
}

std::string entropy_csv(const DocTermMatrix& m, std::span<const double> entropy) {
  std::ostringstream os;
  os << "term,entropy\n";
  for (std::int32_t h = 0; h < m.n_terms(); ++h)
    os << m.vocab.terms[static_cast<std::size_t>(h)] << "," << io::format_double(entropy[static_cast<std::size_t>(h)])
       << "\n";
  return os.str();
}

std::string histogram_csv(std::span<const double> entropy) {
  std::ostringstream os;
  os << "bin_lo,bin_hi,count\n";
  for (const auto& b : entropy_histogram(entropy)) {
    os << io::format_double(b.lo) << "," << io::format_double(b.hi) << "," << b.count << "\n";
  }
  return os.str();
}

std::string assignments_csv(const ClusteringResult& result) {
  std::ostringstream os;
  os << "doc_id,label,top_posterior\n";
  const std::int32_t k = result.k;
  for (std::int32_t j = 0; j < result.n_docs(); ++j) {
    std::int32_t lab = result.hard_labels[static_cast<std::size_t>(j)];
    os << j << "," << lab << ","
       << io::format_double(result.posteriors[static_cast<std::int64_t>(j) * k + lab]) << "\n";
  }
  return os.str();
}

ordered_json lambda_json(const LambdaAverage& avg, const RunConfig& cfg) {
  ordered_json j;
  j["alpha"] = cfg.alpha;
  j["k_min"] = cfg.k_min;
  j["k_max"] = cfg.k_max;
  j["lambda_bar"] = avg.lambda_bar;
  j["per_k"] = ordered_json::array();
  for (const auto& [k, lambda] : avg.per_k)
    j["per_k"].push_back({{"k", k}, {"lambda", lambda}});
  j["skipped_k"] = avg.skipped;
  return j;
}

ordered_json config_echo(const RunConfig& cfg) {
  ordered_json j;
  j["corpus"] = cfg.corpus_path.string();
  if (cfg.entropy_threshold) j["entropy_threshold"] = *cfg.entropy_threshold;
  if (cfg.top_n_terms) j["top_n_terms"] = *cfg.top_n_terms;
  j["reweight_idf"] = cfg.reweight_idf;
  j["alpha"] = cfg.alpha;
  if (cfg.k) j["k"] = *cfg.k;
  j["k_min"] = cfg.k_min;
  j["k_max"] = cfg.k_max;
  j["seed"] = cfg.seed;
  j["kmeans_runs"] = cfg.kmeans_runs;
  j["lambda_mode"] = cfg.lambda_mode;
  if (cfg.lambda_override) j["lambda_override"] = *cfg.lambda_override;
  j["max_iter"] = cfg.max_iter;
  j["tol"] = cfg.tol;
  j["s_dashed"] = cfg.s_dashed;
  j["s_solid"] = cfg.s_solid;
  j["matched_idf"] = cfg.matched_idf;
  j["projection_lambda"] = cfg.projection_lambda;
  if (!cfg.k_per_epoch.empty()) j["k_per_epoch"] = cfg.k_per_epoch;
  return j;
}

LambdaMode parse_mode(const std::string& s) {
  if (s == "fixed") return LambdaMode::fixed;
  if (s == "resolve") return LambdaMode::resolve_each_iter;
  throw data_error("lambda mode must be 'fixed' or 'resolve'");
}

LambdaAverage calibrate(const DocTermMatrix& idf, const RunConfig& cfg) {
  if (cfg.lambda_override) {
    LambdaAverage avg;
    avg.lambda_bar = *cfg.lambda_override;
    return avg;
  }
  return average_lambda_over_k(idf, cfg.k_min, cfg.k_max, CalibrationTarget{cfg.alpha},
                               Rng::derive(cfg.seed, 0xca11), cfg.kmeans_runs);
}

EmFit fit_with(const DocTermMatrix& idf, std::int32_t k, double lambda_bar, const RunConfig& cfg) {
  EmInit init;
  init.kmeans_runs = cfg.kmeans_runs;
  EmOptions opt;
  opt.lambda_mode = parse_mode(cfg.lambda_mode);
  opt.fixed_lambda = lambda_bar;
  opt.max_iter = cfg.max_iter;
  opt.tol = cfg.tol;
  opt.seed = cfg.seed;
  return fit_em(idf, k, CalibrationTarget{cfg.alpha}, init, opt);
}

std::string migration_csv(const MigrationMatrix& m) {
  std::ostringstream os;
  os << "from,to,count,fraction\n";
  for (std::int32_t u = 0; u < m.k_from; ++u)
    for (std::int32_t v = 0; v < m.k_to; ++v)
      os << u << "," << v << "," << m.count(u, v) << "," << io::format_double(m.fraction(u, v))
         << "\n";
  return os.str();
}

}  // namespace

IngestStats run_ingest(const RunConfig& cfg) {
  if (cfg.inputs.empty()) throw data_error("ingest: no inputs given");
  IngestStats stats;
  std::vector<Record> all;
  std::vector<Diagnostic> diags;

  std::vector<fs::path> files;
  for (const auto& input : cfg.inputs) {
    if (fs::is_directory(input)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(input)) {
        if (!entry.is_regular_file()) continue;
        auto ext = entry.path().extension().string();
        if (ext == ".bib" || ext == ".ris" || ext == ".txt") found.push_back(entry.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::exists(input)) {
      files.push_back(input);
    } else {
      throw data_error("ingest: no such input " + input.string());
    }
  }
  if (files.empty()) throw data_error("ingest: inputs contain no .bib/.ris/.txt files");

  // sidecar manifest for plain-text directories: filename -> {epoch|year, journal}
  auto manifest_for = [](const fs::path& file) -> ordered_json {
    fs::path mpath = file.parent_path() / "manifest.json";
    if (!fs::exists(mpath)) return ordered_json::object();
    return ordered_json::parse(io::read_file(mpath));
  };

  EpochScheme scheme = EpochScheme::default_scheme();
  std::vector<Document> txt_docs;  // already-document inputs, appended last

  for (const auto& file : files) {
    ++stats.files;
    auto ext = file.extension().string();
    std::string format = cfg.input_format;
    if (format == "auto")
      format = ext == ".bib" ? "bib" : ext == ".ris" ? "ris" : "txt";

    if (format == "bib" || format == "ris") {
      std::string bytes = io::read_file(file);
      ParseResult res = format == "bib" ? parse_bibtex(bytes) : parse_ris(bytes);
      for (auto& d : res.diagnostics) {
        std::cerr << file.string() << ": offset " << d.offset << ": " << d.message << "\n";
        diags.push_back(d);
      }
      all.insert(all.end(), res.records.begin(), res.records.end());
    } else {
      Document d;
      d.text = io::read_file(file);
      ordered_json manifest = manifest_for(file);
      std::string name = file.filename().string();
      if (manifest.contains(name)) {
        const auto& entry = manifest[name];
        if (entry.contains("epoch")) d.epoch = entry["epoch"].get<std::string>();
        else if (entry.contains("year")) d.epoch = scheme.epoch_for(entry["year"].get<int>());
        if (entry.contains("journal")) d.journal = entry["journal"].get<std::string>();
      }
      if (!d.epoch) {
        std::cerr << file.string() << ": no epoch in manifest; epoch left unset\n";
        ++stats.epoch_warnings;
      }
      txt_docs.push_back(std::move(d));
    }
  }
  stats.records = all.size() + txt_docs.size();
  stats.diagnostics = diags.size();

  std::vector<Record> kept = filter_records(all, rules_from(cfg));
  stats.kept = kept.size() + txt_docs.size();

  ToDocumentsResult docs = to_documents(kept, scheme);
  stats.epoch_warnings += docs.warnings.size();
  for (const auto& w : docs.warnings)
    std::cerr << "record " << w.offset << ": " << w.message << "\n";

  for (Document& d : txt_docs) {
    d.doc_id = static_cast<std::int32_t>(docs.corpus.docs.size());
    docs.corpus.docs.push_back(std::move(d));
  }

  io::write_corpus_jsonl(docs.corpus, cfg.corpus_path);
  return stats;
}

void run_prep(const RunConfig& cfg) {
  Corpus corpus = io::read_corpus_jsonl(cfg.corpus_path);
  StopwordPolicy policy = policy_from(cfg);
  BuildDiagnostics diag;
  DocTermMatrix raw = build_matrix(corpus, policy, &diag);
  for (std::int32_t j : diag.empty_docs)
    std::cerr << "doc " << j << ": no tokens survive preprocessing (zero row kept)\n";
  io::write_matrix(raw, cfg.outdir / "matrix_raw.dtm");
  io::write_matrix(apply_idf(raw), cfg.outdir / "matrix_idf.dtm");
}

void run_select(const RunConfig& cfg) {
  cfg.validate_selection();
  DocTermMatrix raw = io::read_matrix(cfg.outdir / "matrix_raw.dtm");
  if (raw.weighting != Weighting::raw_count)
    throw data_error("select: expected a raw-count matrix");
  std::vector<double> h = term_entropy(raw);
  DocTermMatrix selected;
  if (cfg.entropy_threshold) {
    selected = select_by_threshold(raw, h, *cfg.entropy_threshold);
  } else {
    TopNSelection sel = select_top_n(raw, h, *cfg.top_n_terms);
    if (sel.truncated_to_all)
      std::cerr << "select: top-n " << *cfg.top_n_terms << " exceeds " << raw.n_terms()
                << " terms; keeping all\n";
    selected = std::move(sel.matrix);
  }
  io::write_matrix(selected, cfg.outdir / "matrix_selected_raw.dtm");
  io::write_matrix(apply_idf(selected), cfg.outdir / "matrix_selected_idf.dtm");
  io::write_file(cfg.outdir / "entropy.csv", entropy_csv(raw, h));
  io::write_file(cfg.outdir / "entropy_histogram.csv", histogram_csv(h));
}

void run_calibrate(const RunConfig& cfg) {
  cfg.validate_common();
  DocTermMatrix idf = io::read_matrix(cfg.outdir / "matrix_selected_idf.dtm");
  LambdaAverage avg = calibrate(idf, cfg);
  io::write_file(cfg.outdir / "lambda.json", lambda_json(avg, cfg).dump(2) + "\n");
}

void run_fit(const RunConfig& cfg) {
  cfg.validate_selection();
  cfg.validate_common();
  if (!cfg.k) throw data_error("fit: --k is required (use sweep to choose k)");

  Corpus corpus = io::read_corpus_jsonl(cfg.corpus_path);
  StopwordPolicy policy = policy_from(cfg);
  BuildDiagnostics diag;
  PreparedEpoch prep = prepare_matrix(corpus, cfg, policy, &diag);

  LambdaAverage avg = calibrate(prep.idf, cfg);
  EmFit fit = fit_with(prep.idf, *cfg.k, avg.lambda_bar, cfg);
  std::vector<ClusterReport> reports = build_reports(fit.model, fit.result, prep.idf);

  io::write_matrix(prep.raw_full, cfg.outdir / "matrix_raw.dtm");
  io::write_matrix(prep.idf, cfg.outdir / "matrix_selected_idf.dtm");
  io::write_file(cfg.outdir / "entropy.csv", entropy_csv(prep.raw_full, prep.entropy));
  io::write_file(cfg.outdir / "entropy_histogram.csv", histogram_csv(prep.entropy));
  io::write_file(cfg.outdir / "lambda.json", lambda_json(avg, cfg).dump(2) + "\n");
  io::write_model(fit.model, cfg.outdir / "model.json");
  io::write_file(cfg.outdir / "assignments.csv", assignments_csv(fit.result));
  io::write_file(cfg.outdir / "report.json", reports_to_json(reports));
  io::write_file(cfg.outdir / "balloon.csv", reports_to_balloon_csv(reports));

  ordered_json run;
  run["format"] = "cosmix-run";
  run["version"] = 1;
  run["command"] = "fit";
  run["config"] = config_echo(cfg);
  run["results"] = {{"n_docs", prep.idf.n_docs()},
                    {"n_terms_full", prep.raw_full.n_terms()},
                    {"n_terms_selected", prep.idf.n_terms()},
                    {"empty_docs", diag.empty_docs.size()},
                    {"lambda", fit.model.lambda},
                    {"iterations", fit.result.n_iterations},
                    {"converged", fit.result.converged},
                    {"partial_loglik", fit.result.partial_loglik}};
  io::write_file(cfg.outdir / "run.json", run.dump(2) + "\n");
}

void run_sweep(const RunConfig& cfg) {
  cfg.validate_selection();
  cfg.validate_common();
  if (parse_mode(cfg.lambda_mode) != LambdaMode::fixed)
    throw numeric_error("criteria invalid across differing lambda: sweep requires fixed mode");

  Corpus corpus = io::read_corpus_jsonl(cfg.corpus_path);
  StopwordPolicy policy = policy_from(cfg);
  PreparedEpoch prep = prepare_matrix(corpus, cfg, policy, nullptr);
  LambdaAverage avg = calibrate(prep.idf, cfg);

  std::vector<SweepEntry> entries;
  std::vector<std::int32_t> failed;
  std::ostringstream csv;
  csv << "k,partial_loglik,dof,aic,bic\n";
  for (std::int32_t k = cfg.k_min; k <= cfg.k_max; ++k) {
    try {
      EmFit fit = fit_with(prep.idf, k, avg.lambda_bar, cfg);
      SweepEntry e;
      e.k = k;
      e.lambda = fit.model.lambda;
      e.vocab_fingerprint = fit.model.vocab_fingerprint;
      e.partial_loglik = fit.result.partial_loglik;
      e.ic = information_criteria(fit.result, fit.model, prep.idf.n_docs(), prep.idf.n_terms());
      csv << k << "," << io::format_double(e.partial_loglik) << "," << e.ic.dof << ","
          << io::format_double(e.ic.aic) << "," << io::format_double(e.ic.bic) << "\n";
      entries.push_back(e);
    } catch (const numeric_error&) {
      failed.push_back(k);
    }
  }
  if (entries.empty()) throw numeric_error("sweep: every k failed to fit");
  std::int32_t best = best_k_by_aic(entries);

  io::write_file(cfg.outdir / "sweep.csv", csv.str());
  io::write_file(cfg.outdir / "lambda.json", lambda_json(avg, cfg).dump(2) + "\n");
  ordered_json run;
  run["format"] = "cosmix-run";
  run["version"] = 1;
  run["command"] = "sweep";
  run["config"] = config_echo(cfg);
  run["results"] = {{"best_k_aic", best},
                    {"lambda_bar", avg.lambda_bar},
                    {"failed_k", failed}};
  io::write_file(cfg.outdir / "run.json", run.dump(2) + "\n");
}

void run_dynamic(const RunConfig& cfg) {
  cfg.validate_selection();
  cfg.validate_common();

  Corpus corpus = io::read_corpus_jsonl(cfg.corpus_path);
  std::vector<std::string> epochs = corpus.epoch_labels();
  std::sort(epochs.begin(), epochs.end());  // labels must sort chronologically
  if (epochs.size() < 2) throw data_error("dynamic: corpus has fewer than two epochs");
  if (!cfg.k_per_epoch.empty() && cfg.k_per_epoch.size() != epochs.size())
    throw data_error("dynamic: k_per_epoch length differs from the number of epochs");

  StopwordPolicy policy = policy_from(cfg);

  struct EpochFit {
    std::string label;
    PreparedEpoch prep;
    LambdaAverage lambda;
    EmFit fit;
  };
  std::vector<EpochFit> fits;

  for (std::size_t t = 0; t < epochs.size(); ++t) {
    EpochFit ef;
    ef.label = epochs[t];
    Corpus slice = corpus.slice_epoch(epochs[t]);
    ef.prep = prepare_matrix(slice, cfg, policy, nullptr);
    ef.lambda = calibrate(ef.prep.idf, cfg);

    std::int32_t k;
    if (!cfg.k_per_epoch.empty()) {
      k = cfg.k_per_epoch[t];
    } else if (cfg.k) {
      k = *cfg.k;
    } else {
      // AIC over the configured range at the shared per-epoch lambda
      std::vector<SweepEntry> entries;
      for (std::int32_t kk = cfg.k_min; kk <= cfg.k_max; ++kk) {
        try {
          EmFit f = fit_with(ef.prep.idf, kk, ef.lambda.lambda_bar, cfg);
          SweepEntry e;
          e.k = kk;
          e.lambda = f.model.lambda;
          e.vocab_fingerprint = f.model.vocab_fingerprint;
          e.partial_loglik = f.result.partial_loglik;
          e.ic = information_criteria(f.result, f.model, ef.prep.idf.n_docs(),
                                      ef.prep.idf.n_terms());
          entries.push_back(e);
        } catch (const numeric_error&) {
        }
      }
      if (entries.empty())
        throw numeric_error("dynamic: no k fits epoch " + epochs[t]);
      k = best_k_by_aic(entries);
    }

    ef.fit = fit_with(ef.prep.idf, k, ef.lambda.lambda_bar, cfg);

    fs::path edir = cfg.outdir / ("epoch-" + sanitize(epochs[t]));
    io::write_matrix(ef.prep.idf, edir / "matrix_selected_idf.dtm");
    io::write_file(edir / "lambda.json", lambda_json(ef.lambda, cfg).dump(2) + "\n");
    io::write_model(ef.fit.model, edir / "model.json");
    io::write_file(edir / "assignments.csv", assignments_csv(ef.fit.result));
    std::vector<ClusterReport> reports = build_reports(ef.fit.model, ef.fit.result, ef.prep.idf);
    io::write_file(edir / "report.json", reports_to_json(reports));
    io::write_file(edir / "balloon.csv", reports_to_balloon_csv(reports));
    fits.push_back(std::move(ef));
  }

  std::vector<EpochClusters> clusters;
  for (const auto& ef : fits) {
    EpochClusters ec;
    ec.epoch_label = ef.label;
    ec.sizes.assign(static_cast<std::size_t>(ef.fit.model.k), 0);
    for (std::int32_t lab : ef.fit.result.hard_labels) ++ec.sizes[static_cast<std::size_t>(lab)];
    std::vector<ClusterReport> reports = build_reports(ef.fit.model, ef.fit.result, ef.prep.idf, 2);
    for (const auto& r : reports) {
      std::string label;
      for (const auto& t : r.terms) {
        if (!label.empty()) label += "+";
        label += t.term;
      }
      ec.labels.push_back(label);
    }
    clusters.push_back(std::move(ec));
  }

  std::vector<MigrationMatrix> migrations;
  for (std::size_t t = 0; t + 1 < fits.size(); ++t) {
    const EpochFit& src = fits[t];
    const EpochFit& dst = fits[t + 1];

    MatchedIdf mode = cfg.matched_idf == "target" ? MatchedIdf::target : MatchedIdf::source;
    std::vector<double> target_idf;
    if (mode == MatchedIdf::target) target_idf = idf_factors(dst.prep.raw_selected);
    MatchedMatrix matched =
        match_vocabulary(src.prep.raw_full, dst.prep.idf.vocab, mode, target_idf);

    double lambda = cfg.projection_lambda == "source" ? src.lambda.lambda_bar
                                                      : dst.lambda.lambda_bar;
    SemisupFit projected =
        fit_semisupervised(matched.matrix, dst.prep.idf, dst.fit.result.hard_labels,
                           dst.fit.model.centroids, lambda, cfg.max_iter);

    migrations.push_back(migration_matrix(src.fit.result.hard_labels, projected.projected_labels,
                                          src.fit.model.k, dst.fit.model.k));
    io::write_file(cfg.outdir / ("migration-" + std::to_string(t) + ".csv"),
                   migration_csv(migrations.back()));
  }

  MigrationGraph graph = build_evolution_graph(clusters, migrations, cfg.s_dashed, cfg.s_solid);
  io::write_file(cfg.outdir / "graph.dot", graph_to_dot(graph));
  io::write_file(cfg.outdir / "graph.json", graph_to_json(graph, migrations));

  ordered_json run;
  run["format"] = "cosmix-run";
  run["version"] = 1;
  run["command"] = "dynamic";
  run["config"] = config_echo(cfg);
  ordered_json per_epoch = ordered_json::array();
  for (const auto& ef : fits) {
    per_epoch.push_back({{"epoch", ef.label},
                         {"n_docs", ef.prep.idf.n_docs()},
                         {"k", ef.fit.model.k},
                         {"lambda", ef.fit.model.lambda},
                         {"iterations", ef.fit.result.n_iterations},
                         {"converged", ef.fit.result.converged}});
  }
  run["results"] = {{"epochs", per_epoch},
                    {"edges", graph.edges.size()},
                    {"born", graph.born.size()},
                    {"dying", graph.dying.size()}};
  io::write_file(cfg.outdir / "run.json", run.dump(2) + "\n");
}

void run_report(const RunConfig& cfg, const fs::path& model_path, const fs::path& matrix_path) {
  MixtureModel model = io::read_model(model_path);
  DocTermMatrix idf = io::read_matrix(matrix_path);
  EStepOut es = e_step(model, idf);
  ClusteringResult result;
  result.k = model.k;
  result.partial_loglik = es.partial_loglik;
  result.posteriors = std::move(es.posteriors);
  result.hard_labels = hard_labels_from_posteriors(result.posteriors, idf.n_docs(), model.k);
  std::vector<ClusterReport> reports = build_reports(model, result, idf);
  io::write_file(cfg.outdir / "report.json", reports_to_json(reports));
  io::write_file(cfg.outdir / "balloon.csv", reports_to_balloon_csv(reports));
}

void run_synth(const RunConfig& cfg, const fs::path& scenario_path) {
  testkit::PlantedScenario scenario =
      testkit::PlantedScenario::from_json_text(io::read_file(scenario_path));
  testkit::PlantedData data = testkit::generate(scenario, cfg.seed);

  Corpus merged;
  ordered_json truth_labels = ordered_json::array();
  for (const auto& ep : data.epochs) {
    for (std::size_t j = 0; j < ep.corpus.docs.size(); ++j) {
      Document d = ep.corpus.docs[j];
      d.doc_id = static_cast<std::int32_t>(merged.docs.size());
      truth_labels.push_back({{"doc_id", d.doc_id},
                              {"epoch", *d.epoch},
                              {"topic", ep.topic_names[static_cast<std::size_t>(
                                  ep.labels[j])]},
                              {"label", ep.labels[j]}});
      merged.docs.push_back(std::move(d));
    }
  }
  io::write_corpus_jsonl(merged, cfg.corpus_path);
  io::write_file(cfg.outdir / "truth_labels.json", truth_labels.dump(2) + "\n");
  if (!data.true_migrations.empty())
    io::write_file(cfg.outdir / "truth_graph.json",
                   graph_to_json(data.true_graph, data.true_migrations));
}

}  // namespace cosmix::pipeline
