#include "cosmix/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cosmix/kernels.hpp"
#include "cosmix/mixture.hpp"

namespace cosmix {

MatchedMatrix match_vocabulary(const DocTermMatrix& raw_t, const Vocabulary& vocab_next,
                               MatchedIdf mode, std::span<const double> target_idf) {
  if (raw_t.weighting != Weighting::raw_count)
    throw data_error("match_vocabulary: source matrix must hold raw counts");
  if (mode == MatchedIdf::target &&
      static_cast<std::int32_t>(target_idf.size()) != vocab_next.size())
    throw data_error("match_vocabulary: target idf factors do not cover the target vocabulary");

  const std::int32_t p_next = vocab_next.size();
  std::vector<std::int32_t> provenance(static_cast<std::size_t>(p_next), -1);
  std::vector<std::int32_t> old_to_new(static_cast<std::size_t>(raw_t.n_terms()), -1);
  std::int64_t shared = 0;
  for (std::int32_t h = 0; h < p_next; ++h) {
    auto it = raw_t.vocab.index.find(vocab_next.terms[static_cast<std::size_t>(h)]);
    if (it != raw_t.vocab.index.end()) {
      provenance[static_cast<std::size_t>(h)] = it->second;
      old_to_new[static_cast<std::size_t>(it->second)] = h;
      ++shared;
    }
  }
  if (shared == 0) throw data_error("disjoint vocabularies");

  DocTermMatrix matched;
  matched.vocab = vocab_next;
  matched.weighting = Weighting::raw_count;
  matched.row_start.assign(static_cast<std::size_t>(raw_t.n_docs()) + 1, 0);
  for (std::int32_t j = 0; j < raw_t.n_docs(); ++j) {
    // source columns ascend, and shared columns keep their relative order in
    // the target vocabulary (both are lexicographic), so cols stay sorted
    for (std::int64_t e = raw_t.row_start[j]; e < raw_t.row_start[j + 1]; ++e) {
      std::int32_t nc = old_to_new[static_cast<std::size_t>(raw_t.cols[static_cast<std::size_t>(e)])];
      if (nc >= 0) {
        matched.cols.push_back(nc);
        matched.vals.push_back(raw_t.vals[static_cast<std::size_t>(e)]);
      }
    }
    matched.row_start[static_cast<std::size_t>(j) + 1] = static_cast<std::int64_t>(matched.cols.size());
  }

  matched.recompute_norms();
  MatchedMatrix out;
  if (mode == MatchedIdf::source) {
    out.matrix = apply_idf(matched);
  } else {
    DocTermMatrix w;
    w.vocab = matched.vocab;
    w.weighting = Weighting::idf_weighted;
    w.row_start.assign(static_cast<std::size_t>(matched.n_docs()) + 1, 0);
    for (std::int32_t j = 0; j < matched.n_docs(); ++j) {
      for (std::int64_t e = matched.row_start[j]; e < matched.row_start[j + 1]; ++e) {
        std::int32_t h = matched.cols[static_cast<std::size_t>(e)];
        double v = matched.vals[static_cast<std::size_t>(e)] * target_idf[static_cast<std::size_t>(h)];
        if (v > 0.0) {
          w.cols.push_back(h);
          w.vals.push_back(v);
        }
      }
      w.row_start[static_cast<std::size_t>(j) + 1] = static_cast<std::int64_t>(w.cols.size());
    }
    w.recompute_norms();
    out.matrix = std::move(w);
  }
  out.raw = std::move(matched);
  out.provenance = std::move(provenance);
  for (std::int32_t j = 0; j < out.matrix.n_docs(); ++j)
    if (out.matrix.doc_norms[static_cast<std::size_t>(j)] == 0.0) out.zeroed_docs.push_back(j);
  return out;
}

SemisupFit fit_semisupervised(const DocTermMatrix& matched, const DocTermMatrix& labeled_matrix,
                              std::span<const std::int32_t> labels,
                              std::span<const Centroid> centroids, double lambda, int max_iter,
                              double tol) {
  const std::int32_t k = static_cast<std::int32_t>(centroids.size());
  const std::int32_t n_t = matched.n_docs();
  const std::int32_t n_next = labeled_matrix.n_docs();
  if (k < 1) throw data_error("fit_semisupervised: no components");
  if (static_cast<std::int32_t>(labels.size()) != n_next)
    throw data_error("fit_semisupervised: label length mismatch");
  if (n_next == 0) throw data_error("fit_semisupervised: labeled set is empty");
  if (matched.vocab.fingerprint() != labeled_matrix.vocab.fingerprint())
    throw data_error("fit_semisupervised: vocabularies differ");
  if (!(lambda > 0.0)) throw data_error("fit_semisupervised: lambda must be positive");

  std::vector<double> class_counts(static_cast<std::size_t>(k), 0.0);
  for (std::int32_t lab : labels) {
    if (lab < 0 || lab >= k) throw data_error("fit_semisupervised: label out of range");
    class_counts[static_cast<std::size_t>(lab)] += 1.0;
  }

  // fixed contribution of the labeled block: -lambda * sum_j d(y_j, xi_zj)
  std::vector<double> dist_labeled(static_cast<std::size_t>(n_next) * static_cast<std::size_t>(k));
  kernels::doc_centroid_distances(labeled_matrix, centroids, dist_labeled.data());
  double labeled_dist_sum = 0.0;
  for (std::int32_t j = 0; j < n_next; ++j)
    labeled_dist_sum +=
        dist_labeled[static_cast<std::int64_t>(j) * k + labels[static_cast<std::size_t>(j)]];

  SemisupFit fit;
  fit.pi.assign(static_cast<std::size_t>(k), 0.0);
  for (std::int32_t i = 0; i < k; ++i)
    fit.pi[static_cast<std::size_t>(i)] = class_counts[static_cast<std::size_t>(i)] / n_next;

  auto labeled_objective = [&](const std::vector<double>& pi) {
    double s = 0.0;
    for (std::int32_t i = 0; i < k; ++i)
      if (class_counts[static_cast<std::size_t>(i)] > 0.0)
        s += class_counts[static_cast<std::size_t>(i)] * std::log(pi[static_cast<std::size_t>(i)]);
    return s - lambda * labeled_dist_sum;
  };

  if (n_t == 0) {
    // supervised-only closed form: class proportions in one step
    fit.objective = labeled_objective(fit.pi);
    fit.objective_trace.push_back(fit.objective);
    fit.n_iterations = 1;
    fit.converged = true;
    return fit;
  }

  std::vector<double> dist(static_cast<std::size_t>(n_t) * static_cast<std::size_t>(k));
  kernels::doc_centroid_distances(matched, centroids, dist.data());
  fit.posteriors.assign(dist.size(), 0.0);

  double prev = -std::numeric_limits<double>::infinity();
  int iter = 0;
  for (iter = 1; iter <= max_iter; ++iter) {
    double pll = kernels::posteriors_from_distances(dist, n_t, k, fit.pi, lambda,
                                                    fit.posteriors.data());
    fit.objective = pll + labeled_objective(fit.pi);
    fit.objective_trace.push_back(fit.objective);
    if (iter > 1 &&
        std::abs(fit.objective - prev) <= tol * std::max(1.0, std::abs(fit.objective))) {
      fit.converged = true;
      break;
    }
    prev = fit.objective;

    for (std::int32_t i = 0; i < k; ++i) {
      double mass = class_counts[static_cast<std::size_t>(i)];
      for (std::int32_t j = 0; j < n_t; ++j)
        mass += fit.posteriors[static_cast<std::int64_t>(j) * k + i];
      fit.pi[static_cast<std::size_t>(i)] = mass / static_cast<double>(n_t + n_next);
    }
  }
  fit.n_iterations = std::min(iter, max_iter);
  fit.projected_labels = hard_labels_from_posteriors(fit.posteriors, n_t, k);
  return fit;
}

MigrationMatrix migration_matrix(std::span<const std::int32_t> labels_t,
                                 std::span<const std::int32_t> projected, std::int32_t k_t,
                                 std::int32_t k_next) {
  if (labels_t.size() != projected.size())
    throw data_error("migration_matrix: label vectors cover different documents");
  MigrationMatrix m;
  m.k_from = k_t;
  m.k_to = k_next;
  m.counts.assign(static_cast<std::size_t>(k_t) * static_cast<std::size_t>(k_next), 0);
  for (std::size_t j = 0; j < labels_t.size(); ++j) {
    std::int32_t u = labels_t[j];
    std::int32_t v = projected[j];
    if (u < 0 || u >= k_t || v < 0 || v >= k_next)
      throw data_error("migration_matrix: label out of range");
    ++m.counts[static_cast<std::size_t>(u) * static_cast<std::size_t>(k_next) + static_cast<std::size_t>(v)];
  }
  m.fractions.assign(m.counts.size(), 0.0);
  for (std::int32_t u = 0; u < k_t; ++u) {
    std::int64_t total = 0;
    for (std::int32_t v = 0; v < k_next; ++v) total += m.count(u, v);
    if (total == 0) {
      m.empty_rows.push_back(u);
      continue;
    }
    for (std::int32_t v = 0; v < k_next; ++v)
      m.fractions[static_cast<std::size_t>(u) * static_cast<std::size_t>(k_next) + static_cast<std::size_t>(v)] =
          static_cast<double>(m.count(u, v)) / static_cast<double>(total);
  }
  return m;
}

MigrationGraph build_evolution_graph(std::span<const EpochClusters> epochs,
                                     std::span<const MigrationMatrix> migrations,
                                     double s_dashed, double s_solid) {
  if (!(s_dashed > 0.0 && s_dashed <= s_solid && s_solid <= 1.0))
    throw data_error("build_evolution_graph: require 0 < s_dashed <= s_solid <= 1");
  if (epochs.size() < 2 || migrations.size() != epochs.size() - 1)
    throw data_error("build_evolution_graph: need T epochs and T-1 migration matrices");

  MigrationGraph g;
  g.s_dashed = s_dashed;
  g.s_solid = s_solid;
  for (std::size_t t = 0; t < epochs.size(); ++t) {
    g.epoch_labels.push_back(epochs[t].epoch_label);
    for (std::size_t c = 0; c < epochs[t].sizes.size(); ++c) {
      GraphNode node;
      node.epoch = static_cast<int>(t);
      node.cluster = static_cast<std::int32_t>(c);
      node.size = epochs[t].sizes[c];
      if (c < epochs[t].labels.size()) node.label = epochs[t].labels[c];
      g.nodes.push_back(std::move(node));
    }
  }

  std::set<std::pair<int, std::int32_t>> has_out, has_in;
  for (std::size_t t = 0; t < migrations.size(); ++t) {
    const MigrationMatrix& m = migrations[t];
    for (std::int32_t u = 0; u < m.k_from; ++u) {
      for (std::int32_t v = 0; v < m.k_to; ++v) {
        double f = m.fraction(u, v);
        if (f >= s_dashed) {
          GraphEdge e;
          e.epoch_from = static_cast<int>(t);
          e.from = u;
          e.to = v;
          e.fraction = f;
          e.solid = f >= s_solid;
          g.edges.push_back(e);
          has_out.insert({static_cast<int>(t), u});
          has_in.insert({static_cast<int>(t) + 1, v});
        }
      }
    }
  }

  for (const auto& node : g.nodes) {
    if (node.epoch > 0 && !has_in.count({node.epoch, node.cluster}))
      g.born.emplace_back(node.epoch, node.cluster);
    if (node.epoch + 1 < static_cast<int>(epochs.size()) &&
        !has_out.count({node.epoch, node.cluster}))
      g.dying.emplace_back(node.epoch, node.cluster);
  }
  return g;
}

std::string graph_to_dot(const MigrationGraph& g) {
  std::ostringstream os;
  os << "digraph evolution {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (std::size_t t = 0; t < g.epoch_labels.size(); ++t) {
    os << "  subgraph cluster_" << t << " {\n    label=\"" << g.epoch_labels[t]
       << "\";\n    style=dashed;\n";
    for (const auto& node : g.nodes) {
      if (node.epoch != static_cast<int>(t)) continue;
      double w = 0.5 + 0.12 * std::sqrt(static_cast<double>(node.size));
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.3f", w);
      os << "    e" << node.epoch << "c" << node.cluster << " [label=\"";
      if (!node.label.empty()) os << node.label;
      else os << "c" << node.cluster;
      os << "\\n" << node.size << "\", width=" << buf << "];\n";
    }
    os << "  }\n";
  }
  for (const auto& e : g.edges) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", e.fraction);
    os << "  e" << e.epoch_from << "c" << e.from << " -> e" << (e.epoch_from + 1) << "c" << e.to
       << " [label=\"" << buf << "\", style=" << (e.solid ? "solid" : "dashed") << "];\n";
  }
  os << "}\n";
  return os.str();
}

std::string graph_to_json(const MigrationGraph& g, std::span<const MigrationMatrix> migrations) {
  nlohmann::ordered_json j;
  j["format"] = "cosmix-evolution-graph";
  j["version"] = 1;
  j["thresholds"] = {{"dashed", g.s_dashed}, {"solid", g.s_solid}};
  j["epochs"] = g.epoch_labels;
  j["nodes"] = nlohmann::ordered_json::array();
  for (const auto& n : g.nodes) {
    j["nodes"].push_back({{"epoch", n.epoch},
                          {"cluster", n.cluster},
                          {"size", n.size},
                          {"label", n.label}});
  }
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : g.edges) {
    j["edges"].push_back({{"epoch_from", e.epoch_from},
                          {"from", e.from},
                          {"to", e.to},
                          {"fraction", e.fraction},
                          {"style", e.solid ? "solid" : "dashed"}});
  }
  auto pair_list = [](const std::vector<std::pair<int, std::int32_t>>& v) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& [epoch, cluster] : v) arr.push_back({{"epoch", epoch}, {"cluster", cluster}});
    return arr;
  };
  j["born"] = pair_list(g.born);
  j["dying"] = pair_list(g.dying);
  j["migrations"] = nlohmann::ordered_json::array();
  for (std::size_t t = 0; t < migrations.size(); ++t) {
    nlohmann::ordered_json m;
    m["epoch_from"] = static_cast<int>(t);
    m["counts"] = nlohmann::ordered_json::array();
    m["fractions"] = nlohmann::ordered_json::array();
    for (std::int32_t u = 0; u < migrations[t].k_from; ++u) {
      nlohmann::ordered_json crow = nlohmann::ordered_json::array();
      nlohmann::ordered_json frow = nlohmann::ordered_json::array();
      for (std::int32_t v = 0; v < migrations[t].k_to; ++v) {
        crow.push_back(migrations[t].count(u, v));
        frow.push_back(migrations[t].fraction(u, v));
      }
      m["counts"].push_back(crow);
      m["fractions"].push_back(frow);
    }
    j["migrations"].push_back(m);
  }
  return j.dump(2) + "\n";
}

}  // namespace cosmix
