#include "cosmix/testkit.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

#include "cosmix/rng.hpp"

namespace cosmix::testkit {

namespace {

// consonants excluding 's' and 'y': no Porter rule or stopword can touch these
constexpr char kAlphabet[] = "bcdfghjklmnpqrtvwxz";
constexpr int kBase = 19;
constexpr int kTokenLen = 5;

const char* kind_name(TopicTransition::Kind k) {
  switch (k) {
    case TopicTransition::Kind::none: return "none";
    case TopicTransition::Kind::survive: return "survive";
    case TopicTransition::Kind::split: return "split";
    case TopicTransition::Kind::merge: return "merge";
    case TopicTransition::Kind::die: return "die";
  }
  return "none";
}

TopicTransition::Kind kind_from_name(const std::string& s) {
  if (s == "survive") return TopicTransition::Kind::survive;
  if (s == "split") return TopicTransition::Kind::split;
  if (s == "merge") return TopicTransition::Kind::merge;
  if (s == "die") return TopicTransition::Kind::die;
  if (s == "none") return TopicTransition::Kind::none;
  throw data_error("scenario: unknown transition kind '" + s + "'");
}

}  // namespace

std::string term_token(std::int32_t term_id) {
  std::string s(kTokenLen, kAlphabet[0]);
  std::int32_t v = term_id;
  for (int pos = kTokenLen - 1; pos >= 0 && v > 0; --pos) {
    s[static_cast<std::size_t>(pos)] = kAlphabet[v % kBase];
    v /= kBase;
  }
  return s;
}

PlantedScenario PlantedScenario::from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  PlantedScenario s;
  s.shared_terms = j.value("shared_terms", s.shared_terms);
  s.exclusive_terms = j.value("exclusive_terms", s.exclusive_terms);
  s.separation = j.value("separation", s.separation);
  s.affinity = j.value("affinity", s.affinity);
  if (j.contains("doc_len")) {
    s.doc_len_min = j["doc_len"].at(0).get<int>();
    s.doc_len_max = j["doc_len"].at(1).get<int>();
  }
  for (const auto& je : j.at("epochs")) {
    EpochSpec ep;
    ep.label = je.at("label").get<std::string>();
    for (const auto& jt : je.at("topics")) {
      TopicSpec t;
      t.name = jt.at("name").get<std::string>();
      t.docs = jt.at("docs").get<int>();
      if (jt.contains("next")) {
        t.next.kind = kind_from_name(jt["next"].value("kind", "none"));
        if (jt["next"].contains("to")) {
          if (jt["next"]["to"].is_string())
            t.next.to.push_back(jt["next"]["to"].get<std::string>());
          else
            for (const auto& x : jt["next"]["to"]) t.next.to.push_back(x.get<std::string>());
        }
        if (jt["next"].contains("proportions"))
          for (const auto& x : jt["next"]["proportions"]) t.next.proportions.push_back(x.get<double>());
      }
      ep.topics.push_back(std::move(t));
    }
    s.epochs.push_back(std::move(ep));
  }
  return s;
}

std::string PlantedScenario::to_json_text() const {
  nlohmann::ordered_json j;
  j["format"] = "cosmix-scenario";
  j["version"] = 1;
  j["shared_terms"] = shared_terms;
  j["exclusive_terms"] = exclusive_terms;
  j["separation"] = separation;
  j["affinity"] = affinity;
  j["doc_len"] = {doc_len_min, doc_len_max};
  j["epochs"] = nlohmann::ordered_json::array();
  for (const auto& ep : epochs) {
    nlohmann::ordered_json je;
    je["label"] = ep.label;
    je["topics"] = nlohmann::ordered_json::array();
    for (const auto& t : ep.topics) {
      nlohmann::ordered_json jt;
      jt["name"] = t.name;
      jt["docs"] = t.docs;
      if (t.next.kind != TopicTransition::Kind::none) {
        jt["next"]["kind"] = kind_name(t.next.kind);
        if (!t.next.to.empty()) jt["next"]["to"] = t.next.to;
        if (!t.next.proportions.empty()) jt["next"]["proportions"] = t.next.proportions;
      }
      je["topics"].push_back(std::move(jt));
    }
    j["epochs"].push_back(std::move(je));
  }
  return j.dump(2) + "\n";
}

PlantedScenario single_epoch_scenario(int n_topics, int docs_per_topic, int shared_terms,
                                      int exclusive_terms, double separation) {
  PlantedScenario s;
  s.shared_terms = shared_terms;
  s.exclusive_terms = exclusive_terms;
  s.separation = separation;
  EpochSpec ep;
  ep.label = "epoch-0";
  for (int t = 0; t < n_topics; ++t)
    ep.topics.push_back({"topic-" + std::to_string(t), docs_per_topic, {}});
  s.epochs.push_back(std::move(ep));
  return s;
}

namespace {

struct GlobalTopics {
  std::vector<std::string> names;
  std::map<std::string, int> index;

  int id(const std::string& name) const {
    auto it = index.find(name);
    if (it == index.end()) throw data_error("scenario: unknown topic '" + name + "'");
    return it->second;
  }
};

GlobalTopics collect_topics(const PlantedScenario& s) {
  GlobalTopics g;
  for (const auto& ep : s.epochs) {
    for (const auto& t : ep.topics) {
      if (!g.index.count(t.name)) {
        g.index[t.name] = static_cast<int>(g.names.size());
        g.names.push_back(t.name);
      }
    }
  }
  return g;
}

// categorical distribution over term ids as (cumulative mass, id) blocks
struct BlockDist {
  struct Block {
    std::int32_t first_term;
    std::int32_t n_terms;
    double mass;
  };
  std::vector<Block> blocks;
  double total = 0.0;

  void add(std::int32_t first, std::int32_t count, double mass) {
    if (count <= 0 || mass <= 0.0) return;
    blocks.push_back({first, count, mass});
    total += mass;
  }

  std::int32_t sample(Rng& rng) const {
    double u = rng.uniform() * total;
    double acc = 0.0;
    for (const auto& b : blocks) {
      acc += b.mass;
      if (u < acc || &b == &blocks.back()) {
        std::int32_t off = static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(b.n_terms)));
        return b.first_term + off;
      }
    }
    return blocks.back().first_term;
  }
};

// largest-remainder allocation of n docs across proportions
std::vector<int> apportion(int n, std::span<const double> proportions) {
  std::vector<int> out(proportions.size(), 0);
  std::vector<std::pair<double, std::size_t>> rem;
  int used = 0;
  for (std::size_t i = 0; i < proportions.size(); ++i) {
    double exact = proportions[i] * n;
    out[i] = static_cast<int>(exact);
    used += out[i];
    rem.push_back({exact - out[i], i});
  }
  std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (int r = 0; r < n - used; ++r) ++out[rem[static_cast<std::size_t>(r)].second];
  return out;
}

}  // namespace

PlantedData generate(const PlantedScenario& s, std::uint64_t seed) {
  if (s.epochs.empty()) throw data_error("scenario: no epochs");
  if (!(s.separation > 0.0 && s.separation < 1.0))
    throw data_error("scenario: separation must lie in (0,1)");
  if (s.affinity < 0.0 || s.affinity >= s.separation)
    throw data_error("scenario: affinity must lie in [0, separation)");
  GlobalTopics global = collect_topics(s);
  const std::int32_t S = s.shared_terms;
  const std::int32_t E = s.exclusive_terms;

  auto own_block = [&](int gid) { return S + static_cast<std::int32_t>(gid) * E; };

  PlantedData data;
  data.epochs.resize(s.epochs.size());

  for (std::size_t t = 0; t < s.epochs.size(); ++t) {
    const EpochSpec& ep = s.epochs[t];
    PlantedEpoch& out = data.epochs[t];
    Rng rng(Rng::derive(seed, 0xe90000 + t));

    std::map<std::string, int> topic_at;  // name -> index within this epoch
    for (std::size_t c = 0; c < ep.topics.size(); ++c) {
      topic_at[ep.topics[c].name] = static_cast<int>(c);
      out.topic_names.push_back(ep.topics[c].name);
    }

    // survive/merge parents from the previous epoch widen a topic's support
    std::map<std::string, std::vector<int>> parent_blocks;
    if (t > 0) {
      for (const auto& prev : s.epochs[t - 1].topics) {
        if (prev.next.kind == TopicTransition::Kind::survive ||
            prev.next.kind == TopicTransition::Kind::merge) {
          std::string target = prev.next.to.empty() ? prev.name : prev.next.to[0];
          parent_blocks[target].push_back(global.id(prev.name));
        }
      }
    }

    // destinations of this epoch's docs in the next epoch, for ground truth
    // and for the affinity lean of split/die documents
    std::vector<std::int32_t> dest;  // per doc: next-epoch topic index or -1
    const EpochSpec* next_ep = t + 1 < s.epochs.size() ? &s.epochs[t + 1] : nullptr;
    std::map<std::string, int> next_topic_at;
    if (next_ep)
      for (std::size_t c = 0; c < next_ep->topics.size(); ++c)
        next_topic_at[next_ep->topics[c].name] = static_cast<int>(c);

    std::vector<std::map<std::int32_t, double>> doc_counts;

    for (const auto& topic : ep.topics) {
      const int gid = global.id(topic.name);

      // own-block shares: parents replace the topic's own block when present
      std::vector<int> blocks;
      if (auto it = parent_blocks.find(topic.name); it != parent_blocks.end()) blocks = it->second;
      else blocks = {gid};

      // per-doc destination names (split/die lean toward their target)
      std::vector<std::string> doc_dest(static_cast<std::size_t>(topic.docs));
      if (next_ep) {
        switch (topic.next.kind) {
          case TopicTransition::Kind::split: {
            if (topic.next.to.size() < 2 || topic.next.proportions.size() != topic.next.to.size())
              throw data_error("scenario: split needs >= 2 targets with proportions");
            auto alloc = apportion(topic.docs, topic.next.proportions);
            int d = 0;
            for (std::size_t c = 0; c < topic.next.to.size(); ++c)
              for (int r = 0; r < alloc[c]; ++r) doc_dest[static_cast<std::size_t>(d++)] = topic.next.to[c];
            break;
          }
          case TopicTransition::Kind::die: {
            std::vector<std::string> targets = topic.next.to;
            if (targets.empty())
              for (const auto& nt : next_ep->topics) targets.push_back(nt.name);
            if (targets.empty()) break;
            for (int d = 0; d < topic.docs; ++d)
              doc_dest[static_cast<std::size_t>(d)] = targets[static_cast<std::size_t>(d) % targets.size()];
            break;
          }
          case TopicTransition::Kind::survive:
          case TopicTransition::Kind::merge: {
            std::string target = topic.next.to.empty() ? topic.name : topic.next.to[0];
            for (auto& nm : doc_dest) nm = target;
            break;
          }
          case TopicTransition::Kind::none:
            break;
        }
      }

      const bool leaning = topic.next.kind == TopicTransition::Kind::split ||
                           topic.next.kind == TopicTransition::Kind::die;
      for (int d = 0; d < topic.docs; ++d) {
        BlockDist dist;
        double own_mass = s.separation;
        if (leaning && next_ep && !doc_dest[static_cast<std::size_t>(d)].empty()) {
          own_mass = s.separation - s.affinity;
          dist.add(own_block(global.id(doc_dest[static_cast<std::size_t>(d)])), E, s.affinity);
        }
        for (int b : blocks)
          dist.add(own_block(b), E, own_mass / static_cast<double>(blocks.size()));
        dist.add(0, S, 1.0 - s.separation);

        int len = s.doc_len_min +
                  static_cast<int>(rng.below(static_cast<std::uint64_t>(s.doc_len_max - s.doc_len_min + 1)));
        std::map<std::int32_t, double> counts;
        for (int w = 0; w < len; ++w) counts[dist.sample(rng)] += 1.0;
        doc_counts.push_back(std::move(counts));

        out.labels.push_back(static_cast<std::int32_t>(topic_at.at(topic.name)));
        if (next_ep && !doc_dest[static_cast<std::size_t>(d)].empty())
          dest.push_back(static_cast<std::int32_t>(next_topic_at.at(doc_dest[static_cast<std::size_t>(d)])));
        else
          dest.push_back(-1);
      }
    }

    // observed vocabulary: term ids with at least one draw, ascending
    std::map<std::int32_t, std::int32_t> term_remap;
    for (const auto& counts : doc_counts)
      for (const auto& [term, c] : counts) term_remap.emplace(term, 0);
    std::vector<std::string> terms;
    {
      std::int32_t next_col = 0;
      for (auto& [term, col] : term_remap) {
        col = next_col++;
        terms.push_back(term_token(term));
      }
    }

    out.raw.vocab = Vocabulary::from_sorted_terms(std::move(terms));
    out.raw.weighting = Weighting::raw_count;
    out.raw.row_start.assign(doc_counts.size() + 1, 0);
    for (std::size_t j = 0; j < doc_counts.size(); ++j) {
      for (const auto& [term, c] : doc_counts[j]) {
        out.raw.cols.push_back(term_remap.at(term));
        out.raw.vals.push_back(c);
      }
      out.raw.row_start[j + 1] = static_cast<std::int64_t>(out.raw.cols.size());
    }
    out.raw.recompute_norms();

    for (std::size_t j = 0; j < doc_counts.size(); ++j) {
      Document doc;
      doc.doc_id = static_cast<std::int32_t>(j);
      doc.epoch = ep.label;
      doc.journal = "synthetic";
      std::string text;
      for (const auto& [term, c] : doc_counts[j]) {
        for (int r = 0; r < static_cast<int>(c); ++r) {
          if (!text.empty()) text += ' ';
          text += term_token(term);
        }
      }
      doc.text = std::move(text);
      out.corpus.docs.push_back(std::move(doc));
    }

    // planted migration counts
    if (next_ep) {
      std::vector<std::int32_t> from_labels = out.labels;
      std::vector<std::int32_t> to_labels = dest;
      // docs with no destination (none-kind sources) are excluded from truth
      std::vector<std::int32_t> f2, t2;
      for (std::size_t j = 0; j < dest.size(); ++j) {
        if (dest[j] >= 0) {
          f2.push_back(from_labels[j]);
          t2.push_back(to_labels[j]);
        }
      }
      data.true_migrations.push_back(
          migration_matrix(f2, t2, static_cast<std::int32_t>(ep.topics.size()),
                           static_cast<std::int32_t>(next_ep->topics.size())));
    }
  }

  if (s.epochs.size() >= 2) {
    std::vector<EpochClusters> ecs;
    for (std::size_t t = 0; t < s.epochs.size(); ++t) {
      EpochClusters ec;
      ec.epoch_label = s.epochs[t].label;
      for (const auto& topic : s.epochs[t].topics) {
        ec.sizes.push_back(topic.docs);
        ec.labels.push_back(topic.name);
      }
      ecs.push_back(std::move(ec));
    }
    data.true_graph = build_evolution_graph(ecs, data.true_migrations, 0.40, 0.70);
  }
  return data;
}

double adjusted_rand_index(std::span<const std::int32_t> a, std::span<const std::int32_t> b) {
  if (a.size() != b.size()) throw data_error("adjusted_rand_index: length mismatch");
  const std::size_t n = a.size();
  if (n < 2) return 1.0;

  std::map<std::int32_t, int> amap, bmap;
  for (std::int32_t x : a) amap.emplace(x, 0);
  for (std::int32_t x : b) bmap.emplace(x, 0);
  int ra = 0, rb = 0;
  for (auto& [k, v] : amap) v = ra++;
  for (auto& [k, v] : bmap) v = rb++;

  std::vector<std::int64_t> table(static_cast<std::size_t>(ra) * static_cast<std::size_t>(rb), 0);
  std::vector<std::int64_t> arow(static_cast<std::size_t>(ra), 0), bcol(static_cast<std::size_t>(rb), 0);
  for (std::size_t j = 0; j < n; ++j) {
    int ia = amap.at(a[j]);
    int ib = bmap.at(b[j]);
    ++table[static_cast<std::size_t>(ia) * static_cast<std::size_t>(rb) + static_cast<std::size_t>(ib)];
    ++arow[static_cast<std::size_t>(ia)];
    ++bcol[static_cast<std::size_t>(ib)];
  }
  auto choose2 = [](std::int64_t x) { return 0.5 * static_cast<double>(x) * static_cast<double>(x - 1); };
  double index = 0.0;
  for (std::int64_t c : table) index += choose2(c);
  double sum_a = 0.0, sum_b = 0.0;
  for (std::int64_t c : arow) sum_a += choose2(c);
  for (std::int64_t c : bcol) sum_b += choose2(c);
  double total = choose2(static_cast<std::int64_t>(n));
  double expected = sum_a * sum_b / total;
  double max_index = 0.5 * (sum_a + sum_b);
  double denom = max_index - expected;
  if (std::abs(denom) < 1e-12) return 1.0;
  return (index - expected) / denom;
}

}  // namespace cosmix::testkit
