#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cosmix/core.hpp"
#include "cosmix/dynamics.hpp"
#include "cosmix/textprep.hpp"

namespace cosmix::testkit {

// Synthetic planted-topic corpora. Every global topic owns an exclusive
// vocabulary block; documents are multinomial draws mixing that block with a
// shared pool. Transition mechanics create crisp dynamics: split/die sources
// lean part of their mass toward a destination block, survive/merge targets
// cover their parents' blocks.
struct TopicTransition {
  enum class Kind { none, survive, split, merge, die };
  Kind kind = Kind::none;
  std::vector<std::string> to;      // survive/merge: one name; split: children;
                                    // die: scatter targets (default all next topics)
  std::vector<double> proportions;  // split only, sums to 1
};

struct TopicSpec {
  std::string name;
  int docs = 0;
  TopicTransition next;
};

struct EpochSpec {
  std::string label;
  std::vector<TopicSpec> topics;
};

struct PlantedScenario {
  int shared_terms = 80;
  int exclusive_terms = 24;  // per global topic
  double separation = 0.6;   // token mass on the topic's own block
  double affinity = 0.3;     // mass leaned toward a destination block
  int doc_len_min = 30;
  int doc_len_max = 120;
  std::vector<EpochSpec> epochs;

  static PlantedScenario from_json_text(const std::string& text);
  std::string to_json_text() const;
};

struct PlantedEpoch {
  Corpus corpus;       // docs carry the epoch label; text round-trips the counts
  DocTermMatrix raw;   // counts over the epoch's observed vocabulary
  std::vector<std::int32_t> labels;  // topic index within this epoch
  std::vector<std::string> topic_names;
};

struct PlantedData {
  std::vector<PlantedEpoch> epochs;
  std::vector<MigrationMatrix> true_migrations;  // planted destination counts
  MigrationGraph true_graph;                     // at thresholds 0.40 / 0.70
};

PlantedData generate(const PlantedScenario& scenario, std::uint64_t seed);

// Convenience: one epoch, n_topics equal-size topics.
PlantedScenario single_epoch_scenario(int n_topics, int docs_per_topic, int shared_terms,
                                      int exclusive_terms, double separation);

double adjusted_rand_index(std::span<const std::int32_t> a, std::span<const std::int32_t> b);

// term id <-> token string (consonant alphabet, stemmer- and stopword-inert)
std::string term_token(std::int32_t term_id);

}  // namespace cosmix::testkit
