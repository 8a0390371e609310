#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cosmix {

// Thrown for malformed or inconsistent input data (exit code 2 in the CLI).
struct data_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a numerical procedure cannot produce a result (exit code 3).
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class EntryKind { article, editorial, review, comment, other };

std::string to_string(EntryKind k);
EntryKind entry_kind_from_string(const std::string& s);

// One bibliography entry as parsed from a .bib or .ris file.
struct Record {
  std::string entry_id;
  std::string title;
  std::optional<std::string> abstract;
  std::optional<int> year;
  std::string journal;
  EntryKind kind = EntryKind::other;
};

// A parse problem tied to a byte offset in the source stream.
struct Diagnostic {
  std::size_t offset = 0;
  std::string message;
};

struct Document {
  std::int32_t doc_id = 0;
  std::string text;  // title followed by abstract
  std::optional<std::string> epoch;
  std::optional<std::string> journal;
};

struct Corpus {
  std::vector<Document> docs;

  // Distinct epoch labels in first-appearance order.
  std::vector<std::string> epoch_labels() const;
  Corpus slice_epoch(const std::string& epoch) const;
};

struct EpochSpan {
  int lo = 0;
  int hi = 0;
  std::string label;
};

struct EpochScheme {
  std::vector<EpochSpan> spans;

  // The five spans 1970-1979 ... 2010-2015.
  static EpochScheme default_scheme();
  std::optional<std::string> epoch_for(int year) const;
};

struct ExclusionRules {
  std::vector<std::string> title_prefixes;  // case-insensitive prefix match
  bool require_abstract = false;

  static ExclusionRules default_rules();
};

}  // namespace cosmix
