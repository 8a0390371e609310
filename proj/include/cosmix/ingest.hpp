#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cosmix/core.hpp"

namespace cosmix {

struct ParseResult {
  std::vector<Record> records;
  std::vector<Diagnostic> diagnostics;
};

// Tolerant BibTeX subset: entries, braced/quoted fields, nested braces,
// '%' line comments between entries. No @string macros or @preamble.
// Malformed entries are skipped with a diagnostic, never fatal.
ParseResult parse_bibtex(std::string_view bytes);

// RIS records: `TAG  - value` lines terminated by `ER  -`. A record missing
// its terminator at end of input is salvaged with a diagnostic.
ParseResult parse_ris(std::string_view bytes);

// Strips $...$ math segments and reduces LaTeX accent/format macros to
// base letters; removes grouping braces. Exposed for tests.
std::string strip_latex(std::string_view text);

std::vector<Record> filter_records(const std::vector<Record>& records,
                                   const ExclusionRules& rules);

struct ToDocumentsResult {
  Corpus corpus;
  std::vector<Diagnostic> warnings;  // offsets are record indices
};

ToDocumentsResult to_documents(const std::vector<Record>& records,
                               const EpochScheme& epoching);

}  // namespace cosmix
