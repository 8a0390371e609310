#include "cosmix/core.hpp"

#include <algorithm>

namespace cosmix {

std::string to_string(EntryKind k) {
  switch (k) {
    case EntryKind::article: return "article";
    case EntryKind::editorial: return "editorial";
    case EntryKind::review: return "review";
    case EntryKind::comment: return "comment";
    case EntryKind::other: return "other";
  }
  return "other";
}

EntryKind entry_kind_from_string(const std::string& s) {
  if (s == "article") return EntryKind::article;
  if (s == "editorial") return EntryKind::editorial;
  if (s == "review") return EntryKind::review;
  if (s == "comment") return EntryKind::comment;
  return EntryKind::other;
}

std::vector<std::string> Corpus::epoch_labels() const {
  std::vector<std::string> out;
  for (const auto& d : docs) {
    if (!d.epoch) continue;
    if (std::find(out.begin(), out.end(), *d.epoch) == out.end())
      out.push_back(*d.epoch);
  }
  return out;
}

Corpus Corpus::slice_epoch(const std::string& epoch) const {
  Corpus out;
  for (const auto& d : docs) {
    if (d.epoch && *d.epoch == epoch) {
      Document copy = d;
      copy.doc_id = static_cast<std::int32_t>(out.docs.size());
      out.docs.push_back(std::move(copy));
    }
  }
  return out;
}

EpochScheme EpochScheme::default_scheme() {
  EpochScheme s;
  s.spans = {{1970, 1979, "1970-1979"},
             {1980, 1989, "1980-1989"},
             {1990, 1999, "1990-1999"},
             {2000, 2009, "2000-2009"},
             {2010, 2015, "2010-2015"}};
  return s;
}

std::optional<std::string> EpochScheme::epoch_for(int year) const {
  for (const auto& sp : spans)
    if (year >= sp.lo && year <= sp.hi) return sp.label;
  return std::nullopt;
}

ExclusionRules ExclusionRules::default_rules() {
  ExclusionRules r;
  r.title_prefixes = {"A conversation with",
                      "Studies in the History of Statistics and Probability"};
  r.require_abstract = true;
  return r;
}

}  // namespace cosmix
