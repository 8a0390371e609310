#include "cosmix/ingest.hpp"

#include <cctype>
#include <map>

namespace cosmix {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

std::string to_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(lower(c));
  return out;
}

// True when `pos` points at '@' that begins a line (only whitespace before it
// since the last newline). Used to resync after a malformed entry.
bool at_line_start_at(std::string_view s, std::size_t pos) {
  while (pos > 0) {
    char c = s[pos - 1];
    if (c == '\n') return true;
    if (c != ' ' && c != '\t' && c != '\r') return false;
    --pos;
  }
  return true;  // start of stream
}

std::size_t find_next_entry(std::string_view s, std::size_t from) {
  for (std::size_t i = from; i < s.size(); ++i)
    if (s[i] == '@' && at_line_start_at(s, i)) return i;
  return std::string_view::npos;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::string collapse_ws(std::string_view s) {
  std::string out;
  bool in_ws = false;
  for (char c : s) {
    if (is_space(c)) {
      in_ws = true;
      continue;
    }
    if (in_ws && !out.empty()) out.push_back(' ');
    in_ws = false;
    out.push_back(c);
  }
  return out;
}

// Letterless LaTeX macros with fixed replacements.
const std::map<std::string, std::string>& latex_letter_macros() {
  static const std::map<std::string, std::string> m = {
      {"i", "i"},   {"j", "j"},   {"ss", "ss"}, {"ae", "ae"}, {"AE", "AE"},
      {"oe", "oe"}, {"OE", "OE"}, {"o", "o"},   {"O", "O"},   {"l", "l"},
      {"L", "L"},   {"aa", "a"},  {"AA", "A"},  {"&", "&"},   {"%", "%"},
      {"$", "$"},   {"#", "#"},   {"_", "_"}};
  return m;
}

bool is_accent_symbol(char c) {
  switch (c) {
    case '\'': case '`': case '^': case '"': case '~': case '=': case '.':
      return true;
    default:
      return false;
  }
}

EntryKind bib_kind(std::string_view type) {
  std::string t = to_lower(type);
  if (t == "article") return EntryKind::article;
  if (t == "editorial") return EntryKind::editorial;
  if (t == "review") return EntryKind::review;
  if (t == "comment") return EntryKind::comment;
  return EntryKind::other;
}

EntryKind ris_kind(std::string_view ty) {
  std::string t = trim(ty);
  if (t == "JOUR") return EntryKind::article;
  if (t == "EDIT") return EntryKind::editorial;
  if (t == "REVW") return EntryKind::review;
  if (t == "COMM") return EntryKind::comment;
  return EntryKind::other;
}

std::optional<int> parse_year_prefix(std::string_view v) {
  std::string t = trim(v);
  std::size_t i = 0;
  long y = 0;
  while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) {
    y = y * 10 + (t[i] - '0');
    ++i;
    if (y > 99999) break;
  }
  if (i == 0) return std::nullopt;
  if (y < 1000 || y > 9999) return std::nullopt;
  return static_cast<int>(y);
}

Record record_from_fields(const std::map<std::string, std::string>& fields,
                          std::string entry_id, EntryKind kind) {
  Record r;
  r.entry_id = std::move(entry_id);
  r.kind = kind;
  if (auto it = fields.find("title"); it != fields.end())
    r.title = collapse_ws(strip_latex(it->second));
  if (auto it = fields.find("abstract"); it != fields.end()) {
    std::string ab = collapse_ws(strip_latex(it->second));
    if (!ab.empty()) r.abstract = std::move(ab);
  }
  if (auto it = fields.find("journal"); it != fields.end())
    r.journal = collapse_ws(strip_latex(it->second));
  if (auto it = fields.find("year"); it != fields.end())
    r.year = parse_year_prefix(it->second);
  return r;
}

}  // namespace

std::string strip_latex(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '$') {
      // drop inline math entirely; an unmatched '$' is dropped alone
      std::size_t close = text.find('$', i + 1);
      if (close == std::string_view::npos) {
        ++i;
      } else {
        i = close + 1;
      }
      continue;
    }
    if (c == '{' || c == '}') {
      ++i;
      continue;
    }
    if (c == '\\' && i + 1 < text.size()) {
      char n = text[i + 1];
      if (is_accent_symbol(n)) {
        i += 2;  // keep the accented base letter that follows
        continue;
      }
      if (!is_alpha(n)) {
        // escaped punctuation: keep the character itself
        out.push_back(n);
        i += 2;
        continue;
      }
      std::size_t j = i + 1;
      while (j < text.size() && is_alpha(text[j])) ++j;
      std::string cmd(text.substr(i + 1, j - i - 1));
      auto& macros = latex_letter_macros();
      if (auto it = macros.find(cmd); it != macros.end()) {
        out += it->second;
        i = j;
        continue;
      }
      // single-letter accent commands taking an argument (\c{c}, \v{s}, ...)
      if (cmd.size() == 1 && std::string("cuvHtdb").find(cmd[0]) != std::string::npos) {
        i = j;
        continue;
      }
      // formatting command (\emph, \textbf, ...): drop the name, keep content
      while (j < text.size() && is_space(text[j])) ++j;
      i = j;
      continue;
    }
    out.push_back(c);
    ++i;
  }
  return out;
}

ParseResult parse_bibtex(std::string_view bytes) {
  ParseResult res;
  std::size_t pos = find_next_entry(bytes, 0);
  int synth_id = 0;

  while (pos != std::string_view::npos) {
    const std::size_t entry_start = pos;
    auto fail = [&](const std::string& why) {
      res.diagnostics.push_back({entry_start, why});
      pos = find_next_entry(bytes, entry_start + 1);
    };

    std::size_t i = pos + 1;
    std::size_t tb = i;
    while (i < bytes.size() && is_alpha(bytes[i])) ++i;
    std::string type(bytes.substr(tb, i - tb));
    while (i < bytes.size() && is_space(bytes[i])) ++i;
    if (type.empty() || i >= bytes.size() || bytes[i] != '{') {
      fail("expected @type{ at entry start");
      continue;
    }
    ++i;  // past '{'

    // citation key up to the first comma (may be empty for keyless exports)
    std::size_t kb = i;
    while (i < bytes.size() && bytes[i] != ',' && bytes[i] != '}' && bytes[i] != '\n') ++i;
    if (i >= bytes.size()) {
      fail("unterminated entry");
      continue;
    }
    std::string key = trim(bytes.substr(kb, i - kb));
    if (bytes[i] == ',') ++i;

    std::map<std::string, std::string> fields;
    bool ok = true;
    bool closed = false;
    while (i < bytes.size()) {
      while (i < bytes.size() && (is_space(bytes[i]) || bytes[i] == ',')) ++i;
      if (i >= bytes.size()) {
        ok = false;
        break;
      }
      if (bytes[i] == '}') {
        closed = true;
        ++i;
        break;
      }
      std::size_t nb = i;
      while (i < bytes.size() &&
             (is_alpha(bytes[i]) || std::isdigit(static_cast<unsigned char>(bytes[i])) ||
              bytes[i] == '_' || bytes[i] == '-')) {
        ++i;
      }
      std::string name = to_lower(bytes.substr(nb, i - nb));
      while (i < bytes.size() && is_space(bytes[i])) ++i;
      if (name.empty() || i >= bytes.size() || bytes[i] != '=') {
        ok = false;
        break;
      }
      ++i;
      while (i < bytes.size() && is_space(bytes[i])) ++i;
      if (i >= bytes.size()) {
        ok = false;
        break;
      }

      std::string value;
      if (bytes[i] == '{') {
        int depth = 1;
        std::size_t vb = ++i;
        while (i < bytes.size() && depth > 0) {
          if (bytes[i] == '@' && at_line_start_at(bytes, i)) break;  // runaway value
          if (bytes[i] == '{') ++depth;
          else if (bytes[i] == '}') --depth;
          if (depth > 0) ++i;
        }
        if (depth != 0) {
          ok = false;
          break;
        }
        value.assign(bytes.substr(vb, i - vb));
        ++i;  // past closing '}'
      } else if (bytes[i] == '"') {
        int depth = 0;
        std::size_t vb = ++i;
        while (i < bytes.size()) {
          if (bytes[i] == '@' && at_line_start_at(bytes, i)) break;
          if (bytes[i] == '{') ++depth;
          else if (bytes[i] == '}') --depth;
          else if (bytes[i] == '"' && depth == 0) break;
          ++i;
        }
        if (i >= bytes.size() || bytes[i] != '"') {
          ok = false;
          break;
        }
        value.assign(bytes.substr(vb, i - vb));
        ++i;
      } else {
        std::size_t vb = i;
        while (i < bytes.size() && bytes[i] != ',' && bytes[i] != '}' && bytes[i] != '\n') ++i;
        value = trim(bytes.substr(vb, i - vb));
      }
      fields[name] = value;
    }

    if (!ok || !closed) {
      fail("malformed entry (unbalanced braces or truncated)");
      continue;
    }

    if (key.empty()) key = "bib-" + std::to_string(synth_id);
    ++synth_id;
    res.records.push_back(record_from_fields(fields, key, bib_kind(type)));
    pos = find_next_entry(bytes, i);
  }
  return res;
}

ParseResult parse_ris(std::string_view bytes) {
  ParseResult res;
  std::map<std::string, std::string> fields;
  std::string last_tag;
  bool in_record = false;
  std::size_t record_start = 0;
  int synth_id = 0;

  auto flush = [&](bool terminated, std::size_t offset) {
    if (!in_record) return;
    if (!terminated)
      res.diagnostics.push_back({offset, "record without ER terminator; salvaged"});
    std::map<std::string, std::string> mapped;
    auto take = [&](const char* tag) -> std::optional<std::string> {
      if (auto it = fields.find(tag); it != fields.end()) return it->second;
      return std::nullopt;
    };
    if (auto v = take("TI")) mapped["title"] = *v;
    else if (auto v2 = take("T1")) mapped["title"] = *v2;
    if (auto v = take("AB")) mapped["abstract"] = *v;
    if (auto v = take("PY")) mapped["year"] = *v;
    if (auto v = take("JO")) mapped["journal"] = *v;
    else if (auto v2 = take("JF")) mapped["journal"] = *v2;
    EntryKind kind = EntryKind::other;
    if (auto v = take("TY")) kind = ris_kind(*v);
    std::string id;
    if (auto v = take("ID")) id = trim(*v);
    if (id.empty()) id = "ris-" + std::to_string(synth_id);
    ++synth_id;
    res.records.push_back(record_from_fields(mapped, id, kind));
    fields.clear();
    last_tag.clear();
    in_record = false;
  };

  std::size_t line_start = 0;
  while (line_start <= bytes.size()) {
    std::size_t nl = bytes.find('\n', line_start);
    std::string_view line = bytes.substr(
        line_start, nl == std::string_view::npos ? bytes.size() - line_start : nl - line_start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    // tag line: two uppercase/digit chars, spaces, '-', optional space
    bool tagged = false;
    std::string tag;
    std::string_view value;
    if (line.size() >= 3 && std::isupper(static_cast<unsigned char>(line[0])) &&
        (std::isupper(static_cast<unsigned char>(line[1])) ||
         std::isdigit(static_cast<unsigned char>(line[1])))) {
      std::size_t p = 2;
      while (p < line.size() && line[p] == ' ') ++p;
      if (p < line.size() && line[p] == '-') {
        ++p;
        if (p < line.size() && line[p] == ' ') ++p;
        tagged = true;
        tag.assign(line.substr(0, 2));
        value = line.substr(p);
      }
    }

    if (tagged) {
      if (tag == "ER") {
        flush(true, line_start);
      } else {
        if (!in_record) {
          in_record = true;
          record_start = line_start;
        }
        auto& slot = fields[tag];
        if (slot.empty()) slot = trim(value);
        else slot += " " + trim(value);  // repeated tag: concatenate
        last_tag = tag;
      }
    } else if (in_record && !trim(line).empty() && !last_tag.empty()) {
      fields[last_tag] += " " + trim(line);  // continuation line
    }

    if (nl == std::string_view::npos) break;
    line_start = nl + 1;
  }
  flush(false, record_start);
  return res;
}

std::vector<Record> filter_records(const std::vector<Record>& records,
                                   const ExclusionRules& rules) {
  std::vector<std::string> prefixes;
  prefixes.reserve(rules.title_prefixes.size());
  for (const auto& p : rules.title_prefixes) prefixes.push_back(to_lower(p));

  std::vector<Record> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (rules.require_abstract && !r.abstract) continue;
    std::string title = to_lower(r.title);
    bool excluded = false;
    for (const auto& p : prefixes) {
      if (!p.empty() && title.size() >= p.size() && title.compare(0, p.size(), p) == 0) {
        excluded = true;
        break;
      }
    }
    if (!excluded) out.push_back(r);
  }
  return out;
}

ToDocumentsResult to_documents(const std::vector<Record>& records,
                               const EpochScheme& epoching) {
  ToDocumentsResult res;
  res.corpus.docs.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const Record& r = records[i];
    Document d;
    d.doc_id = static_cast<std::int32_t>(i);
    d.text = r.title;
    if (r.abstract && !r.abstract->empty()) {
      if (!d.text.empty()) d.text += " ";
      d.text += *r.abstract;
    }
    if (!r.journal.empty()) d.journal = r.journal;
    if (r.year) {
      d.epoch = epoching.epoch_for(*r.year);
      if (!d.epoch)
        res.warnings.push_back({i, "year " + std::to_string(*r.year) + " outside all epochs"});
    } else {
      res.warnings.push_back({i, "record has no year; epoch left unset"});
    }
    res.corpus.docs.push_back(std::move(d));
  }
  return res;
}

}  // namespace cosmix
