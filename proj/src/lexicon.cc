#include "pictopipe/lexicon.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <utility>

#include "pictopipe/error.h"
#include "pictopipe/strings.h"

namespace pictopipe {

namespace {

bool is_terminal_punct(char c) {
  return c == '.' || c == ',' || c == '!' || c == '?';
}

std::string auto_id(const std::vector<std::string>& phrase, int priority) {
  std::string id = join(phrase, "_");
  if (priority != 0) id += "@" + std::to_string(priority);
  return id;
}

int parse_priority(std::string_view text, std::size_t row) {
  text = trim(text);
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DataError("priority is not an integer: '" + std::string(text) + "'",
                    row);
  }
  return value;
}

LexiconEntry make_entry(std::string_view phrase_text, std::string image_ref,
                        std::string id, int priority, std::size_t row) {
  if (!is_valid_utf8(phrase_text) || !is_valid_utf8(image_ref) ||
      !is_valid_utf8(id)) {
    throw DataError("record is not valid UTF-8", row);
  }
  LexiconEntry entry;
  entry.phrase = normalize_phrase(phrase_text);
  if (entry.phrase.empty()) throw DataError("empty phrase", row);
  entry.image_ref = std::string(trim(image_ref));
  if (entry.image_ref.empty()) throw DataError("empty image_ref", row);
  entry.priority = priority;
  id = std::string(trim(id));
  entry.id = id.empty() ? auto_id(entry.phrase, priority) : std::move(id);
  return entry;
}

LexiconEntry parse_jsonl_record(const std::string& line, std::size_t row) {
  nlohmann::json record;
  try {
    record = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("invalid JSON: ") + e.what(), row);
  }
  if (!record.is_object()) throw DataError("record is not an object", row);
  auto string_field = [&](const char* key, bool required) -> std::string {
    auto it = record.find(key);
    if (it == record.end() || it->is_null()) {
      if (required) throw DataError(std::string("missing '") + key + "'", row);
      return {};
    }
    if (!it->is_string()) {
      throw DataError(std::string("'") + key + "' must be a string", row);
    }
    return it->get<std::string>();
  };
  int priority = 0;
  if (auto it = record.find("priority"); it != record.end() && !it->is_null()) {
    if (!it->is_number_integer()) {
      throw DataError("'priority' must be an integer", row);
    }
    priority = it->get<int>();
  }
  return make_entry(string_field("phrase", true),
                    string_field("image_ref", true), string_field("id", false),
                    priority, row);
}

LexiconEntry parse_tsv_record(const std::string& line, std::size_t row) {
  auto fields = split(line, '\t');
  if (fields.size() < 2 || fields.size() > 4) {
    throw DataError("expected 2-4 tab-separated columns, got " +
                        std::to_string(fields.size()),
                    row);
  }
  std::string id = fields.size() >= 3 ? fields[2] : std::string();
  int priority = fields.size() == 4 ? parse_priority(fields[3], row) : 0;
  return make_entry(fields[0], fields[1], std::move(id), priority, row);
}

}  // namespace

std::string LexiconEntry::phrase_text() const { return join(phrase, " "); }

LexiconFormat parse_lexicon_format(std::string_view name) {
  std::string lower = to_lower(name);
  if (lower == "jsonl") return LexiconFormat::kJsonl;
  if (lower == "tsv") return LexiconFormat::kTsv;
  throw InvalidArgument("unknown lexicon format '" + std::string(name) + "'");
}

LexiconFormat lexicon_format_for_path(std::string_view path) {
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() &&
           to_lower(path.substr(path.size() - suffix.size())) == suffix;
  };
  return ends_with(".jsonl") || ends_with(".json") ? LexiconFormat::kJsonl
                                                   : LexiconFormat::kTsv;
}

std::vector<std::string> normalize_phrase(std::string_view text) {
  std::string_view body = trim(text);
  while (!body.empty() && is_terminal_punct(body.back())) {
    body.remove_suffix(1);
    body = trim(body);
  }
  return split_whitespace(to_lower(body));
}

Lexicon::Lexicon(std::vector<LexiconEntry> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty()) throw DataError("lexicon is empty");

  std::set<std::pair<std::vector<std::string>, int>> seen;
  std::set<std::string> vocab;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const LexiconEntry& e = entries_[i];
    if (e.phrase.empty()) throw DataError("entry '" + e.id + "' has no phrase");
    for (const auto& tok : e.phrase) {
      if (tok.empty()) throw DataError("entry '" + e.id + "' has empty token");
    }
    if (e.image_ref.empty()) {
      throw DataError("entry '" + e.id + "' has empty image_ref");
    }
    if (!seen.emplace(e.phrase, e.priority).second) {
      throw DataError("duplicate phrase '" + e.phrase_text() +
                      "' at priority " + std::to_string(e.priority));
    }
    if (!by_id_.emplace(e.id, i).second) {
      throw DataError("duplicate id '" + e.id + "'");
    }
    index_[e.phrase.front()].push_back(i);
    max_ngram_ = std::max(max_ngram_, e.phrase.size());
    if (e.phrase.size() == 1) vocab.insert(e.phrase.front());
  }
  for (auto& [first, bucket] : index_) {
    std::sort(bucket.begin(), bucket.end(), [&](std::size_t a, std::size_t b) {
      const LexiconEntry& x = entries_[a];
      const LexiconEntry& y = entries_[b];
      if (x.phrase.size() != y.phrase.size()) {
        return x.phrase.size() > y.phrase.size();
      }
      if (x.priority != y.priority) return x.priority > y.priority;
      return x.id < y.id;
    });
  }
  vocab_.assign(vocab.begin(), vocab.end());
}

std::optional<LexiconMatch> Lexicon::lookup(std::span<const std::string> tokens,
                                            std::size_t start) const {
  if (start >= tokens.size()) {
    throw InvalidArgument("lookup start " + std::to_string(start) +
                          " out of range for " +
                          std::to_string(tokens.size()) + " tokens");
  }
  auto it = index_.find(tokens[start]);
  if (it == index_.end()) return std::nullopt;
  const std::size_t available = tokens.size() - start;
  for (std::size_t idx : it->second) {
    const LexiconEntry& e = entries_[idx];
    if (e.phrase.size() > available) continue;
    if (std::equal(e.phrase.begin(), e.phrase.end(),
                   tokens.begin() + static_cast<std::ptrdiff_t>(start))) {
      return LexiconMatch{&e, e.phrase.size()};
    }
  }
  return std::nullopt;
}

const LexiconEntry* Lexicon::find_id(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &entries_[it->second];
}

bool Lexicon::has_single_word(std::string_view word) const {
  return std::binary_search(vocab_.begin(), vocab_.end(), word);
}

std::span<const std::size_t> Lexicon::bucket(
    std::string_view first_token) const {
  auto it = index_.find(std::string(first_token));
  if (it == index_.end()) return {};
  return it->second;
}

Lexicon load_lexicon(std::istream& in, LexiconFormat format) {
  std::vector<LexiconEntry> entries;
  std::map<std::pair<std::vector<std::string>, int>, std::size_t> first_row;
  std::size_t row = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (format == LexiconFormat::kTsv && line.front() == '#') continue;
    LexiconEntry entry = format == LexiconFormat::kJsonl
                             ? parse_jsonl_record(line, row)
                             : parse_tsv_record(line, row);
    auto key = std::make_pair(entry.phrase, entry.priority);
    if (auto [it, inserted] = first_row.emplace(key, row); !inserted) {
      throw DataError("duplicate phrase '" + entry.phrase_text() +
                          "' at priority " + std::to_string(entry.priority) +
                          " (first seen on row " + std::to_string(it->second) +
                          ")",
                      row);
    }
    entries.push_back(std::move(entry));
  }
  if (entries.empty()) throw DataError("lexicon is empty");
  return Lexicon(std::move(entries));
}

Lexicon load_lexicon_file(const std::string& path, LexiconFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open lexicon file '" + path + "'");
  return load_lexicon(in, format);
}

Lexicon load_lexicon_file(const std::string& path) {
  return load_lexicon_file(path, lexicon_format_for_path(path));
}

}  // namespace pictopipe
