#include "pictopipe/textproc.h"

#include <algorithm>
#include <array>
#include <fstream>

#include "pictopipe/error.h"
#include "pictopipe/strings.h"

namespace pictopipe {

namespace {

constexpr std::array<std::pair<Pos, std::string_view>, 12> kPosNames = {{
    {Pos::kDet, "DET"},
    {Pos::kAdp, "ADP"},
    {Pos::kConj, "CONJ"},
    {Pos::kPron, "PRON"},
    {Pos::kNoun, "NOUN"},
    {Pos::kPropn, "PROPN"},
    {Pos::kVerb, "VERB"},
    {Pos::kAdj, "ADJ"},
    {Pos::kAdv, "ADV"},
    {Pos::kNum, "NUM"},
    {Pos::kIntj, "INTJ"},
    {Pos::kOther, "OTHER"},
}};

constexpr std::array<std::pair<EntityClass, std::string_view>, 4>
    kEntityNames = {{
        {EntityClass::kPerson, "PERSON"},
        {EntityClass::kOrg, "ORG"},
        {EntityClass::kLoc, "LOC"},
        {EntityClass::kMisc, "MISC"},
    }};

bool is_number(std::string_view s) {
  bool digit = false;
  for (char c : s) {
    if (c >= '0' && c <= '9') {
      digit = true;
    } else if (c != '.' && c != ',') {
      return false;
    }
  }
  return digit;
}

bool is_normalized(std::string_view s) {
  return !s.empty() && trim(s) == s && to_lower(s) == s;
}

std::ifstream open_or_throw(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(std::string("cannot open ") + what + " '" + path + "'");
  return in;
}

// Splits a two-column TSV row, rejecting other arities.
std::pair<std::string, std::string> two_columns(const std::string& line,
                                                std::size_t row) {
  auto fields = split(line, '\t');
  if (fields.size() != 2) {
    throw DataError("expected 2 tab-separated columns, got " +
                        std::to_string(fields.size()),
                    row);
  }
  return {std::string(trim(fields[0])), std::string(trim(fields[1]))};
}

bool skip_line(std::string_view line) {
  return trim(line).empty() || line.front() == '#';
}

}  // namespace

std::string_view pos_name(Pos pos) {
  for (const auto& [p, name] : kPosNames) {
    if (p == pos) return name;
  }
  return "OTHER";
}

std::optional<Pos> parse_pos(std::string_view name) {
  for (const auto& [p, n] : kPosNames) {
    if (n == name) return p;
  }
  return std::nullopt;
}

std::string_view entity_name(EntityClass cls) {
  for (const auto& [c, name] : kEntityNames) {
    if (c == cls) return name;
  }
  return "MISC";
}

std::optional<EntityClass> parse_entity(std::string_view name) {
  for (const auto& [c, n] : kEntityNames) {
    if (n == name) return c;
  }
  return std::nullopt;
}

std::string entity_label(const std::optional<EntityClass>& ne) {
  return ne ? std::string(entity_name(*ne)) : std::string("O");
}

void TagResources::finalize() {
  if (suffix_rules.empty()) throw DataError("suffix rules are empty");
  for (const auto& [word, tag] : tag_dictionary) {
    if (!is_normalized(word)) {
      throw DataError("tag dictionary word not normalized: '" + word + "'");
    }
  }
  for (const auto& word : stopwords) {
    if (!is_normalized(word)) {
      throw DataError("stopword not normalized: '" + word + "'");
    }
  }
  gazetteer_max_len = 0;
  for (const auto& [phrase, cls] : gazetteer) {
    auto parts = split_whitespace(phrase);
    if (parts.empty() || join(parts, " ") != phrase || to_lower(phrase) != phrase) {
      throw DataError("gazetteer phrase not normalized: '" + phrase + "'");
    }
    gazetteer_max_len = std::max(gazetteer_max_len, parts.size());
  }
}

std::unordered_map<std::string, Pos> load_tag_dictionary(std::istream& in) {
  std::unordered_map<std::string, Pos> dict;
  auto lines = read_lines(in);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (skip_line(lines[i])) continue;
    auto [word, tag_name] = two_columns(lines[i], i + 1);
    auto tag = parse_pos(tag_name);
    if (!tag) throw DataError("unknown POS tag '" + tag_name + "'", i + 1);
    dict[to_lower(word)] = *tag;
  }
  return dict;
}

std::vector<std::pair<std::string, Pos>> load_suffix_rules(std::istream& in) {
  std::vector<std::pair<std::string, Pos>> rules;
  auto lines = read_lines(in);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (skip_line(lines[i])) continue;
    auto [suffix, tag_name] = two_columns(lines[i], i + 1);
    auto tag = parse_pos(tag_name);
    if (!tag) throw DataError("unknown POS tag '" + tag_name + "'", i + 1);
    if (suffix.empty()) throw DataError("empty suffix", i + 1);
    rules.emplace_back(to_lower(suffix), *tag);
  }
  return rules;
}

std::unordered_set<std::string> load_stopwords(std::istream& in) {
  std::unordered_set<std::string> words;
  for (const auto& line : read_lines(in)) {
    if (skip_line(line)) continue;
    words.insert(to_lower(trim(line)));
  }
  return words;
}

std::unordered_map<std::string, EntityClass> load_gazetteer(std::istream& in) {
  std::unordered_map<std::string, EntityClass> gaz;
  auto lines = read_lines(in);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (skip_line(lines[i])) continue;
    auto [phrase, cls_name] = two_columns(lines[i], i + 1);
    auto cls = parse_entity(cls_name);
    if (!cls) throw DataError("unknown entity class '" + cls_name + "'", i + 1);
    auto parts = split_whitespace(to_lower(phrase));
    if (parts.empty()) throw DataError("empty gazetteer phrase", i + 1);
    gaz[join(parts, " ")] = *cls;
  }
  return gaz;
}

TagResources load_tag_resources(const TagResourcePaths& paths) {
  TagResources res;
  {
    auto in = open_or_throw(paths.tag_dictionary, "tag dictionary");
    res.tag_dictionary = load_tag_dictionary(in);
  }
  {
    auto in = open_or_throw(paths.suffix_rules, "suffix rules");
    res.suffix_rules = load_suffix_rules(in);
  }
  {
    auto in = open_or_throw(paths.stopwords, "stopword list");
    res.stopwords = load_stopwords(in);
  }
  if (!paths.gazetteer.empty()) {
    auto in = open_or_throw(paths.gazetteer, "gazetteer");
    res.gazetteer = load_gazetteer(in);
  }
  res.finalize();
  return res;
}

std::vector<Token> tokenize(std::string_view sentence) {
  std::vector<Token> tokens;
  auto emit = [&](std::size_t begin, std::size_t end, bool punct) {
    Token t;
    t.surface = std::string(sentence.substr(begin, end - begin));
    if (!punct) t.normalized = to_lower(t.surface);
    t.span = {begin, end};
    tokens.push_back(std::move(t));
  };

  std::size_t i = 0;
  while (i < sentence.size()) {
    while (i < sentence.size() && is_ascii_space(sentence[i])) ++i;
    std::size_t end = i;
    while (end < sentence.size() && !is_ascii_space(sentence[end])) ++end;
    if (end == i) break;

    std::size_t core_begin = i;
    std::size_t core_end = end;
    while (core_begin < core_end && is_ascii_punct(sentence[core_begin])) {
      ++core_begin;
    }
    while (core_end > core_begin && is_ascii_punct(sentence[core_end - 1])) {
      --core_end;
    }
    for (std::size_t k = i; k < core_begin; ++k) emit(k, k + 1, true);
    if (core_end > core_begin) emit(core_begin, core_end, false);
    for (std::size_t k = core_end; k < end; ++k) emit(k, k + 1, true);
    i = end;
  }
  return tokens;
}

void pos_tag(std::vector<Token>& tokens, const TagResources& res) {
  bool initial = true;
  for (Token& t : tokens) {
    if (t.is_punct()) {
      t.pos = Pos::kOther;
      continue;
    }
    const bool sentence_initial = initial;
    initial = false;

    if (is_number(t.normalized)) {
      t.pos = Pos::kNum;
      continue;
    }
    if (auto it = res.tag_dictionary.find(t.normalized);
        it != res.tag_dictionary.end()) {
      t.pos = it->second;
      continue;
    }
    if (!sentence_initial && starts_upper(t.surface)) {
      t.pos = Pos::kPropn;
      continue;
    }
    t.pos = Pos::kNoun;
    for (const auto& [suffix, tag] : res.suffix_rules) {
      if (t.normalized.size() >= suffix.size() + 2 &&
          t.normalized.ends_with(suffix)) {
        t.pos = tag;
        break;
      }
    }
  }
}

void mark_stopwords(std::vector<Token>& tokens, const TagResources& res) {
  for (Token& t : tokens) {
    t.is_stopword = !t.is_punct() && res.stopwords.contains(t.normalized);
  }
}

void detect_entities(std::vector<Token>& tokens, const TagResources& res) {
  for (Token& t : tokens) t.ne.reset();

  std::vector<bool> covered(tokens.size(), false);
  std::size_t i = 0;
  while (i < tokens.size()) {
    if (tokens[i].is_punct()) {
      ++i;
      continue;
    }
    std::size_t matched = 0;
    std::size_t max_len = std::min(res.gazetteer_max_len, tokens.size() - i);
    for (std::size_t len = max_len; len >= 1 && matched == 0; --len) {
      std::string key;
      bool ok = true;
      for (std::size_t k = i; k < i + len; ++k) {
        if (tokens[k].is_punct()) {
          ok = false;
          break;
        }
        if (k > i) key += ' ';
        key += tokens[k].normalized;
      }
      if (!ok) continue;
      if (auto it = res.gazetteer.find(key); it != res.gazetteer.end()) {
        for (std::size_t k = i; k < i + len; ++k) {
          tokens[k].ne = it->second;
          covered[k] = true;
        }
        matched = len;
      }
    }
    i += matched > 0 ? matched : 1;
  }

  for (std::size_t k = 0; k < tokens.size(); ++k) {
    if (!covered[k] && tokens[k].pos == Pos::kPropn) {
      tokens[k].ne = EntityClass::kMisc;
    }
  }
}

std::vector<Token> analyze(std::string_view sentence, const TagResources& res) {
  auto tokens = tokenize(sentence);
  pos_tag(tokens, res);
  mark_stopwords(tokens, res);
  detect_entities(tokens, res);
  return tokens;
}

std::vector<std::size_t> word_indices(const std::vector<Token>& tokens) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!tokens[i].is_punct()) out.push_back(i);
  }
  return out;
}

}  // namespace pictopipe
