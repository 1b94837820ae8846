#include "pictopipe/gec.h"

#include <algorithm>
#include <array>
#include <fstream>
#include <httplib.h>
#include <nlohmann/json.hpp>
#include <set>

#include "pictopipe/strings.h"

namespace pictopipe {

namespace {

constexpr std::array<std::string_view, 10> kDuplicableAux = {
    "is", "are", "am", "was", "were", "can", "could", "will", "would", "should"};
constexpr std::array<std::string_view, 9> kModals = {
    "can", "could", "will", "would", "should", "may", "might", "must", "shall"};
constexpr std::array<std::string_view, 3> kDoForms = {"do", "does", "did"};
constexpr std::array<std::string_view, 7> kSubjectPronouns = {
    "i", "you", "we", "they", "he", "she", "it"};
constexpr std::array<std::string_view, 11> kDeterminers = {
    "the", "a", "an", "my", "your", "his", "her", "our", "their", "this", "that"};
constexpr std::array<std::string_view, 10> kClauseWords = {
    "that", "who", "which", "what", "where", "when", "if", "because", "and", "or"};
constexpr std::array<std::string_view, 4> kPlayForms = {"play", "plays",
                                                        "played", "playing"};
constexpr std::array<std::string_view, 3> kArticles = {"the", "a", "an"};

template <std::size_t N>
bool one_of(const std::array<std::string_view, N>& set, std::string_view w) {
  return std::find(set.begin(), set.end(), w) != set.end();
}

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool letters_only(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  });
}

bool has_upper(std::string_view s) {
  return std::any_of(s.begin(), s.end(),
                     [](char c) { return c >= 'A' && c <= 'Z'; });
}

// Short consonant-vowel-consonant stems double their final consonant
// ("run" -> "running").
bool doubles_final(std::string_view b) {
  if (b.size() < 3 || b.size() > 4) return false;
  char last = b[b.size() - 1];
  return !is_vowel(last) && last != 'w' && last != 'x' && last != 'y' &&
         is_vowel(b[b.size() - 2]) && !is_vowel(b[b.size() - 3]);
}

std::vector<std::string> plural_forms(const std::string& b) {
  std::vector<std::string> out{b + "s"};
  if (b.ends_with("s") || b.ends_with("x") || b.ends_with("z") ||
      b.ends_with("ch") || b.ends_with("sh")) {
    out.push_back(b + "es");
  }
  if (b.size() >= 2 && b.back() == 'y' && !is_vowel(b[b.size() - 2])) {
    out.push_back(b.substr(0, b.size() - 1) + "ies");
  }
  return out;
}

std::vector<std::string> verb_forms(const std::string& b) {
  std::vector<std::string> out;
  const bool consonant_y =
      b.size() >= 2 && b.back() == 'y' && !is_vowel(b[b.size() - 2]);
  if (b.back() == 'e') {
    out.push_back(b + "d");
  } else if (consonant_y) {
    out.push_back(b.substr(0, b.size() - 1) + "ied");
  } else {
    out.push_back(b + "ed");
  }
  if (b.ends_with("ie")) {
    out.push_back(b.substr(0, b.size() - 2) + "ying");
  } else if (b.back() == 'e' && !b.ends_with("ee") && b.size() > 2) {
    out.push_back(b.substr(0, b.size() - 1) + "ing");
  } else {
    out.push_back(b + "ing");
  }
  if (doubles_final(b)) {
    out.push_back(b + b.back() + "ed");
    out.push_back(b + b.back() + "ing");
  }
  return out;
}

// All strings at Levenshtein distance exactly one over a-z.
std::set<std::string> edits1(const std::string& w) {
  std::set<std::string> out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    out.insert(w.substr(0, i) + w.substr(i + 1));
  }
  for (std::size_t i = 0; i <= w.size(); ++i) {
    for (char c = 'a'; c <= 'z'; ++c) {
      out.insert(w.substr(0, i) + c + w.substr(i));
      if (i < w.size() && w[i] != c) {
        std::string sub = w;
        sub[i] = c;
        out.insert(std::move(sub));
      }
    }
  }
  out.erase(w);
  return out;
}

std::optional<std::string> spelling_candidate(const std::string& w,
                                              const GecRuleSet& rules) {
  auto neighbors = edits1(w);
  std::set<std::string> direct;
  for (const auto& n : neighbors) {
    if (rules.spelling_dictionary.contains(n)) direct.insert(n);
  }
  if (direct.size() == 1) return *direct.begin();
  if (direct.size() > 1) return std::nullopt;

  // A garbled regular inflection ("lovedd") is restored to its base form.
  std::set<std::string> bases;
  for (const auto& n : neighbors) {
    if (auto it = rules.inflections.find(n); it != rules.inflections.end()) {
      bases.insert(it->second.begin(), it->second.end());
    }
  }
  if (bases.size() == 1) return *bases.begin();
  return std::nullopt;
}

struct Piece {
  std::string text;
  Span src;
  bool punct = false;
  bool inserted = false;
  bool deleted = false;
  std::string category;
};

class Rewriter {
 public:
  explicit Rewriter(std::string_view source) : source_(source) {
    for (const Token& t : tokenize(source)) {
      pieces_.push_back({t.surface, t.span, t.is_punct(), false, false, {}});
    }
  }

  // Live (not deleted) word pieces, in order.
  std::vector<std::size_t> words() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      if (!pieces_[i].deleted && !pieces_[i].punct) out.push_back(i);
    }
    return out;
  }

  std::optional<std::size_t> last_live() const {
    for (std::size_t i = pieces_.size(); i-- > 0;) {
      if (!pieces_[i].deleted) return i;
    }
    return std::nullopt;
  }

  // True if no live punctuation sits between pieces a < b.
  bool adjacent(std::size_t a, std::size_t b) const {
    for (std::size_t i = a + 1; i < b; ++i) {
      if (!pieces_[i].deleted && pieces_[i].punct) return false;
    }
    return true;
  }

  std::string lower(std::size_t i) const { return to_lower(pieces_[i].text); }
  const std::string& text(std::size_t i) const { return pieces_[i].text; }

  void replace(std::size_t i, std::string text, std::string_view category) {
    pieces_[i].text = std::move(text);
    pieces_[i].category = category;
  }

  void remove(std::size_t i, std::string_view category) {
    pieces_[i].deleted = true;
    pieces_[i].category = category;
  }

  void insert_before(std::size_t i, std::string text,
                     std::string_view category) {
    Piece p;
    p.text = std::move(text);
    p.src = {pieces_[i].src.begin, pieces_[i].src.begin};
    p.inserted = true;
    p.category = category;
    pieces_.insert(pieces_.begin() + static_cast<std::ptrdiff_t>(i),
                   std::move(p));
  }

  // Live piece texts; changes whenever any rule fires.
  std::string state() const {
    std::string out;
    for (const Piece& p : pieces_) {
      if (p.deleted) continue;
      out += p.text;
      out += '\x1f';
    }
    return out;
  }

  std::vector<GecEdit> edits() const {
    std::vector<GecEdit> out;
    std::size_t consumed = 0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const Piece& p = pieces_[i];
      if (p.inserted) {
        if (!p.deleted) {
          out.push_back({{p.src.begin, p.src.begin}, "", p.text + " ",
                         p.category});
        }
        continue;
      }
      Span span = p.src;
      if (p.deleted) {
        std::optional<std::size_t> next_begin;
        for (std::size_t j = i + 1; j < pieces_.size(); ++j) {
          if (!pieces_[j].inserted) {
            next_begin = pieces_[j].src.begin;
            break;
          }
        }
        std::size_t prev_end = 0;
        for (std::size_t j = i; j-- > 0;) {
          if (!pieces_[j].inserted) {
            prev_end = pieces_[j].src.end;
            break;
          }
        }
        if (next_begin && *next_begin > p.src.end) {
          span.end = *next_begin;
        } else if (prev_end < p.src.begin && prev_end >= consumed) {
          span.begin = prev_end;
        }
      } else if (p.text == source_.substr(p.src.begin, p.src.end - p.src.begin)) {
        continue;
      }
      out.push_back({span,
                     std::string(source_.substr(span.begin, span.end - span.begin)),
                     p.deleted ? std::string() : p.text, p.category});
      consumed = span.end;
    }
    return out;
  }

 private:
  std::string_view source_;
  std::vector<Piece> pieces_;
};

void rule_aux_duplication(Rewriter& rw) {
  auto w = rw.words();
  auto last = rw.last_live();
  if (w.size() < 4 || !last || rw.text(*last) != "?") return;
  const std::string aux = rw.lower(w[0]);
  if (!one_of(kDuplicableAux, aux)) return;
  for (std::size_t j = 2; j + 1 < w.size() && j <= 4; ++j) {
    if (!rw.adjacent(w[j - 1], w[j])) return;
    if (one_of(kClauseWords, rw.lower(w[j - 1]))) return;
    if (rw.lower(w[j]) == aux) {
      rw.remove(w[j], "aux_duplication");
      return;
    }
  }
}

void rule_modal_fronting(Rewriter& rw) {
  auto w = rw.words();
  if (w.size() < 4 || !one_of(kDoForms, rw.lower(w[0]))) return;
  std::size_t subject_len = 0;
  if (one_of(kSubjectPronouns, rw.lower(w[1]))) {
    subject_len = 1;
  } else if (one_of(kDeterminers, rw.lower(w[1])) && w.size() >= 5) {
    subject_len = 2;
  } else {
    return;
  }
  const std::size_t modal_at = 1 + subject_len;
  if (modal_at + 1 >= w.size()) return;
  const std::string modal = rw.lower(w[modal_at]);
  if (!one_of(kModals, modal)) return;
  if (!rw.adjacent(w[0], w[modal_at])) return;
  rw.replace(w[0], match_case(rw.text(w[0]), modal), "fronting");
  rw.remove(w[modal_at], "fronting");
}

bool takes_infinitive(const std::string& word, const GecRuleSet& rules) {
  if (rules.infinitive_verbs.contains(word)) return true;
  auto it = rules.inflections.find(word);
  if (it == rules.inflections.end()) return false;
  return std::any_of(it->second.begin(), it->second.end(), [&](const auto& b) {
    return rules.infinitive_verbs.contains(b);
  });
}

void rule_infinitive(Rewriter& rw, const GecRuleSet& rules) {
  auto w = rw.words();
  std::vector<std::size_t> anchors;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (!rw.adjacent(w[i], w[i + 1])) continue;
    if (takes_infinitive(rw.lower(w[i]), rules) &&
        rules.base_verbs.contains(rw.lower(w[i + 1]))) {
      anchors.push_back(w[i + 1]);
    }
  }
  for (auto it = anchors.rbegin(); it != anchors.rend(); ++it) {
    rw.insert_before(*it, "to", "infinitive");
  }
}

void rule_play_article(Rewriter& rw, const GecRuleSet& rules) {
  auto w = rw.words();
  for (std::size_t i = 0; i + 2 < w.size(); ++i) {
    if (one_of(kPlayForms, rw.lower(w[i])) &&
        one_of(kArticles, rw.lower(w[i + 1])) &&
        rules.bare_nouns.contains(rw.lower(w[i + 2])) &&
        rw.adjacent(w[i], w[i + 2])) {
      rw.remove(w[i + 1], "article");
    }
  }
}

void rule_spelling(Rewriter& rw, const GecRuleSet& rules) {
  auto w = rw.words();
  for (std::size_t k = 0; k < w.size(); ++k) {
    const std::string& t = rw.text(w[k]);
    if (!letters_only(t)) continue;
    // Acronyms and names are left alone; only a Title-case first word is
    // checked.
    if (has_upper(t) && (k != 0 || has_upper(std::string_view(t).substr(1)))) {
      continue;
    }
    std::string lw = to_lower(t);
    if (rules.is_known(lw)) continue;
    if (auto fix = spelling_candidate(lw, rules)) {
      rw.replace(w[k], match_case(t, *fix), "spelling");
    }
  }
}

void rule_indefinite_plural(Rewriter& rw, const GecRuleSet& rules) {
  auto w = rw.words();
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    const std::string article = rw.lower(w[i]);
    if (article != "a" && article != "an") continue;
    if (!rw.adjacent(w[i], w[i + 1])) continue;
    const std::string noun = rw.lower(w[i + 1]);
    if (!letters_only(noun) || rules.spelling_dictionary.contains(noun)) {
      continue;
    }
    if (rules.plurals.contains(noun)) rw.remove(w[i], "plural");
  }
}

void rule_irregular_past(Rewriter& rw, const GecRuleSet& rules) {
  for (std::size_t i : rw.words()) {
    if (auto it = rules.irregular_past.find(rw.lower(i));
        it != rules.irregular_past.end()) {
      rw.replace(i, match_case(rw.text(i), it->second), "irregular_past");
    }
  }
}

// Keeps the sentence-initial capital when the first word was removed or
// replaced by a rule.
void restore_initial_case(Rewriter& rw, std::string_view first_surface) {
  if (!starts_upper(first_surface)) return;
  auto w = rw.words();
  if (w.empty()) return;
  const std::string& now = rw.text(w[0]);
  if (starts_upper(now)) return;
  rw.replace(w[0], match_case(first_surface, now), "capitalization");
}

std::vector<std::string> read_word_list(const std::string& path,
                                        const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(std::string("cannot open ") + what + " '" + path + "'");
  std::vector<std::string> words;
  for (const auto& line : read_lines(in)) {
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    words.push_back(to_lower(t));
  }
  return words;
}

std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
  auto scheme = endpoint.find("://");
  if (scheme == std::string::npos) {
    throw GecServiceError("endpoint must be an http URL: '" + endpoint + "'");
  }
  auto path = endpoint.find('/', scheme + 3);
  if (path == std::string::npos) return {endpoint, "/"};
  return {endpoint.substr(0, path), endpoint.substr(path)};
}

}  // namespace

std::string_view backend_name(GecBackend backend) {
  return backend == GecBackend::kRules ? "RULES" : "EXTERNAL";
}

std::string apply_edits(std::string_view source,
                        const std::vector<GecEdit>& edits) {
  std::string out;
  std::size_t cursor = 0;
  for (const GecEdit& e : edits) {
    if (e.span.begin < cursor || e.span.end < e.span.begin ||
        e.span.end > source.size()) {
      throw InvalidArgument("edits overlap or are out of order");
    }
    if (source.substr(e.span.begin, e.span.end - e.span.begin) != e.original) {
      throw InvalidArgument("edit original does not match source text");
    }
    out.append(source.substr(cursor, e.span.begin - cursor));
    out.append(e.replacement);
    cursor = e.span.end;
  }
  out.append(source.substr(cursor));
  return out;
}

void GecRuleSet::finalize() {
  auto check_words = [](const auto& words, const char* what) {
    if (words.empty()) throw DataError(std::string(what) + " is empty");
    for (const auto& w : words) {
      if (w.empty() || to_lower(w) != w || trim(w) != w) {
        throw DataError(std::string(what) + " entry not normalized: '" + w + "'");
      }
    }
  };
  check_words(spelling_dictionary, "spelling dictionary");
  check_words(infinitive_verbs, "infinitive verb list");
  check_words(bare_nouns, "bare noun list");
  check_words(base_verbs, "base verb list");
  if (irregular_past.empty()) throw DataError("irregular past map is empty");
  for (const auto& [wrong, right] : irregular_past) {
    if (wrong.empty() || to_lower(wrong) != wrong || right.empty() ||
        to_lower(right) != right) {
      throw DataError("irregular past entry not normalized: '" + wrong + "'");
    }
    if (irregular_past.contains(right)) {
      throw DataError("irregular past target '" + right + "' is also a key");
    }
  }

  inflections.clear();
  plurals.clear();
  auto add = [](auto& map, const std::string& form, const std::string& base) {
    auto& bases = map[form];
    if (std::find(bases.begin(), bases.end(), base) == bases.end()) {
      bases.push_back(base);
    }
  };
  std::set<std::string> bases(spelling_dictionary.begin(),
                              spelling_dictionary.end());
  bases.insert(infinitive_verbs.begin(), infinitive_verbs.end());
  bases.insert(base_verbs.begin(), base_verbs.end());
  bases.insert(bare_nouns.begin(), bare_nouns.end());
  for (const auto& b : bases) {
    if (!letters_only(b)) continue;
    for (const auto& f : plural_forms(b)) {
      add(inflections, f, b);
      add(plurals, f, b);
    }
    for (const auto& f : verb_forms(b)) add(inflections, f, b);
  }
  for (auto& [form, list] : inflections) std::sort(list.begin(), list.end());
  for (auto& [form, list] : plurals) std::sort(list.begin(), list.end());
}

bool GecRuleSet::is_known(std::string_view lower_word) const {
  std::string w(lower_word);
  return spelling_dictionary.contains(w) || irregular_past.contains(w) ||
         inflections.contains(w) || infinitive_verbs.contains(w) ||
         base_verbs.contains(w) || bare_nouns.contains(w);
}

GecRuleSet load_gec_rules(const GecRulePaths& paths) {
  GecRuleSet rules;
  {
    std::ifstream in(paths.irregular_past, std::ios::binary);
    if (!in) {
      throw DataError("cannot open irregular past map '" +
                      paths.irregular_past + "'");
    }
    auto lines = read_lines(in);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (trim(lines[i]).empty() || lines[i].front() == '#') continue;
      auto fields = split(lines[i], '\t');
      if (fields.size() != 2) {
        throw DataError("expected 2 tab-separated columns", i + 1);
      }
      rules.irregular_past[to_lower(trim(fields[0]))] = to_lower(trim(fields[1]));
    }
  }
  for (auto& w : read_word_list(paths.spelling_dictionary, "spelling dictionary")) {
    rules.spelling_dictionary.insert(std::move(w));
  }
  for (auto& w : read_word_list(paths.infinitive_verbs, "infinitive verb list")) {
    rules.infinitive_verbs.insert(std::move(w));
  }
  for (auto& w : read_word_list(paths.bare_nouns, "bare noun list")) {
    rules.bare_nouns.insert(std::move(w));
  }
  for (auto& w : read_word_list(paths.base_verbs, "base verb list")) {
    rules.base_verbs.insert(std::move(w));
  }
  rules.finalize();
  return rules;
}

GecResult correct_rules(std::string_view sentence, const GecRuleSet& rules) {
  Rewriter rw(sentence);
  auto initial = rw.words();
  std::string first_surface = initial.empty() ? "" : rw.text(initial.front());

  // A repaired word can expose a structural pattern ("lovedd play"), so the
  // pass is repeated until it changes nothing.
  constexpr int kMaxPasses = 8;
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    const std::string before = rw.state();
    rule_aux_duplication(rw);
    rule_modal_fronting(rw);
    rule_infinitive(rw, rules);
    rule_play_article(rw, rules);
    rule_spelling(rw, rules);
    rule_indefinite_plural(rw, rules);
    rule_irregular_past(rw, rules);
    if (rw.state() == before) break;
  }
  restore_initial_case(rw, first_surface);

  GecResult result;
  result.edits = rw.edits();
  result.corrected = apply_edits(sentence, result.edits);
  result.backend = GecBackend::kRules;
  return result;
}

std::vector<GecEdit> diff_edits(std::string_view source,
                                std::string_view corrected,
                                std::string_view category) {
  const auto a = tokenize(source);
  const auto b = tokenize(corrected);
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<std::vector<std::size_t>> lcs(n + 1,
                                            std::vector<std::size_t>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      lcs[i][j] = a[i].surface == b[j].surface
                      ? lcs[i + 1][j + 1] + 1
                      : std::max(lcs[i + 1][j], lcs[i][j + 1]);
    }
  }

  std::vector<GecEdit> edits;
  std::size_t s_prev = 0;
  std::size_t c_prev = 0;
  auto flush = [&](std::size_t s_next, std::size_t c_next) {
    std::string_view from = source.substr(s_prev, s_next - s_prev);
    std::string_view to = corrected.substr(c_prev, c_next - c_prev);
    if (from == to) return;
    std::size_t lead = 0;
    while (lead < from.size() && lead < to.size() && from[lead] == to[lead] &&
           is_ascii_space(from[lead])) {
      ++lead;
    }
    std::size_t tail = 0;
    while (tail < from.size() - lead && tail < to.size() - lead &&
           from[from.size() - 1 - tail] == to[to.size() - 1 - tail] &&
           is_ascii_space(from[from.size() - 1 - tail])) {
      ++tail;
    }
    Span span{s_prev + lead, s_next - tail};
    edits.push_back({span, std::string(from.substr(lead, from.size() - lead - tail)),
                     std::string(to.substr(lead, to.size() - lead - tail)),
                     std::string(category)});
  };

  std::size_t i = 0;
  std::size_t j = 0;
  while (i < n && j < m) {
    if (a[i].surface == b[j].surface) {
      flush(a[i].span.begin, b[j].span.begin);
      s_prev = a[i].span.end;
      c_prev = b[j].span.end;
      ++i;
      ++j;
    } else if (lcs[i + 1][j] >= lcs[i][j + 1]) {
      ++i;
    } else {
      ++j;
    }
  }
  flush(source.size(), corrected.size());
  return edits;
}

GecResult correct_external(std::string_view sentence,
                           const std::string& endpoint,
                           std::chrono::milliseconds timeout) {
  auto [base, path] = split_endpoint(endpoint);
  httplib::Client client(base);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  nlohmann::json body = {{"text", std::string(sentence)}};
  auto res = client.Post(path, body.dump(), "application/json");
  if (!res) {
    throw GecServiceError("GEC service request failed: " +
                          httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw GecServiceError("GEC service returned HTTP " +
                          std::to_string(res->status));
  }
  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::parse_error& e) {
    throw GecServiceError(std::string("GEC service sent invalid JSON: ") +
                          e.what());
  }
  if (!reply.is_object() || !reply.contains("corrected") ||
      !reply["corrected"].is_string()) {
    throw GecServiceError("GEC service response lacks a 'corrected' string");
  }

  GecResult result;
  result.corrected = reply["corrected"].get<std::string>();
  result.edits = diff_edits(sentence, result.corrected, "external");
  result.backend = GecBackend::kExternal;
  return result;
}

GecResult correct(std::string_view sentence, const GecRuleSet& rules,
                  const GecConfig& config) {
  if (config.backend == GecBackend::kExternal && !config.endpoint.empty()) {
    try {
      return correct_external(sentence, config.endpoint, config.timeout);
    } catch (const GecServiceError& e) {
      GecResult result = correct_rules(sentence, rules);
      result.fallback = true;
      result.fallback_reason = e.what();
      return result;
    }
  }
  GecResult result = correct_rules(sentence, rules);
  if (config.backend == GecBackend::kExternal) {
    result.fallback = true;
    result.fallback_reason = "no GEC endpoint configured";
  }
  return result;
}

}  // namespace pictopipe
