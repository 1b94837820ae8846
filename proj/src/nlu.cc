#include "pictopipe/nlu.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "pictopipe/error.h"
#include "pictopipe/strings.h"

namespace pictopipe {

namespace {

constexpr std::array<std::string_view, 4> kPersonPronouns = {"he", "she", "him",
                                                             "her"};
constexpr std::array<std::string_view, 1> kThingPronouns = {"it"};
constexpr std::array<std::string_view, 2> kPluralPronouns = {"they", "them"};

template <std::size_t N>
bool one_of(const std::array<std::string_view, N>& set, std::string_view w) {
  return std::find(set.begin(), set.end(), w) != set.end();
}

double parse_double(std::string_view text, std::size_t row) {
  double value = 0.0;
  auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DataError("non-numeric component '" + std::string(text) + "'", row);
  }
  return value;
}

std::size_t parse_count(std::string_view text, const char* what) {
  std::size_t value = 0;
  auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DataError(std::string("header ") + what + " is not a count", 1);
  }
  return value;
}

bool is_function_word(const Token& t) {
  return t.pos == Pos::kDet || t.pos == Pos::kAdp || t.pos == Pos::kConj ||
         t.is_stopword;
}

}  // namespace

void EmbeddingTable::add(std::string word, std::vector<double> vector) {
  if (word.empty()) throw DataError("empty embedding word");
  if (vector.size() != dim_) {
    throw DataError("vector for '" + word + "' has " +
                    std::to_string(vector.size()) + " components, expected " +
                    std::to_string(dim_));
  }
  for (double c : vector) {
    if (!std::isfinite(c)) {
      throw DataError("vector for '" + word + "' has a non-finite component");
    }
  }
  auto [it, inserted] = vectors_.emplace(word, std::move(vector));
  if (!inserted) throw DataError("duplicate embedding word '" + word + "'");
  order_.push_back(std::move(word));
}

const std::vector<double>* EmbeddingTable::find(std::string_view word) const {
  auto it = vectors_.find(std::string(word));
  return it == vectors_.end() ? nullptr : &it->second;
}

EmbeddingTable load_embeddings(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("missing embeddings header", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_whitespace(line);
  if (header.size() != 2) throw DataError("header must be 'V D'", 1);
  const std::size_t rows = parse_count(header[0], "V");
  const std::size_t dim = parse_count(header[1], "D");
  if (dim == 0) throw DataError("dimension must be positive", 1);

  EmbeddingTable table(dim);
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split_whitespace(line);
    if (fields.size() != dim + 1) {
      throw DataError("expected word and " + std::to_string(dim) +
                          " components, got " +
                          std::to_string(fields.size() - 1),
                      row);
    }
    std::vector<double> v;
    v.reserve(dim);
    for (std::size_t k = 1; k < fields.size(); ++k) {
      v.push_back(parse_double(fields[k], row));
    }
    try {
      table.add(fields[0], std::move(v));
    } catch (const DataError& e) {
      throw DataError(e.what(), row);
    }
  }
  if (table.size() != rows) {
    throw DataError("header declares " + std::to_string(rows) +
                    " rows but file has " + std::to_string(table.size()));
  }
  return table;
}

EmbeddingTable load_embeddings_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open embeddings '" + path + "'");
  return load_embeddings(in);
}

void write_embeddings(std::ostream& out, const EmbeddingTable& table) {
  out << table.size() << ' ' << table.dim() << '\n';
  out << std::setprecision(17);
  for (const auto& word : table.words()) {
    out << word;
    for (double c : *table.find(word)) out << ' ' << c;
    out << '\n';
  }
}

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw InvalidArgument("cosine_similarity dimension mismatch: " +
                          std::to_string(u.size()) + " vs " +
                          std::to_string(v.size()));
  }
  double dot = 0.0;
  double uu = 0.0;
  double vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

void SynonymGraph::add(const std::string& a, const std::string& b) {
  if (a.empty() || b.empty()) throw DataError("empty synonym");
  if (a == b) return;
  auto link = [this](const std::string& from, const std::string& to) {
    auto& list = adjacency_[from];
    auto pos = std::lower_bound(list.begin(), list.end(), to);
    if (pos == list.end() || *pos != to) list.insert(pos, to);
  };
  link(a, b);
  link(b, a);
}

std::span<const std::string> SynonymGraph::neighbors(
    std::string_view word) const {
  auto it = adjacency_.find(std::string(word));
  if (it == adjacency_.end()) return {};
  return it->second;
}

SynonymGraph load_synonyms(std::istream& in) {
  SynonymGraph graph;
  auto lines = read_lines(in);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty() || lines[i].front() == '#') continue;
    auto fields = split(lines[i], '\t');
    if (fields.size() != 2) {
      throw DataError("expected 2 tab-separated columns", i + 1);
    }
    auto a = to_lower(trim(fields[0]));
    auto b = to_lower(trim(fields[1]));
    if (a.empty() || b.empty()) throw DataError("empty synonym", i + 1);
    graph.add(a, b);
  }
  return graph;
}

SynonymGraph load_synonyms_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open synonyms '" + path + "'");
  return load_synonyms(in);
}

std::optional<Substitute> find_substitute(
    std::string_view word, std::span<const std::string> lexicon_vocab,
    const EmbeddingTable& emb, const SynonymGraph& syn, double tau) {
  auto in_vocab = [&](std::string_view w) {
    return std::binary_search(lexicon_vocab.begin(), lexicon_vocab.end(), w);
  };
  if (in_vocab(word)) {
    throw InvalidArgument("find_substitute called with lexicon word '" +
                          std::string(word) + "'");
  }
  const std::vector<double>* wv = emb.find(word);

  std::optional<Substitute> best;
  for (const std::string& cand : syn.neighbors(word)) {
    if (!in_vocab(cand)) continue;
    const std::vector<double>* cv = emb.find(cand);
    double sim = (wv != nullptr && cv != nullptr) ? cosine_similarity(*wv, *cv)
                                                  : 1.0;
    // neighbors() is sorted, so strict comparison keeps the smaller word.
    if (!best || sim > best->similarity) best = Substitute{cand, sim};
  }
  if (best) return best;

  if (wv == nullptr) return std::nullopt;
  for (const std::string& cand : lexicon_vocab) {
    const std::vector<double>* cv = emb.find(cand);
    if (cv == nullptr) continue;
    double sim = cosine_similarity(*wv, *cv);
    if (!best || sim > best->similarity) best = Substitute{cand, sim};
  }
  if (best && best->similarity >= tau) return best;
  return std::nullopt;
}

SessionContext::SessionContext(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw InvalidArgument("session capacity must be positive");
}

void SessionContext::push(std::string noun, std::optional<EntityClass> cls) {
  auto it = std::find_if(nouns_.begin(), nouns_.end(),
                         [&](const auto& e) { return e.first == noun; });
  if (it != nouns_.end()) nouns_.erase(it);
  nouns_.emplace_back(std::move(noun), cls);
  while (nouns_.size() > capacity_) nouns_.pop_front();
}

void SessionContext::observe(const std::vector<Token>& tokens) {
  for (const Token& t : tokens) {
    if (t.is_punct()) continue;
    if (t.pos == Pos::kNoun || t.pos == Pos::kPropn) push(t.normalized, t.ne);
  }
}

std::vector<Token> resolve_pronouns(std::vector<Token> tokens,
                                    const SessionContext& ctx,
                                    const Lexicon& lex) {
  const auto& nouns = ctx.nouns();
  auto antecedent = [&](auto accepts) -> const std::pair<std::string, std::optional<EntityClass>>* {
    for (auto it = nouns.rbegin(); it != nouns.rend(); ++it) {
      if (accepts(it->second) && lex.has_single_word(it->first)) return &*it;
    }
    return nullptr;
  };
  auto is_person = [](const std::optional<EntityClass>& c) {
    return c == EntityClass::kPerson;
  };

  for (Token& t : tokens) {
    if (t.is_punct()) continue;
    const std::pair<std::string, std::optional<EntityClass>>* ref = nullptr;
    if (one_of(kPersonPronouns, t.normalized)) {
      ref = antecedent(is_person);
    } else if (one_of(kThingPronouns, t.normalized)) {
      ref = antecedent([&](const auto& c) { return !is_person(c); });
    } else if (one_of(kPluralPronouns, t.normalized)) {
      ref = antecedent([](const auto&) { return true; });
    } else {
      continue;
    }
    if (ref == nullptr) continue;
    t.normalized = ref->first;
    t.pos = ref->second ? Pos::kPropn : Pos::kNoun;
    t.ne = ref->second;
    t.is_stopword = false;
  }
  return tokens;
}

PictogramSequence resolve_unknowns(PictogramSequence seq,
                                   const NluResources& deps) {
  if (deps.lexicon == nullptr) {
    throw InvalidArgument("resolve_unknowns requires a lexicon");
  }
  static const EmbeddingTable kNoEmbeddings;
  static const SynonymGraph kNoSynonyms;
  const EmbeddingTable& emb = deps.embeddings ? *deps.embeddings : kNoEmbeddings;
  const SynonymGraph& syn = deps.synonyms ? *deps.synonyms : kNoSynonyms;
  const auto& vocab = deps.lexicon->single_word_vocab();

  for (Segment& seg : seq.segments) {
    if (!std::holds_alternative<Unknown>(seg.kind)) continue;
    if (seg.tokens.size() == 1) {
      const Token& t = seq.source[seg.tokens.begin];
      if (!t.is_punct() && !deps.lexicon->has_single_word(t.normalized)) {
        if (auto sub = find_substitute(t.normalized, vocab, emb, syn, deps.tau)) {
          std::vector<std::string> key{sub->word};
          auto match = deps.lexicon->lookup(key, 0);
          if (!match) {
            throw ConsistencyError("substitute '" + sub->word +
                                   "' has no lexicon entry");
          }
          seg.kind = Substituted{t.normalized, sub->word, match->entry->id,
                                 sub->similarity};
          continue;
        }
      }
    }
    bool all_function = true;
    for (std::size_t k = seg.tokens.begin; k < seg.tokens.end; ++k) {
      all_function = all_function && is_function_word(seq.source[k]);
    }
    if (all_function) seg.kind = Dropped{DropReason::kFunctionWord};
  }
  return seq;
}

}  // namespace pictopipe
