#include "pictopipe/tp.h"

#include <algorithm>

#include "pictopipe/error.h"
#include "pictopipe/strings.h"

namespace pictopipe {

namespace {

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

void add_stem(std::vector<std::string>& out, std::string stem,
              std::string_view word) {
  if (stem.size() < 2 || stem == word) return;
  if (std::find(out.begin(), out.end(), stem) == out.end()) {
    out.push_back(std::move(stem));
  }
}

// Candidates for a stem left after removing "-ing" or "-ed".
void add_verb_stems(std::vector<std::string>& out, const std::string& stem,
                    std::string_view word) {
  add_stem(out, stem, word);
  const std::size_t n = stem.size();
  if (n >= 3 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1])) {
    add_stem(out, stem.substr(0, n - 1), word);
  }
  add_stem(out, stem + "e", word);
}

}  // namespace

std::string_view drop_reason_name(DropReason reason) {
  return reason == DropReason::kFunctionWord ? "FUNCTION_WORD"
                                             : "NO_MATCH_POLICY";
}

std::string_view segment_kind_name(const SegmentKind& kind) {
  struct Visitor {
    std::string_view operator()(const Matched&) const { return "matched"; }
    std::string_view operator()(const Substituted&) const {
      return "substituted";
    }
    std::string_view operator()(const Dropped&) const { return "dropped"; }
    std::string_view operator()(const Unknown&) const { return "unknown"; }
  };
  return std::visit(Visitor{}, kind);
}

std::string_view Segment::entry_id() const {
  if (const auto* m = std::get_if<Matched>(&kind)) return m->entry_id;
  if (const auto* s = std::get_if<Substituted>(&kind)) return s->entry_id;
  return {};
}

bool Segment::renders() const {
  return std::holds_alternative<Matched>(kind) ||
         std::holds_alternative<Substituted>(kind);
}

bool is_partition(const PictogramSequence& seq) {
  std::size_t cursor = 0;
  for (const Segment& s : seq.segments) {
    if (s.tokens.begin != cursor || s.tokens.end <= s.tokens.begin) {
      return false;
    }
    cursor = s.tokens.end;
  }
  return cursor == seq.source.size();
}

std::vector<std::string> lemma_candidates(std::string_view word) {
  std::vector<std::string> out;
  const std::string w(word);
  if (w.size() > 4 && w.ends_with("ing")) {
    add_verb_stems(out, w.substr(0, w.size() - 3), word);
  }
  if (w.size() > 3 && w.ends_with("ied")) {
    add_stem(out, w.substr(0, w.size() - 3) + "y", word);
  }
  if (w.size() > 3 && w.ends_with("ed")) {
    add_verb_stems(out, w.substr(0, w.size() - 2), word);
  }
  if (w.size() > 3 && w.ends_with("ies")) {
    add_stem(out, w.substr(0, w.size() - 3) + "y", word);
  }
  if (w.size() > 3 && w.ends_with("es")) {
    add_stem(out, w.substr(0, w.size() - 2), word);
  }
  if (w.size() > 2 && w.ends_with("s") && !w.ends_with("ss")) {
    add_stem(out, w.substr(0, w.size() - 1), word);
  }
  return out;
}

PictogramSequence map_text(std::vector<Token> tokens, const Lexicon& lex) {
  PictogramSequence seq;
  std::vector<std::string> keys;
  keys.reserve(tokens.size());
  for (const Token& t : tokens) keys.push_back(t.normalized);

  std::size_t i = 0;
  while (i < keys.size()) {
    if (tokens[i].is_punct()) {
      seq.segments.push_back({Dropped{DropReason::kFunctionWord}, {i, i + 1}});
      ++i;
      continue;
    }
    std::optional<LexiconMatch> match = lex.lookup(keys, i);
    if (!match) {
      const std::string original = keys[i];
      for (const auto& lemma : lemma_candidates(original)) {
        keys[i] = lemma;
        match = lex.lookup(keys, i);
        if (match) break;
      }
      keys[i] = original;
    }
    if (match) {
      seq.segments.push_back({Matched{match->entry->id}, {i, i + match->length}});
      i += match->length;
    } else {
      seq.segments.push_back({Unknown{}, {i, i + 1}});
      ++i;
    }
  }
  seq.source = std::move(tokens);
  return seq;
}

std::vector<std::string> render(const PictogramSequence& seq,
                                const Lexicon& lex) {
  std::vector<std::string> images;
  for (const Segment& s : seq.segments) {
    if (!s.renders()) continue;
    const LexiconEntry* e = lex.find_id(s.entry_id());
    if (e == nullptr) {
      throw ConsistencyError("segment refers to unknown entry '" +
                             std::string(s.entry_id()) + "'");
    }
    images.push_back(e->image_ref);
  }
  return images;
}

std::string segment_words(const PictogramSequence& seq, const Segment& seg) {
  std::vector<std::string> words;
  for (std::size_t k = seg.tokens.begin; k < seg.tokens.end && k < seq.source.size(); ++k) {
    words.push_back(seq.source[k].surface);
  }
  return join(words, " ");
}

}  // namespace pictopipe
