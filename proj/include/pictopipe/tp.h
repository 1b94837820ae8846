#ifndef PICTOPIPE_TP_H_
#define PICTOPIPE_TP_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pictopipe/lexicon.h"
#include "pictopipe/textproc.h"

namespace pictopipe {

enum class DropReason { kFunctionWord, kNoMatchPolicy };

std::string_view drop_reason_name(DropReason reason);

struct Matched {
  std::string entry_id;
  friend bool operator==(const Matched&, const Matched&) = default;
};

struct Substituted {
  std::string original;
  std::string substitute;
  std::string entry_id;
  double similarity = 0.0;  // in [-1, 1]
  friend bool operator==(const Substituted&, const Substituted&) = default;
};

struct Dropped {
  DropReason reason = DropReason::kFunctionWord;
  friend bool operator==(const Dropped&, const Dropped&) = default;
};

struct Unknown {
  friend bool operator==(const Unknown&, const Unknown&) = default;
};

using SegmentKind = std::variant<Matched, Substituted, Dropped, Unknown>;

std::string_view segment_kind_name(const SegmentKind& kind);

// Token index range [begin, end).
struct TokenRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
  friend bool operator==(const TokenRange&, const TokenRange&) = default;
};

struct Segment {
  SegmentKind kind;
  TokenRange tokens;

  // Entry id of a Matched or Substituted segment, empty otherwise.
  std::string_view entry_id() const;
  bool renders() const;

  friend bool operator==(const Segment&, const Segment&) = default;
};

struct PictogramSequence {
  std::vector<Segment> segments;
  std::vector<Token> source;
};

// True when the segments tile [0, source.size()) in order.
bool is_partition(const PictogramSequence& seq);

// Base-form guesses for an inflected word: "-s", "-ing", "-ed" stripped,
// with consonant doubling undone and a silent "e" restored. Most specific
// first; never contains the word itself.
std::vector<std::string> lemma_candidates(std::string_view word);

// Left-to-right maximal munch over normalized tokens. Punctuation becomes
// Dropped; a token with no exact match is retried once through its lemma
// candidates; anything else is a one-token Unknown.
PictogramSequence map_text(std::vector<Token> tokens, const Lexicon& lex);

// image_ref of every Matched/Substituted segment in order. Throws
// ConsistencyError on a dangling entry id.
std::vector<std::string> render(const PictogramSequence& seq,
                                const Lexicon& lex);

// Surface words covered by a segment, space-joined.
std::string segment_words(const PictogramSequence& seq, const Segment& seg);

}  // namespace pictopipe

#endif  // PICTOPIPE_TP_H_
