#ifndef PICTOPIPE_LEXICON_H_
#define PICTOPIPE_LEXICON_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pictopipe {

// One pictogram of the dataset: a normalized phrase and the image it shows.
struct LexiconEntry {
  std::string id;
  std::vector<std::string> phrase;
  std::string image_ref;
  int priority = 0;

  std::string phrase_text() const;
};

enum class LexiconFormat { kJsonl, kTsv };

// Parses "jsonl" / "tsv"; throws InvalidArgument otherwise.
LexiconFormat parse_lexicon_format(std::string_view name);

// Guesses the format from a file extension (".jsonl"/".json" vs anything
// else).
LexiconFormat lexicon_format_for_path(std::string_view path);

// Lowercases, collapses internal whitespace and strips terminal ".,!?".
// Intra-phrase hyphens and apostrophes are kept.
std::vector<std::string> normalize_phrase(std::string_view text);

struct LexiconMatch {
  const LexiconEntry* entry = nullptr;
  std::size_t length = 0;
};

// Immutable pictogram lexicon indexed by first token for longest-match
// lookup. Every index bucket is ordered by descending phrase length, then
// descending priority, then ascending id, so the first bucket entry that
// matches is the answer.
class Lexicon {
 public:
  // Throws DataError on duplicate (phrase, priority), duplicate ids, or an
  // empty entry list.
  explicit Lexicon(std::vector<LexiconEntry> entries);

  // Longest entry matching tokens[start..start+L); nullopt when nothing
  // matches. Throws InvalidArgument when start is out of range.
  std::optional<LexiconMatch> lookup(std::span<const std::string> tokens,
                                     std::size_t start) const;

  const LexiconEntry* find_id(std::string_view id) const;

  // Single-token phrase keys, sorted.
  const std::vector<std::string>& single_word_vocab() const { return vocab_; }
  bool has_single_word(std::string_view word) const;

  const std::vector<LexiconEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t max_ngram() const { return max_ngram_; }

  // Entry indices under `first_token`, in match order. Empty if none.
  std::span<const std::size_t> bucket(std::string_view first_token) const;

 private:
  std::vector<LexiconEntry> entries_;
  std::unordered_map<std::string, std::vector<std::size_t>> index_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::vector<std::string> vocab_;
  std::size_t max_ngram_ = 0;
};

// Reads lexicon records. JSONL records are objects with "phrase" and
// "image_ref" plus optional "id" and "priority"; TSV rows carry
// phrase, image_ref, [id], [priority]. Blank lines and, in TSV, lines
// starting with '#' are skipped. Missing ids are derived from the
// normalized phrase (and priority, when non-zero).
Lexicon load_lexicon(std::istream& in, LexiconFormat format);
Lexicon load_lexicon_file(const std::string& path);
Lexicon load_lexicon_file(const std::string& path, LexiconFormat format);

}  // namespace pictopipe

#endif  // PICTOPIPE_LEXICON_H_
