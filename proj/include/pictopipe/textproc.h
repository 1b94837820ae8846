#ifndef PICTOPIPE_TEXTPROC_H_
#define PICTOPIPE_TEXTPROC_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace pictopipe {

enum class Pos {
  kDet,
  kAdp,
  kConj,
  kPron,
  kNoun,
  kPropn,
  kVerb,
  kAdj,
  kAdv,
  kNum,
  kIntj,
  kOther,
};

enum class EntityClass { kPerson, kOrg, kLoc, kMisc };

std::string_view pos_name(Pos pos);
std::optional<Pos> parse_pos(std::string_view name);
std::string_view entity_name(EntityClass cls);
std::optional<EntityClass> parse_entity(std::string_view name);

// "O" for no entity, otherwise the class name.
std::string entity_label(const std::optional<EntityClass>& ne);

// Byte offsets [begin, end) into the source sentence.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

struct Token {
  std::string surface;
  std::string normalized;  // empty for pure punctuation
  Pos pos = Pos::kOther;
  bool is_stopword = false;
  std::optional<EntityClass> ne;
  Span span;

  bool is_punct() const { return normalized.empty(); }
};

// Closed-class dictionary, suffix rules, stopword list and gazetteer used by
// the rule tagger. Immutable once built.
struct TagResources {
  std::unordered_map<std::string, Pos> tag_dictionary;
  std::vector<std::pair<std::string, Pos>> suffix_rules;
  std::unordered_set<std::string> stopwords;
  // Keys are normalized phrases joined by single spaces.
  std::unordered_map<std::string, EntityClass> gazetteer;
  std::size_t gazetteer_max_len = 0;

  // Validates invariants (normalized keys, non-empty suffix rules) and
  // recomputes gazetteer_max_len. Throws DataError.
  void finalize();
};

// Loaders for the four resource files. Each reports the offending row.
std::unordered_map<std::string, Pos> load_tag_dictionary(std::istream& in);
std::vector<std::pair<std::string, Pos>> load_suffix_rules(std::istream& in);
std::unordered_set<std::string> load_stopwords(std::istream& in);
std::unordered_map<std::string, EntityClass> load_gazetteer(std::istream& in);

struct TagResourcePaths {
  std::string tag_dictionary;
  std::string suffix_rules;
  std::string stopwords;
  std::string gazetteer;  // optional; empty means none
};

TagResources load_tag_resources(const TagResourcePaths& paths);

// Splits on whitespace, then peels leading and trailing ASCII punctuation off
// each chunk into one-character tokens. Contractions stay whole.
std::vector<Token> tokenize(std::string_view sentence);

void pos_tag(std::vector<Token>& tokens, const TagResources& res);
void mark_stopwords(std::vector<Token>& tokens, const TagResources& res);
void detect_entities(std::vector<Token>& tokens, const TagResources& res);

// tokenize + pos_tag + mark_stopwords + detect_entities.
std::vector<Token> analyze(std::string_view sentence, const TagResources& res);

// Tokens that are not pure punctuation, in order.
std::vector<std::size_t> word_indices(const std::vector<Token>& tokens);

}  // namespace pictopipe

#endif  // PICTOPIPE_TEXTPROC_H_
