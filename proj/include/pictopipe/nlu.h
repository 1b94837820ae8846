#ifndef PICTOPIPE_NLU_H_
#define PICTOPIPE_NLU_H_

#include <cstddef>
#include <deque>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pictopipe/lexicon.h"
#include "pictopipe/textproc.h"
#include "pictopipe/tp.h"

namespace pictopipe {

// Word vectors in word2vec text format.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dim) : dim_(dim) {}

  // Throws DataError on a wrong arity, non-finite component or duplicate.
  void add(std::string word, std::vector<double> vector);

  const std::vector<double>* find(std::string_view word) const;
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  bool empty() const { return vectors_.empty(); }

  // Words in insertion order.
  const std::vector<std::string>& words() const { return order_; }

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::vector<double>> vectors_;
  std::vector<std::string> order_;
};

// Header "V D" followed by V rows "word c1 ... cD".
EmbeddingTable load_embeddings(std::istream& in);
EmbeddingTable load_embeddings_file(const std::string& path);
void write_embeddings(std::ostream& out, const EmbeddingTable& table);

// dot(u, v) / (|u| |v|), clamped to [-1, 1]; 0 when either vector is zero.
// Throws InvalidArgument on a dimension mismatch.
double cosine_similarity(std::span<const double> u, std::span<const double> v);

// Symmetric word graph without self loops.
class SynonymGraph {
 public:
  void add(const std::string& a, const std::string& b);
  // Sorted neighbours; empty when the word is unknown.
  std::span<const std::string> neighbors(std::string_view word) const;
  std::size_t size() const { return adjacency_.size(); }

 private:
  std::unordered_map<std::string, std::vector<std::string>> adjacency_;
};

// TSV rows "word<TAB>synonym"; each row adds an undirected edge.
SynonymGraph load_synonyms(std::istream& in);
SynonymGraph load_synonyms_file(const std::string& path);

struct Substitute {
  std::string word;
  double similarity = 0.0;
};

// Synonyms that are lexicon words win (closest by embedding first, 1.0 when
// a vector is missing); otherwise the lexicon word with the highest cosine
// similarity at or above tau. Ties go to the lexicographically smaller word.
// `lexicon_vocab` must be sorted.
std::optional<Substitute> find_substitute(
    std::string_view word, std::span<const std::string> lexicon_vocab,
    const EmbeddingTable& emb, const SynonymGraph& syn, double tau);

// Recent nouns from earlier utterances, oldest first.
class SessionContext {
 public:
  explicit SessionContext(std::size_t capacity = 8);

  // Moves an existing entry for `noun` to the back instead of duplicating.
  void push(std::string noun, std::optional<EntityClass> cls);

  // Appends the nouns and proper nouns of an analysed utterance.
  void observe(const std::vector<Token>& tokens);

  std::size_t capacity() const { return capacity_; }
  const std::deque<std::pair<std::string, std::optional<EntityClass>>>& nouns()
      const {
    return nouns_;
  }

 private:
  std::size_t capacity_;
  std::deque<std::pair<std::string, std::optional<EntityClass>>> nouns_;
};

// Replaces third-person pronouns by the most recent context noun that has a
// single-word lexicon entry. he/she/him/her only resolve to PERSON nouns,
// it only to non-PERSON nouns, they/them to any. First- and second-person
// pronouns are never touched. The surface text is kept; `normalized`
// becomes the antecedent.
std::vector<Token> resolve_pronouns(std::vector<Token> tokens,
                                    const SessionContext& ctx,
                                    const Lexicon& lex);

struct NluResources {
  const Lexicon* lexicon = nullptr;
  const EmbeddingTable* embeddings = nullptr;  // optional
  const SynonymGraph* synonyms = nullptr;      // optional
  double tau = 0.4;
};

// Unknown segments become Substituted when a substitute exists, Dropped when
// they are function words or stopwords, and stay Unknown otherwise.
PictogramSequence resolve_unknowns(PictogramSequence seq,
                                   const NluResources& deps);

}  // namespace pictopipe

#endif  // PICTOPIPE_NLU_H_
