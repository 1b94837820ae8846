#ifndef PICTOPIPE_GEC_H_
#define PICTOPIPE_GEC_H_

#include <chrono>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "pictopipe/error.h"
#include "pictopipe/textproc.h"

namespace pictopipe {

enum class GecBackend { kRules, kExternal };

std::string_view backend_name(GecBackend backend);

// One correction, expressed against the source sentence. `original` is the
// exact source text under `span`; an empty span is an insertion.
struct GecEdit {
  Span span;
  std::string original;
  std::string replacement;
  std::string category;

  friend bool operator==(const GecEdit&, const GecEdit&) = default;
};

struct GecResult {
  std::string corrected;
  std::vector<GecEdit> edits;
  GecBackend backend = GecBackend::kRules;
  // Set when an external backend was configured but the rules produced this
  // result instead.
  bool fallback = false;
  std::string fallback_reason;
};

// Applies edits left to right. Throws InvalidArgument if they overlap, are
// out of order, or do not agree with the source text.
std::string apply_edits(std::string_view source,
                        const std::vector<GecEdit>& edits);

// Word lists driving the rule engine. Call finalize() after filling the
// fields; it validates them and builds the regular-inflection index.
struct GecRuleSet {
  std::unordered_map<std::string, std::string> irregular_past;
  std::unordered_set<std::string> spelling_dictionary;
  std::unordered_set<std::string> infinitive_verbs;
  std::unordered_set<std::string> bare_nouns;
  // Base-form verbs that may follow an infinitive verb without "to".
  std::unordered_set<std::string> base_verbs;

  void finalize();

  // Regular -s/-ed/-ing forms of dictionary words, mapped to their bases.
  std::unordered_map<std::string, std::vector<std::string>> inflections;
  // Subset of `inflections` that are -s plurals.
  std::unordered_map<std::string, std::vector<std::string>> plurals;

  bool is_known(std::string_view lower_word) const;
};

struct GecRulePaths {
  std::string irregular_past;       // TSV: wrong form, correct form
  std::string spelling_dictionary;  // one word per line
  std::string infinitive_verbs;     // one word per line
  std::string bare_nouns;           // one word per line
  std::string base_verbs;           // one word per line
};

GecRuleSet load_gec_rules(const GecRulePaths& paths);

// Deterministic rule pass. Rules run in a fixed order: auxiliary
// duplication, modal fronting, infinitive insertion, article deletion after
// "play", spelling repair, indefinite-plural repair, irregular past.
GecResult correct_rules(std::string_view sentence, const GecRuleSet& rules);

// Thrown by correct_external on transport failure, timeout, non-2xx status
// or a malformed response body.
class GecServiceError : public Error {
 public:
  using Error::Error;
};

// POSTs {"text": sentence} to `endpoint` (e.g. "http://127.0.0.1:9000/gec")
// and expects {"corrected": string}. Edits are rebuilt by word-level diff.
GecResult correct_external(std::string_view sentence,
                           const std::string& endpoint,
                           std::chrono::milliseconds timeout);

// Word-aligned diff of two sentences as edits that replay exactly.
std::vector<GecEdit> diff_edits(std::string_view source,
                                std::string_view corrected,
                                std::string_view category);

struct GecConfig {
  GecBackend backend = GecBackend::kRules;
  std::string endpoint;
  std::chrono::milliseconds timeout{2000};
};

// Uses the external service when configured, falling back to the rules on
// any GecServiceError. Never throws for service problems.
GecResult correct(std::string_view sentence, const GecRuleSet& rules,
                  const GecConfig& config);

}  // namespace pictopipe

#endif  // PICTOPIPE_GEC_H_
