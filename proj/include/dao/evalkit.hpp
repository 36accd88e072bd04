#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dao/corpus.hpp"

namespace dao {

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

/// 0/0 scores 0, except that empty predictions against empty golds score 1.
PRF make_prf(std::size_t tp, std::size_t fp, std::size_t fn);

struct TriggerItem {
  std::string sentence_id;
  EventTypeId event_type;
  std::string trigger;
};

struct ArgumentItem {
  std::string sentence_id;
  EventTypeId event_type;
  std::string role;
  std::string content;
};

// Spans scored by character overlap. `role` is empty for triggers.
struct SpanItem {
  std::string sentence_id;
  EventTypeId event_type;
  std::string role;
  std::string span;
};

using SentenceMap = std::map<std::string, Sentence, std::less<>>;

/// Exact match on (sentence, type, trigger), one-to-one.
PRF trigger_f1(const std::vector<TriggerItem>& preds, const std::vector<TriggerItem>& golds);

/// Exact match on (sentence, type, role, content), one-to-one.
PRF argument_exact_f1(const std::vector<ArgumentItem>& preds, const std::vector<ArgumentItem>& golds);

class HeadExtractor {
 public:
  virtual ~HeadExtractor() = default;
  virtual std::string head(const Sentence& sentence, std::string_view span) const = 0;
};

/// Default heuristic. Trailing punctuation is stripped; the head is the token
/// right before the first " of ", " in ", " at " or " from ", otherwise the
/// last token. Throws SpanNotInSentence.
class HeuristicHeadExtractor : public HeadExtractor {
 public:
  std::string head(const Sentence& sentence, std::string_view span) const override;
};

std::string head_of_span(const Sentence& sentence, std::string_view span);

/// Match on (sentence, type, role, head). Sentences are looked up by id. A
/// predicted span whose sentence or text is missing never matches; gold spans
/// must occur. Throws SpanNotInSentence.
PRF argument_head_f1(const std::vector<ArgumentItem>& preds, const std::vector<ArgumentItem>& golds,
                     const SentenceMap& sentences, const HeadExtractor& extractor);

/// Span-overlap "types" metric: same sentence, type and role, and
/// at least one character of overlap. Longest overlaps are paired first, and
/// the pairing is then extended along augmenting paths so the tp count is
/// the maximum achievable.
PRF type_overlap_f1(const std::vector<SpanItem>& preds, const std::vector<SpanItem>& golds,
                    const SentenceMap& sentences);

/// Maximum one-to-one pairing seeded greedily by descending weight
/// (ties: pred index, then gold index). weight[p][g] <= 0 means incompatible.
std::size_t greedy_matching(const std::vector<std::vector<double>>& weight);

}  // namespace dao
