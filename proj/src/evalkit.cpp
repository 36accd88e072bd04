#include "dao/evalkit.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>
#include <tuple>

#include "dao/errors.hpp"
#include "dao/text.hpp"

namespace dao {

PRF make_prf(std::size_t tp, std::size_t fp, std::size_t fn) {
  PRF r{0.0, 0.0, 0.0, tp, fp, fn};
  if (tp + fp == 0 && fn == 0) {
    r.precision = r.recall = r.f1 = 1.0;
    return r;
  }
  r.precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  r.recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  r.f1 = r.precision + r.recall > 0 ? 2 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

std::size_t greedy_matching(const std::vector<std::vector<double>>& weight) {
  const std::size_t np = weight.size();
  const std::size_t ng = np ? weight.front().size() : 0;
  struct Edge {
    double w;
    std::size_t p, g;
  };
  std::vector<Edge> edges;
  for (std::size_t p = 0; p < np; ++p)
    for (std::size_t g = 0; g < ng; ++g)
      if (weight[p][g] > 0) edges.push_back({weight[p][g], p, g});
  std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.w > b.w; });

  constexpr std::size_t kFree = static_cast<std::size_t>(-1);
  std::vector<std::size_t> pred_of(ng, kFree), gold_of(np, kFree);
  for (const auto& e : edges) {
    if (gold_of[e.p] == kFree && pred_of[e.g] == kFree) {
      gold_of[e.p] = e.g;
      pred_of[e.g] = e.p;
    }
  }

  // Kuhn augmentation from every unmatched prediction.
  std::vector<bool> seen;
  std::function<bool(std::size_t)> augment = [&](std::size_t p) {
    for (std::size_t g = 0; g < ng; ++g) {
      if (weight[p][g] <= 0 || seen[g]) continue;
      seen[g] = true;
      if (pred_of[g] == kFree || augment(pred_of[g])) {
        pred_of[g] = p;
        gold_of[p] = g;
        return true;
      }
    }
    return false;
  };
  for (std::size_t p = 0; p < np; ++p) {
    if (gold_of[p] != kFree) continue;
    seen.assign(ng, false);
    augment(p);
  }
  return static_cast<std::size_t>(std::count_if(gold_of.begin(), gold_of.end(), [](std::size_t g) { return g != kFree; }));
}

namespace {

template <typename P, typename G, typename Weight>
PRF score(const std::vector<P>& preds, const std::vector<G>& golds, Weight&& weight) {
  std::vector<std::vector<double>> w(preds.size(), std::vector<double>(golds.size(), 0.0));
  for (std::size_t p = 0; p < preds.size(); ++p)
    for (std::size_t g = 0; g < golds.size(); ++g) w[p][g] = weight(preds[p], golds[g]);
  const std::size_t tp = greedy_matching(w);
  return make_prf(tp, preds.size() - tp, golds.size() - tp);
}

bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

std::string strip_trailing_punct(std::string s) {
  while (!s.empty() && (is_punct(s.back()) || std::isspace(static_cast<unsigned char>(s.back())))) s.pop_back();
  return s;
}

}  // namespace

PRF trigger_f1(const std::vector<TriggerItem>& preds, const std::vector<TriggerItem>& golds) {
  return score(preds, golds, [](const TriggerItem& p, const TriggerItem& g) {
    return p.sentence_id == g.sentence_id && p.event_type == g.event_type && p.trigger == g.trigger ? 1.0 : 0.0;
  });
}

PRF argument_exact_f1(const std::vector<ArgumentItem>& preds, const std::vector<ArgumentItem>& golds) {
  return score(preds, golds, [](const ArgumentItem& p, const ArgumentItem& g) {
    return std::tie(p.sentence_id, p.event_type, p.role, p.content) ==
                   std::tie(g.sentence_id, g.event_type, g.role, g.content)
               ? 1.0
               : 0.0;
  });
}

std::string HeuristicHeadExtractor::head(const Sentence& sentence, std::string_view span) const {
  const std::string normalized = join(split_whitespace(span), " ");
  if (normalized.empty() || sentence.text.find(normalized) == std::string::npos)
    throw SpanNotInSentence(sentence.id, std::string(span));
  const auto tokens = split_whitespace(strip_trailing_punct(normalized));
  if (tokens.empty()) return normalized;
  static const char* kPrepositions[] = {"of", "in", "at", "from"};
  for (std::size_t i = 1; i + 1 < tokens.size(); ++i) {
    for (const char* prep : kPrepositions) {
      if (tokens[i] == prep) {
        const std::string h = strip_trailing_punct(tokens[i - 1]);
        return h.empty() ? tokens[i - 1] : h;
      }
    }
  }
  const std::string last = strip_trailing_punct(tokens.back());
  return last.empty() ? tokens.back() : last;
}

std::string head_of_span(const Sentence& sentence, std::string_view span) {
  return HeuristicHeadExtractor{}.head(sentence, span);
}

PRF argument_head_f1(const std::vector<ArgumentItem>& preds, const std::vector<ArgumentItem>& golds,
                     const SentenceMap& sentences, const HeadExtractor& extractor) {
  std::vector<std::string> gold_heads;
  for (const auto& g : golds) {
    auto s = sentences.find(g.sentence_id);
    if (s == sentences.end()) throw SpanNotInSentence(g.sentence_id, g.content);
    gold_heads.push_back(extractor.head(s->second, g.content));
  }
  std::vector<std::optional<std::string>> pred_heads;
  for (const auto& p : preds) {
    auto s = sentences.find(p.sentence_id);
    std::optional<std::string> head;
    if (s != sentences.end()) {
      try {
        head = extractor.head(s->second, p.content);
      } catch (const SpanNotInSentence&) {
      }
    }
    pred_heads.push_back(std::move(head));
  }
  std::vector<std::vector<double>> w(preds.size(), std::vector<double>(golds.size(), 0.0));
  for (std::size_t p = 0; p < preds.size(); ++p)
    for (std::size_t g = 0; g < golds.size(); ++g)
      w[p][g] = preds[p].sentence_id == golds[g].sentence_id && preds[p].event_type == golds[g].event_type &&
                        preds[p].role == golds[g].role && pred_heads[p] == gold_heads[g]
                    ? 1.0
                    : 0.0;
  const std::size_t tp = greedy_matching(w);
  return make_prf(tp, preds.size() - tp, golds.size() - tp);
}

PRF type_overlap_f1(const std::vector<SpanItem>& preds, const std::vector<SpanItem>& golds,
                    const SentenceMap& sentences) {
  auto offsets = [&](const SpanItem& it) -> std::pair<std::size_t, std::size_t> {
    auto s = sentences.find(it.sentence_id);
    if (s == sentences.end()) return {0, 0};
    const std::string span = join(split_whitespace(it.span), " ");
    const auto pos = span.empty() ? std::string::npos : s->second.text.find(span);
    if (pos == std::string::npos) return {0, 0};
    return {pos, pos + span.size()};
  };
  return score(preds, golds, [&](const SpanItem& p, const SpanItem& g) {
    if (p.sentence_id != g.sentence_id || p.event_type != g.event_type || p.role != g.role) return 0.0;
    const auto [ps, pe] = offsets(p);
    const auto [gs, ge] = offsets(g);
    const auto lo = std::max(ps, gs), hi = std::min(pe, ge);
    return hi > lo ? static_cast<double>(hi - lo) : 0.0;
  });
}

}  // namespace dao
