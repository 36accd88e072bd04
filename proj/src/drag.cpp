#include "dao/drag.hpp"

#include <algorithm>
#include <set>

#include "dao/answers.hpp"
#include "dao/errors.hpp"

namespace dao {

void DragConfig::validate() const {
  if (top_k == 0) throw ConfigError("top_k must be positive");
  if (max_examples == 0) throw ConfigError("max_examples must be positive");
  if (max_examples > top_k) throw ConfigError("max_examples must not exceed top_k");
  if (!(initial_radius > 0.0)) throw ConfigError("initial_radius must be positive");
  if (!(radius_decay > 0.0 && radius_decay <= 1.0)) throw ConfigError("radius_decay must be in (0, 1]");
  if (positive_quota && *positive_quota > max_examples) throw ConfigError("positive_quota exceeds max_examples");
}

std::size_t DragConfig::positives() const { return positive_quota.value_or((max_examples + 1) / 2); }
std::size_t DragConfig::negatives() const { return max_examples - positives(); }

std::vector<Candidate> retrieve_topk(const EmbeddedIndex& index, const Vector& query, std::size_t k) {
  if (query.size() != index.dimension) throw DimensionMismatch(index.dimension, query.size());
  std::vector<Candidate> all;
  all.reserve(index.size());
  for (std::size_t i = 0; i < index.size(); ++i)
    all.push_back({&index.entries[i], i, cosine_distance(query, index.vectors[i])});
  auto less = [](const Candidate& a, const Candidate& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.entry->sentence.id < b.entry->sentence.id;
  };
  const std::size_t n = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n), all.end(), less);
  all.resize(n);
  return all;
}

std::vector<Cluster> cluster_candidates(const std::vector<Candidate>& sorted, const EmbeddedIndex& index,
                                        double radius) {
  std::vector<Cluster> clusters;
  for (const auto& c : sorted) {
    Cluster* home = nullptr;
    for (auto& cl : clusters) {
      if (cosine_distance(index.vectors[cl.leader.index], index.vectors[c.index]) <= radius) {
        home = &cl;
        break;
      }
    }
    if (home) {
      home->members.push_back(c);
    } else {
      clusters.push_back({c, {c}});
    }
  }
  return clusters;
}

std::vector<Candidate> select_diverse(const std::vector<Cluster>& clusters, std::size_t m, PolarityQuota quota) {
  std::vector<const Cluster*> order;
  for (const auto& c : clusters) order.push_back(&c);
  std::stable_sort(order.begin(), order.end(),
                   [](const Cluster* a, const Cluster* b) { return a->leader.distance < b->leader.distance; });

  auto closest = [](const Cluster& cl, auto&& pred) -> const Candidate* {
    const Candidate* best = nullptr;
    for (const auto& c : cl.members)
      if (pred(c) && (!best || c.distance < best->distance)) best = &c;
    return best;
  };

  std::vector<Candidate> picked;
  std::vector<bool> used(order.size(), false);
  std::size_t pos_left = quota.positive, neg_left = quota.negative;
  for (std::size_t i = 0; i < order.size() && picked.size() < m; ++i) {
    const Candidate* c = closest(*order[i], [&](const Candidate& x) {
      return x.entry->polarity == Polarity::Positive ? pos_left > 0 : neg_left > 0;
    });
    if (!c) continue;
    (c->entry->polarity == Polarity::Positive ? pos_left : neg_left)--;
    picked.push_back(*c);
    used[i] = true;
  }
  // Backfill: one polarity ran out among the candidates.
  for (std::size_t i = 0; i < order.size() && picked.size() < m; ++i) {
    if (used[i]) continue;
    picked.push_back(*closest(*order[i], [](const Candidate&) { return true; }));
    used[i] = true;
  }
  std::stable_sort(picked.begin(), picked.end(), [](const Candidate& a, const Candidate& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.entry->sentence.id < b.entry->sentence.id;
  });
  return picked;
}

RetrievalResult gather_event_info(const std::vector<TriggerAnswer>& opinions, const EventOntology& ontology,
                                  const EmbeddedIndex& index, const RetrievalRequest& request,
                                  const DragConfig& config, std::vector<Candidate>* topk_out) {
  if (!request.query) throw ConfigError("retrieval request without a query embedding");
  RetrievalResult result;
  result.radius_used = request.radius;

  std::set<EventTypeId> seen;
  for (const auto& op : opinions) {
    if (!op.has_event() || !seen.insert(op.event_type()).second) continue;
    if (ontology.contains(op.event_type())) {
      result.definitions.push_back(ontology.lookup(op.event_type()));
    } else {
      result.unknown_types.push_back(op.event_type());
    }
  }

  std::vector<Candidate> topk;
  if (request.frozen_topk) {
    topk = *request.frozen_topk;
  } else {
    // Over-fetch so excluded entries do not shrink the candidate pool.
    topk = retrieve_topk(index, *request.query, index.size());
    std::erase_if(topk, [&](const Candidate& c) {
      return (!request.exclude_id.empty() && c.entry->sentence.id == request.exclude_id) ||
             (!request.exclude_text.empty() && c.entry->sentence.text == request.exclude_text);
    });
    if (request.require_type) {
      std::erase_if(topk, [&](const Candidate& c) { return !c.entry->has_event_type(*request.require_type); });
    }
    if (topk.size() > config.top_k) topk.resize(config.top_k);
  }
  if (topk_out) *topk_out = topk;

  std::vector<Candidate> chosen;
  if (request.diverse) {
    const auto clusters = cluster_candidates(topk, index, request.radius);
    result.cluster_count = clusters.size();
    chosen = select_diverse(clusters, config.max_examples, {config.positives(), config.negatives()});
  } else {
    chosen.assign(topk.begin(), topk.begin() + static_cast<std::ptrdiff_t>(std::min(topk.size(), config.max_examples)));
  }
  for (const auto& c : chosen) {
    result.examples.push_back(*c.entry);
    result.distances.push_back(c.distance);
  }
  return result;
}

}  // namespace dao
