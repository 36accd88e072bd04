#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dao/corpus.hpp"
#include "dao/ontology.hpp"

namespace dao {

struct DragConfig {
  std::size_t top_k = 128;
  std::size_t max_examples = 10;  // M
  double initial_radius = 1.35;   // mu_0, cosine distance
  double radius_decay = 0.9;      // lambda, in (0, 1]
  std::optional<std::size_t> positive_quota;  // default ceil(M/2)

  void validate() const;
  std::size_t positives() const;
  std::size_t negatives() const;
};

struct Candidate {
  const ReferenceEntry* entry = nullptr;  // points into the index
  std::size_t index = 0;                  // position in the index
  double distance = 0.0;                  // cosine distance to the query
};

struct Cluster {
  Candidate leader;
  std::vector<Candidate> members;  // includes the leader, in scan order
};

/// Linear scan; ascending distance, ties by entry id. Throws DimensionMismatch.
std::vector<Candidate> retrieve_topk(const EmbeddedIndex& index, const Vector& query, std::size_t k);

/// Greedy leader clustering over distance-sorted candidates: each candidate
/// joins the first cluster whose leader lies within `radius`, otherwise it
/// founds a new cluster. Leaders end up pairwise more than `radius` apart.
std::vector<Cluster> cluster_candidates(const std::vector<Candidate>& sorted, const EmbeddedIndex& index,
                                        double radius);

struct PolarityQuota {
  std::size_t positive = 0;
  std::size_t negative = 0;
};

/// One example per cluster, clusters walked by leader distance. The first
/// pass fills the polarity quota; a second pass backfills with whatever
/// polarity remains. Result is sorted by distance to the query.
std::vector<Candidate> select_diverse(const std::vector<Cluster>& clusters, std::size_t m, PolarityQuota quota);

inline double decay_radius(double radius, double lambda) { return lambda * radius; }

struct TriggerAnswer;

struct RetrievalRequest {
  const Vector* query = nullptr;  // unit embedding of the input sentence
  double radius = 0.0;            // mu_t
  std::optional<EventTypeId> require_type;  // EAE: keep only entries with this type
  std::string exclude_id;                   // never retrieve the sentence under inference
  std::string exclude_text;
  bool diverse = true;  // false: plain nearest-M (no clustering, no quota)
  const std::vector<Candidate>* frozen_topk = nullptr;
};

struct RetrievalResult {
  std::vector<ReferenceEntry> examples;
  std::vector<double> distances;
  std::vector<EventDefinition> definitions;
  std::vector<EventTypeId> unknown_types;
  double radius_used = 0.0;
  std::size_t cluster_count = 0;
};

/// Definitions for every distinct event type among `opinions` plus M diverse
/// examples from the index.
RetrievalResult gather_event_info(const std::vector<TriggerAnswer>& opinions, const EventOntology& ontology,
                                  const EmbeddedIndex& index, const RetrievalRequest& request,
                                  const DragConfig& config, std::vector<Candidate>* topk_out = nullptr);

}  // namespace dao
