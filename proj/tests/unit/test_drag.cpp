#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "dao/answers.hpp"
#include "dao/drag.hpp"
#include "dao/errors.hpp"
#include "dao/offline_backends.hpp"
#include "dao/synthetic.hpp"
#include "helpers.hpp"

using namespace dao;

namespace {

ReferenceEntry entry(const std::string& id, bool positive, const std::string& type = "Life:Die") {
  ReferenceEntry e;
  e.sentence = Sentence::make(id, "sentence " + id);
  e.annotation.sentence_id = id;
  if (positive) e.annotation.events.push_back({type, "sentence", {}});
  e.polarity = positive ? Polarity::Positive : Polarity::Negative;
  return e;
}

EmbeddedIndex index_of(const std::vector<Vector>& vectors, const std::vector<bool>& positive = {}) {
  EmbeddedIndex idx;
  idx.dimension = vectors.at(0).size();
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    char id[8];
    std::snprintf(id, sizeof id, "e%02zu", i);
    idx.entries.push_back(entry(id, positive.empty() ? true : bool(positive[i])));
    idx.vectors.push_back(normalized(vectors[i]));
  }
  return idx;
}

// Brute force: distances of every entry, sorted by (distance, id).
std::vector<std::size_t> oracle_order(const EmbeddedIndex& idx, const Vector& q) {
  std::vector<std::size_t> order(idx.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double da = cosine_distance(idx.vectors[a], q), db = cosine_distance(idx.vectors[b], q);
    if (da != db) return da < db;
    return idx.entries[a].sentence.id < idx.entries[b].sentence.id;
  });
  return order;
}

void check_clusters(const std::vector<Cluster>& clusters, const std::vector<Candidate>& input, const EmbeddedIndex& idx,
                    double radius) {
  std::multiset<std::size_t> seen;
  for (std::size_t a = 0; a < clusters.size(); ++a) {
    for (std::size_t b = a + 1; b < clusters.size(); ++b)
      CHECK(cosine_distance(idx.vectors[clusters[a].leader.index], idx.vectors[clusters[b].leader.index]) > radius);
    for (const auto& m : clusters[a].members) {
      CHECK(cosine_distance(idx.vectors[m.index], idx.vectors[clusters[a].leader.index]) <= radius);
      CHECK(m.distance >= clusters[a].leader.distance);
      seen.insert(m.index);
    }
  }
  CHECK(seen.size() == input.size());
  for (const auto& c : input) CHECK(seen.count(c.index) == 1);
}

}  // namespace

TEST_CASE("top-k is a sorted linear scan") {
  const auto idx = index_of({{1, 0, 0}, {0.8, 0.6, 0}, {0, 1, 0}, {-1, 0, 0}});
  const auto top = retrieve_topk(idx, idx.vectors[0], 128);
  REQUIRE(top.size() == 4);
  CHECK(top[0].index == 0);
  CHECK(top[0].distance == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(top[1].distance == doctest::Approx(0.2));
  CHECK(top[3].distance == doctest::Approx(2.0));
  CHECK(retrieve_topk(idx, idx.vectors[0], 2).size() == 2);
  CHECK_THROWS_AS(retrieve_topk(idx, Vector{1, 0}, 2), DimensionMismatch);
}

TEST_CASE("top-k ties break by id") {
  const auto idx = index_of({{0, 1}, {0, -1}, {1, 0}});
  const auto top = retrieve_topk(idx, normalized({1, 0}), 3);
  CHECK(top[1].entry->sentence.id == "e00");
  CHECK(top[2].entry->sentence.id == "e01");
}

TEST_CASE("top-k agrees with a brute-force oracle") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Vector> vs(40, Vector(6));
    for (auto& v : vs)
      for (auto& x : v) x = n(rng);
    const auto idx = index_of(vs);
    Vector q(6);
    for (auto& x : q) x = n(rng);
    q = normalized(q);
    const auto top = retrieve_topk(idx, q, 128);
    REQUIRE(top.size() == 40);
    const auto expect = oracle_order(idx, q);
    for (std::size_t i = 0; i < 40; ++i) {
      CHECK(top[i].index == expect[i]);
      CHECK(top[i].distance == doctest::Approx(cosine_distance(idx.vectors[top[i].index], q)).epsilon(1e-9));
    }
  }
}

TEST_CASE("degenerate clusterings") {
  const auto same = index_of({{1, 0}, {1, 0}, {1, 0}, {1, 0}, {1, 0}});
  const auto c1 = cluster_candidates(retrieve_topk(same, same.vectors[0], 5), same, 0.5);
  REQUIRE(c1.size() == 1);
  CHECK(c1[0].members.size() == 5);

  const auto apart = index_of({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  CHECK(cluster_candidates(retrieve_topk(apart, apart.vectors[0], 3), apart, 0.5).size() == 3);
  CHECK(cluster_candidates({}, apart, 0.5).empty());
}

TEST_CASE("hash-embedded strings cluster with separated leaders") {
  HashEmbedder emb(64);
  const std::vector<std::string> texts{"troops attacked the city", "troops attacked the town", "the market fell",
                                       "markets fell sharply",     "a couple divorced",        "the couple split",
                                       "police arrested two men",  "police detained a man",    "rain all week",
                                       "it rained all week"};
  EmbeddedIndex idx;
  idx.dimension = 64;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    idx.entries.push_back(entry("h" + std::to_string(i), i % 2 == 0));
    idx.vectors.push_back(normalized(emb.embed(texts[i])));
  }
  const auto top = retrieve_topk(idx, normalized(emb.embed("soldiers attacked a village")), 128);
  const auto clusters = cluster_candidates(top, idx, 0.8);
  CHECK(clusters.size() > 1);
  check_clusters(clusters, top, idx, 0.8);
}

TEST_CASE("leader clustering properties on random candidate sets") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0, 1);
  std::uniform_real_distribution<double> r(0.05, 1.6);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Vector> vs(1 + rng() % 30, Vector(4));
    for (auto& v : vs)
      for (auto& x : v) x = n(rng);
    const auto idx = index_of(vs);
    const auto top = retrieve_topk(idx, idx.vectors[rng() % vs.size()], 128);
    const double radius = r(rng);
    const auto clusters = cluster_candidates(top, idx, radius);
    check_clusters(clusters, top, idx, radius);
    const auto again = cluster_candidates(top, idx, radius);
    REQUIRE(again.size() == clusters.size());
    for (std::size_t k = 0; k < again.size(); ++k) {
      CHECK(again[k].leader.index == clusters[k].leader.index);
      CHECK(again[k].members.size() == clusters[k].members.size());
    }
  }
}

TEST_CASE("shrinking the radius can reduce the cluster count") {
  // Greedy leaders are order dependent: at the smaller radius p2 becomes a
  // leader and absorbs p0 and p3, which were leaders at the larger radius.
  const auto idx = index_of({{-0.4, 1.4, 1.5}, {1.5, -0.2, 0.1}, {-0.2, -0.3, 1.7}, {-0.4, -1.4, -0.2}});
  const auto top = retrieve_topk(idx, normalized({1, 0, 0}), 4);
  CHECK(cluster_candidates(top, idx, 1.1).size() == 3);
  CHECK(cluster_candidates(top, idx, 1.1 * 0.9).size() == 2);
}

TEST_CASE("cluster count is monotone along the decay schedule on planted data") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    synthetic::ClusterSpec spec;
    spec.seed = seed;
    spec.n_points = 24;
    spec.n_clusters = 4;
    spec.spread = 0.1;
    spec.separation = 0.9;
    const auto pts = synthetic::gen_clustered_points(spec);
    const auto idx = synthetic::as_index(pts);
    const auto top = retrieve_topk(idx, idx.vectors[0], 128);
    std::size_t prev = 0;
    for (double mu = 1.35; mu > 0.01; mu = decay_radius(mu, 0.9)) {
      const auto n = cluster_candidates(top, idx, mu).size();
      CHECK(n >= prev);
      prev = n;
    }
    CHECK(prev == 24);
  }
}

TEST_CASE("diverse selection fills the polarity quota") {
  // 12 well separated directions, alternating polarity.
  std::vector<Vector> vs;
  std::vector<bool> pos;
  for (int i = 0; i < 12; ++i) {
    Vector v(12, 0.0);
    v[i] = 1.0;
    v[0] += 0.01 * (12 - i);  // distinct distances to the query
    vs.push_back(v);
    pos.push_back(i % 2 == 0);
  }
  const auto idx = index_of(vs, pos);
  Vector q(12, 0.0);
  q[0] = 1.0;
  const auto clusters = cluster_candidates(retrieve_topk(idx, q, 128), idx, 0.5);
  REQUIRE(clusters.size() == 12);
  const auto picked = select_diverse(clusters, 10, {5, 5});
  REQUIRE(picked.size() == 10);
  CHECK(std::count_if(picked.begin(), picked.end(), [](const Candidate& c) {
          return c.entry->polarity == Polarity::Positive;
        }) == 5);
  // Greedy walk by hand: positives e00..e08 and negatives e01..e09 come first.
  std::set<std::string> ids;
  for (const auto& c : picked) ids.insert(c.entry->sentence.id);
  CHECK(ids == std::set<std::string>{"e00", "e01", "e02", "e03", "e04", "e05", "e06", "e07", "e08", "e09"});
  CHECK(std::is_sorted(picked.begin(), picked.end(),
                       [](const Candidate& a, const Candidate& b) { return a.distance < b.distance; }));
}

TEST_CASE("backfill when one polarity is missing, and short results") {
  std::vector<Vector> vs;
  for (int i = 0; i < 12; ++i) {
    Vector v(12, 0.0);
    v[i] = 1.0;
    vs.push_back(v);
  }
  const auto all_pos = index_of(vs, std::vector<bool>(12, true));
  const auto top = retrieve_topk(all_pos, all_pos.vectors[0], 128);
  const auto picked = select_diverse(cluster_candidates(top, all_pos, 0.5), 10, {5, 5});
  CHECK(picked.size() == 10);
  for (const auto& c : picked) CHECK(c.entry->polarity == Polarity::Positive);

  const auto few = select_diverse(cluster_candidates(top, all_pos, 0.5), 20, {10, 10});
  CHECK(few.size() == 12);
}

TEST_CASE("diverse selection takes at most one example per cluster") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> n(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Vector> vs(1 + rng() % 40, Vector(5));
    std::vector<bool> pos;
    for (auto& v : vs) {
      for (auto& x : v) x = n(rng);
      pos.push_back(rng() % 3 != 0);
    }
    const auto idx = index_of(vs, pos);
    const auto clusters = cluster_candidates(retrieve_topk(idx, idx.vectors[0], 128), idx, 0.3 + (rng() % 10) * 0.1);
    const std::size_t m = 1 + rng() % 10;
    const std::size_t p = (m + 1) / 2;
    const auto picked = select_diverse(clusters, m, {p, m - p});
    CHECK(picked.size() <= m);
    CHECK(picked.size() == std::min(m, clusters.size()));
    std::set<std::size_t> owners;
    for (const auto& c : picked) {
      for (std::size_t k = 0; k < clusters.size(); ++k)
        for (const auto& mem : clusters[k].members)
          if (mem.index == c.index) owners.insert(k);
    }
    CHECK(owners.size() == picked.size());
  }
}

TEST_CASE("radius decay") {
  CHECK(decay_radius(1.35, 0.9) == 1.35 * 0.9);
  CHECK(decay_radius(1.35, 0.9) == doctest::Approx(1.215));
  CHECK(decay_radius(0.7, 1.0) == 0.7);
  CHECK(decay_radius(decay_radius(1.35, 0.9), 0.9) == doctest::Approx(1.0935).epsilon(1e-15));
}

TEST_CASE("gather_event_info: definitions, leakage guard and EAE filter") {
  const auto onto = EventOntology::load(testing::fixture("ace_ontology.jsonl"));
  HashEmbedder emb(256);
  auto entries = filter_split(load_corpus(testing::fixture("reference.jsonl")), {Split::Train});
  const auto leaked = entries[0];
  const auto idx = build_index(entries, emb);
  const Vector q = normalized(emb.embed(leaked.sentence.text));
  DragConfig cfg;

  RetrievalRequest req;
  req.query = &q;
  req.radius = 0.5;
  req.exclude_id = leaked.sentence.id;
  const auto r = gather_event_info({TriggerAnswer("Personnel:Start-Position", "holding"),
                                    TriggerAnswer("Personnel:End-Position", "former"), TriggerAnswer("Bogus:Type", "x"),
                                    TriggerAnswer()},
                                   onto, idx, req, cfg);
  REQUIRE(r.definitions.size() == 2);
  CHECK(r.definitions[0].type_id == "Personnel:Start-Position");
  CHECK(r.unknown_types == std::vector<EventTypeId>{"Bogus:Type"});
  CHECK(r.examples.size() <= 10);
  CHECK(!r.examples.empty());
  for (const auto& e : r.examples) CHECK(e.sentence.id != leaked.sentence.id);

  // The same text under another id is excluded by text.
  RetrievalRequest by_text = req;
  by_text.exclude_id = "other";
  by_text.exclude_text = leaked.sentence.text;
  for (const auto& e : gather_event_info({}, onto, idx, by_text, cfg).examples) CHECK(e.sentence.text != leaked.sentence.text);

  // Without the guard the sentence retrieves itself first.
  RetrievalRequest open = req;
  open.exclude_id.clear();
  CHECK(gather_event_info({}, onto, idx, open, cfg).examples.at(0).sentence.id == leaked.sentence.id);

  const auto none = gather_event_info({TriggerAnswer()}, onto, idx, req, cfg);
  CHECK(none.definitions.empty());
  CHECK(!none.examples.empty());

  RetrievalRequest eae = req;
  eae.require_type = "Personnel:End-Position";
  const auto typed = gather_event_info({TriggerAnswer("Personnel:End-Position", "former")}, onto, idx, eae, cfg);
  CHECK(!typed.examples.empty());
  for (const auto& e : typed.examples) CHECK(e.has_event_type("Personnel:End-Position"));

  RetrievalRequest plain = req;
  plain.diverse = false;
  CHECK(gather_event_info({}, onto, idx, plain, cfg).examples.size() == 10);

  CHECK(gather_event_info({}, onto, idx, req, cfg).examples.size() ==
        gather_event_info({}, onto, idx, req, cfg).examples.size());
}

TEST_CASE("drag config validation") {
  DragConfig c;
  CHECK(c.positives() == 5);
  CHECK(c.negatives() == 5);
  c.max_examples = 7;
  CHECK(c.positives() == 4);
  CHECK(c.negatives() == 3);
  c.radius_decay = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}
