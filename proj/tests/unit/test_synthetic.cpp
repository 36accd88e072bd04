#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "dao/adacp.hpp"
#include "dao/drag.hpp"
#include "dao/errors.hpp"
#include "dao/synthetic.hpp"

using namespace dao;
using namespace dao::synthetic;

namespace {

// True when the clusters are exactly the planted groups.
bool recovers(const std::vector<Cluster>& clusters, const ClusteredPoints& pts) {
  std::set<std::size_t> seen_labels;
  for (const auto& c : clusters) {
    const std::size_t label = pts.labels[c.leader.index];
    if (!seen_labels.insert(label).second) return false;
    std::size_t planted = 0;
    for (auto l : pts.labels) planted += l == label;
    if (c.members.size() != planted) return false;
    for (const auto& m : c.members)
      if (pts.labels[m.index] != label) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("risk draws are seeded and shaped by the spec") {
  RiskSpec spec;
  spec.seed = 4;
  const auto a = gen_risks(spec);
  CHECK(a.calib.size() == 99);
  CHECK(a.test.size() == 1);
  CHECK(a.calib == gen_risks(spec).calib);
  spec.seed = 5;
  CHECK(a.calib != gen_risks(spec).calib);
  for (double r : a.calib) CHECK(r > 0.0);

  spec.log_sigma = 0.0;
  spec.log_mean = std::log(2.0);
  for (double r : gen_risks(spec).calib) CHECK(r == doctest::Approx(2.0));
  spec.log_sigma = -1.0;
  CHECK_THROWS_AS(gen_risks(spec), InvalidSpec);
}

TEST_CASE("risks are exchangeable: the test rank is uniform") {
  // With 9 calibration risks the test risk's rank is uniform on 0..9.
  std::map<std::size_t, std::size_t> ranks;
  const std::size_t trials = 20000;
  for (std::uint64_t seed = 0; seed < trials; ++seed) {
    RiskSpec spec;
    spec.seed = seed;
    spec.n_calib = 9;
    const auto d = gen_risks(spec);
    std::size_t below = 0;
    for (double r : d.calib) below += r < d.test[0];
    ++ranks[below];
  }
  REQUIRE(ranks.size() == 10);
  for (const auto& [rank, count] : ranks) CHECK(std::abs(double(count) / trials - 0.1) < 0.012);
}

TEST_CASE("planted clusters have exact pairwise distances") {
  ClusterSpec spec;
  spec.seed = 1;
  spec.n_points = 20;
  spec.n_clusters = 4;
  spec.spread = 0.15;
  spec.separation = 0.8;
  const auto pts = gen_clustered_points(spec);
  REQUIRE(pts.points.size() == 20);
  CHECK(pts.achieved_separation == doctest::Approx(0.8));
  for (std::size_t i = 0; i < pts.points.size(); ++i) {
    CHECK(std::sqrt(dot(pts.points[i], pts.points[i])) == doctest::Approx(1.0));
    for (std::size_t j = i + 1; j < pts.points.size(); ++j) {
      const double d = cosine_distance(pts.points[i], pts.points[j]);
      CHECK(d == doctest::Approx(pts.labels[i] == pts.labels[j] ? 0.15 : 0.8).epsilon(1e-9));
    }
  }
  std::map<std::size_t, std::size_t> sizes;
  for (auto l : pts.labels) ++sizes[l];
  CHECK(sizes.size() == 4);
  for (const auto& [l, n] : sizes) CHECK(n == 5);
}

TEST_CASE("leader clustering recovers the planted partition between spread and separation") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    ClusterSpec spec;
    spec.seed = seed;
    spec.n_points = 10 + seed % 20;
    spec.n_clusters = 1 + seed % 6;
    spec.spread = 0.05 + 0.01 * static_cast<double>(seed % 5);
    spec.separation = 0.6 + 0.1 * static_cast<double>(seed % 4);
    const auto pts = gen_clustered_points(spec);
    const auto idx = as_index(pts);
    const auto top = retrieve_topk(idx, idx.vectors[seed % idx.size()], 128);
    for (double mu : {spec.spread + 1e-6, 0.5 * (spec.spread + spec.separation), spec.separation - 1e-6}) {
      const auto clusters = cluster_candidates(top, idx, mu);
      CHECK(clusters.size() == spec.n_clusters);
      CHECK(recovers(clusters, pts));
    }
    CHECK(cluster_candidates(top, idx, spec.separation + 1e-6).size() == 1);
    CHECK(cluster_candidates(top, idx, spec.spread - 1e-6).size() == spec.n_points);
  }
}

TEST_CASE("generator is deterministic and validates its spec") {
  ClusterSpec spec;
  spec.seed = 7;
  const auto a = gen_clustered_points(spec);
  const auto b = gen_clustered_points(spec);
  CHECK(a.points == b.points);
  CHECK(a.labels == b.labels);
  CHECK(as_index(a).entries.at(3).sentence.id == "p0003");

  auto bad = spec;
  bad.separation = 0.15;  // not more than twice the spread
  CHECK_THROWS_AS(gen_clustered_points(bad), InvalidSpec);
  bad = spec;
  bad.n_clusters = 0;
  CHECK_THROWS_AS(gen_clustered_points(bad), InvalidSpec);
  bad = spec;
  bad.n_points = 2;
  CHECK_THROWS_AS(gen_clustered_points(bad), InvalidSpec);
  bad = spec;
  bad.spread = 1.0;
  CHECK_THROWS_AS(gen_clustered_points(bad), InvalidSpec);
  bad = spec;
  bad.separation = 2.5;
  CHECK_THROWS_AS(gen_clustered_points(bad), InvalidSpec);
  bad = spec;
  bad.n_clusters = 10;
  bad.n_points = 30;
  bad.separation = 1.9;  // ten centres cannot all be this far apart
  CHECK_THROWS_AS(gen_clustered_points(bad), InvalidSpec);
}

TEST_CASE("conformal coverage on synthetic risks") {
  std::size_t covered = 0;
  const std::size_t trials = 2000;
  for (std::uint64_t seed = 0; seed < trials; ++seed) {
    RiskSpec spec;
    spec.seed = seed;
    const auto d = gen_risks(spec);
    covered += accept(d.test[0], calibrate(d.calib, 0.1));
  }
  // Exact coverage is 0.9 with n = 99; three binomial standard deviations.
  CHECK(double(covered) / trials >= 0.9 - 3 * std::sqrt(0.09 / trials));
}
