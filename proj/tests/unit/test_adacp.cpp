#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dao/adacp.hpp"
#include "dao/errors.hpp"
#include "dao/offline_backends.hpp"

using namespace dao;

namespace {

// Rank from integer arithmetic: delta = percent / 100.
std::size_t oracle_rank(std::size_t n, int percent) {
  const std::size_t num = (n + 1) * static_cast<std::size_t>(100 - percent);
  return (num + 99) / 100;
}

double oracle_quantile(std::vector<double> risks, int percent) {
  const std::size_t rank = oracle_rank(risks.size(), percent);
  if (rank > risks.size()) return std::numeric_limits<double>::infinity();
  std::sort(risks.begin(), risks.end());
  return risks[rank - 1];
}

}  // namespace

TEST_CASE("conformal rank matches integer arithmetic") {
  for (int percent : {1, 5, 10, 20, 25, 50, 90}) {
    for (std::size_t n = 1; n <= 1000; ++n) CHECK(conformal_rank(n, percent / 100.0) == oracle_rank(n, percent));
  }
}

TEST_CASE("calibrate matches the sort-based oracle") {
  std::mt19937_64 rng(1);
  std::lognormal_distribution<double> risk(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng() % 200;
    std::vector<double> r(n);
    for (auto& x : r) x = risk(rng);
    for (int percent : {5, 10, 20, 50}) CHECK(calibrate(r, percent / 100.0).value == oracle_quantile(r, percent));
  }
}

TEST_CASE("every subset of a small pool") {
  const std::vector<double> pool{0.3, 1.7, 0.2, 2.5, 0.9, 0.9, 4.0, 1.1};
  for (unsigned mask = 1; mask < (1u << pool.size()); ++mask) {
    std::vector<double> r;
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (mask & (1u << i)) r.push_back(pool[i]);
    for (int percent : {5, 10, 20, 50}) CHECK(calibrate(r, percent / 100.0).value == oracle_quantile(r, percent));
  }
}

TEST_CASE("worked examples") {
  const std::vector<double> ten{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  CHECK(std::isinf(calibrate(ten, 0.05).value));  // rank 11
  CHECK(calibrate(ten, 0.1).value == 10.0);       // rank ceil(9.9) = 10
  CHECK(calibrate(ten, 0.2).value == 9.0);        // rank ceil(8.8) = 9
  CHECK(calibrate(ten, 0.5).value == 6.0);        // rank ceil(5.5) = 6
  const std::vector<double> nine{1, 2, 3, 4, 5, 6, 7, 8, 9};
  CHECK(calibrate(nine, 0.1).value == 9.0);  // (9+1)(0.9) = 9 exactly
  CHECK(std::isinf(calibrate(std::vector<double>{5.0}, 0.1).value));
  CHECK(calibrate(std::vector<double>{5.0}, 0.5).value == 5.0);
  CHECK_THROWS_AS(calibrate(std::vector<double>{}, 0.1), EmptyCalibrationSet);
  CHECK_THROWS_AS(calibrate(ten, 0.0), ConfigError);
  CHECK_THROWS_AS(calibrate(ten, 1.0), ConfigError);
}

TEST_CASE("quantile is monotone in delta and permutation invariant") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> r(1 + rng() % 80);
    for (auto& x : r) x = u(rng);
    double prev = std::numeric_limits<double>::infinity();
    for (double delta : {0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 0.8}) {
      const double q = calibrate(r, delta).value;
      CHECK(q <= prev);
      prev = q;
    }
    auto shuffled = r;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(calibrate(shuffled, 0.1).value == calibrate(r, 0.1).value);
  }
}

TEST_CASE("accept boundary is inclusive") {
  const RiskThreshold t{1.0, 0};
  CHECK(accept(1.0, t));
  CHECK(accept(0.0, t));
  CHECK_FALSE(accept(std::nextafter(1.0, 2.0), t));
  CHECK(accept(1e300, RiskThreshold{}));
}

TEST_CASE("threshold decay is geometric") {
  RiskThreshold t{3.0, 0};
  for (int round = 1; round <= 10; ++round) {
    const RiskThreshold next = decay_threshold(t, 0.5);
    CHECK(next.round == round);
    CHECK(next.value == 3.0 * std::ldexp(1.0, -round));  // powers of two are exact
    CHECK(next.value < t.value);
    t = next;
  }
  CHECK(decay_threshold({2.0, 4}, 1.0).value == 2.0);
  const RiskThreshold inf = decay_threshold(RiskThreshold{}, 0.5);
  CHECK(std::isinf(inf.value));
}

TEST_CASE("config validation") {
  AdaCPConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(*c.ed_override == 1.0);
  CHECK(*c.eae_override == 3.0);
  c.beta = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.beta = 0.5;
  c.delta = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.delta = 0.1;
  c.ed_override = -1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("risk scoring") {
  KeyedScorer scorer({{{"alpha"}, "[\"Life:Die\", \"died\"]", 0.8}}, "[]", 1.0);
  const auto prompt = scoring_prompt("input alpha", "packet");
  CHECK(prompt == "input alpha\n\nReference information:\npacket");
  CHECK(scoring_prompt("input", "") == "input");
  CHECK(risk_score(scorer, "input alpha", "", "[\"Life:Die\", \"died\"]") == 0.8);
  CHECK(risk_score(scorer, "input alpha", "", "[\"Life:Die\", \"killed\"]") > 0.8);
  CHECK(risk_score(scorer, "input beta", "", "[]") == 1.0);
  CHECK_THROWS_AS(risk_score(scorer, "x", "", ""), ConfigError);
}

TEST_CASE("risk histogram") {
  const std::vector<double> r{0.0, 0.5, 1.0, 1.0, 2.0};
  const auto h = risk_histogram(r, 4);
  CHECK(h.max_risk == 2.0);
  CHECK(h.counts == std::vector<std::size_t>{1, 1, 2, 1});
  const auto zero = risk_histogram(std::vector<double>{0.0, 0.0}, 3);
  CHECK(zero.counts == std::vector<std::size_t>{2, 0, 0});
  CHECK(risk_histogram({}, 5).counts == std::vector<std::size_t>(5, 0));
}
