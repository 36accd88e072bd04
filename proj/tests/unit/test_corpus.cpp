#include <doctest.h>

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dao/corpus.hpp"
#include "dao/errors.hpp"
#include "dao/offline_backends.hpp"
#include "helpers.hpp"

using namespace dao;

TEST_CASE("fixture corpus loads with derived polarity and default split") {
  const auto entries = load_corpus(testing::fixture("reference.jsonl"));
  REQUIRE(entries.size() == 30);
  CHECK(filter_split(entries, {Split::Train}).size() == 20);
  CHECK(filter_split(entries, {Split::Calib}).size() == 10);
  for (const auto& e : entries) CHECK((e.polarity == Polarity::Positive) == !e.annotation.events.empty());

  std::istringstream in(R"({"id":"s","text":"a b"})");
  const auto one = parse_corpus(in);
  CHECK(one[0].split == Split::Train);
  CHECK(one[0].polarity == Polarity::Negative);
}

TEST_CASE("whitespace is normalized in text and spans") {
  std::istringstream in(R"({"id":"s","text":"  Troops   attacked\tthe city ","events":[{"type":"Conflict:Attack","trigger":"attacked","arguments":[{"role":"Target","content":"the   city"}]}]})");
  const auto e = parse_corpus(in).at(0);
  CHECK(e.sentence.text == "Troops attacked the city");
  CHECK(e.sentence.tokens.size() == 4);
  CHECK(e.annotation.events[0].arguments[0].content == "the city");
}

TEST_CASE("spans must occur in the sentence unless lenient") {
  const std::string rec = R"({"id":"s","text":"a b","events":[{"type":"T:T","trigger":"zzz"}]})";
  std::istringstream strict(rec);
  CHECK_THROWS_AS(parse_corpus(strict), SpanNotInSentence);
  std::istringstream lenient(rec);
  CHECK(parse_corpus(lenient, SpanCheck::Lenient).at(0).annotation.events.size() == 1);
}

TEST_CASE("format errors carry the line number") {
  std::istringstream in("{\"id\":\"a\",\"text\":\"x\"}\n{\"id\":\"b\"}\n");
  try {
    parse_corpus(in);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.line() == 2);
  }
  std::istringstream split("{\"id\":\"a\",\"text\":\"x\",\"split\":\"dev\"}\n");
  CHECK_THROWS_AS(parse_corpus(split), FormatError);
}

TEST_CASE("prediction records drop the split") {
  const auto s = Sentence::make("s1", "Troops attacked");
  const auto j = nlohmann::json::parse(to_prediction_json(s, {{"Conflict:Attack", "attacked", {{"Attacker", "Troops"}}}}));
  CHECK(j["id"] == "s1");
  CHECK_FALSE(j.contains("split"));
  CHECK(j["events"][0]["arguments"][0]["role"] == "Attacker");
}

TEST_CASE("vector helpers") {
  CHECK_THROWS_AS(normalized({0.0, 0.0}), ZeroVector);
  const auto u = normalized({3.0, 4.0});
  CHECK(u[0] == doctest::Approx(0.6));
  CHECK(cosine_distance(u, u) == doctest::Approx(0.0));
  CHECK(cosine_distance({1, 0}, {-1, 0}) == doctest::Approx(2.0));
  CHECK(cosine_distance({1, 0}, {0, 1}) == doctest::Approx(1.0));
}

TEST_CASE("index vectors are unit norm and dimension checked") {
  HashEmbedder emb(64);
  const auto idx = build_index(load_corpus(testing::fixture("reference.jsonl")), emb);
  CHECK(idx.size() == 30);
  CHECK(idx.dimension == 64);
  for (const auto& v : idx.vectors) CHECK(std::sqrt(dot(v, v)) == doctest::Approx(1.0).epsilon(1e-12));

  class Wrong : public EmbeddingBackend {
   public:
    std::vector<double> embed(std::string_view) override { return {1.0, 2.0}; }
    std::size_t dimension() const override { return 3; }
  } wrong;
  CHECK_THROWS_AS(build_index(load_corpus(testing::fixture("reference.jsonl")), wrong), DimensionMismatch);
}
