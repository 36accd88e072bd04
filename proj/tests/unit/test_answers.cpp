#include <doctest.h>

#include <algorithm>
#include <random>

#include "dao/answers.hpp"

using namespace dao;

TEST_CASE("trigger answers render as quoted pairs") {
  CHECK(render_answer(TriggerAnswer("Life:Die", "killed")) == "[\"Life:Die\", \"killed\"]");
  CHECK(render_answer(TriggerAnswer::no_event()) == "[]");
  CHECK(render_answer(TriggerAnswer("T", "say \"hi\"")) == "[\"T\", \"say \\\"hi\\\"\"]");
  CHECK(is_abstention(Answer{TriggerAnswer{}}));
  CHECK_FALSE(is_abstention(Answer{TriggerAnswer("Life:Die", "killed")}));
}

TEST_CASE("argument tables render with the fixed header") {
  ArgumentAnswer a{"Life:Die", {{"Victim", "civilians"}, {"Place", std::nullopt}}};
  CHECK(render_answer(a) ==
        "| event type | argument role | argument content |\n|---|---|---|\n| Life:Die | Victim | civilians |\n"
        "| Life:Die | Place | None |");
  CHECK_FALSE(a.is_empty());
  CHECK(ArgumentAnswer{"Life:Die", {{"Victim", std::nullopt}}}.is_empty());
  CHECK(is_abstention(Answer{ArgumentAnswer{"Life:Die", {}}}));
}

TEST_CASE("canonicalize orders by role, drops unknown roles and shadowed None rows") {
  const std::vector<std::string> roles{"Agent", "Victim", "Instrument", "Place"};
  std::vector<std::string> dropped;
  ArgumentAnswer a{"Life:Die",
                   {{"Place", std::nullopt},
                    {"Victim", "men"},
                    {"Victim", "children"},
                    {"Victim", std::nullopt},
                    {"Weapon", "gun"},
                    {"Victim", "men"},
                    {"Agent", "Troops"}}};
  const auto c = canonicalize(a, roles, &dropped);
  CHECK(dropped == std::vector<std::string>{"Weapon"});
  const std::vector<ArgumentRow> expect{
      {"Agent", "Troops"}, {"Victim", "children"}, {"Victim", "men"}, {"Place", std::nullopt}};
  CHECK(c.rows == expect);
}

TEST_CASE("canonicalize is idempotent and order independent") {
  const std::vector<std::string> roles{"A", "B", "C"};
  const std::vector<std::string> contents{"x", "y", "z"};
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    ArgumentAnswer a{"T:T", {}};
    const int n = static_cast<int>(rng() % 7);
    for (int i = 0; i < n; ++i) {
      const auto& role = roles[rng() % roles.size()];
      if (rng() % 4 == 0) {
        a.rows.push_back({role, std::nullopt});
      } else {
        a.rows.push_back({role, contents[rng() % contents.size()]});
      }
    }
    const auto once = canonicalize(a, roles);
    CHECK(canonicalize(once, roles) == once);
    auto shuffled = a;
    std::shuffle(shuffled.rows.begin(), shuffled.rows.end(), rng);
    CHECK(canonicalize(shuffled, roles) == once);
  }
}
