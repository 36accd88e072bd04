#include <doctest.h>

#include <sstream>

#include "dao/errors.hpp"
#include "dao/ontology.hpp"
#include "helpers.hpp"

using namespace dao;

TEST_CASE("the ACE fixture loads all 33 types") {
  const auto onto = EventOntology::load(testing::fixture("ace_ontology.jsonl"));
  CHECK(onto.size() == 33);
  const auto& divorce = onto.lookup("Life:Divorce");
  CHECK(divorce.definition_text == "officially divorced under the legal definition of divorce");
  CHECK(onto.lookup("Personnel:End-Position").roles == std::vector<std::string>{"Person", "Entity", "Place"});
  CHECK(onto.contains("Conflict:Attack"));
  CHECK_FALSE(onto.contains("Conflict:Riot"));
}

TEST_CASE("unknown lookups and malformed records") {
  const auto onto = EventOntology::load(testing::fixture("ace_ontology.jsonl"));
  CHECK_THROWS_AS(onto.lookup("Nope:Nope"), UnknownEventType);

  std::istringstream dup(R"({"type":"A:B","definition":"x"}
{"type":"A:B","definition":"y"}
)");
  CHECK_THROWS_AS(EventOntology::parse(dup), DuplicateType);

  std::istringstream bad("{\"type\":\"A:B\"}\n");
  CHECK_THROWS_AS(EventOntology::parse(bad), FormatError);

  std::istringstream broken("{not json\n");
  CHECK_THROWS_AS(EventOntology::parse(broken), FormatError);

  std::istringstream dup_roles(R"({"type":"A:B","definition":"x","roles":["R","R"]})");
  CHECK_THROWS_AS(EventOntology::parse(dup_roles), FormatError);

  CHECK_THROWS_AS(EventOntology::load("/nonexistent/onto.jsonl"), IoError);
}

TEST_CASE("blank lines are skipped and type ids are sorted") {
  std::istringstream in("\n{\"type\":\"Z:Z\",\"definition\":\"z\"}\n\n{\"type\":\"A:A\",\"definition\":\"a\"}\n");
  const auto onto = EventOntology::parse(in);
  CHECK(onto.type_ids() == std::vector<EventTypeId>{"A:A", "Z:Z"});
}
