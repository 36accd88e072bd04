#include <doctest.h>

#include "dao/text.hpp"

using namespace dao;

TEST_CASE("split and join round trip on normalized text") {
  CHECK(split_whitespace("  a\tb \n c  ") == std::vector<std::string>{"a", "b", "c"});
  CHECK(join({"a", "b", "c"}, " ") == "a b c");
  CHECK(split_whitespace("").empty());
  CHECK(trim("  x y \n") == "x y");
}

TEST_CASE("case-insensitive containment") {
  CHECK(contains_ci("No Agreement, debate continues", "no agreement"));
  CHECK_FALSE(contains_ci("agree", "agreement"));
  CHECK(to_lower("AbC") == "abc");
}

TEST_CASE("edit distance against hand counts") {
  CHECK(edit_distance("kitten", "sitting") == 3);
  CHECK(edit_distance("", "abc") == 3);
  CHECK(edit_distance("abc", "abc") == 0);
  CHECK(edit_distance("flaw", "lawn") == 2);
}

TEST_CASE("digest is stable and short") {
  CHECK(digest("hello") == digest("hello"));
  CHECK(digest("hello") != digest("hello "));
  CHECK(digest("x").size() == 16);
  // FNV-1a 64 reference value for the empty string is the offset basis.
  CHECK(fnv1a("") == 14695981039346656037ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}
