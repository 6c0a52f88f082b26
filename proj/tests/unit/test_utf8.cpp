#include <doctest.h>

#include "seqtag/utf8.hpp"

using namespace seqtag;

TEST_CASE("decode and encode round trip accented text") {
  std::string text = "lycée Çà Œuvre €";
  auto cps = utf8::decode(text);
  CHECK(cps.size() == 16);
  CHECK(utf8::encode(cps) == text);
  CHECK(utf8::length(text) == 16);
}

TEST_CASE("case predicates and lowering cover Latin-1 and Extended-A") {
  CHECK(utf8::is_upper(U'É'));
  CHECK(utf8::is_lower(U'é'));
  CHECK(utf8::to_lower(U'Œ') == U'œ');
  CHECK(utf8::lowercase("ÉCOLE Œuvre") == "école œuvre");
  CHECK_FALSE(utf8::is_upper(U'-'));
  CHECK(utf8::is_digit(U'7'));
  CHECK(utf8::is_space(U' '));
}

TEST_CASE("prefix and suffix count code points") {
  CHECK(utf8::prefix("Été", 1) == "É");
  CHECK(utf8::suffix("lycée", 2) == "ée");
  CHECK(utf8::suffix("ab", 5) == "ab");
}

TEST_CASE("invalid and truncated sequences decode to the replacement character") {
  CHECK(utf8::decode("\xC3") == std::vector<char32_t>{0xFFFD});
  CHECK(utf8::decode("a\x80") == std::vector<char32_t>{U'a', 0xFFFD});
}
