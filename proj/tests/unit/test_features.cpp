#include <doctest.h>

#include <algorithm>

#include "seqtag/features.hpp"
#include "test_support.hpp"

using namespace seqtag;

namespace {
bool has(const PositionFeatures& feats, const std::string& f) {
  return std::find(feats.begin(), feats.end(), f) != feats.end();
}
}  // namespace

TEST_CASE("lexical templates on the example sentence") {
  auto feats = extract_features(testing::example_sentence(Scheme::io), FeatureTemplateSet::standard(false));
  REQUIRE(feats.size() == 8);
  const auto& brandi = feats[1];
  for (const char* f : {"bias", "w0=brandi", "w-1=M.", "w+1=,", "pre1=B", "pre3=Bra", "suf2=di",
                        "suf3=ndi", "shape=Xx", "cap=1", "allcaps=0", "digit=0", "hyphen=0"})
    CHECK(has(brandi, f));
  CHECK(brandi.size() == FeatureTemplateSet::standard(false).templates.size());

  CHECK(has(feats[0], "w-1=<BOS>"));
  CHECK(has(feats[7], "w+1=<EOS>"));
  CHECK(has(feats[7], "hyphen=1"));
  CHECK(has(feats[7], "shape=Xx-Xx"));
  CHECK(has(feats[5], "suf2=ée"));
  CHECK(has(feats[5], "w0=lycée"));
}

TEST_CASE("word_shape") {
  CHECK(word_shape("Saint-Brieuc") == "Xx-Xx");
  CHECK(word_shape("1887") == "d");
  CHECK(word_shape("ÉCOLE") == "X");
  CHECK(word_shape("l'Opéra") == "x'Xx");
  CHECK(word_shape("M.") == "X.");
}

TEST_CASE("all-caps and digit flags") {
  Sentence s{{{"ÇA", {}, "O"}, {"1887", {}, "O"}, {"x", {}, "O"}}};
  auto feats = extract_features(s, FeatureTemplateSet::standard(false));
  CHECK(has(feats[0], "allcaps=1"));
  CHECK(has(feats[1], "allcaps=0"));
  CHECK(has(feats[1], "digit=1"));
  CHECK(has(feats[2], "cap=0"));
}

TEST_CASE("POS templates") {
  Sentence s{{{"Jean", {"NPP"}, "O"}, {"part", {"V"}, "O"}, {"seul", {}, "O"}}};
  auto feats = extract_features(s, FeatureTemplateSet::standard(true));
  CHECK(has(feats[0], "pos0=NPP"));
  CHECK(has(feats[0], "pos-1=<BOS>"));
  CHECK(has(feats[0], "pos+1=V"));
  CHECK(has(feats[2], "pos0=<NONE>"));
  CHECK(has(feats[2], "pos+1=<EOS>"));
  CHECK(FeatureTemplateSet::standard(true).uses_pos());
  CHECK_FALSE(FeatureTemplateSet::standard(false).uses_pos());
}

TEST_CASE("template sets round trip through their names") {
  auto set = FeatureTemplateSet::standard(true);
  CHECK(FeatureTemplateSet::parse(set.join()) == set);
  CHECK_THROWS_AS(FeatureTemplateSet::parse("bias,nope"), std::invalid_argument);
  CHECK_THROWS_AS(FeatureTemplateSet::parse(""), std::invalid_argument);
}

TEST_CASE("extraction is deterministic") {
  auto s = testing::example_sentence(Scheme::bioes);
  auto set = FeatureTemplateSet::standard(false);
  CHECK(extract_features(s, set) == extract_features(s, set));
}

TEST_CASE("FeatureIndex assigns dense ids") {
  FeatureIndex idx;
  CHECK(idx.add("a") == 0);
  CHECK(idx.add("b") == 1);
  CHECK(idx.add("a") == 0);
  CHECK(idx.size() == 2);
  CHECK(idx.find("b") == 1);
  CHECK(idx.find("zzz") == FeatureIndex::absent);
  CHECK(idx.name(1) == "b");
}
