// Copyright 2026 The Unilayout Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "unilayout/error.hpp"
#include "unilayout/instruction.hpp"
#include "unilayout/layout_store.hpp"

namespace unilayout {
namespace {

Errc CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::kIo;
}

Element Partial(std::string label, BoundingBox box, std::initializer_list<Attribute> known) {
  Element e{std::move(label), box, StatusMask::AllUnknown()};
  for (Attribute a : known) e.status.set(a, AttributeStatus::kKnown);
  return e;
}

TEST_SUITE("instruction") {

TEST_CASE("paper prompt") {
  PrefixPrompt prefix{RefineFlag::kRefine, Domain::kArticle, 10, 2};
  std::vector<Element> elements;
  elements.push_back(Partial("text", {0, 122, 49, 0}, {Attribute::kClass, Attribute::kY,
                                                        Attribute::kW}));
  for (int i = 0; i < 8; ++i) {
    elements.push_back(Partial("text", {5, 5, 5, 5}, {Attribute::kClass}));
  }
  elements.push_back(Partial("", {0, 412, 55, 326}, {Attribute::kY, Attribute::kW,
                                                     Attribute::kH}));
  const auto ali = BuildAli(prefix, {}, elements);
  const std::string head = "refine;article;10;2;text 1146 2097;";
  const std::string tail = ";1436 2103 3398";
  REQUIRE(ali.text.size() > head.size() + tail.size());
  CHECK(ali.text.substr(0, head.size()) == head);
  CHECK(ali.text.substr(ali.text.size() - tail.size()) == tail);
}

TEST_CASE("unconditional prompt has no body") {
  PrefixPrompt prefix{RefineFlag::kUnrefine, Domain::kMagazine, std::nullopt, std::nullopt};
  CHECK(BuildAli(prefix, {}, {}).text == "unrefine;magazine");
  prefix.domain = Domain::kAppUi;
  CHECK(BuildAli(prefix, {}, {}).text == "unrefine;App UI");
}

TEST_CASE("fully known element") {
  PrefixPrompt prefix{RefineFlag::kUnrefine, Domain::kArticle, 1, 1};
  std::vector<Element> e = {{"title", {10, 20, 30, 40}, {}}};
  CHECK(BuildAli(prefix, {}, e).text == "unrefine;article;1;1;title 10 1044 2078 3112");
}

TEST_CASE("relations come before elements") {
  PrefixPrompt prefix{RefineFlag::kUnrefine, Domain::kArticle, 2, 1};
  std::vector<Element> e = {Partial("title", {}, {Attribute::kClass}),
                            Partial("text", {}, {Attribute::kClass})};
  std::vector<RelationConstraint> r = {{0, 1, Predicate::kTop}};
  CHECK(BuildAli(prefix, r, e).text == "unrefine;article;2;1;r 0 top 1;title;text");
  std::vector<RelationConstraint> self = {{1, 1, Predicate::kTop}};
  CHECK(CodeOf([&] { BuildAli(prefix, self, e); }) == Errc::kInvalidArgument);
}

TEST_CASE("prefix counts must be consistent") {
  PrefixPrompt half{RefineFlag::kUnrefine, Domain::kArticle, 3, std::nullopt};
  CHECK(CodeOf([&] { BuildAli(half, {}, {}); }) == Errc::kInvalidPrefix);
}

TEST_CASE("ulr build and parse") {
  Layout l;
  l.elements = {{"title", {10, 20, 30, 40}, {}}, {"text", {1, 2, 3, 4}, {}}};
  const auto ulr = BuildUlr(l);
  CHECK(ulr.text == "title 10 1044 2078 3112;text 1 1026 2051 3076");
  const auto reg = CategoryRegistry::Defaults();
  CHECK(ParseUlr(ulr.text, reg, Domain::kArticle) == l);
  CHECK(ParseUlr("title 10 1044 2078 3112", reg, Domain::kArticle).elements[0].box ==
        BoundingBox{10, 20, 30, 40});
  CHECK(CodeOf([&] { ParseUlr("title 10 1044 1100 3112", reg, Domain::kArticle); }) ==
        Errc::kDuplicateAttribute);
  CHECK(CodeOf([&] { ParseUlr("banner 10 1044 2078 3112", reg, Domain::kArticle); }) ==
        Errc::kUnknownLabel);
  CHECK(CodeOf([&] { ParseUlr("title 10 1044 2078", reg, Domain::kArticle); }) ==
        Errc::kMissingAttribute);
  CHECK(CodeOf([&] { BuildUlr(Layout{}); }) == Errc::kIncompleteLayout);
}

TEST_CASE("integers may arrive in any order and labels may have spaces") {
  const auto reg = CategoryRegistry::Defaults();
  const auto l = ParseUlr("text button 3112 2078 10 1044", reg, Domain::kAppUi);
  CHECK(l.elements[0].label == "text button");
  CHECK(l.elements[0].box == BoundingBox{10, 20, 30, 40});
}

TEST_CASE("ulr roundtrip on random layouts") {
  std::mt19937_64 rng(11);
  const auto reg = CategoryRegistry::Defaults();
  for (int i = 0; i < 2000; ++i) {
    const Domain d = kAllDomains[i % 4];
    const Layout l = oracle::RandomLayout(rng, d, reg);
    const Layout back = ParseUlr(BuildUlr(l).text, reg, d, {}, {l.page_w, l.page_h});
    REQUIRE(back == l);
  }
}

TEST_CASE("ali parser recovers every condition") {
  std::mt19937_64 rng(3);
  const auto reg = CategoryRegistry::Defaults();
  std::bernoulli_distribution coin(0.5);
  for (int i = 0; i < 10000; ++i) {
    const Domain d = kAllDomains[i % 4];
    Layout l = oracle::RandomLayout(rng, d, reg, 8);
    for (auto& e : l.elements) {
      for (int a = 0; a < 5; ++a) {
        const int pick = std::uniform_int_distribution<int>(0, 2)(rng);
        auto status = pick == 0 ? AttributeStatus::kKnown
                      : pick == 1 ? AttributeStatus::kUnknown
                                  : AttributeStatus::kNoisy;
        if (a == 0 && status == AttributeStatus::kNoisy) status = AttributeStatus::kKnown;
        e.status.set(static_cast<Attribute>(a), status);
      }
    }
    PrefixPrompt prefix{coin(rng) ? RefineFlag::kRefine : RefineFlag::kUnrefine, d,
                        static_cast<int>(l.size()), 1 + i % 3};
    std::vector<RelationConstraint> rel;
    if (l.size() >= 2 && coin(rng)) rel.push_back({0, 1, Predicate::kLarger});
    const auto ali = BuildAli(prefix, rel, l.elements);
    REQUIRE(BuildAli(prefix, rel, l.elements).text == ali.text);
    const auto cond = ParseAli(ali.text);
    REQUIRE(cond.prefix == prefix);
    REQUIRE(cond.relations == rel);
    REQUIRE(cond.elements.size() == l.size());
    for (std::size_t k = 0; k < l.size(); ++k) {
      const auto& want = l.elements[k];
      const auto& got = cond.elements[k];
      for (int a = 0; a < 5; ++a) {
        const auto attr = static_cast<Attribute>(a);
        const bool present = want.status.get(attr) != AttributeStatus::kUnknown;
        REQUIRE(present == (got.status.get(attr) != AttributeStatus::kUnknown));
        if (present && a > 0) REQUIRE(got.Value(attr) == want.Value(attr));
        if (present && a == 0) REQUIRE(got.label == want.label);
      }
    }
  }
}

TEST_CASE("training pair") {
  CHECK(JoinTrainingPair("unrefine;article;1;1;", "title 10 1044 2078 3112") ==
        "unrefine;article;1;1;#title 10 1044 2078 3112");
  CHECK(CodeOf([] { JoinTrainingPair("a#b", "c"); }) == Errc::kSeparatorCollision);
  const auto [ali, ulr] = SplitTrainingPair("unrefine;article;1;1;#title 10 1044 2078 3112");
  CHECK(ali == "unrefine;article;1;1;");
  CHECK(ulr == "title 10 1044 2078 3112");
}

TEST_CASE("training record json keeps field order") {
  TrainingRecord r{"unrefine;slide", "title 1 1025 2049 3073", "gen-u", "slide"};
  const auto line = ToJsonLine(r);
  CHECK(line ==
        R"({"prompt":"unrefine;slide","completion":"title 1 1025 2049 3073","task":"gen-u","domain":"slide"})");
  CHECK(TrainingRecordFromJson(line) == r);
}

TEST_CASE("natural-language templates") {
  CHECK(RenderNlPrompt(3, Domain::kMagazine) ==
        "Design a flexible layout for a magazine publisher.");
  CHECK(RenderNlPrompt(5, Domain::kArticle, 10) ==
        "Generate a layout of article, with 10 elements.");
  CHECK(RenderNlPrompt(4, Domain::kAppUi) == "Generate a layout of App UI.");
  CHECK(RenderNlPrompt(6, Domain::kArticle, 10, 2) ==
        "Generate a layout of article, with 10 elements and 2 columns.");
  CHECK(CodeOf([] { RenderNlPrompt(7, Domain::kArticle); }) == Errc::kUnknownTemplate);
  const auto ali = BuildTextAli(RenderNlPrompt(1, Domain::kSlide), Domain::kSlide);
  CHECK(ali.text.find(';') == std::string::npos);
}

}  // TEST_SUITE
}  // namespace
}  // namespace unilayout
