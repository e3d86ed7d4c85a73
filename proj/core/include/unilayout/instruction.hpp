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
#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "unilayout/iqe.hpp"
#include "unilayout/layout.hpp"

namespace unilayout {

enum class RefineFlag { kRefine, kUnrefine };

std::string_view RefineFlagName(RefineFlag flag);

struct PrefixPrompt {
  RefineFlag refine = RefineFlag::kUnrefine;
  Domain domain = Domain::kArticle;
  // Both absent for unconditional generation, both present otherwise.
  std::optional<int> object_number;
  std::optional<int> column_number;

  friend bool operator==(const PrefixPrompt&, const PrefixPrompt&) = default;
};

enum class Predicate {
  kTop,
  kBottom,
  kLeft,
  kRight,
  kOverlapped,
  kSmaller,
  kLarger,
  kEqual,
};

std::string_view PredicateName(Predicate predicate);
std::optional<Predicate> ParsePredicate(std::string_view name);

/// Pairwise constraint between element ordinals (0-based).
struct RelationConstraint {
  int subject = 0;
  int object = 0;
  Predicate predicate = Predicate::kTop;

  friend bool operator==(const RelationConstraint&,
                         const RelationConstraint&) = default;
};

/// Everything an instruction was built from.
struct ConditionSequence {
  PrefixPrompt prefix;
  std::vector<RelationConstraint> relations;
  std::vector<Element> elements;
  std::optional<std::string> natural_language;
};

struct AliString {
  std::string text;
  ConditionSequence source;
};

struct UlrString {
  std::string text;
};

std::string SerializePrefix(const PrefixPrompt& prefix);

/// Serializes "r <subject> <predicate> <object>".
std::string SerializeRelation(const RelationConstraint& relation);

/// Builds the instruction text: prefix fields joined by ';', then one group
/// per relation, then one group per element (possibly empty when every
/// attribute is unknown). Groups are ';'-separated; tokens inside a group are
/// ' '-separated. With no relations and no elements the body is omitted.
AliString BuildAli(const PrefixPrompt& prefix,
                   std::span<const RelationConstraint> relations,
                   std::span<const Element> elements,
                   const IqeConfig& cfg = {});

/// Instruction made of a natural-language request only.
AliString BuildTextAli(std::string prompt, Domain domain);

/// Reads an instruction back into its condition sequence. Present geometric
/// attributes are reported Known since the wire form does not distinguish
/// noisy values; unknown ones are reported Unknown with value 0.
ConditionSequence ParseAli(std::string_view text, const IqeConfig& cfg = {});

/// Complete response: every element with label and four IQE integers.
/// Throws kIncompleteLayout if the layout is empty or any attribute is not
/// known.
UlrString BuildUlr(const Layout& layout, const IqeConfig& cfg = {});

/// Decodes one response group ("label v1 v2 v3 v4"). The label must belong
/// to `domain` in `registry`; the four integers must cover x, y, w and h
/// exactly once in any order.
Element ParseElementGroup(std::string_view group,
                          const CategoryRegistry& registry, Domain domain,
                          const IqeConfig& cfg = {});

struct PageSize {
  int w = kDefaultMaxSide;
  int h = kDefaultMaxSide;
};

/// Parses a complete response into a fully known layout on `page`. Box
/// extents are not checked against the page here.
Layout ParseUlr(std::string_view text, const CategoryRegistry& registry,
                Domain expected_domain, const IqeConfig& cfg = {},
                PageSize page = {});

inline constexpr char kPairSeparator = '#';

/// ali + "#" + ulr. Throws kSeparatorCollision if either side contains '#'.
std::string JoinTrainingPair(std::string_view ali, std::string_view ulr);

/// Splits at the first '#'. The index of that '#' is the loss-mask boundary.
std::pair<std::string, std::string> SplitTrainingPair(std::string_view joined);

/// One line of the training corpus consumed by the model harness.
struct TrainingRecord {
  std::string prompt;
  std::string completion;
  std::string task;
  std::string domain;

  friend bool operator==(const TrainingRecord&,
                         const TrainingRecord&) = default;
};

std::string ToJsonLine(const TrainingRecord& record);
TrainingRecord TrainingRecordFromJson(std::string_view line);

// Natural-language requests. Ids 1-3 select the domain's proprietary
// phrasings; ids 4-6 select the generic templates that mention the layout
// type, then the element count, then the column count.
inline constexpr int kNlTemplateCount = 6;
inline constexpr int kFirstGenericTemplate = 4;

std::string RenderNlPrompt(int template_id, Domain domain,
                           std::optional<int> object_number = std::nullopt,
                           std::optional<int> column_number = std::nullopt);

}  // namespace unilayout
