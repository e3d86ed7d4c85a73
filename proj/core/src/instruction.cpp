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
#include "unilayout/instruction.hpp"

#include <algorithm>
#include <array>

#include "json.hpp"
#include "text_util.hpp"
#include "unilayout/error.hpp"

namespace unilayout {

std::string_view RefineFlagName(RefineFlag flag) {
  return flag == RefineFlag::kRefine ? "refine" : "unrefine";
}

namespace {

constexpr std::array<std::pair<Predicate, std::string_view>, 8> kPredicates{{
    {Predicate::kTop, "top"},
    {Predicate::kBottom, "bottom"},
    {Predicate::kLeft, "left"},
    {Predicate::kRight, "right"},
    {Predicate::kOverlapped, "overlapped"},
    {Predicate::kSmaller, "smaller"},
    {Predicate::kLarger, "larger"},
    {Predicate::kEqual, "equal"},
}};

constexpr std::string_view kRelationTag = "r";

void CheckPrefix(const PrefixPrompt& prefix) {
  if (prefix.object_number.has_value() != prefix.column_number.has_value()) {
    throw Error(Errc::kInvalidPrefix,
                "object and column numbers must be given together");
  }
  if (prefix.object_number && *prefix.object_number < 1) {
    throw Error(Errc::kInvalidPrefix, "object number must be positive");
  }
  if (prefix.column_number && *prefix.column_number < 1) {
    throw Error(Errc::kInvalidPrefix, "column number must be positive");
  }
}

int ParseCount(std::string_view token, std::string_view what) {
  const auto value = ParseDecimal(token);
  if (!value) {
    throw Error(Errc::kInvalidPrefix,
                std::string(what) + " '" + std::string(token) +
                    "' is not an integer");
  }
  return *value;
}

bool LooksLikeRelation(std::string_view group) {
  const auto tokens = SplitTokens(group);
  return tokens.size() == 4 && tokens[0] == kRelationTag &&
         ParseDecimal(tokens[1]) && ParseDecimal(tokens[3]) &&
         ParsePredicate(tokens[2]);
}

// Splits a group into its label (leading non-numeric tokens) and the
// numeric tokens that follow. A word after a number is malformed.
std::pair<std::string, std::vector<int>> SplitGroup(std::string_view group) {
  std::string label;
  std::vector<int> numbers;
  for (std::string_view token : SplitTokens(group)) {
    if (IsDigits(token)) {
      const auto value = ParseDecimal(token);
      if (!value) {
        throw Error(Errc::kOutOfRange,
                    "token '" + std::string(token) + "' is too large");
      }
      numbers.push_back(*value);
    } else if (numbers.empty()) {
      if (!label.empty()) label += ' ';
      label += token;
    } else {
      throw Error(Errc::kParseError, "unexpected token '" +
                                         std::string(token) + "' in group '" +
                                         std::string(group) + "'");
    }
  }
  return {std::move(label), std::move(numbers)};
}

}  // namespace

std::string_view PredicateName(Predicate predicate) {
  for (const auto& [p, name] : kPredicates) {
    if (p == predicate) return name;
  }
  return "top";
}

std::optional<Predicate> ParsePredicate(std::string_view name) {
  for (const auto& [p, n] : kPredicates) {
    if (n == name) return p;
  }
  return std::nullopt;
}

std::string SerializePrefix(const PrefixPrompt& prefix) {
  CheckPrefix(prefix);
  std::string out(RefineFlagName(prefix.refine));
  out += ';';
  out += DomainName(prefix.domain);
  if (prefix.object_number) {
    out += ';' + std::to_string(*prefix.object_number);
    out += ';' + std::to_string(*prefix.column_number);
  }
  return out;
}

std::string SerializeRelation(const RelationConstraint& relation) {
  std::string out(kRelationTag);
  out += ' ' + std::to_string(relation.subject);
  out += ' ';
  out += PredicateName(relation.predicate);
  out += ' ' + std::to_string(relation.object);
  return out;
}

AliString BuildAli(const PrefixPrompt& prefix,
                   std::span<const RelationConstraint> relations,
                   std::span<const Element> elements, const IqeConfig& cfg) {
  AliString ali;
  ali.text = SerializePrefix(prefix);
  const int limit = prefix.object_number
                        ? *prefix.object_number
                        : static_cast<int>(elements.size());

  std::vector<std::string> groups;
  for (const auto& relation : relations) {
    if (relation.subject == relation.object || relation.subject < 0 ||
        relation.object < 0 || relation.subject >= limit ||
        relation.object >= limit) {
      throw Error(Errc::kInvalidArgument,
                  "relation '" + SerializeRelation(relation) +
                      "' refers to invalid element ordinals");
    }
    groups.push_back(SerializeRelation(relation));
  }
  for (const auto& element : elements) {
    groups.push_back(JoinStrings(EncodeElement(element, cfg), ' '));
  }
  if (!groups.empty()) {
    ali.text += ';';
    ali.text += JoinStrings(groups, ';');
  }
  ali.source.prefix = prefix;
  ali.source.relations.assign(relations.begin(), relations.end());
  ali.source.elements.assign(elements.begin(), elements.end());
  return ali;
}

AliString BuildTextAli(std::string prompt, Domain domain) {
  if (prompt.find(kPairSeparator) != std::string::npos) {
    throw Error(Errc::kSeparatorCollision, "prompt contains '#'");
  }
  AliString ali;
  ali.text = prompt;
  ali.source.prefix.domain = domain;
  ali.source.natural_language = std::move(prompt);
  return ali;
}

ConditionSequence ParseAli(std::string_view text, const IqeConfig& cfg) {
  const auto groups = SplitKeepEmpty(text, ';');
  if (groups.size() < 2) {
    throw Error(Errc::kInvalidPrefix, "instruction has no layout type");
  }
  ConditionSequence out;
  if (groups[0] == "refine") {
    out.prefix.refine = RefineFlag::kRefine;
  } else if (groups[0] == "unrefine") {
    out.prefix.refine = RefineFlag::kUnrefine;
  } else {
    throw Error(Errc::kInvalidPrefix,
                "bad refine flag '" + std::string(groups[0]) + "'");
  }
  const auto domain = ParseDomain(groups[1]);
  if (!domain) {
    throw Error(Errc::kInvalidPrefix,
                "unknown layout type '" + std::string(groups[1]) + "'");
  }
  out.prefix.domain = *domain;
  if (groups.size() == 2) return out;
  if (groups.size() == 3) {
    throw Error(Errc::kInvalidPrefix, "column number missing");
  }
  out.prefix.object_number = ParseCount(groups[2], "object number");
  out.prefix.column_number = ParseCount(groups[3], "column number");

  std::size_t i = 4;
  for (; i < groups.size() && LooksLikeRelation(groups[i]); ++i) {
    const auto tokens = SplitTokens(groups[i]);
    out.relations.push_back({*ParseDecimal(tokens[1]), *ParseDecimal(tokens[3]),
                             *ParsePredicate(tokens[2])});
  }
  for (; i < groups.size(); ++i) {
    auto [label, numbers] = SplitGroup(groups[i]);
    Element element;
    element.status = StatusMask::AllUnknown();
    element.box = {0, 0, 0, 0};
    if (!label.empty()) {
      element.label = std::move(label);
      element.status.set(Attribute::kClass, AttributeStatus::kKnown);
    }
    int last_kind = -1;
    for (int number : numbers) {
      const auto decoded = Decode(number, cfg);
      const int kind = static_cast<int>(decoded.kind);
      if (kind <= last_kind) {
        throw Error(Errc::kDuplicateAttribute,
                    "attribute out of order in group '" +
                        std::string(groups[i]) + "'");
      }
      last_kind = kind;
      element.SetValue(ToAttribute(decoded.kind), decoded.value);
      element.status.set(ToAttribute(decoded.kind), AttributeStatus::kKnown);
    }
    out.elements.push_back(std::move(element));
  }
  return out;
}

UlrString BuildUlr(const Layout& layout, const IqeConfig& cfg) {
  if (layout.elements.empty()) {
    throw Error(Errc::kIncompleteLayout, "layout has no elements");
  }
  std::vector<std::string> groups;
  groups.reserve(layout.elements.size());
  for (std::size_t i = 0; i < layout.elements.size(); ++i) {
    const auto& element = layout.elements[i];
    if (!element.status.AllOf(AttributeStatus::kKnown)) {
      throw Error(Errc::kIncompleteLayout,
                  "element " + std::to_string(i) + " is not fully known");
    }
    groups.push_back(JoinStrings(EncodeElement(element, cfg), ' '));
  }
  return {JoinStrings(groups, ';')};
}

Element ParseElementGroup(std::string_view group,
                          const CategoryRegistry& registry, Domain domain,
                          const IqeConfig& cfg) {
  auto [label, numbers] = SplitGroup(group);
  if (label.empty()) {
    throw Error(Errc::kMissingAttribute,
                "group '" + std::string(group) + "' has no label");
  }
  if (!registry.Contains(domain, label)) {
    throw Error(Errc::kUnknownLabel, "'" + label + "' is not a " +
                                         std::string(DomainName(domain)) +
                                         " label");
  }
  Element element;
  element.label = std::move(label);
  std::array<bool, 4> seen{};
  for (int number : numbers) {
    const auto decoded = Decode(number, cfg);
    auto& slot = seen[static_cast<std::size_t>(decoded.kind)];
    if (slot) {
      throw Error(Errc::kDuplicateAttribute,
                  std::string(1, GeomKindName(decoded.kind)) +
                      " given twice in group '" + std::string(group) + "'");
    }
    slot = true;
    element.SetValue(ToAttribute(decoded.kind), decoded.value);
  }
  for (std::size_t k = 0; k < seen.size(); ++k) {
    if (!seen[k]) {
      throw Error(Errc::kMissingAttribute,
                  std::string(1, GeomKindName(static_cast<GeomKind>(k))) +
                      " missing in group '" + std::string(group) + "'");
    }
  }
  return element;
}

Layout ParseUlr(std::string_view text, const CategoryRegistry& registry,
                Domain expected_domain, const IqeConfig& cfg, PageSize page) {
  if (Trim(text).empty()) {
    throw Error(Errc::kParseError, "empty response");
  }
  Layout layout;
  layout.domain = expected_domain;
  layout.page_w = page.w;
  layout.page_h = page.h;
  for (std::string_view group : SplitKeepEmpty(Trim(text), ';')) {
    layout.elements.push_back(
        ParseElementGroup(Trim(group), registry, expected_domain, cfg));
  }
  return layout;
}

std::string JoinTrainingPair(std::string_view ali, std::string_view ulr) {
  if (ali.find(kPairSeparator) != std::string_view::npos ||
      ulr.find(kPairSeparator) != std::string_view::npos) {
    throw Error(Errc::kSeparatorCollision,
                "instruction or response already contains '#'");
  }
  std::string joined(ali);
  joined += kPairSeparator;
  joined += ulr;
  return joined;
}

std::pair<std::string, std::string> SplitTrainingPair(std::string_view joined) {
  const auto pos = joined.find(kPairSeparator);
  if (pos == std::string_view::npos) {
    throw Error(Errc::kParseError, "training pair has no '#' separator");
  }
  return {std::string(joined.substr(0, pos)),
          std::string(joined.substr(pos + 1))};
}

std::string ToJsonLine(const TrainingRecord& record) {
  nlohmann::ordered_json j;
  j["prompt"] = record.prompt;
  j["completion"] = record.completion;
  j["task"] = record.task;
  j["domain"] = record.domain;
  return j.dump();
}

TrainingRecord TrainingRecordFromJson(std::string_view line) {
  try {
    const auto j = nlohmann::json::parse(line);
    return {j.at("prompt").get<std::string>(),
            j.at("completion").get<std::string>(),
            j.at("task").get<std::string>(), j.at("domain").get<std::string>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kParseError, std::string("training record: ") + e.what());
  }
}

namespace {

constexpr std::array<std::array<std::string_view, 3>, 4> kProprietaryPrompts{{
    {"I need an article layout with various presentation options.",
     "Create a clean and organized article layout for a scientific journal "
     "article.",
     "Design a professional article layout for a journal."},
    {"Design a highly flexible UI interface for a multi-functional "
     "application.",
     "Design an intuitive UI interface for a broad user base.",
     "Show me a dynamic and diverse UI interface design."},
    {"Please create a versatile magazine layout.",
     "I need an informative magazine cover.",
     "Design a flexible layout for a magazine publisher."},
    {"I want a slide with diverse presentation options.",
     "Design an eye-catching slide for a conference presentation.",
     "Please generate a slide for content targeted at a wide audience."},
}};

}  // namespace

std::string RenderNlPrompt(int template_id, Domain domain,
                           std::optional<int> object_number,
                           std::optional<int> column_number) {
  if (template_id < 1 || template_id > kNlTemplateCount) {
    throw Error(Errc::kUnknownTemplate,
                "template id " + std::to_string(template_id));
  }
  if (template_id < kFirstGenericTemplate) {
    return std::string(
        kProprietaryPrompts[static_cast<std::size_t>(domain)]
                           [static_cast<std::size_t>(template_id - 1)]);
  }
  std::string out = "Generate a layout of ";
  out += DomainName(domain);
  const int generic = template_id - kFirstGenericTemplate + 1;
  if (generic >= 2) {
    if (!object_number) {
      throw Error(Errc::kInvalidArgument, "template needs an object number");
    }
    out += ", with " + std::to_string(*object_number) + " elements";
  }
  if (generic == 3) {
    if (!column_number) {
      throw Error(Errc::kInvalidArgument, "template needs a column number");
    }
    out += " and " + std::to_string(*column_number) + " columns";
  }
  out += '.';
  return out;
}

}  // namespace unilayout
