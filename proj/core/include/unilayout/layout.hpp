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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace unilayout {

/// Page side length every layout is normalized to; also the IQE interval width.
inline constexpr int kDefaultMaxSide = 1024;

enum class Domain { kArticle, kAppUi, kMagazine, kSlide };

inline constexpr std::array<Domain, 4> kAllDomains = {
    Domain::kArticle, Domain::kAppUi, Domain::kMagazine, Domain::kSlide};

/// Prompt-facing name: "article", "App UI", "magazine" or "slide".
std::string_view DomainName(Domain domain);

/// Identifier-safe name used for flags and file names ("appui" for App UI).
std::string_view DomainSlug(Domain domain);

/// Accepts either the prompt-facing name or the slug, case-insensitively.
std::optional<Domain> ParseDomain(std::string_view text);

struct BoundingBox {
  int x = 0;
  int y = 0;
  int w = 1;
  int h = 1;

  int right() const { return x + w; }
  int bottom() const { return y + h; }
  std::int64_t area() const { return static_cast<std::int64_t>(w) * h; }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

enum class AttributeStatus { kKnown, kUnknown, kNoisy };

/// The five per-element attributes, in serialization order.
enum class Attribute { kClass = 0, kX = 1, kY = 2, kW = 3, kH = 4 };

inline constexpr std::array<Attribute, 4> kGeometricAttributes = {
    Attribute::kX, Attribute::kY, Attribute::kW, Attribute::kH};

// Per-attribute condition status of one element. Noisy is rejected for the
// class attribute.
class StatusMask {
 public:
  StatusMask() { statuses_.fill(AttributeStatus::kKnown); }

  static StatusMask AllKnown() { return StatusMask(); }
  static StatusMask AllUnknown();

  AttributeStatus get(Attribute attribute) const {
    return statuses_[static_cast<std::size_t>(attribute)];
  }
  void set(Attribute attribute, AttributeStatus status);

  int Count(AttributeStatus status) const;
  bool AllOf(AttributeStatus status) const { return Count(status) == 5; }

  friend bool operator==(const StatusMask&, const StatusMask&) = default;

 private:
  std::array<AttributeStatus, 5> statuses_;
};

struct Element {
  std::string label;
  BoundingBox box;
  StatusMask status;

  int Value(Attribute attribute) const;
  void SetValue(Attribute attribute, int value);

  friend bool operator==(const Element&, const Element&) = default;
};

struct Layout {
  std::string id;
  Domain domain = Domain::kArticle;
  int page_w = kDefaultMaxSide;
  int page_h = kDefaultMaxSide;
  std::vector<Element> elements;
  int column_count = 1;

  std::size_t size() const { return elements.size(); }

  friend bool operator==(const Layout&, const Layout&) = default;
};

/// Annotation-space element before normalization; coordinates in source pixels.
struct RawElement {
  std::string label;
  double x = 0;
  double y = 0;
  double w = 0;
  double h = 0;
};

struct RawLayout {
  std::string id;
  Domain domain = Domain::kArticle;
  double page_w = 0;
  double page_h = 0;
  std::vector<RawElement> elements;
  std::optional<int> column_count;
};

std::string ToLowerAscii(std::string_view text);

// Per-domain ordered label sets plus their merged, deduplicated union.
// Labels are stored lowercased; insertion order is preserved.
class CategoryRegistry {
 public:
  /// Label sets of the public corpora each domain is usually trained on.
  static CategoryRegistry Defaults();

  /// Lowercases `label` and appends it to the domain if not already present.
  void Add(Domain domain, std::string_view label);

  bool Contains(Domain domain, std::string_view label) const;
  const std::vector<std::string>& Labels(Domain domain) const;
  std::vector<std::string> Merged() const;
  bool Empty() const;

  friend bool operator==(const CategoryRegistry&,
                         const CategoryRegistry&) = default;

 private:
  std::array<std::vector<std::string>, 4> labels_;
};

/// Rounds half-up to an integer pixel and clamps to [0, axis_length].
/// Throws kNegativeValue below -0.5 and kOutOfRange for non-finite input.
int Quantize(double value, int axis_length);

/// Scales the page so its longer side equals `target_long`, scaling every box
/// by the same factor. Degenerate extents are bumped to one pixel; boxes that
/// overshoot the page by more than one pixel after scaling raise kOutOfPage.
Layout NormalizeLayout(const RawLayout& raw, int target_long = kDefaultMaxSide);
Layout NormalizeLayout(const Layout& layout, int target_long = kDefaultMaxSide);

/// Shrinks values equal to `max_side` to `max_side - 1` so every coordinate
/// and extent fits strictly inside its IQE interval.
Layout FitToInterval(Layout layout, int max_side = kDefaultMaxSide);

/// Column count from 1-D clustering of text x-centers; 1 outside the article
/// domain or when fewer than two text elements exist.
int InferColumnCount(const Layout& layout);

/// Optimal 1-D k-means within-cluster sum of squares for each k in
/// [1, max_k] (entry k-1), computed exactly by dynamic programming.
std::vector<double> KMeans1dCosts(std::vector<double> values, int max_k);

/// Throws kInvalidLayout on the first broken invariant. With a registry,
/// labels must also belong to the layout's domain.
void ValidateLayout(const Layout& layout,
                    const CategoryRegistry* registry = nullptr);

}  // namespace unilayout
