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
#include "unilayout/layout.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>

#include "unilayout/error.hpp"

namespace unilayout {

std::string_view DomainName(Domain domain) {
  switch (domain) {
    case Domain::kArticle: return "article";
    case Domain::kAppUi: return "App UI";
    case Domain::kMagazine: return "magazine";
    case Domain::kSlide: return "slide";
  }
  return "article";
}

std::string_view DomainSlug(Domain domain) {
  switch (domain) {
    case Domain::kArticle: return "article";
    case Domain::kAppUi: return "appui";
    case Domain::kMagazine: return "magazine";
    case Domain::kSlide: return "slide";
  }
  return "article";
}

std::optional<Domain> ParseDomain(std::string_view text) {
  const std::string lowered = ToLowerAscii(text);
  for (Domain d : kAllDomains) {
    if (lowered == ToLowerAscii(DomainName(d)) || lowered == DomainSlug(d)) {
      return d;
    }
  }
  if (lowered == "app-ui" || lowered == "app_ui") return Domain::kAppUi;
  return std::nullopt;
}

std::string ToLowerAscii(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

StatusMask StatusMask::AllUnknown() {
  StatusMask mask;
  mask.statuses_.fill(AttributeStatus::kUnknown);
  return mask;
}

void StatusMask::set(Attribute attribute, AttributeStatus status) {
  if (attribute == Attribute::kClass && status == AttributeStatus::kNoisy) {
    throw Error(Errc::kInvalidArgument,
                "the class attribute cannot be marked noisy");
  }
  statuses_[static_cast<std::size_t>(attribute)] = status;
}

int StatusMask::Count(AttributeStatus status) const {
  return static_cast<int>(
      std::count(statuses_.begin(), statuses_.end(), status));
}

int Element::Value(Attribute attribute) const {
  switch (attribute) {
    case Attribute::kX: return box.x;
    case Attribute::kY: return box.y;
    case Attribute::kW: return box.w;
    case Attribute::kH: return box.h;
    case Attribute::kClass: break;
  }
  throw Error(Errc::kInvalidArgument, "class attribute has no integer value");
}

void Element::SetValue(Attribute attribute, int value) {
  switch (attribute) {
    case Attribute::kX: box.x = value; return;
    case Attribute::kY: box.y = value; return;
    case Attribute::kW: box.w = value; return;
    case Attribute::kH: box.h = value; return;
    case Attribute::kClass: break;
  }
  throw Error(Errc::kInvalidArgument, "class attribute has no integer value");
}

namespace {

void AddAll(CategoryRegistry& registry, Domain domain,
            std::initializer_list<std::string_view> labels) {
  for (auto label : labels) registry.Add(domain, label);
}

}  // namespace

CategoryRegistry CategoryRegistry::Defaults() {
  CategoryRegistry registry;
  AddAll(registry, Domain::kArticle,
         {"text", "title", "list", "table", "figure"});
  AddAll(registry, Domain::kAppUi,
         {"text", "image", "icon", "list item", "text button", "toolbar",
          "web view", "input", "card", "advertisement", "background image",
          "drawer", "radio button", "checkbox", "multi-tab", "pager indicator",
          "modal", "on/off switch", "slider", "map view", "button bar", "video",
          "bottom navigation", "number stepper", "date picker"});
  AddAll(registry, Domain::kMagazine,
         {"text", "image", "headline", "text-over-image",
          "headline-over-image"});
  AddAll(registry, Domain::kSlide,
         {"title", "text", "heading", "enumeration", "image", "diagram",
          "table", "chart", "logo", "footnote", "date", "slide number",
          "caption", "legend", "code", "url", "equation", "drawing", "map",
          "comment", "subtitle", "structured text", "author", "affiliation"});
  return registry;
}

void CategoryRegistry::Add(Domain domain, std::string_view label) {
  std::string lowered = ToLowerAscii(label);
  auto& labels = labels_[static_cast<std::size_t>(domain)];
  if (std::find(labels.begin(), labels.end(), lowered) == labels.end()) {
    labels.push_back(std::move(lowered));
  }
}

bool CategoryRegistry::Contains(Domain domain, std::string_view label) const {
  const auto& labels = Labels(domain);
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

const std::vector<std::string>& CategoryRegistry::Labels(Domain domain) const {
  return labels_[static_cast<std::size_t>(domain)];
}

std::vector<std::string> CategoryRegistry::Merged() const {
  std::vector<std::string> merged;
  for (const auto& labels : labels_) {
    for (const auto& label : labels) {
      if (std::find(merged.begin(), merged.end(), label) == merged.end()) {
        merged.push_back(label);
      }
    }
  }
  return merged;
}

bool CategoryRegistry::Empty() const {
  return std::all_of(labels_.begin(), labels_.end(),
                     [](const auto& labels) { return labels.empty(); });
}

int Quantize(double value, int axis_length) {
  if (!std::isfinite(value)) {
    throw Error(Errc::kOutOfRange, "non-finite coordinate");
  }
  if (value < -0.5) {
    throw Error(Errc::kNegativeValue,
                "coordinate " + std::to_string(value) + " is negative");
  }
  const double rounded = std::floor(value + 0.5);
  return static_cast<int>(std::clamp(rounded, 0.0, double(axis_length)));
}

namespace {

// Pixel tolerance for boxes that spill past the page edge after rounding.
constexpr double kPageSlack = 1.0;

BoundingBox ScaleBox(const RawElement& e, double scale, int page_w, int page_h,
                     const std::string& locus) {
  const double x = e.x * scale;
  const double y = e.y * scale;
  const double right = (e.x + e.w) * scale;
  const double bottom = (e.y + e.h) * scale;
  if (right > page_w + kPageSlack || bottom > page_h + kPageSlack) {
    throw Error(Errc::kOutOfPage, locus + ": element '" + e.label +
                                      "' extends beyond the page");
  }
  BoundingBox box;
  box.x = std::min(Quantize(x, page_w), page_w - 1);
  box.y = std::min(Quantize(y, page_h), page_h - 1);
  box.w = std::max(1, Quantize(e.w * scale, page_w));
  box.h = std::max(1, Quantize(e.h * scale, page_h));
  box.w = std::min(box.w, page_w - box.x);
  box.h = std::min(box.h, page_h - box.y);
  return box;
}

}  // namespace

Layout NormalizeLayout(const RawLayout& raw, int target_long) {
  if (!(raw.page_w > 0) || !(raw.page_h > 0)) {
    throw Error(Errc::kEmptyPage, raw.id + ": page side must be positive");
  }
  if (target_long <= 0) {
    throw Error(Errc::kInvalidArgument, "target side must be positive");
  }
  const double scale = target_long / std::max(raw.page_w, raw.page_h);
  Layout layout;
  layout.id = raw.id;
  layout.domain = raw.domain;
  layout.page_w =
      std::max(1, Quantize(raw.page_w * scale, target_long));
  layout.page_h =
      std::max(1, Quantize(raw.page_h * scale, target_long));
  layout.elements.reserve(raw.elements.size());
  for (const auto& e : raw.elements) {
    Element element;
    element.label = e.label;
    element.box = ScaleBox(e, scale, layout.page_w, layout.page_h, raw.id);
    layout.elements.push_back(std::move(element));
  }
  layout.column_count =
      raw.column_count ? *raw.column_count : InferColumnCount(layout);
  return layout;
}

Layout NormalizeLayout(const Layout& layout, int target_long) {
  if (std::max(layout.page_w, layout.page_h) == target_long &&
      std::min(layout.page_w, layout.page_h) > 0) {
    return layout;
  }
  RawLayout raw;
  raw.id = layout.id;
  raw.domain = layout.domain;
  raw.page_w = layout.page_w;
  raw.page_h = layout.page_h;
  raw.column_count = layout.column_count;
  for (const auto& e : layout.elements) {
    raw.elements.push_back({e.label, double(e.box.x), double(e.box.y),
                            double(e.box.w), double(e.box.h)});
  }
  Layout out = NormalizeLayout(raw, target_long);
  for (std::size_t i = 0; i < out.elements.size(); ++i) {
    out.elements[i].status = layout.elements[i].status;
  }
  return out;
}

Layout FitToInterval(Layout layout, int max_side) {
  const int limit = max_side - 1;
  for (auto& e : layout.elements) {
    e.box.x = std::min(e.box.x, limit);
    e.box.y = std::min(e.box.y, limit);
    e.box.w = std::clamp(e.box.w, 1, limit);
    e.box.h = std::clamp(e.box.h, 1, limit);
  }
  return layout;
}

std::vector<double> KMeans1dCosts(std::vector<double> values, int max_k) {
  std::sort(values.begin(), values.end());
  const int n = static_cast<int>(values.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> out(static_cast<std::size_t>(std::max(max_k, 0)), inf);
  if (n == 0 || max_k <= 0) return out;

  std::vector<double> prefix(n + 1, 0.0);
  std::vector<double> prefix_sq(n + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    prefix[i + 1] = prefix[i] + values[i];
    prefix_sq[i + 1] = prefix_sq[i] + values[i] * values[i];
  }
  // Sum of squared deviations of the sorted run [i, j).
  auto run_cost = [&](int i, int j) {
    const double count = j - i;
    const double sum = prefix[j] - prefix[i];
    return std::max(0.0, (prefix_sq[j] - prefix_sq[i]) - sum * sum / count);
  };

  // best[k][j]: optimal cost of the first j values split into k runs.
  std::vector<std::vector<double>> best(
      max_k + 1, std::vector<double>(n + 1, inf));
  best[0][0] = 0.0;
  for (int k = 1; k <= max_k; ++k) {
    for (int j = k; j <= n; ++j) {
      for (int i = k - 1; i < j; ++i) {
        if (best[k - 1][i] == inf) continue;
        best[k][j] = std::min(best[k][j], best[k - 1][i] + run_cost(i, j));
      }
    }
    out[k - 1] = best[k][n];
  }
  return out;
}

namespace {

constexpr int kMaxColumns = 4;
constexpr double kMinImprovement = 0.10;
// Normalized variance of a uniform column a quarter of the page wide; spreads
// below this are treated as a single column.
constexpr double kSingleColumnVariance = 0.25 * 0.25 / 12.0;

}  // namespace

int InferColumnCount(const Layout& layout) {
  if (layout.domain != Domain::kArticle || layout.page_w <= 0) return 1;
  std::vector<double> centers;
  for (const auto& e : layout.elements) {
    if (e.label == "text") {
      centers.push_back((e.box.x + e.box.w / 2.0) / layout.page_w);
    }
  }
  if (centers.size() < 2) return 1;
  const int max_k = std::min<int>(kMaxColumns, centers.size());
  const auto costs = KMeans1dCosts(centers, max_k);
  const double n = static_cast<double>(centers.size());

  int k = 1;
  while (k < max_k) {
    const double current = costs[k - 1] / n;
    const double next = costs[k] / n;
    if (current < kSingleColumnVariance) break;
    if (current - next < kMinImprovement * current) break;
    ++k;
  }
  return k;
}

void ValidateLayout(const Layout& layout, const CategoryRegistry* registry) {
  auto fail = [&](const std::string& what) {
    throw Error(Errc::kInvalidLayout,
                (layout.id.empty() ? std::string("layout") : layout.id) +
                    ": " + what);
  };
  if (layout.page_w <= 0 || layout.page_h <= 0) fail("non-positive page side");
  if (layout.elements.empty()) fail("layout has no elements");
  if (layout.column_count < 1) fail("column count must be positive");
  for (std::size_t i = 0; i < layout.elements.size(); ++i) {
    const auto& e = layout.elements[i];
    const std::string where = "element " + std::to_string(i);
    if (e.label.empty()) fail(where + " has an empty label");
    if (e.label != ToLowerAscii(e.label)) fail(where + " label not lowercase");
    if (e.box.x < 0 || e.box.y < 0) fail(where + " has a negative origin");
    if (e.box.w < 1 || e.box.h < 1) fail(where + " has zero area");
    if (e.box.right() > layout.page_w || e.box.bottom() > layout.page_h) {
      fail(where + " extends beyond the page");
    }
    if (registry && !registry->Contains(layout.domain, e.label)) {
      fail(where + " label '" + e.label + "' is not registered for " +
           std::string(DomainName(layout.domain)));
    }
  }
}

}  // namespace unilayout
