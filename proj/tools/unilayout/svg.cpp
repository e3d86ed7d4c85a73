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
#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>

namespace unilayout::cli {
namespace {

std::string EscapeXml(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// HSL with fixed saturation 0.65 and lightness 0.5, integer arithmetic only.
std::string HueToHex(int hue) {
  const int c = 650;  // chroma x1000
  const int h = hue % 360;
  const int rem = (h * 1000 / 60) % 2000;
  const int x = c * (1000 - std::abs(rem - 1000)) / 1000;
  const int m = 500 - c / 2;
  int r = 0, g = 0, b = 0;
  switch (h / 60) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  auto channel = [m](int v) { return std::clamp(((v + m) * 255 + 500) / 1000, 0, 255); };
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", channel(r), channel(g), channel(b));
  return buf;
}

}  // namespace

std::string LabelColor(std::string_view label) {
  std::uint32_t hash = 2166136261u;
  for (unsigned char ch : label) {
    hash ^= ch;
    hash *= 16777619u;
  }
  return HueToHex(static_cast<int>(hash % 360));
}

std::string RenderSvg(const Layout& layout, const CategoryRegistry* registry,
                      std::vector<std::string>* unknown_labels) {
  const std::string w = std::to_string(layout.page_w);
  const std::string h = std::to_string(layout.page_h);
  const int font = std::max(10, std::max(layout.page_w, layout.page_h) / 64);
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + w + "\" height=\"" +
         h + "\" viewBox=\"0 0 " + w + " " + h + "\">\n";
  svg += "  <rect x=\"0\" y=\"0\" width=\"" + w + "\" height=\"" + h +
         "\" fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\"2\"/>\n";
  for (const auto& e : layout.elements) {
    std::string color;
    if (registry && !registry->Contains(layout.domain, e.label)) {
      color = kFallbackColor;
      if (unknown_labels) unknown_labels->push_back(e.label);
    } else {
      color = LabelColor(e.label);
    }
    const auto& b = e.box;
    svg += "  <rect x=\"" + std::to_string(b.x) + "\" y=\"" + std::to_string(b.y) +
           "\" width=\"" + std::to_string(b.w) + "\" height=\"" + std::to_string(b.h) +
           "\" fill=\"" + color + "\" fill-opacity=\"0.4\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    svg += "  <text x=\"" + std::to_string(b.x + 2) + "\" y=\"" +
           std::to_string(b.y + font) + "\" font-family=\"sans-serif\" font-size=\"" +
           std::to_string(font) + "\" fill=\"#000000\">" + EscapeXml(e.label) +
           "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace unilayout::cli
