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
#ifndef UNILAYOUT_TOOLS_SVG_HPP_
#define UNILAYOUT_TOOLS_SVG_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "unilayout/layout.hpp"

namespace unilayout::cli {

inline constexpr std::string_view kFallbackColor = "#7f7f7f";

/// "#rrggbb" for a hue derived from the label text.
std::string LabelColor(std::string_view label);

/// Page rectangle, then one rectangle and caption per element. Labels not
/// in `registry` (when given) use kFallbackColor and are appended to
/// `unknown_labels`.
std::string RenderSvg(const Layout& layout, const CategoryRegistry* registry,
                      std::vector<std::string>* unknown_labels = nullptr);

}  // namespace unilayout::cli

#endif  // UNILAYOUT_TOOLS_SVG_HPP_
