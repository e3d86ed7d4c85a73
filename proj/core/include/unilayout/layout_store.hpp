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

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unilayout/layout.hpp"

namespace unilayout {

// Canonical layout store: JSON Lines, one layout per line,
//   {"id":str,"domain":str,"page":{"w":int,"h":int},"columns":int,
//    "elements":[{"label":str,"bbox":[x,y,w,h]}]}

std::string LayoutToJson(const Layout& layout);
Layout LayoutFromJson(std::string_view line);

void WriteLayoutStore(const std::filesystem::path& path,
                      std::span<const Layout> layouts);
std::vector<Layout> ReadLayoutStore(const std::filesystem::path& path);

/// {"article":[...],"App UI":[...],"magazine":[...],"slide":[...]}
std::string RegistryToJson(const CategoryRegistry& registry);
CategoryRegistry RegistryFromJson(std::string_view text);

void WriteTextFile(const std::filesystem::path& path, std::string_view text);
std::string ReadTextFile(const std::filesystem::path& path);

/// Reads non-blank lines.
std::vector<std::string> ReadLines(const std::filesystem::path& path);

}  // namespace unilayout
