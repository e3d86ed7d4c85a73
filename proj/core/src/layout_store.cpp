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
#include "unilayout/layout_store.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "unilayout/error.hpp"

namespace unilayout {

using nlohmann::json;
using nlohmann::ordered_json;

std::string LayoutToJson(const Layout& layout) {
  ordered_json j;
  j["id"] = layout.id;
  j["domain"] = DomainName(layout.domain);
  j["page"] = {{"w", layout.page_w}, {"h", layout.page_h}};
  j["columns"] = layout.column_count;
  auto elements = ordered_json::array();
  for (const auto& e : layout.elements) {
    ordered_json element;
    element["label"] = e.label;
    element["bbox"] = {e.box.x, e.box.y, e.box.w, e.box.h};
    elements.push_back(std::move(element));
  }
  j["elements"] = std::move(elements);
  return j.dump();
}

Layout LayoutFromJson(std::string_view line) {
  try {
    const auto j = json::parse(line);
    Layout layout;
    layout.id = j.value("id", std::string());
    const auto domain_name = j.at("domain").get<std::string>();
    const auto domain = ParseDomain(domain_name);
    if (!domain) {
      throw Error(Errc::kParseError, "unknown domain '" + domain_name + "'");
    }
    layout.domain = *domain;
    layout.page_w = j.at("page").at("w").get<int>();
    layout.page_h = j.at("page").at("h").get<int>();
    layout.column_count = j.value("columns", 1);
    for (const auto& e : j.at("elements")) {
      Element element;
      element.label = e.at("label").get<std::string>();
      const auto& bbox = e.at("bbox");
      if (!bbox.is_array() || bbox.size() != 4) {
        throw Error(Errc::kParseError, "bbox must hold four integers");
      }
      element.box = {bbox[0].get<int>(), bbox[1].get<int>(),
                     bbox[2].get<int>(), bbox[3].get<int>()};
      layout.elements.push_back(std::move(element));
    }
    return layout;
  } catch (const json::exception& e) {
    throw Error(Errc::kParseError, std::string("layout record: ") + e.what());
  }
}

void WriteLayoutStore(const std::filesystem::path& path,
                      std::span<const Layout> layouts) {
  std::string text;
  for (const auto& layout : layouts) {
    text += LayoutToJson(layout);
    text += '\n';
  }
  WriteTextFile(path, text);
}

std::vector<Layout> ReadLayoutStore(const std::filesystem::path& path) {
  std::vector<Layout> layouts;
  std::size_t index = 0;
  for (const auto& line : ReadLines(path)) {
    try {
      layouts.push_back(LayoutFromJson(line));
    } catch (const Error& e) {
      throw Error(Errc::kParseError, path.string() + ":" +
                                         std::to_string(index + 1) + ": " +
                                         e.what());
    }
    ++index;
  }
  return layouts;
}

std::string RegistryToJson(const CategoryRegistry& registry) {
  ordered_json j;
  for (Domain d : kAllDomains) j[std::string(DomainName(d))] = registry.Labels(d);
  return j.dump(2);
}

CategoryRegistry RegistryFromJson(std::string_view text) {
  try {
    const auto j = json::parse(text);
    CategoryRegistry registry;
    for (const auto& [key, labels] : j.items()) {
      const auto domain = ParseDomain(key);
      if (!domain) throw Error(Errc::kParseError, "unknown domain " + key);
      for (const auto& label : labels) {
        registry.Add(*domain, label.get<std::string>());
      }
    }
    return registry;
  } catch (const json::exception& e) {
    throw Error(Errc::kParseError, std::string("registry: ") + e.what());
  }
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIo, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(Errc::kIo, "write failed for " + path.string());
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> ReadLines(const std::filesystem::path& path) {
  std::istringstream in(ReadTextFile(path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace unilayout
