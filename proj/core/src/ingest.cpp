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
#include "unilayout/ingest.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "json.hpp"
#include "unilayout/error.hpp"
#include "unilayout/layout_store.hpp"

namespace unilayout {

using nlohmann::json;
namespace fs = std::filesystem;

DatasetSpec DatasetSpec::Preset(std::string_view name) {
  const std::string lowered = ToLowerAscii(name);
  DatasetSpec spec;
  spec.name = lowered;
  if (lowered == "publaynet") {
    spec.domain = Domain::kArticle;
    spec.format = AnnotationFormat::kCocoJson;
    spec.max_elements = 25;
    spec.official_splits = true;
  } else if (lowered == "rico") {
    spec.domain = Domain::kAppUi;
    spec.max_elements = 40;
  } else if (lowered == "magazine") {
    spec.domain = Domain::kMagazine;
    spec.max_elements = 24;
    spec.drop_labels = {"background"};
  } else if (lowered == "slide" || lowered == "spase" || lowered == "wise") {
    spec.name = "slide";
    spec.domain = Domain::kSlide;
  } else {
    throw Error(Errc::kInvalidArgument,
                "unknown dataset preset '" + std::string(name) + "'");
  }
  return spec;
}

namespace {

std::vector<fs::path> CollectFiles(std::span<const fs::path> paths) {
  std::vector<fs::path> files;
  for (const auto& path : paths) {
    std::error_code ec;
    if (fs::is_directory(path, ec)) {
      for (const auto& entry : fs::directory_iterator(path)) {
        const auto ext = entry.path().extension();
        if (entry.is_regular_file() && (ext == ".json" || ext == ".jsonl")) {
          files.push_back(entry.path());
        }
      }
    } else if (fs::is_regular_file(path, ec)) {
      files.push_back(path);
    } else {
      throw Error(Errc::kIo, "input path does not exist: " + path.string());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

json ParseJsonFile(const fs::path& file) {
  try {
    return json::parse(ReadTextFile(file));
  } catch (const json::exception& e) {
    throw Error(Errc::kParseError, file.string() + ": " + e.what());
  }
}

std::vector<RawLayout> ReadCoco(const fs::path& file, Domain domain) {
  const json doc = ParseJsonFile(file);
  std::vector<RawLayout> out;
  std::string locus = file.string();
  try {
    std::map<std::int64_t, std::string> categories;
    for (const auto& c : doc.at("categories")) {
      categories[c.at("id").get<std::int64_t>()] = c.at("name").get<std::string>();
    }
    std::map<std::int64_t, std::size_t> image_index;
    for (const auto& image : doc.at("images")) {
      const auto id = image.at("id").get<std::int64_t>();
      locus = file.string() + "#image " + std::to_string(id);
      RawLayout raw;
      raw.id = file.stem().string() + "#" + std::to_string(id);
      raw.domain = domain;
      raw.page_w = image.at("width").get<double>();
      raw.page_h = image.at("height").get<double>();
      image_index[id] = out.size();
      out.push_back(std::move(raw));
    }
    std::size_t record = 0;
    for (const auto& ann : doc.at("annotations")) {
      locus = file.string() + "#annotation " + std::to_string(record++);
      const auto image = image_index.find(ann.at("image_id").get<std::int64_t>());
      if (image == image_index.end()) {
        throw Error(Errc::kParseError, locus + ": unknown image_id");
      }
      const auto category =
          categories.find(ann.at("category_id").get<std::int64_t>());
      if (category == categories.end()) {
        throw Error(Errc::kParseError, locus + ": unknown category_id");
      }
      const auto& bbox = ann.at("bbox");
      if (bbox.size() != 4) {
        throw Error(Errc::kParseError, locus + ": bbox must have 4 values");
      }
      out[image->second].elements.push_back(
          {category->second, bbox[0].get<double>(), bbox[1].get<double>(),
           bbox[2].get<double>(), bbox[3].get<double>()});
    }
  } catch (const json::exception& e) {
    throw Error(Errc::kParseError, locus + ": " + e.what());
  }
  return out;
}

RawLayout ReadGenericRecord(const json& j, Domain domain,
                            const std::string& default_id,
                            const std::string& locus) {
  try {
    RawLayout raw;
    raw.id = j.value("id", default_id);
    raw.domain = domain;
    if (j.contains("domain")) {
      const auto declared = ParseDomain(j.at("domain").get<std::string>());
      if (!declared || *declared != domain) {
        throw Error(Errc::kParseError,
                    locus + ": record domain does not match the dataset");
      }
    }
    raw.page_w = j.at("page").at("w").get<double>();
    raw.page_h = j.at("page").at("h").get<double>();
    if (j.contains("columns")) raw.column_count = j.at("columns").get<int>();
    for (const auto& e : j.at("elements")) {
      const auto& bbox = e.at("bbox");
      if (bbox.size() != 4) {
        throw Error(Errc::kParseError, locus + ": bbox must have 4 values");
      }
      raw.elements.push_back({e.at("label").get<std::string>(),
                              bbox[0].get<double>(), bbox[1].get<double>(),
                              bbox[2].get<double>(), bbox[3].get<double>()});
    }
    return raw;
  } catch (const json::exception& e) {
    throw Error(Errc::kParseError, locus + ": " + e.what());
  }
}

std::vector<RawLayout> ReadGeneric(const fs::path& file, Domain domain) {
  std::vector<RawLayout> out;
  const std::string stem = file.stem().string();
  auto add = [&](const json& j, std::size_t index) {
    const std::string id = stem + "#" + std::to_string(index);
    out.push_back(
        ReadGenericRecord(j, domain, id, file.string() + "#" + std::to_string(index)));
  };
  if (file.extension() == ".jsonl") {
    std::size_t index = 0;
    for (const auto& line : ReadLines(file)) {
      json j;
      try {
        j = json::parse(line);
      } catch (const json::exception& e) {
        throw Error(Errc::kParseError,
                    file.string() + "#" + std::to_string(index) + ": " + e.what());
      }
      add(j, index++);
    }
    return out;
  }
  const json doc = ParseJsonFile(file);
  if (doc.is_array()) {
    for (std::size_t i = 0; i < doc.size(); ++i) add(doc[i], i);
  } else {
    add(doc, 0);
  }
  return out;
}

void Process(RawLayout raw, const DatasetSpec& spec, IngestResult& result) {
  std::size_t removed = 0;
  std::vector<RawElement> kept;
  for (auto& e : raw.elements) {
    e.label = ToLowerAscii(e.label);
    if (std::find(spec.drop_labels.begin(), spec.drop_labels.end(), e.label) !=
        spec.drop_labels.end()) {
      ++removed;
      continue;
    }
    kept.push_back(std::move(e));
  }
  raw.elements = std::move(kept);
  if (raw.elements.empty()) {
    result.dropped.push_back({raw.id, "no elements"});
    return;
  }
  if (spec.max_elements &&
      static_cast<int>(raw.elements.size()) > *spec.max_elements) {
    result.dropped.push_back(
        {raw.id, std::to_string(raw.elements.size()) + " elements exceeds " +
                     std::to_string(*spec.max_elements)});
    return;
  }
  try {
    result.layouts.push_back(FitToInterval(NormalizeLayout(raw)));
  } catch (const Error& e) {
    if (e.code() != Errc::kOutOfPage && e.code() != Errc::kEmptyPage &&
        e.code() != Errc::kNegativeValue && e.code() != Errc::kOutOfRange) {
      throw;
    }
    result.dropped.push_back({raw.id, e.what()});
    return;
  }
  if (removed > 0) {
    result.trimmed.push_back(
        {raw.id, "removed " + std::to_string(removed) + " dropped-label elements"});
  }
}

}  // namespace

IngestResult Ingest(std::span<const fs::path> paths, const DatasetSpec& spec) {
  IngestResult result;
  for (const auto& file : CollectFiles(paths)) {
    auto raws = spec.format == AnnotationFormat::kCocoJson
                    ? ReadCoco(file, spec.domain)
                    : ReadGeneric(file, spec.domain);
    for (auto& raw : raws) Process(std::move(raw), spec, result);
  }
  return result;
}

IngestResult Ingest(const fs::path& path, const DatasetSpec& spec) {
  return Ingest(std::span<const fs::path>(&path, 1), spec);
}

CategoryRegistry UnifyLabels(Domain domain,
                             std::span<const std::string> raw_labels) {
  CategoryRegistry registry;
  for (const auto& label : raw_labels) registry.Add(domain, label);
  return registry;
}

CategoryRegistry RegistryOf(std::span<const Layout> layouts) {
  CategoryRegistry registry;
  for (const auto& layout : layouts) {
    for (const auto& e : layout.elements) registry.Add(layout.domain, e.label);
  }
  return registry;
}

SplitResult Split(std::vector<Layout> layouts, std::pair<int, int> ratio,
                  std::uint64_t seed) {
  const auto [train_parts, test_parts] = ratio;
  if (train_parts < 0 || test_parts < 0 || train_parts + test_parts <= 0) {
    throw Error(Errc::kInvalidArgument, "split ratio must be positive");
  }
  if (layouts.size() < 10) {
    throw Error(Errc::kTooFewSamples,
                "need at least 10 layouts to split, got " +
                    std::to_string(layouts.size()));
  }
  std::mt19937_64 rng(seed);
  std::shuffle(layouts.begin(), layouts.end(), rng);
  const std::size_t total = train_parts + test_parts;
  const std::size_t n = layouts.size();
  const std::size_t test_count = (2 * n * test_parts + total) / (2 * total);

  SplitResult result;
  result.seed = seed;
  const auto cut = layouts.begin() + static_cast<std::ptrdiff_t>(n - test_count);
  result.train.assign(std::make_move_iterator(layouts.begin()),
                      std::make_move_iterator(cut));
  result.test.assign(std::make_move_iterator(cut),
                     std::make_move_iterator(layouts.end()));
  return result;
}

namespace {

bool StartsWith(const std::string& text, std::string_view prefix) {
  return text.rfind(prefix, 0) == 0;
}

void Append(IngestResult& into, IngestResult&& from) {
  into.dropped.insert(into.dropped.end(), from.dropped.begin(), from.dropped.end());
  into.trimmed.insert(into.trimmed.end(), from.trimmed.begin(), from.trimmed.end());
}

}  // namespace

IngestedCorpus IngestAndSplit(std::span<const fs::path> paths,
                              const DatasetSpec& spec, std::uint64_t seed) {
  IngestedCorpus corpus;
  if (spec.official_splits) {
    std::vector<fs::path> train_files;
    std::vector<fs::path> test_files;
    for (const auto& file : CollectFiles(paths)) {
      const std::string stem = ToLowerAscii(file.stem().string());
      if (StartsWith(stem, "train")) {
        train_files.push_back(file);
      } else if (StartsWith(stem, "val") || StartsWith(stem, "test")) {
        test_files.push_back(file);
      }
    }
    if (!train_files.empty() && !test_files.empty()) {
      auto train = Ingest(train_files, spec);
      auto test = Ingest(test_files, spec);
      corpus.split.train = std::move(train.layouts);
      corpus.split.test = std::move(test.layouts);
      corpus.split.seed = seed;
      Append(corpus.report, std::move(train));
      Append(corpus.report, std::move(test));
      return corpus;
    }
  }
  auto result = Ingest(paths, spec);
  corpus.split = Split(std::move(result.layouts), spec.split_ratio, seed);
  result.layouts.clear();
  corpus.report = std::move(result);
  return corpus;
}

std::string FilterReportToJson(const IngestResult& report, std::size_t kept) {
  nlohmann::ordered_json j;
  auto entries = [](const std::vector<FilterEntry>& list) {
    auto array = nlohmann::ordered_json::array();
    for (const auto& e : list) {
      array.push_back({{"source", e.source}, {"reason", e.reason}});
    }
    return array;
  };
  j["kept"] = kept;
  j["dropped"] = entries(report.dropped);
  j["trimmed"] = entries(report.trimmed);
  return j.dump(2);
}

}  // namespace unilayout
