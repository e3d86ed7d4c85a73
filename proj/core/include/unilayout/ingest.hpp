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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "unilayout/layout.hpp"

namespace unilayout {

enum class AnnotationFormat {
  // {"images":[...],"annotations":[...],"categories":[...]}, bbox=[x,y,w,h].
  kCocoJson,
  // One page object per record:
  //   {"page":{"w":int,"h":int},"domain":str,
  //    "elements":[{"label":str,"bbox":[x,y,w,h]}]}
  // A file holds one object, an array of objects, or JSON Lines (.jsonl).
  // Optional "id" and "columns" fields override the derived values.
  kGenericJson,
};

struct DatasetSpec {
  std::string name;
  Domain domain = Domain::kArticle;
  AnnotationFormat format = AnnotationFormat::kGenericJson;
  std::optional<int> max_elements;
  std::vector<std::string> drop_labels;
  std::pair<int, int> split_ratio{9, 1};
  // Use train/val files shipped with the corpus instead of a random split.
  bool official_splits = false;

  /// "publaynet", "rico", "magazine", "slide" (also "spase", "wise").
  static DatasetSpec Preset(std::string_view name);
};

struct FilterEntry {
  std::string source;
  std::string reason;
};

struct IngestResult {
  std::vector<Layout> layouts;
  // Samples removed entirely.
  std::vector<FilterEntry> dropped;
  // Samples kept with some elements removed.
  std::vector<FilterEntry> trimmed;
};

struct SplitResult {
  std::vector<Layout> train;
  std::vector<Layout> test;
  std::uint64_t seed = 0;
};

/// Default shuffle seed for corpora without official splits.
inline constexpr std::uint64_t kDefaultSplitSeed = 20240101;

/// Reads every annotation file under `paths` (files, or directories scanned
/// for .json/.jsonl), ordered by path. Labels are lowercased, `drop_labels`
/// removed, oversized samples dropped, the rest normalized and fitted to the
/// IQE interval. Malformed files raise kParseError naming the file and record.
IngestResult Ingest(std::span<const std::filesystem::path> paths,
                    const DatasetSpec& spec);
IngestResult Ingest(const std::filesystem::path& path, const DatasetSpec& spec);

/// Lowercases and deduplicates, keeping first-occurrence order.
CategoryRegistry UnifyLabels(Domain domain,
                             std::span<const std::string> raw_labels);

/// Registry of every label present in `layouts`.
CategoryRegistry RegistryOf(std::span<const Layout> layouts);

/// Seeded shuffle then split; the test share is rounded half-up.
/// Requires at least 10 layouts (kTooFewSamples).
SplitResult Split(std::vector<Layout> layouts, std::pair<int, int> ratio,
                  std::uint64_t seed);

struct IngestedCorpus {
  SplitResult split;
  IngestResult report;  // filter log only; layouts moved into split
};

/// Ingest then split. With `spec.official_splits`, files whose names start
/// with "train" form the train set and "val"/"test" files the test set; if
/// no such files exist the ratio split is used.
IngestedCorpus IngestAndSplit(std::span<const std::filesystem::path> paths,
                              const DatasetSpec& spec, std::uint64_t seed);

std::string FilterReportToJson(const IngestResult& report, std::size_t kept);

}  // namespace unilayout
