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
#include <filesystem>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"
#include "json.hpp"
#include "svg.hpp"
#include "unilayout/instruction.hpp"
#include "unilayout/layout_store.hpp"

namespace unilayout {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const fs::path kFixtures = UNILAYOUT_FIXTURES_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::Run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path Scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("unilayout_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

// Ingests the magazine fixtures once per test that needs a store.
fs::path MagazineStore(const fs::path& root) {
  const auto r = Cli({"ingest", "--preset", "magazine", "--in",
                      (kFixtures / "magazine").string(), "--out", (root / "mag").string()});
  REQUIRE(r.code == 0);
  return root / "mag";
}

TEST_SUITE("cli") {

TEST_CASE("ingest writes the store files and the resolved config") {
  const fs::path root = Scratch("ingest");
  const fs::path store = MagazineStore(root);
  for (const char* f : {"train.jsonl", "test.jsonl", "filter_report.json", "registry.json",
                        "run_config.txt"}) {
    CHECK(fs::is_regular_file(store / f));
  }
  const auto config = ReadTextFile(store / "run_config.txt");
  CHECK(config.find("ingest.preset=\"magazine\"") != std::string::npos);
  CHECK(config.find("ingest.seed=20240101") != std::string::npos);
  fs::remove_all(root);
}

TEST_CASE("ingest with a bad path fails and names it") {
  const auto r = Cli({"ingest", "--preset", "rico", "--in", "/no/such/dir", "--out",
                      Scratch("bad").string()});
  CHECK(r.code != 0);
  CHECK(r.err.find("/no/such/dir") != std::string::npos);
}

TEST_CASE("ingest with the same seed is reproducible") {
  const fs::path root = Scratch("seed");
  for (const char* name : {"a", "b"}) {
    REQUIRE(Cli({"ingest", "--preset", "rico", "--in", (kFixtures / "rico").string(), "--seed",
                 "7", "--out", (root / name).string()})
                .code == 0);
  }
  CHECK(ReadTextFile(root / "a/train.jsonl") == ReadTextFile(root / "b/train.jsonl"));
  CHECK(ReadTextFile(root / "a/test.jsonl") == ReadTextFile(root / "b/test.jsonl"));
  fs::remove_all(root);
}

TEST_CASE("config file supplies options and flags override it") {
  const fs::path root = Scratch("config");
  WriteTextFile(root / "run.txt", "ingest.preset=\"rico\"\ningest.in=\"" +
                                      (kFixtures / "rico").string() + "\"\ningest.seed=3\n");
  REQUIRE(Cli({"--config", (root / "run.txt").string(), "ingest", "--seed", "9", "--out",
               (root / "out").string()})
              .code == 0);
  const auto config = ReadTextFile(root / "out/run_config.txt");
  CHECK(config.find("ingest.preset=\"rico\"") != std::string::npos);
  CHECK(config.find("ingest.seed=9") != std::string::npos);
  fs::remove_all(root);
}

TEST_CASE("emit-train writes exactly n records") {
  const fs::path root = Scratch("emit");
  const fs::path store = MagazineStore(root);
  REQUIRE(Cli({"emit-train", "--stores", store.string(), "--n", "250", "--domain-weights", "0",
               "0", "1", "0", "--out", (root / "t").string()})
              .code == 0);
  const auto lines = ReadLines(root / "t/train_pairs.jsonl");
  CHECK(lines.size() == 250);
  for (const auto& line : lines) {
    const auto r = TrainingRecordFromJson(line);
    CHECK(r.domain == "magazine");
    CHECK(r.prompt.find('#') == std::string::npos);
  }
  REQUIRE(Cli({"emit-train", "--stores", store.string(), "--n", "40", "--only-task",
               "refinement", "--domain-weights", "0", "0", "1", "0", "--out",
               (root / "r").string()})
              .code == 0);
  for (const auto& line : ReadLines(root / "r/train_pairs.jsonl")) {
    const auto r = TrainingRecordFromJson(line);
    CHECK(r.task == "refinement");
    CHECK(r.prompt.rfind("refine;", 0) == 0);
  }
  const auto missing = Cli({"emit-train", "--stores", store.string(), "--n", "5", "--out",
                            (root / "m").string()});
  CHECK(missing.code != 0);
  CHECK(missing.err.find("EmptyCorpus") != std::string::npos);
  fs::remove_all(root);
}

TEST_CASE("generate with the mock backend") {
  const fs::path root = Scratch("generate");
  const fs::path store = MagazineStore(root);
  REQUIRE(Cli({"generate", "--store", store.string(), "--task", "gen-up", "--domain",
               "magazine", "--mock", "--repair", "--out", (root / "up").string()})
              .code == 0);
  const auto lines = ReadLines(root / "up/generated.jsonl");
  REQUIRE_FALSE(lines.empty());
  std::vector<std::string> templates;
  for (int t = 1; t <= kFirstGenericTemplate; ++t) templates.push_back(RenderNlPrompt(t, Domain::kMagazine));
  for (const auto& line : lines) {
    const auto j = json::parse(line);
    const auto prompt = j.at("prompt").get<std::string>();
    const bool from_template =
        std::find(templates.begin(), templates.end(), prompt) != templates.end() ||
        prompt.rfind("Generate a layout of magazine, with ", 0) == 0;
    CHECK(from_template);
    CHECK(j.at("error").is_null());
  }

  REQUIRE(Cli({"generate", "--store", store.string(), "--task", "refinement", "--mock",
               "--repair", "--out", (root / "ref").string()})
              .code == 0);
  const auto summary = json::parse(ReadTextFile(root / "ref/summary.json"));
  CHECK(summary.at("decoding") == "multinomial");
  CHECK(summary.at("failed") == 0);

  const auto unreachable = Cli({"generate", "--store", store.string(), "--backend-url",
                                "http://127.0.0.1:1", "--timeout-ms", "100", "--retries", "1",
                                "--out", (root / "net").string()});
  CHECK(unreachable.code == 0);
  const auto failed = json::parse(ReadTextFile(root / "net/summary.json"));
  CHECK(failed.at("failed") == failed.at("total"));
  fs::remove_all(root);
}

TEST_CASE("self evaluation and ranking table") {
  const fs::path root = Scratch("evaluate");
  const fs::path store = MagazineStore(root);
  REQUIRE(Cli({"evaluate", "--generated", (store / "train.jsonl").string(), "--reference",
               (store / "train.jsonl").string(), "--out", (root / "self").string()})
              .code == 0);
  const auto m = json::parse(ReadTextFile(root / "self/metrics.json"));
  CHECK(m.at("max_iou").get<double>() == 1.0);
  CHECK(m.at("fid").get<double>() <= 1e-6);

  WriteTextFile(root / "a.json", R"({"name": "a", "fid": 1.0, "alignment": 0.1, "max_iou": 0.9})");
  WriteTextFile(root / "b.json", R"({"name": "b", "fid": 2.0, "alignment": 0.2, "max_iou": 0.5})");
  const auto r = Cli({"evaluate", "--methods", (root / "a.json").string(),
                      (root / "b.json").string(), "--out", (root / "rank").string()});
  REQUIRE(r.code == 0);
  const auto table = json::parse(ReadTextFile(root / "rank/ranking.json"));
  CHECK(table[0].at("r_score") == 1.0);
  CHECK(table[1].at("r_score") == 2.0);
  CHECK(fs::is_regular_file(root / "rank/ranking.csv"));
  fs::remove_all(root);
}

TEST_CASE("render") {
  const fs::path root = Scratch("render");
  Layout one;
  one.id = "one";
  one.domain = Domain::kArticle;
  one.page_w = 791;
  one.elements = {{"figure", {10, 20, 30, 40}, {}}};
  Layout odd = one;
  odd.id = "odd";
  odd.elements[0].label = "banner";
  std::vector<Layout> layouts = {one, odd};
  WriteLayoutStore(root / "store.jsonl", layouts);
  const auto r = Cli({"render", "--store", (root / "store.jsonl").string(), "--out",
                      (root / "a").string()});
  REQUIRE(r.code == 0);
  REQUIRE(Cli({"render", "--store", (root / "store.jsonl").string(), "--out",
               (root / "b").string()})
              .code == 0);
  const auto svg = ReadTextFile(root / "a/00000_one.svg");
  std::size_t rects = 0;
  for (auto pos = svg.find("<rect"); pos != std::string::npos; pos = svg.find("<rect", pos + 1)) {
    ++rects;
  }
  CHECK(rects == 2);
  CHECK(svg == ReadTextFile(root / "b/00000_one.svg"));
  CHECK(svg.find(cli::LabelColor("figure")) != std::string::npos);
  const auto unknown = ReadTextFile(root / "a/00001_odd.svg");
  CHECK(unknown.find(std::string(cli::kFallbackColor)) != std::string::npos);
  CHECK(r.err.find("banner") != std::string::npos);
  fs::remove_all(root);
}

TEST_CASE("label colors are stable and distinct") {
  CHECK(cli::LabelColor("text") == cli::LabelColor("text"));
  CHECK(cli::LabelColor("text") != cli::LabelColor("title"));
  CHECK(cli::LabelColor("text").size() == 7);
}

}  // TEST_SUITE
}  // namespace
}  // namespace unilayout
