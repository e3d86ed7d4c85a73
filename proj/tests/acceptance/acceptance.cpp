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
// Acceptance suite: one PASS/FAIL line per criterion, exit code 1 if any
// fails. Usage: acceptance <unilayout-binary> <fixtures-dir> <scratch-dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "unilayout/instruction.hpp"
#include "unilayout/iqe.hpp"
#include "unilayout/layout_store.hpp"
#include "unilayout/metrics.hpp"
#include "unilayout/task_sampler.hpp"

namespace fs = std::filesystem;
using namespace unilayout;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << std::fixed << v;
  return os.str();
}

Outcome IqeRoundtrip() {
  const auto start = Clock::now();
  long failures = 0;
  for (int k = 0; k < 4; ++k) {
    for (int v = 0; v < 1024; ++v) {
      const auto kind = static_cast<GeomKind>(k);
      if (!(Decode(Encode(kind, v)) == EncodedAttribute{kind, v})) ++failures;
    }
  }
  const double t = Seconds(start);
  return {failures == 0 && t < 1.0,
          std::to_string(failures) + " failures in 4096 values, " + Fmt(t, 6) + " s (< 1 s)"};
}

Outcome PaperPrompt() {
  auto partial = [](std::string label, BoundingBox box, std::initializer_list<Attribute> known) {
    Element e{std::move(label), box, StatusMask::AllUnknown()};
    for (Attribute a : known) e.status.set(a, AttributeStatus::kKnown);
    return e;
  };
  std::vector<Element> elements;
  elements.push_back(partial("text", {0, 122, 49, 0}, {Attribute::kClass, Attribute::kY, Attribute::kW}));
  for (int i = 0; i < 8; ++i) elements.push_back(partial("text", {}, {Attribute::kClass}));
  elements.push_back(partial("", {0, 412, 55, 326}, {Attribute::kY, Attribute::kW, Attribute::kH}));
  const auto ali = BuildAli({RefineFlag::kRefine, Domain::kArticle, 10, 2}, {}, elements);
  const std::string head = "refine;article;10;2;text 1146 2097;";
  const std::string tail = "1436 2103 3398";
  const bool ok = ali.text.rfind(head, 0) == 0 && ali.text.size() >= tail.size() &&
                  ali.text.compare(ali.text.size() - tail.size(), tail.size(), tail) == 0;
  return {ok, "\"" + ali.text.substr(0, head.size()) + "...;" +
                  ali.text.substr(ali.text.size() - std::min(ali.text.size(), tail.size())) + "\""};
}

Outcome UlrRoundtrip() {
  std::mt19937_64 rng(20240611);
  const auto reg = CategoryRegistry::Defaults();
  int failures = 0;
  for (int i = 0; i < 10000; ++i) {
    const Domain d = kAllDomains[i % 4];
    const Layout l = oracle::RandomLayout(rng, d, reg);
    try {
      if (!(ParseUlr(BuildUlr(l).text, reg, d, {}, {l.page_w, l.page_h}) == l)) ++failures;
    } catch (const std::exception&) {
      ++failures;
    }
  }
  return {failures == 0, std::to_string(failures) + " failures in 10000 layouts"};
}

Outcome MaxIouOracle() {
  std::mt19937_64 rng(77);
  const std::vector<std::string> labels = {"text", "title", "list", "table", "figure"};
  int mismatches = 0, self_failures = 0;
  for (int t = 0; t < 1000; ++t) {
    Layout g, r;
    g.page_w = r.page_w = 800;
    g.page_h = r.page_h = 1024;
    std::vector<std::string> chosen;
    for (const auto& label : labels) {
      const int count = std::uniform_int_distribution<int>(0, 6)(rng);
      for (int c = 0; c < count; ++c) chosen.push_back(label);
    }
    if (chosen.empty()) chosen.push_back("text");
    auto box = [&] {
      const int x = std::uniform_int_distribution<int>(0, 700)(rng);
      const int y = std::uniform_int_distribution<int>(0, 900)(rng);
      return BoundingBox{x, y, std::uniform_int_distribution<int>(1, 800 - x)(rng),
                         std::uniform_int_distribution<int>(1, 1024 - y)(rng)};
    };
    std::shuffle(chosen.begin(), chosen.end(), rng);
    for (const auto& l : chosen) g.elements.push_back({l, box(), {}});
    std::shuffle(chosen.begin(), chosen.end(), rng);
    for (const auto& l : chosen) r.elements.push_back({l, box(), {}});
    const auto fast = MaxIou(g, r);
    const auto slow = oracle::BruteMaxIou(g, r);
    if (!fast || !slow || *fast != *slow) ++mismatches;
    if (MaxIou(g, g) != 1.0 || MaxIou(r, r) != 1.0) ++self_failures;
  }
  return {mismatches == 0 && self_failures == 0,
          std::to_string(mismatches) + " oracle mismatches, " + std::to_string(self_failures) +
              " self-IoU != 1 over 1000 pairs"};
}

Outcome FidSanity() {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n01(0, 1);
  std::vector<FeatureVector> x(500, FeatureVector(8)), y(400, FeatureVector(8));
  for (auto& v : x) for (auto& e : v) e = n01(rng);
  for (auto& v : y) for (auto& e : v) e = 0.3 + 1.5 * n01(rng);
  const double self = Fid(x, x);
  const double asym = std::abs(Fid(x, y) - Fid(y, x));
  std::vector<FeatureVector> a(100000), b(100000);
  for (auto& v : a) v = {n01(rng)};
  for (auto& v : b) v = {1.0 + n01(rng)};
  const double one_d = Fid(a, b);
  const double expected = oracle::AnalyticFrechet1d(0, 1, 1, 1);
  const double rel = std::abs(one_d - expected) / expected;
  return {self <= 1e-6 && asym <= 1e-8 && rel <= 0.05,
          "fid(X,X)=" + Fmt(self, 9) + " (<= 1e-6), |fid(X,Y)-fid(Y,X)|=" + Fmt(asym, 12) +
              " (<= 1e-8), 1-D " + Fmt(one_d) + " vs " + Fmt(expected) + " (rel " + Fmt(rel) +
              " <= 0.05)"};
}

Outcome MixtureConvergence() {
  std::mt19937_64 gen(3);
  const auto reg = CategoryRegistry::Defaults();
  Corpora corpora;
  for (Domain d : kAllDomains) {
    for (int i = 0; i < 200; ++i) {
      Layout l = oracle::RandomLayout(gen, d, reg, 25);
      if (l.size() < 2) l.elements.push_back(l.elements[0]);
      corpora[static_cast<std::size_t>(d)].push_back(std::move(l));
    }
  }
  const MixtureSchedule schedule;
  const std::size_t n = 100000;
  const auto start = Clock::now();
  const auto samples = SampleBatch(corpora, schedule, 2024, n);
  const double t = Seconds(start);

  std::map<TaskKind, double> tasks;
  std::array<double, 4> domains{};
  double mixed = 0, with_relations = 0;
  for (const auto& s : samples) {
    tasks[s.task] += 1;
    domains[static_cast<std::size_t>(s.domain)] += 1;
    if (s.task == TaskKind::kGenTPS || s.task == TaskKind::kGenArbRefine) {
      mixed += 1;
      with_relations += s.has_relations;
    }
  }
  const std::pair<TaskKind, double> want[] = {{TaskKind::kGenTPS, 0.45},
                                              {TaskKind::kGenArbRefine, 0.30},
                                              {TaskKind::kRefinement, 0.10},
                                              {TaskKind::kGenU, 0.075},
                                              {TaskKind::kGenUP, 0.075}};
  bool ok = t < 60.0;
  std::string detail;
  for (const auto& [task, share] : want) {
    const double got = tasks[task] / n;
    ok &= std::abs(got - share) <= 0.02;
    detail += std::string(TaskName(task)) + " " + Fmt(100 * got, 2) + "% ";
  }
  const double rel_rate = with_relations / mixed;
  ok &= std::abs(rel_rate - 0.20) <= 0.02;
  detail += "| relations " + Fmt(100 * rel_rate, 2) + "% of mixed | domains";
  double weight_total = 0;
  for (double w : schedule.domain_weights) weight_total += w;
  for (std::size_t d = 0; d < 4; ++d) {
    const double expected = schedule.domain_weights[d] / weight_total;
    const double got = domains[d] / n;
    const double rel = (got - expected) / expected;
    ok &= std::abs(rel) <= 0.05;
    detail += " " + std::string(DomainSlug(kAllDomains[d])) + " " + Fmt(100 * rel, 2) + "%rel";
  }
  detail += " | " + Fmt(t, 2) + " s";
  return {ok, detail};
}

Outcome NoiseModelStd() {
  Rng rng = MakeRng(99, 0);
  const int n = 100000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    const double d = (PerturbValue(512, {}, rng) - 512) / 1024.0;
    sum += d;
    sq += d * d;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sq / n - mean * mean);
  return {sd >= 0.0097 && sd <= 0.0103, "std " + Fmt(sd, 5) + " in [0.0097, 0.0103]"};
}

int Shell(const fs::path& cwd, const std::string& command) {
  const std::string full = "cd '" + cwd.string() + "' && " + command + " >> pipeline.log 2>&1";
  return std::system(full.c_str());
}

std::map<std::string, std::string> Snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file() || entry.path().filename() == "pipeline.log") continue;
    files[fs::relative(entry.path(), root).string()] = ReadTextFile(entry.path());
  }
  return files;
}

Outcome EndToEnd(const std::string& binary, const fs::path& fixtures, const fs::path& scratch) {
  const std::string bin = "'" + fs::absolute(binary).string() + "'";
  const std::string fx = fs::absolute(fixtures).string();
  std::vector<std::map<std::string, std::string>> runs;
  for (const char* name : {"run1", "run2"}) {
    const fs::path dir = scratch / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::vector<std::string> steps;
    for (const char* preset : {"publaynet", "rico", "magazine", "slide"}) {
      steps.push_back(bin + " ingest --preset " + preset + " --in '" + fx + "/" + preset +
                      "' --out data/" + preset + " --seed 7");
    }
    steps.push_back(bin + " emit-train --stores data/publaynet data/rico data/magazine"
                          " data/slide --n 2000 --seed 1 --workers 2 --out train");
    for (const char* preset : {"publaynet", "rico", "magazine", "slide"}) {
      steps.push_back(bin + " generate --store data/" + preset +
                      " --task completion --mock --repair --seed 1 --out gen/" + preset);
    }
    steps.push_back(bin + " generate --store data/magazine --task gen-up --mock --repair"
                          " --seed 1 --out gen/magazine-up");
    steps.push_back(bin + " evaluate --generated gen/publaynet --reference data/publaynet"
                          " --out eval/publaynet");
    steps.push_back(bin + " evaluate --generated data/publaynet/test.jsonl --reference"
                          " data/publaynet --out eval/self");
    steps.push_back(bin + " render --store gen/publaynet/generated.jsonl --out svg");
    for (const auto& step : steps) {
      if (Shell(dir, step) != 0) {
        return {false, std::string(name) + " step failed: " + step + " (see " +
                           (dir / "pipeline.log").string() + ")"};
      }
    }
    runs.push_back(Snapshot(dir));
  }
  std::size_t differing = 0;
  for (const auto& [path, bytes] : runs[0]) {
    const auto it = runs[1].find(path);
    if (it == runs[1].end() || it->second != bytes) ++differing;
  }
  if (runs[0].size() != runs[1].size()) ++differing;
  const bool has_outputs = runs[0].count("train/train_pairs.jsonl") &&
                           runs[0].count("eval/publaynet/metrics.json") &&
                           runs[0].count("gen/publaynet/generated.jsonl");
  return {differing == 0 && has_outputs,
          std::to_string(runs[0].size()) + " output files, " + std::to_string(differing) +
              " differ between two runs"};
}

Outcome RankingScoreRow() {
  const auto none = std::nullopt;
  auto m = [](std::string name, std::optional<double> fid, std::optional<double> align,
              std::optional<double> iou) {
    return MethodMetrics{std::move(name), {fid, align, std::nullopt, iou}};
  };
  // Completion on Rico: FID, Align., Max IOU as published.
  const std::vector<MethodMetrics> rows = {
      m("LayoutTransformer", 3.71, none, 0.54), m("BLT", 117.00, none, 0.47),
      m("LayoutFormer++", 4.57, 1.10, 0.73),    m("LayoutNUWA-DS", 8.73, 0.01, 0.64),
      m("LayoutDM", 9.00, none, 0.58),          m("LDGM", 16.42, 0.36, 0.60),
      m("LayoutPrompter", 7.32, 1.18, 0.67),    m("LayoutNUWA-DA", 7.54, 0.10, 0.62),
      m("LGGPT", 1.03, 0.12, 0.80)};
  const double score = RankingScore(rows).back();
  const double shown = std::round(score * 100) / 100;
  return {shown == 1.67, "LGGPT " + Fmt(score, 4) + " -> " + Fmt(shown, 2) + " (published 1.67)"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 4) {
    std::cerr << "usage: acceptance <unilayout-binary> <fixtures-dir> <scratch-dir>\n";
    return 2;
  }
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"iqe-roundtrip", IqeRoundtrip},
      {"paper-prompt-bytes", PaperPrompt},
      {"ulr-roundtrip", UlrRoundtrip},
      {"max-iou-oracle", MaxIouOracle},
      {"fid-sanity", FidSanity},
      {"mixture-convergence", MixtureConvergence},
      {"noise-model", NoiseModelStd},
      {"e2e-mock-pipeline", [&] { return EndToEnd(argv[1], argv[2], argv[3]); }},
      {"ranking-score", RankingScoreRow},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
