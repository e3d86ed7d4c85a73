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
#include "commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "svg.hpp"
#include "unilayout/error.hpp"
#include "unilayout/generation.hpp"
#include "unilayout/ingest.hpp"
#include "unilayout/layout_store.hpp"
#include "unilayout/metrics.hpp"
#include "unilayout/task_sampler.hpp"

namespace unilayout::cli {
namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

constexpr const char* kTrainFile = "train.jsonl";
constexpr const char* kTestFile = "test.jsonl";
constexpr const char* kRegistryFile = "registry.json";
constexpr const char* kRunConfigFile = "run_config.txt";

struct IngestArgs {
  std::string preset;
  std::vector<std::string> inputs;
  std::string out = "out/ingest";
  std::uint64_t seed = kDefaultSplitSeed;
};

struct EmitArgs {
  std::vector<std::string> stores;
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  std::string only_task;
  std::string out = "out/train";
  unsigned workers = 1;
  double noise_std = 0.01;
  double relation_rate = 0.20;
  std::vector<double> domain_weights = {1, 7, 95, 111};
};

struct GenerateArgs {
  std::string store;
  std::string registry;
  std::string task = "completion";
  std::string domain;
  bool mock = false;
  std::string mock_table;
  std::string backend_url;
  int timeout_ms = 30000;
  int retries = 3;
  std::string strategy;
  bool repair = false;
  std::uint64_t seed = 1;
  std::size_t limit = 0;
  unsigned max_in_flight = 4;
  std::string out = "out/generate";
};

struct EvaluateArgs {
  std::string generated;
  std::string reference;
  std::string registry;
  std::vector<std::string> methods;
  std::string ties = "mean";
  std::string out = "out/evaluate";
};

struct RenderArgs {
  std::string store;
  std::string registry;
  std::string out = "out/render";
};

// A store argument may name a JSONL file or a directory holding `file`.
fs::path ResolveStore(const std::string& arg, const char* file) {
  const fs::path path(arg);
  if (fs::is_directory(path)) return path / file;
  return path;
}

void RequireFile(const fs::path& path) {
  if (!fs::is_regular_file(path)) {
    throw Error(Errc::kIo, "no such file: " + path.string());
  }
}

// Registry given explicitly, else registry.json next to the store, else the
// built-in label sets.
CategoryRegistry LoadRegistry(const std::string& explicit_path,
                              const fs::path& store) {
  if (!explicit_path.empty()) {
    RequireFile(explicit_path);
    return RegistryFromJson(ReadTextFile(explicit_path));
  }
  const fs::path sibling = store.parent_path() / kRegistryFile;
  if (fs::is_regular_file(sibling)) return RegistryFromJson(ReadTextFile(sibling));
  return CategoryRegistry::Defaults();
}

// Only the section of the subcommand that ran, in the same key=value form
// --config accepts.
void WriteRunConfig(const CLI::App& app, const fs::path& dir) {
  std::string section;
  for (const auto* sub : app.get_subcommands()) section = sub->get_name() + ".";
  std::istringstream all(app.config_to_str(true, false));
  std::string text;
  for (std::string line; std::getline(all, line);) {
    if (line.rfind(section, 0) == 0) text += line + '\n';
  }
  WriteTextFile(dir / kRunConfigFile, text);
}

std::string Fixed(double value, int digits = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << value;
  return os.str();
}

void CmdIngest(const IngestArgs& args, const CLI::App& app, std::ostream& out) {
  const DatasetSpec spec = DatasetSpec::Preset(args.preset);
  std::vector<fs::path> inputs(args.inputs.begin(), args.inputs.end());
  for (const auto& p : inputs) {
    if (!fs::exists(p)) throw Error(Errc::kIo, "input path does not exist: " + p.string());
  }
  IngestedCorpus corpus = IngestAndSplit(inputs, spec, args.seed);
  const fs::path dir(args.out);
  WriteLayoutStore(dir / kTrainFile, corpus.split.train);
  WriteLayoutStore(dir / kTestFile, corpus.split.test);
  std::vector<Layout> all = corpus.split.train;
  all.insert(all.end(), corpus.split.test.begin(), corpus.split.test.end());
  WriteTextFile(dir / kRegistryFile, RegistryToJson(RegistryOf(all)));
  WriteTextFile(dir / "filter_report.json",
                FilterReportToJson(corpus.report, all.size()));
  WriteRunConfig(app, dir);
  out << "ingest " << spec.name << ": " << corpus.split.train.size() << " train, "
      << corpus.split.test.size() << " test, " << corpus.report.dropped.size()
      << " dropped, " << corpus.report.trimmed.size() << " trimmed\n";
}

void CmdEmitTrain(const EmitArgs& args, const CLI::App& app, std::ostream& out) {
  Corpora corpora;
  for (const auto& store : args.stores) {
    const fs::path path = ResolveStore(store, kTrainFile);
    RequireFile(path);
    for (auto& layout : ReadLayoutStore(path)) {
      corpora[static_cast<std::size_t>(layout.domain)].push_back(std::move(layout));
    }
  }
  MixtureSchedule schedule;
  schedule.relation_rate = args.relation_rate;
  if (args.domain_weights.size() != 4) {
    throw Error(Errc::kInvalidArgument, "--domain-weights takes four values");
  }
  std::copy(args.domain_weights.begin(), args.domain_weights.end(),
            schedule.domain_weights.begin());

  BatchOptions options;
  options.workers = args.workers;
  options.noise.stddev = args.noise_std;
  if (!args.only_task.empty()) {
    options.only_task = ParseTask(args.only_task);
    if (!options.only_task) {
      throw Error(Errc::kInvalidArgument, "unknown task: " + args.only_task);
    }
  }
  const auto samples = SampleBatch(corpora, schedule, args.seed, args.n, options);

  std::string text;
  std::map<std::string, std::size_t> task_counts;
  for (const auto& sample : samples) {
    text += ToJsonLine(ToTrainingRecord(sample));
    text += '\n';
    ++task_counts[std::string(TaskName(sample.task))];
  }
  const fs::path dir(args.out);
  WriteTextFile(dir / "train_pairs.jsonl", text);
  WriteRunConfig(app, dir);
  out << "emit-train: " << samples.size() << " records";
  for (const auto& [task, count] : task_counts) out << ", " << task << "=" << count;
  out << '\n';
}

ojson RepairLogJson(const RepairLog& log) {
  ojson actions = ojson::array();
  for (const auto& a : log.actions) {
    actions.push_back(
        {{"kind", RepairKindName(a.kind)}, {"index", a.index}, {"detail", a.detail}});
  }
  return actions;
}

void CmdGenerate(const GenerateArgs& args, const CLI::App& app, std::ostream& out,
                 std::ostream& err) {
  const fs::path store = ResolveStore(args.store, kTestFile);
  RequireFile(store);
  const auto task = ParseTask(args.task);
  if (!task) throw Error(Errc::kInvalidArgument, "unknown task: " + args.task);
  std::optional<DecodingStrategy> strategy;
  if (!args.strategy.empty()) {
    strategy = ParseStrategy(args.strategy);
    if (!strategy) throw Error(Errc::kInvalidArgument, "unknown strategy: " + args.strategy);
  }
  std::optional<Domain> domain;
  if (!args.domain.empty()) {
    domain = ParseDomain(args.domain);
    if (!domain) throw Error(Errc::kInvalidArgument, "unknown domain: " + args.domain);
  }
  if (args.mock == !args.backend_url.empty()) {
    throw Error(Errc::kInvalidArgument, "pass exactly one of --mock or --backend-url");
  }
  const CategoryRegistry registry = LoadRegistry(args.registry, store);

  std::vector<Layout> references;
  for (auto& layout : ReadLayoutStore(store)) {
    if (domain && layout.domain != *domain) continue;
    references.push_back(std::move(layout));
    if (args.limit && references.size() >= args.limit) break;
  }

  std::vector<CompletionRequest> requests;
  std::vector<std::optional<int>> expected_counts;
  std::vector<std::string> build_errors(references.size());
  for (std::size_t i = 0; i < references.size(); ++i) {
    Rng rng = MakeRng(args.seed, i);
    CompletionRequest request;
    request.decoding = SelectDecoding(*task, strategy);
    request.decoding.max_new_tokens =
        DefaultMaxNewTokens(static_cast<int>(references[i].size()));
    std::optional<int> expected;
    try {
      const auto sample = MakeSample(references[i], *task, rng);
      request.prompt = sample.ali.text;
      expected = sample.ali.source.prefix.object_number;
    } catch (const Error& e) {
      build_errors[i] = e.what();
    }
    requests.push_back(std::move(request));
    expected_counts.push_back(expected);
  }

  std::unique_ptr<CompletionBackend> backend;
  if (args.mock) {
    std::map<std::string, std::string> table;
    if (!args.mock_table.empty()) table = MockBackend::LoadTable(args.mock_table);
    backend = std::make_unique<MockBackend>(registry, std::move(table), args.seed);
  } else {
    BackendEndpoint endpoint;
    endpoint.base_url = args.backend_url;
    endpoint.timeout = std::chrono::milliseconds(args.timeout_ms);
    endpoint.retry.max_attempts = args.retries;
    if (const char* token = std::getenv(std::string(kAuthTokenEnv).c_str())) {
      endpoint.auth_token = token;
    }
    backend = std::make_unique<HttpBackend>(std::move(endpoint));
  }

  // Requests whose condition could not be built are not sent.
  std::vector<CompletionRequest> sendable;
  std::vector<std::size_t> sent_index;
  for (std::size_t i = 0; i < requests.size(); ++i) {
    if (build_errors[i].empty()) {
      sendable.push_back(requests[i]);
      sent_index.push_back(i);
    }
  }
  const auto outcomes = GenerateAll(sendable, *backend, args.max_in_flight);
  std::vector<GenerationOutcome> results(requests.size());
  for (std::size_t k = 0; k < sent_index.size(); ++k) results[sent_index[k]] = outcomes[k];

  std::string text;
  std::size_t failures = 0;
  std::size_t repaired = 0;
  for (std::size_t i = 0; i < references.size(); ++i) {
    const Layout& ref = references[i];
    ojson line;
    line["id"] = ref.id;
    line["task"] = args.task;
    line["prompt"] = requests[i].prompt;
    line["completion"] = results[i].completion ? ojson(*results[i].completion) : ojson();
    line["layout"] = nullptr;
    line["repair_log"] = ojson::array();
    std::optional<std::string> error;
    if (!build_errors[i].empty()) {
      error = build_errors[i];
    } else if (results[i].error) {
      error = results[i].error;
    } else {
      try {
        auto outcome = ValidateAndRepair(*results[i].completion, registry, ref.domain,
                                         expected_counts[i], args.repair, {},
                                         PageSize{ref.page_w, ref.page_h});
        outcome.layout.id = ref.id;
        outcome.layout.column_count = ref.column_count;
        line["layout"] = ojson::parse(LayoutToJson(outcome.layout));
        line["repair_log"] = RepairLogJson(outcome.log);
        if (!outcome.log.empty()) ++repaired;
      } catch (const Error& e) {
        error = e.what();
      }
    }
    line["error"] = error ? ojson(*error) : ojson();
    if (error) {
      ++failures;
      err << "warning: " << ref.id << ": " << *error << '\n';
    }
    text += line.dump();
    text += '\n';
  }
  const fs::path dir(args.out);
  WriteTextFile(dir / "generated.jsonl", text);
  ojson summary;
  summary["task"] = args.task;
  summary["total"] = references.size();
  summary["failed"] = failures;
  summary["repaired"] = repaired;
  summary["decoding"] = StrategyName(SelectDecoding(*task, strategy).strategy);
  WriteTextFile(dir / "summary.json", summary.dump(2) + "\n");
  WriteRunConfig(app, dir);
  out << "generate " << args.task << ": " << references.size() << " samples, "
      << failures << " failed, " << repaired << " repaired\n";
}

// Reads either a generated.jsonl (records with a "layout" field) or a plain
// layout store. Failed generations come back empty.
std::vector<std::optional<Layout>> ReadLayoutsOrGenerated(const fs::path& path) {
  std::vector<std::optional<Layout>> layouts;
  for (const auto& line : ReadLines(path)) {
    const auto j = nlohmann::json::parse(line);
    if (j.contains("layout") || j.contains("completion")) {
      const auto& layout = j.value("layout", nlohmann::json());
      if (layout.is_null()) {
        layouts.emplace_back();
      } else {
        layouts.emplace_back(LayoutFromJson(layout.dump()));
      }
    } else {
      layouts.emplace_back(LayoutFromJson(line));
    }
  }
  return layouts;
}

MethodMetrics ReadMethod(const fs::path& path) {
  RequireFile(path);
  const auto j = nlohmann::json::parse(ReadTextFile(path));
  MethodMetrics method;
  method.name = j.value("name", path.stem().string());
  for (MetricKind metric : kAllMetrics) {
    const std::string key(MetricName(metric));
    if (j.contains(key) && j.at(key).is_number()) {
      method.values[static_cast<std::size_t>(metric)] = j.at(key).get<double>();
    }
  }
  return method;
}

void CmdEvaluate(const EvaluateArgs& args, const CLI::App& app, std::ostream& out) {
  const fs::path dir(args.out);
  if (args.generated.empty() != args.reference.empty()) {
    throw Error(Errc::kInvalidArgument, "--generated and --reference go together");
  }
  if (args.generated.empty() && args.methods.empty()) {
    throw Error(Errc::kInvalidArgument, "nothing to evaluate");
  }
  if (!args.generated.empty()) {
    const fs::path gen_path = ResolveStore(args.generated, "generated.jsonl");
    const fs::path ref_path = ResolveStore(args.reference, kTestFile);
    RequireFile(gen_path);
    RequireFile(ref_path);
    std::map<std::string, Layout> by_id;
    for (auto& layout : ReadLayoutStore(ref_path)) by_id.emplace(layout.id, std::move(layout));

    std::vector<Layout> generated;
    std::vector<Layout> reference;
    std::size_t failed = 0;
    for (auto& layout : ReadLayoutsOrGenerated(gen_path)) {
      if (!layout) {
        ++failed;
        continue;
      }
      const auto it = by_id.find(layout->id);
      if (it == by_id.end()) {
        throw Error(Errc::kInvalidArgument, "generated id not in reference: " + layout->id);
      }
      generated.push_back(std::move(*layout));
      reference.push_back(it->second);
    }
    const CategoryRegistry registry = LoadRegistry(args.registry, ref_path);
    auto labels = registry.Merged();
    std::sort(labels.begin(), labels.end());
    const MetricReport report =
        Evaluate(generated, reference, GeometricEmbedding(std::move(labels)));
    auto j = ojson::parse(ToJson(report));
    j["failed_generations"] = failed;
    WriteTextFile(dir / "metrics.json", j.dump(2) + "\n");
    out << "fid " << Fixed(report.fid) << "  alignment " << Fixed(report.alignment)
        << "  overlap " << Fixed(report.overlap) << "  max_iou " << Fixed(report.max_iou)
        << "  (evaluated " << report.evaluated << ", skipped " << report.skipped
        << ", failed " << failed << ")\n";
  }
  if (!args.methods.empty()) {
    std::vector<MethodMetrics> methods;
    for (const auto& path : args.methods) methods.push_back(ReadMethod(path));
    TieRule ties;
    if (args.ties == "mean") {
      ties = TieRule::kMeanRank;
    } else if (args.ties == "min") {
      ties = TieRule::kMinRank;
    } else {
      throw Error(Errc::kInvalidArgument, "--ties takes mean or min");
    }
    const auto scores = RankingScore(methods, ties);
    ojson table = ojson::array();
    std::string csv = "method";
    for (MetricKind m : kAllMetrics) csv += "," + std::string(MetricName(m));
    csv += ",r_score\n";
    out << std::left << std::setw(24) << "method";
    for (MetricKind m : kAllMetrics) out << std::setw(12) << MetricName(m);
    out << "r_score\n";
    for (std::size_t i = 0; i < methods.size(); ++i) {
      ojson row;
      row["name"] = methods[i].name;
      out << std::setw(24) << methods[i].name;
      csv += methods[i].name;
      for (MetricKind m : kAllMetrics) {
        const auto& v = methods[i].values[static_cast<std::size_t>(m)];
        row[std::string(MetricName(m))] = v ? ojson(*v) : ojson();
        out << std::setw(12) << (v ? Fixed(*v) : "-");
        csv += "," + (v ? Fixed(*v, 6) : std::string());
      }
      row["r_score"] = scores[i];
      out << Fixed(scores[i], 2) << '\n';
      csv += "," + Fixed(scores[i], 6) + "\n";
      table.push_back(row);
    }
    WriteTextFile(dir / "ranking.json", table.dump(2) + "\n");
    WriteTextFile(dir / "ranking.csv", csv);
  }
  WriteRunConfig(app, dir);
}

std::string SafeName(std::string_view id) {
  std::string name;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
    name += ok ? c : '_';
  }
  return name;
}

void CmdRender(const RenderArgs& args, const CLI::App& app, std::ostream& out,
               std::ostream& err) {
  const fs::path store = ResolveStore(args.store, kTestFile);
  RequireFile(store);
  const CategoryRegistry registry = LoadRegistry(args.registry, store);
  const auto layouts = ReadLayoutsOrGenerated(store);
  const fs::path dir(args.out);
  std::size_t written = 0;
  for (std::size_t i = 0; i < layouts.size(); ++i) {
    if (!layouts[i]) continue;
    std::vector<std::string> unknown;
    const std::string svg = RenderSvg(*layouts[i], &registry, &unknown);
    for (const auto& label : unknown) {
      err << "warning: " << layouts[i]->id << ": unknown label '" << label
          << "' drawn in fallback color\n";
    }
    std::ostringstream name;
    name << std::setw(5) << std::setfill('0') << i << '_' << SafeName(layouts[i]->id)
         << ".svg";
    WriteTextFile(dir / name.str(), svg);
    ++written;
  }
  WriteRunConfig(app, dir);
  out << "render: " << written << " svg files\n";
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unified layout generation toolkit", "unilayout"};
  app.set_config("--config", "", "Read options from a key=value file");
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Filter, normalize and split a corpus");
  ingest_cmd->add_option("--preset", ingest.preset,
                         "publaynet, rico, magazine, slide, spase or wise")
      ->required();
  ingest_cmd->add_option("--in", ingest.inputs, "Annotation files or directories")
      ->required();
  ingest_cmd->add_option("--out", ingest.out, "Output directory");
  ingest_cmd->add_option("--seed", ingest.seed, "Split seed");

  EmitArgs emit;
  auto* emit_cmd = app.add_subcommand("emit-train", "Sample training pairs");
  emit_cmd->add_option("--stores", emit.stores, "Ingest output directories")->required();
  emit_cmd->add_option("--n", emit.n, "Number of records");
  emit_cmd->add_option("--seed", emit.seed, "Sampling seed");
  emit_cmd->add_option("--only-task", emit.only_task, "Restrict to one task");
  emit_cmd->add_option("--workers", emit.workers, "Sampling threads");
  emit_cmd->add_option("--noise-std", emit.noise_std, "Refinement noise std");
  emit_cmd->add_option("--relation-rate", emit.relation_rate,
                       "Share of mixed draws carrying relations");
  emit_cmd->add_option("--domain-weights", emit.domain_weights,
                       "article, App UI, magazine, slide weights")
      ->expected(4);
  emit_cmd->add_option("--out", emit.out, "Output directory");

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "Generate layouts for a test split");
  gen_cmd->add_option("--store", gen.store, "Test store or ingest directory")->required();
  gen_cmd->add_option("--registry", gen.registry, "Label registry JSON");
  gen_cmd->add_option("--task", gen.task, "Task name");
  gen_cmd->add_option("--domain", gen.domain, "Only layouts of this domain");
  gen_cmd->add_flag("--mock", gen.mock, "Use the offline backend");
  gen_cmd->add_option("--mock-table", gen.mock_table, "Canned prompt/completion table");
  gen_cmd->add_option("--backend-url", gen.backend_url, "Completion server base URL");
  gen_cmd->add_option("--timeout-ms", gen.timeout_ms, "Per-request timeout");
  gen_cmd->add_option("--retries", gen.retries, "Attempts per request");
  gen_cmd->add_option("--strategy", gen.strategy, "greedy, topk or multinomial");
  gen_cmd->add_flag("--repair", gen.repair, "Repair malformed responses and log it");
  gen_cmd->add_option("--seed", gen.seed, "Condition sampling seed");
  gen_cmd->add_option("--limit", gen.limit, "Maximum number of samples");
  gen_cmd->add_option("--max-in-flight", gen.max_in_flight, "Concurrent requests");
  gen_cmd->add_option("--out", gen.out, "Output directory");

  EvaluateArgs eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "Metric suite and ranking table");
  eval_cmd->add_option("--generated", eval.generated, "generated.jsonl or a layout store");
  eval_cmd->add_option("--reference", eval.reference, "Reference layout store");
  eval_cmd->add_option("--registry", eval.registry, "Label registry JSON");
  eval_cmd->add_option("--methods", eval.methods, "Per-method metric JSON files");
  eval_cmd->add_option("--ties", eval.ties, "mean or min");
  eval_cmd->add_option("--out", eval.out, "Output directory");

  RenderArgs render;
  auto* render_cmd = app.add_subcommand("render", "Draw layouts as SVG");
  render_cmd->add_option("--store", render.store, "Layout store or generated.jsonl")
      ->required();
  render_cmd->add_option("--registry", render.registry, "Label registry JSON");
  render_cmd->add_option("--out", render.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*ingest_cmd) CmdIngest(ingest, app, out);
    if (*emit_cmd) CmdEmitTrain(emit, app, out);
    if (*gen_cmd) CmdGenerate(gen, app, out, err);
    if (*eval_cmd) CmdEvaluate(eval, app, out);
    if (*render_cmd) CmdRender(render, app, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv = {"unilayout"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return Run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace unilayout::cli
