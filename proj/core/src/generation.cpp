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
#include "unilayout/generation.hpp"

#include <algorithm>
#include <atomic>
#include <regex>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "text_util.hpp"
#include "unilayout/error.hpp"
#include "unilayout/layout_store.hpp"

namespace unilayout {

using nlohmann::json;

std::string_view StrategyName(DecodingStrategy strategy) {
  switch (strategy) {
    case DecodingStrategy::kGreedy: return "greedy";
    case DecodingStrategy::kTopK: return "topk";
    case DecodingStrategy::kMultinomial: return "multinomial";
  }
  return "greedy";
}

std::optional<DecodingStrategy> ParseStrategy(std::string_view name) {
  for (auto s : {DecodingStrategy::kGreedy, DecodingStrategy::kTopK,
                 DecodingStrategy::kMultinomial}) {
    if (StrategyName(s) == name) return s;
  }
  return std::nullopt;
}

void DecodingParams::Validate() const {
  if (strategy == DecodingStrategy::kTopK && k < 1) {
    throw Error(Errc::kInvalidArgument, "top-k decoding needs k >= 1");
  }
  if (!(temperature > 0)) {
    throw Error(Errc::kInvalidArgument, "temperature must be positive");
  }
  if (max_new_tokens < 1) {
    throw Error(Errc::kInvalidArgument, "max_new_tokens must be positive");
  }
}

DecodingParams SelectDecoding(TaskKind task,
                              std::optional<DecodingStrategy> override_strategy) {
  DecodingParams params;
  params.strategy = task == TaskKind::kRefinement ? DecodingStrategy::kMultinomial
                                                  : DecodingStrategy::kTopK;
  if (override_strategy) params.strategy = *override_strategy;
  return params;
}

int DefaultMaxNewTokens(int expected_elements) {
  return 6 * std::max(expected_elements, 0) + 16;
}

std::string RequestToJson(const CompletionRequest& request) {
  nlohmann::ordered_json j;
  j["prompt"] = request.prompt;
  j["max_new_tokens"] = request.decoding.max_new_tokens;
  j["decoding"] = {{"strategy", StrategyName(request.decoding.strategy)},
                   {"k", request.decoding.k},
                   {"temperature", request.decoding.temperature}};
  j["stop"] = request.stop;
  return j.dump();
}

CompletionRequest RequestFromJson(std::string_view text) {
  try {
    const auto j = json::parse(text);
    CompletionRequest request;
    request.prompt = j.at("prompt").get<std::string>();
    request.decoding.max_new_tokens = j.at("max_new_tokens").get<int>();
    const auto& decoding = j.at("decoding");
    const auto name = decoding.at("strategy").get<std::string>();
    const auto strategy = ParseStrategy(name);
    if (!strategy) throw Error(Errc::kParseError, "unknown strategy " + name);
    request.decoding.strategy = *strategy;
    request.decoding.k = decoding.at("k").get<int>();
    request.decoding.temperature = decoding.at("temperature").get<double>();
    request.stop = j.value("stop", std::vector<std::string>{});
    return request;
  } catch (const json::exception& e) {
    throw Error(Errc::kParseError, std::string("completion request: ") + e.what());
  }
}

std::string ResponseToJson(std::string_view completion) {
  return json{{"completion", completion}}.dump();
}

std::string CompletionFromResponseJson(std::string_view text) {
  try {
    return json::parse(text).at("completion").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(Errc::kBackendError, std::string("malformed response: ") + e.what());
  }
}

HttpBackend::HttpBackend(BackendEndpoint endpoint)
    : endpoint_(std::move(endpoint)) {
  if (endpoint_.retry.max_attempts < 1) {
    throw Error(Errc::kInvalidArgument, "retry policy needs at least one attempt");
  }
}

std::string HttpBackend::Complete(const CompletionRequest& request) const {
  httplib::Client client(endpoint_.base_url);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(endpoint_.timeout);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(
      endpoint_.timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());
  httplib::Headers headers;
  if (endpoint_.auth_token) {
    headers.emplace("Authorization", "Bearer " + *endpoint_.auth_token);
  }
  const std::string body = RequestToJson(request);

  std::string last_error;
  for (int attempt = 0; attempt < endpoint_.retry.max_attempts; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(endpoint_.retry.backoff * attempt);
    auto result = client.Post(endpoint_.path, headers, body, "application/json");
    if (!result) {
      last_error = httplib::to_string(result.error());
      continue;
    }
    if (result->status < 200 || result->status >= 300) {
      throw Error(Errc::kBackendError, "status " + std::to_string(result->status) +
                                           ": " + result->body);
    }
    return CompletionFromResponseJson(result->body);
  }
  throw Error(Errc::kTimeout, endpoint_.base_url + " unreachable after " +
                                  std::to_string(endpoint_.retry.max_attempts) +
                                  " attempts (" + last_error + ")");
}

MockBackend::MockBackend(CategoryRegistry registry,
                         std::map<std::string, std::string> table,
                         std::uint64_t seed, IqeConfig cfg)
    : registry_(std::move(registry)),
      table_(std::move(table)),
      seed_(seed),
      cfg_(cfg) {}

std::map<std::string, std::string> MockBackend::LoadTable(
    const std::filesystem::path& path) {
  std::map<std::string, std::string> table;
  const std::string text = ReadTextFile(path);
  try {
    if (path.extension() == ".jsonl") {
      for (const auto& line : ReadLines(path)) {
        const auto j = json::parse(line);
        table[j.at("prompt").get<std::string>()] = j.at("completion").get<std::string>();
      }
    } else {
      for (const auto& [prompt, completion] : json::parse(text).items()) {
        table[prompt] = completion.get<std::string>();
      }
    }
  } catch (const json::exception& e) {
    throw Error(Errc::kParseError, path.string() + ": " + e.what());
  }
  return table;
}

std::string MockBackend::Complete(const CompletionRequest& request) const {
  if (const auto it = table_.find(request.prompt); it != table_.end()) {
    return it->second;
  }
  return Synthesize(request.prompt);
}

namespace {

std::uint64_t Fnv1a(std::string_view text, std::uint64_t seed) {
  std::uint64_t hash = 14695981039346656037ull ^ seed;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

Domain GuessDomain(std::string_view text) {
  const std::string lowered = ToLowerAscii(text);
  if (lowered.find("magazine") != std::string::npos) return Domain::kMagazine;
  if (lowered.find("slide") != std::string::npos) return Domain::kSlide;
  if (lowered.find("app ui") != std::string::npos ||
      lowered.find(" ui ") != std::string::npos) {
    return Domain::kAppUi;
  }
  return Domain::kArticle;
}

}  // namespace

std::string MockBackend::Synthesize(std::string_view prompt) const {
  Rng rng(Fnv1a(prompt, seed_));
  ConditionSequence cond;
  try {
    cond = ParseAli(prompt, cfg_);
  } catch (const Error&) {
    cond = {};
    cond.prefix.domain = GuessDomain(prompt);
    static const std::regex kCount(R"(with (\d+) elements)");
    std::cmatch match;
    const std::string text(prompt);
    if (std::regex_search(text.c_str(), match, kCount)) {
      cond.prefix.object_number = std::stoi(match[1].str());
    }
  }
  const Domain domain = cond.prefix.domain;
  const auto* labels = &registry_.Labels(domain);
  static const CategoryRegistry kDefaults = CategoryRegistry::Defaults();
  if (labels->empty()) labels = &kDefaults.Labels(domain);

  int n = cond.prefix.object_number.value_or(0);
  n = std::max<int>(n, static_cast<int>(cond.elements.size()));
  if (n <= 0) n = std::uniform_int_distribution<int>(1, 8)(rng);

  const int limit = cfg_.max_side - 1;
  std::vector<std::string> groups;
  for (int i = 0; i < n; ++i) {
    const Element* known =
        i < static_cast<int>(cond.elements.size()) ? &cond.elements[i] : nullptr;
    auto has = [&](Attribute a) {
      return known && known->status.get(a) != AttributeStatus::kUnknown;
    };
    std::string label;
    if (has(Attribute::kClass) &&
        std::find(labels->begin(), labels->end(), known->label) != labels->end()) {
      label = known->label;
    } else {
      label = (*labels)[std::uniform_int_distribution<std::size_t>(
          0, labels->size() - 1)(rng)];
    }
    auto draw = [&](int lo, int hi) {
      return std::uniform_int_distribution<int>(lo, std::max(lo, hi))(rng);
    };
    const int x = has(Attribute::kX) ? std::min(known->box.x, limit - 1) : draw(0, limit - 64);
    const int y = has(Attribute::kY) ? std::min(known->box.y, limit - 1) : draw(0, limit - 64);
    int w = has(Attribute::kW) ? known->box.w : draw(16, (limit - x) / 2);
    int h = has(Attribute::kH) ? known->box.h : draw(16, (limit - y) / 2);
    w = std::clamp(w, 1, limit - x);
    h = std::clamp(h, 1, limit - y);
    groups.push_back(label + ' ' + std::to_string(Encode(GeomKind::kX, x, cfg_)) +
                     ' ' + std::to_string(Encode(GeomKind::kY, y, cfg_)) + ' ' +
                     std::to_string(Encode(GeomKind::kW, w, cfg_)) + ' ' +
                     std::to_string(Encode(GeomKind::kH, h, cfg_)));
  }
  return JoinStrings(groups, ';');
}

std::string Generate(std::string_view prompt, const DecodingParams& params,
                     const CompletionBackend& backend) {
  params.Validate();
  CompletionRequest request;
  request.prompt = std::string(prompt);
  request.decoding = params;
  std::string completion = backend.Complete(request);
  const auto cut = std::min(completion.find(kEndOfText), completion.find(kPairSeparator));
  if (cut != std::string::npos) completion.resize(cut);
  completion = std::string(Trim(completion));
  if (completion.empty()) throw Error(Errc::kEmptyCompletion, "backend returned nothing");
  return completion;
}

std::vector<GenerationOutcome> GenerateAll(std::span<const CompletionRequest> requests,
                                           const CompletionBackend& backend,
                                           unsigned max_in_flight) {
  std::vector<GenerationOutcome> outcomes(requests.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < requests.size(); i = next++) {
      try {
        outcomes[i].completion =
            Generate(requests[i].prompt, requests[i].decoding, backend);
      } catch (const std::exception& e) {
        outcomes[i].error = e.what();
      }
    }
  };
  const unsigned workers =
      std::max(1u, std::min<unsigned>(max_in_flight, requests.size()));
  if (workers == 1) {
    worker();
    return outcomes;
  }
  std::vector<std::jthread> threads;
  for (unsigned w = 0; w < workers; ++w) threads.emplace_back(worker);
  return outcomes;
}

std::string_view RepairKindName(RepairKind kind) {
  switch (kind) {
    case RepairKind::kDroppedGroup: return "dropped_group";
    case RepairKind::kClampedBox: return "clamped_box";
    case RepairKind::kCountMismatch: return "count_mismatch";
  }
  return "dropped_group";
}

RepairOutcome ValidateAndRepair(std::string_view raw,
                                const CategoryRegistry& registry,
                                Domain expected_domain,
                                std::optional<int> expected_count, bool repair,
                                const IqeConfig& cfg, PageSize page) {
  RepairOutcome out;
  out.layout.domain = expected_domain;
  out.layout.page_w = page.w;
  out.layout.page_h = page.h;
  if (!repair) {
    out.layout = ParseUlr(raw, registry, expected_domain, cfg, page);
    for (std::size_t i = 0; i < out.layout.elements.size(); ++i) {
      const auto& b = out.layout.elements[i].box;
      if (b.w < 1 || b.h < 1 || b.right() > page.w || b.bottom() > page.h) {
        throw Error(Errc::kOutOfPage, "element " + std::to_string(i) +
                                          " does not fit the page");
      }
    }
    return out;
  }

  const auto groups = SplitKeepEmpty(Trim(raw), ';');
  for (std::size_t g = 0; g < groups.size(); ++g) {
    try {
      out.layout.elements.push_back(
          ParseElementGroup(Trim(groups[g]), registry, expected_domain, cfg));
    } catch (const Error& e) {
      out.log.actions.push_back({RepairKind::kDroppedGroup, g, e.what()});
    }
  }
  if (out.layout.elements.empty()) {
    throw Error(Errc::kUnparseable, "no valid element in response");
  }
  for (std::size_t i = 0; i < out.layout.elements.size(); ++i) {
    auto& box = out.layout.elements[i].box;
    const BoundingBox before = box;
    box.x = std::clamp(box.x, 0, page.w - 1);
    box.y = std::clamp(box.y, 0, page.h - 1);
    box.w = std::clamp(box.w, 1, page.w - box.x);
    box.h = std::clamp(box.h, 1, page.h - box.y);
    if (box != before) {
      out.log.actions.push_back(
          {RepairKind::kClampedBox, i,
           "[" + std::to_string(before.x) + "," + std::to_string(before.y) + "," +
               std::to_string(before.w) + "," + std::to_string(before.h) + "] -> [" +
               std::to_string(box.x) + "," + std::to_string(box.y) + "," +
               std::to_string(box.w) + "," + std::to_string(box.h) + "]"});
    }
  }
  if (expected_count &&
      static_cast<int>(out.layout.elements.size()) != *expected_count) {
    out.log.actions.push_back(
        {RepairKind::kCountMismatch, out.layout.elements.size(),
         "expected " + std::to_string(*expected_count) + " elements, got " +
             std::to_string(out.layout.elements.size())});
  }
  return out;
}

}  // namespace unilayout
