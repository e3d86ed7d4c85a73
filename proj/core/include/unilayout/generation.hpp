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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unilayout/instruction.hpp"
#include "unilayout/iqe.hpp"
#include "unilayout/layout.hpp"
#include "unilayout/task_sampler.hpp"

namespace unilayout {

enum class DecodingStrategy { kGreedy, kTopK, kMultinomial };

std::string_view StrategyName(DecodingStrategy strategy);
std::optional<DecodingStrategy> ParseStrategy(std::string_view name);

struct DecodingParams {
  DecodingStrategy strategy = DecodingStrategy::kTopK;
  int k = 50;
  double temperature = 1.0;
  int max_new_tokens = 256;

  /// kInvalidArgument for k < 1 under top-k, temperature <= 0, or a
  /// non-positive token budget.
  void Validate() const;
};

/// Refinement decodes by plain multinomial sampling; every other task uses
/// top-k (k = 50, temperature 1). `override_strategy` replaces either.
DecodingParams SelectDecoding(
    TaskKind task,
    std::optional<DecodingStrategy> override_strategy = std::nullopt);

/// Token budget when a layout of `expected_elements` is expected.
int DefaultMaxNewTokens(int expected_elements);

// Wire protocol, JSON over HTTP POST:
//   request  {"prompt": str, "max_new_tokens": int,
//             "decoding": {"strategy": "greedy"|"topk"|"multinomial",
//                          "k": int, "temperature": float},
//             "stop": ["#"]}
//   response {"completion": str}
struct CompletionRequest {
  std::string prompt;
  DecodingParams decoding;
  std::vector<std::string> stop = {"#"};
};

std::string RequestToJson(const CompletionRequest& request);
CompletionRequest RequestFromJson(std::string_view text);
std::string ResponseToJson(std::string_view completion);
/// kBackendError when the body is not a valid response object.
std::string CompletionFromResponseJson(std::string_view text);

class CompletionBackend {
 public:
  virtual ~CompletionBackend() = default;
  /// Must be safe to call concurrently.
  virtual std::string Complete(const CompletionRequest& request) const = 0;
};

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds backoff{200};
};

inline constexpr std::string_view kCompletionPath = "/v1/completions";
inline constexpr std::string_view kAuthTokenEnv = "UNILAYOUT_API_TOKEN";

struct BackendEndpoint {
  std::string base_url;  // scheme://host:port
  std::string path = std::string(kCompletionPath);
  std::chrono::milliseconds timeout{30000};
  RetryPolicy retry;
  std::optional<std::string> auth_token;
};

// Retries transport failures only; a non-2xx status raises kBackendError
// and exhausting the retries raises kTimeout.
class HttpBackend final : public CompletionBackend {
 public:
  explicit HttpBackend(BackendEndpoint endpoint);
  std::string Complete(const CompletionRequest& request) const override;

 private:
  BackendEndpoint endpoint_;
};

// Offline backend. Looks the prompt up in a table first; otherwise
// synthesizes a well-formed response from the instruction: known labels and
// geometry are echoed, the rest is drawn from a generator seeded by the
// prompt text, and labels come from the requested domain.
class MockBackend final : public CompletionBackend {
 public:
  explicit MockBackend(CategoryRegistry registry,
                       std::map<std::string, std::string> table = {},
                       std::uint64_t seed = 0, IqeConfig cfg = {});

  /// Table file: JSON object {prompt: completion} or JSON Lines of
  /// {"prompt": str, "completion": str}.
  static std::map<std::string, std::string> LoadTable(
      const std::filesystem::path& path);

  std::string Complete(const CompletionRequest& request) const override;
  std::string Synthesize(std::string_view prompt) const;

 private:
  CategoryRegistry registry_;
  std::map<std::string, std::string> table_;
  std::uint64_t seed_;
  IqeConfig cfg_;
};

inline constexpr std::string_view kEndOfText = "<|endoftext|>";

/// Sends the instruction and returns the completion cut at the first
/// end-of-text marker or '#', trimmed. kEmptyCompletion if nothing remains.
std::string Generate(std::string_view prompt, const DecodingParams& params,
                     const CompletionBackend& backend);

struct GenerationOutcome {
  std::optional<std::string> completion;
  std::optional<std::string> error;
};

/// Runs every request with at most `max_in_flight` outstanding; results are
/// returned in request order.
std::vector<GenerationOutcome> GenerateAll(
    std::span<const CompletionRequest> requests,
    const CompletionBackend& backend, unsigned max_in_flight = 4);

enum class RepairKind { kDroppedGroup, kClampedBox, kCountMismatch };

std::string_view RepairKindName(RepairKind kind);

struct RepairAction {
  RepairKind kind;
  std::size_t index;  // group index for drops, element index otherwise
  std::string detail;
};

struct RepairLog {
  std::vector<RepairAction> actions;
  bool empty() const { return actions.empty(); }
};

struct RepairOutcome {
  Layout layout;
  RepairLog log;
};

/// Parses a response and, with `repair`, drops malformed element groups,
/// clamps boxes into the page and flags a count different from
/// `expected_count`, logging each intervention. Without `repair` any defect
/// raises. kUnparseable when no element survives.
RepairOutcome ValidateAndRepair(std::string_view raw,
                                const CategoryRegistry& registry,
                                Domain expected_domain,
                                std::optional<int> expected_count,
                                bool repair = true, const IqeConfig& cfg = {},
                                PageSize page = {});

}  // namespace unilayout
