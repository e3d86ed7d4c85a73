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

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "unilayout/instruction.hpp"
#include "unilayout/iqe.hpp"
#include "unilayout/layout.hpp"

namespace unilayout {

enum class TaskKind {
  kCompletion,
  kGenT,
  kGenTS,
  kRelation,
  kRefinement,
  kGenU,
  kGenUP,
  kCompRefine,
  kGenTPS,
  kGenPSRefine,
  kGenArbRefine,
};

inline constexpr std::array<TaskKind, 11> kAllTasks = {
    TaskKind::kCompletion,  TaskKind::kGenT,        TaskKind::kGenTS,
    TaskKind::kRelation,    TaskKind::kRefinement,  TaskKind::kGenU,
    TaskKind::kGenUP,       TaskKind::kCompRefine,  TaskKind::kGenTPS,
    TaskKind::kGenPSRefine, TaskKind::kGenArbRefine};

/// Flag-style names: "completion", "gen-t", ..., "gen-arb-refine".
std::string_view TaskName(TaskKind task);
std::optional<TaskKind> ParseTask(std::string_view name);

/// Tasks whose instructions carry the "refine" flag.
bool IsRefinementTask(TaskKind task);

/// Gaussian jitter applied in page-normalized units.
struct NoiseModel {
  double mean = 0.0;
  double stddev = 0.01;
};

// Training mixture. Mixed generation without refinement is realized as
// Gen-TPS draws and mixed generation with refinement as Gen-Arb-Refine
// draws; relation constraints are attached to a share of both.
struct MixtureSchedule {
  double mixed_no_refine = 0.45;
  double mixed_with_refine = 0.30;
  double refinement = 0.10;
  double gen_u = 0.075;
  double gen_up = 0.075;
  double relation_rate = 0.20;
  // article : App UI : magazine : slide
  std::array<double, 4> domain_weights = {1, 7, 95, 111};

  /// kInvalidArgument unless task shares sum to 1, no share or weight is
  /// negative and some domain weight is positive.
  void Validate() const;
};

using Rng = std::mt19937_64;

/// Generator for draw `index` of a run seeded with `seed`. Draws are
/// independent, so any partition of the index space reproduces a run.
Rng MakeRng(std::uint64_t seed, std::uint64_t index);

struct TaskCondition {
  PrefixPrompt prefix;
  std::vector<StatusMask> statuses;  // one per layout element
  std::vector<RelationConstraint> relations;
  std::optional<int> nl_template;  // Gen-UP only
};

/// Per-task status assignment over a fully known layout. Conditional tasks
/// that draw an empty condition are resampled; kDegenerateMask is raised when
/// the task cannot be realized (Completion on a single element) or retries
/// run out.
TaskCondition AssignStatuses(const Layout& layout, TaskKind task, Rng& rng);

/// value' = clamp(round((value / max_side + eps) * max_side)), eps ~ N(mean,
/// stddev^2), clamped to [0, max_side - 1].
int PerturbValue(int value, const NoiseModel& noise, Rng& rng,
                 const IqeConfig& cfg = {});

/// Jitters every geometric attribute whose status is Noisy.
Layout Perturb(const Layout& layout, const NoiseModel& noise, Rng& rng,
               const IqeConfig& cfg = {});

/// Location and size relations for every ordered element pair.
std::vector<RelationConstraint> ExtractRelations(const Layout& layout);

/// Up to `count` distinct constraints, uniformly without replacement.
std::vector<RelationConstraint> SampleRelations(
    std::span<const RelationConstraint> candidates, Rng& rng,
    std::size_t count = 2);

struct ConditionedSample {
  TaskKind task = TaskKind::kGenU;
  Domain domain = Domain::kArticle;
  std::string layout_id;
  AliString ali;
  UlrString ulr;  // always the clean ground truth
  std::vector<StatusMask> mask_record;
  bool has_relations = false;
};

/// Builds one (instruction, response) pair. With `attach_relations`, two
/// sampled relations are added for conditional tasks that do not already
/// carry them.
ConditionedSample MakeSample(const Layout& layout, TaskKind task, Rng& rng,
                             const NoiseModel& noise = {},
                             bool attach_relations = false,
                             const IqeConfig& cfg = {});

TrainingRecord ToTrainingRecord(const ConditionedSample& sample);

/// Training layouts per domain, indexed by Domain.
using Corpora = std::array<std::vector<Layout>, 4>;

struct BatchOptions {
  std::optional<TaskKind> only_task;
  NoiseModel noise;
  unsigned workers = 1;
  IqeConfig iqe;
};

/// Draws `n` samples: domain by the schedule's weights, a layout uniformly
/// from that domain, then a task by the schedule. Deterministic in `seed`
/// regardless of `options.workers`. Throws kEmptyCorpus when a domain with
/// positive weight has no layouts.
std::vector<ConditionedSample> SampleBatch(const Corpora& corpora,
                                           const MixtureSchedule& schedule,
                                           std::uint64_t seed, std::size_t n,
                                           const BatchOptions& options = {});

}  // namespace unilayout
