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
#include "unilayout/task_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <exception>
#include <thread>

#include "unilayout/error.hpp"

namespace unilayout {

namespace {

constexpr std::array<std::string_view, 11> kTaskNames = {
    "completion", "gen-t",       "gen-ts", "relation",
    "refinement", "gen-u",       "gen-up", "comp-refine",
    "gen-tps",    "gen-ps-refine", "gen-arb-refine"};

constexpr int kMaxMaskRetries = 64;
constexpr int kMaxLayoutRetries = 16;

bool Coin(Rng& rng, double p = 0.5) {
  return std::bernoulli_distribution(p)(rng);
}

// Random subset of [0, n) whose size is uniform in [lo, hi].
std::vector<bool> RandomSubset(std::size_t n, std::size_t lo, std::size_t hi,
                               Rng& rng) {
  const auto k = std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> chosen(n, false);
  for (std::size_t i = 0; i < k; ++i) chosen[order[i]] = true;
  return chosen;
}

bool HasCondition(const std::vector<StatusMask>& statuses) {
  return std::any_of(statuses.begin(), statuses.end(), [](const StatusMask& m) {
    return m.Count(AttributeStatus::kUnknown) < 5;
  });
}

bool HasNoisy(const std::vector<StatusMask>& statuses) {
  return std::any_of(statuses.begin(), statuses.end(), [](const StatusMask& m) {
    return m.Count(AttributeStatus::kNoisy) > 0;
  });
}

std::vector<StatusMask> CompletionMask(std::size_t n, AttributeStatus geometry,
                                       Rng& rng) {
  if (n < 2) {
    throw Error(Errc::kDegenerateMask,
                "completion needs at least two elements");
  }
  const auto chosen = RandomSubset(n, 1, n - 1, rng);
  std::vector<StatusMask> statuses(n, StatusMask::AllUnknown());
  for (std::size_t i = 0; i < n; ++i) {
    if (!chosen[i]) continue;
    statuses[i].set(Attribute::kClass, AttributeStatus::kKnown);
    for (Attribute a : kGeometricAttributes) statuses[i].set(a, geometry);
  }
  return statuses;
}

// Draws masks until `accept` holds.
template <typename Draw, typename Accept>
std::vector<StatusMask> Resample(Draw draw, Accept accept, TaskKind task) {
  for (int attempt = 0; attempt < kMaxMaskRetries; ++attempt) {
    auto statuses = draw();
    if (accept(statuses)) return statuses;
  }
  throw Error(Errc::kDegenerateMask,
              "no usable condition for " + std::string(TaskName(task)));
}

}  // namespace

std::string_view TaskName(TaskKind task) {
  return kTaskNames[static_cast<std::size_t>(task)];
}

std::optional<TaskKind> ParseTask(std::string_view name) {
  const std::string lowered = ToLowerAscii(name);
  for (TaskKind task : kAllTasks) {
    if (TaskName(task) == lowered) return task;
  }
  return std::nullopt;
}

bool IsRefinementTask(TaskKind task) {
  return task == TaskKind::kRefinement || task == TaskKind::kCompRefine ||
         task == TaskKind::kGenPSRefine || task == TaskKind::kGenArbRefine;
}

void MixtureSchedule::Validate() const {
  const double shares[] = {mixed_no_refine, mixed_with_refine, refinement,
                           gen_u, gen_up};
  double total = 0;
  for (double s : shares) {
    if (!(s >= 0)) throw Error(Errc::kInvalidArgument, "task share must be >= 0");
    total += s;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(Errc::kInvalidArgument, "task shares must sum to 1");
  }
  if (relation_rate < 0 || relation_rate > 1) {
    throw Error(Errc::kInvalidArgument, "relation rate must lie in [0, 1]");
  }
  double weight_total = 0;
  for (double w : domain_weights) {
    if (!(w >= 0)) throw Error(Errc::kInvalidArgument, "domain weight must be >= 0");
    weight_total += w;
  }
  if (!(weight_total > 0)) {
    throw Error(Errc::kInvalidArgument, "at least one domain weight must be > 0");
  }
}

Rng MakeRng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

TaskCondition AssignStatuses(const Layout& layout, TaskKind task, Rng& rng) {
  const std::size_t n = layout.elements.size();
  if (n == 0) throw Error(Errc::kDegenerateMask, "layout has no elements");

  TaskCondition cond;
  cond.prefix.domain = layout.domain;
  cond.prefix.refine =
      IsRefinementTask(task) ? RefineFlag::kRefine : RefineFlag::kUnrefine;
  if (task != TaskKind::kGenU && task != TaskKind::kGenUP) {
    cond.prefix.object_number = static_cast<int>(n);
    cond.prefix.column_number = layout.column_count;
  }

  const StatusMask unknown = StatusMask::AllUnknown();
  switch (task) {
    case TaskKind::kCompletion:
      cond.statuses = CompletionMask(n, AttributeStatus::kKnown, rng);
      break;
    case TaskKind::kCompRefine:
      cond.statuses = CompletionMask(n, AttributeStatus::kNoisy, rng);
      break;
    case TaskKind::kGenT:
    case TaskKind::kGenTS: {
      const auto chosen = RandomSubset(n, 1, n, rng);
      cond.statuses.assign(n, unknown);
      for (std::size_t i = 0; i < n; ++i) {
        if (!chosen[i]) continue;
        cond.statuses[i].set(Attribute::kClass, AttributeStatus::kKnown);
        if (task == TaskKind::kGenTS) {
          cond.statuses[i].set(Attribute::kW, AttributeStatus::kKnown);
          cond.statuses[i].set(Attribute::kH, AttributeStatus::kKnown);
        }
      }
      break;
    }
    case TaskKind::kRelation: {
      cond.statuses.assign(n, unknown);
      for (auto& s : cond.statuses) {
        s.set(Attribute::kClass, AttributeStatus::kKnown);
      }
      const auto candidates = ExtractRelations(layout);
      cond.relations = SampleRelations(candidates, rng);
      break;
    }
    case TaskKind::kRefinement: {
      StatusMask noisy;
      for (Attribute a : kGeometricAttributes) noisy.set(a, AttributeStatus::kNoisy);
      cond.statuses.assign(n, noisy);
      break;
    }
    case TaskKind::kGenU:
      cond.statuses.assign(n, unknown);
      break;
    case TaskKind::kGenUP:
      cond.statuses.assign(n, unknown);
      cond.nl_template = std::uniform_int_distribution<int>(1, kNlTemplateCount)(rng);
      break;
    case TaskKind::kGenTPS:
      cond.statuses = Resample(
          [&] {
            std::vector<StatusMask> statuses(n, unknown);
            for (auto& s : statuses) {
              if (Coin(rng)) s.set(Attribute::kClass, AttributeStatus::kKnown);
              for (Attribute a : kGeometricAttributes) {
                if (Coin(rng)) s.set(a, AttributeStatus::kKnown);
              }
            }
            return statuses;
          },
          HasCondition, task);
      break;
    case TaskKind::kGenPSRefine:
      cond.statuses = Resample(
          [&] {
            std::vector<StatusMask> statuses(n, unknown);
            for (auto& s : statuses) {
              for (Attribute a : kGeometricAttributes) {
                if (!Coin(rng)) continue;
                s.set(a, Coin(rng) ? AttributeStatus::kNoisy
                                   : AttributeStatus::kKnown);
              }
            }
            return statuses;
          },
          HasNoisy, task);
      break;
    case TaskKind::kGenArbRefine:
      cond.statuses = Resample(
          [&] {
            std::vector<StatusMask> statuses(n, unknown);
            for (auto& s : statuses) {
              if (Coin(rng)) s.set(Attribute::kClass, AttributeStatus::kKnown);
              for (Attribute a : kGeometricAttributes) {
                if (!Coin(rng)) continue;
                s.set(a, Coin(rng) ? AttributeStatus::kNoisy
                                   : AttributeStatus::kKnown);
              }
            }
            return statuses;
          },
          HasCondition, task);
      break;
  }
  return cond;
}

int PerturbValue(int value, const NoiseModel& noise, Rng& rng,
                 const IqeConfig& cfg) {
  double eps = noise.mean;
  if (noise.stddev > 0) {
    eps = std::normal_distribution<double>(noise.mean, noise.stddev)(rng);
  }
  const double side = cfg.max_side;
  const double jittered = (value / side + eps) * side;
  return Quantize(std::max(jittered, 0.0), cfg.max_side - 1);
}

Layout Perturb(const Layout& layout, const NoiseModel& noise, Rng& rng,
               const IqeConfig& cfg) {
  Layout out = layout;
  for (auto& e : out.elements) {
    for (Attribute a : kGeometricAttributes) {
      if (e.status.get(a) != AttributeStatus::kNoisy) continue;
      e.SetValue(a, PerturbValue(e.Value(a), noise, rng, cfg));
    }
  }
  return out;
}

std::vector<RelationConstraint> ExtractRelations(const Layout& layout) {
  std::vector<RelationConstraint> out;
  const int n = static_cast<int>(layout.elements.size());
  for (int i = 0; i < n; ++i) {
    const auto& a = layout.elements[i].box;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto& b = layout.elements[j].box;
      bool directional = false;
      auto add = [&](Predicate p) { out.push_back({i, j, p}); };
      if (a.bottom() <= b.y) { add(Predicate::kTop); directional = true; }
      if (b.bottom() <= a.y) { add(Predicate::kBottom); directional = true; }
      if (a.right() <= b.x) { add(Predicate::kLeft); directional = true; }
      if (b.right() <= a.x) { add(Predicate::kRight); directional = true; }
      const int iw = std::min(a.right(), b.right()) - std::max(a.x, b.x);
      const int ih = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
      if (!directional && iw > 0 && ih > 0) add(Predicate::kOverlapped);

      const double area_a = static_cast<double>(a.area());
      const double area_b = static_cast<double>(b.area());
      if (area_a < 0.9 * area_b) {
        add(Predicate::kSmaller);
      } else if (area_a > area_b / 0.9) {
        add(Predicate::kLarger);
      } else {
        add(Predicate::kEqual);
      }
    }
  }
  return out;
}

std::vector<RelationConstraint> SampleRelations(
    std::span<const RelationConstraint> candidates, Rng& rng,
    std::size_t count) {
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(std::min(count, order.size()));
  std::sort(order.begin(), order.end());
  std::vector<RelationConstraint> out;
  for (std::size_t index : order) out.push_back(candidates[index]);
  return out;
}

ConditionedSample MakeSample(const Layout& layout, TaskKind task, Rng& rng,
                             const NoiseModel& noise, bool attach_relations,
                             const IqeConfig& cfg) {
  TaskCondition cond = AssignStatuses(layout, task, rng);
  const bool unconditional = task == TaskKind::kGenU || task == TaskKind::kGenUP;
  if (attach_relations && !unconditional && cond.relations.empty()) {
    const auto candidates = ExtractRelations(layout);
    cond.relations = SampleRelations(candidates, rng);
  }

  Layout conditioned = layout;
  for (std::size_t i = 0; i < conditioned.elements.size(); ++i) {
    conditioned.elements[i].status = cond.statuses[i];
  }
  conditioned = Perturb(conditioned, noise, rng, cfg);

  ConditionedSample sample;
  sample.task = task;
  sample.domain = layout.domain;
  sample.layout_id = layout.id;
  sample.mask_record = cond.statuses;
  sample.has_relations = !cond.relations.empty();
  if (task == TaskKind::kGenUP) {
    sample.ali = BuildTextAli(
        RenderNlPrompt(*cond.nl_template, layout.domain,
                       static_cast<int>(layout.elements.size()),
                       layout.column_count),
        layout.domain);
  } else if (task == TaskKind::kGenU) {
    sample.ali = BuildAli(cond.prefix, cond.relations, {}, cfg);
  } else {
    sample.ali = BuildAli(cond.prefix, cond.relations, conditioned.elements, cfg);
  }

  Layout truth = layout;
  for (auto& e : truth.elements) e.status = StatusMask::AllKnown();
  sample.ulr = BuildUlr(truth, cfg);
  return sample;
}

TrainingRecord ToTrainingRecord(const ConditionedSample& sample) {
  return {sample.ali.text, sample.ulr.text, std::string(TaskName(sample.task)),
          std::string(DomainName(sample.domain))};
}

namespace {

TaskKind DrawTask(const MixtureSchedule& schedule, Rng& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double edge = schedule.mixed_no_refine;
  if (u < edge) return TaskKind::kGenTPS;
  edge += schedule.mixed_with_refine;
  if (u < edge) return TaskKind::kGenArbRefine;
  edge += schedule.refinement;
  if (u < edge) return TaskKind::kRefinement;
  edge += schedule.gen_u;
  if (u < edge) return TaskKind::kGenU;
  return TaskKind::kGenUP;
}

ConditionedSample Draw(const Corpora& corpora, const MixtureSchedule& schedule,
                       std::uint64_t seed, std::size_t index,
                       const BatchOptions& options) {
  Rng rng = MakeRng(seed, index);
  std::discrete_distribution<int> pick_domain(schedule.domain_weights.begin(),
                                              schedule.domain_weights.end());
  const auto& corpus = corpora[static_cast<std::size_t>(pick_domain(rng))];
  const TaskKind task = options.only_task ? *options.only_task : DrawTask(schedule, rng);
  const bool mixed = task == TaskKind::kGenTPS || task == TaskKind::kGenArbRefine;
  const bool relations = !options.only_task && mixed && Coin(rng, schedule.relation_rate);

  std::uniform_int_distribution<std::size_t> pick_layout(0, corpus.size() - 1);
  for (int attempt = 0;; ++attempt) {
    const Layout& layout = corpus[pick_layout(rng)];
    try {
      return MakeSample(layout, task, rng, options.noise, relations, options.iqe);
    } catch (const Error& e) {
      if (e.code() != Errc::kDegenerateMask || attempt + 1 >= kMaxLayoutRetries) {
        throw;
      }
    }
  }
}

}  // namespace

std::vector<ConditionedSample> SampleBatch(const Corpora& corpora,
                                           const MixtureSchedule& schedule,
                                           std::uint64_t seed, std::size_t n,
                                           const BatchOptions& options) {
  schedule.Validate();
  for (Domain d : kAllDomains) {
    const auto i = static_cast<std::size_t>(d);
    if (schedule.domain_weights[i] > 0 && corpora[i].empty()) {
      throw Error(Errc::kEmptyCorpus,
                  "no training layouts for " + std::string(DomainName(d)));
    }
  }
  std::vector<ConditionedSample> samples(n);
  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, n ? n : 1));
  auto fill = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      samples[i] = Draw(corpora, schedule, seed, i, options);
    }
  };
  if (workers == 1) {
    fill(0, n);
    return samples;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> threads;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(n, w * chunk);
      const std::size_t end = std::min(n, begin + chunk);
      threads.emplace_back([&, w, begin, end] {
        try {
          fill(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
  return samples;
}

}  // namespace unilayout
