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
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unilayout/layout.hpp"

namespace unilayout {

/// (100 / N) * sum_i -log(1 - d_i), where d_i is the smallest gap between
/// element i and any other element along one of the six alignment lines
/// (left, x-center, right, top, y-center, bottom) in page-normalized units.
/// Zero for a single element.
double Alignment(const Layout& layout);

/// (100 / N) * sum_i sum_{j != i} area(b_i intersect b_j) / area(b_i).
double Overlap(const Layout& layout);

/// Intersection over union of two boxes in the same pixel frame.
double Iou(const BoundingBox& a, const BoundingBox& b);

/// Maximum-weight perfect matching on a square weight matrix (Hungarian
/// algorithm). Returns assignment[row] = column.
std::vector<int> MaxWeightAssignment(
    const std::vector<std::vector<double>>& weights);

/// Mean IoU under the optimal same-label matching. Empty when the two label
/// multisets differ. Per label group (in order of first appearance in
/// `generated`) the matched IoUs are summed in generated-element order.
std::optional<double> MaxIou(const Layout& generated, const Layout& reference);

using FeatureVector = std::vector<double>;
using FeatureEmbedding = std::function<FeatureVector(const Layout&)>;

/// Deterministic layout descriptor over `labels` (L entries):
/// label histogram (L), per-label mean of normalized x, y, w, h (4L),
/// per-label standard deviation of the same (4L), element count / 25 (1).
/// Dimension 9L + 1.
FeatureEmbedding GeometricEmbedding(std::vector<std::string> labels);

struct GaussianStats {
  std::size_t dim = 0;
  std::vector<double> mean;
  std::vector<double> covariance;  // row-major dim x dim
};

/// Shrinkage added to each covariance diagonal.
inline constexpr double kCovarianceShrinkage = 1e-6;

/// Sample mean and unbiased covariance plus kCovarianceShrinkage * I.
/// Needs at least two vectors of equal dimension.
GaussianStats FitGaussian(std::span<const FeatureVector> features);

/// ||mu1 - mu2||^2 + Tr(S1 + S2 - 2 (S1^1/2 S2 S1^1/2)^1/2), clamped at 0.
double FrechetDistance(const GaussianStats& a, const GaussianStats& b);

double Fid(std::span<const FeatureVector> generated,
           std::span<const FeatureVector> reference);

struct MetricReport {
  double fid = 0;
  double alignment = 0;  // x100
  double overlap = 0;    // x100
  double max_iou = 0;    // mean over evaluated pairs
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
};

/// Pairs generated[i] with reference[i]. Alignment and Overlap average over
/// the generated layouts; FID compares the two embedded sets.
MetricReport Evaluate(std::span<const Layout> generated,
                      std::span<const Layout> reference,
                      const FeatureEmbedding& embedding);

/// As above with precomputed feature vectors for FID.
MetricReport Evaluate(std::span<const Layout> generated,
                      std::span<const Layout> reference,
                      std::span<const FeatureVector> generated_features,
                      std::span<const FeatureVector> reference_features);

std::string ToJson(const MetricReport& report);
MetricReport MetricReportFromJson(std::string_view text);

enum class MetricKind { kFid = 0, kAlignment, kOverlap, kMaxIou };

inline constexpr std::array<MetricKind, 4> kAllMetrics = {
    MetricKind::kFid, MetricKind::kAlignment, MetricKind::kOverlap,
    MetricKind::kMaxIou};

std::string_view MetricName(MetricKind metric);

struct MethodMetrics {
  std::string name;
  // Indexed by MetricKind; empty when the method does not report it.
  std::array<std::optional<double>, 4> values;
};

enum class TieRule {
  kMeanRank,  // tied methods share the average of their positions
  kMinRank,   // tied methods all take the best position ("1224")
};

/// Ranks each metric among the methods reporting it (ascending for FID,
/// Alignment and Overlap; descending for Max IOU) and averages each method's
/// ranks over the metrics it reports. kInconsistentTable with fewer than two
/// methods or a method reporting nothing.
std::vector<double> RankingScore(std::span<const MethodMetrics> methods,
                                 TieRule ties = TieRule::kMeanRank);

}  // namespace unilayout
