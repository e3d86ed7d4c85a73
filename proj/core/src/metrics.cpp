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
#include "unilayout/metrics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "json.hpp"
#include "unilayout/error.hpp"

namespace unilayout {

namespace {

struct UnitBox {
  double left, top, right, bottom;
  double xc() const { return (left + right) / 2; }
  double yc() const { return (top + bottom) / 2; }
};

UnitBox Normalize(const BoundingBox& b, int page_w, int page_h) {
  return {double(b.x) / page_w, double(b.y) / page_h,
          double(b.right()) / page_w, double(b.bottom()) / page_h};
}

std::int64_t IntersectionArea(const BoundingBox& a, const BoundingBox& b) {
  const std::int64_t iw = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const std::int64_t ih = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  return (iw > 0 && ih > 0) ? iw * ih : 0;
}

}  // namespace

double Alignment(const Layout& layout) {
  const std::size_t n = layout.elements.size();
  if (n < 2) return 0.0;
  std::vector<std::array<double, 6>> lines;
  lines.reserve(n);
  for (const auto& e : layout.elements) {
    const auto b = Normalize(e.box, layout.page_w, layout.page_h);
    lines.push_back({b.left, b.xc(), b.right, b.top, b.yc(), b.bottom});
  }
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      for (std::size_t t = 0; t < 6; ++t) {
        gap = std::min(gap, std::abs(lines[i][t] - lines[j][t]));
      }
    }
    gap = std::min(gap, 1.0 - 1e-12);
    total += -std::log(1.0 - gap);
  }
  return 100.0 * total / static_cast<double>(n);
}

double Overlap(const Layout& layout) {
  const std::size_t n = layout.elements.size();
  if (n < 2) return 0.0;
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = layout.elements[i].box;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      total += double(IntersectionArea(a, layout.elements[j].box)) / double(a.area());
    }
  }
  return 100.0 * total / static_cast<double>(n);
}

double Iou(const BoundingBox& a, const BoundingBox& b) {
  const std::int64_t inter = IntersectionArea(a, b);
  const std::int64_t uni = a.area() + b.area() - inter;
  return uni > 0 ? double(inter) / double(uni) : 0.0;
}

std::vector<int> MaxWeightAssignment(
    const std::vector<std::vector<double>>& weights) {
  const int n = static_cast<int>(weights.size());
  for (const auto& row : weights) {
    if (static_cast<int>(row.size()) != n) {
      throw Error(Errc::kDimensionMismatch, "assignment matrix must be square");
    }
  }
  if (n == 0) return {};
  // Potentials formulation on cost = -weight; rows and columns are 1-based
  // with index 0 as the virtual free column.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> owner(n + 1, 0), way(n + 1, 0);
  for (int row = 1; row <= n; ++row) {
    owner[0] = row;
    int col0 = 0;
    std::vector<double> min_slack(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[col0] = true;
      const int row0 = owner[col0];
      double delta = inf;
      int col1 = 0;
      for (int col = 1; col <= n; ++col) {
        if (used[col]) continue;
        const double cur = -weights[row0 - 1][col - 1] - u[row0] - v[col];
        if (cur < min_slack[col]) {
          min_slack[col] = cur;
          way[col] = col0;
        }
        if (min_slack[col] < delta) {
          delta = min_slack[col];
          col1 = col;
        }
      }
      for (int col = 0; col <= n; ++col) {
        if (used[col]) {
          u[owner[col]] += delta;
          v[col] -= delta;
        } else {
          min_slack[col] -= delta;
        }
      }
      col0 = col1;
    } while (owner[col0] != 0);
    do {
      const int col1 = way[col0];
      owner[col0] = owner[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<int> assignment(n, -1);
  for (int col = 1; col <= n; ++col) assignment[owner[col] - 1] = col - 1;
  return assignment;
}

std::optional<double> MaxIou(const Layout& generated, const Layout& reference) {
  const std::size_t n = generated.elements.size();
  if (n == 0 || n != reference.elements.size()) return std::nullopt;

  std::vector<std::string> order;  // labels by first appearance in generated
  for (const auto& e : generated.elements) {
    if (std::find(order.begin(), order.end(), e.label) == order.end()) {
      order.push_back(e.label);
    }
  }
  double total = 0;
  std::size_t matched = 0;
  for (const auto& label : order) {
    std::vector<std::size_t> gen_idx, ref_idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (generated.elements[i].label == label) gen_idx.push_back(i);
      if (reference.elements[i].label == label) ref_idx.push_back(i);
    }
    if (gen_idx.size() != ref_idx.size()) return std::nullopt;
    std::vector<std::vector<double>> iou(gen_idx.size(),
                                         std::vector<double>(ref_idx.size()));
    for (std::size_t a = 0; a < gen_idx.size(); ++a) {
      for (std::size_t b = 0; b < ref_idx.size(); ++b) {
        iou[a][b] = Iou(generated.elements[gen_idx[a]].box,
                        reference.elements[ref_idx[b]].box);
      }
    }
    const auto assignment = MaxWeightAssignment(iou);
    double group = 0;
    for (std::size_t a = 0; a < assignment.size(); ++a) group += iou[a][assignment[a]];
    total += group;
    matched += gen_idx.size();
  }
  if (matched != n) return std::nullopt;
  return total / static_cast<double>(n);
}

FeatureEmbedding GeometricEmbedding(std::vector<std::string> labels) {
  return [labels = std::move(labels)](const Layout& layout) {
    const std::size_t l = labels.size();
    FeatureVector out(9 * l + 1, 0.0);
    std::vector<std::array<double, 4>> sum(l), sum_sq(l);
    std::vector<double> count(l, 0.0);
    for (const auto& e : layout.elements) {
      const auto it = std::find(labels.begin(), labels.end(), e.label);
      if (it == labels.end()) continue;
      const auto k = static_cast<std::size_t>(it - labels.begin());
      const std::array<double, 4> g = {
          double(e.box.x) / layout.page_w, double(e.box.y) / layout.page_h,
          double(e.box.w) / layout.page_w, double(e.box.h) / layout.page_h};
      count[k] += 1;
      for (std::size_t a = 0; a < 4; ++a) {
        sum[k][a] += g[a];
        sum_sq[k][a] += g[a] * g[a];
      }
    }
    const double n = std::max<double>(1.0, layout.elements.size());
    for (std::size_t k = 0; k < l; ++k) {
      out[k] = count[k] / n;
      if (count[k] == 0) continue;
      for (std::size_t a = 0; a < 4; ++a) {
        const double mean = sum[k][a] / count[k];
        const double var = std::max(0.0, sum_sq[k][a] / count[k] - mean * mean);
        out[l + 4 * k + a] = mean;
        out[5 * l + 4 * k + a] = std::sqrt(var);
      }
    }
    out[9 * l] = layout.elements.size() / 25.0;
    return out;
  };
}

GaussianStats FitGaussian(std::span<const FeatureVector> features) {
  if (features.size() < 2) {
    throw Error(Errc::kDegenerateSet, "need at least two feature vectors");
  }
  const std::size_t d = features.front().size();
  if (d == 0) throw Error(Errc::kDegenerateSet, "empty feature vectors");
  const double n = static_cast<double>(features.size());

  // Two passes in input order: means, then centered products.
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  for (const auto& f : features) {
    if (f.size() != d) {
      throw Error(Errc::kDimensionMismatch, "feature vectors differ in length");
    }
    mean += Eigen::Map<const Eigen::VectorXd>(f.data(), d);
  }
  mean /= n;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  for (const auto& f : features) {
    const Eigen::VectorXd centered =
        Eigen::Map<const Eigen::VectorXd>(f.data(), d) - mean;
    cov.selfadjointView<Eigen::Lower>().rankUpdate(centered);
  }
  cov = cov.selfadjointView<Eigen::Lower>();
  cov /= (n - 1.0);
  cov.diagonal().array() += kCovarianceShrinkage;

  GaussianStats stats;
  stats.dim = d;
  stats.mean.assign(mean.data(), mean.data() + d);
  stats.covariance.resize(d * d);
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      stats.covariance.data(), d, d) = cov;
  return stats;
}

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::MatrixXd SymmetricSqrt(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  const Eigen::VectorXd roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().transpose();
}

}  // namespace

double FrechetDistance(const GaussianStats& a, const GaussianStats& b) {
  if (a.dim != b.dim) {
    throw Error(Errc::kDimensionMismatch,
                "feature dimensions " + std::to_string(a.dim) + " and " +
                    std::to_string(b.dim));
  }
  const auto d = static_cast<Eigen::Index>(a.dim);
  const Eigen::Map<const Eigen::VectorXd> mu1(a.mean.data(), d);
  const Eigen::Map<const Eigen::VectorXd> mu2(b.mean.data(), d);
  const Eigen::MatrixXd s1 = Eigen::Map<const RowMajor>(a.covariance.data(), d, d);
  const Eigen::MatrixXd s2 = Eigen::Map<const RowMajor>(b.covariance.data(), d, d);

  const Eigen::MatrixXd root1 = SymmetricSqrt(s1);
  Eigen::MatrixXd inner = root1 * s2 * root1;
  inner = (inner + inner.transpose()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(inner, Eigen::EigenvaluesOnly);
  const double trace_root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();

  const double value =
      (mu1 - mu2).squaredNorm() + s1.trace() + s2.trace() - 2.0 * trace_root;
  return std::max(0.0, value);
}

double Fid(std::span<const FeatureVector> generated,
           std::span<const FeatureVector> reference) {
  return FrechetDistance(FitGaussian(generated), FitGaussian(reference));
}

MetricReport Evaluate(std::span<const Layout> generated,
                      std::span<const Layout> reference,
                      std::span<const FeatureVector> generated_features,
                      std::span<const FeatureVector> reference_features) {
  if (generated.size() != reference.size()) {
    throw Error(Errc::kDimensionMismatch, "generated and reference counts differ");
  }
  MetricReport report;
  double iou_sum = 0;
  for (std::size_t i = 0; i < generated.size(); ++i) {
    report.alignment += Alignment(generated[i]);
    report.overlap += Overlap(generated[i]);
    if (const auto iou = MaxIou(generated[i], reference[i])) {
      iou_sum += *iou;
      ++report.evaluated;
    } else {
      ++report.skipped;
    }
  }
  if (!generated.empty()) {
    report.alignment /= double(generated.size());
    report.overlap /= double(generated.size());
  }
  if (report.evaluated > 0) report.max_iou = iou_sum / double(report.evaluated);
  report.fid = Fid(generated_features, reference_features);
  return report;
}

MetricReport Evaluate(std::span<const Layout> generated,
                      std::span<const Layout> reference,
                      const FeatureEmbedding& embedding) {
  std::vector<FeatureVector> gen_features, ref_features;
  gen_features.reserve(generated.size());
  ref_features.reserve(reference.size());
  for (const auto& layout : generated) gen_features.push_back(embedding(layout));
  for (const auto& layout : reference) ref_features.push_back(embedding(layout));
  return Evaluate(generated, reference, gen_features, ref_features);
}

std::string ToJson(const MetricReport& report) {
  nlohmann::ordered_json j;
  j["fid"] = report.fid;
  j["alignment"] = report.alignment;
  j["overlap"] = report.overlap;
  j["max_iou"] = report.max_iou;
  j["evaluated"] = report.evaluated;
  j["skipped"] = report.skipped;
  return j.dump(2);
}

MetricReport MetricReportFromJson(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    MetricReport report;
    report.fid = j.at("fid").get<double>();
    report.alignment = j.at("alignment").get<double>();
    report.overlap = j.at("overlap").get<double>();
    report.max_iou = j.at("max_iou").get<double>();
    report.evaluated = j.value("evaluated", std::size_t{0});
    report.skipped = j.value("skipped", std::size_t{0});
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kParseError, std::string("metric report: ") + e.what());
  }
}

std::string_view MetricName(MetricKind metric) {
  switch (metric) {
    case MetricKind::kFid: return "fid";
    case MetricKind::kAlignment: return "alignment";
    case MetricKind::kOverlap: return "overlap";
    case MetricKind::kMaxIou: return "max_iou";
  }
  return "fid";
}

std::vector<double> RankingScore(std::span<const MethodMetrics> methods,
                                 TieRule ties) {
  if (methods.size() < 2) {
    throw Error(Errc::kInconsistentTable, "need at least two methods to rank");
  }
  const std::size_t m = methods.size();
  std::vector<double> rank_sum(m, 0.0);
  std::vector<int> rank_count(m, 0);
  for (MetricKind metric : kAllMetrics) {
    const auto k = static_cast<std::size_t>(metric);
    const bool higher_better = metric == MetricKind::kMaxIou;
    std::vector<std::size_t> present;
    for (std::size_t i = 0; i < m; ++i) {
      if (methods[i].values[k]) present.push_back(i);
    }
    auto better = [&](std::size_t a, std::size_t b) {
      const double va = *methods[a].values[k];
      const double vb = *methods[b].values[k];
      return higher_better ? va > vb : va < vb;
    };
    std::stable_sort(present.begin(), present.end(), better);
    for (std::size_t pos = 0; pos < present.size();) {
      std::size_t end = pos + 1;
      while (end < present.size() &&
             *methods[present[end]].values[k] == *methods[present[pos]].values[k]) {
        ++end;
      }
      // Positions pos..end-1 (0-based) share one rank.
      const double rank = ties == TieRule::kMinRank
                              ? double(pos + 1)
                              : (double(pos + 1) + double(end)) / 2.0;
      for (std::size_t t = pos; t < end; ++t) {
        rank_sum[present[t]] += rank;
        ++rank_count[present[t]];
      }
      pos = end;
    }
  }
  std::vector<double> scores(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (rank_count[i] == 0) {
      throw Error(Errc::kInconsistentTable,
                  "method '" + methods[i].name + "' reports no metric");
    }
    scores[i] = rank_sum[i] / rank_count[i];
  }
  return scores;
}

}  // namespace unilayout
