/*
 * Copyright 2026 The modaudit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// metrics.hpp
//
// Threshold-variant and threshold-invariant classifier metrics.
//
// RocAuc is the Mann-Whitney rank statistic: over all (positive, negative)
// pairs, the fraction where the positive outscores the negative, ties
// credited 0.5. Computed in O(n log n) by summing average ranks of the
// positives; with n <= a few thousand the rank sums are exact integers and
// halves in double precision, so the result matches pairwise enumeration
// bit for bit. Moderation APIs emit coarse scores, so ties are the common
// case and must not bias the statistic.
//
// PinnedAuc measures subgroup ranking quality on an equal-parts pool of the
// subgroup and a background draw of the same size. One draw is noisy for
// small subgroups, so the draw is repeated (default 100x); the result is the
// mean with a student-t confidence interval over the resample values. Each
// resample seeds its own generator from (seed, resample index), so serial
// and parallel execution produce identical results.
//
// Undefined ratios (0/0) are reported as absent values, never coerced to 0;
// a tiny group with no negatives must not show up with a perfect FPR.

#ifndef MODAUDIT_METRICS_HPP_
#define MODAUDIT_METRICS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace modaudit {

// Mann-Whitney ROC AUC with 0.5 tie credit.
// Throws degenerate-labels unless both classes are present.
double RocAuc(std::span<const double> scores, const std::vector<bool>& labels);

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  bool operator==(const ConfusionCounts&) const = default;
};

struct ConfusionMetricsResult {
  ConfusionCounts counts;
  std::optional<double> f1;   // 2tp / (2tp + fp + fn); absent on 0/0
  std::optional<double> fpr;  // fp / (fp + tn); absent when no negatives
  std::optional<double> fnr;  // fn / (fn + tp); absent when no positives
  double accuracy = 0.0;
};

// flags[i] is the provider's binary decision, labels[i] the ground truth.
ConfusionMetricsResult ConfusionMetrics(const std::vector<bool>& flags,
                                        const std::vector<bool>& labels);

// Two-sided level CI assuming a student-t distribution:
// mean +/- t_{(1+level)/2, n-1} * s / sqrt(n). Identical values give the
// degenerate interval (mean, mean). Throws insufficient-data for n < 2.
std::pair<double, double> TConfidenceInterval(std::span<const double> values,
                                              double level = 0.95);

// Quantile of the student-t distribution with `df` degrees of freedom.
double TQuantile(double p, double df);

struct PinnedAucResult {
  std::string group;
  double value = 0.0;  // mean of per_resample_values
  std::size_t n_subgroup = 0;
  std::size_t n_background_per_resample = 0;  // always equals n_subgroup
  std::size_t n_resamples = 0;                // resamples that produced a value
  std::vector<double> per_resample_values;
  std::uint64_t seed = 0;
  std::optional<std::pair<double, double>> ci95;
};

// Pinned ROC AUC of the masked subgroup against repeated equal-size
// background draws. Resamples whose pool is single-class are skipped; if
// every resample is degenerate this throws degenerate-labels.
PinnedAucResult PinnedAuc(std::span<const double> scores,
                          const std::vector<bool>& labels,
                          const std::vector<bool>& group_mask, std::uint64_t seed,
                          std::size_t n_resamples = 100);

}  // namespace modaudit

#endif  // MODAUDIT_METRICS_HPP_
