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

#include "modaudit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "boost/math/distributions/students_t.hpp"
#include "modaudit/error.hpp"
#include "modaudit/rng.hpp"
#include "modaudit/util.hpp"

namespace modaudit {

double RocAuc(std::span<const double> scores, const std::vector<bool>& labels) {
  if (scores.size() != labels.size()) {
    throw AuditError(ErrorKind::kConfig, "scores and labels differ in length");
  }
  const std::size_t n = scores.size();
  std::size_t n_pos = 0;
  for (bool l : labels) n_pos += l ? 1 : 0;
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw AuditError(ErrorKind::kDegenerateLabels,
                     "ROC AUC needs both classes, got " +
                         std::to_string(n_pos) + " positives of " +
                         std::to_string(n));
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return scores[a] < scores[b];
  });

  // Sum of average ranks (1-based) over positives; ties share the mean rank
  // of their run, so each tie run contributes (first + last) / 2 per member.
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]]) rank_sum_pos += avg_rank;
    }
    i = j;
  }

  const double u = rank_sum_pos - static_cast<double>(n_pos) *
                                      (static_cast<double>(n_pos) + 1.0) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

ConfusionMetricsResult ConfusionMetrics(const std::vector<bool>& flags,
                                        const std::vector<bool>& labels) {
  if (flags.size() != labels.size()) {
    throw AuditError(ErrorKind::kConfig, "flags and labels differ in length");
  }
  if (flags.empty()) {
    throw AuditError(ErrorKind::kConfig, "confusion metrics on empty input");
  }
  ConfusionMetricsResult r;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (labels[i]) {
      (flags[i] ? r.counts.tp : r.counts.fn) += 1;
    } else {
      (flags[i] ? r.counts.fp : r.counts.tn) += 1;
    }
  }
  const auto& c = r.counts;
  if (2 * c.tp + c.fp + c.fn > 0) {
    r.f1 = 2.0 * static_cast<double>(c.tp) /
           static_cast<double>(2 * c.tp + c.fp + c.fn);
  }
  if (c.fp + c.tn > 0) {
    r.fpr = static_cast<double>(c.fp) / static_cast<double>(c.fp + c.tn);
  }
  if (c.fn + c.tp > 0) {
    r.fnr = static_cast<double>(c.fn) / static_cast<double>(c.fn + c.tp);
  }
  r.accuracy = static_cast<double>(c.tp + c.tn) /
               static_cast<double>(flags.size());
  return r;
}

double TQuantile(double p, double df) {
  boost::math::students_t dist(df);
  return boost::math::quantile(dist, p);
}

std::pair<double, double> TConfidenceInterval(std::span<const double> values,
                                              double level) {
  const std::size_t n = values.size();
  if (n < 2) {
    throw AuditError(ErrorKind::kInsufficientData,
                     "t interval needs n >= 2, got " + std::to_string(n));
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw AuditError(ErrorKind::kConfig, "confidence level must be in (0,1)");
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);

  bool all_equal = true;
  double ss = 0.0;
  for (double v : values) {
    if (v != values[0]) all_equal = false;
    ss += (v - mean) * (v - mean);
  }
  if (all_equal) return {mean, mean};

  const double s = std::sqrt(ss / static_cast<double>(n - 1));
  const double t = TQuantile((1.0 + level) / 2.0, static_cast<double>(n - 1));
  const double half = t * s / std::sqrt(static_cast<double>(n));
  return {mean - half, mean + half};
}

PinnedAucResult PinnedAuc(std::span<const double> scores,
                          const std::vector<bool>& labels,
                          const std::vector<bool>& group_mask, std::uint64_t seed,
                          std::size_t n_resamples) {
  if (scores.size() != labels.size() || scores.size() != group_mask.size()) {
    throw AuditError(ErrorKind::kConfig, "pinned AUC input lengths differ");
  }
  if (n_resamples == 0) {
    throw AuditError(ErrorKind::kConfig, "n_resamples must be >= 1");
  }

  std::vector<std::size_t> subgroup;
  std::vector<std::size_t> background;
  for (std::size_t i = 0; i < group_mask.size(); ++i) {
    (group_mask[i] ? subgroup : background).push_back(i);
  }
  if (subgroup.empty()) {
    throw AuditError(ErrorKind::kSubgroupEmpty, "group mask selects nothing");
  }
  if (background.size() < subgroup.size()) {
    throw AuditError(ErrorKind::kBackgroundTooSmall,
                     "background " + std::to_string(background.size()) +
                         " smaller than subgroup " +
                         std::to_string(subgroup.size()));
  }

  const std::size_t k = subgroup.size();
  std::vector<double> pool_scores(2 * k);
  std::vector<bool> pool_labels(2 * k);
  for (std::size_t s = 0; s < k; ++s) {
    pool_scores[s] = scores[subgroup[s]];
    pool_labels[s] = labels[subgroup[s]];
  }

  PinnedAucResult result;
  result.n_subgroup = k;
  result.n_background_per_resample = k;
  result.seed = seed;
  for (std::size_t r = 0; r < n_resamples; ++r) {
    Rng rng(MixSeed(seed, r));
    const std::vector<std::size_t> draw =
        rng.SampleWithoutReplacement(background.size(), k);
    for (std::size_t d = 0; d < k; ++d) {
      pool_scores[k + d] = scores[background[draw[d]]];
      pool_labels[k + d] = labels[background[draw[d]]];
    }
    try {
      result.per_resample_values.push_back(RocAuc(pool_scores, pool_labels));
    } catch (const AuditError& e) {
      if (e.kind() != ErrorKind::kDegenerateLabels) throw;
      // Single-class pool; this draw contributes nothing.
    }
  }
  if (result.per_resample_values.empty()) {
    throw AuditError(ErrorKind::kDegenerateLabels,
                     "every pinned resample was single-class");
  }
  result.n_resamples = result.per_resample_values.size();
  double mean = 0.0;
  for (double v : result.per_resample_values) mean += v;
  result.value = mean / static_cast<double>(result.n_resamples);
  if (result.n_resamples >= 2) {
    result.ci95 = TConfidenceInterval(result.per_resample_values, 0.95);
  }
  return result;
}

}  // namespace modaudit
