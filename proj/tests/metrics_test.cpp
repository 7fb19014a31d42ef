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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "modaudit/error.hpp"
#include "modaudit/rng.hpp"
#include "modaudit/util.hpp"
#include "test_oracles.hpp"

namespace modaudit {
namespace {

using testing::BruteForceAuc;
using testing::TQuantileTable;

TEST(RocAuc, PerfectSeparation) {
  const std::vector<double> scores = {0.1, 0.2, 0.8, 0.9};
  const std::vector<bool> labels = {false, false, true, true};
  EXPECT_DOUBLE_EQ(RocAuc(scores, labels), 1.0);
}

TEST(RocAuc, AllScoresTiedGivesHalf) {
  const std::vector<double> scores = {0.4, 0.4, 0.4, 0.4};
  const std::vector<bool> labels = {true, false, true, false};
  EXPECT_DOUBLE_EQ(RocAuc(scores, labels), 0.5);
}

TEST(RocAuc, HandCheckedExample) {
  // Pairs: (0.35 vs 0.1) win, (0.35 vs 0.4) loss, (0.8 vs 0.1) win,
  // (0.8 vs 0.4) win -> 3/4.
  const std::vector<double> scores = {0.1, 0.4, 0.35, 0.8};
  const std::vector<bool> labels = {false, false, true, true};
  EXPECT_DOUBLE_EQ(RocAuc(scores, labels), 0.75);
}

TEST(RocAuc, SingleClassIsAnError) {
  const std::vector<double> scores = {0.1, 0.2};
  const std::vector<bool> labels = {true, true};
  try {
    RocAuc(scores, labels);
    FAIL() << "expected degenerate-labels";
  } catch (const AuditError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerateLabels);
  }
}

TEST(RocAuc, MatchesBruteForceOnRandomInstancesWithTies) {
  Rng rng(20260809);
  for (int round = 0; round < 200; ++round) {
    const std::size_t n = 2 + rng.UniformBelow(198);
    std::vector<double> scores(n);
    std::vector<bool> labels(n);
    // Coarse score grid forces plenty of ties.
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = static_cast<double>(rng.UniformBelow(10)) / 10.0;
      labels[i] = rng.UniformBelow(2) == 1;
    }
    labels[0] = true;
    labels[1] = false;
    EXPECT_NEAR(RocAuc(scores, labels), BruteForceAuc(scores, labels), 1e-12);
  }
}

TEST(RocAuc, InvariantUnderStrictlyMonotoneTransform) {
  Rng rng(7);
  for (int round = 0; round < 50; ++round) {
    const std::size_t n = 10 + rng.UniformBelow(100);
    std::vector<double> scores(n);
    std::vector<double> cubed(n);
    std::vector<bool> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = static_cast<double>(rng.UniformBelow(20)) / 20.0;
      cubed[i] = scores[i] * scores[i] * scores[i];
      labels[i] = rng.UniformBelow(2) == 1;
    }
    labels[0] = true;
    labels[1] = false;
    EXPECT_EQ(RocAuc(scores, labels), RocAuc(cubed, labels));
  }
}

TEST(ConfusionMetrics, PerfectFlags) {
  const std::vector<bool> labels = {true, false, true, false};
  const ConfusionMetricsResult r = ConfusionMetrics(labels, labels);
  EXPECT_DOUBLE_EQ(*r.f1, 1.0);
  EXPECT_DOUBLE_EQ(*r.fpr, 0.0);
  EXPECT_DOUBLE_EQ(*r.fnr, 0.0);
  EXPECT_DOUBLE_EQ(r.accuracy, 1.0);
}

TEST(ConfusionMetrics, HandCountedCase) {
  const std::vector<bool> flags = {true, false, true, false};
  const std::vector<bool> labels = {true, false, false, false};
  const ConfusionMetricsResult r = ConfusionMetrics(flags, labels);
  EXPECT_EQ(r.counts, (ConfusionCounts{1, 1, 2, 0}));
  EXPECT_DOUBLE_EQ(*r.f1, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(*r.fpr, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(*r.fnr, 0.0);
}

TEST(ConfusionMetrics, ZeroOverZeroIsUndefinedNotZero) {
  const std::vector<bool> flags = {false, false};
  const std::vector<bool> labels = {true, true};
  const ConfusionMetricsResult r = ConfusionMetrics(flags, labels);
  EXPECT_DOUBLE_EQ(*r.fnr, 1.0);
  EXPECT_FALSE(r.fpr.has_value());  // no negatives at all
}

TEST(ConfusionMetrics, AccuracyComplementsBalancedRates) {
  Rng rng(99);
  for (int round = 0; round < 50; ++round) {
    const std::size_t half = 5 + rng.UniformBelow(50);
    std::vector<bool> labels;
    std::vector<bool> flags;
    for (std::size_t i = 0; i < 2 * half; ++i) {
      labels.push_back(i < half);
      flags.push_back(rng.UniformBelow(2) == 1);
    }
    const ConfusionMetricsResult r = ConfusionMetrics(flags, labels);
    ASSERT_TRUE(r.fpr && r.fnr);
    EXPECT_NEAR(r.accuracy, 1.0 - (*r.fpr + *r.fnr) / 2.0, 1e-12);
  }
}

TEST(TConfidenceInterval, FrozenReferenceCase) {
  const std::vector<double> values = {1.0, 2.0, 3.0, 4.0};
  const auto [low, high] = TConfidenceInterval(values, 0.95);
  EXPECT_NEAR(low, 0.4457, 1e-3);
  EXPECT_NEAR(high, 4.5543, 1e-3);
}

TEST(TConfidenceInterval, QuantileMatchesReferenceTable) {
  for (const auto& c : TQuantileTable()) {
    const double q = TQuantile((1.0 + c.level) / 2.0, c.df);
    EXPECT_NEAR(q, c.quantile, std::abs(c.quantile) * 1e-6)
        << "df=" << c.df << " level=" << c.level;
  }
}

TEST(TConfidenceInterval, IdenticalValuesDegenerate) {
  const std::vector<double> values = {0.3, 0.3, 0.3};
  const auto [low, high] = TConfidenceInterval(values);
  EXPECT_DOUBLE_EQ(low, 0.3);
  EXPECT_DOUBLE_EQ(high, 0.3);
}

TEST(TConfidenceInterval, HigherLevelWidens) {
  const std::vector<double> values = {0.1, 0.5, 0.2, 0.9, 0.4};
  const auto [low95, high95] = TConfidenceInterval(values, 0.95);
  const auto [low99, high99] = TConfidenceInterval(values, 0.99);
  EXPECT_LT(low99, low95);
  EXPECT_GT(high99, high95);
}

TEST(TConfidenceInterval, TooFewValues) {
  const std::vector<double> values = {1.0};
  EXPECT_THROW(TConfidenceInterval(values), AuditError);
}

TEST(PinnedAuc, DuplicatedSubgroupEqualsOverall) {
  // Background is an exact copy of the subgroup, so every resample draws the
  // whole copy and the pinned pool is the subgroup doubled; AUC is unchanged.
  const std::vector<double> sub_scores = {0.9, 0.2, 0.7, 0.4, 0.6, 0.1};
  const std::vector<bool> sub_labels = {true, false, true, false, true, false};
  std::vector<double> scores = sub_scores;
  std::vector<bool> labels = sub_labels;
  std::vector<bool> mask(sub_scores.size(), true);
  scores.insert(scores.end(), sub_scores.begin(), sub_scores.end());
  labels.insert(labels.end(), sub_labels.begin(), sub_labels.end());
  mask.insert(mask.end(), sub_scores.size(), false);

  const double overall = RocAuc(sub_scores, sub_labels);
  const PinnedAucResult pinned = PinnedAuc(scores, labels, mask, 13, 20);
  EXPECT_DOUBLE_EQ(pinned.value, overall);
  for (double v : pinned.per_resample_values) EXPECT_DOUBLE_EQ(v, overall);
}

TEST(PinnedAuc, DegradedSubgroupFallsBelowOverall) {
  // 20-item instance: subgroup positives score below every background
  // negative, so each pinned pool ranks them terribly. With p background
  // positives in a draw of 4, the pool AUC is exactly p/(4+p); overall AUC
  // is 64 winning pairs of 96, both traced by hand against pairwise
  // enumeration.
  std::vector<double> scores;
  std::vector<bool> labels;
  std::vector<bool> mask;
  for (int i = 0; i < 4; ++i) {  // subgroup positives, very low scores
    scores.push_back(0.05 + 0.01 * i);
    labels.push_back(true);
    mask.push_back(true);
  }
  for (int i = 0; i < 8; ++i) {  // background positives, high scores
    scores.push_back(0.8 + 0.01 * i);
    labels.push_back(true);
    mask.push_back(false);
  }
  for (int i = 0; i < 8; ++i) {  // background negatives, mid scores
    scores.push_back(0.4 + 0.01 * i);
    labels.push_back(false);
    mask.push_back(false);
  }
  const double overall = RocAuc(scores, labels);
  EXPECT_DOUBLE_EQ(overall, BruteForceAuc(scores, labels));
  EXPECT_DOUBLE_EQ(overall, 64.0 / 96.0);

  const PinnedAucResult pinned = PinnedAuc(scores, labels, mask, 5, 50);
  EXPECT_LT(pinned.value, overall);
  // A draw of 4 background items with all positives has no negatives and is
  // skipped as degenerate, so p ranges over 0..3 in surviving resamples.
  for (double v : pinned.per_resample_values) {
    bool known = false;
    for (int p = 0; p <= 3; ++p) {
      if (std::abs(v - static_cast<double>(p) / (4.0 + p)) < 1e-12) {
        known = true;
      }
    }
    EXPECT_TRUE(known) << "unexpected pinned resample value " << v;
  }
}

TEST(PinnedAuc, SingleResampleReproducible) {
  std::vector<double> scores = {0.1, 0.9, 0.3, 0.7, 0.5, 0.6};
  std::vector<bool> labels = {false, true, false, true, false, true};
  std::vector<bool> mask = {true, true, false, false, false, false};
  const PinnedAucResult a = PinnedAuc(scores, labels, mask, 77, 1);
  const PinnedAucResult b = PinnedAuc(scores, labels, mask, 77, 1);
  EXPECT_EQ(a.per_resample_values, b.per_resample_values);
  EXPECT_EQ(a.n_resamples, 1u);
  EXPECT_FALSE(a.ci95.has_value());
}

TEST(PinnedAuc, PoolCompositionInvariants) {
  EXPECT_THROW(PinnedAuc(std::vector<double>{0.1, 0.2},
                         std::vector<bool>{true, false},
                         std::vector<bool>{false, false}, 1, 5),
               AuditError);
  // Background smaller than subgroup.
  EXPECT_THROW(PinnedAuc(std::vector<double>{0.1, 0.2, 0.3},
                         std::vector<bool>{true, false, true},
                         std::vector<bool>{true, true, false}, 1, 5),
               AuditError);
}

TEST(PinnedAuc, InvariantUnderMonotoneTransform) {
  Rng rng(4242);
  for (int round = 0; round < 50; ++round) {
    const std::size_t n = 30 + rng.UniformBelow(60);
    std::vector<double> scores(n);
    std::vector<double> transformed(n);
    std::vector<bool> labels(n);
    std::vector<bool> mask(n);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = static_cast<double>(rng.UniformBelow(15)) / 15.0;
      // logit-like strictly monotone rescale
      transformed[i] = scores[i] / (1.5 - scores[i]);
      labels[i] = rng.UniformBelow(2) == 1;
      mask[i] = i < n / 4;
    }
    labels[0] = true;
    labels[1] = false;
    const PinnedAucResult a = PinnedAuc(scores, labels, mask, 11, 20);
    const PinnedAucResult b = PinnedAuc(transformed, labels, mask, 11, 20);
    EXPECT_EQ(a.per_resample_values, b.per_resample_values);
    EXPECT_EQ(a.value, b.value);
  }
}

}  // namespace
}  // namespace modaudit
