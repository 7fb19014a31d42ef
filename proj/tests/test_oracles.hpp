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

// Independent oracles used across the test suites. These intentionally use
// the dumbest possible algorithms and stay decoupled from the library's
// implementation paths.

#ifndef MODAUDIT_TESTS_TEST_ORACLES_HPP_
#define MODAUDIT_TESTS_TEST_ORACLES_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace modaudit::testing {

// O(n^2) pairwise AUC: fraction of (positive, negative) pairs ranked
// correctly, ties worth 0.5.
inline double BruteForceAuc(std::span<const double> scores,
                            const std::vector<bool>& labels) {
  double wins = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!labels[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j]) continue;
      ++pairs;
      if (scores[i] > scores[j]) {
        wins += 1.0;
      } else if (scores[i] == scores[j]) {
        wins += 0.5;
      }
    }
  }
  return wins / static_cast<double>(pairs);
}

struct TQuantileCase {
  int df;
  double level;          // two-sided confidence level
  double quantile;       // t_{(1+level)/2, df}
};

// Reference two-sided t quantiles, computed independently of the library.
inline const std::vector<TQuantileCase>& TQuantileTable() {
  static const std::vector<TQuantileCase> table = {
      {1, 0.95, 12.70620474},  {2, 0.95, 4.30265273},
      {3, 0.95, 3.182446305},  {4, 0.95, 2.776445105},
      {5, 0.95, 2.570581836},  {9, 0.95, 2.262157163},
      {10, 0.95, 2.228138852}, {15, 0.95, 2.131449546},
      {29, 0.95, 2.045229642}, {99, 0.95, 1.984216952},
      {1, 0.99, 63.65674116},  {2, 0.99, 9.924843201},
      {4, 0.99, 4.604094871},  {9, 0.99, 3.249835542},
      {19, 0.99, 2.860934606}, {49, 0.99, 2.679951974},
      {3, 0.90, 2.353363435},  {7, 0.90, 1.894578605},
      {12, 0.90, 1.782287556}, {199, 0.90, 1.652546746},
  };
  return table;
}

}  // namespace modaudit::testing

#endif  // MODAUDIT_TESTS_TEST_ORACLES_HPP_
