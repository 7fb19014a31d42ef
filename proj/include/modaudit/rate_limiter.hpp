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

#ifndef MODAUDIT_RATE_LIMITER_HPP_
#define MODAUDIT_RATE_LIMITER_HPP_

#include <chrono>
#include <mutex>
#include <vector>

#include "modaudit/clock.hpp"

namespace modaudit {

// Paces request grants at least 1/rate apart, so no one-second window ever
// holds more than `rate` grants. Grants are handed out in FIFO lock order and
// the caller is slept until its slot. Shared by all workers of one provider.
class RateLimiter {
 public:
  // permits_per_second must be > 0.
  RateLimiter(double permits_per_second, Clock* clock);

  // Blocks until a slot is available; returns the grant time (clock domain).
  std::chrono::nanoseconds Acquire();

  // Grant-time trace for tests and diagnostics. Disabled by default.
  void StartTrace();
  std::vector<std::chrono::nanoseconds> TakeTrace();

 private:
  std::chrono::nanoseconds interval_;
  std::chrono::nanoseconds next_free_{0};
  Clock* clock_;
  std::mutex mu_;
  bool tracing_ = false;
  std::vector<std::chrono::nanoseconds> trace_;
};

}  // namespace modaudit

#endif  // MODAUDIT_RATE_LIMITER_HPP_
