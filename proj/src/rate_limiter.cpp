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

#include "modaudit/rate_limiter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace modaudit {

RateLimiter::RateLimiter(double permits_per_second, Clock* clock)
    : clock_(clock) {
  if (!(permits_per_second > 0)) {
    throw std::invalid_argument("rate_limit must be positive");
  }
  interval_ = std::chrono::nanoseconds(
      static_cast<std::int64_t>(std::llround(1e9 / permits_per_second)));
  if (interval_.count() < 1) interval_ = std::chrono::nanoseconds(1);
}

std::chrono::nanoseconds RateLimiter::Acquire() {
  std::chrono::nanoseconds grant;
  {
    std::lock_guard<std::mutex> lock(mu_);
    grant = std::max(clock_->Now(), next_free_);
    next_free_ = grant + interval_;
    if (tracing_) trace_.push_back(grant);
  }
  clock_->SleepUntil(grant);
  return grant;
}

void RateLimiter::StartTrace() {
  std::lock_guard<std::mutex> lock(mu_);
  tracing_ = true;
  trace_.clear();
}

std::vector<std::chrono::nanoseconds> RateLimiter::TakeTrace() {
  std::lock_guard<std::mutex> lock(mu_);
  tracing_ = false;
  return std::move(trace_);
}

}  // namespace modaudit
