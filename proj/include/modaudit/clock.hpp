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

#ifndef MODAUDIT_CLOCK_HPP_
#define MODAUDIT_CLOCK_HPP_

#include <atomic>
#include <chrono>
#include <cstdint>

namespace modaudit {

// Monotonic time source used by the rate limiter and retry backoff. Injected
// so tests can pace thousands of requests in microseconds of real time.
class Clock {
 public:
  virtual ~Clock() = default;

  // Nanoseconds since an arbitrary fixed origin; never decreases.
  virtual std::chrono::nanoseconds Now() = 0;

  virtual void SleepUntil(std::chrono::nanoseconds deadline) = 0;

  void SleepFor(std::chrono::nanoseconds d) { SleepUntil(Now() + d); }
};

class SystemClock : public Clock {
 public:
  std::chrono::nanoseconds Now() override {
    return std::chrono::steady_clock::now().time_since_epoch();
  }

  void SleepUntil(std::chrono::nanoseconds deadline) override;
};

// Time advances only when someone sleeps. SleepUntil never blocks.
class VirtualClock : public Clock {
 public:
  std::chrono::nanoseconds Now() override {
    return std::chrono::nanoseconds(now_.load());
  }

  void SleepUntil(std::chrono::nanoseconds deadline) override {
    std::int64_t target = deadline.count();
    std::int64_t cur = now_.load();
    while (cur < target && !now_.compare_exchange_weak(cur, target)) {
    }
  }

 private:
  std::atomic<std::int64_t> now_{0};
};

}  // namespace modaudit

#endif  // MODAUDIT_CLOCK_HPP_
