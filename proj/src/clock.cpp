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

#include "modaudit/clock.hpp"

#include <thread>

namespace modaudit {

void SystemClock::SleepUntil(std::chrono::nanoseconds deadline) {
  std::this_thread::sleep_until(
      std::chrono::steady_clock::time_point(deadline));
}

}  // namespace modaudit
