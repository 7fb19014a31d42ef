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

#ifndef MODAUDIT_CLI_HPP_
#define MODAUDIT_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "modaudit/audit.hpp"

namespace modaudit {

// Exit codes: 0 success, 1 runtime or assertion failure, 2 config error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

// Runs one CLI invocation. Machine-readable output goes to `out`,
// diagnostics to `err`, confirmations are read from `in`. The env lets
// tests inject clocks and transports; leave it default in production.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err, std::istream& in, const AuditEnv& env = {});

}  // namespace modaudit

#endif  // MODAUDIT_CLI_HPP_
