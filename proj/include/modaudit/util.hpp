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

#ifndef MODAUDIT_UTIL_HPP_
#define MODAUDIT_UTIL_HPP_

#include <cstdint>
#include <string>
#include <string_view>

namespace modaudit {

// Hex-encoded SHA-256 of the given bytes (lowercase, 64 chars).
std::string Sha256Hex(std::string_view data);

// splitmix64 step. Used to derive independent sub-seeds from one run seed;
// the derivation is fixed so runs are reproducible across platforms.
std::uint64_t SplitMix64(std::uint64_t x);

// Sub-seed for a named random stream: mixes the run seed with a stream index.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream);

// FNV-1a 64-bit, for turning stream names into stream indices.
std::uint64_t HashString64(std::string_view s);

// Rounds to 6 significant digits (ties to even) and formats without trailing
// zeros, e.g. 0.75 -> "0.75", 1.0/3 -> "0.333333". Reports print all floats
// through this.
std::string FormatSig6(double value);

// The double closest to FormatSig6(value); what gets stored in JSON reports.
double RoundSig6(double value);

// Current wall-clock time as ISO-8601 UTC, second resolution,
// e.g. "2026-08-09T12:34:56Z".
std::string NowUtcIso8601();

}  // namespace modaudit

#endif  // MODAUDIT_UTIL_HPP_
