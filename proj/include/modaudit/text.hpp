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

#ifndef MODAUDIT_TEXT_HPP_
#define MODAUDIT_TEXT_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace modaudit {

// Word-level text machinery shared by the lexicon scorer and the
// counterfactual pair builder. A "word" is a maximal run of ASCII
// letters/digits; identity tokens may span several words ("african american").
// Matching is case-insensitive on whole words only, so "men" does not match
// inside "women" but does match the "men" in "men's".

struct TokenMatch {
  std::size_t begin = 0;  // byte offset of the first matched word
  std::size_t end = 0;    // one past the last matched byte
};

std::string AsciiLower(std::string_view s);

// Case pattern of a matched site, used to restyle the replacement token.
// Anything that is not all-caps or initial-capital is treated as lowercase.
enum class CasePattern { kLower, kTitle, kUpper };

CasePattern ClassifyCase(std::string_view site);
std::string ApplyCase(CasePattern pattern, std::string_view replacement_lower);

// All whole-word, case-insensitive matches of `token_lower` (one or more
// space-separated words) in `text`, left to right, non-overlapping.
std::vector<TokenMatch> FindWholeWord(std::string_view text,
                                      std::string_view token_lower);

bool ContainsWholeWord(std::string_view text, std::string_view token_lower);

struct Substitution {
  std::string text;
  std::size_t sites = 0;
};

// Replaces every whole-word occurrence of `from_lower` with `to_lower`,
// restyled to each site's case pattern.
Substitution SubstituteWholeWord(std::string_view text,
                                 std::string_view from_lower,
                                 std::string_view to_lower);

// Lowercased single words of the text, in order (scorer tokenization).
std::vector<std::string> LowerWords(std::string_view text);

// Number of whitespace-separated fields.
int WhitespaceWordCount(std::string_view text);

bool IsValidUtf8(std::string_view text);

}  // namespace modaudit

#endif  // MODAUDIT_TEXT_HPP_
