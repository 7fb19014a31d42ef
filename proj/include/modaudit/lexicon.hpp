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

#ifndef MODAUDIT_LEXICON_HPP_
#define MODAUDIT_LEXICON_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "modaudit/corpus.hpp"

namespace modaudit {

// One minority identity token: which group it marks, which identity axis it
// lives on, and the anchor (majority) token it pairs with. The anchor default
// is the axis's first declared anchor; entries may pin a specific one so the
// substitution keeps grammatical number ("women" <-> "men", "woman" <->
// "man").
struct LexiconEntry {
  std::string token;   // lowercase; may span words ("african american")
  std::string group;
  std::string axis;
  std::string anchor;  // resolved at load time, never empty afterwards
};

// Minority tokens plus per-axis anchor declarations. File format is JSONL:
//   {"token": "women", "group": "Women", "axis": "gender", "anchor": "men"}
//   {"axis": "gender", "anchors": ["man", "men", "male", "boy", "boys"]}
// Entry lines and anchor lines may be interleaved.
class TokenLexicon {
 public:
  TokenLexicon() = default;
  TokenLexicon(std::vector<LexiconEntry> entries,
               std::map<std::string, std::vector<std::string>> anchors);

  static TokenLexicon Load(const std::filesystem::path& path,
                           const GroupRegistry& registry);

  const std::vector<LexiconEntry>& entries() const { return entries_; }
  const std::map<std::string, std::vector<std::string>>& anchors() const {
    return anchors_;
  }

  bool HasGroup(const std::string& group) const;
  std::vector<std::string> Groups() const;  // in first-appearance order

  // Tokens of one group, in entry order.
  std::vector<std::string> GroupTokens(const std::string& group) const;

  const LexiconEntry* FindEntry(const std::string& token_lower) const;
  bool IsAnchorToken(const std::string& token_lower) const;

  // The unique entry whose anchor is `anchor_lower`, or nullopt when zero or
  // several entries claim it (the reverse substitution would be ambiguous).
  std::optional<LexiconEntry> UniqueEntryForAnchor(
      const std::string& anchor_lower) const;

  // Every distinct token and anchor, for single-token-guard scanning.
  const std::vector<std::string>& AllMarkerTokens() const { return markers_; }

 private:
  void Validate();

  std::vector<LexiconEntry> entries_;
  std::map<std::string, std::vector<std::string>> anchors_;
  std::vector<std::string> markers_;
};

}  // namespace modaudit

#endif  // MODAUDIT_LEXICON_HPP_
