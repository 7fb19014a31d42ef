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

#include "modaudit/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "json.hpp"
#include "modaudit/error.hpp"
#include "modaudit/text.hpp"

namespace modaudit {

using nlohmann::json;

TokenLexicon::TokenLexicon(
    std::vector<LexiconEntry> entries,
    std::map<std::string, std::vector<std::string>> anchors)
    : entries_(std::move(entries)), anchors_(std::move(anchors)) {
  Validate();
}

void TokenLexicon::Validate() {
  std::set<std::string> seen;
  for (LexiconEntry& e : entries_) {
    e.token = AsciiLower(e.token);
    if (e.token.empty()) {
      throw AuditError(ErrorKind::kConfig, "lexicon entry with empty token");
    }
    if (!seen.insert(e.token).second) {
      throw AuditError(ErrorKind::kConfig,
                       "duplicate lexicon token \"" + e.token + "\"");
    }
    const auto axis_anchors = anchors_.find(e.axis);
    if (axis_anchors == anchors_.end() || axis_anchors->second.empty()) {
      throw AuditError(ErrorKind::kAxisWithoutAnchor,
                       "axis \"" + e.axis + "\" used by token \"" + e.token +
                           "\" declares no anchors");
    }
    if (e.anchor.empty()) {
      e.anchor = axis_anchors->second.front();
    } else {
      e.anchor = AsciiLower(e.anchor);
    }
  }
  for (auto& [axis, list] : anchors_) {
    for (std::string& a : list) a = AsciiLower(a);
  }

  markers_.clear();
  std::set<std::string> marker_set;
  for (const LexiconEntry& e : entries_) {
    if (marker_set.insert(e.token).second) markers_.push_back(e.token);
  }
  for (const auto& [axis, list] : anchors_) {
    for (const std::string& a : list) {
      if (marker_set.insert(a).second) markers_.push_back(a);
    }
  }
}

TokenLexicon TokenLexicon::Load(const std::filesystem::path& path,
                                const GroupRegistry& registry) {
  std::ifstream in(path);
  if (!in) {
    throw AuditError(ErrorKind::kIo, "cannot open lexicon: " + path.string());
  }
  std::vector<LexiconEntry> entries;
  std::map<std::string, std::vector<std::string>> anchors;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw AuditError(ErrorKind::kParse, "lexicon line " +
                                              std::to_string(line_no) + ": " +
                                              e.what());
    }
    if (record.contains("anchors")) {
      if (!record.contains("axis") || !record["anchors"].is_array()) {
        throw AuditError(ErrorKind::kParse,
                         "lexicon line " + std::to_string(line_no) +
                             ": anchor declaration needs axis and anchors[]");
      }
      auto& list = anchors[record["axis"].get<std::string>()];
      for (const auto& a : record["anchors"]) {
        list.push_back(a.get<std::string>());
      }
    } else {
      for (const char* field : {"token", "group", "axis"}) {
        if (!record.contains(field)) {
          throw AuditError(ErrorKind::kParse,
                           "lexicon line " + std::to_string(line_no) +
                               ": missing \"" + field + "\"");
        }
      }
      LexiconEntry e;
      e.token = record["token"].get<std::string>();
      e.group = record["group"].get<std::string>();
      e.axis = record["axis"].get<std::string>();
      if (record.contains("anchor")) {
        e.anchor = record["anchor"].get<std::string>();
      }
      if (!registry.Contains(e.group)) {
        throw AuditError(ErrorKind::kUnknownGroup,
                         "lexicon line " + std::to_string(line_no) +
                             ": group \"" + e.group +
                             "\" is not in the registry");
      }
      entries.push_back(std::move(e));
    }
  }
  return TokenLexicon(std::move(entries), std::move(anchors));
}

bool TokenLexicon::HasGroup(const std::string& group) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const LexiconEntry& e) { return e.group == group; });
}

std::vector<std::string> TokenLexicon::Groups() const {
  std::vector<std::string> groups;
  for (const LexiconEntry& e : entries_) {
    if (std::find(groups.begin(), groups.end(), e.group) == groups.end()) {
      groups.push_back(e.group);
    }
  }
  return groups;
}

std::vector<std::string> TokenLexicon::GroupTokens(
    const std::string& group) const {
  std::vector<std::string> tokens;
  for (const LexiconEntry& e : entries_) {
    if (e.group == group) tokens.push_back(e.token);
  }
  return tokens;
}

const LexiconEntry* TokenLexicon::FindEntry(
    const std::string& token_lower) const {
  for (const LexiconEntry& e : entries_) {
    if (e.token == token_lower) return &e;
  }
  return nullptr;
}

bool TokenLexicon::IsAnchorToken(const std::string& token_lower) const {
  for (const auto& [axis, list] : anchors_) {
    if (std::find(list.begin(), list.end(), token_lower) != list.end()) {
      return true;
    }
  }
  return false;
}

std::optional<LexiconEntry> TokenLexicon::UniqueEntryForAnchor(
    const std::string& anchor_lower) const {
  const LexiconEntry* found = nullptr;
  for (const LexiconEntry& e : entries_) {
    if (e.anchor == anchor_lower) {
      if (found != nullptr) return std::nullopt;  // ambiguous
      found = &e;
    }
  }
  if (found == nullptr) return std::nullopt;
  return *found;
}

}  // namespace modaudit
