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

#ifndef MODAUDIT_CACHE_HPP_
#define MODAUDIT_CACHE_HPP_

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace modaudit {

// One cached scoring outcome. The raw provider response is kept verbatim so
// normalization rules can be re-run against it without spending API budget.
struct CacheRecord {
  std::string key;  // SHA-256 hex of the scored UTF-8 text
  std::string model_version;
  std::string retrieved_at;
  nlohmann::json raw_response;
  double hate_score = 0.0;
  bool flagged = false;
};

// Append-only store, one JSONL file per provider under the cache directory.
// Loads lazily per provider. A corrupt final line is treated as a truncated
// write and dropped; corruption anywhere earlier is a hard error. Reads are
// concurrent; appends are serialized and flushed per record.
class ScoreCache {
 public:
  explicit ScoreCache(std::filesystem::path dir);

  // Latest record for the text key. When expected_version is set, only a
  // record of that model version counts as a hit.
  std::optional<CacheRecord> Lookup(
      const std::string& provider_id, const std::string& key,
      const std::optional<std::string>& expected_version = std::nullopt);

  void Insert(const std::string& provider_id, const CacheRecord& record);

  // All records of one provider in append order (for `cache verify`).
  std::vector<CacheRecord> Records(const std::string& provider_id);

  // Providers that have a cache file on disk, sorted.
  std::vector<std::string> ProvidersOnDisk() const;

  std::size_t EntryCount(const std::string& provider_id);
  std::vector<std::string> ModelVersions(const std::string& provider_id);

  bool PurgeProvider(const std::string& provider_id);

  const std::filesystem::path& dir() const { return dir_; }

  static CacheRecord RecordFromJson(const nlohmann::json& j);
  static nlohmann::json RecordToJson(const CacheRecord& record);

 private:
  struct ProviderState {
    std::vector<CacheRecord> records;
    std::map<std::string, std::size_t> latest_by_key;  // key -> records index
    bool loaded = false;
  };

  std::filesystem::path FileFor(const std::string& provider_id) const;
  ProviderState& LoadLocked(const std::string& provider_id);

  std::filesystem::path dir_;
  mutable std::mutex mu_;
  std::map<std::string, ProviderState> providers_;
};

}  // namespace modaudit

#endif  // MODAUDIT_CACHE_HPP_
