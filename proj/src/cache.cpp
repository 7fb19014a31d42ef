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

#include "modaudit/cache.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "modaudit/error.hpp"

namespace modaudit {

using nlohmann::json;

ScoreCache::ScoreCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path ScoreCache::FileFor(const std::string& provider_id) const {
  return dir_ / (provider_id + ".jsonl");
}

CacheRecord ScoreCache::RecordFromJson(const json& j) {
  CacheRecord r;
  r.key = j.at("key").get<std::string>();
  r.model_version = j.at("model_version").get<std::string>();
  r.retrieved_at = j.at("retrieved_at").get<std::string>();
  r.raw_response = j.at("raw_response");
  r.hate_score = j.at("hate_score").get<double>();
  r.flagged = j.at("flagged").get<bool>();
  return r;
}

json ScoreCache::RecordToJson(const CacheRecord& record) {
  return json{{"key", record.key},
              {"model_version", record.model_version},
              {"retrieved_at", record.retrieved_at},
              {"raw_response", record.raw_response},
              {"hate_score", record.hate_score},
              {"flagged", record.flagged}};
}

ScoreCache::ProviderState& ScoreCache::LoadLocked(
    const std::string& provider_id) {
  ProviderState& state = providers_[provider_id];
  if (state.loaded) return state;
  state.loaded = true;

  const std::filesystem::path file = FileFor(provider_id);
  std::ifstream in(file);
  if (!in) return state;  // no cache yet

  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);

  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    json j = json::parse(lines[i], nullptr, /*allow_exceptions=*/false);
    bool ok = !j.is_discarded();
    CacheRecord record;
    if (ok) {
      try {
        record = RecordFromJson(j);
      } catch (const json::exception&) {
        ok = false;
      }
    }
    if (!ok) {
      if (i + 1 == lines.size()) break;  // truncated final write, recover
      throw AuditError(ErrorKind::kCorruptCache,
                       file.string() + " line " + std::to_string(i + 1) +
                           ": unreadable cache record");
    }
    state.latest_by_key[record.key] = state.records.size();
    state.records.push_back(std::move(record));
  }
  return state;
}

std::optional<CacheRecord> ScoreCache::Lookup(
    const std::string& provider_id, const std::string& key,
    const std::optional<std::string>& expected_version) {
  std::lock_guard<std::mutex> lock(mu_);
  ProviderState& state = LoadLocked(provider_id);
  const auto it = state.latest_by_key.find(key);
  if (it == state.latest_by_key.end()) return std::nullopt;
  const CacheRecord& record = state.records[it->second];
  if (expected_version && record.model_version != *expected_version) {
    return std::nullopt;
  }
  return record;
}

void ScoreCache::Insert(const std::string& provider_id,
                        const CacheRecord& record) {
  std::lock_guard<std::mutex> lock(mu_);
  ProviderState& state = LoadLocked(provider_id);
  std::ofstream out(FileFor(provider_id), std::ios::app);
  if (!out) {
    throw AuditError(ErrorKind::kIo,
                     "cannot append to cache file for " + provider_id);
  }
  out << RecordToJson(record).dump() << '\n';
  out.flush();
  state.latest_by_key[record.key] = state.records.size();
  state.records.push_back(record);
}

std::vector<CacheRecord> ScoreCache::Records(const std::string& provider_id) {
  std::lock_guard<std::mutex> lock(mu_);
  return LoadLocked(provider_id).records;
}

std::vector<std::string> ScoreCache::ProvidersOnDisk() const {
  std::vector<std::string> out;
  if (!std::filesystem::exists(dir_)) return out;
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
      out.push_back(entry.path().stem().string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t ScoreCache::EntryCount(const std::string& provider_id) {
  std::lock_guard<std::mutex> lock(mu_);
  return LoadLocked(provider_id).records.size();
}

std::vector<std::string> ScoreCache::ModelVersions(
    const std::string& provider_id) {
  std::lock_guard<std::mutex> lock(mu_);
  std::set<std::string> versions;
  for (const CacheRecord& r : LoadLocked(provider_id).records) {
    versions.insert(r.model_version);
  }
  return {versions.begin(), versions.end()};
}

bool ScoreCache::PurgeProvider(const std::string& provider_id) {
  std::lock_guard<std::mutex> lock(mu_);
  providers_.erase(provider_id);
  return std::filesystem::remove(FileFor(provider_id));
}

}  // namespace modaudit
