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

#include "modaudit/providers.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <set>
#include <thread>

#include "modaudit/rng.hpp"
#include "modaudit/text.hpp"
#include "modaudit/util.hpp"

namespace modaudit {

using nlohmann::json;

const char* ProviderKindName(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::kRemoteApi:
      return "remote-api";
    case ProviderKind::kLexicon:
      return "lexicon";
    case ProviderKind::kPlantedBias:
      return "planted-bias";
    case ProviderKind::kReplay:
      return "replay";
  }
  return "unknown";
}

ProviderKind ParseProviderKind(const std::string& name) {
  if (name == "remote-api") return ProviderKind::kRemoteApi;
  if (name == "lexicon") return ProviderKind::kLexicon;
  if (name == "planted-bias") return ProviderKind::kPlantedBias;
  if (name == "replay") return ProviderKind::kReplay;
  throw AuditError(ErrorKind::kConfig, "unknown provider kind \"" + name + "\"");
}

void ValidateProviderSpec(const ProviderSpec& spec) {
  if (spec.id.empty()) {
    throw AuditError(ErrorKind::kConfig, "provider id must not be empty");
  }
  for (char c : spec.id) {
    if (std::isalnum(static_cast<unsigned char>(c)) == 0 && c != '_' &&
        c != '-') {
      throw AuditError(ErrorKind::kConfig,
                       "provider id \"" + spec.id +
                           "\" may only contain [A-Za-z0-9_-]");
    }
  }
  if (!(spec.rate_limit > 0)) {
    throw AuditError(ErrorKind::kConfig,
                     spec.id + ": rate_limit must be positive");
  }
  if (spec.max_concurrency < 1) {
    throw AuditError(ErrorKind::kConfig,
                     spec.id + ": max_concurrency must be >= 1");
  }
  if (spec.retry.max_attempts < 1) {
    throw AuditError(ErrorKind::kConfig,
                     spec.id + ": retry.max_attempts must be >= 1");
  }
  if (spec.kind == ProviderKind::kRemoteApi) {
    if (spec.endpoint.empty()) {
      throw AuditError(ErrorKind::kConfig,
                       spec.id + ": remote provider needs an endpoint");
    }
    if (spec.credential_ref.empty()) {
      throw AuditError(ErrorKind::kConfig,
                       spec.id + ": remote provider needs a credential_ref");
    }
    if (spec.category_mapping.empty()) {
      throw AuditError(ErrorKind::kConfig,
                       spec.id + ": category_mapping must not be empty");
    }
  }
}

LexiconScorer::LexiconScorer(std::map<std::string, double> term_weights,
                             double flag_threshold)
    : term_weights_(std::move(term_weights)), flag_threshold_(flag_threshold) {
  for (const auto& [token, weight] : term_weights_) {
    if (weight < 0) {
      throw AuditError(ErrorKind::kConfig, "term weight for \"" + token +
                                               "\" must be non-negative");
    }
  }
  if (!(flag_threshold_ > 0.0 && flag_threshold_ < 1.0)) {
    throw AuditError(ErrorKind::kConfig, "flag_threshold must be in (0,1)");
  }
}

double LexiconScorer::BaseScore(const std::string& text) const {
  double weight = 0.0;
  for (const std::string& word : LowerWords(text)) {
    const auto it = term_weights_.find(word);
    if (it != term_weights_.end()) weight += it->second;
  }
  return Squash(weight);
}

double LexiconScorer::Score(const std::string& text) const {
  double score = BaseScore(text);
  for (const auto& [group, delta] : deltas_) {
    const auto tokens = group_tokens_.find(group);
    if (tokens == group_tokens_.end()) continue;
    const bool present =
        std::any_of(tokens->second.begin(), tokens->second.end(),
                    [&](const std::string& token) {
                      return ContainsWholeWord(text, token);
                    });
    if (present) score += delta;
  }
  return std::clamp(score, 0.0, 1.0);
}

std::string LexiconScorer::Version() const {
  json doc;
  doc["term_weights"] = term_weights_;
  doc["flag_threshold"] = flag_threshold_;
  doc["deltas"] = deltas_;
  doc["group_tokens"] = group_tokens_;
  return "lexicon-" + Sha256Hex(doc.dump()).substr(0, 12);
}

LexiconScorer MakePlantedBiasScorer(
    const LexiconScorer& base, const std::map<std::string, double>& deltas,
    const TokenLexicon& lexicon) {
  LexiconScorer scorer = base;
  scorer.deltas_ = deltas;
  scorer.group_tokens_.clear();
  for (const auto& [group, delta] : deltas) {
    if (!lexicon.HasGroup(group)) {
      throw AuditError(ErrorKind::kUnknownGroup,
                       "planted delta for \"" + group +
                           "\" but the lexicon has no tokens for it");
    }
  }
  for (const std::string& group : lexicon.Groups()) {
    scorer.group_tokens_[group] = lexicon.GroupTokens(group);
  }
  return scorer;
}

ModerationScore NormalizeResponse(const json& raw, const ProviderSpec& spec) {
  if (!raw.is_object() || !raw.contains("scores") ||
      !raw["scores"].is_object()) {
    throw AuditError(ErrorKind::kMalformedResponse,
                     spec.id + ": response lacks a \"scores\" object");
  }
  ModerationScore score;
  score.provider_id = spec.id;
  for (const auto& [category, value] : raw["scores"].items()) {
    if (!value.is_number()) {
      throw AuditError(ErrorKind::kMalformedResponse,
                       spec.id + ": sub-score \"" + category +
                           "\" is not a number");
    }
    const double v = value.get<double>();
    if (v < 0.0 || v > 1.0) {
      throw AuditError(ErrorKind::kMalformedResponse,
                       spec.id + ": sub-score \"" + category +
                           "\" outside [0,1]: " + std::to_string(v));
    }
    score.sub_scores[category] = v;
  }
  double hate = 0.0;
  bool first = true;
  for (const std::string& category : spec.category_mapping) {
    const auto it = score.sub_scores.find(category);
    if (it == score.sub_scores.end()) {
      throw AuditError(ErrorKind::kUnknownCategory,
                       spec.id + ": mapped category \"" + category +
                           "\" absent from response");
    }
    hate = first ? it->second : std::max(hate, it->second);
    first = false;
  }
  score.hate_score = hate;
  if (raw.contains("flagged") && raw["flagged"].is_boolean()) {
    score.flagged = raw["flagged"].get<bool>();
  } else {
    score.flagged = score.hate_score >= 0.5;
  }
  if (raw.contains("model_version") && raw["model_version"].is_string()) {
    score.model_version = raw["model_version"].get<std::string>();
  } else {
    score.model_version = "unknown";
  }
  return score;
}

ProviderClient::ProviderClient(ProviderSpec spec, ScoreCache* cache,
                               HttpTransport* transport, Clock* clock,
                               const TokenLexicon* lexicon)
    : spec_(std::move(spec)),
      cache_(cache),
      transport_(transport),
      clock_(clock),
      limiter_(spec_.rate_limit > 0 ? spec_.rate_limit : 1.0, clock) {
  ValidateProviderSpec(spec_);
  if (spec_.kind == ProviderKind::kLexicon ||
      spec_.kind == ProviderKind::kPlantedBias) {
    // Local scorers publish their single score under the "hate" category.
    if (spec_.category_mapping.empty()) spec_.category_mapping = {"hate"};
    LexiconScorer base(spec_.term_weights, spec_.flag_threshold);
    if (spec_.kind == ProviderKind::kPlantedBias) {
      if (lexicon == nullptr) {
        throw AuditError(ErrorKind::kConfig,
                         spec_.id + ": planted-bias provider needs a lexicon");
      }
      scorer_ = std::make_unique<LexiconScorer>(
          MakePlantedBiasScorer(base, spec_.bias_deltas, *lexicon));
    } else {
      scorer_ = std::make_unique<LexiconScorer>(std::move(base));
    }
  }
  if (spec_.kind == ProviderKind::kRemoteApi && transport_ == nullptr) {
    throw AuditError(ErrorKind::kConfig,
                     spec_.id + ": remote provider needs a transport");
  }
}

namespace {

ModerationScore ScoreFromRecord(const std::string& text_id,
                                const ProviderSpec& spec,
                                const CacheRecord& record, bool from_cache) {
  ModerationScore score;
  score.text_id = text_id;
  score.provider_id = spec.id;
  score.model_version = record.model_version;
  if (record.raw_response.is_object() &&
      record.raw_response.contains("scores") &&
      record.raw_response["scores"].is_object()) {
    for (const auto& [category, value] : record.raw_response["scores"].items()) {
      if (value.is_number()) score.sub_scores[category] = value.get<double>();
    }
  }
  score.hate_score = record.hate_score;
  score.flagged = record.flagged;
  score.retrieved_at = record.retrieved_at;
  score.from_cache = from_cache;
  return score;
}

bool Retryable(int status) {
  return status == 0 || status == 429 || status >= 500;
}

}  // namespace

ModerationScore ProviderClient::ScoreText(const std::string& text_id,
                                          const std::string& text) {
  if (text.empty()) {
    throw AuditError(ErrorKind::kTextRejected,
                     spec_.id + "/" + text_id + ": empty text");
  }
  if (!IsValidUtf8(text)) {
    throw AuditError(ErrorKind::kTextRejected,
                     spec_.id + "/" + text_id + ": text is not valid UTF-8");
  }
  const std::string key = Sha256Hex(text);

  // Local scorers know their exact version, so a stale cache entry written
  // under different parameters is not a hit.
  std::optional<std::string> expected_version;
  if (scorer_ != nullptr) expected_version = scorer_->Version();

  if (const auto hit = cache_->Lookup(spec_.id, key, expected_version)) {
    return ScoreFromRecord(text_id, spec_, *hit, /*from_cache=*/true);
  }

  switch (spec_.kind) {
    case ProviderKind::kRemoteApi:
      return ScoreRemote(text_id, text, key);
    case ProviderKind::kLexicon:
    case ProviderKind::kPlantedBias:
      return ScoreLocal(text_id, text, key);
    case ProviderKind::kReplay:
      throw AuditError(ErrorKind::kCacheMiss,
                       spec_.id + "/" + text_id +
                           ": replay provider has no cached score");
  }
  throw AuditError(ErrorKind::kConfig, "unreachable provider kind");
}

ModerationScore ProviderClient::ScoreRemote(const std::string& text_id,
                                            const std::string& text,
                                            const std::string& text_key) {
  const char* secret = std::getenv(spec_.credential_ref.c_str());
  if (secret == nullptr || *secret == '\0') {
    throw AuditError(ErrorKind::kCredentialMissing,
                     spec_.id + "/" + text_id + ": environment variable " +
                         spec_.credential_ref + " is not set");
  }

  HttpRequest request;
  request.url = spec_.endpoint;
  request.headers.emplace_back("Authorization", std::string("Bearer ") + secret);
  request.body = json{{"text", text}}.dump();

  // Full-jitter exponential backoff; only 429/5xx/transport failures retry.
  Rng jitter(MixSeed(HashString64(text_key), HashString64(spec_.id)));
  HttpResponse response;
  for (int attempt = 1; attempt <= spec_.retry.max_attempts; ++attempt) {
    limiter_.Acquire();
    response = transport_->Post(request);
    if (response.status == 200) {
      json raw = json::parse(response.body, nullptr, /*allow_exceptions=*/false);
      if (raw.is_discarded()) {
        throw AuditError(ErrorKind::kMalformedResponse,
                         spec_.id + "/" + text_id +
                             ": response body is not JSON");
      }
      ModerationScore score = NormalizeResponse(raw, spec_);
      score.text_id = text_id;
      score.retrieved_at = NowUtcIso8601();

      CacheRecord record;
      record.key = text_key;
      record.model_version = score.model_version;
      record.retrieved_at = score.retrieved_at;
      record.raw_response = raw;
      record.hate_score = score.hate_score;
      record.flagged = score.flagged;
      cache_->Insert(spec_.id, record);
      return score;
    }
    if (response.status == 401 || response.status == 403) {
      throw AuditError(ErrorKind::kCredentialMissing,
                       spec_.id + "/" + text_id + ": credential rejected (HTTP " +
                           std::to_string(response.status) + ")");
    }
    if (!Retryable(response.status)) {
      throw AuditError(ErrorKind::kTextRejected,
                       spec_.id + "/" + text_id + ": provider refused (HTTP " +
                           std::to_string(response.status) + ")");
    }
    if (attempt < spec_.retry.max_attempts) {
      const double cap_ms = static_cast<double>(spec_.retry.base_backoff_ms) *
                            std::pow(2.0, attempt - 1);
      const auto delay = std::chrono::nanoseconds(
          static_cast<std::int64_t>(jitter.Uniform(0.0, cap_ms) * 1e6));
      clock_->SleepFor(delay);
    }
  }
  throw AuditError(ErrorKind::kRateLimitExhausted,
                   spec_.id + "/" + text_id + ": retries depleted (last HTTP " +
                       std::to_string(response.status) + ")");
}

ModerationScore ProviderClient::ScoreLocal(const std::string& text_id,
                                           const std::string& text,
                                           const std::string& text_key) {
  const double value = scorer_->Score(text);
  json raw;
  raw["scores"] = {{"hate", value}};
  raw["flagged"] = scorer_->Flagged(value);
  raw["model_version"] = scorer_->Version();

  ModerationScore score = NormalizeResponse(raw, spec_);
  score.text_id = text_id;
  score.retrieved_at = NowUtcIso8601();

  CacheRecord record;
  record.key = text_key;
  record.model_version = score.model_version;
  record.retrieved_at = score.retrieved_at;
  record.raw_response = raw;
  record.hate_score = score.hate_score;
  record.flagged = score.flagged;
  cache_->Insert(spec_.id, record);
  return score;
}

BatchResult ProviderClient::BatchScore(const std::vector<TextSample>& samples,
                                       const ProgressFn& progress) {
  {
    std::set<std::string> ids;
    for (const TextSample& s : samples) {
      if (!ids.insert(s.id).second) {
        throw AuditError(ErrorKind::kDuplicateId,
                         spec_.id + ": duplicate sample id \"" + s.id + "\"");
      }
    }
  }

  BatchResult result;
  result.scores.resize(samples.size());
  if (samples.empty()) return result;

  std::vector<std::optional<ErrorRecord>> error_slots(samples.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::atomic<bool> fatal{false};
  std::optional<AuditError> fatal_error;
  std::mutex fatal_mu;
  std::mutex progress_mu;

  const std::size_t workers = std::min<std::size_t>(
      static_cast<std::size_t>(spec_.max_concurrency), samples.size());

  auto work = [&]() {
    while (!fatal.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= samples.size()) return;
      const TextSample& sample = samples[i];
      try {
        result.scores[i] = ScoreText(sample.id, sample.text);
      } catch (const AuditError& e) {
        if (e.kind() == ErrorKind::kCredentialMissing) {
          std::lock_guard<std::mutex> lock(fatal_mu);
          if (!fatal_error) fatal_error = e;
          fatal.store(true);
          return;
        }
        error_slots[i] = ErrorRecord{sample.id, ErrorKindName(e.kind()),
                                     e.what()};
      }
      const std::size_t completed = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mu);
        progress(completed, samples.size());
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();

  if (fatal_error) throw *fatal_error;

  for (auto& slot : error_slots) {
    if (slot) result.errors.push_back(std::move(*slot));
  }
  return result;
}

}  // namespace modaudit
