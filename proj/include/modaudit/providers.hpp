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

// providers.hpp
//
// Uniform access to moderation scorers. Remote services are reached over
// HTTPS with caching, client-side rate limiting and retry; deterministic
// local scorers (a weighted lexicon, optionally with planted per-group score
// offsets) share the same interface so the whole audit pipeline can be
// validated against known ground truth. A scorer is a black box: one hate
// score in [0,1], per-category sub-scores when the service exposes them, and
// a binary flag.

#ifndef MODAUDIT_PROVIDERS_HPP_
#define MODAUDIT_PROVIDERS_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "modaudit/cache.hpp"
#include "modaudit/clock.hpp"
#include "modaudit/corpus.hpp"
#include "modaudit/error.hpp"
#include "modaudit/lexicon.hpp"
#include "modaudit/rate_limiter.hpp"
#include "modaudit/transport.hpp"

namespace modaudit {

enum class ProviderKind { kRemoteApi, kLexicon, kPlantedBias, kReplay };

const char* ProviderKindName(ProviderKind kind);
ProviderKind ParseProviderKind(const std::string& name);

struct RetryPolicy {
  int max_attempts = 5;
  int base_backoff_ms = 250;
};

struct ProviderSpec {
  std::string id;              // [A-Za-z0-9_-]+, doubles as the cache file stem
  ProviderKind kind = ProviderKind::kLexicon;
  std::string endpoint;        // remote-api only
  std::string credential_ref;  // name of the env var holding the secret
  std::vector<std::string> category_mapping;  // categories counted as hate
  double rate_limit = 10.0;    // requests per second, > 0
  int max_concurrency = 4;     // >= 1
  RetryPolicy retry;

  // Local scorer configuration (lexicon / planted-bias kinds).
  std::map<std::string, double> term_weights;
  std::map<std::string, double> bias_deltas;  // group -> additive delta
  double flag_threshold = 0.5;
};

// Throws config-error on violated invariants.
void ValidateProviderSpec(const ProviderSpec& spec);

struct ModerationScore {
  std::string text_id;
  std::string provider_id;
  std::string model_version = "unknown";
  std::map<std::string, double> sub_scores;
  double hate_score = 0.0;
  bool flagged = false;
  std::string retrieved_at;
  bool from_cache = false;
};

// Deterministic scorer: sums term weights over word occurrences, squashes
// with w / (1 + w), then adds the delta of every group whose lexicon tokens
// occur in the text, clamped to [0,1]. With empty deltas this is a plain
// lexicon scorer. squash(0) = 0 and squash is monotone, so weight-free text
// scores 0 and more matched weight never lowers the score.
class LexiconScorer {
 public:
  LexiconScorer(std::map<std::string, double> term_weights,
                double flag_threshold = 0.5);

  double BaseScore(const std::string& text) const;
  double Score(const std::string& text) const;
  bool Flagged(double score) const { return score >= flag_threshold_; }

  static double Squash(double weight) { return weight / (1.0 + weight); }

  // Digest of the scoring parameters; changes whenever behavior would.
  std::string Version() const;

  const std::map<std::string, double>& term_weights() const {
    return term_weights_;
  }
  double flag_threshold() const { return flag_threshold_; }
  const std::map<std::string, std::vector<std::string>>& group_tokens() const {
    return group_tokens_;
  }
  const std::map<std::string, double>& deltas() const { return deltas_; }

 private:
  friend LexiconScorer MakePlantedBiasScorer(
      const LexiconScorer& base, const std::map<std::string, double>& deltas,
      const TokenLexicon& lexicon);

  std::map<std::string, double> term_weights_;
  double flag_threshold_;
  std::map<std::string, double> deltas_;
  std::map<std::string, std::vector<std::string>> group_tokens_;
};

// Copies `base` and plants the given per-group score offsets; group tokens
// come from the lexicon. Throws unknown-group for deltas naming groups the
// lexicon does not cover.
LexiconScorer MakePlantedBiasScorer(
    const LexiconScorer& base, const std::map<std::string, double>& deltas,
    const TokenLexicon& lexicon);

// Collapses a provider response document to one ModerationScore:
// sub-scores verbatim, hate score = max over the spec's category mapping,
// flag = native flag when present, else hate_score >= 0.5. A mapped category
// missing from the response is an unknown-category error, not a silent zero.
//
// Expected document shape:
//   {"scores": {"<category>": <0..1>, ...},
//    "flagged": <bool, optional>, "model_version": "<str, optional>"}
ModerationScore NormalizeResponse(const nlohmann::json& raw,
                                  const ProviderSpec& spec);

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

struct BatchResult {
  // Order-aligned with the input; a slot is empty when that sample failed.
  std::vector<std::optional<ModerationScore>> scores;
  std::vector<ErrorRecord> errors;  // in input order

  std::size_t scored() const {
    std::size_t n = 0;
    for (const auto& s : scores) n += s.has_value() ? 1 : 0;
    return n;
  }
};

// One provider's scoring client. Immutable spec, shared cache; safe to call
// ScoreText from several threads. BatchScore runs its own worker pool of at
// most max_concurrency threads, paced by a shared per-client rate limiter.
class ProviderClient {
 public:
  // transport may be null for local kinds; lexicon may be null unless kind
  // is planted-bias (its deltas need group tokens).
  ProviderClient(ProviderSpec spec, ScoreCache* cache,
                 HttpTransport* transport, Clock* clock,
                 const TokenLexicon* lexicon = nullptr);

  // Cache-through scoring of one text. A hit returns the stored outcome with
  // from_cache = true and makes no network call; a miss stores the raw
  // response and normalized score before returning.
  ModerationScore ScoreText(const std::string& text_id,
                            const std::string& text);

  // Scores every sample. Per-sample failures go to the error ledger; a
  // credential failure aborts the whole batch.
  BatchResult BatchScore(const std::vector<TextSample>& samples,
                         const ProgressFn& progress = {});

  const ProviderSpec& spec() const { return spec_; }
  RateLimiter& limiter() { return limiter_; }

 private:
  ModerationScore ScoreRemote(const std::string& text_id,
                              const std::string& text,
                              const std::string& text_key);
  ModerationScore ScoreLocal(const std::string& text_id,
                             const std::string& text,
                             const std::string& text_key);

  ProviderSpec spec_;
  ScoreCache* cache_;
  HttpTransport* transport_;
  Clock* clock_;
  std::unique_ptr<LexiconScorer> scorer_;  // local kinds
  RateLimiter limiter_;
};

}  // namespace modaudit

#endif  // MODAUDIT_PROVIDERS_HPP_
