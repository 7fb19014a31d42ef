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

// audit.hpp
//
// Orchestration of a full audit run: prepare corpora (load, map groups,
// balance, optional budget sampling), score them through every configured
// provider, compute aggregate and per-group metrics and CFT statistics, and
// assemble a reproducible report. All randomness is derived from the single
// config seed; per-item failures land in ledgers and the run completes.
//
// ValidatePlantedBias is the self-test mode: it drives the same pipeline
// against a deterministic scorer with known per-group score offsets and
// checks that the measured CFT statistics recover them exactly, and that
// pinned AUC detects a synthetic group-specific separability deficit.

#ifndef MODAUDIT_AUDIT_HPP_
#define MODAUDIT_AUDIT_HPP_

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "modaudit/clock.hpp"
#include "modaudit/corpus.hpp"
#include "modaudit/providers.hpp"
#include "modaudit/report.hpp"
#include "modaudit/transport.hpp"

namespace modaudit {

struct CorpusConfig {
  std::string name;
  std::filesystem::path path;
  CorpusFormat format = CorpusFormat::kJsonl;
  CorpusSchema schema;
  GroupMapping mapping;
  bool derive_pairs = false;
};

struct AuditConfig {
  std::uint64_t seed = 0;
  std::size_t n_resamples = 100;
  std::optional<std::size_t> budget;
  std::filesystem::path output_dir = "audit-out";
  std::filesystem::path cache_dir = "modaudit-cache";
  GroupRegistry registry = GroupRegistry::Default();
  std::optional<std::filesystem::path> lexicon_path;
  std::optional<std::filesystem::path> template_path;
  std::vector<ProviderSpec> providers;
  std::vector<CorpusConfig> corpora;

  // Planted-bias validation inputs.
  std::map<std::string, double> validate_deltas;
  std::map<std::string, double> validate_term_weights;
};

// Parses and validates the config document. Relative paths are resolved
// against the config file's directory.
AuditConfig LoadAuditConfig(const std::filesystem::path& path);
AuditConfig AuditConfigFromJson(const nlohmann::json& doc,
                                const std::filesystem::path& base_dir);

// Canonical serialization of the effective config (after CLI overrides);
// its SHA-256 is the report's config digest.
nlohmann::json AuditConfigToJson(const AuditConfig& config);
std::string ConfigDigest(const AuditConfig& config);

// Injection points so tests can swap the clock and transport.
struct AuditEnv {
  Clock* clock = nullptr;  // defaults to a process-wide SystemClock
  std::function<std::unique_ptr<HttpTransport>(const ProviderSpec&)>
      transport_factory;   // defaults to HttplibTransport
  std::ostream* diagnostics = nullptr;
  int verbosity = 0;
};

enum class AuditMode { kFull, kPsaOnly };

AuditReport RunAudit(const AuditConfig& config, const AuditEnv& env = {},
                     AuditMode mode = AuditMode::kFull);

// One self-validation assertion: how `measured` must relate to `expected`.
struct ValidationCheck {
  enum class Mode { kAbsDiff, kAtLeast, kAtMost };

  std::string name;
  double expected = 0.0;
  double measured = 0.0;
  double tolerance = 0.0;
  Mode mode = Mode::kAbsDiff;
  bool pass = false;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_pass = false;
};

ValidationReport ValidatePlantedBias(const std::map<std::string, double>& deltas,
                                     const AuditConfig& config,
                                     const AuditEnv& env = {});

}  // namespace modaudit

#endif  // MODAUDIT_AUDIT_HPP_
