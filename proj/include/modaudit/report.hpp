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

// report.hpp
//
// The serialized audit outcome. Everything is deterministic given (config,
// cache): rows are emitted in config/registry order, floats are rounded to
// 6 significant digits (ties to even) before serialization, undefined
// metrics stay null in JSON and empty in CSV, and the only timestamp is
// data_as_of, the newest retrieved_at among the scores used, so regenerating
// a report from a warm cache reproduces it byte for byte.

#ifndef MODAUDIT_REPORT_HPP_
#define MODAUDIT_REPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "modaudit/metrics.hpp"
#include "modaudit/psa.hpp"

namespace modaudit {

struct AggregateRow {
  std::string provider;
  std::string corpus;
  std::size_t n = 0;  // samples that produced a score
  std::optional<double> roc_auc;
  std::optional<double> f1;
  std::optional<double> fpr;
  std::optional<double> fnr;
  std::optional<double> accuracy;
};

struct GroupRow {
  std::string provider;
  std::string corpus;
  PinnedAucResult pinned;
};

struct CftRow {
  std::string provider;
  std::string source;
  CftGroupSummary summary;
};

struct LedgerRow {
  std::string provider;
  std::string scope;  // corpus or pair-source name
  std::string item_id;
  std::string kind;
  std::string message;
};

struct SkipRow {
  std::string source;
  std::string item_id;
  std::string reason;
};

struct RunMetadata {
  std::string tool_name;
  std::string tool_version;
  std::string config_digest;
  std::uint64_t seed = 0;
  std::size_t n_resamples = 0;
  std::string data_as_of;  // newest retrieved_at across used scores
  std::map<std::string, std::string> provider_model_versions;
  std::string cft_convention;
};

struct AuditReport {
  RunMetadata meta;
  std::vector<AggregateRow> aggregate;
  std::vector<GroupRow> groups;
  std::vector<CftRow> cft;
  std::vector<LedgerRow> errors;
  std::vector<SkipRow> skips;
};

nlohmann::json ReportToJson(const AuditReport& report);
AuditReport ReportFromJson(const nlohmann::json& doc);

enum class ReportFormat { kJson = 1, kCsv = 2 };

// Writes report.json and/or aggregate.csv, groups.csv, cft.csv plus
// ledgers/errors.csv and ledgers/skips.csv under out_dir. Returns the paths
// written, in a fixed order.
std::vector<std::filesystem::path> EmitReport(const AuditReport& report,
                                              const std::filesystem::path& out_dir,
                                              bool write_json, bool write_csv);

}  // namespace modaudit

#endif  // MODAUDIT_REPORT_HPP_
