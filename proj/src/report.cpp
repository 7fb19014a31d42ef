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

#include "modaudit/report.hpp"

#include <fstream>

#include "modaudit/error.hpp"
#include "modaudit/util.hpp"

namespace modaudit {

using nlohmann::json;

namespace {

json OptNumber(const std::optional<double>& v) {
  if (!v) return nullptr;
  return RoundSig6(*v);
}

std::optional<double> ReadOptNumber(const json& j, const char* field) {
  if (!j.contains(field) || j[field].is_null()) return std::nullopt;
  return j[field].get<double>();
}

std::string CsvEscape(const std::string& field) {
  const bool needs_quotes =
      field.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs_quotes) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string CsvNumber(const std::optional<double>& v) {
  return v ? FormatSig6(*v) : std::string();
}

void WriteFile(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw AuditError(ErrorKind::kIo, "cannot write " + path.string());
  }
  out << content;
  if (!out.good()) {
    throw AuditError(ErrorKind::kIo, "failed writing " + path.string());
  }
}

}  // namespace

json ReportToJson(const AuditReport& report) {
  json doc;

  json meta;
  meta["tool_name"] = report.meta.tool_name;
  meta["tool_version"] = report.meta.tool_version;
  meta["config_digest"] = report.meta.config_digest;
  meta["seed"] = report.meta.seed;
  meta["n_resamples"] = report.meta.n_resamples;
  meta["data_as_of"] = report.meta.data_as_of;
  meta["provider_model_versions"] = report.meta.provider_model_versions;
  meta["cft_convention"] = report.meta.cft_convention;
  doc["metadata"] = std::move(meta);

  doc["aggregate"] = json::array();
  for (const AggregateRow& row : report.aggregate) {
    json r;
    r["provider"] = row.provider;
    r["corpus"] = row.corpus;
    r["n"] = row.n;
    r["roc_auc"] = OptNumber(row.roc_auc);
    r["f1"] = OptNumber(row.f1);
    r["fpr"] = OptNumber(row.fpr);
    r["fnr"] = OptNumber(row.fnr);
    r["accuracy"] = OptNumber(row.accuracy);
    doc["aggregate"].push_back(std::move(r));
  }

  doc["groups"] = json::array();
  for (const GroupRow& row : report.groups) {
    json r;
    r["provider"] = row.provider;
    r["corpus"] = row.corpus;
    r["group"] = row.pinned.group;
    r["n_subgroup"] = row.pinned.n_subgroup;
    r["n_background_per_resample"] = row.pinned.n_background_per_resample;
    r["n_resamples"] = row.pinned.n_resamples;
    r["pinned_auc"] = RoundSig6(row.pinned.value);
    r["ci_low"] = row.pinned.ci95 ? json(RoundSig6(row.pinned.ci95->first))
                                  : json(nullptr);
    r["ci_high"] = row.pinned.ci95 ? json(RoundSig6(row.pinned.ci95->second))
                                   : json(nullptr);
    r["seed"] = row.pinned.seed;
    json values = json::array();
    for (double v : row.pinned.per_resample_values) {
      values.push_back(RoundSig6(v));
    }
    r["per_resample_values"] = std::move(values);
    doc["groups"].push_back(std::move(r));
  }

  doc["cft"] = json::array();
  for (const CftRow& row : report.cft) {
    json r;
    r["provider"] = row.provider;
    r["source"] = row.source;
    r["group"] = row.summary.group;
    r["toxic_slice"] = row.summary.toxic_slice;
    r["n_pairs"] = row.summary.n_pairs;
    r["mean_cft"] = RoundSig6(row.summary.mean_cft);
    r["ci_low"] = row.summary.ci95 ? json(RoundSig6(row.summary.ci95->first))
                                   : json(nullptr);
    r["ci_high"] = row.summary.ci95 ? json(RoundSig6(row.summary.ci95->second))
                                    : json(nullptr);
    doc["cft"].push_back(std::move(r));
  }

  doc["errors"] = json::array();
  for (const LedgerRow& row : report.errors) {
    doc["errors"].push_back(json{{"provider", row.provider},
                                 {"scope", row.scope},
                                 {"item_id", row.item_id},
                                 {"kind", row.kind},
                                 {"message", row.message}});
  }

  doc["skips"] = json::array();
  for (const SkipRow& row : report.skips) {
    doc["skips"].push_back(json{{"source", row.source},
                                {"item_id", row.item_id},
                                {"reason", row.reason}});
  }

  return doc;
}

AuditReport ReportFromJson(const json& doc) {
  AuditReport report;
  const json& meta = doc.at("metadata");
  report.meta.tool_name = meta.at("tool_name").get<std::string>();
  report.meta.tool_version = meta.at("tool_version").get<std::string>();
  report.meta.config_digest = meta.at("config_digest").get<std::string>();
  report.meta.seed = meta.at("seed").get<std::uint64_t>();
  report.meta.n_resamples = meta.at("n_resamples").get<std::size_t>();
  report.meta.data_as_of = meta.at("data_as_of").get<std::string>();
  report.meta.provider_model_versions =
      meta.at("provider_model_versions")
          .get<std::map<std::string, std::string>>();
  report.meta.cft_convention = meta.at("cft_convention").get<std::string>();

  for (const json& r : doc.at("aggregate")) {
    AggregateRow row;
    row.provider = r.at("provider").get<std::string>();
    row.corpus = r.at("corpus").get<std::string>();
    row.n = r.at("n").get<std::size_t>();
    row.roc_auc = ReadOptNumber(r, "roc_auc");
    row.f1 = ReadOptNumber(r, "f1");
    row.fpr = ReadOptNumber(r, "fpr");
    row.fnr = ReadOptNumber(r, "fnr");
    row.accuracy = ReadOptNumber(r, "accuracy");
    report.aggregate.push_back(std::move(row));
  }

  for (const json& r : doc.at("groups")) {
    GroupRow row;
    row.provider = r.at("provider").get<std::string>();
    row.corpus = r.at("corpus").get<std::string>();
    row.pinned.group = r.at("group").get<std::string>();
    row.pinned.n_subgroup = r.at("n_subgroup").get<std::size_t>();
    row.pinned.n_background_per_resample =
        r.at("n_background_per_resample").get<std::size_t>();
    row.pinned.n_resamples = r.at("n_resamples").get<std::size_t>();
    row.pinned.value = r.at("pinned_auc").get<double>();
    const auto low = ReadOptNumber(r, "ci_low");
    const auto high = ReadOptNumber(r, "ci_high");
    if (low && high) row.pinned.ci95 = std::make_pair(*low, *high);
    row.pinned.seed = r.at("seed").get<std::uint64_t>();
    for (const json& v : r.at("per_resample_values")) {
      row.pinned.per_resample_values.push_back(v.get<double>());
    }
    report.groups.push_back(std::move(row));
  }

  for (const json& r : doc.at("cft")) {
    CftRow row;
    row.provider = r.at("provider").get<std::string>();
    row.source = r.at("source").get<std::string>();
    row.summary.group = r.at("group").get<std::string>();
    row.summary.toxic_slice = r.at("toxic_slice").get<std::string>();
    row.summary.n_pairs = r.at("n_pairs").get<std::size_t>();
    row.summary.mean_cft = r.at("mean_cft").get<double>();
    const auto low = ReadOptNumber(r, "ci_low");
    const auto high = ReadOptNumber(r, "ci_high");
    if (low && high) row.summary.ci95 = std::make_pair(*low, *high);
    report.cft.push_back(std::move(row));
  }

  for (const json& r : doc.at("errors")) {
    report.errors.push_back(LedgerRow{r.at("provider").get<std::string>(),
                                      r.at("scope").get<std::string>(),
                                      r.at("item_id").get<std::string>(),
                                      r.at("kind").get<std::string>(),
                                      r.at("message").get<std::string>()});
  }

  for (const json& r : doc.at("skips")) {
    report.skips.push_back(SkipRow{r.at("source").get<std::string>(),
                                   r.at("item_id").get<std::string>(),
                                   r.at("reason").get<std::string>()});
  }

  return report;
}

std::vector<std::filesystem::path> EmitReport(
    const AuditReport& report, const std::filesystem::path& out_dir,
    bool write_json, bool write_csv) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;

  if (write_json) {
    const std::filesystem::path path = out_dir / "report.json";
    WriteFile(path, ReportToJson(report).dump(2) + "\n");
    written.push_back(path);
  }

  if (write_csv) {
    {
      std::string csv = "provider,corpus,n,roc_auc,f1,fpr,fnr,accuracy\n";
      for (const AggregateRow& row : report.aggregate) {
        csv += CsvEscape(row.provider) + "," + CsvEscape(row.corpus) + "," +
               std::to_string(row.n) + "," + CsvNumber(row.roc_auc) + "," +
               CsvNumber(row.f1) + "," + CsvNumber(row.fpr) + "," +
               CsvNumber(row.fnr) + "," + CsvNumber(row.accuracy) + "\n";
      }
      const std::filesystem::path path = out_dir / "aggregate.csv";
      WriteFile(path, csv);
      written.push_back(path);
    }
    {
      std::string csv =
          "provider,corpus,group,n_subgroup,n_resamples,pinned_auc,ci_low,"
          "ci_high\n";
      for (const GroupRow& row : report.groups) {
        std::optional<double> low, high;
        if (row.pinned.ci95) {
          low = row.pinned.ci95->first;
          high = row.pinned.ci95->second;
        }
        csv += CsvEscape(row.provider) + "," + CsvEscape(row.corpus) + "," +
               CsvEscape(row.pinned.group) + "," +
               std::to_string(row.pinned.n_subgroup) + "," +
               std::to_string(row.pinned.n_resamples) + "," +
               FormatSig6(RoundSig6(row.pinned.value)) + "," +
               CsvNumber(low ? std::optional<double>(RoundSig6(*low)) : low) +
               "," +
               CsvNumber(high ? std::optional<double>(RoundSig6(*high)) : high) +
               "\n";
      }
      const std::filesystem::path path = out_dir / "groups.csv";
      WriteFile(path, csv);
      written.push_back(path);
    }
    {
      std::string csv =
          "provider,source,group,toxic_slice,n_pairs,mean_cft,ci_low,ci_high\n";
      for (const CftRow& row : report.cft) {
        std::optional<double> low, high;
        if (row.summary.ci95) {
          low = row.summary.ci95->first;
          high = row.summary.ci95->second;
        }
        csv += CsvEscape(row.provider) + "," + CsvEscape(row.source) + "," +
               CsvEscape(row.summary.group) + "," + row.summary.toxic_slice +
               "," + std::to_string(row.summary.n_pairs) + "," +
               FormatSig6(RoundSig6(row.summary.mean_cft)) + "," +
               CsvNumber(low ? std::optional<double>(RoundSig6(*low)) : low) +
               "," +
               CsvNumber(high ? std::optional<double>(RoundSig6(*high)) : high) +
               "\n";
      }
      const std::filesystem::path path = out_dir / "cft.csv";
      WriteFile(path, csv);
      written.push_back(path);
    }
    {
      std::filesystem::create_directories(out_dir / "ledgers");
      std::string csv = "provider,scope,item_id,kind,message\n";
      for (const LedgerRow& row : report.errors) {
        csv += CsvEscape(row.provider) + "," + CsvEscape(row.scope) + "," +
               CsvEscape(row.item_id) + "," + CsvEscape(row.kind) + "," +
               CsvEscape(row.message) + "\n";
      }
      const std::filesystem::path errors_path = out_dir / "ledgers" / "errors.csv";
      WriteFile(errors_path, csv);
      written.push_back(errors_path);

      std::string skips = "source,item_id,reason\n";
      for (const SkipRow& row : report.skips) {
        skips += CsvEscape(row.source) + "," + CsvEscape(row.item_id) + "," +
                 CsvEscape(row.reason) + "\n";
      }
      const std::filesystem::path skips_path = out_dir / "ledgers" / "skips.csv";
      WriteFile(skips_path, skips);
      written.push_back(skips_path);
    }
  }

  return written;
}

}  // namespace modaudit
