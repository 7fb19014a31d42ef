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

#include "modaudit/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "modaudit/cache.hpp"
#include "modaudit/util.hpp"
#include "modaudit/version.hpp"

namespace modaudit {

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> budget;
  std::string providers;  // comma-separated subset
  std::string out_dir;
  std::string format = "json,csv";
  int verbosity = 0;
};

AuditConfig LoadEffectiveConfig(const CommonFlags& flags) {
  AuditConfig config = LoadAuditConfig(flags.config_path);
  if (flags.seed) config.seed = *flags.seed;
  if (flags.budget) config.budget = *flags.budget;
  if (!flags.out_dir.empty()) config.output_dir = flags.out_dir;
  if (!flags.providers.empty()) {
    std::set<std::string> keep;
    std::stringstream ss(flags.providers);
    std::string id;
    while (std::getline(ss, id, ',')) {
      if (!id.empty()) keep.insert(id);
    }
    for (const std::string& want : keep) {
      const bool known = std::any_of(
          config.providers.begin(), config.providers.end(),
          [&](const ProviderSpec& p) { return p.id == want; });
      if (!known) {
        throw AuditError(ErrorKind::kConfig,
                         "--providers names unknown provider \"" + want + "\"");
      }
    }
    std::erase_if(config.providers, [&](const ProviderSpec& p) {
      return !keep.contains(p.id);
    });
  }
  return config;
}

std::pair<bool, bool> ParseFormats(const std::string& format) {
  bool write_json = false;
  bool write_csv = false;
  std::stringstream ss(format);
  std::string f;
  while (std::getline(ss, f, ',')) {
    if (f == "json") {
      write_json = true;
    } else if (f == "csv") {
      write_csv = true;
    } else if (!f.empty()) {
      throw AuditError(ErrorKind::kConfig, "unknown format \"" + f + "\"");
    }
  }
  if (!write_json && !write_csv) {
    throw AuditError(ErrorKind::kConfig, "--format selects nothing");
  }
  return {write_json, write_csv};
}

std::string Cell(const std::optional<double>& v) {
  return v ? FormatSig6(RoundSig6(*v)) : std::string("-");
}

void PrintSummary(const AuditReport& report, std::ostream& out) {
  out << "provider        corpus          n       roc_auc  f1       fpr      fnr\n";
  for (const AggregateRow& row : report.aggregate) {
    std::ostringstream line;
    line << std::left << std::setw(16) << row.provider << std::setw(16)
         << row.corpus << std::setw(8) << row.n << std::setw(9)
         << Cell(row.roc_auc) << std::setw(9) << Cell(row.f1) << std::setw(9)
         << Cell(row.fpr) << std::setw(9) << Cell(row.fnr);
    out << line.str() << "\n";
  }
}

void PrintCft(const AuditReport& report, std::ostream& out) {
  if (report.cft.empty()) return;
  out << "provider        source          group           slice      n_pairs  mean_cft\n";
  for (const CftRow& row : report.cft) {
    std::ostringstream line;
    line << std::left << std::setw(16) << row.provider << std::setw(16)
         << row.source << std::setw(16) << row.summary.group << std::setw(11)
         << row.summary.toxic_slice << std::setw(9) << row.summary.n_pairs
         << FormatSig6(RoundSig6(row.summary.mean_cft));
    out << line.str() << "\n";
  }
}

int CmdAudit(const CommonFlags& flags, AuditMode mode, std::ostream& out,
             std::ostream& err, const AuditEnv& env_in) {
  AuditConfig config = LoadEffectiveConfig(flags);
  const auto [write_json, write_csv] = ParseFormats(flags.format);

  AuditEnv env = env_in;
  if (flags.verbosity > 0 && env.diagnostics == nullptr) {
    env.diagnostics = &err;
  }
  env.verbosity = flags.verbosity;

  const AuditReport report = RunAudit(config, env, mode);
  const auto written = EmitReport(report, config.output_dir, write_json,
                                  write_csv);

  if (mode == AuditMode::kFull) PrintSummary(report, out);
  PrintCft(report, out);
  for (const auto& path : written) out << path.string() << "\n";
  if (!report.errors.empty()) {
    err << report.errors.size() << " per-item errors recorded in the ledger\n";
  }
  return kExitOk;
}

int CmdValidate(const CommonFlags& flags, std::ostream& out, std::ostream& err,
                const AuditEnv& env) {
  AuditConfig config = LoadEffectiveConfig(flags);
  if (config.validate_deltas.empty()) {
    throw AuditError(ErrorKind::kConfig,
                     "config lacks validate.deltas for planted-bias mode");
  }
  const ValidationReport report =
      ValidatePlantedBias(config.validate_deltas, config, env);
  for (const ValidationCheck& check : report.checks) {
    const char* relation =
        check.mode == ValidationCheck::Mode::kAbsDiff
            ? "expected"
            : (check.mode == ValidationCheck::Mode::kAtLeast ? ">=" : "<=");
    out << (check.pass ? "PASS" : "FAIL") << "  " << check.name << ": "
        << relation << " " << FormatSig6(check.expected) << ", measured "
        << FormatSig6(check.measured);
    if (check.mode == ValidationCheck::Mode::kAbsDiff) {
      out << " (tolerance " << FormatSig6(check.tolerance) << ")";
    }
    out << "\n";
  }
  if (!report.all_pass) {
    err << "planted-bias validation failed\n";
    return kExitFailure;
  }
  return kExitOk;
}

int CmdCacheList(const std::string& cache_dir, std::ostream& out) {
  ScoreCache cache(cache_dir);
  const auto providers = cache.ProvidersOnDisk();
  for (const std::string& provider : providers) {
    std::string versions;
    for (const std::string& v : cache.ModelVersions(provider)) {
      if (!versions.empty()) versions += ";";
      versions += v;
    }
    out << provider << "\t" << cache.EntryCount(provider) << "\t" << versions
        << "\n";
  }
  if (providers.empty()) out << "cache empty\n";
  return kExitOk;
}

int CmdCacheVerify(const CommonFlags& flags, std::ostream& out,
                   std::ostream& err) {
  const AuditConfig config = LoadEffectiveConfig(flags);
  ScoreCache cache(config.cache_dir);
  std::size_t mismatches = 0;
  std::size_t checked = 0;
  for (const ProviderSpec& spec : config.providers) {
    for (const CacheRecord& record : cache.Records(spec.id)) {
      ++checked;
      std::string problem;
      try {
        const ModerationScore fresh = NormalizeResponse(record.raw_response,
                                                        spec);
        if (fresh.hate_score != record.hate_score) {
          problem = "hate_score " + FormatSig6(record.hate_score) + " -> " +
                    FormatSig6(fresh.hate_score);
        } else if (fresh.flagged != record.flagged) {
          problem = std::string("flagged ") +
                    (record.flagged ? "true" : "false") + " -> " +
                    (fresh.flagged ? "true" : "false");
        }
      } catch (const AuditError& e) {
        problem = e.what();
      }
      if (!problem.empty()) {
        ++mismatches;
        out << spec.id << "\t" << record.key << "\t" << problem << "\n";
      }
    }
  }
  err << checked << " records checked, " << mismatches << " mismatches\n";
  return mismatches == 0 ? kExitOk : kExitFailure;
}

int CmdCachePurge(const std::string& cache_dir, const std::string& provider,
                  bool yes, std::ostream& out, std::ostream& err,
                  std::istream& in) {
  if (!yes) {
    err << "purge cache for provider \"" << provider << "\"? [y/N] ";
    std::string answer;
    std::getline(in, answer);
    if (answer != "y" && answer != "Y" && answer != "yes") {
      err << "aborted\n";
      return kExitFailure;
    }
  }
  ScoreCache cache(cache_dir);
  const bool removed = cache.PurgeProvider(provider);
  out << (removed ? "purged " : "no cache for ") << provider << "\n";
  return kExitOk;
}

int CmdReport(const std::string& in_path, const std::string& out_dir,
              const std::string& format, std::ostream& out) {
  std::ifstream in(in_path);
  if (!in) {
    throw AuditError(ErrorKind::kConfig,
                     "cannot open report: " + in_path);
  }
  nlohmann::json doc = nlohmann::json::parse(in, nullptr,
                                             /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    throw AuditError(ErrorKind::kConfig,
                     "report is not valid JSON: " + in_path);
  }
  const AuditReport report = ReportFromJson(doc);
  const auto [write_json, write_csv] = ParseFormats(format);
  for (const auto& path : EmitReport(report, out_dir, write_json, write_csv)) {
    out << path.string() << "\n";
  }
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err, std::istream& in, const AuditEnv& env) {
  CLI::App app{"black-box fairness audit for content moderation scorers",
               kToolName};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  CommonFlags flags;
  auto add_common = [&](CLI::App* cmd, bool with_overrides) {
    cmd->add_option("--config", flags.config_path, "config file (JSON)")
        ->required();
    cmd->add_flag("-v,--verbose", flags.verbosity, "diagnostics to stderr");
    if (with_overrides) {
      cmd->add_option("--seed", flags.seed, "override config seed");
      cmd->add_option("--budget", flags.budget, "override sample budget");
      cmd->add_option("--providers", flags.providers,
                      "comma-separated provider subset");
      cmd->add_option("--out", flags.out_dir, "override output directory");
      cmd->add_option("--format", flags.format, "json,csv subset");
    }
  };

  CLI::App* audit_cmd =
      app.add_subcommand("audit", "run the full audit pipeline");
  add_common(audit_cmd, true);

  CLI::App* psa_cmd = app.add_subcommand(
      "psa", "run only the counterfactual perturbation analysis");
  add_common(psa_cmd, true);

  CLI::App* validate_cmd = app.add_subcommand(
      "validate", "planted-bias self-validation of the pipeline");
  add_common(validate_cmd, false);
  validate_cmd->add_option("--seed", flags.seed, "override config seed");

  CLI::App* cache_cmd = app.add_subcommand("cache", "inspect the score cache");
  cache_cmd->require_subcommand(1);
  std::string cache_dir;
  std::string purge_provider;
  bool purge_yes = false;
  CLI::App* cache_list = cache_cmd->add_subcommand("list", "entry counts");
  cache_list->add_option("--cache-dir", cache_dir, "cache directory")
      ->required();
  CLI::App* cache_verify = cache_cmd->add_subcommand(
      "verify", "re-normalize stored raw responses and compare");
  cache_verify->add_option("--config", flags.config_path, "config file (JSON)")
      ->required();
  CLI::App* cache_purge =
      cache_cmd->add_subcommand("purge-provider", "drop one provider's cache");
  cache_purge->add_option("provider", purge_provider, "provider id")
      ->required();
  cache_purge->add_option("--cache-dir", cache_dir, "cache directory")
      ->required();
  cache_purge->add_flag("--yes", purge_yes, "skip confirmation");

  CLI::App* report_cmd = app.add_subcommand(
      "report", "re-emit an existing report.json in other formats");
  std::string report_in;
  std::string report_out;
  std::string report_format = "json,csv";
  report_cmd->add_option("--in", report_in, "existing report.json")->required();
  report_cmd->add_option("--out", report_out, "output directory")->required();
  report_cmd->add_option("--format", report_format, "json,csv subset");

  std::vector<std::string> argv(args);
  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help / --version
      out << app.help();
      return kExitOk;
    }
    err << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (audit_cmd->parsed()) {
      return CmdAudit(flags, AuditMode::kFull, out, err, env);
    }
    if (psa_cmd->parsed()) {
      return CmdAudit(flags, AuditMode::kPsaOnly, out, err, env);
    }
    if (validate_cmd->parsed()) return CmdValidate(flags, out, err, env);
    if (cache_cmd->parsed()) {
      if (cache_list->parsed()) return CmdCacheList(cache_dir, out);
      if (cache_verify->parsed()) return CmdCacheVerify(flags, out, err);
      if (cache_purge->parsed()) {
        return CmdCachePurge(cache_dir, purge_provider, purge_yes, out, err,
                             in);
      }
    }
    if (report_cmd->parsed()) {
      return CmdReport(report_in, report_out, report_format, out);
    }
  } catch (const AuditError& e) {
    err << e.what() << "\n";
    const bool config_error = e.kind() == ErrorKind::kConfig ||
                              e.kind() == ErrorKind::kUnknownGroup;
    return config_error ? kExitConfig : kExitFailure;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitFailure;
  }
  err << "no subcommand\n";
  return kExitConfig;
}

}  // namespace modaudit
