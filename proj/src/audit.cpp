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

#include "modaudit/audit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <set>

#include "modaudit/lexicon.hpp"
#include "modaudit/metrics.hpp"
#include "modaudit/psa.hpp"
#include "modaudit/rng.hpp"
#include "modaudit/util.hpp"
#include "modaudit/version.hpp"

namespace modaudit {

using nlohmann::json;

namespace {

constexpr const char* kCftConvention =
    "cft = minority score - anchor score; positive means the minority "
    "identity is scored as more toxic";

std::filesystem::path ResolvePath(const std::filesystem::path& base_dir,
                                  const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_absolute() || base_dir.empty()) return path;
  return base_dir / path;
}

RetryPolicy ParseRetry(const json& j) {
  RetryPolicy policy;
  if (j.contains("max_attempts")) policy.max_attempts = j["max_attempts"];
  if (j.contains("base_backoff_ms")) {
    policy.base_backoff_ms = j["base_backoff_ms"];
  }
  return policy;
}

ProviderSpec ParseProvider(const json& j) {
  ProviderSpec spec;
  if (!j.contains("id") || !j.contains("kind")) {
    throw AuditError(ErrorKind::kConfig, "provider needs \"id\" and \"kind\"");
  }
  spec.id = j["id"].get<std::string>();
  spec.kind = ParseProviderKind(j["kind"].get<std::string>());
  if (j.contains("endpoint")) spec.endpoint = j["endpoint"].get<std::string>();
  if (j.contains("credential_ref")) {
    spec.credential_ref = j["credential_ref"].get<std::string>();
  }
  if (j.contains("category_mapping")) {
    spec.category_mapping =
        j["category_mapping"].get<std::vector<std::string>>();
  }
  if (j.contains("rate_limit")) spec.rate_limit = j["rate_limit"].get<double>();
  if (j.contains("max_concurrency")) {
    spec.max_concurrency = j["max_concurrency"].get<int>();
  }
  if (j.contains("retry")) spec.retry = ParseRetry(j["retry"]);
  if (j.contains("term_weights")) {
    spec.term_weights = j["term_weights"].get<std::map<std::string, double>>();
  }
  if (j.contains("bias_deltas")) {
    spec.bias_deltas = j["bias_deltas"].get<std::map<std::string, double>>();
  }
  if (j.contains("flag_threshold")) {
    spec.flag_threshold = j["flag_threshold"].get<double>();
  }
  ValidateProviderSpec(spec);
  return spec;
}

CorpusConfig ParseCorpus(const json& j, const std::filesystem::path& base_dir,
                         const GroupRegistry& registry) {
  CorpusConfig cfg;
  if (!j.contains("name") || !j.contains("path")) {
    throw AuditError(ErrorKind::kConfig, "corpus needs \"name\" and \"path\"");
  }
  cfg.name = j["name"].get<std::string>();
  cfg.path = ResolvePath(base_dir, j["path"].get<std::string>());
  if (j.contains("format")) {
    const std::string format = j["format"].get<std::string>();
    if (format == "jsonl") {
      cfg.format = CorpusFormat::kJsonl;
    } else if (format == "csv") {
      cfg.format = CorpusFormat::kCsv;
    } else {
      throw AuditError(ErrorKind::kConfig,
                       cfg.name + ": unknown corpus format \"" + format + "\"");
    }
  }
  if (j.contains("schema")) {
    const json& s = j["schema"];
    if (s.contains("id")) cfg.schema.id_field = s["id"].get<std::string>();
    if (s.contains("text")) cfg.schema.text_field = s["text"].get<std::string>();
    if (s.contains("toxic")) {
      cfg.schema.toxic_field = s["toxic"].get<std::string>();
    }
    if (s.contains("groups")) {
      cfg.schema.groups_field = s["groups"].get<std::string>();
    }
    if (s.contains("source")) {
      cfg.schema.source_field = s["source"].get<std::string>();
    }
  }
  if (j.contains("mapping")) {
    const json& m = j["mapping"];
    if (m.contains("rules")) {
      cfg.mapping.rules = m["rules"].get<std::map<std::string, std::string>>();
    }
    if (m.contains("unmapped_policy")) {
      const std::string policy = m["unmapped_policy"].get<std::string>();
      if (policy == "drop-group") {
        cfg.mapping.unmapped_policy = UnmappedPolicy::kDropGroup;
      } else if (policy == "error") {
        cfg.mapping.unmapped_policy = UnmappedPolicy::kError;
      } else {
        throw AuditError(ErrorKind::kConfig,
                         cfg.name + ": unknown unmapped_policy \"" + policy +
                             "\"");
      }
    }
    for (const auto& [raw, canonical] : cfg.mapping.rules) {
      if (!registry.Contains(canonical)) {
        throw AuditError(ErrorKind::kConfig,
                         cfg.name + ": mapping target \"" + canonical +
                             "\" is not in the registry");
      }
    }
  }
  if (j.contains("derive_pairs")) cfg.derive_pairs = j["derive_pairs"];
  return cfg;
}

}  // namespace

AuditConfig AuditConfigFromJson(const json& doc,
                                const std::filesystem::path& base_dir) {
  if (!doc.is_object()) {
    throw AuditError(ErrorKind::kConfig, "config must be a JSON object");
  }
  AuditConfig config;
  if (!doc.contains("seed") || !doc["seed"].is_number()) {
    throw AuditError(ErrorKind::kConfig, "config needs a numeric \"seed\"");
  }
  config.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("n_resamples")) {
    config.n_resamples = doc["n_resamples"].get<std::size_t>();
  }
  if (doc.contains("budget") && !doc["budget"].is_null()) {
    config.budget = doc["budget"].get<std::size_t>();
  }
  if (doc.contains("output_dir")) {
    config.output_dir =
        ResolvePath(base_dir, doc["output_dir"].get<std::string>());
  }
  if (doc.contains("cache_dir")) {
    config.cache_dir =
        ResolvePath(base_dir, doc["cache_dir"].get<std::string>());
  }
  if (doc.contains("registry")) {
    config.registry =
        GroupRegistry(doc["registry"].get<std::vector<std::string>>());
  }
  if (doc.contains("lexicon") && !doc["lexicon"].is_null()) {
    config.lexicon_path = ResolvePath(base_dir, doc["lexicon"].get<std::string>());
  }
  if (doc.contains("templates") && !doc["templates"].is_null()) {
    config.template_path =
        ResolvePath(base_dir, doc["templates"].get<std::string>());
  }
  if (doc.contains("providers")) {
    for (const json& p : doc["providers"]) {
      config.providers.push_back(ParseProvider(p));
    }
  }
  std::set<std::string> provider_ids;
  for (const ProviderSpec& p : config.providers) {
    if (!provider_ids.insert(p.id).second) {
      throw AuditError(ErrorKind::kConfig,
                       "duplicate provider id \"" + p.id + "\"");
    }
  }
  if (doc.contains("corpora")) {
    for (const json& c : doc["corpora"]) {
      config.corpora.push_back(ParseCorpus(c, base_dir, config.registry));
    }
  }
  std::set<std::string> corpus_names;
  for (const CorpusConfig& c : config.corpora) {
    if (!corpus_names.insert(c.name).second) {
      throw AuditError(ErrorKind::kConfig,
                       "duplicate corpus name \"" + c.name + "\"");
    }
  }
  if (doc.contains("validate")) {
    const json& v = doc["validate"];
    if (v.contains("deltas")) {
      config.validate_deltas =
          v["deltas"].get<std::map<std::string, double>>();
    }
    if (v.contains("term_weights")) {
      config.validate_term_weights =
          v["term_weights"].get<std::map<std::string, double>>();
    }
  }

  if (config.providers.empty()) {
    throw AuditError(ErrorKind::kConfig, "config needs at least one provider");
  }
  if (config.corpora.empty() && !config.template_path) {
    throw AuditError(ErrorKind::kConfig,
                     "config needs at least one corpus or a template file");
  }
  return config;
}

AuditConfig LoadAuditConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw AuditError(ErrorKind::kConfig,
                     "cannot open config file: " + path.string());
  }
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    throw AuditError(ErrorKind::kConfig,
                     "config file is not valid JSON: " + path.string());
  }
  return AuditConfigFromJson(doc, path.parent_path());
}

json AuditConfigToJson(const AuditConfig& config) {
  json doc;
  doc["seed"] = config.seed;
  doc["n_resamples"] = config.n_resamples;
  doc["budget"] = config.budget ? json(*config.budget) : json(nullptr);
  doc["output_dir"] = config.output_dir.string();
  doc["cache_dir"] = config.cache_dir.string();
  doc["registry"] = config.registry.groups();
  doc["lexicon"] =
      config.lexicon_path ? json(config.lexicon_path->string()) : json(nullptr);
  doc["templates"] = config.template_path
                         ? json(config.template_path->string())
                         : json(nullptr);
  doc["providers"] = json::array();
  for (const ProviderSpec& p : config.providers) {
    json pj;
    pj["id"] = p.id;
    pj["kind"] = ProviderKindName(p.kind);
    pj["endpoint"] = p.endpoint;
    pj["credential_ref"] = p.credential_ref;
    pj["category_mapping"] = p.category_mapping;
    pj["rate_limit"] = p.rate_limit;
    pj["max_concurrency"] = p.max_concurrency;
    pj["retry"] = {{"max_attempts", p.retry.max_attempts},
                   {"base_backoff_ms", p.retry.base_backoff_ms}};
    pj["term_weights"] = p.term_weights;
    pj["bias_deltas"] = p.bias_deltas;
    pj["flag_threshold"] = p.flag_threshold;
    doc["providers"].push_back(std::move(pj));
  }
  doc["corpora"] = json::array();
  for (const CorpusConfig& c : config.corpora) {
    json cj;
    cj["name"] = c.name;
    cj["path"] = c.path.string();
    cj["format"] = c.format == CorpusFormat::kJsonl ? "jsonl" : "csv";
    cj["schema"] = {{"id", c.schema.id_field},
                    {"text", c.schema.text_field},
                    {"toxic", c.schema.toxic_field},
                    {"groups", c.schema.groups_field},
                    {"source", c.schema.source_field}};
    cj["mapping"] = {
        {"rules", c.mapping.rules},
        {"unmapped_policy",
         c.mapping.unmapped_policy == UnmappedPolicy::kDropGroup ? "drop-group"
                                                                 : "error"}};
    cj["derive_pairs"] = c.derive_pairs;
    doc["corpora"].push_back(std::move(cj));
  }
  doc["validate"] = {{"deltas", config.validate_deltas},
                     {"term_weights", config.validate_term_weights}};
  return doc;
}

std::string ConfigDigest(const AuditConfig& config) {
  return Sha256Hex(AuditConfigToJson(config).dump());
}

namespace {

// Everything one provider contributes to the report, built in isolation so
// providers can run concurrently and be merged in config order.
struct ProviderResults {
  std::vector<AggregateRow> aggregate;
  std::vector<GroupRow> groups;
  std::vector<CftRow> cft;
  std::vector<LedgerRow> errors;
  std::set<std::string> model_versions;
  std::string newest_retrieved_at;
};

struct PreparedCorpus {
  std::string name;
  Corpus corpus;
};

void NoteScore(ProviderResults& results, const ModerationScore& score) {
  results.model_versions.insert(score.model_version);
  if (score.retrieved_at > results.newest_retrieved_at) {
    results.newest_retrieved_at = score.retrieved_at;
  }
}

ProviderResults AuditOneProvider(
    const AuditConfig& config, const ProviderSpec& spec,
    const std::vector<PreparedCorpus>& corpora,
    const std::vector<CounterfactualPair>& template_pairs,
    const std::vector<std::pair<std::string, std::vector<CounterfactualPair>>>&
        corpus_pairs,
    const TokenLexicon* lexicon, ScoreCache* cache, Clock* clock,
    HttpTransport* transport, AuditMode mode, std::ostream* diag) {
  ProviderResults results;
  ProviderClient client(spec, cache, transport, clock, lexicon);

  ProgressFn progress;
  if (diag != nullptr) {
    progress = [diag, &spec](std::size_t done, std::size_t total) {
      if (done == total || done % 500 == 0) {
        (*diag) << spec.id << ": " << done << "/" << total << " scored\n";
      }
    };
  }

  if (mode == AuditMode::kFull) {
    for (const PreparedCorpus& prepared : corpora) {
      const BatchResult batch = client.BatchScore(prepared.corpus.samples,
                                                  progress);
      for (const ErrorRecord& e : batch.errors) {
        results.errors.push_back(
            LedgerRow{spec.id, prepared.name, e.item_id, e.kind, e.message});
      }

      std::vector<double> scores;
      std::vector<bool> labels;
      std::vector<bool> flags;
      std::vector<const TextSample*> scored_samples;
      for (std::size_t i = 0; i < batch.scores.size(); ++i) {
        if (!batch.scores[i]) continue;
        NoteScore(results, *batch.scores[i]);
        scores.push_back(batch.scores[i]->hate_score);
        flags.push_back(batch.scores[i]->flagged);
        labels.push_back(prepared.corpus.samples[i].toxic);
        scored_samples.push_back(&prepared.corpus.samples[i]);
      }

      AggregateRow row;
      row.provider = spec.id;
      row.corpus = prepared.name;
      row.n = scores.size();
      if (!scores.empty()) {
        try {
          row.roc_auc = RocAuc(scores, labels);
        } catch (const AuditError& e) {
          results.errors.push_back(LedgerRow{spec.id, prepared.name, "roc_auc",
                                             ErrorKindName(e.kind()),
                                             e.what()});
        }
        const ConfusionMetricsResult cm = ConfusionMetrics(flags, labels);
        row.f1 = cm.f1;
        row.fpr = cm.fpr;
        row.fnr = cm.fnr;
        row.accuracy = cm.accuracy;
      }
      results.aggregate.push_back(std::move(row));

      for (const std::string& group : config.registry.groups()) {
        std::vector<bool> mask;
        mask.reserve(scored_samples.size());
        std::size_t members = 0;
        for (const TextSample* sample : scored_samples) {
          const bool in_group =
              std::find(sample->groups.begin(), sample->groups.end(), group) !=
              sample->groups.end();
          mask.push_back(in_group);
          members += in_group ? 1 : 0;
        }
        if (members == 0) continue;
        const std::uint64_t group_seed = MixSeed(
            config.seed, HashString64("pinned:" + spec.id + ":" +
                                      prepared.name + ":" + group));
        try {
          GroupRow group_row;
          group_row.provider = spec.id;
          group_row.corpus = prepared.name;
          group_row.pinned = PinnedAuc(scores, labels, mask, group_seed,
                                       config.n_resamples);
          group_row.pinned.group = group;
          results.groups.push_back(std::move(group_row));
        } catch (const AuditError& e) {
          results.errors.push_back(LedgerRow{spec.id, prepared.name,
                                             "pinned:" + group,
                                             ErrorKindName(e.kind()), e.what()});
        }
      }
    }
  }

  auto run_psa = [&](const std::string& source,
                     const std::vector<CounterfactualPair>& pairs) {
    if (pairs.empty()) return;
    const CftComputation cft = ComputeCft(pairs, client, progress);
    for (const ErrorRecord& e : cft.errors) {
      results.errors.push_back(
          LedgerRow{spec.id, source, e.item_id, e.kind, e.message});
    }
    for (const std::string& v : cft.model_versions) {
      results.model_versions.insert(v);
    }
    if (cft.newest_retrieved_at > results.newest_retrieved_at) {
      results.newest_retrieved_at = cft.newest_retrieved_at;
    }
    for (const CftGroupSummary& summary : SummarizeCft(cft.records, pairs)) {
      CftRow row;
      row.provider = spec.id;
      row.source = source;
      row.summary = summary;
      results.cft.push_back(std::move(row));
    }
  };

  run_psa("templates", template_pairs);
  for (const auto& [source, pairs] : corpus_pairs) run_psa(source, pairs);

  return results;
}

}  // namespace

AuditReport RunAudit(const AuditConfig& config, const AuditEnv& env,
                     AuditMode mode) {
  static SystemClock default_clock;
  Clock* clock = env.clock != nullptr ? env.clock : &default_clock;

  std::optional<TokenLexicon> lexicon;
  if (config.lexicon_path) {
    lexicon = TokenLexicon::Load(*config.lexicon_path, config.registry);
  }

  AuditReport report;

  // Corpus preparation is provider-independent and runs once.
  std::vector<PreparedCorpus> corpora;
  std::vector<std::pair<std::string, std::vector<CounterfactualPair>>>
      corpus_pairs;
  for (const CorpusConfig& cfg : config.corpora) {
    Corpus corpus = LoadCorpus(cfg.path, cfg.format, cfg.schema, cfg.name);
    corpus = MapGroups(corpus, cfg.mapping, config.registry);
    const std::uint64_t corpus_seed =
        MixSeed(config.seed, HashString64("corpus:" + cfg.name));
    if (mode == AuditMode::kFull) {
      corpus = Balance(corpus, corpus_seed);
      if (config.budget) {
        corpus = SampleBudget(corpus, *config.budget, corpus_seed);
      }
    }
    if (cfg.derive_pairs && lexicon) {
      CorpusPairs derived = DeriveCorpusPairs(corpus, *lexicon);
      for (const SkipRecord& skip : derived.skips) {
        report.skips.push_back(SkipRow{cfg.name, skip.item_id, skip.reason});
      }
      corpus_pairs.emplace_back(cfg.name, std::move(derived.pairs));
    }
    corpora.push_back(PreparedCorpus{cfg.name, std::move(corpus)});
  }

  std::vector<CounterfactualPair> template_pairs;
  if (config.template_path && lexicon) {
    const auto templates = LoadTemplates(*config.template_path);
    template_pairs = GenerateTemplatePairs(templates, *lexicon, "templates");
  }

  ScoreCache cache(config.cache_dir);

  // Providers run concurrently, each with its own transport and rate
  // limiter; results merge in config order so reports are deterministic.
  std::vector<std::unique_ptr<HttpTransport>> transports;
  std::vector<std::future<ProviderResults>> futures;
  for (const ProviderSpec& spec : config.providers) {
    std::unique_ptr<HttpTransport> transport;
    if (spec.kind == ProviderKind::kRemoteApi) {
      transport = env.transport_factory
                      ? env.transport_factory(spec)
                      : std::make_unique<HttplibTransport>();
    }
    transports.push_back(std::move(transport));
    HttpTransport* transport_ptr = transports.back().get();
    const TokenLexicon* lexicon_ptr = lexicon ? &*lexicon : nullptr;
    futures.push_back(std::async(
        std::launch::async, [&, transport_ptr, lexicon_ptr, &spec = spec]() {
          return AuditOneProvider(config, spec, corpora, template_pairs,
                                  corpus_pairs, lexicon_ptr, &cache, clock,
                                  transport_ptr, mode, env.diagnostics);
        }));
  }

  report.meta.tool_name = kToolName;
  report.meta.tool_version = kToolVersion;
  report.meta.config_digest = ConfigDigest(config);
  report.meta.seed = config.seed;
  report.meta.n_resamples = config.n_resamples;
  report.meta.cft_convention = kCftConvention;

  std::string data_as_of;
  for (std::size_t i = 0; i < futures.size(); ++i) {
    ProviderResults results = futures[i].get();
    for (auto& row : results.aggregate) report.aggregate.push_back(std::move(row));
    for (auto& row : results.groups) report.groups.push_back(std::move(row));
    for (auto& row : results.cft) report.cft.push_back(std::move(row));
    for (auto& row : results.errors) report.errors.push_back(std::move(row));
    std::string versions;
    for (const std::string& v : results.model_versions) {
      if (!versions.empty()) versions += ";";
      versions += v;
    }
    report.meta.provider_model_versions[config.providers[i].id] = versions;
    if (results.newest_retrieved_at > data_as_of) {
      data_as_of = results.newest_retrieved_at;
    }
  }
  report.meta.data_as_of = data_as_of;
  return report;
}

namespace {

ValidationCheck MakeCheck(std::string name, double expected, double measured,
                          double tolerance, ValidationCheck::Mode mode) {
  ValidationCheck check;
  check.name = std::move(name);
  check.expected = expected;
  check.measured = measured;
  check.tolerance = tolerance;
  check.mode = mode;
  switch (mode) {
    case ValidationCheck::Mode::kAbsDiff:
      check.pass = std::abs(measured - expected) <= tolerance;
      break;
    case ValidationCheck::Mode::kAtLeast:
      check.pass = measured >= expected;
      break;
    case ValidationCheck::Mode::kAtMost:
      check.pass = measured <= expected;
      break;
  }
  return check;
}

// Synthetic scored corpus for the pinned-AUC self-check: n items, one group
// of group_n. Background classes separate cleanly; when `degrade` is set the
// group's positives are drawn to overlap the negatives, which must pull the
// group's pinned AUC below the overall AUC.
struct SyntheticScores {
  std::vector<double> scores;
  std::vector<bool> labels;
  std::vector<bool> mask;
};

SyntheticScores MakeSyntheticScores(std::size_t n, std::size_t group_n,
                                    bool degrade, std::uint64_t seed) {
  SyntheticScores out;
  Rng rng(MixSeed(seed, HashString64(degrade ? "synthetic-degraded"
                                             : "synthetic-null")));
  for (std::size_t i = 0; i < n; ++i) {
    const bool in_group = i < group_n;
    const bool toxic = (i % 2) == 0;
    double score;
    if (degrade) {
      if (toxic) {
        score = in_group ? rng.Uniform(0.0, 0.55) : rng.Uniform(0.55, 1.0);
      } else {
        score = rng.Uniform(0.0, 0.45);
      }
    } else {
      score = toxic ? rng.Uniform(0.4, 1.0) : rng.Uniform(0.0, 0.6);
    }
    out.scores.push_back(score);
    out.labels.push_back(toxic);
    out.mask.push_back(in_group);
  }
  return out;
}

}  // namespace

ValidationReport ValidatePlantedBias(const std::map<std::string, double>& deltas,
                                     const AuditConfig& config,
                                     const AuditEnv& env) {
  if (!config.lexicon_path) {
    throw AuditError(ErrorKind::kConfig, "validation needs a lexicon file");
  }
  if (!config.template_path) {
    throw AuditError(ErrorKind::kConfig, "validation needs a template file");
  }
  const TokenLexicon lexicon =
      TokenLexicon::Load(*config.lexicon_path, config.registry);
  const auto templates = LoadTemplates(*config.template_path);
  const auto pairs = GenerateTemplatePairs(templates, lexicon, "templates");
  if (pairs.empty()) {
    throw AuditError(ErrorKind::kConfig, "no pairs to validate against");
  }

  std::map<std::string, double> term_weights = config.validate_term_weights;
  if (term_weights.empty()) {
    // Carrier nouns present in the stock neutral templates; they give every
    // template a mid-range base score so negative deltas stay clamp-safe.
    for (const char* w : {"people", "person", "friend", "friends", "neighbor",
                          "neighbors", "colleague", "colleagues"}) {
      term_weights[w] = 1.0;
    }
  }

  // Identity tokens must carry no term weight: the two sides of a pair must
  // have identical base scores or the deltas are not recoverable.
  for (const std::string& marker : lexicon.AllMarkerTokens()) {
    if (term_weights.contains(marker)) {
      throw AuditError(ErrorKind::kConfig,
                       "validate.term_weights must not weight the identity "
                       "token \"" + marker + "\"");
    }
  }
  for (const auto& [group, delta] : deltas) {
    if (!lexicon.HasGroup(group)) {
      throw AuditError(ErrorKind::kUnknownGroup,
                       "validate delta for \"" + group +
                           "\" which has no lexicon tokens");
    }
  }

  // Clamp-safety: every pair's base plus its group delta must stay inside
  // [0,1], otherwise clamping destroys the linearity being asserted.
  {
    const LexiconScorer probe(term_weights, 0.5);
    for (const CounterfactualPair& pair : pairs) {
      const double base = probe.BaseScore(pair.anchor_text);
      const auto it = deltas.find(pair.group);
      const double delta = it != deltas.end() ? it->second : 0.0;
      const double shifted = base + delta;
      if (shifted < 0.0 || shifted > 1.0) {
        throw AuditError(
            ErrorKind::kConfig,
            "delta " + FormatSig6(delta) + " for " + pair.group +
                " leaves [0,1] on template base " + FormatSig6(base) +
                " (pair " + pair.pair_id + ")");
      }
    }
  }

  ProviderSpec spec;
  spec.id = "planted-bias-validator";
  spec.kind = ProviderKind::kPlantedBias;
  spec.term_weights = term_weights;
  spec.bias_deltas = deltas;
  spec.rate_limit = 1e9;
  spec.max_concurrency = 4;

  static SystemClock default_clock;
  Clock* clock = env.clock != nullptr ? env.clock : &default_clock;
  ScoreCache cache(config.cache_dir);
  ProviderClient client(spec, &cache, nullptr, clock, &lexicon);

  const CftComputation cft = ComputeCft(pairs, client);
  const auto summaries = SummarizeCft(cft.records, pairs);

  ValidationReport report;
  std::map<std::string, double> measured_means;
  for (const CftGroupSummary& s : summaries) {
    // Stock templates are neutral; pool slices defensively anyway.
    measured_means[s.group] +=
        s.mean_cft * static_cast<double>(s.n_pairs);
  }
  std::map<std::string, std::size_t> group_counts;
  for (const CftGroupSummary& s : summaries) {
    group_counts[s.group] += s.n_pairs;
  }
  for (auto& [group, total] : measured_means) {
    total /= static_cast<double>(group_counts[group]);
  }

  for (const std::string& group : lexicon.Groups()) {
    const auto it = deltas.find(group);
    const double expected = it != deltas.end() ? it->second : 0.0;
    const double measured =
        measured_means.contains(group) ? measured_means[group] : 0.0;
    report.checks.push_back(MakeCheck("mean_cft(" + group + ")", expected,
                                      measured, 1e-9,
                                      ValidationCheck::Mode::kAbsDiff));
  }

  // Pinned AUC must flag a planted group-specific separability deficit and
  // stay quiet when there is none.
  {
    const SyntheticScores degraded =
        MakeSyntheticScores(2000, 200, /*degrade=*/true, config.seed);
    const double overall = RocAuc(degraded.scores, degraded.labels);
    const PinnedAucResult pinned =
        PinnedAuc(degraded.scores, degraded.labels, degraded.mask,
                  MixSeed(config.seed, HashString64("validate-pinned")), 200);
    report.checks.push_back(MakeCheck("pinned_auc_degradation", 0.05,
                                      overall - pinned.value, 0.0,
                                      ValidationCheck::Mode::kAtLeast));
  }
  {
    const SyntheticScores null_case =
        MakeSyntheticScores(2000, 200, /*degrade=*/false, config.seed);
    const double overall = RocAuc(null_case.scores, null_case.labels);
    const PinnedAucResult pinned =
        PinnedAuc(null_case.scores, null_case.labels, null_case.mask,
                  MixSeed(config.seed, HashString64("validate-pinned-null")),
                  200);
    report.checks.push_back(MakeCheck("pinned_auc_null_gap", 0.02,
                                      std::abs(pinned.value - overall), 0.0,
                                      ValidationCheck::Mode::kAtMost));
  }

  report.all_pass = std::all_of(report.checks.begin(), report.checks.end(),
                                [](const ValidationCheck& c) { return c.pass; });
  return report;
}

}  // namespace modaudit
