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

// psa.hpp
//
// Perturbation sensitivity analysis: build counterfactual sentence pairs
// that differ only in one identity token, score both sides, and summarize
// the per-pair score differences (CFT) per group, split by toxicity.
//
// Sign convention: cft = minority score - anchor score. Positive means the
// minority identity is scored as more toxic than the majority baseline in
// otherwise identical text.
//
// Two pair sources:
//  - templates: each template has exactly one [IDENT] slot; it is filled
//    with every minority token and with that token's anchor, giving
//    sum(|minority tokens|) pairs per template set.
//  - corpora: a sentence qualifies only if it contains exactly one distinct
//    lexicon token (minority or anchor) and nothing from any other group or
//    axis; all its occurrences are swapped for the counterpart with the
//    site's capitalization kept. Sentences that fail the guard are skipped
//    into a ledger, not errored: real corpora violate the single-token
//    assumption constantly and the audit must stay reviewable.

#ifndef MODAUDIT_PSA_HPP_
#define MODAUDIT_PSA_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modaudit/corpus.hpp"
#include "modaudit/error.hpp"
#include "modaudit/lexicon.hpp"
#include "modaudit/providers.hpp"

namespace modaudit {

inline constexpr const char* kIdentitySlot = "[IDENT]";

struct SentenceTemplate {
  std::string text;  // contains the [IDENT] slot exactly once
  bool toxic = false;
};

// JSONL: {"template": "i am [IDENT]", "toxic": 0}
std::vector<SentenceTemplate> LoadTemplates(const std::filesystem::path& path);

struct CounterfactualPair {
  std::string pair_id;
  std::string origin;  // "template" | "corpus"
  std::string source;  // template set name or corpus name
  std::string group;
  std::string axis;
  std::string anchor_token;
  std::string minority_token;
  std::string anchor_text;
  std::string minority_text;
  bool toxic = false;
};

// One pair per (template, minority token), ordered template-major then
// lexicon order. Throws malformed-template unless each template has exactly
// one slot.
std::vector<CounterfactualPair> GenerateTemplatePairs(
    const std::vector<SentenceTemplate>& templates, const TokenLexicon& lexicon,
    const std::string& source);

struct SkipRecord {
  std::string item_id;
  std::string reason;  // no-token | multi-token | ambiguous-anchor
};

struct CorpusPairs {
  std::vector<CounterfactualPair> pairs;
  std::vector<SkipRecord> skips;
};

CorpusPairs DeriveCorpusPairs(const Corpus& corpus, const TokenLexicon& lexicon);

struct CftRecord {
  std::string pair_id;
  std::string provider_id;
  double score_anchor = 0.0;
  double score_minority = 0.0;
  double cft = 0.0;  // score_minority - score_anchor
};

struct CftComputation {
  std::vector<CftRecord> records;  // in pair order; failed pairs are absent
  std::vector<ErrorRecord> errors;
  // Provenance of the scores used.
  std::vector<std::string> model_versions;  // sorted unique
  std::string newest_retrieved_at;
};

// Scores both sides of every pair through the provider (deduplicated and
// cached). A pair with either side failed yields an error entry instead of a
// record.
CftComputation ComputeCft(const std::vector<CounterfactualPair>& pairs,
                          ProviderClient& client,
                          const ProgressFn& progress = {});

struct CftGroupSummary {
  std::string group;
  std::string toxic_slice;  // "toxic" | "non-toxic"
  std::size_t n_pairs = 0;
  double mean_cft = 0.0;
  std::optional<std::pair<double, double>> ci95;
};

// Partitions records into (group, toxic slice) cells; never pools across
// slices. Cells with one record report the mean with no interval.
std::vector<CftGroupSummary> SummarizeCft(
    const std::vector<CftRecord>& records,
    const std::vector<CounterfactualPair>& pairs, double level = 0.95);

}  // namespace modaudit

#endif  // MODAUDIT_PSA_HPP_
