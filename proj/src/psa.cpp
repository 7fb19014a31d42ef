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

#include "modaudit/psa.hpp"

#include <fstream>
#include <map>
#include <set>

#include "json.hpp"
#include "modaudit/metrics.hpp"
#include "modaudit/text.hpp"
#include "modaudit/util.hpp"

namespace modaudit {

using nlohmann::json;

std::vector<SentenceTemplate> LoadTemplates(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw AuditError(ErrorKind::kIo, "cannot open templates: " + path.string());
  }
  std::vector<SentenceTemplate> templates;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw AuditError(ErrorKind::kParse, "template line " +
                                              std::to_string(line_no) + ": " +
                                              e.what());
    }
    if (!record.contains("template") || !record.contains("toxic")) {
      throw AuditError(ErrorKind::kParse,
                       "template line " + std::to_string(line_no) +
                           ": needs \"template\" and \"toxic\"");
    }
    SentenceTemplate t;
    t.text = record["template"].get<std::string>();
    if (record["toxic"].is_boolean()) {
      t.toxic = record["toxic"].get<bool>();
    } else {
      t.toxic = record["toxic"].get<int>() != 0;
    }
    templates.push_back(std::move(t));
  }
  return templates;
}

namespace {

std::size_t CountSlots(const std::string& text) {
  std::size_t count = 0;
  std::size_t pos = 0;
  const std::string marker = kIdentitySlot;
  while ((pos = text.find(marker, pos)) != std::string::npos) {
    ++count;
    pos += marker.size();
  }
  return count;
}

std::string FillSlot(const std::string& text, const std::string& token) {
  std::string out = text;
  const auto pos = out.find(kIdentitySlot);
  out.replace(pos, std::string(kIdentitySlot).size(), token);
  return out;
}

std::string SlugToken(const std::string& token) {
  std::string out = token;
  for (char& c : out) {
    if (c == ' ') c = '-';
  }
  return out;
}

}  // namespace

std::vector<CounterfactualPair> GenerateTemplatePairs(
    const std::vector<SentenceTemplate>& templates, const TokenLexicon& lexicon,
    const std::string& source) {
  std::vector<CounterfactualPair> pairs;
  for (std::size_t t = 0; t < templates.size(); ++t) {
    const SentenceTemplate& tpl = templates[t];
    const std::size_t slots = CountSlots(tpl.text);
    if (slots != 1) {
      throw AuditError(ErrorKind::kMalformedTemplate,
                       source + " template " + std::to_string(t + 1) +
                           ": expected exactly one " + kIdentitySlot +
                           " slot, found " + std::to_string(slots));
    }
    for (const LexiconEntry& entry : lexicon.entries()) {
      CounterfactualPair pair;
      pair.pair_id =
          source + ":" + std::to_string(t) + ":" + SlugToken(entry.token);
      pair.origin = "template";
      pair.source = source;
      pair.group = entry.group;
      pair.axis = entry.axis;
      pair.anchor_token = entry.anchor;
      pair.minority_token = entry.token;
      pair.anchor_text = FillSlot(tpl.text, entry.anchor);
      pair.minority_text = FillSlot(tpl.text, entry.token);
      pair.toxic = tpl.toxic;
      pairs.push_back(std::move(pair));
    }
  }
  return pairs;
}

CorpusPairs DeriveCorpusPairs(const Corpus& corpus,
                              const TokenLexicon& lexicon) {
  CorpusPairs result;
  for (const TextSample& sample : corpus.samples) {
    std::vector<std::string> found;
    for (const std::string& marker : lexicon.AllMarkerTokens()) {
      if (ContainsWholeWord(sample.text, marker)) found.push_back(marker);
    }
    if (found.empty()) {
      result.skips.push_back({sample.id, "no-token"});
      continue;
    }
    if (found.size() > 1) {
      result.skips.push_back({sample.id, "multi-token"});
      continue;
    }

    const std::string& token = found.front();
    CounterfactualPair pair;
    pair.pair_id = corpus.name + ":" + sample.id;
    pair.origin = "corpus";
    pair.source = corpus.name;
    pair.toxic = sample.toxic;

    if (const LexiconEntry* entry = lexicon.FindEntry(token)) {
      // Minority-token sentence: the original is the minority side.
      pair.group = entry->group;
      pair.axis = entry->axis;
      pair.minority_token = entry->token;
      pair.anchor_token = entry->anchor;
      pair.minority_text = sample.text;
      pair.anchor_text =
          SubstituteWholeWord(sample.text, entry->token, entry->anchor).text;
    } else {
      // Anchor-token sentence: flip to the minority counterpart, but only
      // when exactly one lexicon entry pairs with this anchor.
      const auto entry_opt = lexicon.UniqueEntryForAnchor(token);
      if (!entry_opt) {
        result.skips.push_back({sample.id, "ambiguous-anchor"});
        continue;
      }
      pair.group = entry_opt->group;
      pair.axis = entry_opt->axis;
      pair.minority_token = entry_opt->token;
      pair.anchor_token = token;
      pair.anchor_text = sample.text;
      pair.minority_text =
          SubstituteWholeWord(sample.text, token, entry_opt->token).text;
    }
    result.pairs.push_back(std::move(pair));
  }
  return result;
}

CftComputation ComputeCft(const std::vector<CounterfactualPair>& pairs,
                          ProviderClient& client, const ProgressFn& progress) {
  if (pairs.empty()) {
    throw AuditError(ErrorKind::kConfig, "no counterfactual pairs to score");
  }

  // Both sides of all pairs, deduplicated; the cache collapses repeats
  // anyway, but deduplicating here keeps batch sizes honest.
  std::vector<TextSample> texts;
  std::map<std::string, std::size_t> slot_by_text;
  auto add_text = [&](const std::string& text) {
    if (slot_by_text.contains(text)) return;
    TextSample sample;
    sample.id = "psa-" + Sha256Hex(text).substr(0, 16);
    sample.text = text;
    slot_by_text[text] = texts.size();
    texts.push_back(std::move(sample));
  };
  for (const CounterfactualPair& pair : pairs) {
    add_text(pair.anchor_text);
    add_text(pair.minority_text);
  }

  const BatchResult batch = client.BatchScore(texts, progress);

  std::map<std::string, const ErrorRecord*> error_by_id;
  for (const ErrorRecord& e : batch.errors) error_by_id[e.item_id] = &e;

  CftComputation result;
  std::set<std::string> versions;
  for (const auto& slot : batch.scores) {
    if (!slot) continue;
    versions.insert(slot->model_version);
    if (slot->retrieved_at > result.newest_retrieved_at) {
      result.newest_retrieved_at = slot->retrieved_at;
    }
  }
  result.model_versions.assign(versions.begin(), versions.end());
  for (const CounterfactualPair& pair : pairs) {
    const auto& anchor_slot = batch.scores[slot_by_text.at(pair.anchor_text)];
    const auto& minority_slot =
        batch.scores[slot_by_text.at(pair.minority_text)];
    if (!anchor_slot || !minority_slot) {
      const auto& failed = !anchor_slot ? texts[slot_by_text.at(pair.anchor_text)]
                                        : texts[slot_by_text.at(pair.minority_text)];
      const auto it = error_by_id.find(failed.id);
      result.errors.push_back(
          {pair.pair_id,
           it != error_by_id.end() ? it->second->kind : "unknown",
           it != error_by_id.end() ? it->second->message
                                   : "side not scored"});
      continue;
    }
    CftRecord record;
    record.pair_id = pair.pair_id;
    record.provider_id = client.spec().id;
    record.score_anchor = anchor_slot->hate_score;
    record.score_minority = minority_slot->hate_score;
    record.cft = record.score_minority - record.score_anchor;
    result.records.push_back(std::move(record));
  }
  return result;
}

std::vector<CftGroupSummary> SummarizeCft(
    const std::vector<CftRecord>& records,
    const std::vector<CounterfactualPair>& pairs, double level) {
  std::map<std::string, const CounterfactualPair*> pair_by_id;
  for (const CounterfactualPair& p : pairs) pair_by_id[p.pair_id] = &p;

  std::map<std::pair<std::string, std::string>, std::vector<double>> cells;
  for (const CftRecord& r : records) {
    const auto it = pair_by_id.find(r.pair_id);
    if (it == pair_by_id.end()) {
      throw AuditError(ErrorKind::kConfig,
                       "CFT record for unknown pair \"" + r.pair_id + "\"");
    }
    const CounterfactualPair& p = *it->second;
    cells[{p.group, p.toxic ? "toxic" : "non-toxic"}].push_back(r.cft);
  }

  std::vector<CftGroupSummary> summaries;
  for (const auto& [key, values] : cells) {
    CftGroupSummary s;
    s.group = key.first;
    s.toxic_slice = key.second;
    s.n_pairs = values.size();
    double mean = 0.0;
    for (double v : values) mean += v;
    s.mean_cft = mean / static_cast<double>(values.size());
    if (values.size() >= 2) {
      s.ci95 = TConfidenceInterval(values, level);
    }
    summaries.push_back(std::move(s));
  }
  return summaries;
}

}  // namespace modaudit
