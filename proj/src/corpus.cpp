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

#include "modaudit/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "modaudit/error.hpp"
#include "modaudit/rng.hpp"
#include "modaudit/text.hpp"
#include "modaudit/util.hpp"

namespace modaudit {

namespace {

using nlohmann::json;

std::string LineContext(const std::string& name, std::size_t line_no) {
  return name + " line " + std::to_string(line_no);
}

bool CoerceToxic(const json& value, const std::string& where) {
  if (value.is_boolean()) return value.get<bool>();
  if (value.is_number_integer()) {
    const auto v = value.get<std::int64_t>();
    if (v == 0 || v == 1) return v == 1;
  }
  if (value.is_string()) {
    const std::string s = AsciiLower(value.get<std::string>());
    if (s == "1" || s == "true" || s == "yes") return true;
    if (s == "0" || s == "false" || s == "no") return false;
  }
  throw AuditError(ErrorKind::kInvalidLabel,
                   where + ": toxic label not coercible to boolean: " +
                       value.dump());
}

bool CoerceToxicString(const std::string& raw, const std::string& where) {
  const std::string s = AsciiLower(raw);
  if (s == "1" || s == "true" || s == "yes") return true;
  if (s == "0" || s == "false" || s == "no") return false;
  throw AuditError(ErrorKind::kInvalidLabel,
                   where + ": toxic label not coercible to boolean: \"" + raw +
                       "\"");
}

void FinishSample(TextSample& sample, const std::string& corpus_name,
                  const std::string& where) {
  if (sample.id.empty()) {
    throw AuditError(ErrorKind::kMissingField, where + ": empty id");
  }
  if (sample.text.empty()) {
    throw AuditError(ErrorKind::kMissingField, where + ": empty text");
  }
  if (sample.source.empty()) sample.source = corpus_name;
  sample.word_count = WhitespaceWordCount(sample.text);
}

// RFC-4180-ish row reader: handles quoted fields, embedded commas/newlines
// and doubled quotes. Returns false at end of input.
bool ReadCsvRow(std::istream& in, std::vector<std::string>& row,
                std::size_t& line_no) {
  row.clear();
  int c = in.get();
  if (c == EOF) return false;
  std::string field;
  bool quoted = false;
  bool row_started = false;
  ++line_no;
  while (c != EOF) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line_no;
        field.push_back(static_cast<char>(c));
      }
    } else {
      if (c == '"' && field.empty()) {
        quoted = true;
        row_started = true;
      } else if (c == ',') {
        row.push_back(std::move(field));
        field.clear();
        row_started = true;
      } else if (c == '\n') {
        break;
      } else if (c == '\r') {
        // swallow; tolerate CRLF
      } else {
        field.push_back(static_cast<char>(c));
        row_started = true;
      }
    }
    c = in.get();
  }
  (void)row_started;
  row.push_back(std::move(field));
  return true;
}

Corpus LoadJsonl(const std::filesystem::path& path, const CorpusSchema& schema,
                 const std::string& name) {
  std::ifstream in(path);
  Corpus corpus;
  corpus.name = name;
  std::set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw AuditError(ErrorKind::kParse,
                       LineContext(name, line_no) + ": " + e.what());
    }
    const std::string where = LineContext(name, line_no);
    if (!record.is_object()) {
      throw AuditError(ErrorKind::kParse, where + ": record is not an object");
    }
    for (const std::string* field :
         {&schema.id_field, &schema.text_field, &schema.toxic_field}) {
      if (!record.contains(*field)) {
        throw AuditError(ErrorKind::kMissingField,
                         where + ": missing field \"" + *field + "\"");
      }
    }
    TextSample sample;
    sample.id = record[schema.id_field].is_string()
                    ? record[schema.id_field].get<std::string>()
                    : record[schema.id_field].dump();
    if (!record[schema.text_field].is_string()) {
      throw AuditError(ErrorKind::kParse, where + ": text is not a string");
    }
    sample.text = record[schema.text_field].get<std::string>();
    sample.toxic = CoerceToxic(record[schema.toxic_field], where);
    if (record.contains(schema.groups_field) &&
        record[schema.groups_field].is_array()) {
      for (const auto& g : record[schema.groups_field]) {
        if (g.is_string()) sample.raw_groups.push_back(g.get<std::string>());
      }
    }
    if (record.contains(schema.source_field) &&
        record[schema.source_field].is_string()) {
      sample.source = record[schema.source_field].get<std::string>();
    }
    FinishSample(sample, name, where);
    if (!seen_ids.insert(sample.id).second) {
      throw AuditError(ErrorKind::kDuplicateId,
                       where + ": duplicate id \"" + sample.id + "\"");
    }
    corpus.samples.push_back(std::move(sample));
  }
  return corpus;
}

Corpus LoadCsv(const std::filesystem::path& path, const CorpusSchema& schema,
               const std::string& name) {
  std::ifstream in(path);
  Corpus corpus;
  corpus.name = name;

  std::vector<std::string> header;
  std::size_t line_no = 0;
  if (!ReadCsvRow(in, header, line_no)) return corpus;  // empty file

  auto column = [&](const std::string& field, bool required) -> int {
    const auto it = std::find(header.begin(), header.end(), field);
    if (it == header.end()) {
      if (required) {
        throw AuditError(ErrorKind::kMissingField,
                         name + ": header lacks column \"" + field + "\"");
      }
      return -1;
    }
    return static_cast<int>(it - header.begin());
  };
  const int id_col = column(schema.id_field, true);
  const int text_col = column(schema.text_field, true);
  const int toxic_col = column(schema.toxic_field, true);
  const int groups_col = column(schema.groups_field, false);
  const int source_col = column(schema.source_field, false);

  std::set<std::string> seen_ids;
  std::vector<std::string> row;
  while (ReadCsvRow(in, row, line_no)) {
    if (row.size() == 1 && row[0].empty()) continue;  // blank line
    const std::string where = LineContext(name, line_no);
    if (row.size() != header.size()) {
      throw AuditError(ErrorKind::kParse,
                       where + ": expected " + std::to_string(header.size()) +
                           " fields, got " + std::to_string(row.size()));
    }
    TextSample sample;
    sample.id = row[id_col];
    sample.text = row[text_col];
    sample.toxic = CoerceToxicString(row[toxic_col], where);
    if (groups_col >= 0 && !row[groups_col].empty()) {
      // Groups cell holds labels separated by '|'.
      std::stringstream ss(row[groups_col]);
      std::string g;
      while (std::getline(ss, g, '|')) {
        if (!g.empty()) sample.raw_groups.push_back(g);
      }
    }
    if (source_col >= 0) sample.source = row[source_col];
    FinishSample(sample, name, where);
    if (!seen_ids.insert(sample.id).second) {
      throw AuditError(ErrorKind::kDuplicateId,
                       where + ": duplicate id \"" + sample.id + "\"");
    }
    corpus.samples.push_back(std::move(sample));
  }
  return corpus;
}

}  // namespace

GroupRegistry::GroupRegistry(std::vector<std::string> groups)
    : groups_(std::move(groups)) {
  std::set<std::string> unique(groups_.begin(), groups_.end());
  if (unique.size() != groups_.size()) {
    throw AuditError(ErrorKind::kConfig, "registry group names not unique");
  }
}

GroupRegistry GroupRegistry::Default() {
  return GroupRegistry(std::vector<std::string>{
      "Women", "LGBTQ+", "PoC", "Muslim", "Asian", "Jewish", "Latinx"});
}

bool GroupRegistry::Contains(const std::string& group) const {
  return std::find(groups_.begin(), groups_.end(), group) != groups_.end();
}

Corpus LoadCorpus(const std::filesystem::path& path, CorpusFormat format,
                  const CorpusSchema& schema, const std::string& name) {
  if (!std::filesystem::exists(path)) {
    throw AuditError(ErrorKind::kIo,
                     "corpus file not found: " + path.string());
  }
  switch (format) {
    case CorpusFormat::kJsonl:
      return LoadJsonl(path, schema, name);
    case CorpusFormat::kCsv:
      return LoadCsv(path, schema, name);
  }
  throw AuditError(ErrorKind::kConfig, "unknown corpus format");
}

Corpus MapGroups(const Corpus& corpus, const GroupMapping& mapping,
                 const GroupRegistry& registry) {
  for (const auto& [raw, canonical] : mapping.rules) {
    if (!registry.Contains(canonical)) {
      throw AuditError(ErrorKind::kConfig,
                       "mapping rule \"" + raw + "\" targets \"" + canonical +
                           "\" which is not in the registry");
    }
  }
  Corpus out = corpus;
  for (TextSample& sample : out.samples) {
    std::set<std::string> canonical;
    for (const std::string& raw : sample.raw_groups) {
      const auto rule = mapping.rules.find(raw);
      if (rule != mapping.rules.end()) {
        canonical.insert(rule->second);
      } else if (registry.Contains(raw)) {
        canonical.insert(raw);
      } else if (mapping.unmapped_policy == UnmappedPolicy::kError) {
        throw AuditError(ErrorKind::kUnmappedLabel,
                         corpus.name + " sample \"" + sample.id +
                             "\": no rule for label \"" + raw + "\"");
      }
      // kDropGroup: the label is dropped, the sample stays.
    }
    sample.groups.assign(canonical.begin(), canonical.end());
  }
  return out;
}

Corpus Balance(const Corpus& corpus, std::uint64_t seed) {
  std::vector<std::size_t> toxic_idx;
  std::vector<std::size_t> clean_idx;
  for (std::size_t i = 0; i < corpus.samples.size(); ++i) {
    (corpus.samples[i].toxic ? toxic_idx : clean_idx).push_back(i);
  }
  if (toxic_idx.empty() || clean_idx.empty()) {
    throw AuditError(ErrorKind::kSingleClassCorpus,
                     corpus.name + ": both classes required to balance");
  }
  if (toxic_idx.size() == clean_idx.size()) return corpus;

  auto& majority = toxic_idx.size() > clean_idx.size() ? toxic_idx : clean_idx;
  const std::size_t keep = std::min(toxic_idx.size(), clean_idx.size());

  Rng rng(MixSeed(seed, HashString64("balance")));
  std::vector<std::size_t> drawn =
      rng.SampleWithoutReplacement(majority.size(), keep);
  std::vector<bool> retained(corpus.samples.size(), false);
  auto& minority = toxic_idx.size() > clean_idx.size() ? clean_idx : toxic_idx;
  for (std::size_t i : minority) retained[i] = true;
  for (std::size_t d : drawn) retained[majority[d]] = true;

  Corpus out;
  out.name = corpus.name;
  for (std::size_t i = 0; i < corpus.samples.size(); ++i) {
    if (retained[i]) out.samples.push_back(corpus.samples[i]);
  }
  return out;
}

Corpus SampleBudget(const Corpus& corpus, std::size_t budget,
                    std::uint64_t seed) {
  if (budget >= corpus.samples.size()) return corpus;

  // Strata are (group combination, label) cells so they partition the corpus
  // even when samples carry several groups.
  std::map<std::string, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < corpus.samples.size(); ++i) {
    const TextSample& s = corpus.samples[i];
    std::string key = s.toxic ? "toxic" : "nontoxic";
    for (const std::string& g : s.groups) key += "|" + g;
    strata[key].push_back(i);
  }

  if (budget < strata.size()) {
    throw AuditError(ErrorKind::kBudgetTooSmall,
                     corpus.name + ": budget " + std::to_string(budget) +
                         " below stratum count " +
                         std::to_string(strata.size()));
  }

  // One guaranteed slot per stratum, the rest proportional to the remaining
  // stratum mass with largest-remainder rounding.
  struct Cell {
    std::string key;
    std::size_t size;
    std::size_t alloc;
    double remainder;
  };
  std::vector<Cell> cells;
  cells.reserve(strata.size());
  for (const auto& [key, members] : strata) {
    cells.push_back({key, members.size(), 1, 0.0});
  }
  std::size_t remaining = budget - cells.size();
  std::size_t weight_total = 0;
  for (const Cell& c : cells) weight_total += c.size - 1;
  if (weight_total > 0 && remaining > 0) {
    std::size_t assigned = 0;
    for (Cell& c : cells) {
      const double quota = static_cast<double>(remaining) *
                           static_cast<double>(c.size - 1) /
                           static_cast<double>(weight_total);
      const auto whole = static_cast<std::size_t>(quota);
      c.alloc += whole;
      c.remainder = quota - static_cast<double>(whole);
      assigned += whole;
    }
    std::size_t leftover = remaining - assigned;
    std::vector<std::size_t> order(cells.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       if (cells[a].remainder != cells[b].remainder) {
                         return cells[a].remainder > cells[b].remainder;
                       }
                       return cells[a].size > cells[b].size;
                     });
    for (std::size_t i = 0; leftover > 0; i = (i + 1) % order.size()) {
      Cell& c = cells[order[i]];
      if (c.alloc < c.size) {
        ++c.alloc;
        --leftover;
      }
    }
  }

  std::vector<bool> retained(corpus.samples.size(), false);
  for (const Cell& c : cells) {
    const auto& members = strata[c.key];
    Rng rng(MixSeed(seed, HashString64("budget:" + c.key)));
    for (std::size_t d : rng.SampleWithoutReplacement(members.size(), c.alloc)) {
      retained[members[d]] = true;
    }
  }

  Corpus out;
  out.name = corpus.name;
  for (std::size_t i = 0; i < corpus.samples.size(); ++i) {
    if (retained[i]) out.samples.push_back(corpus.samples[i]);
  }
  return out;
}

}  // namespace modaudit
