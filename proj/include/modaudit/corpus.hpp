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

#ifndef MODAUDIT_CORPUS_HPP_
#define MODAUDIT_CORPUS_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace modaudit {

// Canonical identity groups for one run. Group-level metrics are keyed by
// these names; dataset-specific labels are translated onto them.
class GroupRegistry {
 public:
  GroupRegistry() = default;
  explicit GroupRegistry(std::vector<std::string> groups);

  // Women, LGBTQ+, PoC, Muslim, Asian, Jewish, Latinx.
  static GroupRegistry Default();

  bool Contains(const std::string& group) const;
  const std::vector<std::string>& groups() const { return groups_; }

 private:
  std::vector<std::string> groups_;
};

struct TextSample {
  std::string id;
  std::string text;
  bool toxic = false;
  std::vector<std::string> raw_groups;  // labels as found in the dataset
  std::vector<std::string> groups;      // canonical, sorted, deduplicated
  std::string source;
  int word_count = 0;
};

struct Corpus {
  std::string name;
  std::vector<TextSample> samples;

  std::size_t size() const { return samples.size(); }
};

// Which record fields map onto TextSample fields. Groups and source are
// optional; a missing source falls back to the corpus name.
struct CorpusSchema {
  std::string id_field = "id";
  std::string text_field = "text";
  std::string toxic_field = "toxic";
  std::string groups_field = "groups";
  std::string source_field = "source";
};

enum class CorpusFormat { kJsonl, kCsv };

enum class UnmappedPolicy { kDropGroup, kError };

struct GroupMapping {
  std::map<std::string, std::string> rules;  // raw label -> canonical group
  UnmappedPolicy unmapped_policy = UnmappedPolicy::kDropGroup;
};

Corpus LoadCorpus(const std::filesystem::path& path, CorpusFormat format,
                  const CorpusSchema& schema, const std::string& name);

// Translates raw labels onto the registry. Raw labels that already spell a
// registry group map to themselves; anything else needs a rule or is handled
// per unmapped_policy. A sample may end up in several groups.
Corpus MapGroups(const Corpus& corpus, const GroupMapping& mapping,
                 const GroupRegistry& registry);

// Downsamples the majority class to the minority size, seeded, keeping the
// survivors in their original relative order.
Corpus Balance(const Corpus& corpus, std::uint64_t seed);

// Budget-limited stratified subsample. Strata are (group combination, label)
// cells; allocation is proportional with largest-remainder rounding and every
// non-empty stratum keeps at least one sample.
Corpus SampleBudget(const Corpus& corpus, std::size_t budget,
                    std::uint64_t seed);

}  // namespace modaudit

#endif  // MODAUDIT_CORPUS_HPP_
