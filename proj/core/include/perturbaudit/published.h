// Copyright 2026 The PerturbAudit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PERTURBAUDIT_PUBLISHED_H_
#define PERTURBAUDIT_PUBLISHED_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "perturbaudit/corpus.h"
#include "perturbaudit/instance.h"
#include "perturbaudit/types.h"

namespace perturbaudit {

// Column names of the published occlusion and lower-court-insertion test
// sets, exported as JSONL (one row per object). Column order is free, names
// are matched exactly; extra columns are ignored.
struct PublishedColumns {
  std::string id = "id";
  std::string language = "language";    // de/fr/it or German/French/Italian
  std::string year = "year";
  std::string legal_area = "legal area";
  std::string judgment = "label";       // 0/1 or dismissal/approval
  std::string explainability_label = "explainability_label";
  std::string text = "text";            // facts as fed to the model
  std::string occluded_text = "occluded_text";  // occlusion rows only
  std::string lower_court = "lower_court";      // LCI rows only
};

struct OcclusionSource {
  int set_k = 1;
  std::istream* rows = nullptr;
};

struct PublishedCounts {
  // language x set x label, baselines excluded.
  std::map<std::tuple<Language, int, Rationale>, int64_t> occlusion;
  std::map<Language, int64_t> occlusion_baselines;
  // Every LCI row, baselines included.
  std::map<Language, int64_t> lci;
  std::map<Language, int64_t> lci_baselines;
  // Distinct case ids seen in occlusion rows.
  std::map<Language, int64_t> documents;

  int64_t Occlusion(Language language, int set_k, Rationale label) const;
  int64_t OcclusionLabelTotal(Language language, Rationale label) const;
  int64_t OcclusionTotal(Language language) const;
  int64_t Lci(Language language) const;
  int64_t LciGrandTotal() const;
};

struct ImportResult {
  // One case per distinct id; facts from the baseline text, spans recovered
  // where the occluded text or lower court occurs exactly once in the facts.
  std::vector<Case> cases;
  // Baselines appear once per case in each list, however many rows repeat
  // them; counts still include every row.
  std::vector<PerturbedInstance> occlusion_instances;
  std::vector<PerturbedInstance> lci_instances;
  PublishedCounts counts;
};

// Throws SchemaMismatch(column) and UnknownLabel(value).
ImportResult ImportPublished(std::span<const OcclusionSource> occlusion,
                             std::istream* lci,
                             const PublishedColumns& columns = {});

std::string SerializeCounts(const PublishedCounts& counts);

}  // namespace perturbaudit

#endif  // PERTURBAUDIT_PUBLISHED_H_
