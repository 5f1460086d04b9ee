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

#ifndef PERTURBAUDIT_SYNTHETIC_H_
#define PERTURBAUDIT_SYNTHETIC_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "perturbaudit/corpus.h"
#include "perturbaudit/reference_classifier.h"
#include "perturbaudit/types.h"

namespace perturbaudit {

// Generates cases together with a reference classifier whose token weights
// agree with the span labels: supports spans push towards the judgment,
// opposes spans away from it, neutral spans carry no weight. Weights are
// resampled until every same-label occlusion of up to `k_max` spans moves the
// predicted-class confidence by at least `min_effect`, so occlusion labels
// recovered at any epsilon below that equal the gold labels.
struct SyntheticOptions {
  int num_cases = 200;
  int num_validation_cases = 0;
  uint64_t seed = 1;
  std::vector<Language> languages = {Language::kDe, Language::kFr,
                                     Language::kIt};
  int max_supports = 4;
  int max_opposes = 3;
  int max_neutral = 5;
  int k_max = 4;
  double min_effect = 0.03;
  // 0 disables lower-court mentions.
  int courts_per_language = 13;
};

struct SyntheticCorpus {
  std::vector<Case> cases;
  std::vector<Case> validation;
  ReferenceClassifier classifier;
};

SyntheticCorpus GenerateSyntheticCorpus(const SyntheticOptions& options);

// Deterministic court names for `language`, at most 26.
std::vector<std::string> SyntheticCourts(Language language, int count);

// Smallest |confidence change| over all same-label supports/opposes
// occlusions of up to k_max spans, computed from the weights alone.
double MinOcclusionEffect(const Case& c, const ReferenceClassifier& classifier,
                          int k_max);

// Per-annotator copies of `cases`. Each annotator independently relabels a
// span with probability `noise` and trims one boundary token with the same
// probability. Lower-court spans are kept.
std::vector<Case> SimulateAnnotators(std::span<const Case> cases,
                                     int num_annotators, double noise,
                                     uint64_t seed);

}  // namespace perturbaudit

#endif  // PERTURBAUDIT_SYNTHETIC_H_
