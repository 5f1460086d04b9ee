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

#ifndef PERTURBAUDIT_PERTURB_H_
#define PERTURBAUDIT_PERTURB_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "perturbaudit/corpus.h"
#include "perturbaudit/instance.h"

namespace perturbaudit {

// Removes the indexed spans from the facts without leaving a marker. Gaps
// that become adjacent are merged; each whitespace run in a merged gap is
// collapsed to its most frequent separator (a space on ties) and merged gaps
// at either end of the text are trimmed. Untouched gaps stay verbatim.
//
// Throws IndexOutOfRange, LowerCourtOcclusionForbidden, MixedLabels.
std::string ApplyOcclusion(const Case& c, std::span<const int> indices);

struct OcclusionOptions {
  int k_max = 4;
  // Per (label, k) cap on emitted combinations; 0 enumerates everything.
  // Sampled combinations are still emitted in lexicographic order.
  int64_t max_per_cell = 0;
  uint64_t seed = 0;
};

// Baseline first, then for each label (supports, opposes, neutral) and each
// k = 1..min(k_max, n_label) all C(n_label, k) same-label combinations in
// lexicographic index order.
std::vector<PerturbedInstance> GenerateOcclusionSuite(
    const Case& c, const OcclusionOptions& options = {});

// Facts with every lower_court span replaced by `court`.
std::string ReplaceLowerCourts(const Case& c, std::string_view court);

// Baseline first, then one instance per registry court other than the case's
// own (canonicalized first lower-court mention). Throws NoLowerCourts.
std::vector<PerturbedInstance> GenerateLciSuite(const Case& c,
                                                const CourtRegistry& registry);

std::string BaselineId(std::string_view case_id);

// C(n, k), saturating at UINT64_MAX.
uint64_t Binomial(int64_t n, int64_t k);

// The rank-th k-subset of {0..n-1} in lexicographic order.
std::vector<int> UnrankCombination(int n, int k, uint64_t rank);

}  // namespace perturbaudit

#endif  // PERTURBAUDIT_PERTURB_H_
