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

#ifndef PERTURBAUDIT_INSTANCE_H_
#define PERTURBAUDIT_INSTANCE_H_

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "perturbaudit/types.h"

namespace perturbaudit {

enum class InstanceKind { kBaseline, kOcclusion, kLci };

std::string_view ToString(InstanceKind kind);
std::optional<InstanceKind> ParseInstanceKind(std::string_view text);

// An occlusion or lower-court-insertion variant of a case, or the unmodified
// baseline it is paired with. A baseline's baseline_id is its own id.
struct PerturbedInstance {
  std::string instance_id;
  std::string case_id;
  InstanceKind kind = InstanceKind::kBaseline;
  Language language = Language::kDe;
  Judgment judgment = Judgment::kDismissal;

  // Occlusion only.
  int set_k = 0;
  std::optional<Rationale> perturbed_label;
  std::vector<int> occluded_span_indices;

  // LCI only.
  std::string inserted_court;
  std::string original_court;

  std::string text;
  std::string baseline_id;

  friend bool operator==(const PerturbedInstance&,
                         const PerturbedInstance&) = default;
};

std::string SerializeInstance(const PerturbedInstance& instance);
void WriteInstances(std::ostream& out,
                    std::span<const PerturbedInstance> instances);
// Throws MalformedLine(line_no).
std::vector<PerturbedInstance> ParseInstances(std::istream& in);
std::vector<PerturbedInstance> ParseInstances(std::string_view jsonl);

}  // namespace perturbaudit

#endif  // PERTURBAUDIT_INSTANCE_H_
