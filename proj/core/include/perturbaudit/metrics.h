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

#ifndef PERTURBAUDIT_METRICS_H_
#define PERTURBAUDIT_METRICS_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "perturbaudit/instance.h"
#include "perturbaudit/prediction.h"
#include "perturbaudit/types.h"

namespace perturbaudit {

// Which class's calibrated probability is differenced.
enum class ConfidenceTarget { kPredicted, kGold };
// Whether supports/opposes gold labels are read relative to the actual
// outcome (as annotated) or to the model's baseline prediction.
enum class GoldAlignment { kPredictionRelative, kOutcomeRelative };

std::string_view ToString(ConfidenceTarget target);
std::optional<ConfidenceTarget> ParseConfidenceTarget(std::string_view text);
std::string_view ToString(GoldAlignment alignment);
std::optional<GoldAlignment> ParseGoldAlignment(std::string_view text);

inline constexpr double kDefaultEpsilon = 0.01;

// conf(baseline) - conf(perturbed), where conf is the calibrated probability
// of the baseline's predicted class (kPredicted) or of `judgment` (kGold).
// Positive: the removed or replaced text supported the prediction.
// Throws CalibrationMismatch when the two temperatures differ.
double ExplainabilityScore(const Prediction& baseline,
                           const Prediction& perturbed, ConfidenceTarget target,
                           Judgment judgment);

// supports if score > epsilon, opposes if score < -epsilon, else neutral.
Rationale AssignLabel(double score, double epsilon);

// Prediction-relative mode swaps supports and opposes when the baseline
// prediction disagrees with the actual judgment. Neutral never changes.
Rationale AlignGold(Rationale gold, Judgment baseline_pred, Judgment judgment,
                    GoldAlignment mode);

struct ExplainabilityRecord {
  std::string instance_id;
  std::string case_id;
  InstanceKind kind = InstanceKind::kOcclusion;
  Language language = Language::kDe;
  Judgment judgment = Judgment::kDismissal;
  int set_k = 0;
  double score = 0.0;
  Rationale assigned_label = Rationale::kNeutral;
  // Effective gold after alignment; the raw annotation is kept alongside so
  // reports can be recomputed under the other alignment mode.
  Rationale gold_label = Rationale::kNeutral;
  Rationale annotated_label = Rationale::kNeutral;
  Judgment baseline_pred = Judgment::kDismissal;
  Judgment perturbed_pred = Judgment::kDismissal;
  std::string inserted_court;

  friend bool operator==(const ExplainabilityRecord&,
                         const ExplainabilityRecord&) = default;
};

std::string SerializeRecord(const ExplainabilityRecord& record);
void WriteRecords(std::ostream& out,
                  std::span<const ExplainabilityRecord> records);
// Throws MalformedLine(line_no).
std::vector<ExplainabilityRecord> ParseRecords(std::istream& in);

struct ScoringOptions {
  double epsilon = kDefaultEpsilon;
  ConfidenceTarget target = ConfidenceTarget::kPredicted;
  GoldAlignment alignment = GoldAlignment::kPredictionRelative;
};

// Pairs every occlusion/LCI instance with its baseline and scores it.
// `predictions` is parallel to `instances`. Throws InvalidArgument when a
// baseline_id does not resolve.
std::vector<ExplainabilityRecord> ScoreInstances(
    std::span<const PerturbedInstance> instances,
    std::span<const Prediction> predictions, const ScoringOptions& options);

// Confusion counts for one label, one-vs-rest. Mergeable.
struct LabelCounts {
  int64_t tp = 0;
  int64_t fp = 0;
  int64_t fn = 0;

  LabelCounts& operator+=(const LabelCounts& other);
  bool empty() const { return tp + fp + fn == 0; }
  // 2PR / (P + R), 0 when P + R = 0.
  double F1() const;
};

struct F1Cell {
  LabelCounts counts;
  double f1 = 0.0;
  int64_t gold_count = 0;
  int64_t assigned_count = 0;
};

// set_k == 0 denotes the pooled "all sets" group.
struct OcclusionGroup {
  Language language = Language::kDe;
  int set_k = 0;
  int64_t num_records = 0;
  // Labels with no gold and no assigned instance are absent.
  std::map<Rationale, F1Cell> cells;
  std::optional<double> macro_f1;
};

struct OcclusionReport {
  // Non-empty groups only, ordered by (language, set_k).
  std::vector<OcclusionGroup> groups;

  const OcclusionGroup* Find(Language language, int set_k) const;
};

// Occlusion records only; other kinds are ignored.
OcclusionReport PerLabelF1(std::span<const ExplainabilityRecord> records);

// Running mean and M2 (Chan et al. pairwise merge).
struct MomentAccumulator {
  int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void Add(double x);
  MomentAccumulator& operator+=(const MomentAccumulator& other);
  double PopulationStddev() const;
};

struct MesStats {
  // Percentages (100 * score). Absent when the partition is empty.
  std::optional<double> mes_plus;
  std::optional<double> std_plus;
  std::optional<double> mes_minus;
  std::optional<double> std_minus;
  int64_t n_plus = 0;
  int64_t n_minus = 0;
  int64_t n_zero = 0;
};

MesStats Mes(std::span<const ExplainabilityRecord> records);

struct FlipRates {
  double one_to_zero = 0.0;  // percent
  double zero_to_one = 0.0;  // percent
  int64_t flips_one_to_zero = 0;
  int64_t flips_zero_to_one = 0;
  int64_t num_records = 0;
};

FlipRates ComputeFlipRates(std::span<const ExplainabilityRecord> records);

struct BiasRow {
  Language language = Language::kDe;
  MesStats mes;
  FlipRates flips;
};

struct BiasReport {
  std::vector<BiasRow> rows;  // languages with at least one LCI record

  const BiasRow* Find(Language language) const;
};

// LCI records only; other kinds are ignored.
BiasReport BuildBiasReport(std::span<const ExplainabilityRecord> records);

}  // namespace perturbaudit

#endif  // PERTURBAUDIT_METRICS_H_
