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

#include "perturbaudit/metrics.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <tuple>
#include <unordered_map>

#include "json.hpp"
#include "perturbaudit/error.h"

namespace perturbaudit {

std::string_view ToString(ConfidenceTarget target) {
  return target == ConfidenceTarget::kGold ? "gold" : "predicted";
}

std::optional<ConfidenceTarget> ParseConfidenceTarget(std::string_view text) {
  if (text == "predicted") return ConfidenceTarget::kPredicted;
  if (text == "gold") return ConfidenceTarget::kGold;
  return std::nullopt;
}

std::string_view ToString(GoldAlignment alignment) {
  return alignment == GoldAlignment::kOutcomeRelative ? "outcome"
                                                      : "prediction";
}

std::optional<GoldAlignment> ParseGoldAlignment(std::string_view text) {
  if (text == "prediction") return GoldAlignment::kPredictionRelative;
  if (text == "outcome") return GoldAlignment::kOutcomeRelative;
  return std::nullopt;
}

double ExplainabilityScore(const Prediction& baseline,
                           const Prediction& perturbed, ConfidenceTarget target,
                           Judgment judgment) {
  if (baseline.temperature != perturbed.temperature) {
    throw Error(ErrorCode::kCalibrationMismatch,
                "baseline T=" + std::to_string(baseline.temperature) +
                    ", perturbed T=" + std::to_string(perturbed.temperature));
  }
  const Judgment cls = target == ConfidenceTarget::kGold
                           ? judgment
                           : baseline.predicted_label;
  return baseline.Probability(cls) - perturbed.Probability(cls);
}

Rationale AssignLabel(double score, double epsilon) {
  if (score > epsilon) return Rationale::kSupports;
  if (score < -epsilon) return Rationale::kOpposes;
  return Rationale::kNeutral;
}

Rationale AlignGold(Rationale gold, Judgment baseline_pred, Judgment judgment,
                    GoldAlignment mode) {
  if (mode == GoldAlignment::kOutcomeRelative || baseline_pred == judgment) {
    return gold;
  }
  switch (gold) {
    case Rationale::kSupports: return Rationale::kOpposes;
    case Rationale::kOpposes: return Rationale::kSupports;
    case Rationale::kNeutral: return Rationale::kNeutral;
  }
  return gold;
}

std::string SerializeRecord(const ExplainabilityRecord& r) {
  nlohmann::ordered_json obj;
  obj["instance_id"] = r.instance_id;
  obj["case_id"] = r.case_id;
  obj["kind"] = std::string(ToString(r.kind));
  obj["language"] = std::string(ToString(r.language));
  obj["judgment"] = ToIndex(r.judgment);
  obj["set_k"] = r.set_k;
  obj["score"] = r.score;
  obj["assigned_label"] = std::string(ToString(r.assigned_label));
  obj["gold_label"] = std::string(ToString(r.gold_label));
  obj["annotated_label"] = std::string(ToString(r.annotated_label));
  obj["baseline_pred"] = ToIndex(r.baseline_pred);
  obj["perturbed_pred"] = ToIndex(r.perturbed_pred);
  if (r.kind == InstanceKind::kLci) obj["inserted_court"] = r.inserted_court;
  return obj.dump();
}

void WriteRecords(std::ostream& out,
                  std::span<const ExplainabilityRecord> records) {
  for (const auto& r : records) out << SerializeRecord(r) << '\n';
}

std::vector<ExplainabilityRecord> ParseRecords(std::istream& in) {
  std::vector<ExplainabilityRecord> out;
  std::string line;
  int64_t line_no = 0;
  auto rationale = [](const nlohmann::json& obj, const char* key) {
    auto label = ParseRationale(obj.at(key).get<std::string>());
    if (!label) throw std::invalid_argument(std::string("bad ") + key);
    return *label;
  };
  auto binary = [](const nlohmann::json& obj, const char* key) {
    const int v = obj.at(key).get<int>();
    if (v != 0 && v != 1) throw std::invalid_argument(std::string("bad ") + key);
    return static_cast<Judgment>(v);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto obj = nlohmann::json::parse(line);
      ExplainabilityRecord r;
      r.instance_id = obj.at("instance_id").get<std::string>();
      r.case_id = obj.at("case_id").get<std::string>();
      auto kind = ParseInstanceKind(obj.at("kind").get<std::string>());
      auto language = ParseLanguage(obj.at("language").get<std::string>());
      if (!kind || !language) throw std::invalid_argument("bad kind/language");
      r.kind = *kind;
      r.language = *language;
      r.judgment = binary(obj, "judgment");
      r.set_k = obj.at("set_k").get<int>();
      r.score = obj.at("score").get<double>();
      r.assigned_label = rationale(obj, "assigned_label");
      r.gold_label = rationale(obj, "gold_label");
      r.annotated_label = rationale(obj, "annotated_label");
      r.baseline_pred = binary(obj, "baseline_pred");
      r.perturbed_pred = binary(obj, "perturbed_pred");
      if (obj.contains("inserted_court")) {
        r.inserted_court = obj["inserted_court"].get<std::string>();
      }
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kMalformedLine,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<ExplainabilityRecord> ScoreInstances(
    std::span<const PerturbedInstance> instances,
    std::span<const Prediction> predictions, const ScoringOptions& options) {
  if (instances.size() != predictions.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "instances and predictions differ in length");
  }
  std::unordered_map<std::string, size_t> baselines;
  for (size_t i = 0; i < instances.size(); ++i) {
    if (instances[i].kind == InstanceKind::kBaseline) {
      baselines.emplace(instances[i].instance_id, i);
    }
  }
  std::vector<ExplainabilityRecord> records;
  for (size_t i = 0; i < instances.size(); ++i) {
    const PerturbedInstance& p = instances[i];
    if (p.kind == InstanceKind::kBaseline) continue;
    auto it = baselines.find(p.baseline_id);
    if (it == baselines.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  p.instance_id + ": baseline '" + p.baseline_id +
                      "' not found");
    }
    const Prediction& base = predictions[it->second];
    const Prediction& pert = predictions[i];
    ExplainabilityRecord r;
    r.instance_id = p.instance_id;
    r.case_id = p.case_id;
    r.kind = p.kind;
    r.language = p.language;
    r.judgment = p.judgment;
    r.set_k = p.set_k;
    r.score = ExplainabilityScore(base, pert, options.target, p.judgment);
    r.assigned_label = AssignLabel(r.score, options.epsilon);
    r.annotated_label = p.perturbed_label.value_or(Rationale::kNeutral);
    r.baseline_pred = base.predicted_label;
    r.perturbed_pred = pert.predicted_label;
    r.gold_label = AlignGold(r.annotated_label, r.baseline_pred, p.judgment,
                             options.alignment);
    r.inserted_court = p.inserted_court;
    records.push_back(std::move(r));
  }
  return records;
}

LabelCounts& LabelCounts::operator+=(const LabelCounts& other) {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  return *this;
}

double LabelCounts::F1() const {
  // 2PR/(P+R) reduces to 2TP/(2TP+FP+FN); zero when TP is zero.
  if (tp == 0) return 0.0;
  return 2.0 * tp / (2.0 * tp + fp + fn);
}

const OcclusionGroup* OcclusionReport::Find(Language language,
                                            int set_k) const {
  for (const auto& g : groups) {
    if (g.language == language && g.set_k == set_k) return &g;
  }
  return nullptr;
}

OcclusionReport PerLabelF1(std::span<const ExplainabilityRecord> records) {
  struct Accumulator {
    int64_t n = 0;
    std::map<Rationale, LabelCounts> counts;
    std::map<Rationale, int64_t> gold;
    std::map<Rationale, int64_t> assigned;
  };
  std::map<std::pair<Language, int>, Accumulator> groups;
  for (const auto& r : records) {
    if (r.kind != InstanceKind::kOcclusion) continue;
    for (int set_k : {r.set_k, 0}) {
      Accumulator& acc = groups[{r.language, set_k}];
      ++acc.n;
      ++acc.gold[r.gold_label];
      ++acc.assigned[r.assigned_label];
      for (Rationale label : kRationales) {
        const bool is_gold = r.gold_label == label;
        const bool is_assigned = r.assigned_label == label;
        LabelCounts& c = acc.counts[label];
        if (is_gold && is_assigned) ++c.tp;
        else if (is_assigned) ++c.fp;
        else if (is_gold) ++c.fn;
      }
    }
  }
  OcclusionReport report;
  for (auto& [key, acc] : groups) {
    OcclusionGroup group;
    group.language = key.first;
    group.set_k = key.second;
    group.num_records = acc.n;
    double sum = 0.0;
    for (Rationale label : kRationales) {
      const LabelCounts& c = acc.counts[label];
      if (c.empty()) continue;
      F1Cell cell;
      cell.counts = c;
      cell.f1 = c.F1();
      cell.gold_count = acc.gold[label];
      cell.assigned_count = acc.assigned[label];
      sum += cell.f1;
      group.cells.emplace(label, cell);
    }
    if (!group.cells.empty()) {
      group.macro_f1 = sum / static_cast<double>(group.cells.size());
    }
    report.groups.push_back(std::move(group));
  }
  return report;
}

void MomentAccumulator::Add(double x) {
  ++count;
  const double delta = x - mean;
  mean += delta / static_cast<double>(count);
  m2 += delta * (x - mean);
}

MomentAccumulator& MomentAccumulator::operator+=(
    const MomentAccumulator& other) {
  if (other.count == 0) return *this;
  if (count == 0) return *this = other;
  const double n = static_cast<double>(count + other.count);
  const double delta = other.mean - mean;
  mean += delta * static_cast<double>(other.count) / n;
  m2 += other.m2 + delta * delta * static_cast<double>(count) *
                       static_cast<double>(other.count) / n;
  count += other.count;
  return *this;
}

double MomentAccumulator::PopulationStddev() const {
  if (count == 0) return 0.0;
  return std::sqrt(std::max(0.0, m2 / static_cast<double>(count)));
}

MesStats Mes(std::span<const ExplainabilityRecord> records) {
  MomentAccumulator plus;
  MomentAccumulator minus;
  MesStats stats;
  for (const auto& r : records) {
    const double pct = 100.0 * r.score;
    if (r.score > 0) {
      plus.Add(pct);
    } else if (r.score < 0) {
      minus.Add(pct);
    } else {
      ++stats.n_zero;
    }
  }
  stats.n_plus = plus.count;
  stats.n_minus = minus.count;
  if (plus.count > 0) {
    stats.mes_plus = plus.mean;
    stats.std_plus = plus.PopulationStddev();
  }
  if (minus.count > 0) {
    stats.mes_minus = minus.mean;
    stats.std_minus = minus.PopulationStddev();
  }
  return stats;
}

FlipRates ComputeFlipRates(std::span<const ExplainabilityRecord> records) {
  FlipRates rates;
  rates.num_records = static_cast<int64_t>(records.size());
  for (const auto& r : records) {
    if (r.baseline_pred == Judgment::kApproval &&
        r.perturbed_pred == Judgment::kDismissal) {
      ++rates.flips_one_to_zero;
    } else if (r.baseline_pred == Judgment::kDismissal &&
               r.perturbed_pred == Judgment::kApproval) {
      ++rates.flips_zero_to_one;
    }
  }
  if (rates.num_records > 0) {
    const double n = static_cast<double>(rates.num_records);
    rates.one_to_zero = 100.0 * static_cast<double>(rates.flips_one_to_zero) / n;
    rates.zero_to_one = 100.0 * static_cast<double>(rates.flips_zero_to_one) / n;
  }
  return rates;
}

const BiasRow* BiasReport::Find(Language language) const {
  for (const auto& row : rows) {
    if (row.language == language) return &row;
  }
  return nullptr;
}

BiasReport BuildBiasReport(std::span<const ExplainabilityRecord> records) {
  std::map<Language, std::vector<ExplainabilityRecord>> by_language;
  for (const auto& r : records) {
    if (r.kind == InstanceKind::kLci) by_language[r.language].push_back(r);
  }
  BiasReport report;
  for (const auto& [language, group] : by_language) {
    report.rows.push_back(
        BiasRow{language, Mes(group), ComputeFlipRates(group)});
  }
  return report;
}

}  // namespace perturbaudit
