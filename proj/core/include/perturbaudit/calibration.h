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

#ifndef PERTURBAUDIT_CALIBRATION_H_
#define PERTURBAUDIT_CALIBRATION_H_

#include <span>
#include <string>

#include "perturbaudit/types.h"

namespace perturbaudit {

// Head outputs indexed as (dismissal, approval).
struct Logits {
  double dismissal = 0.0;
  double approval = 0.0;

  double operator[](Judgment label) const {
    return label == Judgment::kApproval ? approval : dismissal;
  }
  friend bool operator==(const Logits&, const Logits&) = default;
};

struct Probabilities {
  double dismissal = 0.5;
  double approval = 0.5;

  double operator[](Judgment label) const {
    return label == Judgment::kApproval ? approval : dismissal;
  }
};

// Temperature scaling: probs = softmax(logits / T) with T clamped to
// [kMinTemperature, kMaxTemperature].
class CalibrationModel {
 public:
  static constexpr double kMinTemperature = 0.05;
  static constexpr double kMaxTemperature = 10.0;

  CalibrationModel() = default;
  explicit CalibrationModel(double temperature);

  double temperature() const { return temperature_; }

  friend bool operator==(const CalibrationModel&,
                         const CalibrationModel&) = default;

 private:
  double temperature_ = 1.0;
};

// Throws NonFiniteLogit.
Probabilities ApplyTemperature(const Logits& logits,
                               const CalibrationModel& model);

// Mean negative log-likelihood of softmax(logits / T) at the labels (0/1).
double MeanNll(std::span<const Logits> logits, std::span<const int> labels,
               double temperature);

struct TemperatureFit {
  CalibrationModel model;
  double nll = 0.0;
  double nll_at_one = 0.0;
  // Fewer than two examples or a single class; the result sits on the clamp
  // boundary the NLL decreases towards.
  bool degenerate = false;
  std::string warning;
};

// Minimizes MeanNll over the clamp interval: a log-spaced scan brackets the
// minimum, golden-section search refines it. T = 1 is always a candidate, so
// nll <= nll_at_one. Throws InvalidArgument on empty or mismatched input and
// NonFiniteLogit.
TemperatureFit FitTemperature(std::span<const Logits> logits,
                              std::span<const int> labels);

std::string SerializeCalibration(const TemperatureFit& fit);
CalibrationModel ParseCalibration(std::string_view json);

}  // namespace perturbaudit

#endif  // PERTURBAUDIT_CALIBRATION_H_
