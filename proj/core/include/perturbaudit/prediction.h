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

#ifndef PERTURBAUDIT_PREDICTION_H_
#define PERTURBAUDIT_PREDICTION_H_

#include <span>
#include <string>
#include <vector>

#include "perturbaudit/calibration.h"
#include "perturbaudit/types.h"

namespace perturbaudit {

// Output of one text through a binary head, calibrated with `temperature`.
struct Prediction {
  std::string instance_id;
  Logits logits;
  Probabilities probs;
  Judgment predicted_label = Judgment::kDismissal;
  // Calibrated probability of the predicted label.
  double confidence = 0.5;
  double temperature = 1.0;

  double Probability(Judgment label) const { return probs[label]; }
};

// Throws NonFiniteLogit.
Prediction MakePrediction(const Logits& logits,
                          const CalibrationModel& calibration);

// A source of raw logits. Implementations must return exactly one pair per
// input text, in input order.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::vector<Logits> Score(std::span<const std::string> texts) = 0;
  virtual std::string name() const = 0;
};

// One Prediction per text, order preserved. Instance ids are left empty.
// Throws InvalidArgument on an empty batch; backend errors propagate.
std::vector<Prediction> PredictBatch(Backend& backend,
                                     std::span<const std::string> texts,
                                     const CalibrationModel& calibration =
                                         CalibrationModel());

}  // namespace perturbaudit

#endif  // PERTURBAUDIT_PREDICTION_H_
