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

#include "perturbaudit/prediction.h"

#include "perturbaudit/error.h"

namespace perturbaudit {

Prediction MakePrediction(const Logits& logits,
                          const CalibrationModel& calibration) {
  Prediction p;
  p.logits = logits;
  p.probs = ApplyTemperature(logits, calibration);
  // Decided on the raw logits so calibration can never move the argmax, even
  // when rounding makes the scaled probabilities tie.
  p.predicted_label = logits.approval > logits.dismissal ? Judgment::kApproval
                                                         : Judgment::kDismissal;
  p.confidence = p.probs[p.predicted_label];
  p.temperature = calibration.temperature();
  return p;
}

std::vector<Prediction> PredictBatch(Backend& backend,
                                     std::span<const std::string> texts,
                                     const CalibrationModel& calibration) {
  if (texts.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty prediction batch");
  }
  const std::vector<Logits> logits = backend.Score(texts);
  if (logits.size() != texts.size()) {
    throw Error(ErrorCode::kProtocolError,
                backend.name() + " returned " + std::to_string(logits.size()) +
                    " results for " + std::to_string(texts.size()) + " texts");
  }
  std::vector<Prediction> out;
  out.reserve(logits.size());
  for (const Logits& l : logits) out.push_back(MakePrediction(l, calibration));
  return out;
}

}  // namespace perturbaudit
