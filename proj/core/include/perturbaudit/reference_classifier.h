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

#ifndef PERTURBAUDIT_REFERENCE_CLASSIFIER_H_
#define PERTURBAUDIT_REFERENCE_CLASSIFIER_H_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "perturbaudit/prediction.h"

namespace perturbaudit {

// Deterministic bag-of-tokens classifier whose reliance on every span is
// known in closed form:
//   logit_dismissal = 0
//   logit_approval  = bias + sum of weights over WhitespaceTokens(text)
// Unknown tokens weigh 0. Removing a span therefore moves the approval logit
// by exactly minus the weight sum of its tokens.
class ReferenceClassifier : public Backend {
 public:
  ReferenceClassifier() = default;
  ReferenceClassifier(std::map<std::string, double> token_weights, double bias);

  double ApprovalLogit(std::string_view text) const;
  double Weight(std::string_view token) const;

  std::vector<Logits> Score(std::span<const std::string> texts) override;
  std::string name() const override { return "reference"; }

  const std::map<std::string, double, std::less<>>& token_weights() const {
    return weights_;
  }
  double bias() const { return bias_; }

  // Weights file: {"bias": <real>, "weights": {"<token>": <real>, ...}}.
  // Tokens are lowercased on load. Throws SchemaMismatch.
  static ReferenceClassifier FromJson(std::string_view json);
  std::string ToJson() const;

 private:
  std::map<std::string, double, std::less<>> weights_;
  double bias_ = 0.0;
};

}  // namespace perturbaudit

#endif  // PERTURBAUDIT_REFERENCE_CLASSIFIER_H_
