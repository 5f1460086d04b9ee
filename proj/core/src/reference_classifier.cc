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

#include "perturbaudit/reference_classifier.h"

#include <cmath>

#include "json.hpp"
#include "perturbaudit/error.h"
#include "perturbaudit/text.h"

namespace perturbaudit {

ReferenceClassifier::ReferenceClassifier(
    std::map<std::string, double> token_weights, double bias)
    : bias_(bias) {
  for (auto& [token, weight] : token_weights) {
    weights_[ToLower(token)] += weight;
  }
}

double ReferenceClassifier::Weight(std::string_view token) const {
  auto it = weights_.find(token);
  return it == weights_.end() ? 0.0 : it->second;
}

double ReferenceClassifier::ApprovalLogit(std::string_view text) const {
  double logit = bias_;
  for (const std::string& token : WhitespaceTokens(text)) {
    logit += Weight(token);
  }
  return logit;
}

std::vector<Logits> ReferenceClassifier::Score(
    std::span<const std::string> texts) {
  std::vector<Logits> out;
  out.reserve(texts.size());
  for (const std::string& text : texts) {
    out.push_back(Logits{0.0, ApprovalLogit(text)});
  }
  return out;
}

ReferenceClassifier ReferenceClassifier::FromJson(std::string_view text) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch,
                std::string("weights file: ") + e.what());
  }
  if (!obj.is_object()) {
    throw Error(ErrorCode::kSchemaMismatch, "weights file must be an object");
  }
  double bias = 0.0;
  if (auto it = obj.find("bias"); it != obj.end()) {
    if (!it->is_number()) {
      throw Error(ErrorCode::kSchemaMismatch, "'bias' must be a number");
    }
    bias = it->get<double>();
  }
  std::map<std::string, double> weights;
  if (auto it = obj.find("weights"); it != obj.end()) {
    if (!it->is_object()) {
      throw Error(ErrorCode::kSchemaMismatch, "'weights' must be an object");
    }
    for (const auto& [token, weight] : it->items()) {
      if (!weight.is_number()) {
        throw Error(ErrorCode::kSchemaMismatch,
                    "weight of '" + token + "' must be a number");
      }
      weights[token] = weight.get<double>();
    }
  }
  if (!std::isfinite(bias)) {
    throw Error(ErrorCode::kSchemaMismatch, "'bias' must be finite");
  }
  return ReferenceClassifier(std::move(weights), bias);
}

std::string ReferenceClassifier::ToJson() const {
  nlohmann::ordered_json obj;
  obj["bias"] = bias_;
  nlohmann::ordered_json weights = nlohmann::ordered_json::object();
  for (const auto& [token, weight] : weights_) weights[token] = weight;
  obj["weights"] = std::move(weights);
  return obj.dump(2) + "\n";
}

}  // namespace perturbaudit
