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

#include "perturbaudit/calibration.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "json.hpp"
#include "perturbaudit/error.h"

namespace perturbaudit {
namespace {

// log(1 + exp(x)) without overflow.
double Softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void CheckFinite(const Logits& logits) {
  if (!std::isfinite(logits.dismissal) || !std::isfinite(logits.approval)) {
    throw Error(ErrorCode::kNonFiniteLogit, "logits must be finite");
  }
}

}  // namespace

CalibrationModel::CalibrationModel(double temperature)
    : temperature_(std::isnan(temperature)
                       ? 1.0
                       : std::clamp(temperature, kMinTemperature,
                                    kMaxTemperature)) {}

Probabilities ApplyTemperature(const Logits& logits,
                               const CalibrationModel& model) {
  CheckFinite(logits);
  const double margin =
      (logits.approval - logits.dismissal) / model.temperature();
  return Probabilities{Sigmoid(-margin), Sigmoid(margin)};
}

double MeanNll(std::span<const Logits> logits, std::span<const int> labels,
               double temperature) {
  double total = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    const double margin =
        (logits[i].approval - logits[i].dismissal) / temperature;
    // -log p(label) = softplus(-margin) for approval, softplus(margin) else.
    total += labels[i] == 1 ? Softplus(-margin) : Softplus(margin);
  }
  return total / static_cast<double>(logits.size());
}

TemperatureFit FitTemperature(std::span<const Logits> logits,
                              std::span<const int> labels) {
  if (logits.empty() || logits.size() != labels.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "need matching, non-empty logits and labels");
  }
  bool has[2] = {false, false};
  for (size_t i = 0; i < logits.size(); ++i) {
    CheckFinite(logits[i]);
    if (labels[i] != 0 && labels[i] != 1) {
      throw Error(ErrorCode::kInvalidArgument, "labels must be 0 or 1");
    }
    has[labels[i]] = true;
  }

  auto nll = [&](double t) { return MeanNll(logits, labels, t); };
  constexpr double kLo = CalibrationModel::kMinTemperature;
  constexpr double kHi = CalibrationModel::kMaxTemperature;

  constexpr int kScanPoints = 97;
  const double log_lo = std::log(kLo);
  const double log_step = (std::log(kHi) - log_lo) / (kScanPoints - 1);
  std::vector<double> grid(kScanPoints);
  std::vector<double> values(kScanPoints);
  for (int i = 0; i < kScanPoints; ++i) {
    grid[i] = i == kScanPoints - 1 ? kHi : std::exp(log_lo + i * log_step);
    values[i] = nll(grid[i]);
  }
  const int best = static_cast<int>(
      std::min_element(values.begin(), values.end()) - values.begin());

  double a = grid[std::max(best - 1, 0)];
  double b = grid[std::min(best + 1, kScanPoints - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = nll(c);
  double fd = nll(d);
  while (b - a > 1e-9 * std::max(1.0, std::abs(a) + std::abs(b))) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = nll(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = nll(d);
    }
  }

  TemperatureFit fit;
  fit.nll_at_one = nll(1.0);
  const bool degenerate = logits.size() < 2 || !has[0] || !has[1];
  double best_t = 1.0;
  double best_nll = fit.nll_at_one;
  // A single-class set only gets a clamp boundary (or stays at 1).
  const std::vector<double> candidates =
      degenerate ? std::vector<double>{kLo, kHi}
                 : std::vector<double>{0.5 * (a + b), grid[best], kLo, kHi};
  for (double t : candidates) {
    const double value = nll(t);
    if (value < best_nll) {
      best_t = t;
      best_nll = value;
    }
  }
  fit.model = CalibrationModel(best_t);
  fit.nll = best_nll;
  if (degenerate) {
    fit.degenerate = true;
    fit.warning =
        "degenerate validation set (needs >= 2 examples with both labels); "
        "temperature clamped to " +
        std::to_string(fit.model.temperature());
  }
  return fit;
}

std::string SerializeCalibration(const TemperatureFit& fit) {
  nlohmann::ordered_json obj;
  obj["temperature"] = fit.model.temperature();
  obj["nll"] = fit.nll;
  obj["nll_at_one"] = fit.nll_at_one;
  obj["degenerate"] = fit.degenerate;
  if (!fit.warning.empty()) obj["warning"] = fit.warning;
  return obj.dump(2) + "\n";
}

CalibrationModel ParseCalibration(std::string_view text) {
  try {
    const auto obj = nlohmann::json::parse(text);
    return CalibrationModel(obj.at("temperature").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch,
                std::string("calibration file: ") + e.what());
  }
}

}  // namespace perturbaudit
