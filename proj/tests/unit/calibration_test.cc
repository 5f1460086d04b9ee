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

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "oracles.h"
#include "perturbaudit/error.h"

namespace perturbaudit {
namespace {

TEST(ApplyTemperatureTest, ClosedFormSoftmax) {
  auto p = ApplyTemperature({2.0, 0.0}, CalibrationModel(1.0));
  EXPECT_NEAR(p.dismissal, 0.8808, 1e-4);
  EXPECT_NEAR(p.approval, 0.1192, 1e-4);
  p = ApplyTemperature({2.0, 0.0}, CalibrationModel(2.0));
  EXPECT_NEAR(p.dismissal, 0.7311, 1e-4);
  EXPECT_NEAR(p.approval, 0.2689, 1e-4);
  for (double c : {-50.0, 0.0, 3.5, 700.0}) {
    for (double t : {0.05, 1.0, 10.0}) {
      p = ApplyTemperature({c, c}, CalibrationModel(t));
      EXPECT_DOUBLE_EQ(p.dismissal, 0.5);
      EXPECT_DOUBLE_EQ(p.approval, 0.5);
    }
  }
}

TEST(ApplyTemperatureTest, SumsToOneAndMatchesExpSoftmax) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> logit(-30, 30);
  std::uniform_real_distribution<double> temp(0.05, 10);
  for (int i = 0; i < 2000; ++i) {
    const double d = logit(rng), a = logit(rng), t = temp(rng);
    const auto p = ApplyTemperature({d, a}, CalibrationModel(t));
    EXPECT_NEAR(p.dismissal + p.approval, 1.0, 1e-9);
    EXPECT_NEAR(p.approval, testing::OracleProbability(d, a, t, 1), 1e-12);
  }
}

TEST(ApplyTemperatureTest, RejectsNonFiniteLogits) {
  const double inf = std::numeric_limits<double>::infinity();
  for (Logits bad : {Logits{inf, 0}, Logits{0, -inf},
                     Logits{std::nan(""), 0}}) {
    try {
      ApplyTemperature(bad, CalibrationModel());
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kNonFiniteLogit);
    }
  }
}

TEST(CalibrationModelTest, ClampsTemperature) {
  EXPECT_EQ(CalibrationModel(100).temperature(), 10.0);
  EXPECT_EQ(CalibrationModel(0.001).temperature(), 0.05);
  EXPECT_EQ(CalibrationModel(-3).temperature(), 0.05);
  EXPECT_EQ(CalibrationModel(2.5).temperature(), 2.5);
}

TEST(FitTemperatureTest, UninformativeLogitsKeepUnitTemperature) {
  const std::vector<Logits> logits(10, Logits{0, 0});
  const std::vector<int> labels = {0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
  const auto fit = FitTemperature(logits, labels);
  EXPECT_NEAR(fit.model.temperature(), 1.0, 1e-2);
  EXPECT_FALSE(fit.degenerate);
}

TEST(FitTemperatureTest, SeparableSetClampsLow) {
  std::vector<Logits> logits;
  std::vector<int> labels;
  for (int i = 0; i < 20; ++i) {
    const int y = i % 2;
    logits.push_back(y ? Logits{0, 4.0 + i} : Logits{4.0 + i, 0});
    labels.push_back(y);
  }
  EXPECT_DOUBLE_EQ(FitTemperature(logits, labels).model.temperature(), 0.05);
}

TEST(FitTemperatureTest, SingleClassIsDegenerate) {
  const std::vector<Logits> logits = {{0, 1}, {0, 2}, {0, -1}};
  const std::vector<int> labels = {1, 1, 1};
  const auto fit = FitTemperature(logits, labels);
  EXPECT_TRUE(fit.degenerate);
  EXPECT_FALSE(fit.warning.empty());
  const double t = fit.model.temperature();
  EXPECT_TRUE(t == 0.05 || t == 10.0 || t == 1.0) << t;
  EXPECT_LE(fit.nll, fit.nll_at_one + 1e-12);
}

TEST(FitTemperatureTest, AgreesWithGridSearchOracle) {
  std::mt19937_64 rng(2);
  for (int set = 0; set < 50; ++set) {
    // Noisy, over- or under-confident logits.
    const double scale = std::exp(std::uniform_real_distribution<double>(-2, 2)(rng));
    std::normal_distribution<double> noise(0, 1);
    std::vector<Logits> logits;
    std::vector<std::pair<double, double>> plain;
    std::vector<int> labels;
    for (int i = 0; i < 200; ++i) {
      const int y = static_cast<int>(rng() % 2);
      const double margin = scale * ((y ? 1.0 : -1.0) + 1.5 * noise(rng));
      const double d = noise(rng);
      logits.push_back({d, d + margin});
      plain.emplace_back(d, d + margin);
      labels.push_back(y);
    }
    const auto fit = FitTemperature(logits, labels);
    const double oracle = testing::GridSearchTemperature(plain, labels);
    EXPECT_NEAR(fit.model.temperature(), oracle, 1e-2) << "set " << set;
    EXPECT_LE(fit.nll, fit.nll_at_one + 1e-12);
    EXPECT_NEAR(fit.nll, testing::OracleNll(plain, labels, fit.model.temperature()),
                1e-9);
  }
}

TEST(FitTemperatureTest, RejectsBadInput) {
  EXPECT_THROW(FitTemperature({}, {}), Error);
  const std::vector<Logits> one = {{0, 1}};
  EXPECT_THROW(FitTemperature(one, std::vector<int>{2}), Error);
  EXPECT_THROW(FitTemperature(one, std::vector<int>{0, 1}), Error);
}

TEST(CalibrationJsonTest, RoundTrips) {
  const std::vector<Logits> logits = {{0, 1}, {1, 0}, {0, 0.5}, {0.2, 0}};
  const std::vector<int> labels = {1, 0, 0, 1};
  const auto fit = FitTemperature(logits, labels);
  EXPECT_EQ(ParseCalibration(SerializeCalibration(fit)), fit.model);
  EXPECT_THROW(ParseCalibration("{}"), Error);
  EXPECT_THROW(ParseCalibration("nope"), Error);
}

}  // namespace
}  // namespace perturbaudit
