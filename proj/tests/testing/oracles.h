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

#ifndef PERTURBAUDIT_TESTS_ORACLES_H_
#define PERTURBAUDIT_TESTS_ORACLES_H_

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "perturbaudit/corpus.h"
#include "perturbaudit/metrics.h"

// Straightforward re-implementations used to check the library. They favour
// obviousness over speed and share no code with it.
namespace perturbaudit::testing {

using Tokens = std::vector<std::string>;

double OracleRougeN(const Tokens& a, const Tokens& b, int n);
double OracleRougeL(const Tokens& a, const Tokens& b);
double OracleBleu12(const Tokens& candidate, const Tokens& reference);
double OracleMeteor(const Tokens& candidate, const Tokens& reference);
double OracleJaccard(const Tokens& a, const Tokens& b);
double OracleOverlapMax(const Tokens& a, const Tokens& b);
double OracleOverlapMin(const Tokens& a, const Tokens& b);
double OracleEmbeddingF1(const std::vector<std::vector<double>>& a,
                         const std::vector<std::vector<double>>& b);

// P(label) under softmax((dismissal, approval) / t), computed with exp.
double OracleProbability(double dismissal, double approval, double t,
                         int label);
double OracleNll(const std::vector<std::pair<double, double>>& logits,
                 const std::vector<int>& labels, double t);
// Exhaustive scan of [0.05, 10] in steps of 1e-3.
double GridSearchTemperature(
    const std::vector<std::pair<double, double>>& logits,
    const std::vector<int>& labels);

struct OracleMes {
  double mes_plus = 0, std_plus = 0, mes_minus = 0, std_minus = 0;
  int64_t n_plus = 0, n_minus = 0;
};
// Two passes: means first, then squared deviations.
OracleMes TwoPassMes(const std::vector<double>& scores);
// Percent of records flipping from `from` to the other label.
double OracleFlipRate(const std::vector<std::pair<int, int>>& base_and_perturbed,
                      int from);

// Deletes the spans' ranges, collapses every whitespace run to one space and
// trims. Matches ApplyOcclusion on facts whose gaps are single spaces.
std::string StringEditOcclusion(const Case& c, const std::vector<int>& indices);

// Enumerates all non-empty index subsets by bitmask and counts, per
// (label, size), those whose members all carry that label.
std::map<std::pair<SpanLabel, int>, int64_t> BruteForceSubsetCounts(
    const Case& c);

Tokens RandomTokens(std::mt19937_64& rng, int vocabulary, int max_len);

struct RandomCaseOptions {
  int supports = 2;
  int opposes = 1;
  int neutral = 2;
  int lower_courts = 0;
  // Gaps are exactly one space when set; otherwise mixed whitespace and
  // punctuation.
  bool single_space_gaps = false;
};
// Words are unique per span ("w<case>_<span>_<j>") so that occluded text can
// be checked by substring absence. Span order is shuffled.
Case RandomCase(std::mt19937_64& rng, const std::string& case_id,
                const RandomCaseOptions& options);

}  // namespace perturbaudit::testing

#endif  // PERTURBAUDIT_TESTS_ORACLES_H_
