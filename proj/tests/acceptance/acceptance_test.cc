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

// One PASS/FAIL line per acceptance criterion. Exit status is non-zero when
// any criterion fails.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fake_model_server.h"
#include "oracles.h"
#include "perturbaudit/agreement.h"
#include "perturbaudit/calibration.h"
#include "perturbaudit/corpus.h"
#include "perturbaudit/metrics.h"
#include "perturbaudit/perturb.h"
#include "perturbaudit/prediction.h"
#include "perturbaudit/published.h"
#include "perturbaudit/reference_classifier.h"
#include "perturbaudit/synthetic.h"
#include "pipeline.h"

namespace perturbaudit::testing {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  enum class Status { kPass, kFail, kSkip };
  Status status = Status::kPass;
  std::string detail;
};

Outcome Pass(std::string detail) { return {Outcome::Status::kPass, std::move(detail)}; }
Outcome Fail(std::string detail) { return {Outcome::Status::kFail, std::move(detail)}; }
Outcome Skip(std::string detail) { return {Outcome::Status::kSkip, std::move(detail)}; }

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since)
      .count();
}

std::string Fixed(double x, int digits = 2) {
  std::ostringstream s;
  s.precision(digits);
  s << std::fixed << x;
  return s.str();
}

// synth -> generate-occlusion -> evaluate-occlusion through the CLI, then
// per-label F1 over the written records.
Outcome OracleEndToEnd() {
  const fs::path dir = fs::temp_directory_path() /
                       ("perturbaudit_accept_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  std::ostringstream out, err;
  auto run = [&](std::vector<std::string> args) {
    args.insert(args.begin(), "perturbaudit");
    args.insert(args.end(), {"--out", dir.string()});
    return cli::RunCli(args, out, err);
  };
  const auto start = std::chrono::steady_clock::now();
  if (run({"synth", "--cases", "200", "--validation-cases", "0", "--annotators",
           "0", "--seed", "2024"}) != 0 ||
      run({"generate-occlusion", "--corpus", (dir / "corpus.jsonl").string()}) != 0 ||
      run({"evaluate-occlusion", "--concurrency", "1", "--reference-weights",
           (dir / "reference_weights.json").string()}) != 0) {
    fs::remove_all(dir);
    return Fail("pipeline failed: " + err.str());
  }
  const double elapsed = Seconds(start);
  std::ifstream in(dir / "occlusion_records.jsonl");
  const auto records = ParseRecords(in);
  fs::remove_all(dir);
  const OcclusionReport report = PerLabelF1(records);
  int cells = 0;
  for (const auto& group : report.groups) {
    for (const auto& [label, cell] : group.cells) {
      ++cells;
      if (cell.f1 != 1.0) {
        return Fail(std::string(ToString(group.language)) + " set " +
                    std::to_string(group.set_k) + " " +
                    std::string(ToString(label)) + " F1 " + Fixed(cell.f1, 6));
      }
    }
  }
  if (cells == 0) return Fail("no records");
  if (elapsed >= 30.0) return Fail("took " + Fixed(elapsed) + " s");
  return Pass(std::to_string(records.size()) + " records, " +
              std::to_string(cells) + " F1 cells all 1.000, " + Fixed(elapsed) +
              " s");
}

Outcome Combinatorics() {
  std::mt19937_64 rng(500);
  std::vector<Case> cases;
  for (int i = 0; i < 500; ++i) {
    RandomCaseOptions options;
    options.supports = static_cast<int>(rng() % 7);
    options.opposes = static_cast<int>(rng() % 6);
    options.neutral = static_cast<int>(rng() % 6);
    options.lower_courts = static_cast<int>(rng() % 2);
    cases.push_back(RandomCase(rng, "c" + std::to_string(i), options));
  }
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::vector<PerturbedInstance>> suites;
  for (const Case& c : cases) suites.push_back(GenerateOcclusionSuite(c));
  const double elapsed = Seconds(start);
  int64_t instances = 0;
  for (size_t i = 0; i < cases.size(); ++i) {
    std::map<std::pair<SpanLabel, int>, int64_t> got;
    for (const auto& p : suites[i]) {
      if (p.kind != InstanceKind::kOcclusion) continue;
      ++got[{ToSpanLabel(*p.perturbed_label), p.set_k}];
      ++instances;
    }
    auto expected = BruteForceSubsetCounts(cases[i]);
    std::erase_if(expected, [](const auto& kv) {
      return kv.first.second > 4 || kv.first.first == SpanLabel::kLowerCourt ||
             kv.second == 0;
    });
    if (got != expected) return Fail("count mismatch for " + cases[i].case_id);
  }
  if (elapsed >= 5.0) return Fail("took " + Fixed(elapsed) + " s");
  return Pass(std::to_string(instances) + " instances over 500 cases, " +
              Fixed(elapsed, 3) + " s");
}

Outcome AnalyticScore() {
  std::mt19937_64 rng(1000);
  std::uniform_real_distribution<double> weight(-1.5, 1.5);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    RandomCaseOptions options;
    options.supports = 1 + static_cast<int>(rng() % 4);
    options.opposes = 1 + static_cast<int>(rng() % 4);
    options.neutral = 1 + static_cast<int>(rng() % 4);
    options.single_space_gaps = true;
    const Case c = RandomCase(rng, "a" + std::to_string(trial), options);
    std::map<std::string, double> weights;
    std::vector<double> span_weight(c.spans.size(), 0.0);
    for (size_t i = 0; i < c.spans.size(); ++i) {
      std::istringstream words(c.spans[i].text);
      for (std::string w; words >> w;) {
        weights[w] = weight(rng);
        span_weight[i] += weights[w];
      }
    }
    const double bias = weight(rng);
    ReferenceClassifier model(weights, bias);

    const SpanLabel label = std::array{SpanLabel::kSupports, SpanLabel::kOpposes,
                                       SpanLabel::kNeutral}[rng() % 3];
    std::vector<int> members;
    for (size_t i = 0; i < c.spans.size(); ++i) {
      if (c.spans[i].label == label) members.push_back(static_cast<int>(i));
    }
    std::shuffle(members.begin(), members.end(), rng);
    members.resize(1 + rng() % std::min<size_t>(4, members.size()));
    std::sort(members.begin(), members.end());

    const std::string base_text = ReconstructFacts(c);
    const std::string pert_text = ApplyOcclusion(c, members);
    const auto logits = model.Score(std::vector<std::string>{base_text, pert_text});
    const Prediction base = MakePrediction(logits[0], CalibrationModel());
    const Prediction pert = MakePrediction(logits[1], CalibrationModel());
    const double score = ExplainabilityScore(base, pert, ConfidenceTarget::kPredicted,
                                             c.judgment);

    double a0 = bias;
    for (double w : span_weight) a0 += w;
    double a1 = a0;
    for (int i : members) a1 -= span_weight[i];
    const int cls = a0 > 0 ? 1 : 0;
    const double expected =
        OracleProbability(0, a0, 1.0, cls) - OracleProbability(0, a1, 1.0, cls);
    worst = std::max(worst, std::abs(score - expected));
  }
  if (worst > 1e-9) return Fail("max deviation " + std::to_string(worst));
  std::ostringstream s;
  s << "1000 pairs, max deviation " << worst;
  return Pass(s.str());
}

Outcome Calibration() {
  std::mt19937_64 rng(50);
  double worst = 0.0;
  int64_t checked = 0;
  for (int set = 0; set < 50; ++set) {
    const int n = 50 + static_cast<int>(rng() % 400);
    const double true_t = std::uniform_real_distribution<double>(0.3, 4.0)(rng);
    std::normal_distribution<double> margin(0.0, 3.0);
    std::vector<Logits> logits;
    std::vector<int> labels;
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < n; ++i) {
      const double d = margin(rng), a = margin(rng);
      const double p = OracleProbability(d, a, true_t, 1);
      logits.push_back({d, a});
      pairs.emplace_back(d, a);
      labels.push_back(std::uniform_real_distribution<double>(0, 1)(rng) < p);
    }
    const TemperatureFit fit = FitTemperature(logits, labels);
    const double oracle = GridSearchTemperature(pairs, labels);
    worst = std::max(worst, std::abs(fit.model.temperature() - oracle));
    if (std::abs(fit.model.temperature() - oracle) > 1e-2) {
      return Fail("set " + std::to_string(set) + ": T=" +
                  Fixed(fit.model.temperature(), 4) + " oracle " + Fixed(oracle, 4));
    }
    const double nll_star = OracleNll(pairs, labels, fit.model.temperature());
    if (nll_star > OracleNll(pairs, labels, 1.0)) {
      return Fail("set " + std::to_string(set) + ": NLL(T*) > NLL(1)");
    }
    for (const Logits& l : logits) {
      if (l.approval == l.dismissal) continue;
      const Judgment raw = l.approval > l.dismissal ? Judgment::kApproval
                                                    : Judgment::kDismissal;
      const Prediction p = MakePrediction(l, fit.model);
      const Judgment calibrated = p.probs[Judgment::kApproval] > 0.5
                                      ? Judgment::kApproval
                                      : Judgment::kDismissal;
      if (p.predicted_label != raw || calibrated != raw) {
        return Fail("argmax changed on set " + std::to_string(set));
      }
      ++checked;
    }
  }
  return Pass("50 sets, max |T - T_grid| = " + Fixed(worst, 5) + ", argmax kept on " +
              std::to_string(checked) + " instances");
}

Outcome MetricOracles() {
  std::mt19937_64 rng(100);
  double worst = 0.0;
  auto check = [&](double got, double want) {
    worst = std::max(worst, std::abs(got - want));
  };
  auto embed = [](const Tokens& tokens) {
    TokenEmbeddings rows;
    for (const auto& t : tokens) rows.push_back(FakeModelServer::TokenVector(t));
    return rows;
  };
  for (int i = 0; i < 100; ++i) {
    const Tokens a = RandomTokens(rng, 10, 15);
    const Tokens b = RandomTokens(rng, 10, 15);
    const TokenSeq ta(a), tb(b);
    check(RougeN(ta, tb, 1), OracleRougeN(a, b, 1));
    check(RougeN(ta, tb, 2), OracleRougeN(a, b, 2));
    check(RougeL(ta, tb), OracleRougeL(a, b));
    check(Bleu12(ta, tb), OracleBleu12(a, b));
    check(Meteor(ta, tb), OracleMeteor(a, b));
    check(Jaccard(ta, tb), OracleJaccard(a, b));
    check(OverlapMax(ta, tb), OracleOverlapMax(a, b));
    check(OverlapMin(ta, tb), OracleOverlapMin(a, b));
    check(EmbeddingF1(embed(a), embed(b)), OracleEmbeddingF1(embed(a), embed(b)));
  }
  if (worst > 1e-9) return Fail("max deviation " + std::to_string(worst));
  for (int i = 0; i < 10000; ++i) {
    const TokenSeq a(RandomTokens(rng, 12, 10)), b(RandomTokens(rng, 12, 10));
    const double j = Jaccard(a, b), mx = OverlapMax(a, b), mn = OverlapMin(a, b);
    if (!(mn >= mx && mx >= j)) return Fail("chain broken on pair " + std::to_string(i));
  }
  std::ostringstream s;
  s << "9 metrics x 100 pairs, max deviation " << worst
    << "; chain holds on 10000 pairs";
  return Pass(s.str());
}

Outcome MesAndLci() {
  std::mt19937_64 rng(27);
  std::normal_distribution<double> score(0.0, 0.04);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ExplainabilityRecord> records;
    std::vector<double> scores;
    std::vector<std::pair<int, int>> preds;
    const int n = 1 + static_cast<int>(rng() % 500);
    for (int i = 0; i < n; ++i) {
      ExplainabilityRecord r;
      r.kind = InstanceKind::kLci;
      r.score = rng() % 8 == 0 ? 0.0 : score(rng);
      r.baseline_pred = static_cast<Judgment>(rng() % 2);
      r.perturbed_pred = static_cast<Judgment>(rng() % 2);
      scores.push_back(r.score);
      preds.emplace_back(ToIndex(r.baseline_pred), ToIndex(r.perturbed_pred));
      records.push_back(r);
    }
    const MesStats mes = Mes(records);
    const OracleMes oracle = TwoPassMes(scores);
    const FlipRates flips = ComputeFlipRates(records);
    auto near = [](const std::optional<double>& got, double want, int64_t count) {
      return count == 0 ? !got.has_value() : std::abs(*got - want) <= 1e-9;
    };
    if (!near(mes.mes_plus, oracle.mes_plus, oracle.n_plus) ||
        !near(mes.std_plus, oracle.std_plus, oracle.n_plus) ||
        !near(mes.mes_minus, oracle.mes_minus, oracle.n_minus) ||
        !near(mes.std_minus, oracle.std_minus, oracle.n_minus) ||
        std::abs(flips.one_to_zero - OracleFlipRate(preds, 1)) > 1e-9 ||
        std::abs(flips.zero_to_one - OracleFlipRate(preds, 0)) > 1e-9) {
      return Fail("record set " + std::to_string(trial) + " differs from oracle");
    }
  }

  SyntheticOptions options;
  options.num_cases = 27;
  options.languages = {Language::kDe};
  options.courts_per_language = 13;
  options.seed = 13;
  const auto corpus = GenerateSyntheticCorpus(options);
  const CourtRegistry registry = BuildCourtRegistry(corpus.cases);
  if (registry.size(Language::kDe) != 13) {
    return Fail("registry has " + std::to_string(registry.size(Language::kDe)) +
                " courts");
  }
  int64_t replacements = 0;
  int64_t baselines = 0;
  for (const Case& c : corpus.cases) {
    int mentions = 0;
    for (const Span& s : c.spans) mentions += s.label == SpanLabel::kLowerCourt;
    if (mentions != 1) return Fail(c.case_id + " is not a single-court case");
    for (const auto& p : GenerateLciSuite(c, registry)) {
      (p.kind == InstanceKind::kBaseline ? baselines : replacements) += 1;
    }
  }
  if (replacements != 27 * 12 || baselines != 27) {
    return Fail(std::to_string(replacements) + " replacements + " +
                std::to_string(baselines) + " baselines");
  }
  return Pass("100 record sets match oracles; LCI emits 324 + 27 = 351 instances");
}

Outcome Published() {
  const char* dir_env = std::getenv("PERTURBAUDIT_PUBLISHED_DIR");
  if (dir_env == nullptr || *dir_env == '\0') {
    return Skip("PERTURBAUDIT_PUBLISHED_DIR not set");
  }
  const fs::path dir(dir_env);
  std::vector<std::unique_ptr<std::ifstream>> streams;
  std::vector<OcclusionSource> sources;
  for (int k = 1; k <= 4; ++k) {
    const fs::path path = dir / ("occlusion_set" + std::to_string(k) + ".jsonl");
    if (!fs::exists(path)) return Fail("missing " + path.string());
    streams.push_back(std::make_unique<std::ifstream>(path));
    sources.push_back({k, streams.back().get()});
  }
  const fs::path lci_path = dir / "lower_court_insertion.jsonl";
  if (!fs::exists(lci_path)) return Fail("missing " + lci_path.string());
  std::ifstream lci(lci_path);
  const PublishedCounts counts = ImportPublished(sources, &lci).counts;

  std::vector<std::string> mismatches;
  auto expect = [&](const std::string& what, int64_t got, int64_t want) {
    if (got != want) {
      mismatches.push_back(what + " " + std::to_string(got) + " != " +
                           std::to_string(want));
    }
  };
  expect("de set 1 opposes", counts.Occlusion(Language::kDe, 1, Rationale::kOpposes), 55);
  expect("de set 1 neutral", counts.Occlusion(Language::kDe, 1, Rationale::kNeutral), 247);
  expect("de set 1 supports", counts.Occlusion(Language::kDe, 1, Rationale::kSupports), 98);
  const std::array<int64_t, 3> documents = {27, 24, 23};
  const std::array<int64_t, 3> occlusion = {12769, 6406, 9484};
  const std::array<int64_t, 3> lci_totals = {351, 391, 312};
  for (size_t i = 0; i < kLanguages.size(); ++i) {
    const Language l = kLanguages[i];
    const std::string name(ToString(l));
    expect(name + " documents",
           counts.documents.count(l) ? counts.documents.at(l) : 0, documents[i]);
    expect(name + " occlusion total", counts.OcclusionTotal(l), occlusion[i]);
    expect(name + " lci total", counts.Lci(l), lci_totals[i]);
  }
  const std::string note = "LCI grand total " + std::to_string(counts.LciGrandTotal()) +
                           " (expected per-language totals sum to 1054; the dataset description states 1127)";
  if (!mismatches.empty()) {
    std::string joined;
    for (const auto& m : mismatches) joined += (joined.empty() ? "" : "; ") + m;
    return Fail(joined + "; " + note);
  }
  return Pass("all counts match; " + note);
}

}  // namespace
}  // namespace perturbaudit::testing

int main() {
  using perturbaudit::testing::Outcome;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle_end_to_end", perturbaudit::testing::OracleEndToEnd},
      {"combinatorics", perturbaudit::testing::Combinatorics},
      {"analytic_explainability_score", perturbaudit::testing::AnalyticScore},
      {"calibration", perturbaudit::testing::Calibration},
      {"agreement_metric_oracles", perturbaudit::testing::MetricOracles},
      {"mes_flip_and_lci_counts", perturbaudit::testing::MesAndLci},
      {"published_dataset_counts", perturbaudit::testing::Published},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {Outcome::Status::kFail, std::string("exception: ") + e.what()};
    }
    const char* tag = outcome.status == Outcome::Status::kPass   ? "PASS"
                      : outcome.status == Outcome::Status::kSkip ? "SKIP"
                                                                 : "FAIL";
    if (outcome.status == Outcome::Status::kFail) ++failures;
    std::cout << tag << " " << name << ": " << outcome.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
