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

#include "perturbaudit/agreement.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.h"
#include "perturbaudit/error.h"

namespace perturbaudit {
namespace {

using namespace perturbaudit::testing;

TokenSeq T(std::string_view text) { return TokenSeq::FromText(text); }

TEST(MetricsTest, HandWorkedValues) {
  EXPECT_DOUBLE_EQ(RougeN(T("a b c"), T("a b d"), 1), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(RougeN(T("a b c"), T("a b d"), 2), 0.5);
  EXPECT_DOUBLE_EQ(RougeL(T("a x b y c"), T("a b c")), 2 * 0.6 * 1.0 / 1.6);
  EXPECT_NEAR(Bleu12(T("the cat sat"), T("the cat sat on")),
              std::exp(1.0 - 4.0 / 3.0), 1e-12);
  EXPECT_NEAR(Meteor(T("a b c"), T("a b c")), 53.0 / 54.0, 1e-12);
  EXPECT_DOUBLE_EQ(Jaccard(T("a b c"), T("b c d e")), 2.0 / 5.0);
  EXPECT_DOUBLE_EQ(OverlapMax(T("a b c"), T("b c d e")), 0.5);
  EXPECT_DOUBLE_EQ(OverlapMin(T("a b c"), T("b c d e")), 2.0 / 3.0);
}

TEST(MetricsTest, IdenticalTextsScoreOne) {
  const TokenSeq x = T("Die Vorinstanz hat die Frist verpasst");
  EXPECT_EQ(RougeN(x, x, 1), 1.0);
  EXPECT_EQ(RougeN(x, x, 2), 1.0);
  EXPECT_EQ(RougeN(T("single"), T("single"), 2), 1.0);
  EXPECT_EQ(RougeL(x, x), 1.0);
  EXPECT_NEAR(Bleu12(x, x), 1.0, 1e-12);
  EXPECT_EQ(Jaccard(x, x), 1.0);
  EXPECT_EQ(OverlapMax(x, x), 1.0);
  EXPECT_EQ(OverlapMin(x, x), 1.0);
  EXPECT_LT(Meteor(x, x), 1.0);
}

TEST(MetricsTest, EmptyInputs) {
  const TokenSeq empty;
  const TokenSeq x = T("a b");
  EXPECT_EQ(RougeN(empty, empty, 1), 0.0);
  EXPECT_EQ(RougeN(x, empty, 1), 0.0);
  EXPECT_EQ(RougeL(empty, x), 0.0);
  EXPECT_EQ(Bleu12(empty, x), 0.0);
  EXPECT_EQ(Meteor(x, empty), 0.0);
  EXPECT_EQ(Jaccard(empty, empty), 1.0);
  EXPECT_EQ(Jaccard(x, empty), 0.0);
  EXPECT_EQ(OverlapMin(empty, x), 0.0);
  EXPECT_EQ(EmbeddingF1({}, {}), 1.0);
  EXPECT_EQ(EmbeddingF1({{1.0, 0.0}}, {}), 0.0);
}

TEST(MetricsTest, AgreeWithOraclesOnRandomPairs) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 300; ++i) {
    const Tokens a = RandomTokens(rng, 8, 12);
    const Tokens b = RandomTokens(rng, 8, 12);
    const TokenSeq ta(a), tb(b);
    for (int n : {1, 2}) EXPECT_NEAR(RougeN(ta, tb, n), OracleRougeN(a, b, n), 1e-9);
    EXPECT_NEAR(RougeL(ta, tb), OracleRougeL(a, b), 1e-9);
    EXPECT_NEAR(Bleu12(ta, tb), OracleBleu12(a, b), 1e-9);
    EXPECT_NEAR(Meteor(ta, tb), OracleMeteor(a, b), 1e-9);
    EXPECT_NEAR(Jaccard(ta, tb), OracleJaccard(a, b), 1e-9);
    EXPECT_NEAR(OverlapMax(ta, tb), OracleOverlapMax(a, b), 1e-9);
    EXPECT_NEAR(OverlapMin(ta, tb), OracleOverlapMin(a, b), 1e-9);
  }
}

TEST(MetricsTest, BoundedAndSymmetric) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 2000; ++i) {
    const TokenSeq a(RandomTokens(rng, 6, 10)), b(RandomTokens(rng, 6, 10));
    for (double v : {RougeN(a, b, 1), RougeN(a, b, 2), RougeL(a, b), Bleu12(a, b),
                     Meteor(a, b), Jaccard(a, b), OverlapMax(a, b), OverlapMin(a, b)}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0 + 1e-12);
    }
    EXPECT_DOUBLE_EQ(RougeN(a, b, 1), RougeN(b, a, 1));
    EXPECT_DOUBLE_EQ(RougeL(a, b), RougeL(b, a));
    EXPECT_DOUBLE_EQ(Jaccard(a, b), Jaccard(b, a));
    EXPECT_LE(Jaccard(a, b), OverlapMax(a, b) + 1e-12);
    EXPECT_LE(OverlapMax(a, b), OverlapMin(a, b) + 1e-12);
  }
}

TEST(MetricsTest, EmbeddingF1MatchesOracle) {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> g;
  auto random_rows = [&](int n) {
    TokenEmbeddings rows(n, Vector(4));
    for (auto& row : rows) for (double& x : row) x = g(rng);
    return rows;
  };
  for (int i = 0; i < 100; ++i) {
    const auto a = random_rows(1 + static_cast<int>(rng() % 6));
    const auto b = random_rows(1 + static_cast<int>(rng() % 6));
    EXPECT_NEAR(EmbeddingF1(a, b), OracleEmbeddingF1(a, b), 1e-9);
  }
  const auto a = random_rows(3);
  EXPECT_NEAR(EmbeddingF1(a, a), 1.0, 1e-12);
}

TEST(MetricsTest, TokenizationIgnoresCaseAndPunctuation) {
  const auto scores = CellScores("Die Frist, lief ab.", "die frist lief AB", std::nullopt);
  EXPECT_EQ(scores.at(AgreementMetric::kRouge1), 1.0);
  EXPECT_EQ(scores.at(AgreementMetric::kJaccard), 1.0);
  EXPECT_EQ(scores.count(AgreementMetric::kEmbedding), 0u);
}

TEST(MetricsTest, DisplayNamesFollowTableRows) {
  std::vector<std::string> names;
  for (AgreementMetric m : kAgreementMetrics) names.emplace_back(DisplayName(m));
  EXPECT_EQ(names, (std::vector<std::string>{
                       "Rouge-1", "Rouge-2", "Rouge-L", "BLEU", "METEOR",
                       "Jaccard Sim.", "Overlap Max.", "Overlap Min.", "BERTScore"}));
}

Span S(int64_t start, int64_t end, SpanLabel label) {
  return Span{.label = label, .start = start, .end = end};
}

Case Annotated(const std::string& annotator, const std::string& id,
               const std::string& facts, std::vector<Span> spans) {
  Case c;
  c.case_id = id;
  c.annotator = annotator;
  c.facts = facts;
  c.spans = std::move(spans);
  ValidateCase(c);
  return c;
}

TEST(PairwiseAgreementTest, MacroAveragesOverCaseLabelCells) {
  const std::string facts = "alpha beta gamma delta";
  std::vector<Case> cases = {
      Annotated("a1", "c1", facts, {S(0, 5, SpanLabel::kSupports), S(6, 10, SpanLabel::kOpposes)}),
      Annotated("a2", "c1", facts, {S(0, 10, SpanLabel::kSupports)}),
      Annotated("a1", "c2", facts, {S(11, 16, SpanLabel::kLowerCourt)}),
      Annotated("a2", "c2", facts, {S(11, 16, SpanLabel::kLowerCourt), S(17, 22, SpanLabel::kNeutral)}),
      Annotated("a1", "c3", facts, {}),
  };
  const auto report = PairwiseAgreement(GroupAnnotations(cases));
  ASSERT_EQ(report.pairs.size(), 1u);
  const PairAgreement& p = report.pairs[0];
  EXPECT_EQ(p.annotator_a, "a1");
  EXPECT_EQ(p.num_cases, 2);
  // c1 supports, c1 opposes, c2 lower_court. Neutral is not compared.
  EXPECT_EQ(p.num_cells, 3);
  const double expected = (2.0 / 3.0 + 0.0 + 1.0) / 3.0;
  EXPECT_NEAR(p.scores.at(AgreementMetric::kRouge1), expected, 1e-12);
  EXPECT_EQ(report.embedding_note, "no embedding backend configured");
  EXPECT_EQ(p.scores.count(AgreementMetric::kEmbedding), 0u);
  EXPECT_EQ(report.Find("a2", "a1"), &p);
}

TEST(PairwiseAgreementTest, ErrorsOnMissingAnnotatorsOrOverlap) {
  std::vector<Case> one = {Annotated("a1", "c1", "x", {})};
  try {
    PairwiseAgreement(GroupAnnotations(one));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingAnnotator);
  }
  std::vector<Case> disjoint = {Annotated("a1", "c1", "x", {}),
                                Annotated("a2", "c2", "x", {})};
  try {
    PairwiseAgreement(GroupAnnotations(disjoint));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoCommonCases);
  }
  Case anonymous;
  anonymous.case_id = "c";
  std::vector<Case> unnamed = {anonymous};
  EXPECT_THROW(GroupAnnotations(unnamed), Error);
}

class TableEmbedder : public TokenEmbedder {
 public:
  std::vector<TokenEmbeddings> Embed(std::span<const std::string> texts) override {
    std::vector<TokenEmbeddings> out;
    for (const auto& t : texts) {
      TokenEmbeddings rows;
      const TokenSeq seq = TokenSeq::FromText(t);
      for (const auto& token : seq.tokens()) {
        rows.push_back({static_cast<double>(token.size()), 1.0});
      }
      out.push_back(rows);
    }
    return out;
  }
};

TEST(PairwiseAgreementTest, UsesEmbedderWhenGiven) {
  AnnotationSet set;
  set["a"]["c"][SpanLabel::kSupports] = {"same words"};
  set["b"]["c"][SpanLabel::kSupports] = {"same words"};
  set["c"]["c"][SpanLabel::kSupports] = {"other text"};
  TableEmbedder embedder;
  const auto report = PairwiseAgreement(set, &embedder);
  ASSERT_EQ(report.pairs.size(), 3u);
  EXPECT_FALSE(report.embedding_note.has_value());
  EXPECT_NEAR(report.Find("a", "b")->scores.at(AgreementMetric::kEmbedding), 1.0, 1e-12);
  EXPECT_EQ(report.pairs[0].annotator_a, "a");
  EXPECT_EQ(report.pairs[0].annotator_b, "b");
  EXPECT_EQ(report.pairs[2].annotator_a, "b");
}

TEST(PairwiseAgreementTest, SerializationRoundTrips) {
  AnnotationSet set;
  set["a"]["c"][SpanLabel::kOpposes] = {"x y z"};
  set["b"]["c"][SpanLabel::kOpposes] = {"x y"};
  const auto report = PairwiseAgreement(set);
  const auto parsed = ParseAgreement(SerializeAgreement(report));
  ASSERT_EQ(parsed.pairs.size(), 1u);
  EXPECT_EQ(parsed.pairs[0].scores, report.pairs[0].scores);
  EXPECT_EQ(parsed.embedding_note, report.embedding_note);
  EXPECT_EQ(parsed.aggregation, report.aggregation);
}

}  // namespace
}  // namespace perturbaudit
