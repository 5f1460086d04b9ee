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

#ifndef PERTURBAUDIT_AGREEMENT_H_
#define PERTURBAUDIT_AGREEMENT_H_

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "perturbaudit/corpus.h"
#include "perturbaudit/embedding.h"
#include "perturbaudit/text.h"

namespace perturbaudit {

// Overlap metrics between two token sequences. All return values in [0, 1].

// F1 over clipped n-gram multiset overlap. 0 if either side has no n-grams,
// except that two identical sequences always score 1.
double RougeN(const TokenSeq& a, const TokenSeq& b, int n);

// LCS-based F1 with P = LCS/|b|, R = LCS/|a|.
double RougeL(const TokenSeq& a, const TokenSeq& b);

// Brevity penalty times the geometric mean of clipped 1- and 2-gram
// precisions, zero counts smoothed to 1e-9. Orders longer than the candidate
// are left out of the mean. Empty candidate scores 0.
double Bleu12(const TokenSeq& candidate, const TokenSeq& reference);

// Exact-match METEOR: unigrams aligned left to right (each candidate token to
// the first unused identical reference token), F_mean = 10PR/(R+9P),
// penalty = 0.5 (chunks/matches)^3. 0 when nothing matches.
double Meteor(const TokenSeq& candidate, const TokenSeq& reference);

// Set overlap on unique tokens. Both empty: 1. Exactly one empty: 0.
double Jaccard(const TokenSeq& a, const TokenSeq& b);
double OverlapMax(const TokenSeq& a, const TokenSeq& b);
double OverlapMin(const TokenSeq& a, const TokenSeq& b);

// Greedy max-cosine matching between token vectors: R averages over `a`,
// P over `b`, F1 = 2PR/(P+R). No idf weighting. Both empty: 1, one empty: 0.
double EmbeddingF1(const TokenEmbeddings& a, const TokenEmbeddings& b);
// Throws the embedder's backend error when it is unreachable.
double EmbedScore(std::string_view a, std::string_view b,
                  TokenEmbedder& embedder);

enum class AgreementMetric {
  kRouge1,
  kRouge2,
  kRougeL,
  kBleu,
  kMeteor,
  kJaccard,
  kOverlapMax,
  kOverlapMin,
  kEmbedding,
};
inline constexpr std::array<AgreementMetric, 9> kAgreementMetrics = {
    AgreementMetric::kRouge1,     AgreementMetric::kRouge2,
    AgreementMetric::kRougeL,     AgreementMetric::kBleu,
    AgreementMetric::kMeteor,     AgreementMetric::kJaccard,
    AgreementMetric::kOverlapMax, AgreementMetric::kOverlapMin,
    AgreementMetric::kEmbedding};

std::string_view ToString(AgreementMetric metric);     // "rouge1", ...
std::string_view DisplayName(AgreementMetric metric);  // "Rouge-1", ...

// Scores for one (case, label) cell. BLEU and METEOR are averaged over both
// directions. The embedding score is absent without an embedder.
std::map<AgreementMetric, double> CellScores(
    std::string_view text_a, std::string_view text_b,
    const std::optional<std::pair<TokenEmbeddings, TokenEmbeddings>>&
        embeddings);

// annotator -> case_id -> label -> span texts.
using AnnotationSet =
    std::map<std::string,
             std::map<std::string, std::map<SpanLabel, std::vector<std::string>>>>;

// Groups per-annotator cases (Case::annotator set) into an AnnotationSet.
// Cases without an annotator throw MissingAnnotator.
AnnotationSet GroupAnnotations(std::span<const Case> cases);

// Labels compared for agreement. Neutral is excluded.
inline constexpr std::array<SpanLabel, 3> kAgreementLabels = {
    SpanLabel::kSupports, SpanLabel::kOpposes, SpanLabel::kLowerCourt};

struct PairAgreement {
  std::string annotator_a;
  std::string annotator_b;
  int64_t num_cases = 0;
  // (case, label) cells where at least one annotator marked a span.
  int64_t num_cells = 0;
  // Unweighted mean over cells. The embedding metric is absent when the
  // embedding backend is unavailable.
  std::map<AgreementMetric, double> scores;
};

struct AgreementReport {
  std::vector<PairAgreement> pairs;  // lexicographic annotator pairs
  std::string aggregation = "case-label macro average";
  std::optional<std::string> embedding_note;

  const PairAgreement* Find(std::string_view a, std::string_view b) const;
};

// For every annotator pair: concatenate each annotator's span texts per case
// and label, score every cell and macro-average over cells. Throws
// MissingAnnotator (fewer than two annotators) and NoCommonCases.
AgreementReport PairwiseAgreement(const AnnotationSet& annotations,
                                  TokenEmbedder* embedder = nullptr);

std::string SerializeAgreement(const AgreementReport& report);
AgreementReport ParseAgreement(std::string_view json);

}  // namespace perturbaudit

#endif  // PERTURBAUDIT_AGREEMENT_H_
