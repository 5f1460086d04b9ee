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

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"
#include "perturbaudit/error.h"

namespace perturbaudit {
namespace {

using NgramCounts = std::map<std::string, int64_t>;

NgramCounts Ngrams(const TokenSeq& seq, int n) {
  NgramCounts counts;
  if (n <= 0 || seq.size() < static_cast<size_t>(n)) return counts;
  for (size_t i = 0; i + n <= seq.size(); ++i) {
    std::string key = seq[i];
    for (int k = 1; k < n; ++k) {
      key.push_back('\x1f');
      key += seq[i + k];
    }
    ++counts[key];
  }
  return counts;
}

int64_t Total(const NgramCounts& counts) {
  int64_t total = 0;
  for (const auto& [gram, count] : counts) total += count;
  return total;
}

int64_t ClippedOverlap(const NgramCounts& a, const NgramCounts& b) {
  int64_t overlap = 0;
  for (const auto& [gram, count] : a) {
    auto it = b.find(gram);
    if (it != b.end()) overlap += std::min(count, it->second);
  }
  return overlap;
}

double F1(double precision, double recall) {
  if (precision + recall <= 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

std::set<std::string> UniqueTokens(const TokenSeq& seq) {
  return {seq.tokens().begin(), seq.tokens().end()};
}

struct SetSizes {
  size_t a = 0;
  size_t b = 0;
  size_t common = 0;
};

SetSizes Sizes(const TokenSeq& a, const TokenSeq& b) {
  const auto sa = UniqueTokens(a);
  const auto sb = UniqueTokens(b);
  SetSizes sizes{sa.size(), sb.size(), 0};
  for (const auto& t : sa) sizes.common += sb.count(t);
  return sizes;
}

double Cosine(const Vector& u, const Vector& v) {
  const size_t n = std::min(u.size(), v.size());
  double dot = 0.0;
  double nu = 0.0;
  double nv = 0.0;
  for (size_t i = 0; i < n; ++i) dot += u[i] * v[i];
  for (double x : u) nu += x * x;
  for (double x : v) nv += x * x;
  if (nu <= 0.0 || nv <= 0.0) return 0.0;
  return dot / (std::sqrt(nu) * std::sqrt(nv));
}

std::string JoinSpans(const std::vector<std::string>* spans) {
  std::string out;
  if (spans == nullptr) return out;
  for (const auto& s : *spans) {
    if (!out.empty()) out.push_back(' ');
    out += s;
  }
  return out;
}

const std::vector<std::string>* Lookup(
    const std::map<SpanLabel, std::vector<std::string>>& labels,
    SpanLabel label) {
  auto it = labels.find(label);
  return it == labels.end() ? nullptr : &it->second;
}

}  // namespace

double RougeN(const TokenSeq& a, const TokenSeq& b, int n) {
  if (!a.empty() && a == b) return 1.0;
  const NgramCounts ga = Ngrams(a, n);
  const NgramCounts gb = Ngrams(b, n);
  const int64_t total_a = Total(ga);
  const int64_t total_b = Total(gb);
  if (total_a == 0 || total_b == 0) return 0.0;
  const double overlap = static_cast<double>(ClippedOverlap(ga, gb));
  return F1(overlap / total_b, overlap / total_a);
}

double RougeL(const TokenSeq& a, const TokenSeq& b) {
  if (a.empty() || b.empty()) return 0.0;
  std::vector<int64_t> prev(b.size() + 1, 0);
  std::vector<int64_t> curr(b.size() + 1, 0);
  for (size_t i = 1; i <= a.size(); ++i) {
    for (size_t j = 1; j <= b.size(); ++j) {
      curr[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                     : std::max(prev[j], curr[j - 1]);
    }
    std::swap(prev, curr);
  }
  const double lcs = static_cast<double>(prev[b.size()]);
  return F1(lcs / static_cast<double>(b.size()),
            lcs / static_cast<double>(a.size()));
}

double Bleu12(const TokenSeq& candidate, const TokenSeq& reference) {
  if (candidate.empty()) return 0.0;
  constexpr double kSmoothing = 1e-9;
  const int orders = std::min<int>(2, static_cast<int>(candidate.size()));
  double log_sum = 0.0;
  for (int n = 1; n <= orders; ++n) {
    const NgramCounts gc = Ngrams(candidate, n);
    const NgramCounts gr = Ngrams(reference, n);
    const int64_t matches = ClippedOverlap(gc, gr);
    const double numerator = matches == 0 ? kSmoothing : matches;
    log_sum += std::log(numerator / static_cast<double>(Total(gc)));
  }
  const double c = static_cast<double>(candidate.size());
  const double r = static_cast<double>(reference.size());
  const double brevity = c > r ? 1.0 : std::exp(1.0 - r / c);
  return brevity * std::exp(log_sum / orders);
}

double Meteor(const TokenSeq& candidate, const TokenSeq& reference) {
  std::vector<bool> used(reference.size(), false);
  int64_t matches = 0;
  int64_t chunks = 0;
  long prev_c = -2;
  long prev_r = -2;
  for (size_t i = 0; i < candidate.size(); ++i) {
    for (size_t j = 0; j < reference.size(); ++j) {
      if (used[j] || reference[j] != candidate[i]) continue;
      used[j] = true;
      ++matches;
      const long ci = static_cast<long>(i);
      const long rj = static_cast<long>(j);
      if (ci != prev_c + 1 || rj != prev_r + 1) ++chunks;
      prev_c = ci;
      prev_r = rj;
      break;
    }
  }
  if (matches == 0) return 0.0;
  const double m = static_cast<double>(matches);
  const double precision = m / static_cast<double>(candidate.size());
  const double recall = m / static_cast<double>(reference.size());
  const double f_mean =
      10.0 * precision * recall / (recall + 9.0 * precision);
  const double fragmentation = static_cast<double>(chunks) / m;
  const double penalty = 0.5 * fragmentation * fragmentation * fragmentation;
  return f_mean * (1.0 - penalty);
}

double Jaccard(const TokenSeq& a, const TokenSeq& b) {
  const SetSizes s = Sizes(a, b);
  if (s.a == 0 && s.b == 0) return 1.0;
  if (s.a == 0 || s.b == 0) return 0.0;
  return static_cast<double>(s.common) / static_cast<double>(s.a + s.b - s.common);
}

double OverlapMax(const TokenSeq& a, const TokenSeq& b) {
  const SetSizes s = Sizes(a, b);
  if (s.a == 0 && s.b == 0) return 1.0;
  if (s.a == 0 || s.b == 0) return 0.0;
  return static_cast<double>(s.common) / static_cast<double>(std::max(s.a, s.b));
}

double OverlapMin(const TokenSeq& a, const TokenSeq& b) {
  const SetSizes s = Sizes(a, b);
  if (s.a == 0 && s.b == 0) return 1.0;
  if (s.a == 0 || s.b == 0) return 0.0;
  return static_cast<double>(s.common) / static_cast<double>(std::min(s.a, s.b));
}

double EmbeddingF1(const TokenEmbeddings& a, const TokenEmbeddings& b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  std::vector<double> best_a(a.size(), -1.0);
  std::vector<double> best_b(b.size(), -1.0);
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) {
      const double cos = Cosine(a[i], b[j]);
      best_a[i] = std::max(best_a[i], cos);
      best_b[j] = std::max(best_b[j], cos);
    }
  }
  double recall = 0.0;
  double precision = 0.0;
  for (double x : best_a) recall += x;
  for (double x : best_b) precision += x;
  recall /= static_cast<double>(a.size());
  precision /= static_cast<double>(b.size());
  if (precision + recall == 0.0) return 0.0;
  return std::clamp(2.0 * precision * recall / (precision + recall), 0.0, 1.0);
}

double EmbedScore(std::string_view a, std::string_view b,
                  TokenEmbedder& embedder) {
  const std::vector<std::string> texts = {std::string(a), std::string(b)};
  const auto embeddings = embedder.Embed(texts);
  if (embeddings.size() != 2) {
    throw Error(ErrorCode::kProtocolError, "embedder returned wrong count");
  }
  return EmbeddingF1(embeddings[0], embeddings[1]);
}

std::string_view ToString(AgreementMetric metric) {
  switch (metric) {
    case AgreementMetric::kRouge1: return "rouge1";
    case AgreementMetric::kRouge2: return "rouge2";
    case AgreementMetric::kRougeL: return "rougeL";
    case AgreementMetric::kBleu: return "bleu";
    case AgreementMetric::kMeteor: return "meteor";
    case AgreementMetric::kJaccard: return "jaccard";
    case AgreementMetric::kOverlapMax: return "overlap_max";
    case AgreementMetric::kOverlapMin: return "overlap_min";
    case AgreementMetric::kEmbedding: return "embedding";
  }
  return "";
}

std::string_view DisplayName(AgreementMetric metric) {
  switch (metric) {
    case AgreementMetric::kRouge1: return "Rouge-1";
    case AgreementMetric::kRouge2: return "Rouge-2";
    case AgreementMetric::kRougeL: return "Rouge-L";
    case AgreementMetric::kBleu: return "BLEU";
    case AgreementMetric::kMeteor: return "METEOR";
    case AgreementMetric::kJaccard: return "Jaccard Sim.";
    case AgreementMetric::kOverlapMax: return "Overlap Max.";
    case AgreementMetric::kOverlapMin: return "Overlap Min.";
    case AgreementMetric::kEmbedding: return "BERTScore";
  }
  return "";
}

std::map<AgreementMetric, double> CellScores(
    std::string_view text_a, std::string_view text_b,
    const std::optional<std::pair<TokenEmbeddings, TokenEmbeddings>>&
        embeddings) {
  const TokenSeq a = TokenSeq::FromText(text_a);
  const TokenSeq b = TokenSeq::FromText(text_b);
  std::map<AgreementMetric, double> scores;
  scores[AgreementMetric::kRouge1] = RougeN(a, b, 1);
  scores[AgreementMetric::kRouge2] = RougeN(a, b, 2);
  scores[AgreementMetric::kRougeL] = RougeL(a, b);
  scores[AgreementMetric::kBleu] = 0.5 * (Bleu12(a, b) + Bleu12(b, a));
  scores[AgreementMetric::kMeteor] = 0.5 * (Meteor(a, b) + Meteor(b, a));
  scores[AgreementMetric::kJaccard] = Jaccard(a, b);
  scores[AgreementMetric::kOverlapMax] = OverlapMax(a, b);
  scores[AgreementMetric::kOverlapMin] = OverlapMin(a, b);
  if (embeddings) {
    scores[AgreementMetric::kEmbedding] =
        EmbeddingF1(embeddings->first, embeddings->second);
  }
  return scores;
}

AnnotationSet GroupAnnotations(std::span<const Case> cases) {
  AnnotationSet set;
  for (const Case& c : cases) {
    if (!c.annotator) {
      throw Error(ErrorCode::kMissingAnnotator,
                  c.case_id + ": case has no 'annotator' field");
    }
    auto& labels = set[*c.annotator][c.case_id];
    for (const Span& span : c.spans) labels[span.label].push_back(span.text);
  }
  return set;
}

const PairAgreement* AgreementReport::Find(std::string_view a,
                                           std::string_view b) const {
  for (const auto& pair : pairs) {
    if ((pair.annotator_a == a && pair.annotator_b == b) ||
        (pair.annotator_a == b && pair.annotator_b == a)) {
      return &pair;
    }
  }
  return nullptr;
}

AgreementReport PairwiseAgreement(const AnnotationSet& annotations,
                                  TokenEmbedder* embedder) {
  if (annotations.size() < 2) {
    throw Error(ErrorCode::kMissingAnnotator,
                "need at least two annotators, got " +
                    std::to_string(annotations.size()));
  }
  AgreementReport report;
  if (embedder == nullptr) {
    report.embedding_note = "no embedding backend configured";
  }
  for (auto first = annotations.begin(); first != annotations.end(); ++first) {
    for (auto second = std::next(first); second != annotations.end();
         ++second) {
      PairAgreement pair;
      pair.annotator_a = first->first;
      pair.annotator_b = second->first;
      std::vector<std::pair<std::string, std::string>> cells;
      for (const auto& [case_id, labels_a] : first->second) {
        auto other = second->second.find(case_id);
        if (other == second->second.end()) continue;
        ++pair.num_cases;
        for (SpanLabel label : kAgreementLabels) {
          std::string text_a = JoinSpans(Lookup(labels_a, label));
          std::string text_b = JoinSpans(Lookup(other->second, label));
          if (text_a.empty() && text_b.empty()) continue;
          cells.emplace_back(std::move(text_a), std::move(text_b));
        }
      }
      if (pair.num_cases == 0) {
        throw Error(ErrorCode::kNoCommonCases,
                    pair.annotator_a + " / " + pair.annotator_b);
      }
      pair.num_cells = static_cast<int64_t>(cells.size());

      std::vector<TokenEmbeddings> vectors;
      if (embedder != nullptr && !cells.empty()) {
        std::vector<std::string> texts;
        texts.reserve(2 * cells.size());
        for (const auto& [a, b] : cells) {
          texts.push_back(a);
          texts.push_back(b);
        }
        try {
          vectors = embedder->Embed(texts);
          if (vectors.size() != texts.size()) {
            throw Error(ErrorCode::kProtocolError,
                        "embedder returned wrong count");
          }
        } catch (const Error& e) {
          if (e.category() != ErrorCategory::kBackend) throw;
          vectors.clear();
          report.embedding_note = std::string(
              ErrorCodeName(ErrorCode::kEmbeddingBackendUnavailable)) +
              ": " + e.what();
        }
      }

      std::map<AgreementMetric, double> sums;
      for (size_t i = 0; i < cells.size(); ++i) {
        std::optional<std::pair<TokenEmbeddings, TokenEmbeddings>> emb;
        if (!vectors.empty()) emb.emplace(vectors[2 * i], vectors[2 * i + 1]);
        for (const auto& [metric, value] :
             CellScores(cells[i].first, cells[i].second, emb)) {
          sums[metric] += value;
        }
      }
      for (const auto& [metric, sum] : sums) {
        pair.scores[metric] = sum / static_cast<double>(cells.size());
      }
      report.pairs.push_back(std::move(pair));
    }
  }
  return report;
}

std::string SerializeAgreement(const AgreementReport& report) {
  nlohmann::ordered_json obj;
  obj["aggregation"] = report.aggregation;
  if (report.embedding_note) obj["embedding_note"] = *report.embedding_note;
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (const auto& pair : report.pairs) {
    nlohmann::ordered_json p;
    p["annotator_a"] = pair.annotator_a;
    p["annotator_b"] = pair.annotator_b;
    p["num_cases"] = pair.num_cases;
    p["num_cells"] = pair.num_cells;
    nlohmann::ordered_json scores = nlohmann::ordered_json::object();
    for (AgreementMetric metric : kAgreementMetrics) {
      auto it = pair.scores.find(metric);
      if (it != pair.scores.end()) scores[std::string(ToString(metric))] = it->second;
    }
    p["scores"] = std::move(scores);
    pairs.push_back(std::move(p));
  }
  obj["pairs"] = std::move(pairs);
  return obj.dump(2) + "\n";
}

AgreementReport ParseAgreement(std::string_view text) {
  AgreementReport report;
  try {
    const auto obj = nlohmann::json::parse(text);
    report.aggregation = obj.value("aggregation", report.aggregation);
    if (obj.contains("embedding_note")) {
      report.embedding_note = obj["embedding_note"].get<std::string>();
    }
    for (const auto& p : obj.at("pairs")) {
      PairAgreement pair;
      pair.annotator_a = p.at("annotator_a").get<std::string>();
      pair.annotator_b = p.at("annotator_b").get<std::string>();
      pair.num_cases = p.at("num_cases").get<int64_t>();
      pair.num_cells = p.at("num_cells").get<int64_t>();
      for (AgreementMetric metric : kAgreementMetrics) {
        const std::string key(ToString(metric));
        if (p.at("scores").contains(key)) {
          pair.scores[metric] = p["scores"][key].get<double>();
        }
      }
      report.pairs.push_back(std::move(pair));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch,
                std::string("agreement report: ") + e.what());
  }
  return report;
}

}  // namespace perturbaudit
