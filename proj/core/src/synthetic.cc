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

#include "perturbaudit/synthetic.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <random>
#include <limits>

#include "perturbaudit/error.h"
#include "perturbaudit/text.h"

namespace perturbaudit {
namespace {

constexpr std::array<const char*, 26> kCantons = {
    "Zürich",       "Bern",        "Luzern",       "Uri",
    "Schwyz",       "Obwalden",    "Nidwalden",    "Glarus",
    "Zug",          "Fribourg",    "Solothurn",    "Basel-Stadt",
    "Basel-Landschaft", "Schaffhausen", "Appenzell Ausserrhoden",
    "Appenzell Innerrhoden", "St. Gallen", "Graubünden", "Aargau",
    "Thurgau",      "Ticino",      "Vaud",         "Valais",
    "Neuchâtel",    "Genève",      "Jura"};

constexpr std::array<const char*, 4> kLegalAreas = {
    "public law", "civil law", "penal law", "social law"};

struct LanguageText {
  const char* court_prefix;
  const char* facts_prefix;
  std::array<const char*, 6> phrases;
};

const LanguageText& TextFor(Language language) {
  static const LanguageText kDe = {
      "Obergericht des Kantons",
      "Vorinstanz:",
      {"Der Beschwerdeführer machte geltend", "Die Vorinstanz stellte fest",
       "Gemäss den Akten ergibt sich", "Es ist unbestritten",
       "Die Parteien einigten sich", "Das Gutachten hält fest"}};
  static const LanguageText kFr = {
      "Tribunal cantonal du canton de",
      "Autorité précédente:",
      {"Le recourant a fait valoir", "L'autorité précédente a constaté",
       "Selon le dossier il appert", "Il est établi",
       "Les parties ont convenu", "L'expertise relève"}};
  static const LanguageText kIt = {
      "Tribunale d'appello del Cantone",
      "Autorità inferiore:",
      {"Il ricorrente ha sostenuto", "L'autorità inferiore ha accertato",
       "Dagli atti risulta", "È pacifico", "Le parti hanno convenuto",
       "La perizia rileva"}};
  switch (language) {
    case Language::kDe: return kDe;
    case Language::kFr: return kFr;
    case Language::kIt: return kIt;
  }
  return kDe;
}

double Sigmoid(double x) {
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

double PredictedConfidence(double approval_logit, bool approval) {
  return approval ? Sigmoid(approval_logit) : Sigmoid(-approval_logit);
}

double MinEffect(double logit, std::span<const double> weights, int k_max) {
  const bool approval = logit > 0;
  const double base = PredictedConfidence(logit, approval);
  const int n = static_cast<int>(weights.size());
  double best = std::numeric_limits<double>::infinity();
  for (uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (std::popcount(mask) > k_max) continue;
    double removed = 0.0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) removed += weights[i];
    }
    best = std::min(best, std::abs(base - PredictedConfidence(logit - removed, approval)));
  }
  return best;
}

struct Draft {
  Case c;
  // Marker tokens of each span, parallel to c.spans.
  std::vector<std::vector<std::string>> markers;
  int court = -1;
};

std::string CourtName(Language language, int index) {
  return std::string(TextFor(language).court_prefix) + " " + kCantons[index];
}

std::string CourtToken(int index) {
  const auto tokens = WhitespaceTokens(kCantons[index]);
  return tokens.back();
}

Draft MakeDraft(const std::string& case_id, Language language, int court,
                const SyntheticOptions& options, std::mt19937_64& rng) {
  auto uniform_int = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  const LanguageText& text = TextFor(language);
  Draft d;
  d.court = court;
  d.c.case_id = case_id;
  d.c.language = language;
  d.c.year = uniform_int(2015, 2020);
  d.c.legal_area = kLegalAreas[uniform_int(0, kLegalAreas.size() - 1)];
  d.c.judgment = uniform_int(0, 1) ? Judgment::kApproval : Judgment::kDismissal;

  std::vector<SpanLabel> labels;
  labels.insert(labels.end(), uniform_int(1, std::max(1, options.max_supports)),
                SpanLabel::kSupports);
  labels.insert(labels.end(), uniform_int(0, std::max(0, options.max_opposes)),
                SpanLabel::kOpposes);
  labels.insert(labels.end(), uniform_int(1, std::max(1, options.max_neutral)),
                SpanLabel::kNeutral);
  std::shuffle(labels.begin(), labels.end(), rng);

  std::u32string facts;
  auto add_span = [&](const std::string& s, SpanLabel label,
                      std::vector<std::string> markers) {
    const std::u32string cps = utf8::Decode(s);
    const int64_t start = static_cast<int64_t>(facts.size());
    facts += cps;
    d.c.spans.push_back(
        Span{s, label, start, static_cast<int64_t>(facts.size())});
    d.markers.push_back(std::move(markers));
  };

  if (court >= 0) {
    facts += utf8::Decode(text.facts_prefix);
    facts += U' ';
    add_span(CourtName(language, court), SpanLabel::kLowerCourt, {});
    facts += U'\n';
  }
  for (size_t i = 0; i < labels.size(); ++i) {
    if (i > 0) facts += uniform_int(0, 9) == 0 ? U'\n' : U' ';
    std::string s = text.phrases[uniform_int(0, text.phrases.size() - 1)];
    std::vector<std::string> markers;
    if (labels[i] != SpanLabel::kNeutral) {
      const int count = uniform_int(1, 2);
      for (int j = 0; j < count; ++j) {
        markers.push_back("ref" + case_id + "s" + std::to_string(i) +
                          static_cast<char>('a' + j));
        s += " " + markers.back();
      }
    }
    // Weights are keyed by whitespace token, punctuation included.
    s += ".";
    if (!markers.empty()) markers.back() += ".";
    add_span(s, labels[i], std::move(markers));
  }
  d.c.facts = utf8::Encode(facts);
  ValidateCase(d.c);
  return d;
}

}  // namespace

std::vector<std::string> SyntheticCourts(Language language, int count) {
  if (count < 0 || count > static_cast<int>(kCantons.size())) {
    throw Error(ErrorCode::kInvalidArgument,
                "courts per language must be in [0, 26]");
  }
  std::vector<std::string> courts;
  for (int i = 0; i < count; ++i) courts.push_back(CourtName(language, i));
  return courts;
}

double MinOcclusionEffect(const Case& c, const ReferenceClassifier& classifier,
                          int k_max) {
  const double logit = classifier.ApprovalLogit(c.facts);
  double best = std::numeric_limits<double>::infinity();
  for (SpanLabel label : {SpanLabel::kSupports, SpanLabel::kOpposes}) {
    std::vector<double> weights;
    for (const Span& s : c.spans) {
      if (s.label == label) {
        weights.push_back(classifier.ApprovalLogit(s.text) - classifier.bias());
      }
    }
    if (weights.size() > 20) {
      throw Error(ErrorCode::kInvalidArgument, "too many spans per label");
    }
    if (!weights.empty()) best = std::min(best, MinEffect(logit, weights, k_max));
  }
  return best;
}

SyntheticCorpus GenerateSyntheticCorpus(const SyntheticOptions& options) {
  if (options.num_cases < 0 || options.num_validation_cases < 0 ||
      options.languages.empty() || options.k_max < 1) {
    throw Error(ErrorCode::kInvalidArgument, "invalid synthetic options");
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> magnitude(0.3, 0.9);
  std::uniform_real_distribution<double> court_weight(-0.2, 0.2);

  const int courts = options.courts_per_language;
  SyntheticCourts(Language::kDe, courts);  // range check
  std::map<std::string, double> weights;
  std::vector<double> court_weights(courts);
  for (int i = 0; i < courts; ++i) {
    court_weights[i] = court_weight(rng);
    weights[CourtToken(i)] = court_weights[i];
  }

  SyntheticCorpus out;
  std::map<Language, int> per_language;
  const int total = options.num_cases + options.num_validation_cases;
  for (int n = 0; n < total; ++n) {
    const bool validation = n >= options.num_cases;
    const std::string case_id =
        validation ? "val" + std::to_string(n - options.num_cases)
                   : "syn" + std::to_string(n);
    const Language language = options.languages[n % options.languages.size()];
    const int court = courts > 0 ? per_language[language]++ % courts : -1;

    bool accepted = false;
    for (int layout = 0; layout < 20 && !accepted; ++layout) {
      Draft d = MakeDraft(case_id, language, court, options, rng);
      const double sign = d.c.judgment == Judgment::kApproval ? 1.0 : -1.0;
      for (int trial = 0; trial < 100 && !accepted; ++trial) {
        double logit = court >= 0 ? court_weights[court] : 0.0;
        std::map<SpanLabel, std::vector<double>> span_weights;
        std::vector<double> assigned(d.c.spans.size(), 0.0);
        for (size_t i = 0; i < d.c.spans.size(); ++i) {
          const SpanLabel label = d.c.spans[i].label;
          if (label != SpanLabel::kSupports && label != SpanLabel::kOpposes) {
            continue;
          }
          const double w = (label == SpanLabel::kSupports ? sign : -sign) *
                           magnitude(rng);
          assigned[i] = w;
          logit += w;
          span_weights[label].push_back(w);
        }
        double effect = std::numeric_limits<double>::infinity();
        for (const auto& [label, ws] : span_weights) {
          effect = std::min(effect, MinEffect(logit, ws, options.k_max));
        }
        if (effect < options.min_effect) continue;
        for (size_t i = 0; i < d.c.spans.size(); ++i) {
          const auto& markers = d.markers[i];
          for (const std::string& m : markers) {
            weights[ToLower(m)] = assigned[i] / markers.size();
          }
        }
        (validation ? out.validation : out.cases).push_back(std::move(d.c));
        accepted = true;
      }
    }
    if (!accepted) {
      throw Error(ErrorCode::kInvalidArgument,
                  "could not reach the requested occlusion margin for " +
                      case_id);
    }
  }
  out.classifier = ReferenceClassifier(std::move(weights), 0.0);
  return out;
}

std::vector<Case> SimulateAnnotators(std::span<const Case> cases,
                                     int num_annotators, double noise,
                                     uint64_t seed) {
  if (num_annotators < 1 || !(noise >= 0.0 && noise <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid annotator simulation");
  }
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution flip(noise);
  std::vector<Case> out;
  for (int a = 0; a < num_annotators; ++a) {
    for (const Case& original : cases) {
      Case c = original;
      c.annotator = "annotator" + std::to_string(a + 1);
      for (Span& s : c.spans) {
        if (s.label == SpanLabel::kLowerCourt) continue;
        if (flip(rng)) {
          std::vector<SpanLabel> others;
          for (SpanLabel l : {SpanLabel::kSupports, SpanLabel::kOpposes,
                              SpanLabel::kNeutral}) {
            if (l != s.label) others.push_back(l);
          }
          s.label = others[std::uniform_int_distribution<size_t>(
              0, others.size() - 1)(rng)];
        }
        if (flip(rng)) {
          const std::u32string cps = utf8::Decode(s.text);
          const auto ws = std::find_if(cps.begin(), cps.end(), IsWhitespace);
          if (ws != cps.end()) {
            s.start += (ws - cps.begin()) + 1;
            s.text.clear();
          }
        }
      }
      ValidateCase(c);
      out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace perturbaudit
