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

#include "perturbaudit/types.h"

namespace perturbaudit {

std::string_view ToString(Language language) {
  switch (language) {
    case Language::kDe: return "de";
    case Language::kFr: return "fr";
    case Language::kIt: return "it";
  }
  return "";
}

std::string_view LanguageName(Language language) {
  switch (language) {
    case Language::kDe: return "German";
    case Language::kFr: return "French";
    case Language::kIt: return "Italian";
  }
  return "";
}

std::optional<Language> ParseLanguage(std::string_view text) {
  if (text == "de") return Language::kDe;
  if (text == "fr") return Language::kFr;
  if (text == "it") return Language::kIt;
  return std::nullopt;
}

std::string_view ToString(SpanLabel label) {
  switch (label) {
    case SpanLabel::kSupports: return "supports";
    case SpanLabel::kOpposes: return "opposes";
    case SpanLabel::kNeutral: return "neutral";
    case SpanLabel::kLowerCourt: return "lower_court";
  }
  return "";
}

std::optional<SpanLabel> ParseSpanLabel(std::string_view text) {
  if (text == "supports") return SpanLabel::kSupports;
  if (text == "opposes") return SpanLabel::kOpposes;
  if (text == "neutral") return SpanLabel::kNeutral;
  if (text == "lower_court") return SpanLabel::kLowerCourt;
  return std::nullopt;
}

std::string_view ToString(Rationale label) {
  switch (label) {
    case Rationale::kOpposes: return "opposes";
    case Rationale::kNeutral: return "neutral";
    case Rationale::kSupports: return "supports";
  }
  return "";
}

std::string_view DisplayName(Rationale label) {
  switch (label) {
    case Rationale::kOpposes: return "Opposes";
    case Rationale::kNeutral: return "Neutral";
    case Rationale::kSupports: return "Supports";
  }
  return "";
}

std::optional<Rationale> ParseRationale(std::string_view text) {
  if (text == "opposes") return Rationale::kOpposes;
  if (text == "neutral") return Rationale::kNeutral;
  if (text == "supports") return Rationale::kSupports;
  return std::nullopt;
}

std::optional<Rationale> ToRationale(SpanLabel label) {
  switch (label) {
    case SpanLabel::kSupports: return Rationale::kSupports;
    case SpanLabel::kOpposes: return Rationale::kOpposes;
    case SpanLabel::kNeutral: return Rationale::kNeutral;
    case SpanLabel::kLowerCourt: return std::nullopt;
  }
  return std::nullopt;
}

SpanLabel ToSpanLabel(Rationale label) {
  switch (label) {
    case Rationale::kOpposes: return SpanLabel::kOpposes;
    case Rationale::kNeutral: return SpanLabel::kNeutral;
    case Rationale::kSupports: return SpanLabel::kSupports;
  }
  return SpanLabel::kNeutral;
}

std::string_view ToString(Judgment judgment) {
  return judgment == Judgment::kApproval ? "approval" : "dismissal";
}

std::optional<Judgment> ParseJudgment(std::string_view text) {
  if (text == "dismissal" || text == "0") return Judgment::kDismissal;
  if (text == "approval" || text == "1") return Judgment::kApproval;
  return std::nullopt;
}

}  // namespace perturbaudit
