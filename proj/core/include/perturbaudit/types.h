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

#ifndef PERTURBAUDIT_TYPES_H_
#define PERTURBAUDIT_TYPES_H_

#include <array>
#include <optional>
#include <string_view>

namespace perturbaudit {

enum class Language { kDe, kFr, kIt };
inline constexpr std::array<Language, 3> kLanguages = {
    Language::kDe, Language::kFr, Language::kIt};

// Annotation label of a span in the facts section. Supports/opposes are
// relative to the actual outcome of the case.
enum class SpanLabel { kSupports, kOpposes, kNeutral, kLowerCourt };

// Explainability label assigned to an occluded instance. Ordered as the
// report columns (opposes, neutral, supports).
enum class Rationale { kOpposes, kNeutral, kSupports };
inline constexpr std::array<Rationale, 3> kRationales = {
    Rationale::kOpposes, Rationale::kNeutral, Rationale::kSupports};

// Binary outcome. The numeric values are the head indices of every backend.
enum class Judgment : int { kDismissal = 0, kApproval = 1 };

std::string_view ToString(Language language);
std::string_view LanguageName(Language language);  // "German", ...
std::optional<Language> ParseLanguage(std::string_view text);

std::string_view ToString(SpanLabel label);
std::optional<SpanLabel> ParseSpanLabel(std::string_view text);

std::string_view ToString(Rationale label);
std::string_view DisplayName(Rationale label);  // "Opposes", ...
std::optional<Rationale> ParseRationale(std::string_view text);

// Occludable labels map onto rationales; lower_court does not.
std::optional<Rationale> ToRationale(SpanLabel label);
SpanLabel ToSpanLabel(Rationale label);

std::string_view ToString(Judgment judgment);
std::optional<Judgment> ParseJudgment(std::string_view text);
inline int ToIndex(Judgment judgment) { return static_cast<int>(judgment); }
inline Judgment Other(Judgment judgment) {
  return judgment == Judgment::kApproval ? Judgment::kDismissal
                                         : Judgment::kApproval;
}

}  // namespace perturbaudit

#endif  // PERTURBAUDIT_TYPES_H_
