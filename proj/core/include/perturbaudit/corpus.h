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

#ifndef PERTURBAUDIT_CORPUS_H_
#define PERTURBAUDIT_CORPUS_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "perturbaudit/types.h"

namespace perturbaudit {

// A labeled region of the facts text. Offsets are code-point indices into
// Case::facts, end exclusive.
struct Span {
  std::string text;
  SpanLabel label = SpanLabel::kNeutral;
  int64_t start = 0;
  int64_t end = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

// One court decision. Spans are sorted by start and do not overlap; the
// characters between spans ("gaps") belong to no span and are never occluded.
struct Case {
  std::string case_id;
  Language language = Language::kDe;
  int year = 0;
  std::string legal_area;
  Judgment judgment = Judgment::kDismissal;
  std::string facts;
  std::vector<Span> spans;
  // Present only in per-annotator annotation files.
  std::optional<std::string> annotator;

  friend bool operator==(const Case&, const Case&) = default;
};

// Sorts spans, fills in span texts from the facts and checks every Case
// invariant. Throws OffsetMismatch or OverlappingSpans.
void ValidateCase(Case& c);

// Reads canonical JSONL: one case per line, blank lines ignored. Cases are
// unique by (annotator, case_id). Throws MalformedLine, OverlappingSpans,
// OffsetMismatch, DuplicateId.
std::vector<Case> ParseCorpus(std::istream& in);
std::vector<Case> ParseCorpus(std::string_view jsonl);

std::string SerializeCase(const Case& c);
void WriteCorpus(std::ostream& out, std::span<const Case> cases);

// Facts rebuilt from span texts and the untouched gaps between them.
std::string ReconstructFacts(const Case& c);

// Lower-court names per language, canonicalized and sorted lexicographically.
class CourtRegistry {
 public:
  CourtRegistry() = default;
  explicit CourtRegistry(std::map<Language, std::vector<std::string>> courts);

  // Empty when the language is not covered.
  const std::vector<std::string>& Courts(Language language) const;
  bool Covers(Language language) const;
  size_t size(Language language) const { return Courts(language).size(); }
  const std::map<Language, std::vector<std::string>>& all() const {
    return courts_;
  }

  friend bool operator==(const CourtRegistry&, const CourtRegistry&) = default;

 private:
  std::map<Language, std::vector<std::string>> courts_;
};

std::string CanonicalCourtName(std::string_view raw);

// Throws NoLowerCourts(language) for a language present in the corpus without
// any lower_court span, and InvalidArgument for an empty corpus.
CourtRegistry BuildCourtRegistry(std::span<const Case> corpus);

std::string SerializeRegistry(const CourtRegistry& registry);
CourtRegistry ParseRegistry(std::string_view json);

}  // namespace perturbaudit

#endif  // PERTURBAUDIT_CORPUS_H_
