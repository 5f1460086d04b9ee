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

#ifndef PERTURBAUDIT_TEXT_H_
#define PERTURBAUDIT_TEXT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace perturbaudit {

// Span offsets everywhere in the toolkit are Unicode scalar-value indices.
// These helpers convert between UTF-8 storage and code-point sequences.
namespace utf8 {

// Throws Error(kInvalidUtf8) on malformed input or surrogate code points.
std::u32string Decode(std::string_view text);
std::string Encode(std::u32string_view text);
void Append(std::string& out, char32_t cp);
size_t Length(std::string_view text);

}  // namespace utf8

bool IsWhitespace(char32_t cp);

// Simple case folding covering ASCII, Latin-1, Latin Extended-A, basic Greek
// and Cyrillic. Enough for de/fr/it legal text.
char32_t ToLower(char32_t cp);
std::string ToLower(std::string_view text);

// Collapses internal whitespace runs to a single ASCII space and trims ends.
std::string CollapseWhitespace(std::string_view text);

// Lowercased whitespace-separated tokens. Punctuation stays attached.
std::vector<std::string> WhitespaceTokens(std::string_view text);

// Lowercased word tokens: maximal runs of letters, digits and '_'.
// Normalization is idempotent: Tokenize(Join(Tokenize(x))) == Tokenize(x).
class TokenSeq {
 public:
  TokenSeq() = default;
  explicit TokenSeq(std::vector<std::string> tokens);

  static TokenSeq FromText(std::string_view text);

  const std::vector<std::string>& tokens() const { return tokens_; }
  size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const std::string& operator[](size_t i) const { return tokens_[i]; }
  std::string Join() const;

  friend bool operator==(const TokenSeq&, const TokenSeq&) = default;

 private:
  std::vector<std::string> tokens_;
};

bool IsWordChar(char32_t cp);

// 64-bit FNV-1a. Stable across platforms, used for seeds and config hashes.
uint64_t Fingerprint(std::string_view bytes);

}  // namespace perturbaudit

#endif  // PERTURBAUDIT_TEXT_H_
