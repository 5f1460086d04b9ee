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

#include "perturbaudit/text.h"

#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "perturbaudit/error.h"

namespace perturbaudit {
namespace {

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kConfig;
}

TEST(Utf8Test, RoundTripsMultiByteText) {
  const std::string text = "Zürich – Genève 日本 🙂";
  const std::u32string cps = utf8::Decode(text);
  EXPECT_EQ(cps.size(), 20u);
  EXPECT_EQ(utf8::Encode(cps), text);
  EXPECT_EQ(utf8::Length(text), 20u);
}

TEST(Utf8Test, RejectsInvalidSequences) {
  for (const std::string& bad :
       {std::string("\xC3"), std::string("\xC0\xAF"), std::string("\xED\xA0\x80"),
        std::string("\x80"), std::string("a\xF0\x9F\x99"),
        std::string("\xF8\x88\x80\x80\x80")}) {
    EXPECT_EQ(CodeOf([&] { utf8::Decode(bad); }), ErrorCode::kInvalidUtf8)
        << "input bytes: " << bad.size();
  }
}

TEST(TextTest, LowercasesBeyondAscii) {
  EXPECT_EQ(ToLower("ÄÖÜ ÉÈÇ Straße ŒUVRE"), "äöü éèç straße œuvre");
}

TEST(TextTest, CollapsesWhitespace) {
  EXPECT_EQ(CollapseWhitespace("  Obergericht \n des\tKantons  "),
            "Obergericht des Kantons");
  EXPECT_EQ(CollapseWhitespace(""), "");
}

TEST(TextTest, WhitespaceTokensKeepPunctuation) {
  const auto tokens = WhitespaceTokens("  Guilty, as CHARGED.\n");
  EXPECT_EQ(tokens, (std::vector<std::string>{"guilty,", "as", "charged."}));
}

TEST(TokenSeqTest, SplitsOnNonWordCharacters) {
  const auto seq = TokenSeq::FromText("L'appel du Tribunal, art. 8 al. 2!");
  EXPECT_EQ(seq.tokens(), (std::vector<std::string>{"l", "appel", "du",
                                                    "tribunal", "art", "8",
                                                    "al", "2"}));
}

TEST(TokenSeqTest, TokenizationIsIdempotent) {
  std::mt19937_64 rng(11);
  const std::u32string alphabet = U"abcÄéß 12_,.;'-\n\tXYZ";
  for (int round = 0; round < 500; ++round) {
    std::u32string s;
    const int len = static_cast<int>(rng() % 40);
    for (int i = 0; i < len; ++i) s.push_back(alphabet[rng() % alphabet.size()]);
    const TokenSeq once = TokenSeq::FromText(utf8::Encode(s));
    EXPECT_EQ(TokenSeq::FromText(once.Join()), once);
  }
}

TEST(FingerprintTest, MatchesPublishedFnv1aVectors) {
  EXPECT_EQ(Fingerprint(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(Fingerprint("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(Fingerprint("foobar"), 0x85944171f73967e8ULL);
}

}  // namespace
}  // namespace perturbaudit
