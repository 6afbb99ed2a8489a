/* Copyright 2026 The foldvote Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <string>
#include <vector>

#include "doctest.h"
#include "foldvote/text.hpp"

using foldvote::text::char_ngrams;
using foldvote::text::code_point_offsets;
using foldvote::text::normalize_text;

TEST_CASE("diacritics and tatweel are removed") {
  // kataba with fatha on each letter, then a tatweel-stretched word.
  CHECK(normalize_text("\u0643\u064E\u062A\u064E\u0628\u064E") ==
        "\u0643\u062A\u0628");
  CHECK(normalize_text("\u0633\u0640\u0640\u0644\u0627\u0645") ==
        "\u0633\u0644\u0627\u0645");
}

TEST_CASE("alef variants fold to bare alef") {
  CHECK(normalize_text("\u0623\u0625\u0622\u0627") ==
        "\u0627\u0627\u0627\u0627");
}

TEST_CASE("NFC composes before folding") {
  // Alef + combining hamza above composes to U+0623, which then folds.
  CHECK(normalize_text("أ") == "ا");
}

TEST_CASE("urls and mentions are masked") {
  CHECK(normalize_text("see https://t.co/abc now") == "see <url> now");
  CHECK(normalize_text("www.example.com") == "<url>");
  CHECK(normalize_text("@user_12 hi") == "<user> hi");
  CHECK(normalize_text("mail a@b") == "mail a<user>");
}

TEST_CASE("whitespace collapses and trims") {
  CHECK(normalize_text("  a \t\n b  ") == "a b");
  CHECK(normalize_text("") == "");
  CHECK(normalize_text("   ") == "");
}

TEST_CASE("normalization is idempotent") {
  const std::vector<std::string> samples = {
      "كَتَب @x https://y.z  أـ",
      "plain ascii", "أٔ"};
  for (const auto& s : samples) {
    const auto once = normalize_text(s);
    CHECK(normalize_text(once) == once);
  }
}

TEST_CASE("n-grams run over code points") {
  const std::string word = "سلام";  // 4 code points
  CHECK(code_point_offsets(word).size() == 5);
  const auto grams = char_ngrams(word, 2, 3);
  REQUIRE(grams.size() == 3 + 2);
  CHECK(grams[0] == "سل");
  CHECK(char_ngrams("ab", 3, 4).empty());
  CHECK(char_ngrams("abc", 1, 1).size() == 3);
}
