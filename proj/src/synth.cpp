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

#include <array>
#include <string>

#include "foldvote/corpus.hpp"
#include "foldvote/error.hpp"

namespace foldvote {
namespace {

constexpr std::array<std::string_view, 40> kNeutralWords = {
    "كورونا",   "اللقاح",  "الصحة",   "المستشفى", "الحجر",   "الفيروس",
    "الوباء",   "الناس",   "اليوم",   "الحكومة",  "الأخبار", "الدواء",
    "الطبيب",   "البيت",   "العمل",   "المدرسة",  "السوق",   "الماء",
    "الوقاية",  "الكمامة", "التباعد", "الإصابات", "الحالات", "الجديدة",
    "العالم",   "نحن",     "هذا",     "في",       "من",      "على",
    "مع",       "كل",      "بعد",     "قبل",      "لا",      "نعم",
    "شكرا",     "خير",     "سلامة",   "أمس"};

constexpr std::array<std::string_view, 12> kHostileWords = {
    "كراهية", "حقد",   "أعداء", "اطردوهم", "خونة", "أوباش",
    "حثالة",  "همج",   "ارحلوا", "لعنة",   "أحقاد", "اكرههم"};

constexpr std::string_view kFatha = "َ";
constexpr std::string_view kTatweel = "ـ";

// Inserts a fatha after the first code point of an Arabic word.
std::string with_diacritic(std::string_view word) {
  if (word.size() < 2) return std::string(word);
  return std::string(word.substr(0, 2)) + std::string(kFatha) +
         std::string(word.substr(2));
}

std::string random_token(Rng& rng, std::size_t length) {
  static constexpr std::string_view kAlnum =
      "abcdefghijklmnopqrstuvwxyz0123456789";
  std::string out;
  for (std::size_t i = 0; i < length; ++i) {
    out += kAlnum[rng.below(kAlnum.size())];
  }
  return out;
}

std::string make_text(Rng& rng, bool hateful) {
  // Class signal: share of hostile words per position. Some positives are
  // subtle and some negatives quote hostile vocabulary, so the task is noisy.
  double hostile_rate = 0.03;
  if (hateful) hostile_rate = rng.uniform() < 0.2 ? 0.05 : 0.35;

  const std::size_t n_words = 5 + rng.below(10);
  std::string text;
  for (std::size_t i = 0; i < n_words; ++i) {
    std::string word;
    if (rng.uniform() < hostile_rate) {
      word = kHostileWords[rng.below(kHostileWords.size())];
    } else {
      word = kNeutralWords[rng.below(kNeutralWords.size())];
    }
    const double decoration = rng.uniform();
    if (decoration < 0.08) {
      word = with_diacritic(word);
    } else if (decoration < 0.10) {
      word += kTatweel;
    }
    if (!text.empty()) text += ' ';
    text += word;
  }
  if (rng.uniform() < 0.10) text += " https://t.co/" + random_token(rng, 8);
  if (rng.uniform() < 0.10) text = "@user_" + random_token(rng, 4) + " " + text;
  return text;
}

}  // namespace

Corpus synthesize_corpus(std::size_t n, std::size_t n_positive, Seed seed,
                         std::string name) {
  if (n_positive > n) {
    throw Error(ErrorCode::kInvalidArgument,
                "positive count exceeds corpus size");
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng(derive_seed(seed, "synth/labels")).shuffle(order);
  std::vector<bool> hateful(n, false);
  for (std::size_t i = 0; i < n_positive; ++i) hateful[order[i]] = true;

  const std::size_t width = std::to_string(n == 0 ? 0 : n - 1).size();
  Rng text_rng(derive_seed(seed, "synth/text"));
  std::vector<LabeledExample> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto digits = std::to_string(i);
    digits.insert(0, width - digits.size(), '0');
    rows.push_back({"t" + digits, make_text(text_rng, hateful[i]),
                    hateful[i] ? Label::kHateful : Label::kNotHateful});
  }
  return Corpus(std::move(name), std::move(rows));
}

}  // namespace foldvote
