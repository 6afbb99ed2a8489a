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

#include "foldvote/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "foldvote/error.hpp"

namespace foldvote::text {
namespace {

bool is_arabic_diacritic(UChar32 c) {
  return (c >= 0x0610 && c <= 0x061A) || (c >= 0x064B && c <= 0x065F) ||
         c == 0x0670 || (c >= 0x06D6 && c <= 0x06ED);
}

constexpr UChar32 kTatweel = 0x0640;
constexpr UChar32 kBareAlef = 0x0627;

bool is_alef_variant(UChar32 c) {
  return c == 0x0622 || c == 0x0623 || c == 0x0625;
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_handle_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_';
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char c = s[i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != prefix[i]) return false;
  }
  return true;
}

std::string fold_code_points(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  const auto source = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  const icu::UnicodeString composed = nfc->normalize(source, status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::kInternal,
                std::string("NFC normalization failed: ") + u_errorName(status));
  }
  icu::UnicodeString folded;
  for (int32_t i = 0; i < composed.length();) {
    UChar32 c = composed.char32At(i);
    i += U16_LENGTH(c);
    if (is_arabic_diacritic(c) || c == kTatweel) continue;
    if (is_alef_variant(c)) c = kBareAlef;
    folded.append(c);
  }
  std::string out;
  folded.toUTF8String(out);
  return out;
}

}  // namespace

std::string normalize_text(std::string_view utf8) {
  const std::string s = fold_code_points(utf8);
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  auto emit = [&](std::string_view piece) {
    if (pending_space) out += ' ';
    pending_space = false;
    out += piece;
  };
  std::size_t i = 0;
  while (i < s.size()) {
    const std::string_view rest(s.data() + i, s.size() - i);
    if (is_space(s[i])) {
      pending_space = !out.empty();
      ++i;
    } else if (starts_with_ci(rest, "http://") ||
               starts_with_ci(rest, "https://") ||
               starts_with_ci(rest, "www.")) {
      while (i < s.size() && !is_space(s[i])) ++i;
      emit("<url>");
    } else if (s[i] == '@' && i + 1 < s.size() && is_handle_char(s[i + 1])) {
      ++i;
      while (i < s.size() && is_handle_char(s[i])) ++i;
      emit("<user>");
    } else {
      emit(std::string_view(&s[i], 1));
      ++i;
    }
  }
  return out;
}

std::vector<std::size_t> code_point_offsets(std::string_view utf8) {
  std::vector<std::size_t> offsets;
  offsets.reserve(utf8.size() + 1);
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(utf8.data());
  const auto length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < length) {
    offsets.push_back(static_cast<std::size_t>(i));
    U8_FWD_1(bytes, i, length);
  }
  offsets.push_back(utf8.size());
  return offsets;
}

std::vector<std::string_view> char_ngrams(std::string_view utf8, int n_min,
                                          int n_max) {
  std::vector<std::string_view> grams;
  if (n_min < 1 || n_max < n_min) return grams;
  const auto offsets = code_point_offsets(utf8);
  const std::size_t m = offsets.size() - 1;
  for (int n = n_min; n <= n_max; ++n) {
    const auto width = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i + width <= m; ++i) {
      grams.push_back(utf8.substr(offsets[i], offsets[i + width] - offsets[i]));
    }
  }
  return grams;
}

}  // namespace foldvote::text
