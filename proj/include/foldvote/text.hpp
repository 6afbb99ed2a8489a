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

#ifndef FOLDVOTE_TEXT_HPP_
#define FOLDVOTE_TEXT_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace foldvote::text {

// Cleanup applied before featurization:
//   1. Unicode NFC
//   2. drop Arabic diacritics (U+0610-061A, U+064B-065F, U+0670, U+06D6-06ED)
//      and tatweel (U+0640)
//   3. fold alef variants U+0622, U+0623, U+0625 to U+0627
//   4. replace URLs (http://, https://, www.) with "<url>" and @mentions
//      with "<user>"
//   5. collapse ASCII whitespace runs to one space and trim
// Invalid UTF-8 sequences become U+FFFD.
std::string normalize_text(std::string_view utf8);

// Byte offsets of each code-point boundary, including the end offset.
std::vector<std::size_t> code_point_offsets(std::string_view utf8);

// Every contiguous run of n code points, for n in [n_min, n_max], as UTF-8
// substrings (overlapping, with repeats). No boundary padding is added.
std::vector<std::string_view> char_ngrams(std::string_view utf8, int n_min,
                                          int n_max);

}  // namespace foldvote::text

#endif  // FOLDVOTE_TEXT_HPP_
