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

#include "foldvote/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace foldvote {

std::string format_shortest(double value) {
  std::array<char, 64> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), result.ptr);
}

std::string format_half_up(double value, int decimals) {
  if (!std::isfinite(value)) return format_shortest(value);
  std::array<char, 512> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(),
                                    std::fabs(value), std::chars_format::fixed);
  const std::string digits(buf.data(), result.ptr);

  const auto dot = digits.find('.');
  std::string int_part = digits.substr(0, dot);
  std::string frac_part =
      dot == std::string::npos ? std::string() : digits.substr(dot + 1);

  bool round_up = false;
  if (frac_part.size() > static_cast<std::size_t>(decimals)) {
    round_up = frac_part[static_cast<std::size_t>(decimals)] >= '5';
    frac_part.resize(static_cast<std::size_t>(decimals));
  } else {
    frac_part.append(static_cast<std::size_t>(decimals) - frac_part.size(), '0');
  }

  std::string joined = int_part + frac_part;
  if (round_up) {
    std::size_t i = joined.size();
    while (i > 0) {
      --i;
      if (joined[i] == '9') {
        joined[i] = '0';
      } else {
        ++joined[i];
        break;
      }
      if (i == 0) joined.insert(joined.begin(), '1');
    }
  }
  const std::size_t int_len = joined.size() - frac_part.size();
  std::string out = joined.substr(0, int_len);
  if (decimals > 0) out += "." + joined.substr(int_len);

  const bool is_zero = out.find_first_not_of("0.") == std::string::npos;
  if (std::signbit(value) && !is_zero) out.insert(out.begin(), '-');
  return out;
}

}  // namespace foldvote
