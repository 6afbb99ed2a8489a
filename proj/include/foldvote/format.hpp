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

#ifndef FOLDVOTE_FORMAT_HPP_
#define FOLDVOTE_FORMAT_HPP_

#include <string>

namespace foldvote {

// Shortest decimal that round-trips to the same double.
std::string format_shortest(double value);

// Fixed-point display rounding, half away from zero, applied to the
// shortest round-trip decimal so that 0.615 displays as 0.62.
std::string format_half_up(double value, int decimals);

}  // namespace foldvote

#endif  // FOLDVOTE_FORMAT_HPP_
