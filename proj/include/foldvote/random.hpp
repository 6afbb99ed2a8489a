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

#ifndef FOLDVOTE_RANDOM_HPP_
#define FOLDVOTE_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace foldvote {

using Seed = std::uint64_t;

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

// Subordinate seeds are a pure function of (master, tag):
//   splitmix64(master ^ splitmix64(fnv1a64(tag)))
// so any schedule that asks for the same tag gets the same stream.
Seed derive_seed(Seed master, std::string_view tag) noexcept;

inline constexpr std::string_view kSeedDerivation =
    "derive_seed(master, tag) = splitmix64(master ^ splitmix64(fnv1a64(tag))); "
    "streams are std::mt19937_64 seeded with the derived value; bounded draws "
    "use rejection sampling; shuffles are Fisher-Yates from the last index";

// mt19937_64 output is fixed by the standard; the distributions in <random>
// are not, so bounded draws and shuffles are done here.
class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  // Uniform in [0, 1) with 53 random bits.
  double uniform();

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace foldvote

#endif  // FOLDVOTE_RANDOM_HPP_
