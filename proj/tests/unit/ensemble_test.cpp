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

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "foldvote/ensemble.hpp"
#include "foldvote/error.hpp"
#include "oracles.hpp"

using namespace foldvote;

namespace {

std::string id_of(std::size_t i) { return "e" + std::to_string(10000 + i); }

// m members over n ids with strictly positive random scores.
std::vector<PredictionSet> random_members(oracle::Gen& gen, std::size_t m,
                                          std::size_t n) {
  std::vector<PredictionSet> members(m);
  for (std::size_t j = 0; j < m; ++j) {
    members[j].model_name = "m" + std::to_string(j);
    for (std::size_t i = 0; i < n; ++i) {
      const double a = gen.unit() + 1e-3;
      const double b = gen.unit() + 1e-3;
      members[j].scores.emplace(id_of(i), ScoreVector{a, b});
    }
  }
  return members;
}

}  // namespace

TEST_CASE("hard_label and normalize") {
  CHECK(hard_label({0.3, 0.7}) == Label::kHateful);
  CHECK(hard_label({0.7, 0.3}) == Label::kNotHateful);
  CHECK(hard_label({0.5, 0.5}) == Label::kHateful);
  const auto n = normalize({1.0, 3.0});
  CHECK(n.not_hateful == doctest::Approx(0.25));
  CHECK(n.hateful == doctest::Approx(0.75));
  CHECK_THROWS_AS(normalize({0.0, 0.0}), Error);
  CHECK_THROWS_AS(normalize({-1.0, 2.0}), Error);
}

TEST_CASE("majority vote agrees with the mode oracle") {
  oracle::Gen gen(31);
  for (std::size_t m : {1, 3, 5, 7}) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto members = random_members(gen, m, 40);
      const auto input = EnsembleInput::create(members);
      const auto out = majority_vote(input, TiePolicy{});
      CHECK(out.tie_count == 0);
      for (std::size_t i = 0; i < 40; ++i) {
        std::vector<int> votes;
        for (const auto& mem : members) {
          const auto& sv = mem.scores.at(id_of(i));
          votes.push_back(oracle::argmax(sv.not_hateful, sv.hateful));
        }
        CHECK(static_cast<int>(out.labels.at(id_of(i))) ==
              oracle::mode_label(votes));
      }
    }
  }
}

TEST_CASE("highest sum agrees with the sum oracle in both scales") {
  oracle::Gen gen(32);
  for (bool normalized : {true, false}) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto m = gen.range(1, 7);
      const auto members = random_members(gen, m, 30);
      const auto labels =
          highest_sum(EnsembleInput::create(members),
                      normalized ? ScoreScale::kNormalized : ScoreScale::kRaw);
      for (std::size_t i = 0; i < 30; ++i) {
        std::vector<std::pair<double, double>> s;
        for (const auto& mem : members) {
          const auto& sv = mem.scores.at(id_of(i));
          s.emplace_back(sv.not_hateful, sv.hateful);
        }
        CHECK(static_cast<int>(labels.at(id_of(i))) ==
              oracle::sum_argmax(s, normalized));
      }
    }
  }
}

TEST_CASE("ties count and follow the policy") {
  std::vector<PredictionSet> members(2);
  members[0] = {"a", {{"x", {0.9, 0.1}}, {"y", {0.2, 0.8}}}};
  members[1] = {"b", {{"x", {0.1, 0.9}}, {"y", {0.3, 0.7}}}};
  const auto input = EnsembleInput::create(members);
  const auto fixed =
      majority_vote(input, TiePolicy{TieKind::kFixedPositive, 0});
  CHECK(fixed.tie_count == 1);
  CHECK(fixed.labels.at("x") == Label::kHateful);
  CHECK(fixed.labels.at("y") == Label::kHateful);
  const auto r1 = majority_vote(input, TiePolicy{TieKind::kSeededRandom, 5});
  const auto r2 = majority_vote(input, TiePolicy{TieKind::kSeededRandom, 5});
  CHECK(r1.labels == r2.labels);
}

TEST_CASE("seeded tie rule is fair and reproducible") {
  std::size_t hateful = 0;
  for (std::size_t i = 0; i < 10000; ++i) {
    hateful += resolve_tie(TiePolicy{TieKind::kSeededRandom, 99}, id_of(i)) ==
               Label::kHateful;
  }
  const double rate = static_cast<double>(hateful) / 10000.0;
  CHECK(rate > 0.45);
  CHECK(rate < 0.55);
}

TEST_CASE("EnsembleInput rejects mismatched id sets") {
  std::vector<PredictionSet> members(2);
  members[0] = {"a", {{"x", {0.9, 0.1}}, {"y", {0.2, 0.8}}}};
  members[1] = {"b", {{"x", {0.1, 0.9}}, {"z", {0.3, 0.7}}}};
  try {
    EnsembleInput::create(members);
    FAIL("expected IdSetMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIdSetMismatch);
    CHECK(e.details() == std::vector<std::string>{"y", "z"});
  }
  members[1].model_name = "a";
  members[1].scores = members[0].scores;
  CHECK_THROWS_AS(EnsembleInput::create(members), Error);
  CHECK_THROWS_AS(EnsembleInput::create({}), Error);
}

TEST_CASE("prediction files round-trip and validate") {
  PredictionSet p{"m", {{"a", {0.25, 0.75}}, {"b", {1.0 / 3.0, 2.0 / 3.0}}}};
  std::ostringstream out;
  write_prediction_set(p, out);
  std::istringstream in(out.str());
  const auto back = read_prediction_set(in, "m");
  CHECK(back.scores == p.scores);

  auto code_of = [](const std::string& body) {
    std::istringstream s(body);
    try {
      read_prediction_set(s, "m");
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInternal;
  };
  const std::string header = "id\tscore_not_hateful\tscore_hateful\n";
  CHECK(code_of(header + "a\t-0.1\t1.1\n") == ErrorCode::kDegenerateScores);
  CHECK(code_of(header + "a\tnan\t1\n") == ErrorCode::kDegenerateScores);
  CHECK(code_of(header + "a\tx\t1\n") == ErrorCode::kMalformedRow);
  CHECK(code_of(header + "a\t0.5\t0.5\na\t0.5\t0.5\n") == ErrorCode::kDuplicateId);
  CHECK(code_of("id\tscore\n") == ErrorCode::kMalformedRow);
}

TEST_CASE("model names derive from prediction file names") {
  CHECK(model_name_from_path("runs/best/AraBERT.pred.tsv") == "AraBERT");
  CHECK(model_name_from_path("x/other.tsv") == "other");
}
