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
#include "foldvote/error.hpp"
#include "foldvote/metrics.hpp"
#include "oracles.hpp"

using namespace foldvote;

namespace {

LabelMap to_map(const std::vector<int>& labels) {
  LabelMap out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out.emplace("id" + std::to_string(1000 + i),
                labels[i] ? Label::kHateful : Label::kNotHateful);
  }
  return out;
}

}  // namespace

TEST_CASE("compute_metrics on a hand-worked confusion matrix") {
  // tp=3 fp=1 fn=2 tn=4: P=0.75, R=0.6, F1=2/3, Acc=0.7.
  const ConfusionMatrix cm{3, 1, 2, 4};
  const auto m = compute_metrics(cm);
  CHECK(m.precision == doctest::Approx(0.75));
  CHECK(m.recall == doctest::Approx(0.6));
  CHECK(m.f1 == doctest::Approx(2.0 / 3.0));
  CHECK(m.accuracy == doctest::Approx(0.7));
}

TEST_CASE("zero denominators report zero") {
  const auto none = compute_metrics(ConfusionMatrix{0, 0, 0, 5});
  CHECK(none.precision == 0.0);
  CHECK(none.recall == 0.0);
  CHECK(none.f1 == 0.0);
  CHECK(none.accuracy == 1.0);
  CHECK(harmonic_f1(0.0, 0.0) == 0.0);
}

TEST_CASE("all-positive predictor on the full-size prior") {
  // 1191 positives in 10828: P = Acc = prior, R = 1.
  const ConfusionMatrix cm{1191, 10828 - 1191, 0, 0};
  const auto m = compute_metrics(cm);
  CHECK(m.recall == 1.0);
  CHECK(m.precision == doctest::Approx(1191.0 / 10828.0));
  CHECK(m.accuracy == doctest::Approx(0.110).epsilon(0.01));
  CHECK(m.f1 == doctest::Approx(0.198).epsilon(0.01));
}

TEST_CASE("swap_positive_class mirrors the matrix") {
  const ConfusionMatrix cm{1, 2, 3, 4};
  CHECK(swap_positive_class(cm) == ConfusionMatrix{4, 3, 2, 1});
  CHECK(compute_metrics(swap_positive_class(cm)).accuracy ==
        compute_metrics(cm).accuracy);
}

TEST_CASE("confusion validates id sets") {
  const auto gold = to_map({1, 0, 1});
  auto pred = gold;
  pred.erase(pred.begin());
  pred.emplace("other", Label::kHateful);
  try {
    confusion(gold, pred);
    FAIL("expected IdSetMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIdSetMismatch);
    CHECK(e.details().size() == 2);
  }
  CHECK_THROWS_AS(confusion(LabelMap{}, LabelMap{}), Error);
}

TEST_CASE("metrics match the oracle on random label vectors") {
  oracle::Gen gen(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = gen.range(1, 60);
    std::vector<int> g(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = gen.coin(0.3);
      p[i] = gen.coin(0.4);
    }
    const auto m = compute_metrics(confusion(to_map(g), to_map(p)));
    const auto o = oracle::scores(oracle::count(g, p));
    CHECK(m.precision == doctest::Approx(o.precision));
    CHECK(m.recall == doctest::Approx(o.recall));
    CHECK(m.f1 == doctest::Approx(o.f1));
    CHECK(m.accuracy == doctest::Approx(o.accuracy));
  }
}

TEST_CASE("pooled and fold-averaged aggregation") {
  const std::vector<ConfusionMatrix> folds = {{9, 1, 1, 9}, {1, 4, 4, 11}};
  const auto pooled = pooled_metrics(folds);
  CHECK(pooled == compute_metrics(ConfusionMatrix{10, 5, 5, 20}));
  std::vector<MetricsReport> reports;
  for (const auto& cm : folds) reports.push_back(compute_metrics(cm));
  const auto avg = fold_averaged_metrics(reports);
  CHECK(avg.f1 == doctest::Approx((0.9 + 0.2) / 2));
  CHECK(avg.precision == doctest::Approx((0.9 + 0.2) / 2));
  // Mean per-fold F1 never exceeds F1 of the mean precision and recall.
  CHECK(avg.f1 <= harmonic_f1(avg.precision, avg.recall) + 1e-12);
}

TEST_CASE("fold-averaged F1 never exceeds harmonic F1 of averaged P and R") {
  oracle::Gen gen(9);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<MetricsReport> reports;
    const auto k = gen.range(2, 8);
    for (std::size_t f = 0; f < k; ++f) {
      ConfusionMatrix cm{gen.range(0, 30), gen.range(0, 30), gen.range(0, 30),
                         gen.range(0, 30)};
      reports.push_back(compute_metrics(cm));
    }
    const auto avg = fold_averaged_metrics(reports);
    CHECK(avg.f1 <= harmonic_f1(avg.precision, avg.recall) + 1e-12);
  }
}

TEST_CASE("aggregation names parse") {
  CHECK(parse_aggregation("pooled") == Aggregation::kPooled);
  CHECK(parse_aggregation("fold-averaged") == Aggregation::kFoldAveraged);
  CHECK_FALSE(parse_aggregation("mean").has_value());
  CHECK(to_string(Aggregation::kFoldAveraged) == "fold-averaged");
}
