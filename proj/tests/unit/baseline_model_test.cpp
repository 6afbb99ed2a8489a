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

#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "foldvote/baseline_model.hpp"
#include "foldvote/error.hpp"
#include "oracles.hpp"

using namespace foldvote;
using namespace foldvote::baseline;

namespace {

struct Instance {
  std::vector<double> w;
  double b = 0;
  std::vector<SparseVector> xs;
  std::vector<std::vector<double>> dense;
  std::vector<double> ys;
  double l2 = 0;
};

Instance random_instance(oracle::Gen& gen) {
  Instance in;
  const std::size_t d = gen.range(1, 12);
  const std::size_t n = gen.range(1, 10);
  for (std::size_t j = 0; j < d; ++j) in.w.push_back(gen.unit() * 2 - 1);
  in.b = gen.unit() - 0.5;
  in.l2 = gen.coin(0.5) ? gen.unit() * 0.1 : 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    SparseVector x;
    std::vector<double> row(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
      if (gen.coin(0.5)) {
        const double v = static_cast<double>(gen.range(1, 3));
        x.push_back({static_cast<std::uint32_t>(j), v});
        row[j] = v;
      }
    }
    in.xs.push_back(x);
    in.dense.push_back(row);
    in.ys.push_back(gen.coin(0.4) ? 1.0 : 0.0);
  }
  return in;
}

Corpus toy_corpus() {
  std::vector<LabeledExample> rows;
  const char* hateful[] = {"you are vile scum", "vile scum everywhere",
                           "scum and vile people", "hate vile scum"};
  const char* neutral[] = {"the weather is nice", "we went to school",
                           "nice people at school", "the sun and the sea",
                           "school is open today", "the sea is calm"};
  int i = 0;
  for (const char* t : hateful) {
    rows.push_back({"h" + std::to_string(i++), t, Label::kHateful});
  }
  for (const char* t : neutral) {
    rows.push_back({"n" + std::to_string(i++), t, Label::kNotHateful});
  }
  return Corpus("toy", rows);
}

}  // namespace

TEST_CASE("objective matches the dense oracle") {
  oracle::Gen gen(100);
  for (int trial = 0; trial < 50; ++trial) {
    const auto in = random_instance(gen);
    CHECK(objective(in.w, in.b, in.xs, in.ys, in.l2) ==
          doctest::Approx(oracle::logistic_objective(in.w, in.b, in.dense,
                                                     in.ys, in.l2)));
  }
}

TEST_CASE("analytic gradient matches central differences") {
  oracle::Gen gen(101);
  const double h = 1e-6;
  for (int trial = 0; trial < 50; ++trial) {
    const auto in = random_instance(gen);
    std::vector<double> gw(in.w.size());
    double gb = 0;
    objective_gradient(in.w, in.b, in.xs, in.ys, in.l2, gw, gb);

    std::vector<double> analytic = gw, numeric;
    analytic.push_back(gb);
    for (std::size_t j = 0; j < in.w.size(); ++j) {
      auto plus = in.w, minus = in.w;
      plus[j] += h;
      minus[j] -= h;
      numeric.push_back((oracle::logistic_objective(plus, in.b, in.dense, in.ys, in.l2) -
                         oracle::logistic_objective(minus, in.b, in.dense, in.ys, in.l2)) /
                        (2 * h));
    }
    numeric.push_back(
        (oracle::logistic_objective(in.w, in.b + h, in.dense, in.ys, in.l2) -
         oracle::logistic_objective(in.w, in.b - h, in.dense, in.ys, in.l2)) /
        (2 * h));
    CHECK(oracle::relative_error(analytic, numeric) < 1e-4);
  }
}

TEST_CASE("sigmoid is stable at the extremes") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(1000.0) == 1.0);
  CHECK(sigmoid(-1000.0) == 0.0);
  CHECK(std::isfinite(sigmoid(-745.0)));
}

TEST_CASE("feature space orders by frequency then bytes") {
  const std::vector<std::string> texts = {"abab", "ab"};
  FeatureOptions opts;
  opts.ngram_min = 2;
  opts.ngram_max = 2;
  const auto space = FeatureSpace::build(texts, opts);
  REQUIRE(space.size() == 2);
  CHECK(space.vocabulary()[0] == "ab");
  CHECK(space.vocabulary()[1] == "ba");
  const auto x = space.featurize("abab");
  REQUIRE(x.size() == 2);
  CHECK(x[0] == SparseEntry{0, 2.0});
  CHECK(x[1] == SparseEntry{1, 1.0});
  opts.max_features = 1;
  CHECK(FeatureSpace::build(texts, opts).size() == 1);
}

TEST_CASE("training separates a toy corpus and lowers the loss") {
  const auto corpus = toy_corpus();
  TrainConfig cfg;
  cfg.epochs = 30;
  cfg.learning_rate = 0.5;
  cfg.batch_size = 2;
  cfg.seed = 3;
  const auto model = train(corpus, FeatureOptions{}, cfg);
  const BaselineModel untrained(model.feature_space(), cfg);
  CHECK(training_loss(model, corpus) < training_loss(untrained, corpus));
  CHECK(model.predict_scores("vile scum").hateful > 0.5);
  CHECK(model.predict_scores("nice school").hateful < 0.5);
  const auto s = model.predict_scores("anything");
  CHECK(s.hateful + s.not_hateful == doctest::Approx(1.0));
}

TEST_CASE("snapshots equal separate training runs") {
  const auto corpus = toy_corpus();
  TrainConfig cfg;
  cfg.seed = 17;
  cfg.batch_size = 3;
  const std::vector<int> grid = {1, 2, 4};
  const auto snaps = train_snapshots(corpus, FeatureOptions{}, cfg, grid);
  REQUIRE(snaps.size() == 3);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    cfg.epochs = grid[i];
    const auto direct = train(corpus, FeatureOptions{}, cfg);
    CHECK(std::vector<double>(direct.weights().begin(), direct.weights().end()) ==
          std::vector<double>(snaps[i].weights().begin(), snaps[i].weights().end()));
    CHECK(direct.bias() == snaps[i].bias());
  }
}

TEST_CASE("model JSON round trip preserves predictions") {
  const auto corpus = toy_corpus();
  TrainConfig cfg;
  cfg.epochs = 3;
  const auto model = train(corpus, FeatureOptions{}, cfg);
  const auto back = BaselineModel::from_json(model.to_json());
  CHECK(back.predict_scores("vile sea") == model.predict_scores("vile sea"));
  CHECK(back.to_json() == model.to_json());
  CHECK_THROWS_AS(BaselineModel::from_json("{\"format_version\": 99}"), Error);
}

TEST_CASE("single-class corpora are rejected") {
  const Corpus one("one", {{"a", "x", Label::kHateful}, {"b", "y", Label::kHateful}});
  try {
    train(one, FeatureOptions{}, TrainConfig{});
    FAIL("expected SingleClassCorpus");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSingleClassCorpus);
  }
}

TEST_CASE("invalid configurations are rejected") {
  TrainConfig cfg;
  cfg.learning_rate = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  FeatureOptions f;
  f.ngram_min = 3;
  f.ngram_max = 2;
  CHECK_THROWS_AS(f.validate(), Error);
}
