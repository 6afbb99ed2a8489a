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

#include <algorithm>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "foldvote/corpus.hpp"
#include "foldvote/error.hpp"
#include "oracles.hpp"

using namespace foldvote;

namespace {

Corpus parse_tsv(const std::string& body) {
  std::istringstream in(body);
  return read_corpus(in, CorpusFormat::kTsv, "t");
}

ErrorCode error_of(const std::string& body, CorpusFormat format) {
  std::istringstream in(body);
  try {
    read_corpus(in, format, "t");
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

// Random corpus with `n` examples and a random positive count.
Corpus random_corpus(oracle::Gen& gen, std::size_t n) {
  std::vector<LabeledExample> rows;
  const double prior = gen.unit();
  for (std::size_t i = 0; i < n; ++i) {
    rows.push_back({"x" + std::to_string(i), "text",
                    gen.coin(prior) ? Label::kHateful : Label::kNotHateful});
  }
  return Corpus("random", std::move(rows));
}

}  // namespace

TEST_CASE("TSV corpus parses labels in either spelling") {
  const auto c = parse_tsv(
      "id\tlabel\ttext\na\t1\tfoo\nb\tnot_hateful\tbar baz\nc\tHATEFUL\t\n");
  REQUIRE(c.size() == 3);
  CHECK(c.examples()[0].label == Label::kHateful);
  CHECK(c.examples()[1].label == Label::kNotHateful);
  CHECK(c.examples()[2].label == Label::kHateful);
  CHECK(c.examples()[2].text.empty());
  CHECK(c.find("b")->text == "bar baz");
  CHECK(c.find("zzz") == nullptr);
  const auto stats = corpus_stats(c);
  CHECK(stats.n == 3);
  CHECK(stats.n_positive == 2);
  CHECK(stats.n_empty_text == 1);
}

TEST_CASE("CRLF line endings are accepted") {
  const auto c = parse_tsv("id\tlabel\ttext\r\na\t0\tfoo\r\n");
  CHECK(c.examples()[0].text == "foo");
}

TEST_CASE("corpus load errors carry their codes") {
  CHECK(error_of("id\tlabel\ttext\na\tmaybe\tfoo\n", CorpusFormat::kTsv) ==
        ErrorCode::kUnknownLabelToken);
  CHECK(error_of("id\tlabel\ttext\na\t1\n", CorpusFormat::kTsv) ==
        ErrorCode::kMalformedRow);
  CHECK(error_of("id\tlabel\ttext\na\t1\tx\ty\n", CorpusFormat::kTsv) ==
        ErrorCode::kMalformedRow);
  CHECK(error_of("id\tlabel\ttext\na\t1\tx\na\t0\ty\n", CorpusFormat::kTsv) ==
        ErrorCode::kDuplicateId);
  CHECK(error_of("wrong\theader\n", CorpusFormat::kTsv) ==
        ErrorCode::kMalformedRow);
  CHECK(error_of("", CorpusFormat::kTsv) == ErrorCode::kMalformedRow);
  CHECK(error_of("{\"id\":\"a\",\"label\":\"1\"}\n", CorpusFormat::kJsonl) ==
        ErrorCode::kMalformedRow);
  CHECK(error_of("not json\n", CorpusFormat::kJsonl) == ErrorCode::kMalformedRow);
}

TEST_CASE("malformed row messages name the line") {
  std::istringstream in("id\tlabel\ttext\na\t1\tok\nb\t7\tbad\n");
  try {
    read_corpus(in, CorpusFormat::kTsv, "t");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.message()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("JSONL and TSV round trips preserve the corpus") {
  const auto c = parse_tsv("id\tlabel\ttext\na\t1\tmarhaba\nb\t0\tsalam\n");
  for (auto format : {CorpusFormat::kTsv, CorpusFormat::kJsonl}) {
    std::ostringstream out;
    write_corpus(c, out, format);
    std::istringstream in(out.str());
    const auto back = read_corpus(in, format, "t");
    REQUIRE(back.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(back.examples()[i].id == c.examples()[i].id);
      CHECK(back.examples()[i].text == c.examples()[i].text);
      CHECK(back.examples()[i].label == c.examples()[i].label);
    }
  }
}

TEST_CASE("train_test_split sizes and stratification") {
  const auto c = synthesize_corpus(10828, 1191, 1);
  const auto split = train_test_split(c, 0.2, 11);
  CHECK(split.stratified);
  CHECK(split.test.size() == 2166);
  CHECK(split.train.size() == 8662);
  CHECK(corpus_stats(split.test).n_positive == 238);
  CHECK(corpus_stats(split.train).n_positive == 953);
  // Disjoint and covering.
  std::size_t found = 0;
  for (const auto& ex : split.test.examples()) {
    CHECK(split.train.find(ex.id) == nullptr);
    found += c.find(ex.id) != nullptr;
  }
  CHECK(found == split.test.size());
  const auto again = train_test_split(c, 0.2, 11);
  CHECK(again.test.examples()[0].id == split.test.examples()[0].id);

  CHECK_THROWS_AS(train_test_split(c, 0.0, 1), Error);
  CHECK_THROWS_AS(train_test_split(c, 1.0, 1), Error);
}

TEST_CASE("split falls back to unstratified for a near single-class corpus") {
  std::vector<LabeledExample> rows;
  for (int i = 0; i < 10; ++i) {
    rows.push_back({"n" + std::to_string(i), "t",
                    i == 0 ? Label::kHateful : Label::kNotHateful});
  }
  const auto split = train_test_split(Corpus("c", rows), 0.3, 2);
  CHECK_FALSE(split.stratified);
  CHECK(split.test.size() == 3);
}

TEST_CASE("folds for the full-size corpus are balanced") {
  const auto c = synthesize_corpus(10828, 1191, 1);
  const auto plan = make_folds(c, 5, 2022);
  const auto sizes = plan.fold_sizes();
  std::map<std::uint32_t, std::size_t> pos;
  for (const auto& ex : c.examples()) {
    if (ex.label == Label::kHateful) ++pos[*plan.fold_of(ex.id)];
  }
  for (std::uint32_t f = 0; f < 5; ++f) {
    CHECK((sizes[f] == 2165 || sizes[f] == 2166));
    CHECK((pos[f] == 238 || pos[f] == 239));
  }
}

TEST_CASE("make_folds property: partition, balance, stratification") {
  oracle::Gen gen(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = gen.range(2, 400);
    const auto c = random_corpus(gen, n);
    const auto k = static_cast<std::uint32_t>(gen.range(2, std::min<std::size_t>(n, 10)));
    const auto plan = make_folds(c, k, gen.next());
    REQUIRE(plan.ids().size() == n);
    std::vector<std::size_t> size(k), positives(k);
    for (const auto& ex : c.examples()) {
      const auto f = plan.fold_of(ex.id);
      REQUIRE(f.has_value());
      REQUIRE(*f < k);
      ++size[*f];
      positives[*f] += ex.label == Label::kHateful;
    }
    const auto [smin, smax] = std::minmax_element(size.begin(), size.end());
    const auto [pmin, pmax] = std::minmax_element(positives.begin(), positives.end());
    CHECK(*smax - *smin <= 1);
    CHECK(*pmax - *pmin <= 1);
  }
}

TEST_CASE("make_folds rejects bad k") {
  const auto c = synthesize_corpus(10, 3, 1);
  CHECK_THROWS_AS(make_folds(c, 1, 0), Error);
  CHECK_THROWS_AS(make_folds(c, 11, 0), Error);
  try {
    make_folds(c, 1, 0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidK);
  }
}

TEST_CASE("fold plans survive a save and load") {
  const auto c = synthesize_corpus(50, 9, 4);
  const auto plan = make_folds(c, 4, 8);
  const auto path =
      std::filesystem::temp_directory_path() / "foldvote_plan_test.tsv";
  save_fold_plan(plan, path);
  const auto back = load_fold_plan(path);
  std::filesystem::remove(path);
  CHECK(back.k() == 4);
  for (const auto& ex : c.examples()) {
    CHECK(back.fold_of(ex.id) == plan.fold_of(ex.id));
  }
}

TEST_CASE("synthetic corpora hit the requested counts deterministically") {
  const auto a = synthesize_corpus(10828, 1191, 5);
  const auto stats = corpus_stats(a);
  CHECK(stats.n == 10828);
  CHECK(stats.n_positive == 1191);
  CHECK(stats.prior == doctest::Approx(0.110).epsilon(0.001 / 0.110));
  const auto b = synthesize_corpus(10828, 1191, 5);
  CHECK(a.examples()[100].text == b.examples()[100].text);
  CHECK_THROWS_AS(synthesize_corpus(5, 6, 1), Error);
}
