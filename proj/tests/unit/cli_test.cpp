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

// Golden exit-code and stdout checks for the command-line tool.
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

const fs::path& workdir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "foldvote_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Result run(const std::string& args) {
  const auto out = workdir() / "stdout.txt";
  const auto err = workdir() / "stderr.txt";
  const std::string cmd = "cd '" + workdir().string() + "' && '" FOLDVOTE_CLI "' " +
                          args + " > '" + out.string() + "' 2> '" + err.string() +
                          "' < /dev/null";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

const std::string kFixtures = FOLDVOTE_FIXTURES;

}  // namespace

TEST_CASE("stats on a valid file prints JSON with n") {
  const auto r = run("stats --input " + kFixtures + "/three_rows.tsv");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"n\": 3") != std::string::npos);
}

TEST_CASE("stats on a missing file exits 2") {
  const auto r = run("stats --input missing.tsv");
  CHECK(r.code == 2);
  CHECK(r.err.find("missing.tsv") != std::string::npos);
}

TEST_CASE("stats names the offending row") {
  std::ofstream(workdir() / "bad.tsv") << "id\tlabel\ttext\na\t1\tok\nb\t??\tno\n";
  const auto r = run("stats --input bad.tsv");
  CHECK(r.code == 2);
  CHECK(r.err.find("line 3") != std::string::npos);
}

TEST_CASE("usage errors exit 1") {
  CHECK(run("").code == 1);
  CHECK(run("nosuchcommand").code == 1);
  CHECK(run("cv --input x.tsv --k 1").code == 1);
  CHECK(run("ensemble --gold g.tsv").code == 1);
  CHECK(run("ensemble --preds a --gold b --method sometimes").code == 1);
  CHECK(run("stats").code == 1);
}

TEST_CASE("help and version exit 0") {
  CHECK(run("--help").code == 0);
  const auto v = run("--version");
  CHECK(v.code == 0);
  CHECK(v.out.find('.') != std::string::npos);
}

TEST_CASE("synth on a full-size corpus reports the prior") {
  const auto r = run("synth --n 10828 --positives 1191 --seed 1 --out big.tsv");
  REQUIRE(r.code == 0);
  const auto s = run("stats --input big.tsv");
  CHECK(s.code == 0);
  CHECK(s.out.find("\"prior\": 0.1099") != std::string::npos);
}

TEST_CASE("ensemble with mismatched ids exits 2 and lists them") {
  const auto r = run("ensemble --preds " + kFixtures + "/three_rows.pred.tsv " +
                     kFixtures + "/mismatched.pred.tsv --gold " + kFixtures +
                     "/three_rows.tsv");
  CHECK(r.code == 2);
  CHECK(r.err.find("IdSetMismatch") != std::string::npos);
  CHECK(r.err.find("r3") != std::string::npos);
  CHECK(r.err.find("r9") != std::string::npos);
}

TEST_CASE("ensemble with one file and majority matches the member row") {
  const auto r = run("ensemble --preds " + kFixtures +
                     "/three_rows.pred.tsv --gold " + kFixtures +
                     "/three_rows.tsv --method majority --table-format tsv");
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string header, ens, model;
  std::getline(lines, header);
  std::getline(lines, ens);
  std::getline(lines, model);
  CHECK(ens.substr(ens.find('\t', ens.find('\t') + 1)) ==
        model.substr(model.find('\t', model.find('\t') + 1)));
}

TEST_CASE("fold-averaged ensemble without folds exits 2") {
  const auto r = run("ensemble --preds " + kFixtures +
                     "/three_rows.pred.tsv --gold " + kFixtures +
                     "/three_rows.tsv --mode fold-averaged");
  CHECK(r.code == 2);
}

TEST_CASE("cv prints best epochs and populates the run directory") {
  REQUIRE(run("synth --n 200 --positives 30 --seed 2 --out small.tsv").code == 0);
  const auto r =
      run("cv --input small.tsv --k 5 --epochs 1,2,3 --seed 2 --out-dir runs");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("Epochs") != std::string::npos);
  CHECK(r.out.find("Majority Vote") != std::string::npos);
  CHECK(fs::exists(workdir() / "runs/seed-2/manifest.json"));
  CHECK(fs::exists(workdir() / "runs/seed-2/preds/baseline/3.pred.tsv"));
  // Refuses to clobber, then replaces with --force.
  CHECK(run("cv --input small.tsv --k 5 --epochs 1,2,3 --seed 2 --out-dir runs")
            .code == 2);
  CHECK(run("cv --input small.tsv --k 5 --epochs 1,2,3 --seed 2 --out-dir runs "
            "--force")
            .code == 0);
}

TEST_CASE("cv replay detects a modified input") {
  REQUIRE(run("synth --n 120 --positives 20 --seed 3 --out moving.tsv").code == 0);
  REQUIRE(run("cv --input moving.tsv --k 3 --epochs 1 --seed 3 --out-dir mv").code ==
          0);
  REQUIRE(run("synth --n 120 --positives 21 --seed 3 --out moving.tsv").code == 0);
  const auto r = run("cv --from-manifest mv/seed-3/manifest.json --out-dir mv2");
  CHECK(r.code == 2);
  CHECK(r.err.find("DigestMismatch") != std::string::npos);
}

TEST_CASE("report audits the reference table") {
  const auto r = run("report --results " + kFixtures +
                     "/reference_results.tsv --audit --table-format tsv");
  CHECK(r.code == 0);
  CHECK(r.err.find("1 of 8") != std::string::npos);
}

TEST_CASE("train and predict produce a loadable prediction file") {
  REQUIRE(run("synth --n 100 --positives 20 --seed 4 --out tp.tsv").code == 0);
  REQUIRE(run("train --input tp.tsv --epochs 2 --seed 4 --out tp.model.json").code == 0);
  REQUIRE(run("predict --model tp.model.json --input tp.tsv --name tp --out tp.pred.tsv")
              .code == 0);
  CHECK(run("ensemble --preds tp.pred.tsv --gold tp.tsv").code == 0);
  CHECK(run("predict --model nope.json --input tp.tsv --out x.pred.tsv").code == 2);
}

TEST_CASE("split writes both halves") {
  REQUIRE(run("synth --n 100 --positives 20 --seed 5 --out sp.tsv").code == 0);
  const auto r = run("split --input sp.tsv --test-fraction 0.2 --seed 5 "
                     "--train-out tr.tsv --test-out te.tsv");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"test\": 20") != std::string::npos);
  CHECK(run("split --input sp.tsv --test-fraction 1.5 --train-out a --test-out b")
            .code == 1);
}

TEST_CASE("folds subcommand") {
  REQUIRE(run("synth --n 50 --positives 10 --seed 6 --out fo.tsv").code == 0);
  CHECK(run("folds --input fo.tsv --k 5 --seed 6 --out fo.folds.tsv").code == 0);
  CHECK(fs::exists(workdir() / "fo.folds.tsv"));
  CHECK(run("folds --input fo.tsv --k 51 --out x.tsv").code == 2);
}
