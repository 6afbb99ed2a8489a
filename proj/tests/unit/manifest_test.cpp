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

#include <filesystem>
#include <string>

#include "doctest.h"
#include "foldvote/error.hpp"
#include "foldvote/manifest.hpp"

using namespace foldvote;

TEST_CASE("sha256 known answers") {
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const auto path = std::filesystem::temp_directory_path() / "foldvote_sha.txt";
  write_text_file(path, "abc");
  CHECK(sha256_file(path) == sha256_hex("abc"));
  CHECK(read_text_file(path) == "abc");
  std::filesystem::remove(path);
  CHECK_THROWS_AS(sha256_file("/nonexistent/file"), Error);
}

TEST_CASE("adapter defaults carry the runner hyperparameters") {
  const auto m = AdapterManifest::defaults();
  CHECK(m.hyperparameters.learning_rate == 1e-5);
  CHECK(m.hyperparameters.dropout == 0.3);
  CHECK(m.hyperparameters.max_length == 128);
  CHECK(m.hyperparameters.batch_size == 18);
  REQUIRE(m.models.size() == 6);
  const int epochs[] = {4, 3, 4, 4, 3, 1};
  for (std::size_t i = 0; i < 6; ++i) CHECK(m.models[i].epochs == epochs[i]);
}

TEST_CASE("adapter manifests parse, fill defaults and reject junk") {
  const auto fixture = load_adapter_manifest(FOLDVOTE_FIXTURES "/adapter_manifest.json");
  CHECK(fixture.models.size() == 6);
  CHECK(fixture.hyperparameters.learning_rate == 1e-5);
  const auto partial = AdapterManifest::parse(R"({"hyperparameters": {"dropout": 0.1}})");
  CHECK(partial.hyperparameters.dropout == 0.1);
  CHECK(partial.hyperparameters.max_length == 128);
  const auto back = AdapterManifest::parse(fixture.to_json());
  CHECK(back.to_json() == fixture.to_json());
  CHECK_THROWS_AS(AdapterManifest::parse("[1]"), Error);
  CHECK_THROWS_AS(AdapterManifest::parse(R"({"models": [{"name": "x", "epochs": 0}]})"), Error);
  CHECK_THROWS_AS(AdapterManifest::parse("{"), Error);
}
