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

#ifndef FOLDVOTE_MANIFEST_HPP_
#define FOLDVOTE_MANIFEST_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace foldvote {

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

// Whole-file helpers that raise Io errors carrying the path. Writing creates
// missing parent directories.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

// Settings of the external transformer runner, echoed into run manifests.
struct TransformerHyperparameters {
  double learning_rate = 1e-5;
  double dropout = 0.3;
  int max_length = 128;
  int batch_size = 18;
};

struct AdapterModel {
  std::string name;
  std::string checkpoint;
  int epochs = 1;
};

// JSON document written by the runner:
//   {"hyperparameters": {...}, "models": [{"name", "checkpoint", "epochs"}]}
// Missing hyperparameters take the defaults above.
struct AdapterManifest {
  TransformerHyperparameters hyperparameters;
  std::vector<AdapterModel> models;

  // The six checkpoints with their default epoch counts.
  static AdapterManifest defaults();
  static AdapterManifest parse(std::string_view json);
  std::string to_json() const;
};

AdapterManifest load_adapter_manifest(const std::filesystem::path& path);

}  // namespace foldvote

#endif  // FOLDVOTE_MANIFEST_HPP_
