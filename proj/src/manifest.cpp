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

#include "foldvote/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <fstream>
#include <iterator>
#include <memory>

#include "foldvote/error.hpp"
#include "json.hpp"

namespace foldvote {
namespace {

using Json = nlohmann::ordered_json;

struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw Error(ErrorCode::kInternal, "SHA-256 initialisation failed");
    }
  }

  void update(const char* data, std::size_t size) {
    if (EVP_DigestUpdate(ctx_.get(), data, size) != 1) {
      throw Error(ErrorCode::kInternal, "SHA-256 update failed");
    }
  }

  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int size = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), digest.data(), &size) != 1) {
      throw Error(ErrorCode::kInternal, "SHA-256 finalisation failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * size);
    for (unsigned int i = 0; i < size; ++i) {
      out.push_back(kHex[digest[i] >> 4]);
      out.push_back(kHex[digest[i] & 0xf]);
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx_;
};

[[noreturn]] void bad_adapter(const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, "adapter manifest: " + what);
}

double number_field(const Json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) bad_adapter(std::string(key) + " must be a number");
  return obj[key].get<double>();
}

int int_field(const Json& obj, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) {
    bad_adapter(std::string(key) + " must be an integer");
  }
  return obj[key].get<int>();
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  Sha256 h;
  h.update(bytes.data(), bytes.size());
  return h.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  Sha256 h;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  if (in.bad()) throw Error(ErrorCode::kIo, "cannot read '" + path.string() + "'");
  return h.hex();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_text_file(const std::filesystem::path& path,
                     std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
}

AdapterManifest AdapterManifest::defaults() {
  AdapterManifest m;
  m.models = {
      {"AraBERT", "aubmindlab/bert-base-arabertv02", 4},
      {"AraELECTRA", "aubmindlab/araelectra-base-discriminator", 3},
      {"Albert-Arabic", "asafaya/albert-base-arabic", 4},
      {"AraGPT2", "aubmindlab/aragpt2-base", 4},
      {"mBERT", "bert-base-multilingual-cased", 3},
      {"XLM-RoBERTa", "xlm-roberta-base", 1},
  };
  return m;
}

AdapterManifest AdapterManifest::parse(std::string_view json) {
  Json doc;
  try {
    doc = Json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    bad_adapter(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) bad_adapter("expected a JSON object");

  AdapterManifest m;
  if (doc.contains("hyperparameters")) {
    const auto& hp = doc["hyperparameters"];
    if (!hp.is_object()) bad_adapter("hyperparameters must be an object");
    auto& h = m.hyperparameters;
    h.learning_rate = number_field(hp, "learning_rate", h.learning_rate);
    h.dropout = number_field(hp, "dropout", h.dropout);
    h.max_length = int_field(hp, "max_length", h.max_length);
    h.batch_size = int_field(hp, "batch_size", h.batch_size);
    if (!(h.learning_rate > 0.0) || !std::isfinite(h.learning_rate) ||
        !(h.dropout >= 0.0 && h.dropout < 1.0) || h.max_length <= 0 ||
        h.batch_size <= 0) {
      bad_adapter("hyperparameters out of range");
    }
  }
  if (doc.contains("models")) {
    if (!doc["models"].is_array()) bad_adapter("models must be an array");
    for (const auto& entry : doc["models"]) {
      if (!entry.is_object() || !entry.contains("name") ||
          !entry["name"].is_string()) {
        bad_adapter("each model needs a string name");
      }
      AdapterModel model;
      model.name = entry["name"].get<std::string>();
      if (entry.contains("checkpoint")) {
        if (!entry["checkpoint"].is_string()) {
          bad_adapter("checkpoint must be a string");
        }
        model.checkpoint = entry["checkpoint"].get<std::string>();
      }
      model.epochs = int_field(entry, "epochs", model.epochs);
      if (model.epochs <= 0) {
        bad_adapter("model '" + model.name + "': epochs must be positive");
      }
      m.models.push_back(std::move(model));
    }
  }
  return m;
}

std::string AdapterManifest::to_json() const {
  Json doc;
  doc["hyperparameters"] = {{"learning_rate", hyperparameters.learning_rate},
                            {"dropout", hyperparameters.dropout},
                            {"max_length", hyperparameters.max_length},
                            {"batch_size", hyperparameters.batch_size}};
  doc["models"] = Json::array();
  for (const auto& model : models) {
    doc["models"].push_back({{"name", model.name},
                             {"checkpoint", model.checkpoint},
                             {"epochs", model.epochs}});
  }
  return doc.dump(2);
}

AdapterManifest load_adapter_manifest(const std::filesystem::path& path) {
  try {
    return AdapterManifest::parse(read_text_file(path));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.message(), e.details());
  }
}

}  // namespace foldvote
