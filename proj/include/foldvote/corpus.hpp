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

#ifndef FOLDVOTE_CORPUS_HPP_
#define FOLDVOTE_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "foldvote/random.hpp"

namespace foldvote {

// Hateful is the positive class for every metric in the harness.
enum class Label : std::uint8_t { kNotHateful = 0, kHateful = 1 };

inline constexpr Label kPositiveLabel = Label::kHateful;

// Case-insensitive: {"1","hateful","hate"} and {"0","not_hateful","normal"}.
std::optional<Label> parse_label_token(std::string_view token);

// Canonical token written to label files ("hateful" / "not_hateful").
std::string_view label_token(Label label);

using LabelMap = std::map<std::string, Label>;

struct LabeledExample {
  std::string id;
  std::string text;
  Label label = Label::kNotHateful;
};

// True for a nonempty token without ASCII whitespace or control bytes.
bool is_valid_id(std::string_view id);

class Corpus {
 public:
  Corpus() = default;

  // Throws DuplicateId or InvalidArgument (bad id token).
  Corpus(std::string name, std::vector<LabeledExample> examples);

  const std::string& name() const noexcept { return name_; }
  std::span<const LabeledExample> examples() const noexcept { return examples_; }
  std::size_t size() const noexcept { return examples_.size(); }
  bool empty() const noexcept { return examples_.empty(); }

  const LabeledExample* find(std::string_view id) const;
  LabelMap labels() const;

  // Examples whose ids satisfy `keep`, in file order.
  template <typename Pred>
  Corpus filter(std::string name, Pred keep) const {
    std::vector<LabeledExample> kept;
    for (const auto& ex : examples_) {
      if (keep(ex)) kept.push_back(ex);
    }
    return Corpus(std::move(name), std::move(kept));
  }

 private:
  std::string name_;
  std::vector<LabeledExample> examples_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class CorpusFormat { kTsv, kJsonl };

std::optional<CorpusFormat> parse_corpus_format(std::string_view name);
std::string_view to_string(CorpusFormat format);

Corpus read_corpus(std::istream& in, CorpusFormat format, std::string name);
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format);
void write_corpus(const Corpus& corpus, std::ostream& out, CorpusFormat format);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path,
                 CorpusFormat format);

struct CorpusStats {
  std::size_t n = 0;
  std::size_t n_positive = 0;
  double prior = 0.0;
  std::size_t n_empty_text = 0;
};

CorpusStats corpus_stats(const Corpus& corpus);

struct SplitResult {
  Corpus train;
  Corpus test;
  // False when either class had fewer than two examples and the split fell
  // back to an unstratified shuffle.
  bool stratified = true;
};

// |test| = round(test_fraction * n). Both sides keep file order.
SplitResult train_test_split(const Corpus& corpus, double test_fraction,
                             Seed seed);

class FoldPlan {
 public:
  FoldPlan() = default;
  FoldPlan(std::uint32_t k, Seed seed, bool stratified,
           std::vector<std::string> ids, std::vector<std::uint32_t> folds);

  std::uint32_t k() const noexcept { return k_; }
  Seed seed() const noexcept { return seed_; }
  bool stratified() const noexcept { return stratified_; }

  // Parallel arrays in corpus order.
  std::span<const std::string> ids() const noexcept { return ids_; }
  std::span<const std::uint32_t> folds() const noexcept { return folds_; }

  std::optional<std::uint32_t> fold_of(std::string_view id) const;
  std::vector<std::size_t> fold_sizes() const;

 private:
  std::uint32_t k_ = 0;
  Seed seed_ = 0;
  bool stratified_ = true;
  std::vector<std::string> ids_;
  std::vector<std::uint32_t> folds_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

// Seeded shuffle inside each class stratum, then round-robin over folds.
// Negatives continue the rotation where positives stopped so that total fold
// sizes also differ by at most one. Throws InvalidK unless 2 <= k <= n.
FoldPlan make_folds(const Corpus& corpus, std::uint32_t k, Seed seed,
                    bool stratified = true);

// TSV with header `id<TAB>fold`.
void write_fold_plan(const FoldPlan& plan, std::ostream& out);
void save_fold_plan(const FoldPlan& plan, const std::filesystem::path& path);
FoldPlan load_fold_plan(const std::filesystem::path& path);

// Deterministic stand-in corpus with `n_positive` Hateful rows placed at
// seeded positions among `n`. Texts are Arabic word salads with a noisy
// class signal, plus occasional diacritics, URLs and mentions.
Corpus synthesize_corpus(std::size_t n, std::size_t n_positive, Seed seed,
                         std::string name = "synthetic");

}  // namespace foldvote

#endif  // FOLDVOTE_CORPUS_HPP_
