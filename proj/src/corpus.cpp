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

#include "foldvote/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "foldvote/error.hpp"
#include "json.hpp"

namespace foldvote {
namespace {

constexpr std::string_view kTsvHeader = "id\tlabel\ttext";
constexpr std::string_view kFoldHeader = "id\tfold";

std::string lowercase_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

[[noreturn]] void malformed(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::kMalformedRow,
              "line " + std::to_string(line_no) + ": " + what);
}

Label label_or_throw(std::string_view token, std::size_t line_no) {
  if (auto label = parse_label_token(token)) return *label;
  throw Error(ErrorCode::kUnknownLabelToken,
              "line " + std::to_string(line_no) + ": unknown label token '" +
                  std::string(token) + "'");
}

LabeledExample make_example(std::string_view id, std::string_view label,
                            std::string text, std::size_t line_no) {
  if (!is_valid_id(id)) {
    malformed(line_no, "id must be a nonempty token without whitespace");
  }
  return LabeledExample{std::string(id), std::move(text),
                        label_or_throw(label, line_no)};
}

// Duplicate ids are reported against the row that repeats them.
void push_unique(std::vector<LabeledExample>& rows,
                 std::unordered_map<std::string, std::size_t>& seen,
                 LabeledExample ex, std::size_t line_no) {
  if (!seen.emplace(ex.id, line_no).second) {
    throw Error(ErrorCode::kDuplicateId,
                "line " + std::to_string(line_no) + ": duplicate id '" +
                    ex.id + "'",
                {ex.id});
  }
  rows.push_back(std::move(ex));
}

std::vector<LabeledExample> read_tsv(std::istream& in) {
  std::vector<LabeledExample> rows;
  std::unordered_map<std::string, std::size_t> seen;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) malformed(1, "missing header");
  ++line_no;
  strip_cr(line);
  if (line != kTsvHeader) {
    malformed(line_no, "expected header 'id<TAB>label<TAB>text'");
  }
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    const auto fields = split_tabs(line);
    if (fields.size() != 3) {
      malformed(line_no, "expected 3 tab-separated fields, found " +
                             std::to_string(fields.size()));
    }
    push_unique(rows, seen,
                make_example(fields[0], fields[1], std::string(fields[2]),
                             line_no),
                line_no);
  }
  return rows;
}

std::vector<LabeledExample> read_jsonl(std::istream& in) {
  std::vector<LabeledExample> rows;
  std::unordered_map<std::string, std::size_t> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      malformed(line_no, "invalid JSON");
    }
    if (!obj.is_object()) malformed(line_no, "expected a JSON object");
    for (const char* key : {"id", "label", "text"}) {
      if (!obj.contains(key) || !obj[key].is_string()) {
        malformed(line_no, std::string("missing string field '") + key + "'");
      }
    }
    push_unique(rows, seen,
                make_example(obj["id"].get<std::string>(),
                             obj["label"].get<std::string>(),
                             obj["text"].get<std::string>(), line_no),
                line_no);
  }
  return rows;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  }
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  }
  return out;
}

}  // namespace

std::optional<Label> parse_label_token(std::string_view token) {
  const auto t = lowercase_ascii(token);
  if (t == "1" || t == "hateful" || t == "hate") return Label::kHateful;
  if (t == "0" || t == "not_hateful" || t == "normal") {
    return Label::kNotHateful;
  }
  return std::nullopt;
}

std::string_view label_token(Label label) {
  return label == Label::kHateful ? "hateful" : "not_hateful";
}

bool is_valid_id(std::string_view id) {
  if (id.empty()) return false;
  return std::none_of(id.begin(), id.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return u <= 0x20 || u == 0x7f;
  });
}

Corpus::Corpus(std::string name, std::vector<LabeledExample> examples)
    : name_(std::move(name)), examples_(std::move(examples)) {
  index_.reserve(examples_.size());
  for (std::size_t i = 0; i < examples_.size(); ++i) {
    const auto& id = examples_[i].id;
    if (!is_valid_id(id)) {
      throw Error(ErrorCode::kInvalidArgument, "invalid id '" + id + "'");
    }
    if (!index_.emplace(id, i).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate id '" + id + "'", {id});
    }
  }
}

const LabeledExample* Corpus::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &examples_[it->second];
}

LabelMap Corpus::labels() const {
  LabelMap out;
  for (const auto& ex : examples_) out.emplace(ex.id, ex.label);
  return out;
}

std::optional<CorpusFormat> parse_corpus_format(std::string_view name) {
  const auto n = lowercase_ascii(name);
  if (n == "tsv") return CorpusFormat::kTsv;
  if (n == "jsonl") return CorpusFormat::kJsonl;
  return std::nullopt;
}

std::string_view to_string(CorpusFormat format) {
  return format == CorpusFormat::kTsv ? "tsv" : "jsonl";
}

Corpus read_corpus(std::istream& in, CorpusFormat format, std::string name) {
  auto rows = format == CorpusFormat::kTsv ? read_tsv(in) : read_jsonl(in);
  return Corpus(std::move(name), std::move(rows));
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  auto in = open_input(path);
  return read_corpus(in, format, path.stem().string());
}

void write_corpus(const Corpus& corpus, std::ostream& out,
                  CorpusFormat format) {
  if (format == CorpusFormat::kTsv) {
    out << kTsvHeader << '\n';
    for (const auto& ex : corpus.examples()) {
      if (ex.text.find_first_of("\t\n") != std::string::npos) {
        throw Error(ErrorCode::kInvalidArgument,
                    "text of '" + ex.id + "' contains a tab or newline");
      }
      out << ex.id << '\t' << (ex.label == Label::kHateful ? '1' : '0')
          << '\t' << ex.text << '\n';
    }
    return;
  }
  for (const auto& ex : corpus.examples()) {
    nlohmann::ordered_json obj;
    obj["id"] = ex.id;
    obj["label"] = ex.label == Label::kHateful ? "1" : "0";
    obj["text"] = ex.text;
    out << obj.dump(-1, ' ', false,
                    nlohmann::json::error_handler_t::replace)
        << '\n';
  }
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path,
                 CorpusFormat format) {
  auto out = open_output(path);
  write_corpus(corpus, out, format);
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats stats;
  stats.n = corpus.size();
  for (const auto& ex : corpus.examples()) {
    if (ex.label == kPositiveLabel) ++stats.n_positive;
    if (ex.text.empty()) ++stats.n_empty_text;
  }
  stats.prior = stats.n == 0 ? 0.0
                             : static_cast<double>(stats.n_positive) /
                                   static_cast<double>(stats.n);
  return stats;
}

SplitResult train_test_split(const Corpus& corpus, double test_fraction,
                             Seed seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidFraction,
                "test fraction must lie in (0, 1)");
  }
  const auto examples = corpus.examples();
  const std::size_t n = examples.size();
  const auto test_n = static_cast<std::size_t>(
      std::llround(test_fraction * static_cast<double>(n)));

  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < n; ++i) {
    (examples[i].label == kPositiveLabel ? pos : neg).push_back(i);
  }

  std::vector<bool> in_test(n, false);
  SplitResult result;
  result.stratified = pos.size() >= 2 && neg.size() >= 2;
  if (result.stratified) {
    Rng(derive_seed(seed, "split/positive")).shuffle(pos);
    Rng(derive_seed(seed, "split/negative")).shuffle(neg);
    // round(test_n * n_pos / n), half up, kept feasible for both strata.
    std::size_t test_pos = (2 * test_n * pos.size() + n) / (2 * n);
    test_pos = std::min({test_pos, pos.size(), test_n});
    if (test_n - test_pos > neg.size()) test_pos = test_n - neg.size();
    for (std::size_t i = 0; i < test_pos; ++i) in_test[pos[i]] = true;
    for (std::size_t i = 0; i < test_n - test_pos; ++i) in_test[neg[i]] = true;
  } else {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    Rng(derive_seed(seed, "split/all")).shuffle(all);
    for (std::size_t i = 0; i < test_n; ++i) in_test[all[i]] = true;
  }

  std::vector<LabeledExample> train_rows, test_rows;
  for (std::size_t i = 0; i < n; ++i) {
    (in_test[i] ? test_rows : train_rows).push_back(examples[i]);
  }
  result.train = Corpus(corpus.name() + ".train", std::move(train_rows));
  result.test = Corpus(corpus.name() + ".test", std::move(test_rows));
  return result;
}

FoldPlan::FoldPlan(std::uint32_t k, Seed seed, bool stratified,
                   std::vector<std::string> ids,
                   std::vector<std::uint32_t> folds)
    : k_(k),
      seed_(seed),
      stratified_(stratified),
      ids_(std::move(ids)),
      folds_(std::move(folds)) {
  if (ids_.size() != folds_.size()) {
    throw Error(ErrorCode::kInternal, "fold plan arrays differ in length");
  }
  index_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (folds_[i] >= k_) {
      throw Error(ErrorCode::kInvalidK, "fold index " +
                                            std::to_string(folds_[i]) +
                                            " out of range for k=" +
                                            std::to_string(k_));
    }
    if (!index_.emplace(ids_[i], folds_[i]).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate id '" + ids_[i] + "'",
                  {ids_[i]});
    }
  }
}

std::optional<std::uint32_t> FoldPlan::fold_of(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> FoldPlan::fold_sizes() const {
  std::vector<std::size_t> sizes(k_, 0);
  for (auto f : folds_) ++sizes[f];
  return sizes;
}

FoldPlan make_folds(const Corpus& corpus, std::uint32_t k, Seed seed,
                    bool stratified) {
  const auto examples = corpus.examples();
  const std::size_t n = examples.size();
  if (k < 2 || k > n) {
    throw Error(ErrorCode::kInvalidK,
                "k must satisfy 2 <= k <= n (k=" + std::to_string(k) +
                    ", n=" + std::to_string(n) + ")");
  }
  std::vector<std::uint32_t> folds(n, 0);
  if (stratified) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < n; ++i) {
      (examples[i].label == kPositiveLabel ? pos : neg).push_back(i);
    }
    Rng(derive_seed(seed, "folds/positive")).shuffle(pos);
    Rng(derive_seed(seed, "folds/negative")).shuffle(neg);
    for (std::size_t i = 0; i < pos.size(); ++i) {
      folds[pos[i]] = static_cast<std::uint32_t>(i % k);
    }
    for (std::size_t i = 0; i < neg.size(); ++i) {
      folds[neg[i]] = static_cast<std::uint32_t>((pos.size() + i) % k);
    }
  } else {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    Rng(derive_seed(seed, "folds/all")).shuffle(all);
    for (std::size_t i = 0; i < n; ++i) {
      folds[all[i]] = static_cast<std::uint32_t>(i % k);
    }
  }
  std::vector<std::string> ids;
  ids.reserve(n);
  for (const auto& ex : examples) ids.push_back(ex.id);
  return FoldPlan(k, seed, stratified, std::move(ids), std::move(folds));
}

void write_fold_plan(const FoldPlan& plan, std::ostream& out) {
  out << kFoldHeader << '\n';
  for (std::size_t i = 0; i < plan.ids().size(); ++i) {
    out << plan.ids()[i] << '\t' << plan.folds()[i] << '\n';
  }
}

void save_fold_plan(const FoldPlan& plan, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_fold_plan(plan, out);
}

FoldPlan load_fold_plan(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) malformed(1, "missing header");
  strip_cr(line);
  if (line != kFoldHeader) malformed(1, "expected header 'id<TAB>fold'");
  std::vector<std::string> ids;
  std::vector<std::uint32_t> folds;
  std::uint32_t k = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    const auto fields = split_tabs(line);
    std::uint32_t fold = 0;
    if (fields.size() != 2 || !is_valid_id(fields[0])) {
      malformed(line_no, "expected 'id<TAB>fold'");
    }
    const auto* end = fields[1].data() + fields[1].size();
    const auto [ptr, ec] = std::from_chars(fields[1].data(), end, fold);
    if (ec != std::errc() || ptr != end) malformed(line_no, "bad fold index");
    ids.emplace_back(fields[0]);
    folds.push_back(fold);
    k = std::max(k, fold + 1);
  }
  if (k < 2) {
    throw Error(ErrorCode::kInvalidK, "fold plan '" + path.string() +
                                          "' has fewer than two folds");
  }
  return FoldPlan(k, 0, true, std::move(ids), std::move(folds));
}

}  // namespace foldvote
