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

#ifndef FOLDVOTE_REPORT_HPP_
#define FOLDVOTE_REPORT_HPP_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "foldvote/metrics.hpp"

namespace foldvote {

enum class RowGroup { kEnsemble, kModel };

struct ResultsRow {
  RowGroup group = RowGroup::kModel;
  std::string name;
  MetricsReport metrics;
  // Pooled counts behind the row; absent for rows entered from printed
  // values only.
  std::optional<ConfusionMatrix> counts;
};

class ResultsTable {
 public:
  explicit ResultsTable(Aggregation aggregation = Aggregation::kPooled)
      : aggregation_(aggregation) {}

  void add(ResultsRow row) { rows_.push_back(std::move(row)); }

  // Ensembles before models; F1 descending inside a group, then name.
  std::vector<ResultsRow> sorted_rows() const;

  std::span<const ResultsRow> rows() const noexcept { return rows_; }
  bool empty() const noexcept { return rows_.empty(); }
  Aggregation aggregation() const noexcept { return aggregation_; }

 private:
  Aggregation aggregation_;
  std::vector<ResultsRow> rows_;
};

enum class TableFormat { kText, kTsv, kJson };

std::optional<TableFormat> parse_table_format(std::string_view name);
std::string_view file_extension(TableFormat format);

// Text shows metrics rounded half-up to two decimals; TSV and JSON carry
// full precision. An empty table renders as its header alone.
std::string render_table(const ResultsTable& table, TableFormat format);

// Reads the TSV rendering back. The count columns may be left empty.
ResultsTable read_results_tsv(std::istream& in,
                              Aggregation aggregation = Aggregation::kPooled);
ResultsTable load_results_tsv(const std::filesystem::path& path,
                              Aggregation aggregation = Aggregation::kPooled);

// Whether a row's printed F1 equals the harmonic mean of its printed
// precision and recall.
struct F1AuditRow {
  std::string name;
  double printed_f1 = 0.0;
  double recomputed_f1 = 0.0;
  double abs_diff = 0.0;
  bool consistent = false;
  // For inconsistent rows: true when printed F1 lies below the recomputed
  // value. A mean of per-fold F1 never exceeds the F1 of the mean precision
  // and recall (the harmonic mean is jointly concave), so only such rows can
  // be explained by fold-averaged aggregation.
  bool explained_by_fold_averaging = false;
};

std::vector<F1AuditRow> audit_f1(const ResultsTable& table,
                                 double tolerance = 0.01);
std::string render_f1_audit(std::span<const F1AuditRow> rows,
                            TableFormat format);

struct BestEpochRow {
  std::string model;
  int best_epoch = 0;
  // (epoch, mean fold F1) for every epoch in the grid.
  std::vector<std::pair<int, double>> mean_f1;
};

// Two-column Model / Epochs table.
std::string render_best_epochs(std::span<const BestEpochRow> rows,
                               TableFormat format);

}  // namespace foldvote

#endif  // FOLDVOTE_REPORT_HPP_
