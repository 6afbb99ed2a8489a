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

#include "foldvote/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "foldvote/error.hpp"
#include "foldvote/format.hpp"
#include "foldvote/text.hpp"
#include "json.hpp"

namespace foldvote {
namespace {

constexpr std::string_view kTsvHeader =
    "group\tname\tf1\taccuracy\tprecision\trecall\ttp\tfp\tfn\ttn";

std::string_view group_title(RowGroup group) {
  return group == RowGroup::kEnsemble ? "Ensembles" : "Models";
}

std::string_view group_token(RowGroup group) {
  return group == RowGroup::kEnsemble ? "ensemble" : "model";
}

std::size_t display_width(std::string_view s) {
  return text::code_point_offsets(s).size() - 1;
}

// Left-aligned text columns separated by two spaces; no trailing spaces.
std::string layout(const std::vector<std::vector<std::string>>& lines) {
  std::vector<std::size_t> widths;
  for (const auto& cells : lines) {
    if (widths.size() < cells.size()) widths.resize(cells.size(), 0);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      widths[c] = std::max(widths[c], display_width(cells[c]));
    }
  }
  std::string out;
  for (const auto& cells : lines) {
    std::string line;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      line += cells[c];
      if (c + 1 < cells.size()) {
        line.append(widths[c] - display_width(cells[c]) + 2, ' ');
      }
    }
    out += line + '\n';
  }
  return out;
}

std::vector<std::string> rule_for(const std::vector<std::string>& header) {
  std::vector<std::string> rule;
  for (const auto& h : header) rule.emplace_back(display_width(h), '-');
  return rule;
}

double parse_double(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::kMalformedRow,
                "line " + std::to_string(line_no) + ": bad number '" +
                    std::string(field) + "'");
  }
  return value;
}

std::uint64_t parse_count(std::string_view field, std::size_t line_no) {
  std::uint64_t value = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::kMalformedRow,
                "line " + std::to_string(line_no) + ": bad count '" +
                    std::string(field) + "'");
  }
  return value;
}

std::string footer(Aggregation aggregation) {
  return "aggregation: " + std::string(to_string(aggregation)) + "; " +
         std::string(kZeroDivisionNote) + "\n";
}

}  // namespace

std::vector<ResultsRow> ResultsTable::sorted_rows() const {
  std::vector<ResultsRow> rows = rows_;
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ResultsRow& a, const ResultsRow& b) {
                     if (a.group != b.group) return a.group < b.group;
                     if (a.metrics.f1 != b.metrics.f1) {
                       return a.metrics.f1 > b.metrics.f1;
                     }
                     return a.name < b.name;
                   });
  return rows;
}

std::optional<TableFormat> parse_table_format(std::string_view name) {
  if (name == "text" || name == "txt") return TableFormat::kText;
  if (name == "tsv") return TableFormat::kTsv;
  if (name == "json") return TableFormat::kJson;
  return std::nullopt;
}

std::string_view file_extension(TableFormat format) {
  switch (format) {
    case TableFormat::kText: return "txt";
    case TableFormat::kTsv: return "tsv";
    case TableFormat::kJson: return "json";
  }
  return "txt";
}

std::string render_table(const ResultsTable& table, TableFormat format) {
  const auto rows = table.sorted_rows();
  switch (format) {
    case TableFormat::kText: {
      const std::vector<std::string> header = {"Group", "Model", "F1-score",
                                               "Acc.", "Precision", "Recall"};
      std::vector<std::vector<std::string>> lines = {header, rule_for(header)};
      for (const auto& r : rows) {
        lines.push_back({std::string(group_title(r.group)), r.name,
                         format_half_up(r.metrics.f1, 2),
                         format_half_up(r.metrics.accuracy, 2),
                         format_half_up(r.metrics.precision, 2),
                         format_half_up(r.metrics.recall, 2)});
      }
      std::string out = layout(lines);
      if (!rows.empty()) out += footer(table.aggregation());
      return out;
    }
    case TableFormat::kTsv: {
      std::string out = std::string(kTsvHeader) + '\n';
      for (const auto& r : rows) {
        out += std::string(group_token(r.group)) + '\t' + r.name + '\t' +
               format_shortest(r.metrics.f1) + '\t' +
               format_shortest(r.metrics.accuracy) + '\t' +
               format_shortest(r.metrics.precision) + '\t' +
               format_shortest(r.metrics.recall);
        if (r.counts) {
          out += '\t' + std::to_string(r.counts->tp) + '\t' +
                 std::to_string(r.counts->fp) + '\t' +
                 std::to_string(r.counts->fn) + '\t' +
                 std::to_string(r.counts->tn);
        } else {
          out += "\t\t\t\t";
        }
        out += '\n';
      }
      return out;
    }
    case TableFormat::kJson: {
      nlohmann::ordered_json doc;
      doc["aggregation"] = to_string(table.aggregation());
      doc["zero_division"] = kZeroDivisionNote;
      doc["rows"] = nlohmann::ordered_json::array();
      for (const auto& r : rows) {
        nlohmann::ordered_json row;
        row["group"] = group_token(r.group);
        row["name"] = r.name;
        row["f1"] = r.metrics.f1;
        row["accuracy"] = r.metrics.accuracy;
        row["precision"] = r.metrics.precision;
        row["recall"] = r.metrics.recall;
        if (r.counts) {
          row["tp"] = r.counts->tp;
          row["fp"] = r.counts->fp;
          row["fn"] = r.counts->fn;
          row["tn"] = r.counts->tn;
        }
        doc["rows"].push_back(std::move(row));
      }
      return doc.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) +
             '\n';
    }
  }
  return {};
}

ResultsTable read_results_tsv(std::istream& in, Aggregation aggregation) {
  ResultsTable table(aggregation);
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kMalformedRow, "line 1: missing header");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTsvHeader) {
    throw Error(ErrorCode::kMalformedRow, "line 1: unexpected results header");
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, '\t')) f.push_back(cell);
    if (!line.empty() && line.back() == '\t') f.emplace_back();
    if (f.size() != 10) {
      throw Error(ErrorCode::kMalformedRow,
                  "line " + std::to_string(line_no) + ": expected 10 fields");
    }
    ResultsRow row;
    if (f[0] == "ensemble") {
      row.group = RowGroup::kEnsemble;
    } else if (f[0] == "model") {
      row.group = RowGroup::kModel;
    } else {
      throw Error(ErrorCode::kMalformedRow,
                  "line " + std::to_string(line_no) + ": unknown group '" +
                      f[0] + "'");
    }
    row.name = f[1];
    row.metrics.f1 = parse_double(f[2], line_no);
    row.metrics.accuracy = parse_double(f[3], line_no);
    row.metrics.precision = parse_double(f[4], line_no);
    row.metrics.recall = parse_double(f[5], line_no);
    const bool no_counts = f[6].empty() && f[7].empty() && f[8].empty() &&
                           f[9].empty();
    if (!no_counts) {
      row.counts = ConfusionMatrix{
          parse_count(f[6], line_no), parse_count(f[7], line_no),
          parse_count(f[8], line_no), parse_count(f[9], line_no)};
    }
    table.add(std::move(row));
  }
  return table;
}

ResultsTable load_results_tsv(const std::filesystem::path& path,
                              Aggregation aggregation) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  return read_results_tsv(in, aggregation);
}

std::vector<F1AuditRow> audit_f1(const ResultsTable& table, double tolerance) {
  // Slack for binary representation of two-decimal inputs.
  constexpr double kEpsilon = 1e-9;
  std::vector<F1AuditRow> out;
  for (const auto& r : table.sorted_rows()) {
    F1AuditRow a;
    a.name = r.name;
    a.printed_f1 = r.metrics.f1;
    a.recomputed_f1 = harmonic_f1(r.metrics.precision, r.metrics.recall);
    a.abs_diff = std::fabs(a.recomputed_f1 - a.printed_f1);
    a.consistent = a.abs_diff <= tolerance + kEpsilon;
    a.explained_by_fold_averaging =
        !a.consistent && a.printed_f1 < a.recomputed_f1;
    out.push_back(std::move(a));
  }
  return out;
}

std::string render_f1_audit(std::span<const F1AuditRow> rows,
                            TableFormat format) {
  auto verdict = [](const F1AuditRow& a) -> std::string {
    if (a.consistent) return "consistent";
    return a.explained_by_fold_averaging ? "flagged: fold-averaged"
                                         : "flagged: inconsistent";
  };
  switch (format) {
    case TableFormat::kText: {
      const std::vector<std::string> header = {"Model", "F1 printed",
                                               "2PR/(P+R)", "|diff|",
                                               "Verdict"};
      std::vector<std::vector<std::string>> lines = {header, rule_for(header)};
      for (const auto& a : rows) {
        lines.push_back({a.name, format_half_up(a.printed_f1, 2),
                         format_half_up(a.recomputed_f1, 4),
                         format_half_up(a.abs_diff, 4), verdict(a)});
      }
      return layout(lines);
    }
    case TableFormat::kTsv: {
      std::string out =
          "name\tprinted_f1\trecomputed_f1\tabs_diff\tconsistent\t"
          "explained_by_fold_averaging\n";
      for (const auto& a : rows) {
        out += a.name + '\t' + format_shortest(a.printed_f1) + '\t' +
               format_shortest(a.recomputed_f1) + '\t' +
               format_shortest(a.abs_diff) + '\t' +
               (a.consistent ? "true" : "false") + '\t' +
               (a.explained_by_fold_averaging ? "true" : "false") + '\n';
      }
      return out;
    }
    case TableFormat::kJson: {
      auto doc = nlohmann::ordered_json::array();
      for (const auto& a : rows) {
        doc.push_back({{"name", a.name},
                       {"printed_f1", a.printed_f1},
                       {"recomputed_f1", a.recomputed_f1},
                       {"abs_diff", a.abs_diff},
                       {"consistent", a.consistent},
                       {"explained_by_fold_averaging",
                        a.explained_by_fold_averaging}});
      }
      return doc.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) +
             '\n';
    }
  }
  return {};
}

std::string render_best_epochs(std::span<const BestEpochRow> rows,
                               TableFormat format) {
  switch (format) {
    case TableFormat::kText: {
      const std::vector<std::string> header = {"Model", "Epochs"};
      std::vector<std::vector<std::string>> lines = {header, rule_for(header)};
      for (const auto& r : rows) {
        lines.push_back({r.model, std::to_string(r.best_epoch)});
      }
      return layout(lines);
    }
    case TableFormat::kTsv: {
      std::string out = "model\tbest_epoch\n";
      for (const auto& r : rows) {
        out += r.model + '\t' + std::to_string(r.best_epoch) + '\n';
      }
      return out;
    }
    case TableFormat::kJson: {
      auto doc = nlohmann::ordered_json::array();
      for (const auto& r : rows) {
        nlohmann::ordered_json row;
        row["model"] = r.model;
        row["best_epoch"] = r.best_epoch;
        auto per_epoch = nlohmann::ordered_json::array();
        for (const auto& [epoch, f1] : r.mean_f1) {
          per_epoch.push_back({{"epoch", epoch}, {"mean_fold_f1", f1}});
        }
        row["mean_fold_f1"] = std::move(per_epoch);
        doc.push_back(std::move(row));
      }
      return doc.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) +
             '\n';
    }
  }
  return {};
}

}  // namespace foldvote
