/*
 * Copyright 2026 The lssboost Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LSSBOOST_DATASET_HPP_
#define LSSBOOST_DATASET_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lssboost {

enum class ColumnType { kContinuous, kCategorical };

std::string_view column_type_name(ColumnType type);

struct Column {
  std::string name;
  ColumnType type = ColumnType::kContinuous;
  std::vector<double> numeric;       // kContinuous
  std::vector<std::string> labels;   // kCategorical
};

// Column-typed observation table without missing values.
class Dataset {
 public:
  Dataset() = default;

  std::size_t num_rows() const { return num_rows_; }
  std::size_t num_columns() const { return columns_.size(); }
  const std::vector<Column>& columns() const { return columns_; }

  bool has_column(std::string_view name) const;
  // Throws InputError for unknown names.
  const Column& column(std::string_view name) const;
  // Throws InputError unless the column is continuous.
  std::span<const double> numeric(std::string_view name) const;
  // Throws InputError unless the column is categorical.
  const std::vector<std::string>& labels(std::string_view name) const;
  // Sorted distinct labels of a categorical column.
  std::vector<std::string> levels(std::string_view name) const;

  void add_continuous(std::string name, std::vector<double> values);
  void add_categorical(std::string name, std::vector<std::string> values);
  // Replaces the values of an existing continuous column.
  void set_numeric(std::string_view name, std::vector<double> values);

  Dataset select_rows(std::span<const std::size_t> rows) const;

  // 64-bit FNV-1a over names, types, row count and cell contents.
  std::uint64_t fingerprint() const;

 private:
  void check_length(std::size_t n);
  Column& mutable_column(std::string_view name);

  std::size_t num_rows_ = 0;
  std::vector<Column> columns_;
};

struct IngestOptions {
  // Forced column types; a continuous hint on a non-numeric column is an
  // error.
  std::map<std::string, ColumnType> type_hints;
  // Columns whose missing values drop the row. Empty means every column.
  std::vector<std::string> used_columns;
};

struct IngestReport {
  std::size_t rows_read = 0;
  std::size_t rows_dropped = 0;
};

// Reads a CSV file with a header row. Empty, "NA" and "NaN" cells are
// missing. Columns that parse entirely as numbers become continuous unless
// hinted otherwise; row order is preserved.
Dataset read_csv(const std::filesystem::path& path,
                 const IngestOptions& options = {},
                 IngestReport* report = nullptr);

void write_csv(const Dataset& data, const std::filesystem::path& path);

// Shortest-safe round-trip formatting (17 significant digits).
std::string format_double(double value);

// Splits one CSV record, honouring double quotes.
std::vector<std::string> split_csv_line(std::string_view line);

bool parse_double(std::string_view text, double& value);

}  // namespace lssboost

#endif  // LSSBOOST_DATASET_HPP_
