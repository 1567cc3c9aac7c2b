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

#include "lssboost/dataset.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "lssboost/errors.hpp"

namespace lssboost {

std::string_view column_type_name(ColumnType type) {
  return type == ColumnType::kContinuous ? "continuous" : "categorical";
}

bool Dataset::has_column(std::string_view name) const {
  return std::any_of(columns_.begin(), columns_.end(),
                     [&](const Column& c) { return c.name == name; });
}

const Column& Dataset::column(std::string_view name) const {
  for (const Column& c : columns_) {
    if (c.name == name) return c;
  }
  throw InputError("unknown column '" + std::string(name) + "'");
}

Column& Dataset::mutable_column(std::string_view name) {
  for (Column& c : columns_) {
    if (c.name == name) return c;
  }
  throw InputError("unknown column '" + std::string(name) + "'");
}

std::span<const double> Dataset::numeric(std::string_view name) const {
  const Column& c = column(name);
  if (c.type != ColumnType::kContinuous) {
    throw InputError("column '" + c.name + "' is categorical, expected "
                     "continuous");
  }
  return c.numeric;
}

const std::vector<std::string>& Dataset::labels(std::string_view name) const {
  const Column& c = column(name);
  if (c.type != ColumnType::kCategorical) {
    throw InputError("column '" + c.name + "' is continuous, expected "
                     "categorical");
  }
  return c.labels;
}

std::vector<std::string> Dataset::levels(std::string_view name) const {
  const auto& l = labels(name);
  std::set<std::string> distinct(l.begin(), l.end());
  return {distinct.begin(), distinct.end()};
}

void Dataset::check_length(std::size_t n) {
  if (columns_.empty()) {
    num_rows_ = n;
  } else if (n != num_rows_) {
    throw InputError("column length " + std::to_string(n) +
                     " does not match row count " + std::to_string(num_rows_));
  }
}

void Dataset::add_continuous(std::string name, std::vector<double> values) {
  if (has_column(name)) throw InputError("duplicate column '" + name + "'");
  check_length(values.size());
  Column c;
  c.name = std::move(name);
  c.type = ColumnType::kContinuous;
  c.numeric = std::move(values);
  columns_.push_back(std::move(c));
}

void Dataset::add_categorical(std::string name,
                              std::vector<std::string> values) {
  if (has_column(name)) throw InputError("duplicate column '" + name + "'");
  check_length(values.size());
  Column c;
  c.name = std::move(name);
  c.type = ColumnType::kCategorical;
  c.labels = std::move(values);
  columns_.push_back(std::move(c));
}

void Dataset::set_numeric(std::string_view name, std::vector<double> values) {
  Column& c = mutable_column(name);
  if (c.type != ColumnType::kContinuous) {
    throw InputError("column '" + c.name + "' is not continuous");
  }
  if (values.size() != num_rows_) throw InputError("length mismatch");
  c.numeric = std::move(values);
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
  Dataset out;
  for (const Column& c : columns_) {
    if (c.type == ColumnType::kContinuous) {
      std::vector<double> v;
      v.reserve(rows.size());
      for (std::size_t r : rows) v.push_back(c.numeric.at(r));
      out.add_continuous(c.name, std::move(v));
    } else {
      std::vector<std::string> v;
      v.reserve(rows.size());
      for (std::size_t r : rows) v.push_back(c.labels.at(r));
      out.add_categorical(c.name, std::move(v));
    }
  }
  out.num_rows_ = rows.size();
  return out;
}

namespace {

class Fnv1a {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      hash_ ^= p[i];
      hash_ *= 0x100000001b3ULL;
    }
  }
  void str(std::string_view s) {
    bytes(s.data(), s.size());
    const unsigned char sep = 0xff;
    bytes(&sep, 1);
  }
  void u64(std::uint64_t v) { bytes(&v, sizeof v); }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

bool is_missing(std::string_view cell) {
  return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan";
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

}  // namespace

std::uint64_t Dataset::fingerprint() const {
  Fnv1a h;
  h.u64(num_rows_);
  for (const Column& c : columns_) {
    h.str(c.name);
    h.str(column_type_name(c.type));
  }
  for (const Column& c : columns_) {
    if (c.type == ColumnType::kContinuous) {
      for (double v : c.numeric) h.u64(std::bit_cast<std::uint64_t>(v));
    } else {
      for (const auto& s : c.labels) h.str(s);
    }
  }
  return h.value();
}

bool parse_double(std::string_view text, double& value) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size() &&
         std::isfinite(value);
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  fields.emplace_back(trim(cur));
  return fields;
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

Dataset read_csv(const std::filesystem::path& path,
                 const IngestOptions& options, IngestReport* report) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line)) {
    throw InputError("'" + path.string() + "' has no header row");
  }
  const std::vector<std::string> header = split_csv_line(line);
  const std::size_t ncol = header.size();

  for (const auto& [name, type] : options.type_hints) {
    if (std::find(header.begin(), header.end(), name) == header.end()) {
      throw InputError("type hint for unknown column '" + name + "'");
    }
  }
  std::vector<bool> used(ncol, options.used_columns.empty());
  for (const auto& name : options.used_columns) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw InputError("'" + path.string() + "' has no column '" + name + "'");
    }
    used[static_cast<std::size_t>(it - header.begin())] = true;
  }

  std::vector<std::vector<std::string>> cells(ncol);
  std::size_t rows_read = 0, dropped = 0, line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != ncol) {
      throw InputError("'" + path.string() + "' line " +
                       std::to_string(line_no) + ": expected " +
                       std::to_string(ncol) + " fields, got " +
                       std::to_string(fields.size()));
    }
    ++rows_read;
    bool missing = false;
    for (std::size_t j = 0; j < ncol; ++j) {
      if (used[j] && is_missing(fields[j])) missing = true;
    }
    if (missing) {
      ++dropped;
      continue;
    }
    for (std::size_t j = 0; j < ncol; ++j) {
      cells[j].push_back(std::move(fields[j]));
    }
  }
  if (report != nullptr) {
    report->rows_read = rows_read;
    report->rows_dropped = dropped;
  }
  if (ncol == 0 || cells[0].empty()) {
    throw InputError("'" + path.string() +
                     "' has no complete rows after dropping missing values");
  }

  Dataset data;
  for (std::size_t j = 0; j < ncol; ++j) {
    std::vector<double> values(cells[j].size());
    bool numeric = true;
    for (std::size_t i = 0; i < cells[j].size() && numeric; ++i) {
      numeric = parse_double(cells[j][i], values[i]);
    }
    const auto hint = options.type_hints.find(header[j]);
    ColumnType type =
        numeric ? ColumnType::kContinuous : ColumnType::kCategorical;
    if (hint != options.type_hints.end()) {
      if (hint->second == ColumnType::kContinuous && !numeric) {
        throw InputError("column '" + header[j] +
                         "' is hinted continuous but holds non-numeric "
                         "values");
      }
      type = hint->second;
    }
    if (type == ColumnType::kContinuous) {
      data.add_continuous(header[j], std::move(values));
    } else {
      data.add_categorical(header[j], std::move(cells[j]));
    }
  }
  return data;
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  const auto& cols = data.columns();
  for (std::size_t j = 0; j < cols.size(); ++j) {
    out << (j ? "," : "") << quote_if_needed(cols[j].name);
  }
  out << '\n';
  for (std::size_t i = 0; i < data.num_rows(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (j) out << ',';
      if (cols[j].type == ColumnType::kContinuous) {
        out << format_double(cols[j].numeric[i]);
      } else {
        out << quote_if_needed(cols[j].labels[i]);
      }
    }
    out << '\n';
  }
  if (!out) throw InputError("error writing '" + path.string() + "'");
}

}  // namespace lssboost
