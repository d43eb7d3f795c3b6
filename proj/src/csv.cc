// Copyright 2026 The uekit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "uekit/csv.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "uekit/core.h"

namespace ue {
namespace {

bool needs_quotes(const std::string& s) {
  return s.find_first_of(",\"\n\r") != std::string::npos;
}

void put_field(std::ostream& out, const std::string& s) {
  if (!needs_quotes(s)) {
    out << s;
    return;
  }
  out << '"';
  for (char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

std::vector<std::string> split_line(const std::string& line, const std::string& source,
                                    long line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  if (quoted) {
    throw Error(source + ":" + std::to_string(line_no) + ": unterminated quote");
  }
  fields.push_back(std::move(cur));
  return fields;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error("cannot format number");
  return std::string(buf, end);
}

std::string format_maybe(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string(kNa);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error("not a number: '" + s + "'");
  }
  return v;
}

std::optional<double> parse_maybe(const std::string& s) {
  if (s == kNa || s.empty()) return std::nullopt;
  return parse_double(s);
}

CsvWriter::CsvWriter(std::string provenance, std::vector<std::string> header)
    : provenance_(std::move(provenance)), header_(std::move(header)) {}

void CsvWriter::row(std::vector<std::string> fields) {
  if (fields.size() != header_.size()) {
    throw Error("csv row has " + std::to_string(fields.size()) +
                " fields, header has " + std::to_string(header_.size()));
  }
  rows_.push_back(std::move(fields));
}

void CsvWriter::write(std::ostream& out) const {
  out << "# " << provenance_ << '\n';
  auto put_row = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      put_field(out, fields[i]);
    }
    out << '\n';
  };
  put_row(header_);
  for (const auto& r : rows_) put_row(r);
}

void CsvWriter::write(const std::filesystem::path& path) const {
  std::ostringstream buf;
  write(buf);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << buf.str();
  if (!out) throw Error("write failed for " + path.string());
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw Error("csv is missing column '" + name + "'");
}

bool CsvTable::has_column(const std::string& name) const {
  for (const auto& h : header) {
    if (h == name) return true;
  }
  return false;
}

CsvTable read_csv(std::istream& in, const std::string& source) {
  CsvTable table;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      table.comments.push_back(line.size() > 1 && line[1] == ' ' ? line.substr(2)
                                                                  : line.substr(1));
      continue;
    }
    auto fields = split_line(line, source, line_no);
    if (table.header.empty()) {
      table.header = std::move(fields);
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw Error(source + ":" + std::to_string(line_no) + ": expected " +
                  std::to_string(table.header.size()) + " fields, got " +
                  std::to_string(fields.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (table.header.empty()) throw Error(source + ": no header row");
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_csv(in, path.string());
}

}  // namespace ue
