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

#ifndef UEKIT_CSV_H_
#define UEKIT_CSV_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ue {

inline constexpr char kNa[] = "NA";

// Shortest decimal string that reads back to the same double.
std::string format_double(double v);
std::string format_maybe(const std::optional<double>& v);
double parse_double(const std::string& s);
std::optional<double> parse_maybe(const std::string& s);

// Rows are buffered and written in one go so a failed run leaves no
// half-written file behind.
class CsvWriter {
 public:
  CsvWriter(std::string provenance, std::vector<std::string> header);

  void row(std::vector<std::string> fields);
  void write(const std::filesystem::path& path) const;
  void write(std::ostream& out) const;

 private:
  std::string provenance_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct CsvTable {
  std::vector<std::string> comments;  // without the leading '#'
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index by name; throws when the column is missing.
  std::size_t column(const std::string& name) const;
  bool has_column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);
CsvTable read_csv(std::istream& in, const std::string& source = "<stream>");

}  // namespace ue

#endif  // UEKIT_CSV_H_
