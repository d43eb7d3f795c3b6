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

#include "uekit/interchange.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>
#include <utility>

#include "json.hpp"

namespace ue {
namespace {

using json = nlohmann::json;

// Rows already within this distance of 1 are left untouched, so re-reading a
// file this library wrote never changes a bit.
constexpr double kExactSumSlack = 1e-12;

class LineError : public Error {
 public:
  LineError(const std::string& source, long line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what) {}
};

double to_finite(const json& v, const char* field) {
  if (!v.is_number()) {
    throw Error(std::string("field '") + field + "' holds a non-number");
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) {
    throw Error(std::string("field '") + field + "' is NaN or Inf");
  }
  return d;
}

std::vector<double> to_vector(const json& v, const char* field) {
  if (!v.is_array()) {
    throw Error(std::string("field '") + field + "' must be an array");
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(to_finite(x, field));
  return out;
}

std::string format_sum(double s) {
  std::ostringstream os;
  os << s;
  return os.str();
}

void check_probability_row(std::vector<double>& row, const char* field) {
  if (row.size() < 2) {
    throw Error(std::string("field '") + field + "' needs at least 2 classes");
  }
  double sum = 0.0;
  for (double p : row) {
    if (p < 0.0 || p > 1.0 + kProbSumTolerance) {
      throw Error(std::string("field '") + field +
                  "' has an entry outside [0,1]");
    }
    sum += p;
  }
  const double dev = std::fabs(sum - 1.0);
  if (dev > kProbSumTolerance) {
    throw Error("probability sum " + format_sum(sum) + " exceeds tolerance");
  }
  if (dev > kExactSumSlack) {
    for (double& p : row) p /= sum;
  }
}

std::optional<int> optional_int(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) return std::nullopt;
  if (!it->is_number_integer()) {
    throw Error(std::string("header field '") + key + "' must be an integer");
  }
  return it->get<int>();
}

InterchangeHeader parse_header(const json& obj) {
  const auto& schema = obj.at("schema");
  if (!schema.is_string() || schema.get<std::string>() != kSchemaVersion) {
    throw Error("unknown schema version " + schema.dump() + ", expected \"" +
                kSchemaVersion + "\"");
  }
  return InterchangeHeader{optional_int(obj, "C"), optional_int(obj, "T"),
                           optional_int(obj, "D")};
}

PredictionRecord parse_record(const json& obj, bool require_probs) {
  if (!obj.is_object()) throw Error("line is not a JSON object");
  PredictionRecord r;
  const auto& id = obj.at("id");
  r.id = id.is_string() ? id.get<std::string>() : id.dump();
  r.split = obj.at("split").get<std::string>();
  const auto& fold = obj.at("fold");
  if (!fold.is_number_integer() || fold.get<long>() < 0) {
    throw Error("field 'fold' must be a non-negative integer");
  }
  r.fold = fold.get<int>();
  const auto& label = obj.at("label");
  if (!label.is_number_integer() || label.get<long>() < 0) {
    throw Error("field 'label' must be a non-negative integer");
  }
  r.true_label = label.get<int>();

  const bool has_probs = obj.contains("probs");
  if (require_probs || has_probs) {
    r.det_probs = to_vector(obj.at("probs"), "probs");
    check_probability_row(r.det_probs, "probs");
    const auto& passes = obj.at("mc_probs");
    if (!passes.is_array() || passes.empty()) {
      throw Error("field 'mc_probs' must be a non-empty array of rows");
    }
    for (const auto& row : passes) {
      auto p = to_vector(row, "mc_probs");
      if (p.size() != r.det_probs.size()) {
        throw Error("mc_probs row has " + std::to_string(p.size()) +
                    " classes, probs has " +
                    std::to_string(r.det_probs.size()));
      }
      check_probability_row(p, "mc_probs");
      r.mc_probs.push_back(std::move(p));
    }
    if (r.true_label >= r.class_count()) {
      throw Error("label " + std::to_string(r.true_label) +
                  " out of range for " + std::to_string(r.class_count()) +
                  " classes");
    }
  }
  r.embedding = to_vector(obj.at("embedding"), "embedding");
  if (r.embedding.empty()) throw Error("field 'embedding' is empty");
  return r;
}

struct Shape {
  int classes = -1;
  int passes = -1;
  int dim = -1;
};

void check_shape(Shape& shape, const PredictionRecord& r, bool with_probs) {
  auto match = [](int& expected, int got, const char* what) {
    if (expected < 0) {
      expected = got;
    } else if (expected != got) {
      throw Error(std::string("dimension mismatch within split: ") + what +
                  " is " + std::to_string(got) + ", expected " +
                  std::to_string(expected));
    }
  };
  if (with_probs) {
    match(shape.classes, r.class_count(), "C");
    match(shape.passes, r.pass_count(), "T");
  }
  match(shape.dim, r.dim(), "D");
}

void check_header(const InterchangeHeader& h, const PredictionRecord& r,
                  bool with_probs) {
  auto match = [](const std::optional<int>& expected, int got,
                  const char* what) {
    if (expected && *expected != got) {
      throw Error(std::string("record ") + what + " = " +
                  std::to_string(got) + " disagrees with header value " +
                  std::to_string(*expected));
    }
  };
  if (with_probs) {
    match(h.class_count, r.class_count(), "C");
    match(h.pass_count, r.pass_count(), "T");
  }
  match(h.dim, r.dim(), "D");
  if (h.class_count && r.true_label >= *h.class_count) {
    throw Error("label " + std::to_string(r.true_label) +
                " out of range for header C");
  }
}

struct ParsedFile {
  InterchangeHeader header;
  // Keyed by (split, fold); std::map gives the sorted output order.
  std::map<std::pair<std::string, int>, std::vector<PredictionRecord>> groups;
};

ParsedFile parse_stream(std::istream& in, const std::string& source,
                        bool require_probs) {
  ParsedFile parsed;
  std::map<std::string, Shape> shapes;
  std::set<std::tuple<std::string, int, std::string>> seen_ids;
  std::string line;
  long line_no = 0;
  bool any_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json obj;
      try {
        obj = json::parse(line);
      } catch (const json::parse_error& e) {
        throw Error(std::string("malformed JSON: ") + e.what());
      }
      if (obj.is_object() && obj.contains("schema")) {
        if (any_content) throw Error("header must be the first line");
        parsed.header = parse_header(obj);
        any_content = true;
        continue;
      }
      any_content = true;
      PredictionRecord r = parse_record(obj, require_probs);
      const bool with_probs = !r.det_probs.empty();
      check_header(parsed.header, r, with_probs);
      check_shape(shapes[r.split], r, with_probs);
      if (!seen_ids.emplace(r.split, r.fold, r.id).second) {
        throw Error("duplicate id '" + r.id + "' in split " + r.split +
                    " fold " + std::to_string(r.fold));
      }
      parsed.groups[{r.split, r.fold}].push_back(std::move(r));
    } catch (const LineError&) {
      throw;
    } catch (const json::exception& e) {
      throw LineError(source, line_no, std::string("malformed record: ") +
                                           e.what());
    } catch (const Error& e) {
      throw LineError(source, line_no, e.what());
    }
  }
  return parsed;
}

}  // namespace

std::vector<EvalSplit> read_records(std::istream& in,
                                    const std::string& source) {
  ParsedFile parsed = parse_stream(in, source, /*require_probs=*/true);
  std::vector<EvalSplit> out;
  for (auto& [key, records] : parsed.groups) {
    EvalSplit s;
    s.split = key.first;
    s.fold = key.second;
    s.class_count = records.front().class_count();
    s.records = std::move(records);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<EvalSplit> load_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_records(in, path.string());
}

std::vector<TrainingSet> read_training(std::istream& in,
                                       const std::string& source) {
  ParsedFile parsed = parse_stream(in, source, /*require_probs=*/false);
  std::map<std::string, int> max_label;
  for (const auto& [key, records] : parsed.groups) {
    int& m = max_label[key.first];
    for (const auto& r : records) m = std::max(m, r.true_label);
  }
  std::vector<TrainingSet> out;
  for (auto& [key, records] : parsed.groups) {
    TrainingSet t;
    t.split = key.first;
    t.fold = key.second;
    if (parsed.header.class_count) {
      t.class_count = *parsed.header.class_count;
    } else if (!records.front().det_probs.empty()) {
      t.class_count = records.front().class_count();
    } else {
      t.class_count = max_label[key.first] + 1;
    }
    for (auto& r : records) {
      t.labels.push_back(r.true_label);
      t.embeddings.push_back(std::move(r.embedding));
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<TrainingSet> load_training(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_training(in, path.string());
}

void write_header(std::ostream& out, const InterchangeHeader& header) {
  nlohmann::ordered_json obj;
  obj["schema"] = kSchemaVersion;
  if (header.class_count) obj["C"] = *header.class_count;
  if (header.pass_count) obj["T"] = *header.pass_count;
  if (header.dim) obj["D"] = *header.dim;
  out << obj.dump() << '\n';
}

namespace {

nlohmann::ordered_json base_object(const PredictionRecord& r) {
  nlohmann::ordered_json obj;
  obj["id"] = r.id;
  obj["split"] = r.split;
  obj["fold"] = r.fold;
  obj["label"] = r.true_label;
  return obj;
}

}  // namespace

void write_record(std::ostream& out, const PredictionRecord& record) {
  auto obj = base_object(record);
  obj["probs"] = record.det_probs;
  obj["mc_probs"] = record.mc_probs;
  obj["embedding"] = record.embedding;
  out << obj.dump() << '\n';
}

void write_training_record(std::ostream& out, const PredictionRecord& record) {
  auto obj = base_object(record);
  obj["embedding"] = record.embedding;
  out << obj.dump() << '\n';
}

}  // namespace ue
