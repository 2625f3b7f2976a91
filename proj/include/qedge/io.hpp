// Copyright 2026 The qedge Authors
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


#ifndef QEDGE_IO_HPP_
#define QEDGE_IO_HPP_

#include <string>
#include <vector>

namespace qedge {

// One header row, '.' decimals, LF endings, 17 significant digits.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string format_double(double x);
std::string to_csv(const CsvTable& t);
CsvTable parse_csv(const std::string& text);

void write_file(const std::string& path, const std::string& bytes);
std::string read_file(const std::string& path);
std::string sha256_hex(const std::string& bytes);

// Column layout of every CSV artifact, keyed by schema name.
struct CsvSchema {
  std::string name;
  std::vector<std::string> columns;
  std::string description;
};
const std::vector<CsvSchema>& csv_schemas();
const CsvSchema& csv_schema(const std::string& name);

// Required top-level keys of each JSON summary kind.
struct JsonSchema {
  std::string name;
  std::vector<std::string> keys;
};
const std::vector<JsonSchema>& json_schemas();
const JsonSchema& json_schema(const std::string& name);

}  // namespace qedge

#endif  // QEDGE_IO_HPP_
