// Copyright 2026 The qkdlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "qkdlab/attack.hpp"
#include "qkdlab/errors.hpp"

namespace qkdlab {

using nlohmann::json;

AttackIsometry parse_attack_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed attack JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("attack document must be a JSON object");
  for (const char* key : {"dimB", "dimE"}) {
    if (!doc.contains(key) || !doc.at(key).is_number_integer() || doc.at(key).get<long long>() < 1) {
      throw ParseError(std::string("attack file needs a positive integer \"") + key + "\"");
    }
  }
  const BipartiteLabel label(static_cast<Index>(doc.at("dimB").get<long long>()),
                             static_cast<Index>(doc.at("dimE").get<long long>()));
  if (!doc.contains("matrix") || !doc.at("matrix").is_array()) {
    throw ParseError("attack file needs a \"matrix\" array of rows");
  }
  const json& rows = doc.at("matrix");
  if (static_cast<Index>(rows.size()) != label.total()) {
    throw DimensionError("attack matrix has " + std::to_string(rows.size()) +
                         " rows, expected dimB * dimE = " + std::to_string(label.total()));
  }
  if (rows.empty() || !rows[0].is_array() || rows[0].empty()) {
    throw ParseError("attack matrix rows must be non-empty arrays");
  }
  const auto cols = static_cast<Index>(rows[0].size());
  ComplexMatrix m(label.total(), cols);
  for (Index r = 0; r < label.total(); ++r) {
    const json& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw ParseError("attack matrix row " + std::to_string(r) + " has the wrong length");
    }
    for (Index c = 0; c < cols; ++c) {
      const json& pair = row[static_cast<std::size_t>(c)];
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
        throw ParseError("attack matrix entry (" + std::to_string(r) + ", " + std::to_string(c) +
                         ") must be a [re, im] pair of numbers");
      }
      m(r, c) = Complex(pair[0].get<double>(), pair[1].get<double>());
    }
  }
  return AttackIsometry(m, label);
}

std::string attack_to_json(const AttackIsometry& attack) {
  json rows = json::array();
  const ComplexMatrix& m = attack.matrix();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  json doc;
  doc["dimB"] = attack.label().dimB();
  doc["dimE"] = attack.label().dimE();
  doc["matrix"] = std::move(rows);
  return doc.dump(2);
}

AttackIsometry load_attack(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open attack file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_attack_json(buffer.str());
}

void save_attack(const AttackIsometry& attack, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write attack file " + path.string());
  out << attack_to_json(attack) << '\n';
}

}  // namespace qkdlab
