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

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "qkdlab/errors.hpp"
#include "qkdlab/source.hpp"

namespace qkdlab {

namespace {

using nlohmann::json;

constexpr double kFileNormTolerance = 1e-6;

ComplexVector parse_ket(const json& doc, const char* key, Index dim) {
  if (!doc.contains(key)) throw ParseError(std::string("source file is missing \"") + key + "\"");
  const json& entries = doc.at(key);
  if (!entries.is_array()) throw ParseError(std::string("\"") + key + "\" must be an array");
  if (static_cast<Index>(entries.size()) != dim) {
    throw ParseError(std::string("\"") + key + "\" has " + std::to_string(entries.size()) +
                     " amplitudes, expected dim = " + std::to_string(dim));
  }
  ComplexVector ket(dim);
  for (Index i = 0; i < dim; ++i) {
    const json& pair = entries[static_cast<std::size_t>(i)];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw ParseError(std::string("\"") + key + "\" amplitude " + std::to_string(i) +
                       " must be a [re, im] pair of numbers");
    }
    ket(i) = Complex(pair[0].get<double>(), pair[1].get<double>());
  }
  const double norm = ket.norm();
  if (std::abs(norm - 1.0) > kFileNormTolerance) {
    throw ValidationError(std::string("ket \"") + key + "\" has norm " + std::to_string(norm) +
                          ", expected 1");
  }
  if (std::abs(norm - 1.0) > kNormTolerance) ket /= norm;
  return ket;
}

json ket_to_json(const PureState& ket) {
  json out = json::array();
  for (Index i = 0; i < ket.dim(); ++i) {
    out.push_back({ket.amplitudes()(i).real(), ket.amplitudes()(i).imag()});
  }
  return out;
}

}  // namespace

SourceSpec parse_source_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed source JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("source document must be a JSON object");
  if (!doc.contains("dim") || !doc.at("dim").is_number_integer()) {
    throw ParseError("source file needs an integer \"dim\"");
  }
  const auto dim = doc.at("dim").get<long long>();
  if (dim < 2) throw ParseError("source \"dim\" must be >= 2");
  if (!doc.contains("pZ") || !doc.at("pZ").is_number()) {
    throw ParseError("source file needs a numeric \"pZ\"");
  }
  const Index d = static_cast<Index>(dim);
  return SourceSpec(PureState(parse_ket(doc, "alpha", d)), PureState(parse_ket(doc, "alphaPrime", d)),
                    PureState(parse_ket(doc, "beta", d)), PureState(parse_ket(doc, "betaPrime", d)),
                    doc.at("pZ").get<double>());
}

std::string source_to_json(const SourceSpec& src) {
  json doc;
  doc["dim"] = src.dim();
  doc["alpha"] = ket_to_json(src.alpha());
  doc["alphaPrime"] = ket_to_json(src.alphaPrime());
  doc["beta"] = ket_to_json(src.beta());
  doc["betaPrime"] = ket_to_json(src.betaPrime());
  doc["pZ"] = src.pZ();
  return doc.dump(2);
}

SourceSpec load_source(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open source file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_source_json(buffer.str());
}

void save_source(const SourceSpec& src, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write source file " + path.string());
  out << source_to_json(src) << '\n';
}

}  // namespace qkdlab
