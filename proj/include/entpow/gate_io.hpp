// Copyright 2026 The entpow Authors
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

#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "entpow/entangling.hpp"

namespace entpow {

// Gate file format:
//   { "d1": 2, "d2": 2, "matrix": [[[re, im], ...], ...] }
// with rows listed in order and entries of each row in column order.

inline nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline nlohmann::json gate_to_json(const UnitaryGate& u) {
  return {{"d1", u.part().d1()}, {"d2", u.part().d2()}, {"matrix", matrix_to_json(u.matrix())}};
}

inline ComplexMatrix matrix_from_json(const nlohmann::json& rows) {
  if (!rows.is_array() || rows.empty()) throw ValidationError("gate file: \"matrix\" must be a non-empty array");
  const std::size_t n_rows = rows.size();
  if (!rows[0].is_array() || rows[0].empty()) throw ValidationError("gate file: matrix row 0 must be a non-empty array");
  const std::size_t n_cols = rows[0].size();
  ComplexMatrix m(static_cast<Eigen::Index>(n_rows), static_cast<Eigen::Index>(n_cols));
  for (std::size_t i = 0; i < n_rows; ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || row.size() != n_cols) {
      throw ValidationError("gate file: matrix row " + std::to_string(i) + " has the wrong length");
    }
    for (std::size_t j = 0; j < n_cols; ++j) {
      const auto& entry = row[j];
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number()) {
        throw ValidationError("gate file: entry (" + std::to_string(i) + "," + std::to_string(j) +
                              ") must be [re, im]");
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          Complex(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  return m;
}

inline UnitaryGate gate_from_json(const nlohmann::json& j, double tol = kStructuralTolerance) {
  if (!j.is_object()) throw ValidationError("gate file: top level must be an object");
  for (const char* key : {"d1", "d2", "matrix"}) {
    if (!j.contains(key)) throw ValidationError(std::string("gate file: missing key \"") + key + "\"");
  }
  if (!j["d1"].is_number_unsigned() || !j["d2"].is_number_unsigned()) {
    throw ValidationError("gate file: d1 and d2 must be positive integers");
  }
  const Bipartition part(j["d1"].get<std::size_t>(), j["d2"].get<std::size_t>());
  if (part.dim() > kDefaultDimensionCap) throw DimensionError("gate file: dimension exceeds cap");
  ComplexMatrix m = matrix_from_json(j["matrix"]);
  if (static_cast<std::size_t>(m.rows()) != part.dim() || static_cast<std::size_t>(m.cols()) != part.dim()) {
    throw ValidationError("gate file: matrix is " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + " but d1*d2 = " + std::to_string(part.dim()));
  }
  return UnitaryGate(std::move(m), part, tol);
}

inline UnitaryGate load_gate(const std::filesystem::path& path, double tol = kStructuralTolerance) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open gate file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("gate file " + path.string() + " is not valid JSON: " + e.what());
  }
  return gate_from_json(j, tol);
}

inline void save_gate(const std::filesystem::path& path, const UnitaryGate& u) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write gate file " + path.string());
  out << gate_to_json(u).dump(1) << '\n';
  if (!out) throw IoError("failed writing gate file " + path.string());
}

}  // namespace entpow
