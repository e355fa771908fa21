#pragma once

// Matrix literals in model files: a JSON array of rows, with -inf spelled "-inf".

#include <string>
#include <vector>

#include <json.hpp>

#include "mpx/algebra.hpp"

namespace mpx {

inline double extended_real_from_json(const nlohmann::json& v) {
  if (v.is_string()) {
    if (v.get<std::string>() == "-inf") return kNegInf;
    throw ValidationError("matrix entry string must be \"-inf\", got \"" +
                          v.get<std::string>() + "\"");
  }
  if (!v.is_number()) throw ValidationError("matrix entry must be a number or \"-inf\"");
  return v.get<double>();
}

inline nlohmann::json extended_real_to_json(double v) {
  if (is_null(v)) return "-inf";
  return v;
}

inline MaxPlusMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("matrix must be a non-empty array of rows");
  const std::size_t d = j.size();
  std::vector<double> entries;
  entries.reserve(d * d);
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != d)
      throw DimensionError("matrix must be square: expected rows of length " + std::to_string(d));
    for (const auto& v : row) entries.push_back(extended_real_from_json(v));
  }
  return MaxPlusMatrix(d, std::move(entries));
}

inline nlohmann::json matrix_to_json(const MaxPlusMatrix& a) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < a.dim(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < a.dim(); ++j) row.push_back(extended_real_to_json(a(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace mpx
