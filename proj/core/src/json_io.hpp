#ifndef COMBDIM_SRC_JSON_IO_HPP
#define COMBDIM_SRC_JSON_IO_HPP

// Internal helpers shared by the JSON readers.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "combdim/class_model.hpp"
#include "combdim/errors.hpp"
#include "json.hpp"

namespace combdim::detail {

// Accepts JSON numbers and decimal strings (the form the writers emit).
inline double parse_number(const nlohmann::json& node, const std::string& where) {
  if (node.is_number()) return node.get<double>();
  if (node.is_string()) {
    const auto& text = node.get_ref<const std::string&>();
    double value = 0.0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec == std::errc() && result.ptr == text.data() + text.size()) return value;
    throw ParseError(where + ": cannot parse '" + text + "' as a decimal number");
  }
  throw ParseError(where + ": expected a number or decimal string");
}

inline nlohmann::json parse_document(const std::string& text, const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

inline std::string read_text_file(const std::filesystem::path& path, const std::string& what) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + what + " " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Array of equal-length numeric rows; `cols` = 0 accepts any common length.
inline PointSet parse_rows(const nlohmann::json& rows, std::size_t cols, const std::string& what) {
  if (!rows.is_array() || rows.empty()) throw ParseError(what + ": expected a non-empty array of rows");
  if (cols == 0) {
    if (!rows[0].is_array() || rows[0].empty()) throw ParseError(what + ": row 0 must be a non-empty array");
    cols = rows[0].size();
  }
  std::vector<double> data;
  data.reserve(rows.size() * cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!rows[r].is_array() || rows[r].size() != cols) {
      throw ParseError(what + ": row " + std::to_string(r) + " must have " + std::to_string(cols) + " entries");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      data.push_back(parse_number(rows[r][c], what + " row " + std::to_string(r) + " column " + std::to_string(c)));
    }
  }
  return PointSet(rows.size(), cols, std::move(data));
}

}  // namespace combdim::detail

#endif  // COMBDIM_SRC_JSON_IO_HPP
