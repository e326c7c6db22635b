#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "fairnav/error.hpp"
#include "fairnav/grid.hpp"
#include "json.hpp"

namespace fairnav::detail {

using Json = nlohmann::ordered_json;

inline std::string child(std::string_view path, std::string_view key) {
  if (path.empty()) return std::string(key);
  return std::string(path) + "." + std::string(key);
}

inline std::string item(std::string_view path, std::size_t i) {
  return std::string(path) + "[" + std::to_string(i) + "]";
}

inline const Json& field(const Json& obj, std::string_view key, std::string_view path) {
  if (!obj.is_object()) throw ParseError(std::string(path.empty() ? "document" : path) + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(child(path, key) + ": missing field");
  return *it;
}

inline const Json* optional_field(const Json& obj, std::string_view key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

inline std::int64_t as_int(const Json& v, const std::string& path) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::fabs(d) < 9e15) return static_cast<std::int64_t>(d);
  }
  throw ParseError(path + ": expected an integer");
}

inline double as_double(const Json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError(path + ": expected a number");
  return v.get<double>();
}

inline bool as_bool(const Json& v, const std::string& path) {
  if (!v.is_boolean()) throw ParseError(path + ": expected a boolean");
  return v.get<bool>();
}

inline const std::string& as_string(const Json& v, const std::string& path) {
  if (!v.is_string()) throw ParseError(path + ": expected a string");
  return v.get_ref<const std::string&>();
}

inline const Json& as_array(const Json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError(path + ": expected an array");
  return v;
}

inline Coord as_coord(const Json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) throw ParseError(path + ": expected [x, y]");
  return {static_cast<int>(as_int(v[0], item(path, 0))), static_cast<int>(as_int(v[1], item(path, 1)))};
}

inline Json coord_json(Coord c) { return Json::array({c.x, c.y}); }

inline Json parse_document(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace fairnav::detail
