#include "json_util.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace evsp::json_util {

Json parse(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

const Json& require(const Json& obj, const char* key) {
  if (!obj.is_object()) throw ParseError(std::string("expected an object holding '") + key + "'");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

const Json& require_array(const Json& obj, const char* key) {
  const auto& v = require(obj, key);
  if (!v.is_array()) throw ParseError(std::string("field '") + key + "' must be an array");
  return v;
}

std::string require_string(const Json& obj, const char* key) {
  const auto& v = require(obj, key);
  if (!v.is_string()) throw ParseError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::int64_t require_int(const Json& obj, const char* key) {
  const auto& v = require(obj, key);
  if (!v.is_number_integer()) throw ParseError(std::string("field '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

double require_number(const Json& obj, const char* key) {
  const auto& v = require(obj, key);
  if (!v.is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

bool require_bool(const Json& obj, const char* key) {
  const auto& v = require(obj, key);
  if (!v.is_boolean()) throw ParseError(std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

Minutes require_time(const Json& obj, const char* key) {
  const auto& v = require(obj, key);
  try {
    if (v.is_number_integer()) return Minutes(v.get<std::int64_t>());
    // The serialiser prints the shortest decimal that round-trips, which is
    // the literal the author wrote.
    if (v.is_number_float()) return Minutes::parse(v.dump());
    if (v.is_string()) return Minutes::parse(v.get<std::string>());
  } catch (const std::exception& e) {
    throw ParseError(std::string("field '") + key + "': " + e.what());
  }
  throw ParseError(std::string("field '") + key + "' must be a time in minutes");
}

Json kwh(double watt_minutes) {
  const double v = std::round(watt_minutes / kWattMinutesPerKwh * 1e9) / 1e9;
  if (v == std::floor(v) && std::abs(v) < 1e15) return Json(static_cast<std::int64_t>(v));
  return Json(v);
}

Json time_value(const Minutes& t) {
  if (t.is_integer()) return Json(t.numerator());
  if (t.has_finite_decimal()) return Json::parse(t.to_string());
  return Json(t.to_string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace evsp::json_util
