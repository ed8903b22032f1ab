#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "evsp/instance.hpp"

namespace evsp::json_util {

using Json = nlohmann::ordered_json;

Json parse(std::string_view text);

const Json& require(const Json& obj, const char* key);
const Json& require_array(const Json& obj, const char* key);
std::string require_string(const Json& obj, const char* key);
std::int64_t require_int(const Json& obj, const char* key);
double require_number(const Json& obj, const char* key);
bool require_bool(const Json& obj, const char* key);
Minutes require_time(const Json& obj, const char* key);

/// Watt-minutes to kWh, rounded to 1e-9 so that parse/dump round-trips.
Json kwh(double watt_minutes);
/// Integer, decimal number, or "p/q" string for non-terminating fractions.
Json time_value(const Minutes& t);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace evsp::json_util
