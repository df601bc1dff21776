#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace heightlab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "heightlab-report/1";

// A double rounded to 12 significant digits, or null when not finite.
Json num12(double x);
std::string fmt12(double x);

// {schema_version, command, inputs, results, error_bounds, runtime_ms}
Json make_record(const std::string& command, Json inputs, Json results, Json error_bounds, std::optional<double> runtime_ms);

// Problems found in a record; empty when it matches the schema.
std::vector<std::string> validate_record(const Json& record);

}  // namespace heightlab
