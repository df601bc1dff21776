#include "heightlab/report.hpp"

#include <cmath>
#include <cstdio>

namespace heightlab {

std::string fmt12(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

Json num12(double x)
{
    if (!std::isfinite(x)) return nullptr;
    return std::stod(fmt12(x));
}

Json make_record(const std::string& command, Json inputs, Json results, Json error_bounds, std::optional<double> runtime_ms)
{
    Json r;
    r["schema_version"] = kSchemaVersion;
    r["command"] = command;
    r["inputs"] = std::move(inputs);
    r["results"] = std::move(results);
    r["error_bounds"] = std::move(error_bounds);
    r["runtime_ms"] = runtime_ms ? num12(*runtime_ms) : Json(nullptr);
    return r;
}

std::vector<std::string> validate_record(const Json& record)
{
    std::vector<std::string> problems;
    if (!record.is_object()) return {"record is not an object"};
    const char* fields[] = {"schema_version", "command", "inputs", "results", "error_bounds", "runtime_ms"};
    for (const char* f : fields)
        if (!record.contains(f)) problems.push_back(std::string("missing field ") + f);
    if (record.size() != std::size(fields)) problems.push_back("unexpected extra fields");
    if (!problems.empty()) return problems;
    if (record["schema_version"] != kSchemaVersion) problems.push_back("schema_version mismatch");
    if (!record["command"].is_string()) problems.push_back("command must be a string");
    if (!record["inputs"].is_object()) problems.push_back("inputs must be an object");
    if (!record["results"].is_object() && !record["results"].is_array()) problems.push_back("results must be an object or array");
    if (!record["error_bounds"].is_object()) problems.push_back("error_bounds must be an object");
    if (!record["runtime_ms"].is_null() && !record["runtime_ms"].is_number()) problems.push_back("runtime_ms must be a number or null");
    return problems;
}

}  // namespace heightlab
