#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace hmt {

inline constexpr const char* artifact_version = "0.1.0";
inline constexpr const char* record_schema_id = "hmt/run_record/v1";

/// The run-record schema shipped in schemas/, compiled in.
const nlohmann::json& run_record_schema();

/// Validates against the subset of JSON Schema used by the shipped schema:
/// type, const, enum, required, properties, additionalProperties, minimum,
/// minLength, items.  Returns one message per violation.
std::vector<std::string> validate_json(const nlohmann::json& value, const nlohmann::json& schema);

struct Timestamps {
    std::string started;
    std::string finished;
};

/// One self-describing result: command, full parameter set, scalar outputs.
struct RunRecord {
    std::string command;
    nlohmann::json parameters = nlohmann::json::object();
    nlohmann::json outputs = nlohmann::json::object();
    std::optional<Timestamps> timestamps;

    nlohmann::json to_json() const;
};

/// ISO-8601 UTC.  Honors SOURCE_DATE_EPOCH when set.
std::string utc_now();

/// Serializes with a trailing newline.  Non-finite doubles become null.
std::string dump_record(const nlohmann::json& j);

/// Writes the record after validating it; throws std::runtime_error on
/// schema violations or I/O failure.
void write_record(const RunRecord& rec, const std::string& path);

}  // namespace hmt
