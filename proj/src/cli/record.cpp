#include "hmt/record.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

#include "hmt/run_record_schema.hpp"

namespace hmt {

using nlohmann::json;

const json& run_record_schema() {
    static const json schema = json::parse(detail::run_record_schema_text);
    return schema;
}

namespace {

bool has_type(const json& v, const std::string& type) {
    if (type == "object") return v.is_object();
    if (type == "array") return v.is_array();
    if (type == "string") return v.is_string();
    if (type == "boolean") return v.is_boolean();
    if (type == "null") return v.is_null();
    if (type == "integer") return v.is_number_integer();
    if (type == "number") return v.is_number();
    return false;
}

void validate_at(const json& v, const json& s, const std::string& path, std::vector<std::string>& errors) {
    if (s.is_boolean()) {
        if (!s.get<bool>()) errors.push_back(path + ": not allowed");
        return;
    }
    if (auto it = s.find("const"); it != s.end() && v != *it) errors.push_back(path + ": expected " + it->dump());
    if (auto it = s.find("enum"); it != s.end()) {
        bool found = false;
        for (const auto& option : *it) found = found || option == v;
        if (!found) errors.push_back(path + ": value " + v.dump() + " not in enum");
    }
    if (auto it = s.find("type"); it != s.end()) {
        bool ok = false;
        if (it->is_string()) {
            ok = has_type(v, it->get<std::string>());
        } else {
            for (const auto& t : *it) ok = ok || has_type(v, t.get<std::string>());
        }
        if (!ok) {
            errors.push_back(path + ": expected type " + it->dump());
            return;
        }
    }
    if (auto it = s.find("minimum"); it != s.end() && v.is_number() && v.get<double>() < it->get<double>())
        errors.push_back(path + ": below minimum " + it->dump());
    if (auto it = s.find("minLength"); it != s.end() && v.is_string() && v.get<std::string>().size() < it->get<std::size_t>())
        errors.push_back(path + ": shorter than " + it->dump());
    if (auto it = s.find("items"); it != s.end() && v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) validate_at(v[i], *it, path + "[" + std::to_string(i) + "]", errors);
    }
    if (!v.is_object()) return;
    if (auto it = s.find("required"); it != s.end()) {
        for (const auto& key : *it)
            if (!v.contains(key.get<std::string>())) errors.push_back(path + ": missing " + key.get<std::string>());
    }
    const json* props = s.contains("properties") ? &s["properties"] : nullptr;
    const json* extra = s.contains("additionalProperties") ? &s["additionalProperties"] : nullptr;
    for (const auto& [key, child] : v.items()) {
        const std::string sub = path + "." + key;
        if (props && props->contains(key))
            validate_at(child, (*props)[key], sub, errors);
        else if (extra)
            validate_at(child, *extra, sub, errors);
    }
}

// Replaces non-finite numbers so the output stays valid JSON.
json sanitized(const json& j) {
    if (j.is_number_float() && !std::isfinite(j.get<double>())) return nullptr;
    if (j.is_structured()) {
        json out = j;
        for (auto it = out.begin(); it != out.end(); ++it) *it = sanitized(*it);
        return out;
    }
    return j;
}

}  // namespace

std::vector<std::string> validate_json(const json& value, const json& schema) {
    std::vector<std::string> errors;
    validate_at(value, schema, "$", errors);
    return errors;
}

json RunRecord::to_json() const {
    json j;
    j["schema"] = record_schema_id;
    j["artifact_version"] = artifact_version;
    j["command"] = command;
    j["parameters"] = parameters;
    j["outputs"] = outputs;
    if (timestamps)
        j["timestamps"] = {{"started", timestamps->started}, {"finished", timestamps->finished}};
    else
        j["timestamps"] = nullptr;
    return sanitized(j);
}

std::string utc_now() {
    std::time_t t;
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"))
        t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    else
        t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                       tm.tm_min, tm.tm_sec);
}

std::string dump_record(const json& j) { return sanitized(j).dump(2) + "\n"; }

void write_record(const RunRecord& rec, const std::string& path) {
    const json j = rec.to_json();
    const auto errors = validate_json(j, run_record_schema());
    if (!errors.empty()) throw std::runtime_error("run record violates schema: " + errors.front());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << dump_record(j);
    if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace hmt
