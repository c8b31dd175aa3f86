#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "latinlab/config.hpp"
#include "latinlab/rng.hpp"
#include "latinlab/table.hpp"

namespace latinlab {

inline constexpr const char* tool_version = "0.1.0";

/// Written next to every output file as <out>.manifest.json. Only
/// wall_time_seconds differs between repeated runs of one config.
struct RunManifest {
    std::string command;
    ExperimentConfig config;
    double wall_time_seconds = 0;
    std::string output_path;
    std::size_t output_bytes = 0;
    std::size_t output_rows = 0;
    int exit_code = 0;
    nlohmann::ordered_json summary = nlohmann::ordered_json::object();

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["schema"] = "latinlab-run-manifest/1";
        j["tool"] = "latinlab";
        j["tool_version"] = tool_version;
        j["command"] = command;
        j["rng"] = std::string(Rng::name);
        j["log_base"] = "e";
        j["config"] = latinlab::to_json(config);
        j["wall_time_seconds"] = wall_time_seconds;
        j["output"] = {{"path", output_path}, {"bytes", output_bytes}, {"rows", output_rows}, {"format", config.format}};
        j["exit_code"] = exit_code;
        j["summary"] = summary;
        return j;
    }
};

inline std::string manifest_path_for(const std::string& output_path) { return output_path + ".manifest.json"; }

/// Schema check; returns one message per problem (empty when valid).
inline std::vector<std::string> validate_manifest(const nlohmann::json& j) {
    std::vector<std::string> problems;
    if (!j.is_object()) return {"manifest is not an object"};
    auto need = [&](const char* key, auto&& test, const char* type) {
        if (!j.contains(key)) problems.push_back(std::string("missing key '") + key + "'");
        else if (!test(j.at(key))) problems.push_back(std::string("key '") + key + "' is not " + type);
    };
    auto is_string = [](const nlohmann::json& v) { return v.is_string(); };
    auto is_object = [](const nlohmann::json& v) { return v.is_object(); };
    need("schema", is_string, "a string");
    need("tool", is_string, "a string");
    need("tool_version", is_string, "a string");
    need("command", is_string, "a string");
    need("rng", is_string, "a string");
    need("log_base", is_string, "a string");
    need("config", is_object, "an object");
    need("wall_time_seconds", [](const nlohmann::json& v) { return v.is_number() && v.get<double>() >= 0; }, "a nonnegative number");
    need("output", is_object, "an object");
    need("exit_code", [](const nlohmann::json& v) { return v.is_number_integer() && v.get<int>() >= 0 && v.get<int>() <= 3; }, "an exit code 0..3");
    need("summary", is_object, "an object");
    if (!problems.empty()) return problems;
    if (j.at("schema") != "latinlab-run-manifest/1") problems.push_back("unknown schema " + j.at("schema").dump());
    const auto& out = j.at("output");
    for (const char* key : {"path", "format"}) {
        if (!out.contains(key) || !out.at(key).is_string()) problems.push_back(std::string("output.") + key + " must be a string");
    }
    for (const char* key : {"bytes", "rows"}) {
        if (!out.contains(key) || !out.at(key).is_number_unsigned()) problems.push_back(std::string("output.") + key + " must be a nonnegative integer");
    }
    for (const auto& [key, value] : j.at("config").items()) {
        if (!value.is_string()) problems.push_back("config." + key + " must be a string");
    }
    if (j.at("config").value("command", "") != j.at("command").get<std::string>()) problems.push_back("config.command differs from command");
    return problems;
}

} // namespace latinlab
