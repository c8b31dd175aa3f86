#pragma once

#include <charconv>
#include <cstdio>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "latinlab/error.hpp"

namespace latinlab {

class UsageError : public Error {
public:
    using Error::Error;
};

/// Everything a run depends on. Unset optionals take the command's default.
struct ExperimentConfig {
    std::string command;
    int n = 0;
    int k = 0;
    std::uint64_t seed = 1;
    std::uint64_t samples = 0;
    std::optional<std::uint64_t> burn_in; // default n^3
    std::optional<std::uint64_t> thin;    // default n^3
    unsigned workers = 1;
    std::string out;
    std::string format = "csv";
    std::optional<std::uint64_t> budget;
    std::string input;
    std::string strategy = "uniform-element";
    std::uint64_t boxes = 1000;
    std::uint64_t m = 1000;
    std::uint64_t trials = 100;
    int n_max = 0;
    std::optional<int> d;                 // bounds: every d when unset
    int cap = 0;                          // twist cap; 0 means n
    std::vector<double> epsilon{0.1, 0.2, 0.3, 0.5};
    bool exact = false;
    bool reduced = false;
    bool long_run = false;
    std::string checkpoint;
    std::uint64_t max_units = 0;          // 0: no limit
    bool inject_fault = false;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& text, const std::string& where) {
    T value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if constexpr (std::is_floating_point_v<T>) {
        // from_chars for double is missing on some toolchains; strtod is locale
        // dependent only for the decimal point, and the C locale is used.
        char* end = nullptr;
        value = static_cast<T>(std::strtod(text.c_str(), &end));
        if (text.empty() || end != text.c_str() + text.size()) throw UsageError(where + ": not a number: '" + text + "'");
    } else {
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last || value < T{}) throw UsageError(where + ": not a nonnegative integer: '" + text + "'");
    }
    return value;
}

inline bool parse_bool(const std::string& text, const std::string& where) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw UsageError(where + ": not a boolean: '" + text + "'");
}

inline std::string join_doubles(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v[i]);
        s += (i ? "," : "");
        s += buf;
    }
    return s;
}

struct ConfigField {
    std::function<std::optional<std::string>(const ExperimentConfig&)> get; // nullopt: leave the key out
    std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
};

template <class T>
ConfigField number_field(T ExperimentConfig::*member) {
    return {[member](const ExperimentConfig& c) -> std::optional<std::string> { return std::to_string(c.*member); },
            [member](ExperimentConfig& c, const std::string& v, const std::string& where) { c.*member = parse_number<T>(v, where); }};
}

template <class T>
ConfigField optional_field(std::optional<T> ExperimentConfig::*member) {
    return {[member](const ExperimentConfig& c) -> std::optional<std::string> {
                if (!(c.*member)) return std::nullopt;
                return std::to_string(*(c.*member));
            },
            [member](ExperimentConfig& c, const std::string& v, const std::string& where) { c.*member = parse_number<T>(v, where); }};
}

inline ConfigField string_field(std::string ExperimentConfig::*member) {
    return {[member](const ExperimentConfig& c) -> std::optional<std::string> { return c.*member; },
            [member](ExperimentConfig& c, const std::string& v, const std::string&) { c.*member = v; }};
}

inline ConfigField bool_field(bool ExperimentConfig::*member) {
    return {[member](const ExperimentConfig& c) -> std::optional<std::string> { return c.*member ? "true" : "false"; },
            [member](ExperimentConfig& c, const std::string& v, const std::string& where) { c.*member = parse_bool(v, where); }};
}

inline const std::map<std::string, ConfigField>& config_fields() {
    static const std::map<std::string, ConfigField> fields = [] {
        std::map<std::string, ConfigField> f;
        f["command"] = string_field(&ExperimentConfig::command);
        f["n"] = number_field(&ExperimentConfig::n);
        f["k"] = number_field(&ExperimentConfig::k);
        f["seed"] = number_field(&ExperimentConfig::seed);
        f["samples"] = number_field(&ExperimentConfig::samples);
        f["burn_in"] = optional_field(&ExperimentConfig::burn_in);
        f["thin"] = optional_field(&ExperimentConfig::thin);
        f["workers"] = number_field(&ExperimentConfig::workers);
        f["out"] = string_field(&ExperimentConfig::out);
        f["format"] = string_field(&ExperimentConfig::format);
        f["budget"] = optional_field(&ExperimentConfig::budget);
        f["input"] = string_field(&ExperimentConfig::input);
        f["strategy"] = string_field(&ExperimentConfig::strategy);
        f["boxes"] = number_field(&ExperimentConfig::boxes);
        f["m"] = number_field(&ExperimentConfig::m);
        f["trials"] = number_field(&ExperimentConfig::trials);
        f["n_max"] = number_field(&ExperimentConfig::n_max);
        f["d"] = optional_field(&ExperimentConfig::d);
        f["cap"] = number_field(&ExperimentConfig::cap);
        f["epsilon"] = {[](const ExperimentConfig& c) -> std::optional<std::string> { return join_doubles(c.epsilon); },
                        [](ExperimentConfig& c, const std::string& v, const std::string& where) {
                            c.epsilon.clear();
                            std::stringstream ss(v);
                            std::string part;
                            while (std::getline(ss, part, ',')) c.epsilon.push_back(parse_number<double>(trim(part), where));
                        }};
        f["exact"] = bool_field(&ExperimentConfig::exact);
        f["reduced"] = bool_field(&ExperimentConfig::reduced);
        f["long_run"] = bool_field(&ExperimentConfig::long_run);
        f["checkpoint"] = string_field(&ExperimentConfig::checkpoint);
        f["max_units"] = number_field(&ExperimentConfig::max_units);
        f["inject_fault"] = bool_field(&ExperimentConfig::inject_fault);
        return f;
    }();
    return fields;
}

} // namespace detail

/// Config file format: one "key = value" per line, '#' starts a comment,
/// blank lines ignored, lists comma separated, booleans true/false. Keys are
/// the ExperimentConfig member names. Absent keys keep their defaults.
inline void apply_config_text(ExperimentConfig& cfg, std::string_view text, const std::string& source = "config") {
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = detail::trim(raw.substr(0, hash));
        if (line.empty()) continue;
        const std::string where = source + ":" + std::to_string(line_no);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError(where + ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        const auto& fields = detail::config_fields();
        auto it = fields.find(key);
        if (it == fields.end()) throw UsageError(where + ": unknown key '" + key + "'");
        it->second.set(cfg, value, where);
    }
}

inline ExperimentConfig parse_config(std::string_view text, const std::string& source = "config") {
    ExperimentConfig cfg;
    apply_config_text(cfg, text, source);
    return cfg;
}

inline void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read config file " + path);
    std::ostringstream s;
    s << in.rdbuf();
    apply_config_text(cfg, s.str(), path);
}

/// Every key in name order; unset optionals are left out.
inline std::string to_config_text(const ExperimentConfig& cfg) {
    std::string out;
    for (const auto& [key, field] : detail::config_fields()) {
        if (auto v = field.get(cfg)) out += key + " = " + *v + "\n";
    }
    return out;
}

inline nlohmann::ordered_json to_json(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [key, field] : detail::config_fields()) {
        if (auto v = field.get(cfg)) j[key] = *v;
    }
    return j;
}

/// The node budget: the config value if set, else LATINLAB_BUDGET, else `fallback`.
inline std::uint64_t effective_budget(const ExperimentConfig& cfg, std::uint64_t fallback) {
    if (cfg.budget) return *cfg.budget;
    if (const char* env = std::getenv("LATINLAB_BUDGET"); env && *env) return detail::parse_number<std::uint64_t>(env, "LATINLAB_BUDGET");
    return fallback;
}

} // namespace latinlab
