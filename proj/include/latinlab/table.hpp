#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "latinlab/error.hpp"

namespace latinlab {

/// Rows of typed cells written as CSV (header always, '.' decimals, '\n'
/// line ends) or as a JSON array of objects with the same keys and order.
class Table {
public:
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    const std::vector<std::string>& columns() const noexcept { return columns_; }
    const std::vector<std::vector<nlohmann::json>>& rows() const noexcept { return rows_; }
    std::size_t size() const noexcept { return rows_.size(); }

    void add(std::vector<nlohmann::json> row) {
        if (row.size() != columns_.size()) throw Error("table row has " + std::to_string(row.size()) + " cells, expected " + std::to_string(columns_.size()));
        rows_.push_back(std::move(row));
    }

    static std::string format_cell(const nlohmann::json& v) {
        if (v.is_null()) return "";
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_number_integer()) return v.dump();
        if (v.is_number_float()) {
            const double d = v.get<double>();
            if (std::isnan(d)) return "nan";
            if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.12g", d);
            return buf;
        }
        if (v.is_string()) return quote(v.get<std::string>());
        return quote(v.dump());
    }

    void write_csv(std::ostream& out) const {
        for (std::size_t c = 0; c < columns_.size(); ++c) out << (c ? "," : "") << quote(columns_[c]);
        out << '\n';
        for (const auto& row : rows_) {
            for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_cell(row[c]);
            out << '\n';
        }
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& row : rows_) {
            nlohmann::ordered_json obj = nlohmann::ordered_json::object();
            for (std::size_t c = 0; c < row.size(); ++c) {
                const auto& v = row[c];
                // Non-finite doubles have no JSON spelling; keep the CSV text.
                if (v.is_number_float() && !std::isfinite(v.get<double>())) obj[columns_[c]] = format_cell(v);
                else obj[columns_[c]] = v;
            }
            arr.push_back(std::move(obj));
        }
        return arr;
    }

    void write_json(std::ostream& out) const { out << to_json().dump(2) << '\n'; }

    std::string render(const std::string& format) const {
        std::ostringstream s;
        if (format == "json") write_json(s);
        else write_csv(s);
        return s.str();
    }

private:
    static std::string quote(const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) {
            if (ch == '"') q += '"';
            q += ch;
        }
        return q + '"';
    }

    std::vector<std::string> columns_;
    std::vector<std::vector<nlohmann::json>> rows_;
};

/// Writes `content` to a temporary sibling and renames it over `path`.
inline void write_file_atomically(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp);
        out << content;
        if (!out) throw Error("write failed for " + tmp);
    }
    std::filesystem::rename(tmp, target);
}

} // namespace latinlab
