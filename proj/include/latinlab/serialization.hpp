#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "latinlab/latin_square.hpp"

namespace latinlab {

namespace detail {

inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        auto line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    while (!lines.empty() && lines.back().find_first_not_of(" \t") == std::string_view::npos) lines.pop_back();
    return lines;
}

inline std::vector<long long> split_ints(std::string_view line, int row_for_errors) {
    std::vector<long long> out;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
        if (pos >= line.size()) break;
        long long value = 0;
        const auto* begin = line.data() + pos;
        const auto [ptr, ec] = std::from_chars(begin, line.data() + line.size(), value);
        if (ec != std::errc() || (ptr != line.data() + line.size() && *ptr != ' ' && *ptr != '\t')) {
            throw SymbolError("not an integer: '" + std::string(line.substr(pos, line.find_first_of(" \t", pos) - pos)) + "'",
                              row_for_errors, static_cast<int>(out.size()) + 1);
        }
        out.push_back(value);
        pos = static_cast<std::size_t>(ptr - line.data());
    }
    return out;
}

inline LatinRectangle from_external_rows(int k, int n, const std::vector<std::vector<long long>>& rows) {
    if (n < 1) throw ShapeError("order must be at least 1", 1, 1);
    if (k < 1 || k > n) throw ShapeError("row count " + std::to_string(k) + " outside 1.." + std::to_string(n), 1, 1);
    if (static_cast<int>(rows.size()) != k) {
        throw ShapeError("expected " + std::to_string(k) + " rows, found " + std::to_string(rows.size()),
                         static_cast<int>(std::min<std::size_t>(rows.size(), static_cast<std::size_t>(k))) + 1, 1);
    }
    std::vector<int> cells;
    cells.reserve(static_cast<std::size_t>(k) * static_cast<std::size_t>(n));
    for (int i = 0; i < k; ++i) {
        const auto& r = rows[static_cast<std::size_t>(i)];
        if (static_cast<int>(r.size()) != n) {
            throw ShapeError("ragged row: expected " + std::to_string(n) + " entries, found " + std::to_string(r.size()), i + 1,
                             static_cast<int>(std::min<std::size_t>(r.size(), static_cast<std::size_t>(n))) + 1);
        }
        for (int x = 0; x < n; ++x) {
            const long long v = r[static_cast<std::size_t>(x)];
            if (v < 1 || v > n) throw SymbolError("symbol " + std::to_string(v) + " outside 1.." + std::to_string(n), i + 1, x + 1);
            cells.push_back(static_cast<int>(v - 1));
        }
    }
    return LatinRectangle::from_cells(k, n, std::move(cells));
}

} // namespace detail

/// Text format: a header line "k n" (or "n" alone for a square), then k lines
/// of n space-separated symbols in 1..n.
inline LatinRectangle parse_rectangle(std::string_view text) {
    const auto lines = detail::split_lines(text);
    if (lines.empty()) throw ShapeError("empty input", 1, 1);
    const auto header = detail::split_ints(lines.front(), 0);
    if (header.empty() || header.size() > 2) throw ShapeError("header must be \"n\" or \"k n\"", 0, 1);
    const long long n = header.back();
    const long long k = header.size() == 2 ? header.front() : n;
    if (n < 1 || n > 65535) throw ShapeError("order " + std::to_string(n) + " out of range", 0, 1);
    std::vector<std::vector<long long>> rows;
    for (std::size_t l = 1; l < lines.size(); ++l) rows.push_back(detail::split_ints(lines[l], static_cast<int>(l)));
    return detail::from_external_rows(static_cast<int>(k), static_cast<int>(n), rows);
}

inline LatinSquare parse_square(std::string_view text) { return LatinSquare(parse_rectangle(text)); }

/// Canonical text: "n" header for squares, "k n" otherwise; single spaces,
/// every line ends in '\n', no trailing whitespace.
inline std::string to_text(const LatinRectangle& L) {
    std::string out = L.is_square() ? std::to_string(L.order()) : std::to_string(L.rows()) + " " + std::to_string(L.order());
    out += '\n';
    for (int i = 0; i < L.rows(); ++i) {
        for (int x = 0; x < L.order(); ++x) {
            if (x) out += ' ';
            out += std::to_string(L.at(i, x) + 1);
        }
        out += '\n';
    }
    return out;
}

inline nlohmann::json to_json(const LatinRectangle& L) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < L.rows(); ++i) {
        nlohmann::json r = nlohmann::json::array();
        for (int x = 0; x < L.order(); ++x) r.push_back(L.at(i, x) + 1);
        rows.push_back(std::move(r));
    }
    return nlohmann::json{{"n", L.order()}, {"k", L.rows()}, {"rows", std::move(rows)}};
}

/// JSON format: {"n": n, "k": k, "rows": [[...], ...]}; "k" defaults to n.
inline LatinRectangle rectangle_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("rows")) throw ShapeError("JSON needs \"n\" and \"rows\"", 1, 1);
    const int n = j.at("n").get<int>();
    const int k = j.contains("k") ? j.at("k").get<int>() : n;
    std::vector<std::vector<long long>> rows;
    for (const auto& r : j.at("rows")) rows.push_back(r.get<std::vector<long long>>());
    return detail::from_external_rows(k, n, rows);
}

inline LatinRectangle parse_rectangle_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ShapeError(std::string("malformed JSON: ") + e.what(), 1, 1);
    }
    return rectangle_from_json(j);
}

/// Accepts either format, picked by the first non-blank character.
inline LatinRectangle parse_any(std::string_view text) {
    const auto p = text.find_first_not_of(" \t\r\n");
    if (p != std::string_view::npos && text[p] == '{') return parse_rectangle_json(text);
    return parse_rectangle(text);
}

} // namespace latinlab
