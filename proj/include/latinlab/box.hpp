#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "latinlab/latin_square.hpp"

namespace latinlab {

/// A box I x X x Q of the n x n x n incidence array (0-based index sets).
struct Box {
    std::vector<int> rows;
    std::vector<int> columns;
    std::vector<int> symbols;

    static Box full(int n) {
        Box b;
        b.rows.resize(static_cast<std::size_t>(n));
        std::iota(b.rows.begin(), b.rows.end(), 0);
        b.columns = b.rows;
        b.symbols = b.rows;
        return b;
    }

    std::uint64_t volume() const noexcept {
        return static_cast<std::uint64_t>(rows.size()) * columns.size() * symbols.size();
    }

    /// Sorts and checks every set is a repeat-free subset of 0..n-1.
    void normalize(int n) {
        auto fix = [n](std::vector<int>& v, const char* what) {
            std::sort(v.begin(), v.end());
            if (std::adjacent_find(v.begin(), v.end()) != v.end()) throw IndexError(std::string("repeated index in box ") + what);
            if (!v.empty() && (v.front() < 0 || v.back() >= n)) throw IndexError(std::string("box ") + what + " not a subset of 1.." + std::to_string(n));
        };
        fix(rows, "rows");
        fix(columns, "columns");
        fix(symbols, "symbols");
    }

    friend bool operator==(const Box&, const Box&) = default;
};

inline std::vector<char> membership(const std::vector<int>& set, int n) {
    std::vector<char> in(static_cast<std::size_t>(n), 0);
    for (int v : set) in[static_cast<std::size_t>(v)] = 1;
    return in;
}

/// N_T(L): number of cells (i, x) in I x X with L[i][x] in Q.
inline std::uint64_t incidence_count(const LatinSquare& L, Box box) {
    box.normalize(L.order());
    const auto in_q = membership(box.symbols, L.order());
    std::uint64_t count = 0;
    for (int i : box.rows) {
        for (int x : box.columns) count += static_cast<std::uint64_t>(in_q[static_cast<std::size_t>(L.at(i, x))]);
    }
    return count;
}

/// A[i][x][q] of the incidence view, read through the cells.
inline bool incidence(const LatinSquare& L, int i, int x, int q) { return L.at(i, x) == q; }

} // namespace latinlab
