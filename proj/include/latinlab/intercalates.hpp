#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "latinlab/error.hpp"
#include "latinlab/latin_square.hpp"

namespace latinlab {

/// Rows i < j and columns x < y with L[i][x] = L[j][y] and L[i][y] = L[j][x].
struct Intercalate {
    int row_a;
    int row_b;
    int col_a;
    int col_b;

    friend bool operator==(const Intercalate&, const Intercalate&) = default;
    friend auto operator<=>(const Intercalate&, const Intercalate&) = default;
};

struct IntercalateCensus {
    std::uint64_t total = 0;
    std::vector<std::uint64_t> per_row;                           // intercalates touching each row
    std::map<std::pair<int, int>, std::uint64_t> per_row_pair;    // nonzero pairs only, i < j
    std::vector<Intercalate> witnesses;                           // filled on request

    std::uint64_t max_per_row() const {
        return per_row.empty() ? 0 : *std::max_element(per_row.begin(), per_row.end());
    }

    /// value -> number of row pairs carrying that many intercalates (pairs with 0 included).
    std::map<std::uint64_t, std::uint64_t> pair_histogram(int k) const {
        std::map<std::uint64_t, std::uint64_t> h;
        const auto pairs = static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(k - 1) / 2;
        h[0] = pairs - per_row_pair.size();
        for (const auto& [pair, c] : per_row_pair) ++h[c];
        if (h[0] == 0) h.erase(0);
        return h;
    }
};

namespace detail {

// Calls f(x, y) for each 2-cycle {x < y} of sigma_{i,j}.
template <class F>
void for_each_two_cycle(const LatinRectangle& L, int i, int j, F&& f) {
    for (int x = 0; x < L.order(); ++x) {
        const int y = L.column_of(i, L.at(j, x));
        if (y > x && L.column_of(i, L.at(j, y)) == x) f(x, y);
    }
}

} // namespace detail

/// Intercalates in rows i and j: the number of 2-cycles of sigma_{i,j}.
inline int count_two_rows(const LatinRectangle& L, int i, int j) {
    L.check_row(i);
    L.check_row(j);
    if (i == j) throw IndexError("row pair needs two distinct rows");
    int count = 0;
    detail::for_each_two_cycle(L, i, j, [&](int, int) { ++count; });
    return count;
}

/// Exact census: one O(n) pass per row pair.
inline IntercalateCensus census(const LatinRectangle& L, bool with_witnesses = false) {
    IntercalateCensus c;
    c.per_row.assign(static_cast<std::size_t>(L.rows()), 0);
    for (int i = 0; i < L.rows(); ++i) {
        for (int j = i + 1; j < L.rows(); ++j) {
            std::uint64_t here = 0;
            detail::for_each_two_cycle(L, i, j, [&](int x, int y) {
                ++here;
                if (with_witnesses) c.witnesses.push_back({i, j, x, y});
            });
            if (here) {
                c.per_row_pair[{i, j}] = here;
                c.per_row[static_cast<std::size_t>(i)] += here;
                c.per_row[static_cast<std::size_t>(j)] += here;
                c.total += here;
            }
        }
    }
    return c;
}

/// N(L) without the per-pair bookkeeping.
inline std::uint64_t count_intercalates(const LatinRectangle& L) {
    std::uint64_t total = 0;
    for (int i = 0; i < L.rows(); ++i) {
        for (int j = i + 1; j < L.rows(); ++j) detail::for_each_two_cycle(L, i, j, [&](int, int) { ++total; });
    }
    return total;
}

/// Number of intercalates each row is involved in.
inline std::vector<int> row_involvement(const LatinRectangle& L) {
    std::vector<int> per(static_cast<std::size_t>(L.rows()), 0);
    for (int i = 0; i < L.rows(); ++i) {
        for (int j = i + 1; j < L.rows(); ++j) {
            detail::for_each_two_cycle(L, i, j, [&](int, int) {
                ++per[static_cast<std::size_t>(i)];
                ++per[static_cast<std::size_t>(j)];
            });
        }
    }
    return per;
}

/// Number of intercalates that use the cell (i, x). O(k).
inline int cell_intercalates(const LatinRectangle& L, int i, int x) {
    int count = 0;
    for (int j = 0; j < L.rows(); ++j) {
        if (j == i) continue;
        const int y = L.column_of(i, L.at(j, x));
        if (L.at(j, y) == L.at(i, x)) ++count;
    }
    return count;
}

/// Rows j forming an intercalate with cells (i, x) and (i, y).
inline std::vector<int> intercalate_partners(const LatinRectangle& L, int i, int x, int y) {
    std::vector<int> partners;
    for (int j = 0; j < L.rows(); ++j) {
        if (j != i && L.at(j, x) == L.at(i, y) && L.at(j, y) == L.at(i, x)) partners.push_back(j);
    }
    return partners;
}

inline constexpr std::uint64_t default_subsquare_budget = 100'000'000;

/// Number of m x m Latin subsquares (m-subsets of rows and of columns whose
/// cells form a Latin square of order m).
///
/// Columns subsets are enumerated depth-first; at each complete column set
/// the rows are grouped by the symbol set they carry there, and a group of g
/// rows contributes C(g, m). A node is one column subset visited, partial or
/// complete; exceeding `budget` nodes raises ResourceError.
inline std::uint64_t subsquare_count(const LatinSquare& L, int m, std::uint64_t budget = default_subsquare_budget) {
    const int n = L.order();
    if (m < 2 || m > n) throw IndexError("subsquare order must lie in 2.." + std::to_string(n));
    std::uint64_t nodes = 0;
    std::uint64_t found = 0;
    std::vector<int> chosen;

    auto choose = [](std::uint64_t g, int r) {
        std::uint64_t c = 1;
        for (int t = 0; t < r; ++t) c = c * (g - static_cast<std::uint64_t>(t)) / static_cast<std::uint64_t>(t + 1);
        return c;
    };

    auto leaf = [&] {
        std::vector<std::vector<int>> sets;
        sets.reserve(static_cast<std::size_t>(n));
        for (int r = 0; r < n; ++r) {
            std::vector<int> s;
            s.reserve(static_cast<std::size_t>(m));
            for (int x : chosen) s.push_back(L.at(r, x));
            std::sort(s.begin(), s.end());
            sets.push_back(std::move(s));
        }
        std::sort(sets.begin(), sets.end());
        for (std::size_t a = 0; a < sets.size();) {
            std::size_t b = a;
            while (b < sets.size() && sets[b] == sets[a]) ++b;
            if (static_cast<int>(b - a) >= m) found += choose(b - a, m);
            a = b;
        }
    };

    auto recurse = [&](auto&& self, int next) -> void {
        if (++nodes > budget) throw ResourceError("subsquare search exceeded " + std::to_string(budget) + " nodes");
        if (static_cast<int>(chosen.size()) == m) {
            leaf();
            return;
        }
        const int need = m - static_cast<int>(chosen.size());
        for (int x = next; x + need <= n; ++x) {
            chosen.push_back(x);
            self(self, x + 1);
            chosen.pop_back();
        }
    };
    recurse(recurse, 0);
    return found;
}

} // namespace latinlab
