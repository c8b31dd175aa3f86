#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "latinlab/latinlab.hpp"

namespace testing_support {

using Rows = std::vector<std::vector<int>>;

// 1-based rows in, checked rectangle out.
inline latinlab::LatinRectangle rect(Rows rows) {
    for (auto& r : rows) {
        for (auto& v : r) --v;
    }
    return latinlab::LatinRectangle(rows);
}

inline latinlab::LatinSquare square(const Rows& rows) { return latinlab::LatinSquare(rect(rows)); }

// The turn example: rows 1-2 induce (1 4 5)(2 3).
inline latinlab::LatinSquare turn_example() {
    return square({{1, 5, 3, 4, 2}, {4, 3, 5, 2, 1}, {2, 1, 4, 5, 3}, {3, 4, 2, 1, 5}, {5, 2, 1, 3, 4}});
}

// The turn example after turning the 2-cycle on columns 2, 3; the flip example.
inline latinlab::LatinSquare flip_example() {
    return square({{1, 3, 5, 4, 2}, {4, 5, 3, 2, 1}, {2, 1, 4, 5, 3}, {3, 4, 2, 1, 5}, {5, 2, 1, 3, 4}});
}

// Intercalates by scanning every pair of rows and pair of columns.
inline std::uint64_t naive_intercalates(const latinlab::LatinRectangle& L) {
    std::uint64_t c = 0;
    for (int i = 0; i < L.rows(); ++i) {
        for (int j = i + 1; j < L.rows(); ++j) {
            for (int x = 0; x < L.order(); ++x) {
                for (int y = x + 1; y < L.order(); ++y) {
                    if (L.at(i, x) == L.at(j, y) && L.at(i, y) == L.at(j, x)) ++c;
                }
            }
        }
    }
    return c;
}

// Permanent straight from the definition.
inline std::int64_t naive_permanent(const latinlab::Matrix& a) {
    const int n = static_cast<int>(a.size());
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    std::int64_t total = 0;
    do {
        std::int64_t term = 1;
        for (int i = 0; i < n; ++i) term *= a[static_cast<std::size_t>(i)][static_cast<std::size_t>(p[static_cast<std::size_t>(i)])];
        total += term;
    } while (std::next_permutation(p.begin(), p.end()));
    return total;
}

// Twist validity from the definition on plain arrays, sharing no code with
// the library: rotate twice, then test Latin, goodness and the intercalate
// conditions cell by cell.
struct Grid {
    int k, n;
    std::vector<int> a;
    int at(int i, int x) const { return a[static_cast<std::size_t>(i * n + x)]; }
    int& at(int i, int x) { return a[static_cast<std::size_t>(i * n + x)]; }

    bool latin() const {
        for (int x = 0; x < n; ++x) {
            for (int i = 0; i < k; ++i) {
                for (int j = i + 1; j < k; ++j) {
                    if (at(i, x) == at(j, x)) return false;
                }
            }
        }
        return true;
    }
    // Intercalates through cell (i, x) and the partner (i, y) of each.
    std::vector<int> partners(int i, int x) const {
        std::vector<int> ys;
        for (int j = 0; j < k; ++j) {
            if (j == i) continue;
            for (int y = 0; y < n; ++y) {
                if (y != x && at(i, x) == at(j, y) && at(i, y) == at(j, x)) ys.push_back(y);
            }
        }
        return ys;
    }
    int row_count(int i) const {
        int c = 0;
        for (int x = 0; x < n; ++x) c += static_cast<int>(partners(i, x).size());
        return c / 2;
    }
};

inline bool brute_twist_valid(const latinlab::LatinRectangle& L, int i, std::array<int, 6> c, int cap) {
    for (int s = 0; s < 6; ++s) {
        for (int t = s + 1; t < 6; ++t) {
            if (c[static_cast<std::size_t>(s)] == c[static_cast<std::size_t>(t)]) return false;
        }
    }
    Grid g{L.rows(), L.order(), L.cells()};
    Grid h = g;
    auto rot = [&](int x, int y, int z) {
        const int vx = h.at(i, x), vy = h.at(i, y), vz = h.at(i, z);
        h.at(i, x) = vz;
        h.at(i, y) = vx;
        h.at(i, z) = vy;
    };
    const int x = c[0], y = c[1], z = c[2], xp = c[3], yp = c[4], zp = c[5];
    rot(xp, yp, zp);
    rot(x, y, z);
    if (!h.latin()) return false;
    for (int r = 0; r < h.k; ++r) {
        if (h.row_count(r) > cap) return false;
    }
    for (int col : {y, z, yp, zp}) {
        if (!g.partners(i, col).empty() || !h.partners(i, col).empty()) return false;
    }
    if (!g.partners(i, x).empty() || !g.partners(i, xp).empty()) return false;
    const auto px = h.partners(i, x);
    const auto pxp = h.partners(i, xp);
    return px.size() == 1 && pxp.size() == 1 && px[0] == xp && pxp[0] == x;
}

} // namespace testing_support
