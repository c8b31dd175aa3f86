#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "latinlab/error.hpp"
#include "latinlab/intercalates.hpp"
#include "latinlab/latin_square.hpp"

namespace latinlab {

/// A k x n array of symbols that need not be Latin: the output of rotate.
struct RawArray {
    int k = 0;
    int n = 0;
    std::vector<int> cells;

    static RawArray of(const LatinRectangle& L) { return {L.rows(), L.order(), L.cells()}; }

    int at(int i, int x) const { return cells[static_cast<std::size_t>(i * n + x)]; }
    int& at(int i, int x) { return cells[static_cast<std::size_t>(i * n + x)]; }

    bool is_latin() const {
        for (int i = 0; i < k; ++i) {
            std::vector<char> seen(static_cast<std::size_t>(n), 0);
            for (int x = 0; x < n; ++x) {
                if (seen[static_cast<std::size_t>(at(i, x))]++) return false;
            }
        }
        for (int x = 0; x < n; ++x) {
            std::vector<char> seen(static_cast<std::size_t>(n), 0);
            for (int i = 0; i < k; ++i) {
                if (seen[static_cast<std::size_t>(at(i, x))]++) return false;
            }
        }
        return true;
    }

    std::optional<LatinRectangle> to_rectangle() const {
        if (!is_latin()) return std::nullopt;
        return LatinRectangle::from_cells(k, n, cells);
    }
};

/// Cyclically ordered columns (x y z).
struct ColumnTriple {
    int x;
    int y;
    int z;

    friend bool operator==(const ColumnTriple&, const ColumnTriple&) = default;
};

/// rot: L'[i][x] = L[i][z], L'[i][y] = L[i][x], L'[i][z] = L[i][y].
inline RawArray rotate(RawArray a, int i, ColumnTriple t) {
    const int sx = a.at(i, t.x);
    const int sy = a.at(i, t.y);
    const int sz = a.at(i, t.z);
    a.at(i, t.x) = sz;
    a.at(i, t.y) = sx;
    a.at(i, t.z) = sy;
    return a;
}

inline RawArray rotate(const LatinRectangle& L, int i, ColumnTriple t) {
    L.check_row(i);
    L.check_column(t.x);
    L.check_column(t.y);
    L.check_column(t.z);
    if (t.x == t.y || t.y == t.z || t.x == t.z) throw IndexError("rotate needs three distinct columns");
    return rotate(RawArray::of(L), i, t);
}

/// twist at row i with (x y z) = first and (x' y' z') = second. The new
/// intercalate sits on columns x and x'.
struct TwistChoice {
    int row;
    ColumnTriple first;
    ColumnTriple second;

    std::array<int, 6> columns() const { return {first.x, first.y, first.z, second.x, second.y, second.z}; }

    friend bool operator==(const TwistChoice&, const TwistChoice&) = default;
};

/// Why a twist was refused. Each value maps to one validity condition:
/// condition 1 is "the result is a good Latin rectangle", condition 2 keeps
/// (i,y),(i,z),(i,y'),(i,z') out of every intercalate before and after, and
/// condition 3 asks that (i,x),(i,x') start intercalate-free and end in
/// exactly one shared intercalate. Distinct columns are a precondition (0).
enum class TwistViolation {
    columns_not_distinct,
    not_latin,
    not_good,
    side_intercalate_before,
    side_intercalate_after,
    target_intercalate_before,
    target_intercalate_after,
};

inline int violated_condition(TwistViolation v) {
    switch (v) {
    case TwistViolation::columns_not_distinct: return 0;
    case TwistViolation::not_latin:
    case TwistViolation::not_good: return 1;
    case TwistViolation::side_intercalate_before:
    case TwistViolation::side_intercalate_after: return 2;
    case TwistViolation::target_intercalate_before:
    case TwistViolation::target_intercalate_after: return 3;
    }
    return -1;
}

inline std::string_view describe(TwistViolation v) {
    switch (v) {
    case TwistViolation::columns_not_distinct: return "columns not distinct";
    case TwistViolation::not_latin: return "result is not a Latin rectangle";
    case TwistViolation::not_good: return "result is not good (a row exceeds the intercalate cap)";
    case TwistViolation::side_intercalate_before: return "a y/z position is in an intercalate before the twist";
    case TwistViolation::side_intercalate_after: return "a y/z position is in an intercalate after the twist";
    case TwistViolation::target_intercalate_before: return "an x position is in an intercalate before the twist";
    case TwistViolation::target_intercalate_after: return "x positions do not end in exactly one shared intercalate";
    }
    return "unknown";
}

class TwistInvalid : public Error {
public:
    explicit TwistInvalid(TwistViolation v)
        : Error("twist invalid (condition " + std::to_string(violated_condition(v)) + "): " + std::string(describe(v))), violation_(v) {}

    TwistViolation violation() const noexcept { return violation_; }
    int condition() const noexcept { return violated_condition(violation_); }

private:
    TwistViolation violation_;
};

class NotGood : public Error {
public:
    using Error::Error;
};

/// Good: no row is involved in more than `cap` intercalates.
inline bool is_good(const LatinRectangle& L, int cap) {
    const auto per = row_involvement(L);
    return std::all_of(per.begin(), per.end(), [cap](int c) { return c <= cap; });
}

struct TwistCheck {
    std::optional<TwistViolation> violation;
    std::optional<LatinRectangle> result; // set when violation is empty

    bool ok() const noexcept { return !violation.has_value(); }
};

/// Evaluates a twist without throwing on a refused choice. L must be good.
inline TwistCheck check_twist(const LatinRectangle& L, const TwistChoice& c, int cap) {
    L.check_row(c.row);
    const auto cols = c.columns();
    for (int a : cols) L.check_column(a);
    for (std::size_t a = 0; a < cols.size(); ++a) {
        for (std::size_t b = a + 1; b < cols.size(); ++b) {
            if (cols[a] == cols[b]) return {TwistViolation::columns_not_distinct, std::nullopt};
        }
    }
    const int i = c.row;
    // Row i stays a permutation, so only the six rewritten cells can clash,
    // and only with other rows of their column.
    const std::array<std::pair<int, int>, 6> placed{{{c.first.x, L.at(i, c.first.z)},
                                                     {c.first.y, L.at(i, c.first.x)},
                                                     {c.first.z, L.at(i, c.first.y)},
                                                     {c.second.x, L.at(i, c.second.z)},
                                                     {c.second.y, L.at(i, c.second.x)},
                                                     {c.second.z, L.at(i, c.second.y)}}};
    for (const auto& [col, sym] : placed) {
        const int holder = L.row_of(col, sym);
        if (holder != -1 && holder != i) return {TwistViolation::not_latin, std::nullopt};
    }

    const std::array<int, 4> side{c.first.y, c.first.z, c.second.y, c.second.z};
    for (int col : side) {
        if (cell_intercalates(L, i, col) != 0) return {TwistViolation::side_intercalate_before, std::nullopt};
    }
    if (cell_intercalates(L, i, c.first.x) != 0 || cell_intercalates(L, i, c.second.x) != 0) {
        return {TwistViolation::target_intercalate_before, std::nullopt};
    }
    const RawArray raw = rotate(rotate(RawArray::of(L), i, c.second), i, c.first);
    LatinRectangle after = LatinRectangle::from_cells(raw.k, raw.n, raw.cells);
    for (int col : side) {
        if (cell_intercalates(after, i, col) != 0) return {TwistViolation::side_intercalate_after, std::nullopt};
    }
    if (intercalate_partners(after, i, c.first.x, c.second.x).size() != 1 || cell_intercalates(after, i, c.first.x) != 1 ||
        cell_intercalates(after, i, c.second.x) != 1) {
        return {TwistViolation::target_intercalate_after, std::nullopt};
    }
    if (!is_good(after, cap)) return {TwistViolation::not_good, std::nullopt};
    return {std::nullopt, std::move(after)};
}

/// The twist itself; throws TwistInvalid naming the failed condition.
inline LatinRectangle twist(const LatinRectangle& L, const TwistChoice& c, int cap) {
    if (!is_good(L, cap)) throw NotGood("twist input is not good for cap " + std::to_string(cap));
    auto check = check_twist(L, c, cap);
    if (!check.ok()) throw TwistInvalid(*check.violation);
    return std::move(*check.result);
}

struct TwistCensus {
    std::uint64_t intercalates = 0;         // s = N(L)
    std::uint64_t forward_choices = 0;      // valid ordered choices from L
    std::uint64_t forward_results = 0;      // distinct rectangles they reach
    std::optional<TwistChoice> first_choice;
    std::map<TwistViolation, std::uint64_t> rejections;
    std::uint64_t backward_predecessors = 0; // distinct good rectangles that twist to L
    double backward_bound = 0;               // 2 s n^4

    bool backward_within_bound() const { return static_cast<double>(backward_predecessors) <= backward_bound; }
};

inline constexpr std::uint64_t default_twist_budget = 200'000'000;

/// Forward twists from L. A valid twist's new intercalate pairs row i with
/// some row j on columns x, x', which forces z (L[i][z] = L[j][x']) and
/// z' (L[i][z'] = L[j][x]); the search runs over (i, j, x, x', y, y') with
/// i ascending, then the tuple lexicographically. Each valid ordered choice
/// is met exactly once, because its j is the unique partner row.
template <class Visit>
void for_each_twist(const LatinRectangle& L, int cap, Visit&& visit, std::map<TwistViolation, std::uint64_t>* rejections = nullptr,
                    std::uint64_t budget = default_twist_budget) {
    const auto k = static_cast<std::uint64_t>(L.rows());
    const auto n = static_cast<std::uint64_t>(L.order());
    if (k * (k > 0 ? k - 1 : 0) * n * n * n * n > budget) throw ResourceError("twist enumeration exceeds budget " + std::to_string(budget));
    if (!is_good(L, cap)) throw NotGood("twist input is not good for cap " + std::to_string(cap));
    const int nn = L.order();
    for (int i = 0; i < L.rows(); ++i) {
        for (int j = 0; j < L.rows(); ++j) {
            if (j == i) continue;
            for (int x = 0; x < nn; ++x) {
                for (int xp = 0; xp < nn; ++xp) {
                    if (xp == x) continue;
                    const int z = L.column_of(i, L.at(j, xp));
                    const int zp = L.column_of(i, L.at(j, x));
                    for (int y = 0; y < nn; ++y) {
                        for (int yp = 0; yp < nn; ++yp) {
                            const TwistChoice choice{i, {x, y, z}, {xp, yp, zp}};
                            auto check = check_twist(L, choice, cap);
                            if (check.ok()) {
                                visit(choice, *check.result);
                            } else if (rejections) {
                                ++(*rejections)[*check.violation];
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Good rectangles that twist to `target`. Undoes both rotations for every
/// intercalate of the target, in each of its two rows, over all placements
/// of y, z, y', z', and keeps the candidates whose forward twist is valid
/// and lands on the target.
inline std::vector<LatinRectangle> twist_predecessors(const LatinRectangle& target, int cap) {
    std::vector<LatinRectangle> out;
    std::unordered_set<std::string> seen;
    const int n = target.order();
    const auto all = census(target, true);
    for (const auto& w : all.witnesses) {
        for (int i : {w.row_a, w.row_b}) {
            const int x = w.col_a;
            const int xp = w.col_b;
            for (int y = 0; y < n; ++y) {
                for (int z = 0; z < n; ++z) {
                    for (int yp = 0; yp < n; ++yp) {
                        for (int zp = 0; zp < n; ++zp) {
                            const std::array<int, 6> cols{x, y, z, xp, yp, zp};
                            bool distinct = true;
                            for (std::size_t a = 0; a < 6 && distinct; ++a) {
                                for (std::size_t b = a + 1; b < 6; ++b) distinct = distinct && cols[a] != cols[b];
                            }
                            if (!distinct) continue;
                            // rot_(x y z) is undone by rot_(x z y).
                            const RawArray back = rotate(rotate(RawArray::of(target), i, {x, z, y}), i, {xp, zp, yp});
                            auto candidate = back.to_rectangle();
                            if (!candidate || !is_good(*candidate, cap)) continue;
                            const auto check = check_twist(*candidate, TwistChoice{i, {x, y, z}, {xp, yp, zp}}, cap);
                            if (!check.ok() || !(*check.result == target)) continue;
                            if (seen.insert(candidate->key()).second) out.push_back(std::move(*candidate));
                        }
                    }
                }
            }
        }
    }
    return out;
}

/// Forward and backward twist counts for L (k x n, good for `cap`).
inline TwistCensus enumerate_twists(const LatinRectangle& L, int cap, std::uint64_t budget = default_twist_budget) {
    TwistCensus t;
    t.intercalates = count_intercalates(L);
    std::unordered_set<std::string> results;
    for_each_twist(
        L, cap,
        [&](const TwistChoice& c, const LatinRectangle& r) {
            ++t.forward_choices;
            if (!t.first_choice) t.first_choice = c;
            results.insert(r.key());
        },
        &t.rejections, budget);
    t.forward_results = results.size();
    const auto n4 = std::pow(static_cast<double>(L.order()), 4);
    t.backward_bound = 2.0 * static_cast<double>(t.intercalates) * n4;
    t.backward_predecessors = twist_predecessors(L, cap).size();
    return t;
}

} // namespace latinlab
