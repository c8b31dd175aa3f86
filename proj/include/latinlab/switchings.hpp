#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "latinlab/error.hpp"
#include "latinlab/latin_square.hpp"

namespace latinlab {

// The turn / flip / join calculus acts on the first two rows (0 and 1).
// Use on_row_pair() to run it against any other pair.

/// sigma_{1,2}(L): the permutation induced by the two leading rows.
inline CycleStructure leading_sigma(const LatinRectangle& L) { return sigma_row_pair(L, 0, 1); }

/// Exchanges rows 1 and 2 on every column of `cycle`, which must be a cycle of sigma_{1,2}.
inline LatinSquare turn(const LatinSquare& L, std::span<const int> cycle) {
    if (!leading_sigma(L).is_cycle(cycle)) throw CycleError("column set is not a cycle of the leading row pair");
    LatinSquare out = L;
    out.exchange_rows(0, 1, cycle);
    return out;
}

/// turn applied to the cycle containing column x.
inline LatinSquare turn_at(const LatinSquare& L, int x) {
    L.check_column(x);
    const auto sigma = leading_sigma(L);
    return turn(L, sigma.cycle_containing(x));
}

/// {x, y} is flippable when rows 1 and 2 lie in different cycles of tau_{x,y}.
inline bool is_flippable(const LatinSquare& L, int x, int y) {
    const auto tau = tau_column_pair(L, x, y);
    return !tau.same_cycle(0, 1);
}

/// Exchanges columns x and y on every row of the tau_{x,y}-cycle containing row 2.
inline LatinSquare flip(const LatinSquare& L, int x, int y) {
    const auto tau = tau_column_pair(L, x, y);
    if (tau.same_cycle(0, 1)) {
        throw NotFlippable("columns {" + std::to_string(x + 1) + "," + std::to_string(y + 1) + "} are not flippable");
    }
    LatinSquare out = L;
    out.exchange_columns(x, y, tau.cycle_containing(1));
    return out;
}

enum class JoinKind { single_join, double_join };

struct JoinChoice {
    int x;
    int y;
    JoinKind kind;
    bool used_turn; // {x, y} was not flippable, so c_y was turned first

    friend bool operator==(const JoinChoice&, const JoinChoice&) = default;
};

struct JoinOutcome {
    JoinChoice choice;
    LatinSquare result;
};

/// Merges the 2-cycle c_y into c_x: flip if {x, y} is flippable, otherwise
/// turn c_y and then flip. Ordered in (x, y): a double join is not
/// symmetric in general.
inline JoinOutcome join(const LatinSquare& L, int x, int y) {
    L.check_column(x);
    L.check_column(y);
    const auto sigma = leading_sigma(L);
    if (sigma.same_cycle(x, y)) throw JoinPrecondition("join needs columns in different cycles");
    if (sigma.length_of_cycle_containing(y) != 2) throw JoinPrecondition("join needs c_y to be a 2-cycle");
    JoinChoice choice{x, y, sigma.length_of_cycle_containing(x) == 2 ? JoinKind::double_join : JoinKind::single_join, false};
    if (is_flippable(L, x, y)) return {choice, flip(L, x, y)};
    choice.used_turn = true;
    LatinSquare turned = L;
    turned.exchange_rows(0, 1, sigma.cycle_containing(y));
    return {choice, flip(turned, x, y)};
}

/// Every single join: x outside the intercalates of rows 1-2, y inside one.
/// Yields (n - 2 X2) * 2 X2 outcomes, x ascending then y ascending.
inline std::vector<JoinOutcome> enumerate_single_joins(const LatinSquare& L) {
    const auto sigma = leading_sigma(L);
    std::vector<JoinOutcome> out;
    for (int x = 0; x < L.order(); ++x) {
        if (sigma.length_of_cycle_containing(x) == 2) continue;
        for (int y = 0; y < L.order(); ++y) {
            if (sigma.length_of_cycle_containing(y) == 2) out.push_back(join(L, x, y));
        }
    }
    return out;
}

/// Every ordered double join: x and y in distinct 2-cycles.
inline std::vector<JoinOutcome> enumerate_double_joins(const LatinSquare& L) {
    const auto sigma = leading_sigma(L);
    std::vector<JoinOutcome> out;
    for (int x = 0; x < L.order(); ++x) {
        if (sigma.length_of_cycle_containing(x) != 2) continue;
        for (int y = 0; y < L.order(); ++y) {
            if (sigma.length_of_cycle_containing(y) == 2 && !sigma.same_cycle(x, y)) out.push_back(join(L, x, y));
        }
    }
    return out;
}

struct JoinPredecessors {
    std::vector<LatinSquare> single;
    std::vector<LatinSquare> twofold;
};

/// All squares that reach `target` by one join, found by searching every
/// ordered column pair: a predecessor P with join_{x,y}(P) = target must be
/// flip_{x,y}(target) or that square with c_y turned. Each candidate is
/// confirmed by running the forward join.
inline JoinPredecessors join_predecessors(const LatinSquare& target) {
    JoinPredecessors preds;
    std::unordered_set<std::string> seen_single, seen_double;
    const int n = target.order();
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            if (x == y || !is_flippable(target, x, y)) continue;
            const LatinSquare back = flip(target, x, y);
            for (int variant = 0; variant < 2; ++variant) {
                const LatinSquare candidate = variant == 0 ? back : turn_at(back, y);
                const auto sigma = leading_sigma(candidate);
                if (sigma.same_cycle(x, y) || sigma.length_of_cycle_containing(y) != 2) continue;
                const auto outcome = join(candidate, x, y);
                if (!(outcome.result == target)) continue;
                const bool single = outcome.choice.kind == JoinKind::single_join;
                auto& seen = single ? seen_single : seen_double;
                if (seen.insert(candidate.key()).second) (single ? preds.single : preds.twofold).push_back(candidate);
            }
        }
    }
    return preds;
}

/// Runs f with rows i and j moved to the leading positions (other rows keep
/// their relative order) and maps the resulting square back.
template <class F>
LatinSquare on_row_pair(const LatinSquare& L, int i, int j, F&& f) {
    L.check_row(i);
    L.check_row(j);
    if (i == j) throw IndexError("row pair needs two distinct rows");
    std::vector<int> perm{i, j};
    for (int r = 0; r < L.rows(); ++r) {
        if (r != i && r != j) perm.push_back(r);
    }
    std::vector<int> inverse(perm.size());
    for (std::size_t r = 0; r < perm.size(); ++r) inverse[static_cast<std::size_t>(perm[r])] = static_cast<int>(r);
    const LatinSquare moved = LatinSquare::with_rows_permuted(L, perm);
    const LatinSquare result = f(moved);
    return LatinSquare::with_rows_permuted(result, inverse);
}

} // namespace latinlab
