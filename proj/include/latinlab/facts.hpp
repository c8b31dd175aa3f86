#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "latinlab/intercalates.hpp"
#include "latinlab/latin_square.hpp"
#include "latinlab/oracle.hpp"
#include "latinlab/rng.hpp"
#include "latinlab/serialization.hpp"
#include "latinlab/switchings.hpp"
#include "latinlab/twist.hpp"

namespace latinlab {

/// A failed check with enough to replay it.
struct Violation {
    std::string check;
    std::string detail;
    std::string square;    // text format of the input
    std::string operation; // e.g. "flip 1 3"
};

/// Tallies per named check. Check names:
///   merge, sigma-kept, flippability-toggle, turn-involution,
///   flip-involution, square-of-merged, single-join, double-join,
///   single-join-count, double-join-distinct, single-predecessors,
///   double-predecessors, output-valid
struct FactReport {
    std::map<std::string, std::uint64_t> performed;
    std::map<std::string, std::uint64_t> failed;
    std::vector<Violation> violations; // capped at max_kept
    std::size_t max_kept = 16;

    void pass(const std::string& check) { ++performed[check]; }
    void fail(const std::string& check, const LatinRectangle& L, std::string op, std::string detail) {
        ++performed[check];
        ++failed[check];
        if (violations.size() < max_kept) violations.push_back({check, std::move(detail), to_text(L), std::move(op)});
    }
    void expect(bool ok, const std::string& check, const LatinRectangle& L, const std::function<std::string()>& op, const char* detail) {
        if (ok) pass(check);
        else fail(check, L, op(), detail);
    }
    std::uint64_t total_failed() const {
        std::uint64_t t = 0;
        for (const auto& [k, v] : failed) t += v;
        return t;
    }
    std::uint64_t total_performed() const {
        std::uint64_t t = 0;
        for (const auto& [k, v] : performed) t += v;
        return t;
    }
    void merge(const FactReport& o) {
        for (const auto& [k, v] : o.performed) performed[k] += v;
        for (const auto& [k, v] : o.failed) failed[k] += v;
        for (const auto& v : o.violations) {
            if (violations.size() < max_kept) violations.push_back(v);
        }
    }
};

namespace detail {

inline std::string op_text(const char* name, int a, int b) { return std::string(name) + " " + std::to_string(a + 1) + " " + std::to_string(b + 1); }

inline bool fully_valid(const LatinSquare& L) { return L.lookups_consistent() && L.columns_are_permutations(); }

inline std::multiset<int> cycle_lengths(const CycleStructure& c) {
    std::multiset<int> m;
    for (const auto& cyc : c.cycles) m.insert(static_cast<int>(cyc.size()));
    return m;
}

} // namespace detail

/// The turn/flip observations on the leading row pair of L.
inline void check_turn_flip_facts(const LatinSquare& L, FactReport& rep) {
    const int n = L.order();
    const CycleStructure sigma = leading_sigma(L);

    for (const auto& cyc : sigma.cycles) {
        const LatinSquare t = turn(L, cyc);
        const std::string op = "turn cycle containing " + std::to_string(cyc.front() + 1);
        rep.expect(detail::fully_valid(t), "output-valid", L, [&] { return op; }, "turn produced an invalid square");
        rep.expect(turn(t, cyc) == L, "turn-involution", L, [&] { return op; }, "turning twice did not restore the square");
        if (cyc.size() == 2) rep.expect(leading_sigma(t) == sigma, "sigma-kept", L, [&] { return op; }, "turning a 2-cycle changed sigma");
    }

    for (int x = 0; x < n; ++x) {
        for (int y = x + 1; y < n; ++y) {
            const bool flippable = is_flippable(L, x, y);
            const bool apart = !sigma.same_cycle(x, y);
            if (apart) {
                const LatinSquare tx = turn_at(L, x);
                rep.expect(is_flippable(tx, x, y) != flippable, "flippability-toggle", L, [&] { return detail::op_text("turn-then-test", x, y); },
                           "turning c_x did not toggle flippability of {x, y}");
            }
            if (!flippable) continue;
            const LatinSquare f = flip(L, x, y);
            rep.expect(detail::fully_valid(f), "output-valid", L, [&] { return detail::op_text("flip", x, y); }, "flip produced an invalid square");
            rep.expect(is_flippable(f, x, y) && flip(f, x, y) == L, "flip-involution", L, [&] { return detail::op_text("flip", x, y); },
                       "flipping twice did not restore the square");
            if (!apart) continue;
            const CycleStructure after = leading_sigma(f);
            auto expected = detail::cycle_lengths(sigma);
            const int a = sigma.length_of_cycle_containing(x);
            const int b = sigma.length_of_cycle_containing(y);
            expected.erase(expected.find(a));
            expected.erase(expected.find(b));
            expected.insert(a + b);
            std::vector<int> merged = sigma.cycle_containing(x);
            merged.insert(merged.end(), sigma.cycle_containing(y).begin(), sigma.cycle_containing(y).end());
            bool others_kept = true;
            for (const auto& cyc : sigma.cycles) {
                if (!sigma.same_cycle(cyc.front(), x) && !sigma.same_cycle(cyc.front(), y)) others_kept = others_kept && after.is_cycle(cyc);
            }
            rep.expect(after.is_cycle(merged) && others_kept && detail::cycle_lengths(after) == expected, "merge", L,
                       [&] { return detail::op_text("flip", x, y); }, "flip did not merge c_x and c_y alone");
            for (auto [u, v] : {std::pair{x, y}, std::pair{y, x}}) {
                if (sigma.length_of_cycle_containing(v) != 2) continue;
                rep.expect(after.apply(u, 2) == v, "square-of-merged", L, [&] { return detail::op_text("flip", u, v); },
                           "sigma'^2(x) differs from y after the flip");
            }
        }
    }
}

/// The join observations on L, taking L as the source (items on single and
/// double joins and their counts) and as the target (predecessor bounds).
inline void check_join_facts(const LatinSquare& L, FactReport& rep) {
    const int n = L.order();
    const CycleStructure sigma = leading_sigma(L);
    const int x2 = sigma.count(2);

    const auto singles = enumerate_single_joins(L);
    rep.expect(static_cast<std::int64_t>(singles.size()) == static_cast<std::int64_t>(2 * x2) * (n - 2 * x2), "single-join-count", L,
               [] { return std::string("enumerate single joins"); }, "single-join choice count differs from 2 X2 (n - 2 X2)");
    for (const auto& o : singles) {
        const CycleStructure after = leading_sigma(o.result);
        rep.expect(detail::fully_valid(o.result) && after.count(2) == x2 - 1 && after.length_of_cycle_containing(o.choice.x) > 4, "single-join", L,
                   [&] { return detail::op_text("join", o.choice.x, o.choice.y); }, "single join did not drop X2 by one into a cycle longer than 4");
    }

    const auto doubles = enumerate_double_joins(L);
    std::unordered_set<std::string> distinct;
    for (const auto& o : doubles) {
        const CycleStructure after = leading_sigma(o.result);
        distinct.insert(o.result.key());
        rep.expect(detail::fully_valid(o.result) && after.count(2) == x2 - 2 && after.length_of_cycle_containing(o.choice.x) == 4, "double-join", L,
                   [&] { return detail::op_text("join", o.choice.x, o.choice.y); }, "double join did not drop X2 by two into a 4-cycle");
    }
    if (x2 >= 2) {
        const std::uint64_t s = static_cast<std::uint64_t>(x2 - 2);
        rep.expect(distinct.size() >= 2 * s * s, "double-join-distinct", L, [] { return std::string("enumerate double joins"); },
                   "fewer than 2 s^2 distinct double-join results");
    }

    const auto preds = join_predecessors(L);
    const std::int64_t single_cap = 2 * (n - 2 * sigma.count(2) - 3 * sigma.count(3) - 4 * sigma.count(4));
    rep.expect(static_cast<std::int64_t>(preds.single.size()) <= single_cap, "single-predecessors", L,
               [] { return std::string("join predecessors"); }, "more single-join predecessors than 2 (n - 2 X2 - 3 X3 - 4 X4)");
    rep.expect(static_cast<std::int64_t>(preds.twofold.size()) <= 8 * sigma.count(4), "double-predecessors", L,
               [] { return std::string("join predecessors"); }, "more double-join predecessors than 8 X4");
}

/// Both groups on L.
inline FactReport check_switching_facts(const LatinSquare& L) {
    FactReport rep;
    check_turn_flip_facts(L, rep);
    check_join_facts(L, rep);
    return rep;
}

// ---------------------------------------------------------------------------
// Twist contract
// ---------------------------------------------------------------------------

/// Columns of each row that lie in no intercalate.
inline std::vector<std::vector<int>> free_columns(const LatinRectangle& L) {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(L.rows()));
    for (int i = 0; i < L.rows(); ++i) {
        for (int col = 0; col < L.order(); ++col) {
            if (cell_intercalates(L, i, col) == 0) out[static_cast<std::size_t>(i)].push_back(col);
        }
    }
    return out;
}

/// A random candidate twist: row i, partner row j, distinct x, x', y, y';
/// z and z' are the columns that make (i,x),(i,x') pair with row j. When
/// `free` is given, x, x', y, y' come from the intercalate-free columns of
/// row i (if it has at least four), which every valid twist needs.
inline TwistChoice random_twist_choice(const LatinRectangle& L, Rng& rng, const std::vector<std::vector<int>>* free = nullptr) {
    const int k = L.rows();
    const int n = L.order();
    const int i = rng.below(k);
    int j = rng.below(k - 1);
    if (j >= i) ++j;
    std::array<int, 4> c{};
    if (free && (*free)[static_cast<std::size_t>(i)].size() >= 4) {
        const auto& pool = (*free)[static_cast<std::size_t>(i)];
        const auto picks = rng.subset(static_cast<int>(pool.size()), 4);
        for (std::size_t t = 0; t < 4; ++t) c[t] = pool[static_cast<std::size_t>(picks[t])];
    } else {
        const auto picks = rng.subset(n, 4);
        for (std::size_t t = 0; t < 4; ++t) c[t] = picks[t];
    }
    rng.shuffle(std::span<int>(c));
    const int x = c[0], xp = c[1], y = c[2], yp = c[3];
    return {i, {x, y, L.column_of(i, L.at(j, xp))}, {xp, yp, L.column_of(i, L.at(j, x))}};
}

struct TwistContractReport {
    std::uint64_t attempts = 0;
    std::uint64_t accepted = 0;
    std::uint64_t rejected = 0;
    std::uint64_t bad_accepted = 0;  // accepted but N did not rise by 1, or not good, or invalid
    std::uint64_t unnamed_rejections = 0;
    std::map<TwistViolation, std::uint64_t> rejections;
    std::map<int, std::uint64_t> rejections_by_condition;
};

/// Applies random candidate twists (see random_twist_choice) to L until
/// `accepted_target` were accepted or `max_attempts` ran out. Accepted
/// results are checked for N + 1, goodness and validity; rejections must
/// name a condition 0..3. L must be good for `cap`.
inline TwistContractReport check_twist_contract(const LatinRectangle& L, int cap, std::uint64_t accepted_target, std::uint64_t max_attempts,
                                                Rng& rng, bool free_only = true) {
    if (!is_good(L, cap)) throw NotGood("twist input is not good for cap " + std::to_string(cap));
    TwistContractReport rep;
    const std::uint64_t before = count_intercalates(L);
    const auto free = free_columns(L);
    while (rep.accepted < accepted_target && rep.attempts < max_attempts) {
        ++rep.attempts;
        const TwistChoice c = random_twist_choice(L, rng, free_only ? &free : nullptr);
        const TwistCheck check = check_twist(L, c, cap);
        if (check.ok()) {
            ++rep.accepted;
            const LatinRectangle& r = *check.result;
            const bool valid = r.lookups_consistent() && LatinRectangle::from_cells(r.rows(), r.order(), r.cells()) == r;
            if (!valid || count_intercalates(r) != before + 1 || !is_good(r, cap)) ++rep.bad_accepted;
        } else {
            ++rep.rejected;
            const int cond = violated_condition(*check.violation);
            if (cond < 0 || cond > 3) ++rep.unnamed_rejections;
            ++rep.rejections[*check.violation];
            ++rep.rejections_by_condition[cond];
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Class sizes and the single-join double count
// ---------------------------------------------------------------------------

struct ClassRatioRow {
    int s = 0;
    std::uint64_t size = 0;               // |L(s)|
    std::optional<double> ratio_next;     // |L(s+1)| / |L(s)|
    std::optional<double> bound_next;     // (n - 2s) / ((s+1)(n - 2s - 2))
    std::optional<bool> next_holds;       // exact integer comparison
    std::optional<double> ratio_double;   // |L(s+2)| / |L(s)|
    std::optional<double> bound_double;   // n / s^2
    std::optional<bool> double_holds;
    std::uint64_t join_choices = 0;       // single-join choices from L(s+1) into L(s)
    std::uint64_t join_pairs = 0;         // distinct (source, result) pairs among them
    std::uint64_t join_choice_formula = 0; // 2(s+1)(n - 2(s+1)) |L(s+1)|
    std::uint64_t join_upper = 0;         // 2(n - 2s) |L(s)|
};

struct ClassRatioTable {
    int n = 0;
    std::uint64_t total = 0;
    std::vector<ClassRatioRow> rows;

    bool all_hold() const {
        for (const auto& r : rows) {
            if ((r.next_holds && !*r.next_holds) || (r.double_holds && !*r.double_holds)) return false;
            if (r.join_choices != r.join_choice_formula || r.join_pairs > r.join_upper) return false;
        }
        return true;
    }
};

/// Exact table for n <= 5 from full enumeration, with single joins run from
/// every square.
inline ClassRatioTable class_ratio_table(int n) {
    if (n > max_square_order) throw ResourceError("class ratios need full enumeration, n <= " + std::to_string(max_square_order));
    ClassRatioTable t;
    t.n = n;
    std::map<int, std::uint64_t> choices, pairs;
    const auto result = enumerate_squares(n, {}, [&](const LatinRectangle& R) {
        const LatinSquare L(R);
        const int x2 = leading_sigma(L).count(2);
        if (x2 == 0) return;
        const auto joins = enumerate_single_joins(L);
        std::unordered_set<std::string> targets;
        for (const auto& o : joins) targets.insert(o.result.key());
        choices[x2 - 1] += joins.size();
        pairs[x2 - 1] += targets.size();
    });
    t.total = result.total_count;
    const int max_s = n / 2;
    auto size_of = [&](int s) -> std::uint64_t {
        auto it = result.class_sizes.find(static_cast<std::uint64_t>(s));
        return it == result.class_sizes.end() ? 0 : it->second;
    };
    for (int s = 0; s <= max_s; ++s) {
        ClassRatioRow r;
        r.s = s;
        r.size = size_of(s);
        const std::uint64_t next = size_of(s + 1);
        const std::uint64_t next2 = size_of(s + 2);
        const std::int64_t gap = n - 2 * s - 2;
        if (r.size > 0 && gap > 0) {
            r.ratio_next = static_cast<double>(next) / static_cast<double>(r.size);
            r.bound_next = static_cast<double>(n - 2 * s) / (static_cast<double>(s + 1) * static_cast<double>(gap));
            r.next_holds = next * static_cast<std::uint64_t>(s + 1) * static_cast<std::uint64_t>(gap) <= static_cast<std::uint64_t>(n - 2 * s) * r.size;
        }
        if (r.size > 0 && s > 0) {
            r.ratio_double = static_cast<double>(next2) / static_cast<double>(r.size);
            r.bound_double = static_cast<double>(n) / (static_cast<double>(s) * s);
            r.double_holds = next2 * static_cast<std::uint64_t>(s) * static_cast<std::uint64_t>(s) <= static_cast<std::uint64_t>(n) * r.size;
        }
        r.join_choices = choices[s];
        r.join_pairs = pairs[s];
        const std::int64_t free_cols = n - 2 * (s + 1);
        r.join_choice_formula = free_cols > 0 ? 2 * static_cast<std::uint64_t>(s + 1) * static_cast<std::uint64_t>(free_cols) * next : 0;
        r.join_upper = n - 2 * s > 0 ? 2 * static_cast<std::uint64_t>(n - 2 * s) * r.size : 0;
        t.rows.push_back(r);
    }
    return t;
}

} // namespace latinlab
