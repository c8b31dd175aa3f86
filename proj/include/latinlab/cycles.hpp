#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "latinlab/error.hpp"

namespace latinlab {

/// Cycle decomposition of a permutation of {0..n-1}.
///
/// Cycles are canonical: each starts at its minimum element and follows the
/// permutation from there; cycles are ordered by minimum. Two structures of
/// the same permutation therefore compare equal member by member.
struct CycleStructure {
    std::vector<int> perm;
    std::vector<std::vector<int>> cycles;
    std::vector<int> cycle_of;
    std::vector<int> counts_by_length; // counts_by_length[a] = number of a-cycles

    static CycleStructure of(std::vector<int> permutation) {
        CycleStructure cs;
        const auto n = permutation.size();
        cs.perm = std::move(permutation);
        cs.cycle_of.assign(n, -1);
        cs.counts_by_length.assign(n + 1, 0);
        for (std::size_t start = 0; start < n; ++start) {
            if (cs.cycle_of[start] != -1) continue;
            const int index = static_cast<int>(cs.cycles.size());
            std::vector<int> cycle;
            int x = static_cast<int>(start);
            while (cs.cycle_of[static_cast<std::size_t>(x)] == -1) {
                cs.cycle_of[static_cast<std::size_t>(x)] = index;
                cycle.push_back(x);
                x = cs.perm[static_cast<std::size_t>(x)];
                if (x < 0 || static_cast<std::size_t>(x) >= n) throw Error("not a permutation");
            }
            if (x != static_cast<int>(start)) throw Error("not a permutation");
            ++cs.counts_by_length[cycle.size()];
            cs.cycles.push_back(std::move(cycle));
        }
        return cs;
    }

    int size() const noexcept { return static_cast<int>(perm.size()); }

    int count(int length) const noexcept {
        if (length < 0 || length >= static_cast<int>(counts_by_length.size())) return 0;
        return counts_by_length[static_cast<std::size_t>(length)];
    }

    const std::vector<int>& cycle_containing(int x) const {
        return cycles[static_cast<std::size_t>(cycle_of.at(static_cast<std::size_t>(x)))];
    }

    int length_of_cycle_containing(int x) const {
        return static_cast<int>(cycle_containing(x).size());
    }

    bool same_cycle(int x, int y) const { return cycle_of.at(static_cast<std::size_t>(x)) == cycle_of.at(static_cast<std::size_t>(y)); }

    bool is_derangement() const noexcept { return count(1) == 0; }

    /// Whether `set` (any order) is exactly one of the cycles.
    bool is_cycle(std::span<const int> set) const {
        if (set.empty()) return false;
        const int first = set.front();
        if (first < 0 || first >= size()) return false;
        const auto& c = cycle_containing(first);
        if (c.size() != set.size()) return false;
        return std::all_of(set.begin(), set.end(), [&](int x) {
            return x >= 0 && x < size() && cycle_of[static_cast<std::size_t>(x)] == cycle_of[static_cast<std::size_t>(first)];
        });
    }

    int apply(int x, int times = 1) const {
        for (int t = 0; t < times; ++t) x = perm.at(static_cast<std::size_t>(x));
        return x;
    }

    CycleStructure inverse() const {
        std::vector<int> inv(perm.size());
        for (std::size_t x = 0; x < perm.size(); ++x) inv[static_cast<std::size_t>(perm[x])] = static_cast<int>(x);
        return of(std::move(inv));
    }

    /// Cycle lengths sorted ascending (the cycle-type multiset).
    std::vector<int> cycle_type() const {
        std::vector<int> lengths;
        for (const auto& c : cycles) lengths.push_back(static_cast<int>(c.size()));
        std::sort(lengths.begin(), lengths.end());
        return lengths;
    }

    friend bool operator==(const CycleStructure&, const CycleStructure&) = default;
};

} // namespace latinlab
