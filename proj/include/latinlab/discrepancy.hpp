#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "latinlab/box.hpp"
#include "latinlab/error.hpp"
#include "latinlab/latin_square.hpp"
#include "latinlab/permanent.hpp"
#include "latinlab/rng.hpp"

namespace latinlab {

/// G_Q(L): row i and column x are adjacent iff L[i][x] lies in Q.
struct QGraph {
    int n = 0;
    int degree = 0;
    Matrix biadjacency;

    /// e(I, X): edges between the row set I and the column set X.
    std::uint64_t edge_count(const std::vector<int>& rows, const std::vector<int>& columns) const {
        std::uint64_t e = 0;
        for (int i : rows) {
            for (int x : columns) e += static_cast<std::uint64_t>(biadjacency[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)]);
        }
        return e;
    }

    bool is_regular() const {
        for (int a = 0; a < n; ++a) {
            std::int64_t row = 0, col = 0;
            for (int b = 0; b < n; ++b) {
                row += biadjacency[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
                col += biadjacency[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)];
            }
            if (row != degree || col != degree) return false;
        }
        return true;
    }
};

inline QGraph q_graph(const LatinSquare& L, std::vector<int> symbols) {
    const int n = L.order();
    Box probe{{}, {}, std::move(symbols)};
    probe.normalize(n);
    const auto in_q = membership(probe.symbols, n);
    QGraph g;
    g.n = n;
    g.degree = static_cast<int>(probe.symbols.size());
    g.biadjacency.assign(static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));
    for (int i = 0; i < n; ++i) {
        for (int x = 0; x < n; ++x) g.biadjacency[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)] = in_q[static_cast<std::size_t>(L.at(i, x))];
    }
    return g;
}

/// sqrt(vol) ln n + n ln^2 n (natural logarithm).
inline double discrepancy_bound(int n, std::uint64_t volume) {
    const double ln = std::log(static_cast<double>(n));
    return std::sqrt(static_cast<double>(volume)) * ln + n * ln * ln;
}

struct BoxStat {
    int n = 0;
    Box box;
    std::uint64_t volume = 0;
    std::uint64_t observed = 0;
    double expected = 0;
    double deviation = 0;
    double bound = 0;
    double ratio = 0;       // deviation / bound; 0 when both vanish
    std::uint64_t seed = 0; // the seed the box was drawn from
    std::string strategy;
};

inline BoxStat box_stat(const LatinSquare& L, Box box, std::uint64_t seed = 0, std::string strategy = "given") {
    box.normalize(L.order());
    BoxStat s;
    s.n = L.order();
    s.volume = box.volume();
    s.observed = incidence_count(L, box);
    s.expected = static_cast<double>(s.volume) / s.n;
    s.deviation = std::abs(static_cast<double>(s.observed) - s.expected);
    s.bound = discrepancy_bound(s.n, s.volume);
    s.ratio = s.bound > 0 ? s.deviation / s.bound : (s.deviation > 0 ? INFINITY : 0.0);
    s.seed = seed;
    s.strategy = std::move(strategy);
    s.box = std::move(box);
    return s;
}

enum class BoxStrategy { uniform_element, size_grid, structured_intervals };

inline std::string_view strategy_name(BoxStrategy s) {
    switch (s) {
    case BoxStrategy::uniform_element: return "uniform-element";
    case BoxStrategy::size_grid: return "size-grid";
    case BoxStrategy::structured_intervals: return "structured-intervals";
    }
    return "?";
}

inline BoxStrategy parse_strategy(std::string_view name) {
    for (auto s : {BoxStrategy::uniform_element, BoxStrategy::size_grid, BoxStrategy::structured_intervals}) {
        if (strategy_name(s) == name) return s;
    }
    throw Error("unknown box strategy '" + std::string(name) + "'");
}

/// 1, 2, 4, ... up to n, with n itself always included.
inline std::vector<int> geometric_sizes(int n) {
    std::vector<int> sizes;
    for (int s = 1; s < n; s *= 2) sizes.push_back(s);
    sizes.push_back(n);
    return sizes;
}

/// Draws one box. uniform-element keeps each index with probability 1/2;
/// size-grid draws the three sizes from geometric_sizes(n) and then uniform
/// sets of those sizes; structured-intervals uses contiguous index ranges
/// with uniform length in 1..n and uniform start.
inline Box random_box(int n, BoxStrategy strategy, Rng& rng) {
    Box b;
    switch (strategy) {
    case BoxStrategy::uniform_element:
        b.rows = rng.half_subset(n);
        b.columns = rng.half_subset(n);
        b.symbols = rng.half_subset(n);
        break;
    case BoxStrategy::size_grid: {
        const auto sizes = geometric_sizes(n);
        auto draw = [&] { return rng.subset(n, sizes[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(sizes.size())))]); };
        b.rows = draw();
        b.columns = draw();
        b.symbols = draw();
        break;
    }
    case BoxStrategy::structured_intervals: {
        auto draw = [&] {
            const int len = 1 + rng.below(n);
            const int start = rng.below(n - len + 1);
            std::vector<int> v(static_cast<std::size_t>(len));
            for (int t = 0; t < len; ++t) v[static_cast<std::size_t>(t)] = start + t;
            return v;
        };
        b.rows = draw();
        b.columns = draw();
        b.symbols = draw();
        break;
    }
    }
    return b;
}

/// Box b is drawn from its own generator seeded with derive_seed(seed, b), so
/// the list does not depend on how the work is split.
inline std::vector<BoxStat> box_scan(const LatinSquare& L, BoxStrategy strategy, std::uint64_t count, std::uint64_t seed) {
    std::vector<BoxStat> out;
    out.reserve(static_cast<std::size_t>(count));
    const std::string name(strategy_name(strategy));
    for (std::uint64_t b = 0; b < count; ++b) {
        const std::uint64_t box_seed = derive_seed(seed, b);
        Rng rng(box_seed);
        out.push_back(box_stat(L, random_box(L.order(), strategy, rng), box_seed, name));
    }
    return out;
}

inline double max_ratio(const std::vector<BoxStat>& stats) {
    double m = 0;
    for (const auto& s : stats) m = std::max(m, s.ratio);
    return m;
}

/// M random k-subsets of the n rows with the exact count of sets covering
/// each pair.
struct CoverFamily {
    int n = 0;
    int k = 0;
    std::uint64_t m = 0;
    std::vector<std::vector<int>> sets;
    std::vector<std::uint64_t> pair_coverage;          // pair (i < j) at i * n + j
    std::map<std::uint64_t, std::uint64_t> histogram;  // coverage -> pairs

    std::uint64_t coverage(int i, int j) const {
        if (i > j) std::swap(i, j);
        return pair_coverage[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
    }
    std::uint64_t min_coverage() const { return histogram.empty() ? 0 : histogram.begin()->first; }
    std::uint64_t max_coverage() const { return histogram.empty() ? 0 : histogram.rbegin()->first; }
    std::uint64_t total_coverage() const {
        std::uint64_t t = 0;
        for (const auto& [v, c] : histogram) t += v * c;
        return t;
    }
};

inline CoverFamily build_cover(int n, int k, std::uint64_t m, std::uint64_t seed) {
    if (n < 1 || k < 0 || k > n) throw IndexError("cover needs 0 <= k <= n");
    if (m < 1) throw IndexError("cover needs M >= 1");
    CoverFamily f;
    f.n = n;
    f.k = k;
    f.m = m;
    f.pair_coverage.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    Rng rng(seed);
    f.sets.reserve(static_cast<std::size_t>(m));
    for (std::uint64_t t = 0; t < m; ++t) {
        auto set = rng.subset(n, k);
        for (std::size_t a = 0; a < set.size(); ++a) {
            for (std::size_t b = a + 1; b < set.size(); ++b) ++f.pair_coverage[static_cast<std::size_t>(set[a]) * static_cast<std::size_t>(n) + static_cast<std::size_t>(set[b])];
        }
        f.sets.push_back(std::move(set));
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) ++f.histogram[f.coverage(i, j)];
    }
    return f;
}

/// The band M (k/n)^2 (1 +- 5 (ln n / (sqrt(M) k/n) + k/n)) set against the
/// observed extremes. The regime ratio is M / (n ln n / k)^2; below
/// `regime_threshold` the report is advisory only.
struct CoverReport {
    double center = 0;
    double low = 0;
    double high = 0;
    double exact_mean = 0; // M k (k-1) / (n (n-1))
    std::uint64_t min_coverage = 0;
    std::uint64_t max_coverage = 0;
    std::uint64_t pairs_outside = 0;
    double regime_ratio = 0;
    bool in_regime = false;
    bool within_band = false;
};

inline constexpr double regime_threshold = 10.0;

inline CoverReport cover_report(const CoverFamily& f) {
    CoverReport r;
    const double n = f.n, k = f.k, m = static_cast<double>(f.m);
    const double frac = k / n;
    const double ln = std::log(n);
    r.center = m * frac * frac;
    const double spread = frac > 0 ? 5.0 * (ln / (std::sqrt(m) * frac) + frac) : INFINITY;
    r.low = r.center * (1.0 - spread);
    r.high = r.center * (1.0 + spread);
    r.exact_mean = f.n > 1 ? m * k * (k - 1) / (n * (n - 1)) : 0.0;
    r.min_coverage = f.min_coverage();
    r.max_coverage = f.max_coverage();
    for (const auto& [v, c] : f.histogram) {
        const double x = static_cast<double>(v);
        if (x < r.low || x > r.high) r.pairs_outside += c;
    }
    const double scale = frac > 0 && ln > 0 ? n * ln / k : 0.0;
    r.regime_ratio = scale > 0 ? m / (scale * scale) : INFINITY;
    r.in_regime = r.regime_ratio >= regime_threshold;
    r.within_band = r.pairs_outside == 0;
    return r;
}

} // namespace latinlab
