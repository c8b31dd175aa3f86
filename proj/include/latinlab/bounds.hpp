#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "latinlab/error.hpp"
#include "latinlab/oracle.hpp"
#include "latinlab/permanent.hpp"
#include "latinlab/rng.hpp"

namespace latinlab {

/// Absolute tolerance for comparisons of natural-log bound values.
inline constexpr double log_tolerance = 1e-9;

namespace detail {

inline void check_degree(int d, int n) {
    if (n < 1 || d < 0 || d > n) throw IndexError("need 0 <= d <= n and n >= 1, got d = " + std::to_string(d) + ", n = " + std::to_string(n));
}

inline double log_choose(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// x log x with 0 log 0 = 0.
inline double xlogx(double x) { return x > 0 ? x * std::log(x) : 0.0; }

} // namespace detail

/// log(n! (d/n)^n), the lower bound on perfect matchings of a d-regular
/// bipartite graph. d = 0 gives 0 (empty product).
inline double vdw_lower(int d, int n) {
    detail::check_degree(d, n);
    if (d == 0) return 0.0;
    return std::lgamma(n + 1.0) + n * std::log(static_cast<double>(d) / n);
}

/// log((d!)^(n/d)), the matching upper bound. d = 0 gives 0.
inline double bregman_upper(int d, int n) {
    detail::check_degree(d, n);
    if (d == 0) return 0.0;
    return static_cast<double>(n) / d * std::lgamma(d + 1.0);
}

/// Log bounds on ordered 1-factorizations, peeling one matching at a time:
/// the sums over k = 1..d of vdw_lower(k, n) and bregman_upper(k, n).
/// c is (upper - lower) / (n (log^2 d + 1)).
struct FactorizationBounds {
    double log_lower = 0;
    double log_upper = 0;
    double c = 0;
};

inline FactorizationBounds factorization_bounds(int d, int n) {
    detail::check_degree(d, n);
    FactorizationBounds b;
    for (int k = 1; k <= d; ++k) {
        b.log_lower += vdw_lower(k, n);
        b.log_upper += bregman_upper(k, n);
    }
    if (d > 0) {
        const double ld = std::log(static_cast<double>(d));
        b.c = (b.log_upper - b.log_lower) / (n * (ld * ld + 1.0));
    }
    return b;
}

/// log of C(n, d)^(2n) (p^p (1-p)^(1-p))^(n^2), p = d/n: a lower bound on the
/// number of d-regular bipartite graphs on [n] + [n].
inline double or_lower_bound(int d, int n) {
    detail::check_degree(d, n);
    const double p = static_cast<double>(d) / n;
    return 2.0 * n * detail::log_choose(n, d) + static_cast<double>(n) * n * (detail::xlogx(p) + detail::xlogx(1.0 - p));
}

/// Exact count of d-regular bipartite graphs against the lower bound, plus
/// the probability that the binomial bipartite graph with edge probability
/// p = d/n is d-regular.
struct RegularProbabilityReport {
    int n = 0;
    int d = 0;
    std::uint64_t exact_count = 0;
    double log_exact = 0;
    double log_bound = 0;
    bool bound_holds = false;
    double log_probability_regular = 0;   // |G_d| p^(nd) (1-p)^(n(n-d))
    double log_probability_edge_count = 0; // Pr(exactly nd edges)
    double log_fraction_given_edges = 0;  // |G_d| / C(n^2, nd)
};

inline RegularProbabilityReport regular_probability_report(int n, int d) {
    detail::check_degree(d, n);
    if (n > max_regular_enumeration_order) throw ResourceError("regular graph report is limited to n <= " + std::to_string(max_regular_enumeration_order));
    RegularProbabilityReport r;
    r.n = n;
    r.d = d;
    r.exact_count = enumerate_regular_bipartite(n, d);
    r.log_exact = std::log(static_cast<double>(r.exact_count));
    r.log_bound = or_lower_bound(d, n);
    r.bound_holds = r.log_bound <= r.log_exact + log_tolerance;
    const double p = static_cast<double>(d) / n;
    const double edges = static_cast<double>(n) * d;
    const double non_edges = static_cast<double>(n) * (n - d);
    const double log_p = d > 0 ? std::log(p) : 0.0;
    const double log_q = d < n ? std::log(1.0 - p) : 0.0;
    const double log_graph = edges * log_p + non_edges * log_q;
    r.log_probability_regular = r.log_exact + log_graph;
    r.log_probability_edge_count = detail::log_choose(n * n, n * d) + log_graph;
    r.log_fraction_given_edges = r.log_exact - detail::log_choose(n * n, n * d);
    return r;
}

/// Uniform random d-regular bipartite graph: each row a uniform d-subset,
/// retried until every column sum is d.
inline Matrix random_regular_bipartite(int n, int d, Rng& rng, std::uint64_t max_tries = 100'000'000) {
    detail::check_degree(d, n);
    for (std::uint64_t t = 0; t < max_tries; ++t) {
        Matrix g(static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));
        std::vector<int> col(static_cast<std::size_t>(n), 0);
        bool ok = true;
        for (int r = 0; r < n && ok; ++r) {
            for (int c : rng.subset(n, d)) {
                g[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = 1;
                ok = ok && ++col[static_cast<std::size_t>(c)] <= d;
            }
        }
        if (ok) return g;
    }
    throw ResourceError("no regular graph within the retry budget");
}

/// One checked graph in the matching sandwich.
struct SandwichCase {
    int n = 0;
    int d = 0;
    double log_lower = 0;
    double log_permanent = 0;
    double log_upper = 0;
    BigInt permanent;
    bool holds = false;
};

inline SandwichCase sandwich_case(const Matrix& g, int d) {
    SandwichCase s;
    s.n = static_cast<int>(g.size());
    s.d = d;
    s.permanent = exact_permanent(g).value;
    s.log_permanent = log_value(s.permanent);
    s.log_lower = vdw_lower(d, s.n);
    s.log_upper = bregman_upper(d, s.n);
    s.holds = s.log_lower <= s.log_permanent + log_tolerance && s.log_permanent <= s.log_upper + log_tolerance;
    return s;
}

/// Summary over many graphs of one (n, d).
struct SandwichRow {
    int n = 0;
    int d = 0;
    std::uint64_t graphs = 0;
    bool exhaustive = false;
    double log_lower = 0;
    double min_log_permanent = 0;
    double max_log_permanent = 0;
    double log_upper = 0;
    std::uint64_t failures = 0;
};

/// Exhaustive over all d-regular graphs for n <= 4, otherwise `samples`
/// random graphs from a seed derived from (seed, n, d).
inline SandwichRow sandwich_row(int n, int d, std::uint64_t samples, std::uint64_t seed) {
    SandwichRow row;
    row.n = n;
    row.d = d;
    row.log_lower = vdw_lower(d, n);
    row.log_upper = bregman_upper(d, n);
    row.min_log_permanent = INFINITY;
    row.max_log_permanent = -INFINITY;
    auto take = [&](const Matrix& g) {
        const SandwichCase c = sandwich_case(g, d);
        ++row.graphs;
        row.min_log_permanent = std::min(row.min_log_permanent, c.log_permanent);
        row.max_log_permanent = std::max(row.max_log_permanent, c.log_permanent);
        if (!c.holds) ++row.failures;
    };
    if (n <= max_regular_enumeration_order) {
        row.exhaustive = true;
        for (const auto& g : enumerate_regular_bipartite_graphs(n, d)) take(g);
    } else {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(n) * 1000 + static_cast<std::uint64_t>(d)));
        for (std::uint64_t t = 0; t < samples; ++t) take(random_regular_bipartite(n, d, rng));
    }
    return row;
}

} // namespace latinlab
