#pragma once

#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "latinlab/error.hpp"
#include "latinlab/intercalates.hpp"
#include "latinlab/latin_square.hpp"
#include "latinlab/oracle.hpp"
#include "latinlab/rng.hpp"

namespace latinlab {

/// The +-1 move chain on the n x n x n incidence cube. A state is either a
/// Latin square or an "improper" cube with one -1 entry, where each of the
/// three lines through that entry holds two +1 entries.
///
/// Each line (fixed row+column, row+symbol or column+symbol) keeps the sum of
/// the free coordinate over its entries, weighted by value, and the same sum
/// of squares. A proper line then names its one +1 directly, and the two +1
/// entries of an improper line are the roots of a quadratic. Every lookup is
/// O(1). A dense copy of the cube is kept for the invariant check.
class JacobsonMatthewsChain {
public:
    explicit JacobsonMatthewsChain(const LatinSquare& start, std::uint64_t seed)
        : n_(start.order()), rng_(seed) {
        const auto n3 = static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
        const auto n2 = static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
        cube_.assign(n3, 0);
        for (auto* t : {&rc_, &rs_, &cs_}) {
            t->sum.assign(n2, 0);
            t->sq.assign(n2, 0);
        }
        for (int r = 0; r < n_; ++r) {
            for (int c = 0; c < n_; ++c) add(r, c, start.at(r, c), 1);
        }
    }

    int order() const noexcept { return n_; }
    bool proper() const noexcept { return !improper_; }
    std::uint64_t steps() const noexcept { return steps_; }

    /// One +-1 move.
    void step() {
        ++steps_;
        if (n_ < 2) return;
        int r, c, s, r2, c2, s2;
        if (!improper_) {
            r = rng_.below(n_);
            c = rng_.below(n_);
            const int here = line(rc_, r, c);
            s = rng_.below(n_ - 1);
            if (s >= here) ++s;
            r2 = line(cs_, c, s);
            c2 = line(rs_, r, s);
            s2 = here;
        } else {
            r = bad_r_;
            c = bad_c_;
            s = bad_s_;
            r2 = pick(cs_, c, s, r);
            c2 = pick(rs_, r, s, c);
            s2 = pick(rc_, r, c, s);
        }
        // r2 != r, so the row-column line through (r2, c2) is proper.
        const bool corner_was_one = line(rc_, r2, c2) == s2;
        add(r, c, s, 1);
        add(r, c2, s2, 1);
        add(r2, c, s2, 1);
        add(r2, c2, s, 1);
        add(r, c, s2, -1);
        add(r, c2, s, -1);
        add(r2, c, s, -1);
        add(r2, c2, s2, -1);
        if (corner_was_one) {
            improper_ = false;
        } else {
            improper_ = true;
            bad_r_ = r2;
            bad_c_ = c2;
            bad_s_ = s2;
        }
#ifndef NDEBUG
        check_invariants();
#else
        if ((steps_ & 0xFFFF) == 0) check_invariants();
#endif
    }

    /// Steps until the next proper state (at least one move). Returns the
    /// number of moves made.
    std::uint64_t advance_to_proper() {
        std::uint64_t made = 0;
        do {
            step();
            ++made;
        } while (improper_);
        return made;
    }

    /// The current square; only defined on proper states.
    LatinSquare square() const {
        if (improper_) throw Error("chain state is improper");
        std::vector<int> cells(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_));
        for (int r = 0; r < n_; ++r) {
            for (int c = 0; c < n_; ++c) cells[static_cast<std::size_t>(r * n_ + c)] = line(rc_, r, c);
        }
        return LatinSquare(LatinRectangle::from_cells(n_, n_, std::move(cells)));
    }

    /// Full O(n^3) check of the cube and of the line tables; throws Error.
    void check_invariants() const {
        std::vector<std::int64_t> sum_rc(static_cast<std::size_t>(n_ * n_)), sum_rs(sum_rc.size()), sum_cs(sum_rc.size());
        std::vector<std::int64_t> rc_s(sum_rc.size()), rc_q(sum_rc.size()), rs_s(sum_rc.size()), rs_q(sum_rc.size()), cs_s(sum_rc.size()), cs_q(sum_rc.size());
        int negatives = 0;
        for (int r = 0; r < n_; ++r) {
            for (int c = 0; c < n_; ++c) {
                for (int s = 0; s < n_; ++s) {
                    const int v = cube_[index(r, c, s)];
                    if (v < -1 || v > 1) throw Error("cube entry outside {-1, 0, 1}");
                    if (v == 0) continue;
                    if (v < 0) {
                        ++negatives;
                        if (!improper_ || r != bad_r_ || c != bad_c_ || s != bad_s_) throw Error("unexpected -1 entry");
                    }
                    sum_rc[pair(r, c)] += v;
                    sum_rs[pair(r, s)] += v;
                    sum_cs[pair(c, s)] += v;
                    rc_s[pair(r, c)] += v * s;
                    rc_q[pair(r, c)] += v * s * s;
                    rs_s[pair(r, s)] += v * c;
                    rs_q[pair(r, s)] += v * c * c;
                    cs_s[pair(c, s)] += v * r;
                    cs_q[pair(c, s)] += v * r * r;
                }
            }
        }
        if (negatives != (improper_ ? 1 : 0)) throw Error("wrong number of -1 entries");
        for (std::size_t p = 0; p < sum_rc.size(); ++p) {
            if (sum_rc[p] != 1 || sum_rs[p] != 1 || sum_cs[p] != 1) throw Error("line sum differs from 1");
            if (rc_s[p] != rc_.sum[p] || rc_q[p] != rc_.sq[p] || rs_s[p] != rs_.sum[p] || rs_q[p] != rs_.sq[p] ||
                cs_s[p] != cs_.sum[p] || cs_q[p] != cs_.sq[p]) {
                throw Error("line table out of step with the cube");
            }
        }
    }

private:
    struct LineTable {
        std::vector<std::int64_t> sum;
        std::vector<std::int64_t> sq;
    };

    std::size_t index(int r, int c, int s) const {
        return (static_cast<std::size_t>(r) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(c)) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(s);
    }
    std::size_t pair(int a, int b) const { return static_cast<std::size_t>(a) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(b); }

    void add(int r, int c, int s, int v) {
        cube_[index(r, c, s)] = static_cast<std::int8_t>(cube_[index(r, c, s)] + v);
        rc_.sum[pair(r, c)] += v * s;
        rc_.sq[pair(r, c)] += v * s * s;
        rs_.sum[pair(r, s)] += v * c;
        rs_.sq[pair(r, s)] += v * c * c;
        cs_.sum[pair(c, s)] += v * r;
        cs_.sq[pair(c, s)] += v * r * r;
    }

    // The single +1 on a proper line.
    int line(const LineTable& t, int a, int b) const { return static_cast<int>(t.sum[pair(a, b)]); }

    // One of the two +1 entries on a line through the -1 entry at coordinate m.
    int pick(const LineTable& t, int a, int b, int m) {
        const std::int64_t s = t.sum[pair(a, b)] + m;        // u + w
        const std::int64_t q = t.sq[pair(a, b)] + std::int64_t{m} * m; // u^2 + w^2
        const std::int64_t d2 = 2 * q - s * s;               // (u - w)^2
        auto d = static_cast<std::int64_t>(std::sqrt(static_cast<double>(d2)));
        while (d * d > d2) --d;
        while ((d + 1) * (d + 1) <= d2) ++d;
        const auto u = static_cast<int>((s + d) / 2);
        const auto w = static_cast<int>((s - d) / 2);
        return rng_.coin() ? u : w;
    }

    int n_;
    Rng rng_;
    std::vector<std::int8_t> cube_;
    LineTable rc_, rs_, cs_;
    bool improper_ = false;
    int bad_r_ = -1, bad_c_ = -1, bad_s_ = -1;
    std::uint64_t steps_ = 0;
};

/// burn_in and thinning count moves out of proper squares: one unit is a move
/// from a proper square plus the improper moves that follow it, until the
/// chain is proper again. Samples are therefore read off the chain of proper
/// squares at fixed indices. Negative values select the default n^3.
struct SampleConfig {
    int n = 0;
    std::uint64_t seed = 0;
    std::int64_t burn_in = -1;
    std::int64_t thinning = -1;
    std::uint64_t sample_count = 0;

    std::uint64_t effective_burn_in() const { return burn_in < 0 ? cube() : static_cast<std::uint64_t>(burn_in); }
    std::uint64_t effective_thinning() const { return thinning < 0 ? cube() : static_cast<std::uint64_t>(thinning); }

private:
    std::uint64_t cube() const { return static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n); }
};

using SquareSink = std::function<void(const LatinSquare&)>;

/// Runs one chain from the cyclic square and hands each sample to `sink`.
/// Every emitted square is revalidated through the checked constructor.
inline void sample(const SampleConfig& cfg, const SquareSink& sink) {
    if (cfg.n < 1) throw IndexError("sampler needs n >= 1");
    JacobsonMatthewsChain chain(LatinSquare::cyclic(cfg.n), cfg.seed);
    auto units = [&](std::uint64_t count) {
        for (std::uint64_t t = 0; t < count; ++t) chain.advance_to_proper();
    };
    units(cfg.effective_burn_in());
    for (std::uint64_t k = 0; k < cfg.sample_count; ++k) {
        if (k > 0) units(std::max<std::uint64_t>(cfg.effective_thinning(), 1));
        sink(chain.square());
    }
}

inline std::vector<LatinSquare> sample(const SampleConfig& cfg) {
    std::vector<LatinSquare> out;
    out.reserve(static_cast<std::size_t>(cfg.sample_count));
    sample(cfg, [&](const LatinSquare& L) { out.push_back(L); });
    return out;
}

/// One chain per worker with seed + worker index; worker w draws its share of
/// the samples (the first sample_count % workers workers take one extra).
/// Output order is worker index, then sample index, whatever the threading.
inline std::vector<LatinSquare> sample_parallel(const SampleConfig& cfg, unsigned workers) {
    if (workers == 0) workers = 1;
    std::vector<std::vector<LatinSquare>> parts(workers);
    std::vector<std::exception_ptr> errors(workers);
    auto run = [&](unsigned w) {
        try {
            SampleConfig part = cfg;
            part.seed = cfg.seed + w;
            part.sample_count = cfg.sample_count / workers + (w < cfg.sample_count % workers ? 1 : 0);
            parts[w] = sample(part);
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& t : pool) t.join();
    }
    std::vector<LatinSquare> out;
    for (unsigned w = 0; w < workers; ++w) {
        if (errors[w]) std::rethrow_exception(errors[w]);
        for (auto& L : parts[w]) out.push_back(std::move(L));
    }
    return out;
}

inline constexpr int exact_sampler_limit = 5;

/// Exactly uniform samples: enumerate every square of order n once, then
/// draw indices.
class ExactSampler {
public:
    explicit ExactSampler(int n, int limit = exact_sampler_limit) {
        if (n < 1) throw IndexError("sampler needs n >= 1");
        if (n > limit) throw ResourceError("exact sampling is limited to n <= " + std::to_string(limit));
        squares_ = all_squares(n);
    }

    const std::vector<LatinSquare>& support() const noexcept { return squares_; }

    std::vector<LatinSquare> draw(std::uint64_t count, std::uint64_t seed) const {
        Rng rng(seed);
        std::vector<LatinSquare> out;
        out.reserve(static_cast<std::size_t>(count));
        for (std::uint64_t t = 0; t < count; ++t) out.push_back(squares_[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(squares_.size())))]);
        return out;
    }

    std::vector<std::size_t> draw_indices(std::uint64_t count, std::uint64_t seed) const {
        Rng rng(seed);
        std::vector<std::size_t> out;
        out.reserve(static_cast<std::size_t>(count));
        for (std::uint64_t t = 0; t < count; ++t) out.push_back(static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(squares_.size()))));
        return out;
    }

private:
    std::vector<LatinSquare> squares_;
};

inline std::vector<LatinSquare> sample_exact_small(int n, std::uint64_t count, std::uint64_t seed) {
    return ExactSampler(n).draw(count, seed);
}

/// Result of a search for a square without intercalates.
struct IntercalateFreeSearch {
    bool found = false;
    std::uint64_t steps = 0;
    std::uint64_t best_n = 0;
    LatinSquare square;
};

namespace detail {

// Greedy pass: turn rows i, j on a cycle of sigma_{i,j} whenever that lowers
// N. Returns true if some turn helped.
inline bool descend_once(LatinSquare& L, std::uint64_t& current) {
    const int n = L.order();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const CycleStructure sigma = sigma_row_pair(L, i, j);
            if (sigma.cycles.size() < 2) continue;
            for (const auto& cyc : sigma.cycles) {
                LatinSquare next = L;
                next.exchange_rows(i, j, cyc);
                const std::uint64_t value = count_intercalates(next);
                if (value < current) {
                    L = std::move(next);
                    current = value;
                    return true;
                }
            }
        }
    }
    return false;
}

} // namespace detail

/// Walks the chain from the cyclic square, and at each proper square runs a
/// greedy descent over row-pair turns until no turn lowers N. The starting
/// square itself is not tested. `budget` caps the chain moves.
inline IntercalateFreeSearch find_intercalate_free(int n, std::uint64_t seed, std::uint64_t budget = 10'000'000) {
    if (n < 1) throw IndexError("search needs n >= 1");
    IntercalateFreeSearch out;
    out.square = LatinSquare::cyclic(n);
    out.best_n = UINT64_MAX;
    JacobsonMatthewsChain chain(out.square, seed);
    while (chain.steps() < budget) {
        chain.advance_to_proper();
        LatinSquare L = chain.square();
        std::uint64_t value = count_intercalates(L);
        while (value > 0 && detail::descend_once(L, value)) {
        }
        if (value < out.best_n) {
            out.best_n = value;
            out.square = L;
        }
        if (value == 0) {
            out.found = true;
            break;
        }
    }
    out.steps = chain.steps();
    return out;
}

} // namespace latinlab
