#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "latinlab/error.hpp"
#include "latinlab/intercalates.hpp"
#include "latinlab/latin_square.hpp"
#include "latinlab/permanent.hpp"

namespace latinlab {

/// Exact counts over every k x n Latin rectangle (k = n for squares).
struct EnumerationResult {
    int n = 0;
    int k = 0;
    bool reduced = false;    // first row fixed to the identity, counts scaled by n!
    bool complete = true;    // false when a run stopped early (resume from the checkpoint)
    std::uint64_t units_done = 0;
    std::uint64_t units_total = 0;
    std::uint64_t total_count = 0;
    std::map<std::uint64_t, std::uint64_t> n_histogram; // N(L) -> number of rectangles
    std::map<std::uint64_t, std::uint64_t> class_sizes; // intercalates in rows 1-2 -> number
    std::vector<LatinRectangle> stored;                 // only when collected

    /// E[N] as an exact ratio (numerator, denominator).
    std::pair<std::uint64_t, std::uint64_t> mean_n() const {
        std::uint64_t num = 0;
        for (const auto& [v, c] : n_histogram) num += v * c;
        return {num, total_count};
    }
    std::pair<std::uint64_t, std::uint64_t> mean_two_rows() const {
        std::uint64_t num = 0;
        for (const auto& [v, c] : class_sizes) num += v * c;
        return {num, total_count};
    }
    std::uint64_t min_n() const { return n_histogram.empty() ? 0 : n_histogram.begin()->first; }
};

struct EnumerationOptions {
    bool reduced = false;
    bool collect = false;          // keep every rectangle (small orders only)
    bool long_run = false;         // permits n = 6 squares
    unsigned workers = 1;
    std::uint64_t node_budget = 4'000'000'000ULL;
    std::string checkpoint_path;   // empty: no checkpointing
    std::uint64_t max_units = UINT64_MAX; // stop after this many work units in this run
    std::uint64_t batch_units = 256;
};

inline constexpr int max_square_order = 5;
inline constexpr int max_square_order_long_run = 6;
inline constexpr int max_rectangle_order = 6;

using RectangleVisitor = std::function<void(const LatinRectangle&)>;

namespace detail {

inline std::uint64_t factorial(int n) {
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

struct PartialCounts {
    std::uint64_t total = 0;
    std::uint64_t nodes = 0;
    std::map<std::uint64_t, std::uint64_t> n_histogram;
    std::map<std::uint64_t, std::uint64_t> class_sizes;

    void merge(const PartialCounts& o) {
        total += o.total;
        nodes += o.nodes;
        for (const auto& [v, c] : o.n_histogram) n_histogram[v] += c;
        for (const auto& [v, c] : o.class_sizes) class_sizes[v] += c;
    }
};

// Work units are the valid leading prefixes of min(k, 2) rows, in
// lexicographic order.
inline std::vector<std::vector<int>> prefix_units(int k, int n, bool reduced) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::vector<std::vector<int>> firsts;
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
    do {
        firsts.push_back(p);
        if (reduced) break;
    } while (std::next_permutation(p.begin(), p.end()));
    if (k == 1) return firsts;
    std::vector<std::vector<int>> units;
    for (const auto& f : firsts) {
        for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
        do {
            bool ok = true;
            for (int x = 0; x < n && ok; ++x) ok = p[static_cast<std::size_t>(x)] != f[static_cast<std::size_t>(x)];
            if (!ok) continue;
            std::vector<int> unit = f;
            unit.insert(unit.end(), p.begin(), p.end());
            units.push_back(std::move(unit));
        } while (std::next_permutation(p.begin(), p.end()));
    }
    return units;
}

// Fills rows after the prefix cell by cell with row/column bitmasks.
inline void complete_prefix(int k, int n, const std::vector<int>& prefix, PartialCounts& out, std::uint64_t budget,
                            const RectangleVisitor* visit, std::vector<LatinRectangle>* store) {
    std::vector<int> cells = prefix;
    cells.resize(static_cast<std::size_t>(k) * static_cast<std::size_t>(n), -1);
    std::vector<std::uint32_t> row_used(static_cast<std::size_t>(k), 0), col_used(static_cast<std::size_t>(n), 0);
    const int fixed_rows = static_cast<int>(prefix.size()) / n;
    for (int i = 0; i < fixed_rows; ++i) {
        for (int x = 0; x < n; ++x) {
            const int s = prefix[static_cast<std::size_t>(i * n + x)];
            row_used[static_cast<std::size_t>(i)] |= 1u << s;
            col_used[static_cast<std::size_t>(x)] |= 1u << s;
        }
    }
    const int first = fixed_rows * n;
    const int last = k * n;
    auto leaf = [&] {
        LatinRectangle L = LatinRectangle::from_cells(k, n, cells);
        ++out.total;
        ++out.n_histogram[count_intercalates(L)];
        if (k >= 2) ++out.class_sizes[static_cast<std::uint64_t>(count_two_rows(L, 0, 1))];
        if (visit) (*visit)(L);
        if (store) store->push_back(std::move(L));
    };
    auto fill = [&](auto&& self, int pos) -> void {
        if (++out.nodes > budget) throw ResourceError("enumeration exceeded node budget " + std::to_string(budget));
        if (pos == last) {
            leaf();
            return;
        }
        const int i = pos / n;
        const int x = pos % n;
        const std::uint32_t blocked = row_used[static_cast<std::size_t>(i)] | col_used[static_cast<std::size_t>(x)];
        for (int s = 0; s < n; ++s) {
            const std::uint32_t bit = 1u << s;
            if (blocked & bit) continue;
            cells[static_cast<std::size_t>(pos)] = s;
            row_used[static_cast<std::size_t>(i)] |= bit;
            col_used[static_cast<std::size_t>(x)] |= bit;
            self(self, pos + 1);
            row_used[static_cast<std::size_t>(i)] &= ~bit;
            col_used[static_cast<std::size_t>(x)] &= ~bit;
        }
        cells[static_cast<std::size_t>(pos)] = -1;
    };
    fill(fill, first);
}

inline nlohmann::json histogram_to_json(const std::map<std::uint64_t, std::uint64_t>& h) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [v, c] : h) j[std::to_string(v)] = c;
    return j;
}

inline std::map<std::uint64_t, std::uint64_t> histogram_from_json(const nlohmann::json& j) {
    std::map<std::uint64_t, std::uint64_t> h;
    for (const auto& [key, value] : j.items()) h[std::stoull(key)] = value.get<std::uint64_t>();
    return h;
}

} // namespace detail

/// Checkpoint layout (JSON, version 1):
///   {"format": "latinlab-enumeration-checkpoint", "version": 1,
///    "k": k, "n": n, "reduced": bool, "units_total": U, "cursor": c,
///    "total": raw count over units [0, c), "nodes": nodes visited,
///    "n_histogram": {"N": count, ...}, "class_sizes": {"s": count, ...}}
/// Counts are raw (before the n! scaling of a reduced run). Units are the
/// leading two-row prefixes in lexicographic order; a resumed run starts at
/// unit `cursor`. Files are replaced atomically (write then rename).
struct EnumerationCheckpoint {
    int k = 0;
    int n = 0;
    bool reduced = false;
    std::uint64_t units_total = 0;
    std::uint64_t cursor = 0;
    detail::PartialCounts counts;

    nlohmann::json to_json() const {
        return {{"format", "latinlab-enumeration-checkpoint"},
                {"version", 1},
                {"k", k},
                {"n", n},
                {"reduced", reduced},
                {"units_total", units_total},
                {"cursor", cursor},
                {"total", counts.total},
                {"nodes", counts.nodes},
                {"n_histogram", detail::histogram_to_json(counts.n_histogram)},
                {"class_sizes", detail::histogram_to_json(counts.class_sizes)}};
    }

    static EnumerationCheckpoint from_json(const nlohmann::json& j) {
        if (j.value("format", "") != "latinlab-enumeration-checkpoint" || j.value("version", 0) != 1) {
            throw Error("not a version-1 enumeration checkpoint");
        }
        EnumerationCheckpoint c;
        c.k = j.at("k").get<int>();
        c.n = j.at("n").get<int>();
        c.reduced = j.at("reduced").get<bool>();
        c.units_total = j.at("units_total").get<std::uint64_t>();
        c.cursor = j.at("cursor").get<std::uint64_t>();
        c.counts.total = j.at("total").get<std::uint64_t>();
        c.counts.nodes = j.at("nodes").get<std::uint64_t>();
        c.counts.n_histogram = detail::histogram_from_json(j.at("n_histogram"));
        c.counts.class_sizes = detail::histogram_from_json(j.at("class_sizes"));
        return c;
    }

    void save(const std::string& path) const {
        const std::string tmp = path + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw Error("cannot write checkpoint " + tmp);
            out << to_json().dump(2) << '\n';
        }
        std::filesystem::rename(tmp, path);
    }

    static std::optional<EnumerationCheckpoint> load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) return std::nullopt;
        return from_json(nlohmann::json::parse(in));
    }
};

/// Visits every k x n Latin rectangle once (row-by-row backtracking) and
/// tallies N(L) and the intercalate count of rows 1-2. With a visitor the
/// run is single-threaded so visits happen in lexicographic order.
inline EnumerationResult enumerate_rectangles(int k, int n, const EnumerationOptions& opt = {},
                                              const RectangleVisitor& visit = {}) {
    if (n < 1 || k < 1 || k > n) throw IndexError("need 1 <= k <= n");
    if (n > max_rectangle_order) throw ResourceError("rectangle enumeration is limited to n <= " + std::to_string(max_rectangle_order));
    const auto units = detail::prefix_units(k, n, opt.reduced);

    EnumerationCheckpoint state{k, n, opt.reduced, units.size(), 0, {}};
    if (!opt.checkpoint_path.empty()) {
        if (auto saved = EnumerationCheckpoint::load(opt.checkpoint_path)) {
            if (saved->k != k || saved->n != n || saved->reduced != opt.reduced || saved->units_total != units.size()) {
                throw Error("checkpoint " + opt.checkpoint_path + " belongs to a different enumeration");
            }
            state = *saved;
        }
    }

    EnumerationResult result;
    result.n = n;
    result.k = k;
    result.reduced = opt.reduced;
    result.units_total = units.size();
    const bool serial = visit || opt.collect || opt.workers <= 1;
    const RectangleVisitor* visit_ptr = visit ? &visit : nullptr;
    std::vector<LatinRectangle>* store = opt.collect ? &result.stored : nullptr;

    std::uint64_t done_this_run = 0;
    while (state.cursor < units.size() && done_this_run < opt.max_units) {
        const std::uint64_t batch = std::min({opt.batch_units, static_cast<std::uint64_t>(units.size()) - state.cursor, opt.max_units - done_this_run});
        const std::uint64_t remaining_budget = opt.node_budget > state.counts.nodes ? opt.node_budget - state.counts.nodes : 0;
        if (serial) {
            detail::PartialCounts part;
            for (std::uint64_t u = state.cursor; u < state.cursor + batch; ++u) {
                detail::complete_prefix(k, n, units[static_cast<std::size_t>(u)], part, remaining_budget, visit_ptr, store);
            }
            state.counts.merge(part);
        } else {
            const unsigned w = std::min<unsigned>(opt.workers, static_cast<unsigned>(batch));
            std::vector<detail::PartialCounts> parts(w);
            std::vector<std::exception_ptr> errors(w);
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < w; ++t) {
                pool.emplace_back([&, t] {
                    try {
                        for (std::uint64_t u = state.cursor + t; u < state.cursor + batch; u += w) {
                            detail::complete_prefix(k, n, units[static_cast<std::size_t>(u)], parts[t], remaining_budget / w + 1, nullptr, nullptr);
                        }
                    } catch (...) {
                        errors[t] = std::current_exception();
                    }
                });
            }
            for (auto& th : pool) th.join();
            for (auto& e : errors) {
                if (e) std::rethrow_exception(e);
            }
            for (const auto& p : parts) state.counts.merge(p);
        }
        state.cursor += batch;
        done_this_run += batch;
        if (state.counts.nodes > opt.node_budget) throw ResourceError("enumeration exceeded node budget " + std::to_string(opt.node_budget));
        if (!opt.checkpoint_path.empty()) state.save(opt.checkpoint_path);
    }

    result.complete = state.cursor == units.size();
    result.units_done = state.cursor;
    const std::uint64_t scale = opt.reduced ? detail::factorial(n) : 1;
    result.total_count = state.counts.total * scale;
    for (const auto& [v, c] : state.counts.n_histogram) result.n_histogram[v] = c * scale;
    for (const auto& [v, c] : state.counts.class_sizes) result.class_sizes[v] = c * scale;
    return result;
}

/// Every n x n Latin square. n <= 5, or n = 6 with opt.long_run.
inline EnumerationResult enumerate_squares(int n, const EnumerationOptions& opt = {}, const RectangleVisitor& visit = {}) {
    const int limit = opt.long_run ? max_square_order_long_run : max_square_order;
    if (n > limit) {
        throw ResourceError("square enumeration is limited to n <= " + std::to_string(limit) +
                            (opt.long_run ? "" : " (n = 6 needs the long-run flag)"));
    }
    return enumerate_rectangles(n, n, opt, visit);
}

/// All squares of order n <= 5 as LatinSquare values, lexicographic order.
inline std::vector<LatinSquare> all_squares(int n) {
    std::vector<LatinSquare> out;
    enumerate_squares(n, {}, [&](const LatinRectangle& L) { out.emplace_back(L); });
    return out;
}

// ---------------------------------------------------------------------------
// Regular bipartite graphs, matchings and 1-factorizations
// ---------------------------------------------------------------------------

inline constexpr int max_regular_enumeration_order = 4;

/// Every d-regular bipartite graph on [n] + [n], as 0/1 biadjacency matrices
/// (rows are d-subsets; column sums checked), lexicographic by row masks.
inline std::vector<Matrix> enumerate_regular_bipartite_graphs(int n, int d, int max_order = max_regular_enumeration_order) {
    if (n < 1 || d < 0 || d > n) throw IndexError("need 0 <= d <= n, n >= 1");
    if (n > max_order) throw ResourceError("regular bipartite enumeration is limited to n <= " + std::to_string(max_order));
    std::vector<std::uint32_t> masks;
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
        if (std::popcount(m) == d) masks.push_back(m);
    }
    std::vector<Matrix> out;
    std::vector<std::uint32_t> rows(static_cast<std::size_t>(n));
    std::vector<int> col_sum(static_cast<std::size_t>(n), 0);
    auto rec = [&](auto&& self, int i) -> void {
        if (i == n) {
            for (int c : col_sum) {
                if (c != d) return;
            }
            Matrix m(static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));
            for (int r = 0; r < n; ++r) {
                for (int c = 0; c < n; ++c) m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = (rows[static_cast<std::size_t>(r)] >> c) & 1u;
            }
            out.push_back(std::move(m));
            return;
        }
        for (std::uint32_t m : masks) {
            bool ok = true;
            for (int c = 0; c < n && ok; ++c) ok = col_sum[static_cast<std::size_t>(c)] + static_cast<int>((m >> c) & 1u) <= d;
            if (!ok) continue;
            rows[static_cast<std::size_t>(i)] = m;
            for (int c = 0; c < n; ++c) col_sum[static_cast<std::size_t>(c)] += static_cast<int>((m >> c) & 1u);
            self(self, i + 1);
            for (int c = 0; c < n; ++c) col_sum[static_cast<std::size_t>(c)] -= static_cast<int>((m >> c) & 1u);
        }
    };
    rec(rec, 0);
    return out;
}

/// |G_d|: the number of d-regular bipartite graphs on [n] + [n].
inline std::uint64_t enumerate_regular_bipartite(int n, int d) {
    return enumerate_regular_bipartite_graphs(n, d).size();
}

/// Perfect matchings of a 0/1 biadjacency matrix, each as row -> column.
inline std::vector<std::vector<int>> perfect_matchings(const Matrix& g) {
    const int n = static_cast<int>(g.size());
    std::vector<std::vector<int>> out;
    std::vector<int> match(static_cast<std::size_t>(n), -1);
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    auto rec = [&](auto&& self, int i) -> void {
        if (i == n) {
            out.push_back(match);
            return;
        }
        for (int c = 0; c < n; ++c) {
            if (!g[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] || used[static_cast<std::size_t>(c)]) continue;
            used[static_cast<std::size_t>(c)] = 1;
            match[static_cast<std::size_t>(i)] = c;
            self(self, i + 1);
            used[static_cast<std::size_t>(c)] = 0;
        }
    };
    rec(rec, 0);
    return out;
}

/// Phi(G): ordered 1-factorizations (sequences of d disjoint perfect
/// matchings covering G), by removing one matching at a time. Memoized.
inline BigInt count_one_factorizations(const Matrix& g) {
    std::unordered_map<std::string, BigInt> memo;
    auto key_of = [](const Matrix& m) {
        std::string k;
        for (const auto& r : m) {
            for (auto v : r) k.push_back(static_cast<char>(v ? '1' : '0'));
        }
        return k;
    };
    auto rec = [&](auto&& self, const Matrix& m) -> BigInt {
        bool empty = true;
        for (const auto& r : m) {
            for (auto v : r) empty = empty && v == 0;
        }
        if (empty) return 1;
        const auto key = key_of(m);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        BigInt total = 0;
        for (const auto& pm : perfect_matchings(m)) {
            Matrix rest = m;
            for (std::size_t r = 0; r < pm.size(); ++r) rest[r][static_cast<std::size_t>(pm[r])] = 0;
            total += self(self, rest);
        }
        memo.emplace(key, total);
        return total;
    };
    return rec(rec, g);
}

} // namespace latinlab
