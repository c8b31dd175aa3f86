#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "latinlab/bounds.hpp"
#include "latinlab/config.hpp"
#include "latinlab/discrepancy.hpp"
#include "latinlab/error.hpp"
#include "latinlab/facts.hpp"
#include "latinlab/intercalates.hpp"
#include "latinlab/manifest.hpp"
#include "latinlab/oracle.hpp"
#include "latinlab/sampler.hpp"
#include "latinlab/serialization.hpp"
#include "latinlab/table.hpp"
#include "latinlab/twist.hpp"

namespace latinlab::cli {

enum ExitCode : int { exit_ok = 0, exit_violation = 1, exit_resource = 2, exit_usage = 3 };

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"census", "sample", "verify-facts", "class-ratios", "enumerate",
                                                "discrepancy", "bounds", "cover", "twist-count"};
    return names;
}

/// What a command produced: the table, the summary for the manifest, extra
/// files to write next to the output and the exit code.
struct CommandResult {
    Table table{{}};
    nlohmann::ordered_json summary = nlohmann::ordered_json::object();
    std::vector<std::pair<std::string, std::string>> extra_files; // path, content
    int exit_code = exit_ok;
};

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline LatinRectangle read_rectangle(const std::string& path) {
    try {
        return parse_any(read_file(path));
    } catch (const CellError& e) {
        throw UsageError(path + ":" + std::to_string(e.row() + 1) + ": " + e.what());
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(path + ": " + e.what());
    }
}

inline void require_n(const ExperimentConfig& cfg, int low = 1) {
    if (cfg.n < low) throw UsageError("--n must be at least " + std::to_string(low));
}

inline SampleConfig sample_config(const ExperimentConfig& cfg, int n, std::uint64_t seed, std::uint64_t count) {
    SampleConfig s;
    s.n = n;
    s.seed = seed;
    s.sample_count = count;
    if (cfg.burn_in) s.burn_in = static_cast<std::int64_t>(*cfg.burn_in);
    if (cfg.thin) s.thinning = static_cast<std::int64_t>(*cfg.thin);
    return s;
}

inline std::vector<LatinSquare> draw_squares(const ExperimentConfig& cfg, int n, std::uint64_t seed, std::uint64_t count) {
    if (cfg.exact) return sample_exact_small(n, count, seed);
    return sample_parallel(sample_config(cfg, n, seed, count), cfg.workers);
}

inline nlohmann::json histogram_cell(const std::map<std::uint64_t, std::uint64_t>& h) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [v, c] : h) j[std::to_string(v)] = c;
    return j;
}

inline nlohmann::json rows_cell(const LatinRectangle& L) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < L.rows(); ++i) {
        nlohmann::json r = nlohmann::json::array();
        for (int x = 0; x < L.order(); ++x) r.push_back(L.at(i, x) + 1);
        rows.push_back(std::move(r));
    }
    return rows;
}

inline nlohmann::json optional_cell(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }
inline nlohmann::json optional_cell(const std::optional<bool>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

struct Moments {
    double mean = 0;
    double variance = 0; // unbiased
    double se = 0;
};

inline Moments moments(const std::vector<double>& xs) {
    Moments m;
    if (xs.empty()) return m;
    for (double x : xs) m.mean += x;
    m.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        for (double x : xs) m.variance += (x - m.mean) * (x - m.mean);
        m.variance /= static_cast<double>(xs.size() - 1);
        m.se = std::sqrt(m.variance / static_cast<double>(xs.size()));
    }
    return m;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

/// One file: N, per-row involvement and the row-pair histogram. Otherwise a
/// sampled batch: moments of N and of the rows 1-2 count, N / n^2 and the
/// lower tails Pr(N < (1 - eps) n^2 / 4).
inline CommandResult cmd_census(const ExperimentConfig& cfg) {
    CommandResult res;
    if (!cfg.input.empty()) {
        const LatinRectangle L = detail::read_rectangle(cfg.input);
        const auto c = census(L);
        const double n2 = static_cast<double>(L.order()) * L.order();
        res.table = Table({"n", "k", "N", "N_over_n2", "max_per_row", "per_row", "pair_histogram"});
        nlohmann::json per_row = c.per_row;
        res.table.add({L.order(), L.rows(), c.total, static_cast<double>(c.total) / n2, c.max_per_row(), per_row, detail::histogram_cell(c.pair_histogram(L.rows()))});
        res.summary = {{"mode", "file"}, {"input", cfg.input}, {"N", c.total}, {"max_per_row", c.max_per_row()}};
        return res;
    }
    detail::require_n(cfg, 2);
    if (cfg.samples == 0) throw UsageError("census needs --input or --samples > 0");
    const int n = cfg.n;
    const auto squares = detail::draw_squares(cfg, n, cfg.seed, cfg.samples);
    std::vector<double> ns, n2s, rowmax;
    for (const auto& L : squares) {
        const auto c = census(L);
        ns.push_back(static_cast<double>(c.total));
        n2s.push_back(static_cast<double>(count_two_rows(L, 0, 1)));
        rowmax.push_back(static_cast<double>(c.max_per_row()));
    }
    const auto mn = detail::moments(ns);
    const auto m2 = detail::moments(n2s);
    const auto mr = detail::moments(rowmax);
    const double sq = static_cast<double>(n) * n;
    res.table = Table({"statistic", "epsilon", "value"});
    auto row = [&](const char* name, nlohmann::json eps, nlohmann::json v) { res.table.add({name, std::move(eps), std::move(v)}); };
    row("samples", nullptr, squares.size());
    row("mean_N", nullptr, mn.mean);
    row("variance_N", nullptr, mn.variance);
    row("se_N", nullptr, mn.se);
    row("mean_N_over_n2", nullptr, mn.mean / sq);
    row("mean_N2", nullptr, m2.mean);
    row("variance_N2", nullptr, m2.variance);
    row("se_N2", nullptr, m2.se);
    row("mean_max_per_row", nullptr, mr.mean);
    row("max_max_per_row", nullptr, rowmax.empty() ? 0.0 : *std::max_element(rowmax.begin(), rowmax.end()));
    for (double eps : cfg.epsilon) {
        const double cut = (1.0 - eps) * sq / 4.0;
        std::uint64_t below = 0;
        for (double v : ns) below += v < cut ? 1 : 0;
        row("tail_below", eps, static_cast<double>(below) / static_cast<double>(ns.size()));
    }
    if (cfg.exact && n <= max_square_order) {
        const auto ex = enumerate_squares(n);
        const auto [num, den] = ex.mean_n();
        const auto [num2, den2] = ex.mean_two_rows();
        row("exact_mean_N", nullptr, static_cast<double>(num) / static_cast<double>(den));
        row("exact_mean_N2", nullptr, static_cast<double>(num2) / static_cast<double>(den2));
    }
    res.summary = {{"mode", "batch"}, {"sampler", cfg.exact ? "exact" : "jacobson-matthews"}, {"samples", squares.size()}, {"mean_N", mn.mean}, {"se_N", mn.se}};
    return res;
}

/// Sampled squares, one per row, with their intercalate counts.
inline CommandResult cmd_sample(const ExperimentConfig& cfg) {
    detail::require_n(cfg);
    if (cfg.samples == 0) throw UsageError("sample needs --samples > 0");
    CommandResult res;
    const auto squares = detail::draw_squares(cfg, cfg.n, cfg.seed, cfg.samples);
    res.table = Table({"index", "n", "N", "rows"});
    std::uint64_t total = 0;
    for (std::size_t t = 0; t < squares.size(); ++t) {
        const auto N = count_intercalates(squares[t]);
        total += N;
        res.table.add({t, cfg.n, N, detail::rows_cell(squares[t])});
    }
    res.summary = {{"sampler", cfg.exact ? "exact" : "jacobson-matthews"}, {"samples", squares.size()}, {"mean_N", static_cast<double>(total) / static_cast<double>(squares.size())}};
    return res;
}

inline std::string reproducer_text(const Violation& v) {
    return "check: " + v.check + "\ndetail: " + v.detail + "\noperation: " + v.operation + "\nsquare:\n" + v.square;
}

/// The switching and twist invariants on `trials` sampled squares for each
/// n in [n, n_max]. Every sample is first revalidated from its raw cells;
/// --inject-fault corrupts one cell of the first sample so that this check
/// must fail.
inline CommandResult cmd_verify_facts(const ExperimentConfig& cfg) {
    detail::require_n(cfg, 2);
    const int n_max = std::max(cfg.n, cfg.n_max);
    CommandResult res;
    res.table = Table({"n", "check", "performed", "failed"});
    FactReport all;
    bool injected = false;
    for (int n = cfg.n; n <= n_max; ++n) {
        FactReport rep;
        const auto squares = detail::draw_squares(cfg, n, derive_seed(cfg.seed, static_cast<std::uint64_t>(n)), cfg.trials);
        Rng twist_rng(derive_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(n)));
        const int cap = cfg.cap > 0 ? cfg.cap : n;
        for (const auto& L : squares) {
            std::vector<int> cells = L.cells();
            if (cfg.inject_fault && !injected) {
                cells[0] = cells[1];
                injected = true;
            }
            try {
                (void)LatinRectangle::from_cells(n, n, cells);
                rep.pass("input-valid");
            } catch (const CellError& e) {
                rep.fail("input-valid", L, "set cell (1, 1) to " + std::to_string(cells[0] + 1), e.what());
                continue;
            }
            rep.merge(check_switching_facts(L));
            if (n >= 6) {
                const int k = std::min(n, 4);
                const LatinRectangle R = LatinRectangle::from_cells(k, n, std::vector<int>(L.cells().begin(), L.cells().begin() + k * n));
                if (!is_good(R, cap)) continue;
                const auto tw = check_twist_contract(R, cap, 1, 200, twist_rng);
                for (std::uint64_t a = 0; a < tw.accepted; ++a) {
                    if (a < tw.bad_accepted) rep.fail("twist-accepted", R, "random twist", "accepted twist broke N + 1, goodness or validity");
                    else rep.pass("twist-accepted");
                }
                for (std::uint64_t r = 0; r < tw.rejected; ++r) {
                    if (r < tw.unnamed_rejections) rep.fail("twist-rejection-named", R, "random twist", "rejection named no condition");
                    else rep.pass("twist-rejection-named");
                }
            }
        }
        for (const auto& [check, count] : rep.performed) {
            const auto it = rep.failed.find(check);
            res.table.add({n, check, count, it == rep.failed.end() ? 0 : it->second});
        }
        all.merge(rep);
    }
    res.summary = {{"performed", all.total_performed()}, {"failed", all.total_failed()}, {"fault_injected", cfg.inject_fault}};
    if (all.total_failed() > 0) {
        res.exit_code = exit_violation;
        const std::string path = cfg.out.empty() ? std::string("latinlab-reproducer.txt") : cfg.out + ".reproducer.txt";
        res.extra_files.emplace_back(path, reproducer_text(all.violations.front()));
        res.summary["reproducer"] = path;
    }
    return res;
}

inline CommandResult cmd_class_ratios(const ExperimentConfig& cfg) {
    detail::require_n(cfg, 2);
    CommandResult res;
    const auto t = class_ratio_table(cfg.n);
    res.table = Table({"n", "s", "size", "ratio_next", "bound_next", "next_holds", "ratio_double", "bound_double", "double_holds", "join_choices",
                       "join_pairs", "join_choice_formula", "join_upper"});
    for (const auto& r : t.rows) {
        res.table.add({t.n, r.s, r.size, detail::optional_cell(r.ratio_next), detail::optional_cell(r.bound_next), detail::optional_cell(r.next_holds),
                       detail::optional_cell(r.ratio_double), detail::optional_cell(r.bound_double), detail::optional_cell(r.double_holds), r.join_choices,
                       r.join_pairs, r.join_choice_formula, r.join_upper});
    }
    res.summary = {{"total", t.total}, {"all_hold", t.all_hold()}};
    if (!t.all_hold()) res.exit_code = exit_violation;
    return res;
}

/// Exhaustive count of k x n rectangles (k = 0 or k = n: squares) with the
/// N histogram and the rows 1-2 class sizes. A run stopped by --max-units
/// leaves its state in --checkpoint and reports complete = false.
inline CommandResult cmd_enumerate(const ExperimentConfig& cfg) {
    detail::require_n(cfg);
    const int k = cfg.k == 0 ? cfg.n : cfg.k;
    if (k > cfg.n) throw UsageError("--k must not exceed --n");
    EnumerationOptions opt;
    opt.reduced = cfg.reduced;
    opt.long_run = cfg.long_run;
    opt.workers = cfg.workers;
    opt.node_budget = effective_budget(cfg, opt.node_budget);
    opt.checkpoint_path = cfg.checkpoint;
    if (cfg.max_units > 0) opt.max_units = cfg.max_units;
    const auto r = k == cfg.n ? enumerate_squares(cfg.n, opt) : enumerate_rectangles(k, cfg.n, opt);
    CommandResult res;
    res.table = Table({"kind", "value", "count"});
    res.table.add({"total", nullptr, r.total_count});
    for (const auto& [v, c] : r.n_histogram) res.table.add({"N", v, c});
    for (const auto& [v, c] : r.class_sizes) res.table.add({"two_rows", v, c});
    const auto [num, den] = r.mean_n();
    res.summary = {{"n", r.n},
                   {"k", r.k},
                   {"reduced", r.reduced},
                   {"complete", r.complete},
                   {"units_done", r.units_done},
                   {"units_total", r.units_total},
                   {"total", r.total_count},
                   {"mean_N", den ? static_cast<double>(num) / static_cast<double>(den) : 0.0},
                   {"min_N", r.min_n()}};
    return res;
}

/// Box statistics on --input or on one sampled square.
inline CommandResult cmd_discrepancy(const ExperimentConfig& cfg) {
    const BoxStrategy strategy = [&] {
        try {
            return parse_strategy(cfg.strategy);
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
    }();
    const LatinSquare L = [&] {
        if (!cfg.input.empty()) return LatinSquare(detail::read_rectangle(cfg.input));
        detail::require_n(cfg);
        return detail::draw_squares(cfg, cfg.n, cfg.seed, 1).front();
    }();
    const auto stats = box_scan(L, strategy, cfg.boxes, derive_seed(cfg.seed, 0xB0C5));
    CommandResult res;
    res.table = Table({"index", "box_seed", "strategy", "rows", "columns", "symbols", "volume", "observed", "expected", "deviation", "bound", "ratio"});
    for (std::size_t b = 0; b < stats.size(); ++b) {
        const auto& s = stats[b];
        res.table.add({b, s.seed, s.strategy, s.box.rows.size(), s.box.columns.size(), s.box.symbols.size(), s.volume, s.observed, s.expected, s.deviation,
                       s.bound, s.ratio});
    }
    res.summary = {{"n", L.order()}, {"boxes", stats.size()}, {"strategy", cfg.strategy}, {"max_ratio", max_ratio(stats)}};
    return res;
}

/// The matching sandwich per (n, d), and for n <= 4 the exact count of
/// d-regular graphs against its lower bound.
inline CommandResult cmd_bounds(const ExperimentConfig& cfg) {
    detail::require_n(cfg);
    const int n = cfg.n;
    const std::uint64_t samples = cfg.samples > 0 ? cfg.samples : 200;
    if (cfg.d && (*cfg.d < 1 || *cfg.d > n)) throw UsageError("--d must lie in 1..n");
    CommandResult res;
    res.table = Table({"n", "d", "graphs", "exhaustive", "log_vdw_lower", "min_log_permanent", "max_log_permanent", "log_bregman_upper", "sandwich_failures",
                       "regular_count", "log_regular_count", "log_count_bound", "count_bound_holds", "log_factorizations_lower", "log_factorizations_upper"});
    std::uint64_t failures = 0, bound_failures = 0;
    for (int d = cfg.d ? *cfg.d : 1; d <= (cfg.d ? *cfg.d : n); ++d) {
        const auto row = sandwich_row(n, d, samples, cfg.seed);
        failures += row.failures;
        nlohmann::json count = nullptr, log_count = nullptr, log_bound = nullptr, holds = nullptr;
        if (n <= max_regular_enumeration_order) {
            const auto rep = regular_probability_report(n, d);
            count = rep.exact_count;
            log_count = rep.log_exact;
            log_bound = rep.log_bound;
            holds = rep.bound_holds;
            if (!rep.bound_holds) ++bound_failures;
        }
        const auto fb = factorization_bounds(d, n);
        res.table.add({n, d, row.graphs, row.exhaustive, row.log_lower, row.min_log_permanent, row.max_log_permanent, row.log_upper, row.failures, count,
                       log_count, log_bound, holds, fb.log_lower, fb.log_upper});
    }
    res.summary = {{"sandwich_failures", failures}, {"count_bound_failures", bound_failures}, {"tolerance", log_tolerance}};
    if (failures + bound_failures > 0) res.exit_code = exit_violation;
    return res;
}

/// Pair coverage of M random k-subsets of [n] as a histogram, with the band
/// check in the summary. Out-of-band pairs in the asymptotic regime exit 1.
inline CommandResult cmd_cover(const ExperimentConfig& cfg) {
    detail::require_n(cfg, 2);
    if (cfg.k < 1 || cfg.k > cfg.n) throw UsageError("--k must lie in 1..n");
    const auto f = build_cover(cfg.n, cfg.k, cfg.m, cfg.seed);
    const auto r = cover_report(f);
    CommandResult res;
    res.table = Table({"coverage", "pairs", "in_band"});
    for (const auto& [v, c] : f.histogram) {
        const double x = static_cast<double>(v);
        res.table.add({v, c, x >= r.low && x <= r.high});
    }
    res.summary = {{"center", r.center},
                   {"low", r.low},
                   {"high", r.high},
                   {"exact_mean", r.exact_mean},
                   {"min_coverage", r.min_coverage},
                   {"max_coverage", r.max_coverage},
                   {"pairs_outside", r.pairs_outside},
                   {"regime_ratio", r.regime_ratio},
                   {"in_regime", r.in_regime},
                   {"within_band", r.within_band}};
    if (r.in_regime && !r.within_band) res.exit_code = exit_violation;
    return res;
}

/// Exhaustive forward and backward twist counts on --input or on the first
/// k rows of a sampled square of order n.
inline CommandResult cmd_twist_count(const ExperimentConfig& cfg) {
    const LatinRectangle L = [&] {
        if (!cfg.input.empty()) return detail::read_rectangle(cfg.input);
        detail::require_n(cfg, 6);
        if (cfg.k < 2 || cfg.k > cfg.n) throw UsageError("--k must lie in 2..n");
        const LatinSquare S = detail::draw_squares(cfg, cfg.n, cfg.seed, 1).front();
        return LatinRectangle::from_cells(cfg.k, cfg.n, std::vector<int>(S.cells().begin(), S.cells().begin() + cfg.k * cfg.n));
    }();
    const int cap = cfg.cap > 0 ? cfg.cap : L.order();
    if (!is_good(L, cap)) throw UsageError("rectangle is not good for cap " + std::to_string(cap));
    const auto t = enumerate_twists(L, cap, effective_budget(cfg, default_twist_budget));
    CommandResult res;
    res.table = Table({"n", "k", "cap", "intercalates", "forward_choices", "forward_results", "backward_predecessors", "backward_bound", "backward_within_bound",
                       "rejected_condition_0", "rejected_condition_1", "rejected_condition_2", "rejected_condition_3"});
    std::array<std::uint64_t, 4> by_cond{};
    for (const auto& [v, c] : t.rejections) by_cond[static_cast<std::size_t>(violated_condition(v))] += c;
    res.table.add({L.order(), L.rows(), cap, t.intercalates, t.forward_choices, t.forward_results, t.backward_predecessors, t.backward_bound,
                   t.backward_within_bound(), by_cond[0], by_cond[1], by_cond[2], by_cond[3]});
    res.summary = {{"forward_choices", t.forward_choices}, {"backward_predecessors", t.backward_predecessors}, {"backward_within_bound", t.backward_within_bound()}};
    if (!t.backward_within_bound()) res.exit_code = exit_violation;
    return res;
}

inline CommandResult dispatch(const ExperimentConfig& cfg) {
    if (cfg.format != "csv" && cfg.format != "json") throw UsageError("--format must be csv or json");
    const std::string& c = cfg.command;
    if (c == "census") return cmd_census(cfg);
    if (c == "sample") return cmd_sample(cfg);
    if (c == "verify-facts") return cmd_verify_facts(cfg);
    if (c == "class-ratios") return cmd_class_ratios(cfg);
    if (c == "enumerate") return cmd_enumerate(cfg);
    if (c == "discrepancy") return cmd_discrepancy(cfg);
    if (c == "bounds") return cmd_bounds(cfg);
    if (c == "cover") return cmd_cover(cfg);
    if (c == "twist-count") return cmd_twist_count(cfg);
    throw UsageError("unknown command '" + c + "'");
}

/// Runs one command. The table goes to --out (plus <out>.manifest.json) or
/// to `out` when no path is set; diagnostics go to `err`.
inline int run_command(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    try {
        CommandResult res = dispatch(cfg);
        const std::string content = res.table.render(cfg.format);
        for (const auto& [path, text] : res.extra_files) {
            write_file_atomically(path, text);
            err << "violation reproducer written to " << path << '\n';
        }
        if (cfg.out.empty()) {
            out << content;
        } else {
            write_file_atomically(cfg.out, content);
            RunManifest m;
            m.command = cfg.command;
            m.config = cfg;
            m.output_path = cfg.out;
            m.output_bytes = content.size();
            m.output_rows = res.table.size();
            m.exit_code = res.exit_code;
            m.summary = res.summary;
            m.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            write_file_atomically(manifest_path_for(cfg.out), m.to_json().dump(2) + "\n");
        }
        if (res.exit_code != exit_ok) err << cfg.command << ": property violation, see " << (cfg.out.empty() ? std::string("output") : cfg.out) << '\n';
        return res.exit_code;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const ResourceError& e) {
        err << "resource limit: " << e.what() << '\n';
        return exit_resource;
    } catch (const std::bad_alloc&) {
        err << "resource limit: out of memory\n";
        return exit_resource;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "io error: " << e.what() << '\n';
        return exit_resource;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
}

// ---------------------------------------------------------------------------
// Argument parsing
// ---------------------------------------------------------------------------

/// Result of parsing argv: a config to run, or an exit code (help or error).
struct ParsedArguments {
    std::optional<ExperimentConfig> config;
    int exit_code = exit_ok;
};

/// Builds the config from argv. Precedence: defaults, then --config file,
/// then flags (LATINLAB_BUDGET is read when no budget is set at all).
/// Flags reuse the config-file parser, so both accept the same values.
inline ParsedArguments parse_arguments(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Latin square intercalate and switching toolkit", "latinlab"};
    std::string command, config_path;
    app.add_option("command", command, "census | sample | verify-facts | class-ratios | enumerate | discrepancy | bounds | cover | twist-count")
        ->required();
    app.add_option("--config", config_path, "key = value config file; flags override it");

    struct ValueFlag {
        const char* flag;
        const char* key;
        const char* help;
    };
    static const std::vector<ValueFlag> values{
        {"--n", "n", "order"},
        {"--k", "k", "rows (rectangles) or subset size (cover)"},
        {"--seed", "seed", "RNG seed"},
        {"--samples", "samples", "sample count"},
        {"--burn-in", "burn_in", "proper-chain moves before the first sample (default n^3)"},
        {"--thin", "thin", "proper-chain moves between samples (default n^3)"},
        {"--workers", "workers", "worker threads"},
        {"--out", "out", "output file; stdout when absent"},
        {"--format", "format", "csv or json"},
        {"--budget", "budget", "node budget (overrides LATINLAB_BUDGET)"},
        {"--input", "input", "input square or rectangle file"},
        {"--strategy", "strategy", "uniform-element | size-grid | structured-intervals"},
        {"--boxes", "boxes", "boxes per scan"},
        {"--M,--m", "m", "number of random subsets (cover)"},
        {"--trials", "trials", "squares per order (verify-facts)"},
        {"--n-max", "n_max", "largest order (verify-facts)"},
        {"--d", "d", "degree (bounds); every d when absent"},
        {"--cap", "cap", "goodness cap K (default n)"},
        {"--epsilon", "epsilon", "comma separated tail parameters"},
        {"--checkpoint", "checkpoint", "checkpoint file (enumerate)"},
        {"--max-units", "max_units", "stop after this many work units (enumerate)"},
    };
    struct BoolFlag {
        const char* flag;
        const char* key;
        const char* help;
    };
    static const std::vector<BoolFlag> bools{
        {"--exact", "exact", "exact uniform sampler (n <= 5)"},
        {"--reduced", "reduced", "fix the first row (enumerate)"},
        {"--long-run", "long_run", "allow n = 6 squares (enumerate)"},
        {"--inject-fault", "inject_fault", "corrupt one sampled cell (verify-facts negative control)"},
    };
    std::vector<std::string> texts(values.size());
    std::vector<CLI::Option*> value_opts, bool_opts;
    for (std::size_t t = 0; t < values.size(); ++t) value_opts.push_back(app.add_option(values[t].flag, texts[t], values[t].help));
    for (const auto& b : bools) bool_opts.push_back(app.add_flag(b.flag, b.help));
    bool all_d = false;
    app.add_flag("--all-d", all_d, "every degree (the default)");

    std::vector<std::string> args;
    for (int a = argc - 1; a >= 1; --a) args.emplace_back(argv[a]);
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return {std::nullopt, exit_ok};
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return {std::nullopt, exit_usage};
    }
    try {
        ExperimentConfig cfg;
        if (!config_path.empty()) apply_config_file(cfg, config_path);
        const auto& fields = latinlab::detail::config_fields();
        for (std::size_t t = 0; t < values.size(); ++t) {
            if (value_opts[t]->count() > 0) fields.at(values[t].key).set(cfg, texts[t], values[t].flag);
        }
        for (std::size_t t = 0; t < bools.size(); ++t) {
            if (bool_opts[t]->count() > 0) fields.at(bools[t].key).set(cfg, "true", bools[t].flag);
        }
        if (all_d) cfg.d.reset();
        cfg.command = command;
        return {cfg, exit_ok};
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return {std::nullopt, exit_usage};
    }
}

inline int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    auto parsed = parse_arguments(argc, argv, out, err);
    if (!parsed.config) return parsed.exit_code;
    return run_command(*parsed.config, out, err);
}

} // namespace latinlab::cli
