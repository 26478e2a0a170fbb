#pragma once
// The end-to-end solve pipeline: ingest -> per-order marginal search ->
// counting tables -> chosen solver -> report. Errors carry the phase that
// raised them.

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bindesign/baseline.hpp"
#include "bindesign/counting.hpp"
#include "bindesign/detail/parallel.hpp"
#include "bindesign/dp.hpp"
#include "bindesign/generate.hpp"
#include "bindesign/marginal.hpp"
#include "bindesign/orders.hpp"
#include "bindesign/report.hpp"

namespace bindesign {

struct PhaseError : std::runtime_error {
    std::string phase;
    PhaseError(std::string phase_, const std::string& message)
        : std::runtime_error("[" + phase_ + "] " + message), phase(std::move(phase_)) {}
};

namespace detail {

class PhaseTimer {
  public:
    PhaseTimer() : start_(std::chrono::steady_clock::now()) {}
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - start_).count();
        start_ = now;
        return s;
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

template <typename Fn>
auto in_phase(const char* phase, Fn&& fn) {
    try {
        return fn();
    } catch (const PhaseError&) {
        throw;
    } catch (const std::exception& e) {
        throw PhaseError(phase, e.what());
    }
}

}  // namespace detail

// Marginal search across orders, parallel, merged back in input order. A
// budget-exhausted order is retried once with a tenfold budget.
inline std::vector<MarginalSet> search_marginals(std::span<const Order> orders,
                                                 const Bounds& bounds,
                                                 const SearchBudget& budget,
                                                 int workers) {
    std::vector<MarginalSet> sets(orders.size());
    detail::parallel_for(static_cast<std::int64_t>(orders.size()), workers,
                         [&](std::int64_t i) {
                             try {
                                 sets[i] = marginal_search(orders[i], bounds, budget).set;
                             } catch (const BudgetExhaustedBeforeFirstLeaf&) {
                                 SearchBudget retry = budget;
                                 if (retry.max_search_count <=
                                     SearchBudget::kUnlimited / 10)
                                     retry.max_search_count *= 10;
                                 sets[i] = marginal_search(orders[i], bounds, retry).set;
                             }
                         });
    return sets;
}

struct PipelineResult {
    Report report;
    std::vector<MarginalSet> marginal_sets;
    CountTable counts;
    std::vector<std::string> warnings;
};

// Runs the full pipeline on in-memory orders. `excluded` only feeds the
// report; path-based callers fill it from ingest.
inline PipelineResult run_pipeline(const RunConfig& config, std::vector<Order> orders,
                                   std::int64_t excluded = 0) {
    detail::in_phase("config", [&] { config.validate(); });
    const Bounds bounds = config.bounds();
    detail::PhaseTimer timer;
    detail::PhaseTimer total_timer;

    PipelineResult result;
    result.report.config = config;
    result.report.excluded_orders = excluded;
    result.report.n_orders = static_cast<std::int64_t>(orders.size());

    result.marginal_sets = detail::in_phase("marginal", [&] {
        return search_marginals(orders, bounds, config.budget(), config.workers);
    });
    result.report.timings.marginal_s = timer.lap();

    result.counts = detail::in_phase("counting", [&] {
        const DiffTable f = build_diff_table(result.marginal_sets, bounds, config.workers);
        return prefix_sum(f, config.workers);
    });
    result.report.timings.counting_s = timer.lap();

    const std::int64_t n = static_cast<std::int64_t>(orders.size());
    const bool run_dp =
        config.solver != SolverChoice::gls;
    const bool run_gls =
        config.solver == SolverChoice::gls || config.solver == SolverChoice::all;

    BinChain dp_chain;
    if (run_dp) {
        dp_chain = detail::in_phase("dp", [&] {
            const CandidateGrid grid =
                config.prune_grid ? CandidateGrid::from_marginal_coords(result.marginal_sets)
                                  : CandidateGrid::full(bounds);
            const DpInstance inst =
                DpInstance::from_count_table(result.counts, grid, n);
            if (config.solver == SolverChoice::naive)
                return solve_naive(inst, bounds.num_types);
            DpOptions options;
            options.workers = config.workers;
            return solve_fast(inst, bounds.num_types, &result.report.dp_stats, options);
        });
        result.report.timings.dp_s = timer.lap();
    }

    GlsResult gls_result;
    if (run_gls) {
        gls_result = detail::in_phase("gls", [&] {
            return gls_solve(result.marginal_sets, bounds, config.gls_params());
        });
        result.report.timings.gls_s = timer.lap();
        GlsSummary summary;
        summary.cost = gls_result.cost;
        summary.types = gls_result.chain.types;
        summary.proposals = gls_result.proposals;
        summary.accepted_moves = gls_result.accepted_moves;
        result.report.gls = summary;
    }

    result.report.chain = run_dp ? dp_chain : gls_result.chain;
    result.report.per_type_percent =
        percent_of_total(result.report.chain.per_type_counts, n);
    result.report.collapsed = collapsed_flags(result.report.chain);
    if (run_dp && run_gls)
        result.report.cost_gap = gls_result.cost - dp_chain.total_cost;
    result.report.timings.total_s = total_timer.lap();
    return result;
}

inline PipelineResult solve_command(const RunConfig& config, const std::string& orders_path) {
    detail::in_phase("config", [&] { config.validate(); });
    detail::PhaseTimer timer;
    IngestResult ingested = detail::in_phase("ingest", [&] {
        return ingest(orders_path, config.bounds(), config.strict_ingest);
    });
    const double ingest_s = timer.lap();
    PipelineResult result =
        run_pipeline(config, std::move(ingested.orders),
                     static_cast<std::int64_t>(ingested.excluded.size()));
    result.report.timings.ingest_s = ingest_s;
    result.report.timings.total_s += ingest_s;
    for (const ExcludedOrder& ex : ingested.excluded)
        result.warnings.push_back("excluded order " + ex.id + ": " + ex.reason);
    return result;
}

// Cost per K over a shared count table; the DP is re-run for each K.
inline std::vector<std::pair<int, Cost>> curve_over_counts(
    const RunConfig& config, std::span<const MarginalSet> sets, const CountTable& counts,
    std::int64_t n_orders, int k_min, int k_max) {
    if (k_min < 1 || k_min > k_max) throw std::invalid_argument("bad K range");
    const CandidateGrid grid = config.prune_grid
                                   ? CandidateGrid::from_marginal_coords(sets)
                                   : CandidateGrid::full(config.bounds());
    const DpInstance inst = DpInstance::from_count_table(counts, grid, n_orders);
    std::vector<std::pair<int, Cost>> out;
    out.reserve(static_cast<std::size_t>(k_max - k_min + 1));
    for (int k = k_min; k <= k_max; ++k) {
        const BinChain chain = config.solver == SolverChoice::naive
                                   ? solve_naive(inst, k)
                                   : solve_fast(inst, k);
        out.emplace_back(k, chain.total_cost);
    }
    return out;
}

inline std::vector<std::pair<int, Cost>> curve_command(const RunConfig& config,
                                                       const std::string& orders_path,
                                                       int k_min, int k_max) {
    detail::in_phase("config", [&] {
        config.validate();
        if (k_min < 1 || k_min > k_max) throw std::invalid_argument("bad K range");
    });
    IngestResult ingested = detail::in_phase("ingest", [&] {
        return ingest(orders_path, config.bounds(), config.strict_ingest);
    });
    const Bounds bounds = config.bounds();
    const auto sets = detail::in_phase("marginal", [&] {
        return search_marginals(ingested.orders, bounds, config.budget(), config.workers);
    });
    const CountTable counts = detail::in_phase("counting", [&] {
        return prefix_sum(build_diff_table(sets, bounds, config.workers), config.workers);
    });
    return detail::in_phase("dp", [&] {
        return curve_over_counts(config, sets, counts,
                                 static_cast<std::int64_t>(ingested.orders.size()), k_min,
                                 k_max);
    });
}

// Per-order marginal dump lines; an empty order file yields an empty dump.
inline std::vector<std::string> marginals_command(const RunConfig& config,
                                                  const std::string& orders_path) {
    detail::in_phase("config", [&] { config.validate(); });
    std::vector<Order> orders = detail::in_phase("ingest", [&] {
        std::ifstream file(orders_path);
        if (!file) throw std::runtime_error("cannot open order file '" + orders_path + "'");
        return read_orders(file);
    });
    if (orders.empty()) return {};
    const Bounds bounds = config.bounds();
    std::vector<Order> kept;
    for (Order& order : orders) {
        const bool ok = std::all_of(order.items.begin(), order.items.end(),
                                    [&](const BoxDims& i) { return item_fits_bounds(i, bounds); });
        if (ok) kept.push_back(std::move(order));
    }
    const auto sets = detail::in_phase("marginal", [&] {
        return search_marginals(kept, bounds, config.budget(), config.workers);
    });
    std::vector<std::string> lines;
    lines.reserve(sets.size());
    for (const MarginalSet& ms : sets) lines.push_back(marginal_dump_line(ms));
    return lines;
}

}  // namespace bindesign
