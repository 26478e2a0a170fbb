#pragma once
// Run configuration and the solve report, both JSON-serializable.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bindesign/baseline.hpp"
#include "bindesign/dp.hpp"
#include "bindesign/marginal.hpp"
#include "bindesign/model.hpp"
#include "bindesign/version.hpp"

namespace bindesign {

enum class SolverChoice { fast, naive, gls, all };

inline std::string solver_choice_name(SolverChoice s) {
    switch (s) {
        case SolverChoice::fast: return "fast";
        case SolverChoice::naive: return "naive";
        case SolverChoice::gls: return "gls";
        case SolverChoice::all: return "all";
    }
    return "fast";
}

inline SolverChoice solver_choice_from_name(const std::string& name) {
    if (name == "fast") return SolverChoice::fast;
    if (name == "naive") return SolverChoice::naive;
    if (name == "gls") return SolverChoice::gls;
    if (name == "all") return SolverChoice::all;
    throw std::invalid_argument("unknown solver '" + name + "'");
}

struct RunConfig {
    int max_l = 50;
    int max_w = 40;
    int max_h = 33;
    int num_types = 8;

    std::int64_t z_num = 6;  // pruning slack 6/5 = 1.2
    std::int64_t z_den = 5;
    bool z_unbounded = false;
    std::int64_t max_search_count = 200000;

    SolverChoice solver = SolverChoice::fast;
    int gls_step_size = 1;
    std::int64_t gls_threshold = 1000;

    int workers = 0;  // 0 = hardware concurrency
    std::uint64_t seed = 0;
    bool strict_ingest = false;
    bool prune_grid = true;

    Bounds bounds() const { return Bounds(max_l, max_w, max_h, num_types); }

    SearchBudget budget() const {
        SearchBudget b;
        b.z_factor = z_unbounded ? ZFactor::infinite() : ZFactor::ratio(z_num, z_den);
        b.max_search_count = max_search_count;
        return b;
    }

    GlsParams gls_params() const {
        GlsParams p;
        p.step_size = gls_step_size;
        p.non_improvement_threshold = gls_threshold;
        p.seed = seed;
        return p;
    }

    void validate() const {
        bounds();  // throws on bad L/W/H/K
        budget();  // throws on bad z
        if (max_search_count < 1) throw std::invalid_argument("search budget must be >= 1");
        if (gls_step_size < 1) throw std::invalid_argument("gls step size must be >= 1");
        if (gls_threshold < 0) throw std::invalid_argument("gls threshold must be >= 0");
        if (workers < 0) throw std::invalid_argument("workers must be >= 0");
    }
};

inline void to_json(nlohmann::json& j, const RunConfig& c) {
    j = nlohmann::json{
        {"bounds", {{"l", c.max_l}, {"w", c.max_w}, {"h", c.max_h}, {"k", c.num_types}}},
        {"budget",
         {{"z_num", c.z_num},
          {"z_den", c.z_den},
          {"z_unbounded", c.z_unbounded},
          {"max_search_count", c.max_search_count}}},
        {"solver", solver_choice_name(c.solver)},
        {"gls", {{"step_size", c.gls_step_size}, {"threshold", c.gls_threshold}}},
        {"workers", c.workers},
        {"seed", c.seed},
        {"strict_ingest", c.strict_ingest},
        {"prune_grid", c.prune_grid}};
}

inline void from_json(const nlohmann::json& j, RunConfig& c) {
    const auto& bounds = j.at("bounds");
    c.max_l = bounds.at("l").get<int>();
    c.max_w = bounds.at("w").get<int>();
    c.max_h = bounds.at("h").get<int>();
    c.num_types = bounds.at("k").get<int>();
    const auto& budget = j.at("budget");
    c.z_num = budget.at("z_num").get<std::int64_t>();
    c.z_den = budget.at("z_den").get<std::int64_t>();
    c.z_unbounded = budget.at("z_unbounded").get<bool>();
    c.max_search_count = budget.at("max_search_count").get<std::int64_t>();
    c.solver = solver_choice_from_name(j.at("solver").get<std::string>());
    const auto& gls = j.at("gls");
    c.gls_step_size = gls.at("step_size").get<int>();
    c.gls_threshold = gls.at("threshold").get<std::int64_t>();
    c.workers = j.at("workers").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.strict_ingest = j.at("strict_ingest").get<bool>();
    c.prune_grid = j.at("prune_grid").get<bool>();
}

struct PhaseTimings {
    double ingest_s = 0.0;
    double marginal_s = 0.0;
    double counting_s = 0.0;
    double dp_s = 0.0;
    double gls_s = 0.0;
    double total_s = 0.0;
};

struct GlsSummary {
    Cost cost = 0;
    std::vector<BoxDims> types;
    std::int64_t proposals = 0;
    std::int64_t accepted_moves = 0;
};

struct Report {
    int schema_version = kReportSchemaVersion;
    std::string tool_version = kToolVersion;
    RunConfig config;
    std::int64_t n_orders = 0;
    std::int64_t excluded_orders = 0;
    BinChain chain;
    std::vector<double> per_type_percent;
    std::vector<bool> collapsed;  // type k equals type k-1
    PhaseTimings timings;
    SolveStats dp_stats;
    std::optional<GlsSummary> gls;
    std::optional<Cost> cost_gap;  // gls cost - dpts cost, when both ran
};

inline std::vector<bool> collapsed_flags(const BinChain& chain) {
    std::vector<bool> flags(chain.types.size(), false);
    for (std::size_t k = 1; k < chain.types.size(); ++k)
        flags[k] = chain.types[k] == chain.types[k - 1];
    return flags;
}

inline std::vector<double> percent_of_total(const std::vector<std::int64_t>& counts,
                                            std::int64_t total) {
    std::vector<double> out(counts.size(), 0.0);
    if (total <= 0) return out;
    for (std::size_t i = 0; i < counts.size(); ++i)
        out[i] = 100.0 * static_cast<double>(counts[i]) / static_cast<double>(total);
    return out;
}

namespace detail {

inline nlohmann::json chain_to_json(const BinChain& chain) {
    nlohmann::json types = nlohmann::json::array();
    for (const BoxDims& t : chain.types)
        types.push_back({{"l", t.l}, {"w", t.w}, {"h", t.h}});
    return {{"types", types},
            {"total_cost", chain.total_cost},
            {"per_type_counts", chain.per_type_counts}};
}

}  // namespace detail

inline nlohmann::json report_to_json(const Report& r) {
    nlohmann::json j{{"schema_version", r.schema_version},
                     {"tool_version", r.tool_version},
                     {"config", r.config},
                     {"n_orders", r.n_orders},
                     {"excluded_orders", r.excluded_orders},
                     {"chain", detail::chain_to_json(r.chain)},
                     {"per_type_percent", r.per_type_percent},
                     {"collapsed", r.collapsed},
                     {"timings",
                      {{"ingest_s", r.timings.ingest_s},
                       {"marginal_s", r.timings.marginal_s},
                       {"counting_s", r.timings.counting_s},
                       {"dp_s", r.timings.dp_s},
                       {"gls_s", r.timings.gls_s},
                       {"total_s", r.timings.total_s}}},
                     {"dp_stats",
                      {{"blocks", r.dp_stats.blocks},
                       {"envelope_lines", r.dp_stats.envelope_lines},
                       {"envelope_queries", r.dp_stats.envelope_queries},
                       {"seconds", r.dp_stats.seconds}}}};
    if (r.gls) {
        nlohmann::json types = nlohmann::json::array();
        for (const BoxDims& t : r.gls->types)
            types.push_back({{"l", t.l}, {"w", t.w}, {"h", t.h}});
        j["gls"] = {{"cost", r.gls->cost},
                    {"types", types},
                    {"proposals", r.gls->proposals},
                    {"accepted_moves", r.gls->accepted_moves}};
    }
    if (r.cost_gap) j["cost_gap"] = *r.cost_gap;
    return j;
}

}  // namespace bindesign
