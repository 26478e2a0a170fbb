// Command-line surface for the bin design solver.
//
//   bindesign gen       synthesize an order file
//   bindesign solve     run the full pipeline and emit a report
//   bindesign curve     total cost for a range of K
//   bindesign marginals dump per-order marginal bin types
//   bindesign gls       run the local-search baseline alone

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "bindesign/generate.hpp"
#include "bindesign/pipeline.hpp"
#include "bindesign/version.hpp"

namespace {

using namespace bindesign;

void parse_max_dims(const std::string& text, RunConfig& config) {
    int dims[3];
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        std::size_t next = text.find('x', pos);
        const std::string part =
            next == std::string::npos ? text.substr(pos) : text.substr(pos, next - pos);
        try {
            dims[i] = std::stoi(part);
        } catch (const std::exception&) {
            throw CLI::ValidationError("--max-dims expects LxWxH, e.g. 50x40x33");
        }
        if ((i < 2) != (next != std::string::npos))
            throw CLI::ValidationError("--max-dims expects LxWxH, e.g. 50x40x33");
        pos = next + 1;
    }
    config.max_l = dims[0];
    config.max_w = dims[1];
    config.max_h = dims[2];
}

void parse_budget(const std::string& text, RunConfig& config) {
    const auto comma = text.find(',');
    const std::string z_part = comma == std::string::npos ? text : text.substr(0, comma);
    if (!z_part.empty()) {
        const ZFactor z = ZFactor::from_decimal(z_part);
        config.z_num = z.num;
        config.z_den = z.den;
        config.z_unbounded = z.unbounded;
    }
    if (comma != std::string::npos) {
        const std::string count_part = text.substr(comma + 1);
        if (count_part == "inf" || count_part == "INF")
            config.max_search_count = SearchBudget::kUnlimited;
        else
            config.max_search_count = std::stoll(count_part);
    }
}

void add_common_options(CLI::App* cmd, RunConfig& config, std::string& max_dims,
                        std::string& budget) {
    cmd->add_option("--max-dims", max_dims, "bin size upper bounds as LxWxH (cm)");
    cmd->add_option("--budget", budget,
                    "search budget as Z,COUNT (e.g. 1.2,200000; inf allowed)");
    cmd->add_option("--workers", config.workers, "worker threads (0 = all cores)");
    cmd->add_option("--seed", config.seed, "random seed");
}

void apply_common(RunConfig& config, const std::string& max_dims, const std::string& budget) {
    if (!max_dims.empty()) parse_max_dims(max_dims, config);
    if (!budget.empty()) parse_budget(budget, config);
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file '" + path + "'");
    return file;
}

void print_summary(const Report& report, const std::vector<std::string>& warnings) {
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
    std::cerr << "orders: " << report.n_orders;
    if (report.excluded_orders > 0)
        std::cerr << " (excluded " << report.excluded_orders << ")";
    std::cerr << "\n";
    for (std::size_t k = 0; k < report.chain.types.size(); ++k) {
        const BoxDims& t = report.chain.types[k];
        std::cerr << "  bin " << k + 1 << ": " << t.l << "x" << t.w << "x" << t.h
                  << "  orders " << report.chain.per_type_counts[k] << " ("
                  << report.per_type_percent[k] << "%)"
                  << (report.collapsed[k] ? "  [collapsed]" : "") << "\n";
    }
    std::cerr << "total cost: " << report.chain.total_cost << " cm^2\n";
    if (report.gls) std::cerr << "gls cost:   " << report.gls->cost << " cm^2\n";
    if (report.cost_gap) std::cerr << "cost gap:   " << *report.cost_gap << " cm^2\n";
    std::cerr << "time: marginal " << report.timings.marginal_s << "s, counting "
              << report.timings.counting_s << "s, dp " << report.timings.dp_s
              << "s, gls " << report.timings.gls_s << "s\n";
}

int run_solve(const RunConfig& config, const std::string& orders_path,
              const std::string& out_path) {
    PipelineResult result = solve_command(config, orders_path);
    print_summary(result.report, result.warnings);
    std::ofstream file;
    open_out(file, out_path) << report_to_json(result.report).dump(2) << "\n";
    return 0;
}

int run_curve(const RunConfig& config, const std::string& orders_path, int k_min,
              int k_max, const std::string& out_path) {
    const auto rows = curve_command(config, orders_path, k_min, k_max);
    std::ofstream file;
    std::ostream& os = open_out(file, out_path);
    os << "K,total_cost\n";
    for (const auto& [k, cost] : rows) os << k << "," << cost << "\n";
    return 0;
}

int run_gen(const RunConfig& config, std::int64_t n, const GenProfile& profile,
            const std::string& out_path) {
    const auto orders = generate_orders(n, config.bounds(), profile, config.seed);
    std::ofstream file;
    write_orders(open_out(file, out_path), orders);
    return 0;
}

int run_marginals(const RunConfig& config, const std::string& orders_path,
                  const std::string& out_path) {
    const auto lines = marginals_command(config, orders_path);
    std::ofstream file;
    std::ostream& os = open_out(file, out_path);
    for (const std::string& line : lines) os << line << "\n";
    return 0;
}

int run_gls(const RunConfig& config, const std::string& orders_path,
            const std::string& out_path, const std::string& trace_path) {
    PipelineResult result = solve_command(config, orders_path);
    print_summary(result.report, result.warnings);
    if (!trace_path.empty()) {
        // Re-run to materialize the trace over the same marginal sets.
        const GlsResult gls =
            gls_solve(result.marginal_sets, config.bounds(), config.gls_params());
        std::ofstream trace(trace_path);
        if (!trace) throw std::runtime_error("cannot open trace file '" + trace_path + "'");
        for (const GlsTraceRecord& rec : gls.trace)
            trace << rec.iteration << '\t' << rec.type_index << '\t' << "lwh"[rec.dimension]
                  << '\t' << rec.proposed_value << '\t'
                  << (rec.accepted ? "accept" : rec.guard_rejected ? "guard" : "reject")
                  << '\t' << rec.cost << "\n";
    }
    std::ofstream file;
    open_out(file, out_path) << report_to_json(result.report).dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bin type design from order history"};
    app.set_version_flag("--version", bindesign::kToolVersion);
    app.require_subcommand(1);

    RunConfig config;
    std::string orders_path, out_path, trace_path, max_dims, budget, solver = "fast";
    std::int64_t gen_n = 1000;
    GenProfile profile;
    int k_min = 1, k_max = 8;

    CLI::App* solve = app.add_subcommand("solve", "run the full design pipeline");
    solve->add_option("--orders", orders_path, "order file")->required();
    solve->add_option("--k", config.num_types, "number of bin types");
    solve->add_option("--solver", solver, "fast|naive|gls|all");
    solve->add_option("--out", out_path, "report JSON path (default stdout)");
    solve->add_flag("--strict", config.strict_ingest, "abort on unfittable orders");
    solve->add_flag("!--no-prune-grid", config.prune_grid,
                    "disable candidate grid pruning");
    add_common_options(solve, config, max_dims, budget);

    CLI::App* curve = app.add_subcommand("curve", "total cost for a range of K");
    curve->add_option("--orders", orders_path, "order file")->required();
    curve->add_option("--k-min", k_min, "smallest K");
    curve->add_option("--k-max", k_max, "largest K");
    curve->add_option("--solver", solver, "fast|naive");
    curve->add_option("--out", out_path, "CSV path (default stdout)");
    add_common_options(curve, config, max_dims, budget);

    CLI::App* gen = app.add_subcommand("gen", "synthesize an order file");
    gen->add_option("--n", gen_n, "number of orders")->required();
    gen->add_option("--out", out_path, "order file path (default stdout)");
    gen->add_option("--max-items", profile.max_items, "item count cap per order");
    gen->add_option("--item-p", profile.item_count_p, "geometric item-count parameter");
    gen->add_option("--min-box-frac", profile.min_box_frac, "sub-box lower size fraction");
    add_common_options(gen, config, max_dims, budget);

    CLI::App* marginals = app.add_subcommand("marginals", "dump per-order marginal types");
    marginals->add_option("--orders", orders_path, "order file")->required();
    marginals->add_option("--out", out_path, "dump path (default stdout)");
    add_common_options(marginals, config, max_dims, budget);

    CLI::App* gls = app.add_subcommand("gls", "run the local-search baseline");
    gls->add_option("--orders", orders_path, "order file")->required();
    gls->add_option("--k", config.num_types, "number of bin types");
    gls->add_option("--step", config.gls_step_size, "step size (cm)");
    gls->add_option("--threshold", config.gls_threshold, "non-improvement threshold");
    gls->add_option("--out", out_path, "report JSON path (default stdout)");
    gls->add_option("--trace", trace_path, "proposal trace path");
    add_common_options(gls, config, max_dims, budget);

    CLI11_PARSE(app, argc, argv);

    try {
        apply_common(config, max_dims, budget);
        if (solve->parsed()) {
            config.solver = solver_choice_from_name(solver);
            return run_solve(config, orders_path, out_path);
        }
        if (curve->parsed()) {
            config.solver = solver_choice_from_name(solver);
            if (config.solver != SolverChoice::fast && config.solver != SolverChoice::naive)
                throw std::invalid_argument("curve supports only fast|naive");
            return run_curve(config, orders_path, k_min, k_max, out_path);
        }
        if (gen->parsed()) return run_gen(config, gen_n, profile, out_path);
        if (marginals->parsed()) return run_marginals(config, orders_path, out_path);
        if (gls->parsed()) {
            config.solver = SolverChoice::gls;
            return run_gls(config, orders_path, out_path, trace_path);
        }
    } catch (const bindesign::PhaseError& e) {
        std::cerr << "error " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
