#pragma once
// Staged shortest-path solver for optimal bin chains: an exhaustive
// predecessor-scan reference and the divide-and-conquer + lower-envelope
// accelerated solver. Both minimize
//   sum_k cost(b_k) * (F(b_k) - F(b_{k-1}))
// over relaxed monotone chains whose last type covers all orders.

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "bindesign/counting.hpp"
#include "bindesign/dc_schedule.hpp"
#include "bindesign/detail/parallel.hpp"
#include "bindesign/envelope.hpp"
#include "bindesign/model.hpp"

namespace bindesign {

struct InfeasibleDesign : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolveStats {
    std::int64_t blocks = 0;
    std::int64_t envelope_lines = 0;
    std::int64_t envelope_queries = 0;
    double seconds = 0.0;
};

// Candidate lattice: per-axis coordinate values in cm, strictly ascending.
struct CandidateGrid {
    std::vector<int> ls, ws, hs;

    static CandidateGrid full(const Bounds& bounds) {
        CandidateGrid g;
        g.ls.resize(bounds.max_l);
        g.ws.resize(bounds.max_w);
        g.hs.resize(bounds.max_h);
        std::iota(g.ls.begin(), g.ls.end(), 1);
        std::iota(g.ws.begin(), g.ws.end(), 1);
        std::iota(g.hs.begin(), g.hs.end(), 1);
        return g;
    }

    // Coordinates that appear in some marginal type. F only changes at these
    // coordinates and cost strictly grows with every dimension, so an optimal
    // chain restricted to them costs the same as one over the full lattice.
    static CandidateGrid from_marginal_coords(std::span<const MarginalSet> sets) {
        CandidateGrid g;
        for (const MarginalSet& ms : sets) {
            for (const BoxDims& t : ms.types) {
                g.ls.push_back(t.l);
                g.ws.push_back(t.w);
                g.hs.push_back(t.h);
            }
        }
        auto finish = [](std::vector<int>& v) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
            if (v.empty()) v.push_back(1);
        };
        finish(g.ls);
        finish(g.ws);
        finish(g.hs);
        return g;
    }

    std::size_t cell_count() const { return ls.size() * ws.size() * hs.size(); }
};

// F sampled on a candidate grid, plus the order count the chain must cover.
struct DpInstance {
    CandidateGrid grid;
    std::vector<std::int32_t> counts;  // cell (li,wi,hi) -> F value
    std::int64_t n_orders = 0;

    std::size_t cell(std::size_t li, std::size_t wi, std::size_t hi) const {
        return (li * grid.ws.size() + wi) * grid.hs.size() + hi;
    }

    BoxDims box_of(std::size_t id) const {
        const std::size_t nh = grid.hs.size(), nw = grid.ws.size();
        return {grid.ls[id / (nw * nh)], grid.ws[(id / nh) % nw], grid.hs[id % nh]};
    }

    static DpInstance from_count_table(const CountTable& F, CandidateGrid grid,
                                       std::int64_t n_orders = -1) {
        DpInstance inst;
        inst.grid = std::move(grid);
        inst.counts.resize(inst.grid.cell_count());
        std::size_t id = 0;
        for (int l : inst.grid.ls)
            for (int w : inst.grid.ws)
                for (int h : inst.grid.hs) inst.counts[id++] = F.at(l, w, h);
        inst.n_orders = n_orders >= 0 ? n_orders : F.orders_covered();
        return inst;
    }

    static DpInstance from_count_table(const CountTable& F, const Bounds& bounds,
                                       std::int64_t n_orders = -1) {
        return from_count_table(F, CandidateGrid::full(bounds), n_orders);
    }
};

// Back-references recorded per stage; pred[k-1][cell] is the minimizing
// predecessor cell of `cell` at stage k (-1 means the zero anchor).
struct StageTraceback {
    std::vector<std::vector<std::int32_t>> pred;
    std::int32_t terminal = -1;
};

namespace detail {

inline constexpr Cost kCostInfinity = std::numeric_limits<Cost>::max();

struct DpWork {
    const DpInstance& inst;
    int K;
    std::size_t nl, nw, nh, ncells;
    std::vector<Cost> costv;
    std::vector<Cost> cur, next;
    StageTraceback trace;

    DpWork(const DpInstance& instance, int K_) : inst(instance), K(K_) {
        if (K < 1) throw std::invalid_argument("need at least one bin type");
        nl = inst.grid.ls.size();
        nw = inst.grid.ws.size();
        nh = inst.grid.hs.size();
        ncells = nl * nw * nh;
        if (ncells == 0) throw std::invalid_argument("empty candidate grid");
        if (inst.counts.size() != ncells)
            throw std::invalid_argument("count vector does not match grid");
        costv.resize(ncells);
        Cost max_cost = 0;
        for (std::size_t id = 0; id < ncells; ++id) {
            costv[id] = surface_cost(inst.box_of(id));
            max_cost = std::max(max_cost, costv[id]);
        }
        // Totals stay well inside 64-bit range; cell ids and costs must also
        // fit the packed 64-bit sort keys.
        if (static_cast<__int128>(max_cost) * std::max<std::int64_t>(inst.n_orders, 1) >
            kCostInfinity / 4)
            throw std::invalid_argument("instance magnitude exceeds supported cost range");
        if (ncells >= (std::size_t{1} << 24) || max_cost >= (Cost{1} << 39))
            throw std::invalid_argument("candidate grid exceeds the supported size");
        const std::int32_t max_f =
            *std::max_element(inst.counts.begin(), inst.counts.end());
        if (max_f < inst.n_orders)
            throw InfeasibleDesign("no candidate bin covers all orders");
        trace.pred.assign(K, std::vector<std::int32_t>(ncells, -1));
        cur.resize(ncells);
        next.resize(ncells);
    }

    void stage_one() {
        for (std::size_t id = 0; id < ncells; ++id)
            cur[id] = costv[id] * inst.counts[id];
    }

    // Among equal values prefer the predecessor with larger F, then the
    // lexicographically smaller dims (= smaller cell id).
    bool improves(Cost value, std::int32_t pred, Cost best_value, std::int32_t best_pred) const {
        if (value != best_value) return value < best_value;
        if (best_pred < 0) return false;
        if (inst.counts[pred] != inst.counts[best_pred])
            return inst.counts[pred] > inst.counts[best_pred];
        return pred < best_pred;
    }

    BinChain finish() {
        Cost best = kCostInfinity;
        std::int32_t best_cell = -1;
        for (std::size_t id = 0; id < ncells; ++id) {
            if (inst.counts[id] != inst.n_orders) continue;
            if (cur[id] < best || (cur[id] == best && static_cast<std::int32_t>(id) < best_cell)) {
                best = cur[id];
                best_cell = static_cast<std::int32_t>(id);
            }
        }
        if (best_cell < 0)
            throw InfeasibleDesign("no candidate bin covers all orders");
        trace.terminal = best_cell;
        return extract(best);
    }

    BinChain extract(Cost expected_total) const {
        BinChain chain;
        chain.types.resize(K);
        chain.per_type_counts.resize(K);
        std::int32_t cell = trace.terminal;
        std::vector<std::int32_t> cells(K);
        for (int k = K; k >= 1; --k) {
            cells[k - 1] = cell;
            cell = trace.pred[k - 1][cell];
        }
        assert(cell == -1);
        std::int64_t prev_f = 0;
        Cost total = 0;
        for (int k = 0; k < K; ++k) {
            chain.types[k] = inst.box_of(cells[k]);
            const std::int64_t f = inst.counts[cells[k]];
            chain.per_type_counts[k] = f - prev_f;
            total += costv[cells[k]] * (f - prev_f);
            prev_f = f;
        }
        chain.total_cost = total;
        assert(total == expected_total);
        (void)expected_total;
        return chain;
    }
};

}  // namespace detail

// Walks the recorded back-references from the terminal cell; emits the K
// types, per-type counts F(b_k) - F(b_{k-1}) and the total cost.
inline BinChain extract_solution(const DpInstance& inst, const StageTraceback& trace) {
    detail::DpWork work(inst, static_cast<int>(trace.pred.size()));
    work.trace = trace;
    BinChain chain;
    chain.types.resize(work.K);
    chain.per_type_counts.resize(work.K);
    std::int32_t cell = trace.terminal;
    std::vector<std::int32_t> cells(work.K);
    for (int k = work.K; k >= 1; --k) {
        cells[k - 1] = cell;
        cell = trace.pred[k - 1][cell];
    }
    std::int64_t prev_f = 0;
    for (int k = 0; k < work.K; ++k) {
        chain.types[k] = inst.box_of(cells[k]);
        const std::int64_t f = inst.counts[cells[k]];
        chain.per_type_counts[k] = f - prev_f;
        chain.total_cost += work.costv[cells[k]] * (f - prev_f);
        prev_f = f;
    }
    return chain;
}

// Reference solver: exhaustive predecessor scans, O(K * cells^2).
inline BinChain solve_naive(const DpInstance& inst, int K) {
    detail::DpWork work(inst, K);
    work.stage_one();
    for (int k = 2; k <= K; ++k) {
        auto& pred = work.trace.pred[k - 1];
        for (std::size_t li = 0; li < work.nl; ++li)
            for (std::size_t wi = 0; wi < work.nw; ++wi)
                for (std::size_t hi = 0; hi < work.nh; ++hi) {
                    const std::size_t s = inst.cell(li, wi, hi);
                    const Cost cost_s = work.costv[s];
                    const std::int64_t f_s = inst.counts[s];
                    Cost best = detail::kCostInfinity;
                    std::int32_t best_pred = -1;
                    for (std::size_t pl = 0; pl <= li; ++pl)
                        for (std::size_t pw = 0; pw <= wi; ++pw)
                            for (std::size_t ph = 0; ph <= hi; ++ph) {
                                const std::size_t p = inst.cell(pl, pw, ph);
                                const Cost value =
                                    work.cur[p] + cost_s * (f_s - inst.counts[p]);
                                if (work.improves(value, static_cast<std::int32_t>(p),
                                                  best, best_pred)) {
                                    best = value;
                                    best_pred = static_cast<std::int32_t>(p);
                                }
                            }
                    work.next[s] = best;
                    pred[s] = best_pred;
                }
        std::swap(work.cur, work.next);
    }
    return work.finish();
}

struct DpOptions {
    // Above this many presorted member ids the schedule is re-sorted per
    // stage instead of being cached.
    std::int64_t presort_element_cap = 40000000;
    // Worker threads for the per-stage block sweep (0 = hardware). Results
    // are identical for any worker count: the candidate set per successor is
    // fixed and the tie rule is a total order.
    int workers = 1;
};

namespace detail {

// One cross block of the tensored schedule: ranges of member ids in the
// shared arenas. Cell-to-itself pairs are handled by seeding each stage with
// the previous one, so pure-diagonal blocks never appear here.
struct CrossBlock {
    std::int64_t pred_off = 0, succ_off = 0;
    std::int32_t pred_len = 0, succ_len = 0;
};

struct BlockArena {
    std::vector<CrossBlock> blocks;
    std::vector<std::int32_t> pred_ids;  // per block: slope-ascending (F descending)
    std::vector<std::int32_t> succ_ids;  // per block: cost-ascending
};

template <typename Fn>
void for_each_cross_block(const std::vector<Block1D>& ls, const std::vector<Block1D>& ws,
                          const std::vector<Block1D>& hs, Fn&& fn) {
    auto diagonal = [](const Block1D& b) {
        return b.pred.lo == b.pred.hi && b.pred == b.succ;
    };
    for (const Block1D& bl : ls)
        for (const Block1D& bw : ws)
            for (const Block1D& bh : hs) {
                if (diagonal(bl) && diagonal(bw) && diagonal(bh)) continue;
                fn(bl, bw, bh);
            }
}

}  // namespace detail

// Accelerated solver. Each stage transition is decomposed into the tensored
// divide-and-conquer blocks; within a block the predecessors become lines
// with slope -F(p) and intercept C(k-1, p), and every successor queries the
// lower envelope at x = cost(s). Slopes and query points depend only on F
// and cost, so each block's member order is sorted once and reused across
// all K stages.
inline BinChain solve_fast(const DpInstance& inst, int K, SolveStats* stats = nullptr,
                           const DpOptions& options = {}) {
    const auto start_time = std::chrono::steady_clock::now();
    detail::DpWork work(inst, K);
    work.stage_one();
    SolveStats local;

    const auto blocks_l = axis_schedule(static_cast<int>(work.nl));
    const auto blocks_w = axis_schedule(static_cast<int>(work.nw));
    const auto blocks_h = axis_schedule(static_cast<int>(work.nh));

    // Packed sort keys: order by (F descending, id) resp. (cost ascending,
    // id) with one integer compare.
    std::vector<std::uint64_t> pred_key(work.ncells), succ_key(work.ncells);
    for (std::size_t id = 0; id < work.ncells; ++id) {
        pred_key[id] = (static_cast<std::uint64_t>(
                            std::numeric_limits<std::int32_t>::max() - inst.counts[id])
                        << 24) |
                       id;
        succ_key[id] = (static_cast<std::uint64_t>(work.costv[id]) << 24) | id;
    }

    auto gather_preds = [&](const Block1D& bl, const Block1D& bw, const Block1D& bh,
                            std::vector<std::int32_t>& out) {
        for (int li = bl.pred.lo - 1; li < bl.pred.hi; ++li)
            for (int wi = bw.pred.lo - 1; wi < bw.pred.hi; ++wi)
                for (int hi = bh.pred.lo - 1; hi < bh.pred.hi; ++hi)
                    out.push_back(static_cast<std::int32_t>(inst.cell(li, wi, hi)));
        std::sort(out.begin(), out.end(),
                  [&](std::int32_t a, std::int32_t b) { return pred_key[a] < pred_key[b]; });
    };
    auto gather_succs = [&](const Block1D& bl, const Block1D& bw, const Block1D& bh,
                            std::vector<std::int32_t>& out) {
        for (int li = bl.succ.lo - 1; li < bl.succ.hi; ++li)
            for (int wi = bw.succ.lo - 1; wi < bw.succ.hi; ++wi)
                for (int hi = bh.succ.lo - 1; hi < bh.succ.hi; ++hi)
                    out.push_back(static_cast<std::int32_t>(inst.cell(li, wi, hi)));
        std::sort(out.begin(), out.end(),
                  [&](std::int32_t a, std::int32_t b) { return succ_key[a] < succ_key[b]; });
    };

    // Decide whether the sorted member lists fit the cache budget.
    std::int64_t total_elements = 0;
    detail::for_each_cross_block(blocks_l, blocks_w, blocks_h,
                                 [&](const Block1D& bl, const Block1D& bw, const Block1D& bh) {
                                     const std::int64_t preds =
                                         std::int64_t{bl.pred.size()} * bw.pred.size() *
                                         bh.pred.size();
                                     const std::int64_t succs =
                                         std::int64_t{bl.succ.size()} * bw.succ.size() *
                                         bh.succ.size();
                                     total_elements += preds + succs;
                                 });
    const bool presort = K > 2 && total_elements <= options.presort_element_cap;

    detail::BlockArena arena;
    if (presort) {
        arena.pred_ids.reserve(total_elements / 2);
        arena.succ_ids.reserve(total_elements / 2);
        std::vector<std::int32_t> buf;
        detail::for_each_cross_block(
            blocks_l, blocks_w, blocks_h,
            [&](const Block1D& bl, const Block1D& bw, const Block1D& bh) {
                detail::CrossBlock blk;
                blk.pred_off = static_cast<std::int64_t>(arena.pred_ids.size());
                buf.clear();
                gather_preds(bl, bw, bh, buf);
                blk.pred_len = static_cast<std::int32_t>(buf.size());
                arena.pred_ids.insert(arena.pred_ids.end(), buf.begin(), buf.end());
                blk.succ_off = static_cast<std::int64_t>(arena.succ_ids.size());
                buf.clear();
                gather_succs(bl, bw, bh, buf);
                blk.succ_len = static_cast<std::int32_t>(buf.size());
                arena.succ_ids.insert(arena.succ_ids.end(), buf.begin(), buf.end());
                arena.blocks.push_back(blk);
            });
    }

    struct SweepScratch {
        std::vector<Line> lines;
        EnvelopeBuilder builder;
        std::vector<Cost> value;
        std::vector<std::int32_t> pred;
        SolveStats stats;
    };

    auto apply_block = [&](std::span<const std::int32_t> preds,
                           std::span<const std::int32_t> succs, SweepScratch& sc,
                           std::vector<Cost>& out_value,
                           std::vector<std::int32_t>& out_pred) {
        ++sc.stats.blocks;
        sc.lines.clear();
        for (const std::int32_t p : preds)
            sc.lines.push_back({-inst.counts[p], work.cur[p], p});
        sc.stats.envelope_lines += static_cast<std::int64_t>(sc.lines.size());
        sc.stats.envelope_queries += static_cast<std::int64_t>(succs.size());
        if (sc.lines.size() <= 4 || succs.size() <= 2) {
            // Tiny blocks: a direct scan beats building the envelope. Lines
            // arrive slope-ascending (F descending), so keeping the first
            // strict minimum applies the same larger-F tie rule.
            for (const std::int32_t s : succs) {
                const Cost x = work.costv[s];
                const Line* best = &sc.lines.front();
                Cost best_y = best->eval(x);
                for (std::size_t i = 1; i < sc.lines.size(); ++i) {
                    const Cost y = sc.lines[i].eval(x);
                    if (y < best_y) {
                        best_y = y;
                        best = &sc.lines[i];
                    }
                }
                const Cost value = x * inst.counts[s] + best_y;
                if (work.improves(value, best->ref, out_value[s], out_pred[s])) {
                    out_value[s] = value;
                    out_pred[s] = best->ref;
                }
            }
            return;
        }
        const auto env = sc.builder.build(sc.lines);
        std::size_t seg = 0;
        for (const std::int32_t s : succs) {
            const Cost x = work.costv[s];
            while (seg + 1 < env.size() && at_or_after(x, env[seg + 1].x_lo)) ++seg;
            const Line& line = env[seg].line;
            const Cost value = x * inst.counts[s] + line.eval(x);
            if (work.improves(value, line.ref, out_value[s], out_pred[s])) {
                out_value[s] = value;
                out_pred[s] = line.ref;
            }
        }
    };

    const int workers = detail::resolve_workers(options.workers);
    const bool parallel_sweep = presort && workers > 1 && arena.blocks.size() >= 256;
    std::vector<SweepScratch> scratch(parallel_sweep ? workers : 1);

    for (int k = 2; k <= K; ++k) {
        auto& stage_pred = work.trace.pred[k - 1];
        // Seed with the relaxed self-transition b_k = b_{k-1}.
        work.next = work.cur;
        for (std::size_t s = 0; s < work.ncells; ++s)
            stage_pred[s] = static_cast<std::int32_t>(s);
        if (parallel_sweep) {
            // Fixed block chunks into per-worker buffers, then a min-combine
            // merge; the tie rule is a total order, so the result does not
            // depend on the chunking.
            const std::size_t nblocks = arena.blocks.size();
            detail::parallel_for(static_cast<std::int64_t>(scratch.size()), workers,
                                 [&](std::int64_t c) {
                                     SweepScratch& sc = scratch[c];
                                     sc.value.assign(work.ncells, detail::kCostInfinity);
                                     sc.pred.assign(work.ncells, -1);
                                     const std::size_t begin =
                                         nblocks * c / scratch.size();
                                     const std::size_t end =
                                         nblocks * (c + 1) / scratch.size();
                                     for (std::size_t b = begin; b < end; ++b) {
                                         const detail::CrossBlock& blk = arena.blocks[b];
                                         apply_block(
                                             {arena.pred_ids.data() + blk.pred_off,
                                              static_cast<std::size_t>(blk.pred_len)},
                                             {arena.succ_ids.data() + blk.succ_off,
                                              static_cast<std::size_t>(blk.succ_len)},
                                             sc, sc.value, sc.pred);
                                     }
                                 });
            for (const SweepScratch& sc : scratch)
                for (std::size_t s = 0; s < work.ncells; ++s)
                    if (sc.value[s] != detail::kCostInfinity &&
                        work.improves(sc.value[s], sc.pred[s], work.next[s],
                                      stage_pred[s])) {
                        work.next[s] = sc.value[s];
                        stage_pred[s] = sc.pred[s];
                    }
        } else if (presort) {
            for (const detail::CrossBlock& blk : arena.blocks)
                apply_block({arena.pred_ids.data() + blk.pred_off,
                             static_cast<std::size_t>(blk.pred_len)},
                            {arena.succ_ids.data() + blk.succ_off,
                             static_cast<std::size_t>(blk.succ_len)},
                            scratch[0], work.next, stage_pred);
        } else {
            std::vector<std::int32_t> pred_buf, succ_buf;
            detail::for_each_cross_block(
                blocks_l, blocks_w, blocks_h,
                [&](const Block1D& bl, const Block1D& bw, const Block1D& bh) {
                    pred_buf.clear();
                    gather_preds(bl, bw, bh, pred_buf);
                    succ_buf.clear();
                    gather_succs(bl, bw, bh, succ_buf);
                    apply_block(pred_buf, succ_buf, scratch[0], work.next, stage_pred);
                });
        }
        std::swap(work.cur, work.next);
    }
    for (const SweepScratch& sc : scratch) {
        local.blocks += sc.stats.blocks;
        local.envelope_lines += sc.stats.envelope_lines;
        local.envelope_queries += sc.stats.envelope_queries;
    }
    BinChain chain = work.finish();
    local.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time)
            .count();
    if (stats) *stats = local;
    return chain;
}

inline BinChain solve_naive(const CountTable& F, const Bounds& bounds) {
    return solve_naive(DpInstance::from_count_table(F, bounds), bounds.num_types);
}

inline BinChain solve_fast(const CountTable& F, const Bounds& bounds,
                           SolveStats* stats = nullptr) {
    return solve_fast(DpInstance::from_count_table(F, bounds), bounds.num_types, stats);
}

}  // namespace bindesign
