#pragma once
// Greedy local search comparator and the brute-force oracles used by the
// test suites. The oracles deliberately avoid the production search and DP
// code paths.

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "bindesign/detail/rng.hpp"
#include "bindesign/marginal.hpp"
#include "bindesign/model.hpp"

namespace bindesign {

struct InfeasibleInitial : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr Cost kInfeasibleCost = std::numeric_limits<Cost>::max() / 2;

// Charges every order the surface cost of the first (smallest-index) type
// that fits it; kInfeasibleCost when some order fits no type. The chain must
// be sorted ascending by surface cost.
inline Cost evaluate_chain(std::span<const MarginalSet> sets,
                           std::span<const BoxDims> chain) {
    Cost total = 0;
    for (const MarginalSet& ms : sets) {
        Cost charged = -1;
        for (const BoxDims& t : chain) {
            if (fits(ms, t)) {
                charged = surface_cost(t);
                break;
            }
        }
        if (charged < 0) return kInfeasibleCost;
        total += charged;
    }
    return total;
}

// Per-type order counts under the first-fit charging rule.
inline std::vector<std::int64_t> assignment_counts(std::span<const MarginalSet> sets,
                                                   std::span<const BoxDims> chain) {
    std::vector<std::int64_t> counts(chain.size(), 0);
    for (const MarginalSet& ms : sets) {
        bool assigned = false;
        for (std::size_t k = 0; k < chain.size(); ++k) {
            if (fits(ms, chain[k])) {
                ++counts[k];
                assigned = true;
                break;
            }
        }
        if (!assigned)
            throw std::invalid_argument("order " + ms.order_id + " fits no chain type");
    }
    return counts;
}

// Initial chain for the local search: per dimension the k/K-th empirical
// quantiles of each order's cheapest marginal type, clamped to bounds and
// made monotone; the last type is raised to cover every order.
inline std::vector<BoxDims> quantile_init(std::span<const MarginalSet> sets,
                                          const Bounds& bounds, int K) {
    if (sets.empty()) throw std::invalid_argument("quantile_init needs at least one order");
    if (K < 1) throw std::invalid_argument("need at least one bin type");
    std::vector<BoxDims> reps;
    reps.reserve(sets.size());
    for (const MarginalSet& ms : sets) {
        const BoxDims* best = &ms.types.front();
        for (const BoxDims& t : ms.types)
            if (surface_cost(t) < surface_cost(*best)) best = &t;
        reps.push_back(*best);
    }
    const std::size_t n = reps.size();
    std::array<std::vector<int>, 3> coords;
    for (const BoxDims& r : reps) {
        coords[0].push_back(r.l);
        coords[1].push_back(r.w);
        coords[2].push_back(r.h);
    }
    for (auto& v : coords) std::sort(v.begin(), v.end());

    std::vector<BoxDims> chain(K);
    for (int k = 0; k < K; ++k) {
        const std::size_t rank =
            (static_cast<std::size_t>(k + 1) * n + K - 1) / K;  // ceil((k+1)n/K)
        BoxDims t{coords[0][rank - 1], coords[1][rank - 1], coords[2][rank - 1]};
        t.l = std::min(t.l, bounds.max_l);
        t.w = std::min(t.w, bounds.max_w);
        t.h = std::min(t.h, bounds.max_h);
        chain[k] = t;
        if (k > 0) {
            chain[k].l = std::max(chain[k].l, chain[k - 1].l);
            chain[k].w = std::max(chain[k].w, chain[k - 1].w);
            chain[k].h = std::max(chain[k].h, chain[k - 1].h);
        }
    }
    // The top quantile already equals the componentwise max of the
    // representatives; raising keeps that guarantee explicit.
    for (const BoxDims& r : reps) {
        chain[K - 1].l = std::max(chain[K - 1].l, r.l);
        chain[K - 1].w = std::max(chain[K - 1].w, r.w);
        chain[K - 1].h = std::max(chain[K - 1].h, r.h);
    }
    return chain;
}

struct GlsParams {
    int step_size = 1;
    std::int64_t non_improvement_threshold = 1000;
    std::uint64_t seed = 0;
    // Hard stop against configurations where every proposal is guard-rejected.
    std::int64_t max_proposals = 10000000;
    std::optional<std::vector<BoxDims>> initial_chain;
};

struct GlsTraceRecord {
    std::int64_t iteration = 0;
    int type_index = 0;  // 1-based
    int dimension = 0;   // 0 = l, 1 = w, 2 = h
    int proposed_value = 0;
    bool guard_rejected = false;
    bool accepted = false;
    Cost cost = 0;  // current cost after this proposal
};

struct GlsResult {
    BinChain chain;
    Cost cost = 0;
    std::vector<GlsTraceRecord> trace;
    std::int64_t proposals = 0;
    std::int64_t accepted_moves = 0;
};

namespace detail {

inline int& box_dim(BoxDims& b, int axis) { return axis == 0 ? b.l : axis == 1 ? b.w : b.h; }
inline int box_dim(const BoxDims& b, int axis) { return axis == 0 ? b.l : axis == 1 ? b.w : b.h; }

}  // namespace detail

// One random single-dimension step per iteration: proposals that would break
// the per-dimension ordering are rejected outright; evaluated proposals must
// strictly improve or they feed the non-improvement counter.
inline GlsResult gls_solve(std::span<const MarginalSet> sets, const Bounds& bounds,
                           const GlsParams& params = {}) {
    if (params.step_size < 1) throw std::invalid_argument("step size must be >= 1");
    const int K = bounds.num_types;
    std::vector<BoxDims> chain =
        params.initial_chain ? *params.initial_chain : quantile_init(sets, bounds, K);
    if (static_cast<int>(chain.size()) != K)
        throw std::invalid_argument("initial chain size does not match K");
    for (int k = 1; k < K; ++k)
        if (!dominates(chain[k], chain[k - 1]))
            throw std::invalid_argument("initial chain is not componentwise nondecreasing");

    GlsResult result;
    Cost cost = evaluate_chain(sets, chain);
    if (cost == kInfeasibleCost)
        throw InfeasibleInitial("initial chain cannot pack every order");

    if (params.non_improvement_threshold > 0) {
        detail::SplitMix64 rng(params.seed);
        std::int64_t counter = 0;
        while (counter <= params.non_improvement_threshold &&
               result.proposals < params.max_proposals) {
            const int dim = rng.range(0, 2);
            const int k = rng.range(0, K - 1);
            const int delta = rng.coin() ? params.step_size : -params.step_size;
            const int old_value = detail::box_dim(chain[k], dim);
            const int proposed = old_value + delta;
            ++result.proposals;

            const int lower = k == 0 ? 1 : detail::box_dim(chain[k - 1], dim);
            const int upper = k == K - 1 ? bounds.side(dim) : detail::box_dim(chain[k + 1], dim);
            GlsTraceRecord rec{result.proposals, k + 1, dim, proposed, false, false, cost};
            if (proposed < lower || proposed > upper) {
                rec.guard_rejected = true;
                result.trace.push_back(rec);
                continue;
            }
            detail::box_dim(chain[k], dim) = proposed;
            const Cost proposed_cost = evaluate_chain(sets, chain);
            if (proposed_cost < cost) {
                cost = proposed_cost;
                ++result.accepted_moves;
                rec.accepted = true;
                rec.cost = cost;
            } else {
                detail::box_dim(chain[k], dim) = old_value;
                ++counter;
            }
            result.trace.push_back(rec);
        }
    }

    result.cost = cost;
    result.chain.types = chain;
    result.chain.total_cost = cost;
    result.chain.per_type_counts = assignment_counts(sets, chain);
    return result;
}

namespace detail {

struct OraclePlacement {
    int x, y, z, x2, y2, z2;
};

// Places items of `seq` from position `idx` on; candidate coordinates are 0
// and the far coordinates of already placed items.
inline bool oracle_place(const std::vector<BoxDims>& seq, std::size_t idx,
                         const BoxDims& bin, std::vector<OraclePlacement>& placed) {
    if (idx == seq.size()) return true;
    std::vector<int> xs{0}, ys{0}, zs{0};
    for (const OraclePlacement& p : placed) {
        xs.push_back(p.x2);
        ys.push_back(p.y2);
        zs.push_back(p.z2);
    }
    std::array<int, 3> dims{seq[idx].l, seq[idx].w, seq[idx].h};
    std::sort(dims.begin(), dims.end());
    do {
        for (const int x : xs) {
            const int x2 = x + dims[0];
            if (x2 > bin.l) continue;
            for (const int y : ys) {
                const int y2 = y + dims[1];
                if (y2 > bin.w) continue;
                for (const int z : zs) {
                    const int z2 = z + dims[2];
                    if (z2 > bin.h) continue;
                    bool blocked_x = x == 0, blocked_y = y == 0, blocked_z = z == 0;
                    bool overlap = false;
                    for (const OraclePlacement& p : placed) {
                        const bool ox = x < p.x2 && p.x < x2;
                        const bool oy = y < p.y2 && p.y < y2;
                        const bool oz = z < p.z2 && p.z < z2;
                        if (ox && oy && oz) {
                            overlap = true;
                            break;
                        }
                        if (p.x2 == x && oy && oz) blocked_x = true;
                        if (p.y2 == y && ox && oz) blocked_y = true;
                        if (p.z2 == z && ox && oy) blocked_z = true;
                    }
                    if (overlap || !blocked_x || !blocked_y || !blocked_z) continue;
                    placed.push_back({x, y, z, x2, y2, z2});
                    if (oracle_place(seq, idx + 1, bin, placed)) return true;
                    placed.pop_back();
                }
            }
        }
    } while (std::next_permutation(dims.begin(), dims.end()));
    return false;
}

}  // namespace detail

// Exhaustive corner-placement feasibility check: every item sequence, every
// orientation, every candidate position, no pruning and no budget.
inline bool exhaustive_pack_oracle(const Order& order, const BoxDims& bin) {
    if (order.items.empty()) throw std::invalid_argument("order has no items");
    if (order.items.size() > 4)
        throw TooLarge("exhaustive pack oracle supports at most 4 items");
    std::vector<BoxDims> seq = order.items;
    std::sort(seq.begin(), seq.end());
    std::vector<detail::OraclePlacement> placed;
    placed.reserve(seq.size());
    do {
        placed.clear();
        if (detail::oracle_place(seq, 0, bin, placed)) return true;
    } while (std::next_permutation(seq.begin(), seq.end()));
    return false;
}

struct BruteForceResult {
    std::vector<BoxDims> types;
    Cost cost = 0;
};

// End-to-end optimality oracle: enumerates every relaxed-monotone chain over
// the full lattice and evaluates it with the first-fit charging rule.
inline BruteForceResult brute_force_design(std::span<const MarginalSet> sets,
                                           const Bounds& bounds) {
    if (bounds.max_l > 6 || bounds.max_w > 6 || bounds.max_h > 6)
        throw TooLarge("brute force design supports grids up to 6x6x6");
    if (bounds.num_types > 3) throw TooLarge("brute force design supports K <= 3");
    if (sets.size() > 12) throw TooLarge("brute force design supports at most 12 orders");

    const int L = bounds.max_l, W = bounds.max_w, H = bounds.max_h;
    const int K = bounds.num_types;
    const std::size_t ncells = static_cast<std::size_t>(L) * W * H;
    auto box_of = [&](std::size_t id) {
        return BoxDims{static_cast<int>(id / (W * H)) + 1,
                       static_cast<int>((id / H) % W) + 1, static_cast<int>(id % H) + 1};
    };
    std::vector<std::vector<char>> fit(sets.size(), std::vector<char>(ncells, 0));
    for (std::size_t i = 0; i < sets.size(); ++i)
        for (std::size_t id = 0; id < ncells; ++id)
            fit[i][id] = fits(sets[i], box_of(id)) ? 1 : 0;

    BruteForceResult best;
    best.cost = kInfeasibleCost;
    std::vector<std::size_t> chain(K);
    auto evaluate = [&] {
        Cost total = 0;
        for (std::size_t i = 0; i < sets.size(); ++i) {
            Cost charged = -1;
            for (int k = 0; k < K; ++k) {
                if (fit[i][chain[k]]) {
                    charged = surface_cost(box_of(chain[k]));
                    break;
                }
            }
            if (charged < 0) return;
            total += charged;
        }
        if (total < best.cost) {
            best.cost = total;
            best.types.clear();
            for (int k = 0; k < K; ++k) best.types.push_back(box_of(chain[k]));
        }
    };
    auto enumerate = [&](auto&& self, int k, const BoxDims& prev) -> void {
        for (std::size_t id = 0; id < ncells; ++id) {
            const BoxDims b = box_of(id);
            if (!dominates(b, prev)) continue;
            chain[k] = id;
            if (k + 1 == K)
                evaluate();
            else
                self(self, k + 1, b);
        }
    };
    enumerate(enumerate, 0, kChainAnchor);
    if (best.cost == kInfeasibleCost)
        throw std::runtime_error("no chain over the grid packs every order");
    return best;
}

}  // namespace bindesign
