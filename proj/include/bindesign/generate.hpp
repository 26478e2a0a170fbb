#pragma once
// Synthetic order generation. Each order's items are produced by recursively
// splitting a random sub-box of the bounds, so a packing within the bounds
// exists by construction; item counts follow a capped geometric distribution
// with its mode at one item and a long tail.
//
// A tiling is not always reachable by the volume-ordered corner search (a
// piece may need a supporting slab that the search would place later), so by
// default every order is probed for a first packing and resampled until the
// probe succeeds. Pruning never blocks the first leaf, which makes the probe
// budget a floor for any budget the solve pipeline may use.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bindesign/detail/rng.hpp"
#include "bindesign/marginal.hpp"
#include "bindesign/model.hpp"

namespace bindesign {

struct GenProfile {
    // P(items <= 10) = 1 - (1-p)^10, about 0.75 at the default.
    double item_count_p = 0.12945;
    int max_items = 40;
    // Sub-box sides are uniform in [ceil(frac * side), side].
    double min_box_frac = 0.25;
    // Resample orders whose tiling the corner search cannot reorder into a
    // packing; 0 disables the probe.
    std::int64_t searchable_probe_budget = 2000;
};

namespace detail {

inline int split_axis_pick(SplitMix64& rng, const BoxDims& piece) {
    int eligible[3], n = 0;
    if (piece.l >= 2) eligible[n++] = 0;
    if (piece.w >= 2) eligible[n++] = 1;
    if (piece.h >= 2) eligible[n++] = 2;
    if (n == 0) return -1;
    return eligible[rng.below(static_cast<std::uint64_t>(n))];
}

inline bool probe_searchable(const Order& order, const Bounds& bounds,
                             std::int64_t probe_budget) {
    SearchBudget probe;
    probe.z_factor = ZFactor::infinite();
    probe.max_search_count = probe_budget;
    try {
        CornerSearch search(order, bounds, probe);
        search.set_stop_after_first_leaf();
        search.run();
        return true;
    } catch (const InfeasibleOrder&) {
        return false;
    } catch (const BudgetExhaustedBeforeFirstLeaf&) {
        return false;
    }
}

}  // namespace detail

inline std::vector<Order> generate_orders(std::int64_t n_orders, const Bounds& bounds,
                                          const GenProfile& profile, std::uint64_t seed) {
    if (n_orders < 1) throw std::invalid_argument("need at least one order");
    if (profile.max_items < 1 || profile.item_count_p <= 0.0 || profile.item_count_p > 1.0)
        throw std::invalid_argument("malformed generator profile");
    detail::SplitMix64 rng(seed);
    const std::uint64_t stop_p = detail::scale_probability(profile.item_count_p);

    std::vector<Order> orders;
    orders.reserve(static_cast<std::size_t>(n_orders));
    std::vector<BoxDims> pieces;
    for (std::int64_t i = 0; i < n_orders; ++i) {
        Order order;
        order.id = "o" + std::to_string(i + 1);
        for (int attempt = 0;; ++attempt) {
            int target = 1;
            while (target < profile.max_items && !rng.chance(stop_p)) ++target;

            auto side = [&](int bound) {
                const int lo =
                    std::max(1, static_cast<int>(bound * profile.min_box_frac + 0.999999));
                return rng.range(std::min(lo, bound), bound);
            };
            const BoxDims box{side(bounds.max_l), side(bounds.max_w), side(bounds.max_h)};

            pieces.clear();
            pieces.push_back(box);
            while (static_cast<int>(pieces.size()) < target) {
                // Split the largest remaining piece.
                std::size_t big = 0;
                for (std::size_t j = 1; j < pieces.size(); ++j)
                    if (pieces[j].volume() > pieces[big].volume()) big = j;
                const int axis = detail::split_axis_pick(rng, pieces[big]);
                if (axis < 0) break;  // all pieces are unit cubes
                BoxDims a = pieces[big], b = pieces[big];
                if (axis == 0) {
                    const int cut = rng.range(1, a.l - 1);
                    a.l = cut;
                    b.l -= cut;
                } else if (axis == 1) {
                    const int cut = rng.range(1, a.w - 1);
                    a.w = cut;
                    b.w -= cut;
                } else {
                    const int cut = rng.range(1, a.h - 1);
                    a.h = cut;
                    b.h -= cut;
                }
                pieces[big] = a;
                pieces.push_back(b);
            }
            order.items = pieces;
            if (profile.searchable_probe_budget <= 0 ||
                detail::probe_searchable(order, bounds, profile.searchable_probe_budget))
                break;
            if (attempt >= 200)
                throw std::runtime_error("generator failed to produce a searchable order");
        }
        orders.push_back(std::move(order));
    }
    return orders;
}

}  // namespace bindesign
