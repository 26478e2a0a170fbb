#include <algorithm>
#include <catch2/catch_amalgamated.hpp>

#include "bindesign/baseline.hpp"
#include "bindesign/detail/rng.hpp"
#include "bindesign/marginal.hpp"

using namespace bindesign;

namespace {

const Bounds kSmallBounds(5, 5, 5, 2);

Order make_order(std::string id, std::vector<BoxDims> items) {
    return Order{std::move(id), std::move(items)};
}

}  // namespace

TEST_CASE("item orientations") {
    CHECK(item_orientations({1, 1, 1}) == std::vector<BoxDims>{{1, 1, 1}});
    CHECK(item_orientations({2, 1, 1}) ==
          std::vector<BoxDims>{{1, 1, 2}, {1, 2, 1}, {2, 1, 1}});
    CHECK(item_orientations({3, 2, 1}).size() == 6);
    CHECK(item_orientations({3, 3, 1}).size() == 3);
}

TEST_CASE("pareto filter keeps minimal elements") {
    CHECK(pareto_filter({{2, 2, 2}, {2, 2, 3}}) == std::vector<BoxDims>{{2, 2, 2}});
    CHECK(pareto_filter({{2, 1, 1}, {1, 2, 1}}) ==
          std::vector<BoxDims>{{1, 2, 1}, {2, 1, 1}});
    CHECK(pareto_filter({{3, 3, 3}}) == std::vector<BoxDims>{{3, 3, 3}});
}

TEST_CASE("pareto filter produces an antichain covering the input") {
    detail::SplitMix64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<BoxDims> boxes;
        const int n = rng.range(1, 12);
        for (int i = 0; i < n; ++i)
            boxes.push_back({rng.range(1, 5), rng.range(1, 5), rng.range(1, 5)});
        const auto minimal = pareto_filter(boxes);
        for (std::size_t i = 0; i < minimal.size(); ++i)
            for (std::size_t j = 0; j < minimal.size(); ++j)
                if (i != j) CHECK_FALSE(dominates(minimal[i], minimal[j]));
        for (const BoxDims& b : boxes) {
            const bool covered = std::any_of(minimal.begin(), minimal.end(),
                                             [&](const BoxDims& m) { return dominates(b, m); });
            CHECK(covered);
        }
    }
}

TEST_CASE("fits checks membership via dominance") {
    const MarginalSet ms{"o1", {{1, 1, 2}, {2, 1, 1}}};
    CHECK(fits(ms, {2, 2, 1}));
    CHECK_FALSE(fits(MarginalSet{"o2", {{2, 1, 1}}}, {1, 1, 1}));
    CHECK(fits(MarginalSet{"o3", {{1, 1, 1}}}, {1, 1, 1}));
}

TEST_CASE("corner count map tracks and restores occurrences") {
    CornerCountMap corners;
    CHECK(corners.xs == std::map<int, int>{{0, 1}});
    corners.add(2, 1, 1);
    CHECK(corners.xs == std::map<int, int>{{0, 1}, {2, 1}});
    CHECK(corners.ys == std::map<int, int>{{0, 1}, {1, 1}});
    corners.add(1, 2, 1);
    CHECK(corners.xs == std::map<int, int>{{0, 1}, {1, 1}, {2, 1}});
    CHECK(corners.ys == std::map<int, int>{{0, 1}, {1, 1}, {2, 1}});
    CHECK(corners.zs == std::map<int, int>{{0, 1}, {1, 2}});
    corners.remove(1, 2, 1);
    corners.remove(2, 1, 1);
    CHECK(corners.xs == std::map<int, int>{{0, 1}});
    CHECK(corners.ys == std::map<int, int>{{0, 1}});
    CHECK(corners.zs == std::map<int, int>{{0, 1}});
}

TEST_CASE("single item marginal set is its orientation set") {
    const auto result =
        marginal_search(make_order("o1", {{2, 1, 1}}), kSmallBounds, SearchBudget::unlimited());
    CHECK(result.set.types == std::vector<BoxDims>{{1, 1, 2}, {1, 2, 1}, {2, 1, 1}});
    CHECK(result.stats.best_cost == 10);
    CHECK_FALSE(result.stats.budget_exhausted);
}

TEST_CASE("two unit cubes must stack along one axis") {
    const auto result = marginal_search(make_order("o1", {{1, 1, 1}, {1, 1, 1}}),
                                        kSmallBounds, SearchBudget::unlimited());
    CHECK(result.set.types == std::vector<BoxDims>{{1, 1, 2}, {1, 2, 1}, {2, 1, 1}});
}

TEST_CASE("search is deterministic") {
    const Order order = make_order("o1", {{3, 2, 1}, {1, 1, 1}, {2, 2, 2}});
    const auto a = marginal_search(order, kSmallBounds);
    const auto b = marginal_search(order, kSmallBounds);
    CHECK(a.set.types == b.set.types);
    CHECK(a.stats.nodes_visited == b.stats.nodes_visited);
    CHECK(a.stats.best_cost == b.stats.best_cost);
}

TEST_CASE("best cost equals the cheapest returned type") {
    detail::SplitMix64 rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<BoxDims> items;
        const int n = rng.range(1, 3);
        for (int i = 0; i < n; ++i)
            items.push_back({rng.range(1, 3), rng.range(1, 3), rng.range(1, 3)});
        const auto result =
            marginal_search(make_order("o", items), kSmallBounds, SearchBudget::unlimited());
        Cost cheapest = std::numeric_limits<Cost>::max();
        for (const BoxDims& t : result.set.types)
            cheapest = std::min(cheapest, surface_cost(t));
        CHECK(result.stats.best_cost == cheapest);
        // Result is an antichain.
        for (const BoxDims& a : result.set.types)
            for (const BoxDims& b : result.set.types)
                if (a != b) CHECK_FALSE(dominates(a, b));
    }
}

TEST_CASE("infeasible orders are reported") {
    CHECK_THROWS_AS(marginal_search(make_order("o1", {{6, 6, 6}}), kSmallBounds),
                    InfeasibleOrder);
    // Each item fits alone, together they exceed the bounds.
    CHECK_THROWS_AS(
        marginal_search(make_order("o2", {{5, 5, 5}, {1, 1, 1}}), kSmallBounds),
        InfeasibleOrder);
}

TEST_CASE("budget exhaustion before the first leaf is an error") {
    SearchBudget tiny;
    tiny.max_search_count = 1;
    CHECK_THROWS_AS(
        marginal_search(make_order("o1", {{1, 1, 1}, {1, 1, 1}}), kSmallBounds, tiny),
        BudgetExhaustedBeforeFirstLeaf);
}

TEST_CASE("budget exhaustion after a leaf returns the partial frontier") {
    SearchBudget small;
    small.z_factor = ZFactor::infinite();
    small.max_search_count = 8;
    const auto result = marginal_search(make_order("o1", {{2, 1, 1}, {1, 1, 1}}),
                                        kSmallBounds, small);
    CHECK(result.stats.budget_exhausted);
    CHECK_FALSE(result.set.types.empty());
}

TEST_CASE("tight pruning keeps the cost-minimal frontier members") {
    const Order order = make_order("o1", {{2, 2, 1}, {1, 1, 1}});
    SearchBudget tight;
    tight.z_factor = ZFactor::ratio(1, 1);
    const auto pruned = marginal_search(order, kSmallBounds, tight);
    const auto full = marginal_search(order, kSmallBounds, SearchBudget::unlimited());
    CHECK(pruned.stats.best_cost == full.stats.best_cost);
    // Every cost-minimal member of the true frontier survives any z >= 1.
    for (const BoxDims& t : full.set.types) {
        if (surface_cost(t) != full.stats.best_cost) continue;
        CHECK(std::find(pruned.set.types.begin(), pruned.set.types.end(), t) !=
              pruned.set.types.end());
    }
}

TEST_CASE("unpruned search matches the exhaustive oracle on small orders") {
    const Bounds bounds(3, 3, 3, 1);
    detail::SplitMix64 rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<BoxDims> items;
        const int n = rng.range(1, 2);
        for (int i = 0; i < n; ++i)
            items.push_back({rng.range(1, 2), rng.range(1, 2), rng.range(1, 2)});
        const Order order = make_order("o", items);
        MarginalSet ms;
        try {
            ms = marginal_search(order, bounds, SearchBudget::unlimited()).set;
        } catch (const InfeasibleOrder&) {
            // Items fit alone but not together; the oracle must agree.
            CHECK_FALSE(exhaustive_pack_oracle(order, bounds.as_box()));
            continue;
        }
        for (int l = 1; l <= 3; ++l)
            for (int w = 1; w <= 3; ++w)
                for (int h = 1; h <= 3; ++h) {
                    const BoxDims bin{l, w, h};
                    CHECK(fits(ms, bin) == exhaustive_pack_oracle(order, bin));
                }
    }
}

TEST_CASE("z factor parsing and bounds") {
    CHECK(ZFactor::from_decimal("1.2").num == 12);
    CHECK(ZFactor::from_decimal("1.2").den == 10);
    CHECK(ZFactor::from_decimal("2").num == 2);
    CHECK(ZFactor::from_decimal("inf").unbounded);
    CHECK_THROWS_AS(ZFactor::from_decimal("0.5"), std::invalid_argument);
    CHECK_THROWS_AS(ZFactor::ratio(1, 2), std::invalid_argument);
    CHECK(ZFactor::ratio(6, 5).allows(12, 10));
    CHECK_FALSE(ZFactor::ratio(6, 5).allows(13, 10));
}

TEST_CASE("marginal dump line format") {
    const MarginalSet ms{"o7", {{1, 1, 2}, {2, 1, 1}}};
    CHECK(marginal_dump_line(ms) == "o7\t1,1,2;2,1,1");
}
