#include <catch2/catch_amalgamated.hpp>

#include "bindesign/detail/rng.hpp"
#include "bindesign/model.hpp"

using namespace bindesign;

namespace {

BoxDims random_box(detail::SplitMix64& rng, int max_side) {
    return {rng.range(1, max_side), rng.range(1, max_side), rng.range(1, max_side)};
}

}  // namespace

TEST_CASE("surface cost") {
    CHECK(surface_cost({1, 1, 1}) == 6);
    CHECK(surface_cost({27, 18, 15}) == 2322);
    CHECK(surface_cost({50, 40, 33}) == 9940);
    CHECK(surface_cost(kChainAnchor) == 0);
}

TEST_CASE("expanded and shrunken relations") {
    CHECK(is_expanded_of({31, 23, 18}, {27, 18, 15}));
    CHECK(is_shrunken_of({27, 18, 15}, {31, 23, 18}));
    CHECK_FALSE(is_expanded_of({2, 1, 1}, {1, 2, 1}));
    CHECK_FALSE(is_expanded_of({1, 2, 1}, {2, 1, 1}));
    // Equal boxes: the strict dimension-sum requirement fails, dominance holds.
    CHECK_FALSE(is_expanded_of({3, 3, 3}, {3, 3, 3}));
    CHECK(dominates({3, 3, 3}, {3, 3, 3}));
}

TEST_CASE("dominance is a partial order and expansion its strict part") {
    detail::SplitMix64 rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        const BoxDims a = random_box(rng, 6), b = random_box(rng, 6), c = random_box(rng, 6);
        CHECK(dominates(a, a));
        if (dominates(a, b) && dominates(b, a)) CHECK(a == b);
        if (dominates(a, b) && dominates(b, c)) CHECK(dominates(a, c));
        CHECK(is_expanded_of(a, b) == (dominates(a, b) && a != b));
        if (is_expanded_of(a, b)) CHECK(surface_cost(a) > surface_cost(b));
    }
}

TEST_CASE("chain validation accepts a realistic nested family") {
    BinChain chain;
    chain.types = {{27, 18, 15}, {31, 23, 18}, {35, 25, 20}, {40, 28, 20},
                   {40, 28, 25}, {43, 30, 27}, {44, 35, 30}, {50, 40, 33}};
    const Bounds bounds(50, 40, 33, 8);
    CHECK(validate_chain(chain, bounds).ok());
    CHECK(validate_chain(chain, bounds, /*strict=*/true).ok());
}

TEST_CASE("chain validation flags violations") {
    const Bounds bounds(10, 10, 10, 2);

    BinChain decreasing;
    decreasing.types = {{5, 5, 5}, {4, 6, 6}};
    const auto v1 = validate_chain(decreasing, bounds);
    REQUIRE_FALSE(v1.ok());
    CHECK(v1.first().constraint == ChainConstraint::length_monotone);
    CHECK(v1.first().type_index == 2);

    BinChain repeated;
    repeated.types = {{5, 5, 5}, {5, 5, 5}};
    CHECK(validate_chain(repeated, bounds).ok());
    const auto v2 = validate_chain(repeated, bounds, /*strict=*/true);
    REQUIRE_FALSE(v2.ok());
    CHECK(v2.first().constraint == ChainConstraint::sum_strictly_increasing);

    BinChain too_big;
    too_big.types = {{5, 5, 5}, {11, 5, 5}};
    const auto v3 = validate_chain(too_big, bounds);
    REQUIRE_FALSE(v3.ok());
    CHECK(v3.first().constraint == ChainConstraint::length_bound);

    BinChain nonpositive;
    nonpositive.types = {{0, 5, 5}};
    CHECK_FALSE(validate_chain(nonpositive, bounds).ok());
}

TEST_CASE("bounds constructor rejects impossible configurations") {
    CHECK_THROWS_AS(Bounds(0, 5, 5, 1), std::invalid_argument);
    CHECK_THROWS_AS(Bounds(5, 5, 5, 0), std::invalid_argument);
    // K may not exceed the longest strictly growing chain in the grid.
    CHECK_THROWS_AS(Bounds(2, 2, 2, 5), std::invalid_argument);
    CHECK_NOTHROW(Bounds(2, 2, 2, 4));
}
