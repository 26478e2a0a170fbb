#pragma once
// Core domain types for the bin design problem: integer box dimensions, the
// dominance relations between bin types, the surface-area cost function and
// validation of candidate bin chains.

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bindesign {

using Cost = std::int64_t;

// Integer (length, width, height) in cm. Doubles as item size, placement
// extent and bin type. (0,0,0) is reserved for the virtual chain anchor.
struct BoxDims {
    int l = 0;
    int w = 0;
    int h = 0;

    friend constexpr auto operator<=>(const BoxDims&, const BoxDims&) = default;

    constexpr bool is_anchor() const { return l == 0 && w == 0 && h == 0; }
    constexpr bool positive() const { return l >= 1 && w >= 1 && h >= 1; }
    constexpr int dim_sum() const { return l + w + h; }
    constexpr std::int64_t volume() const { return std::int64_t{l} * w * h; }
};

inline constexpr BoxDims kChainAnchor{0, 0, 0};

// 2(lw + wh + lh); 0 for the anchor.
constexpr Cost surface_cost(const BoxDims& b) {
    return 2 * (Cost{b.l} * b.w + Cost{b.w} * b.h + Cost{b.l} * b.h);
}

// a can hold b; equality allowed.
constexpr bool dominates(const BoxDims& a, const BoxDims& b) {
    return a.l >= b.l && a.w >= b.w && a.h >= b.h;
}

// a can hold b and is strictly larger in dimension sum.
constexpr bool is_expanded_of(const BoxDims& a, const BoxDims& b) {
    return dominates(a, b) && a.dim_sum() > b.dim_sum();
}

constexpr bool is_shrunken_of(const BoxDims& a, const BoxDims& b) {
    return is_expanded_of(b, a);
}

// Grid limits (L, W, H) plus the number of bin types K.
struct Bounds {
    int max_l = 1;
    int max_w = 1;
    int max_h = 1;
    int num_types = 1;

    static constexpr int kMaxSideLen = 100000;

    Bounds(int L, int W, int H, int K)
        : max_l(L), max_w(W), max_h(H), num_types(K) {
        if (L < 1 || W < 1 || H < 1)
            throw std::invalid_argument("bounds must be at least 1 cm per side");
        if (L > kMaxSideLen || W > kMaxSideLen || H > kMaxSideLen)
            throw std::invalid_argument("bounds exceed the supported side length");
        // A strictly size-sum-increasing chain of length K must fit the grid.
        if (K < 1 || K > L + W + H - 2)
            throw std::invalid_argument("number of bin types out of range for bounds");
    }

    constexpr BoxDims as_box() const { return {max_l, max_w, max_h}; }
    constexpr int side(int axis) const {
        return axis == 0 ? max_l : axis == 1 ? max_w : max_h;
    }
};

struct Order {
    std::string id;
    std::vector<BoxDims> items;
};

// A candidate solution: K bin types, componentwise nondecreasing along the
// chain; consecutive duplicates are allowed (relaxed chain).
struct BinChain {
    std::vector<BoxDims> types;
    Cost total_cost = 0;
    std::vector<std::int64_t> per_type_counts;
};

enum class ChainConstraint {
    length_monotone,
    width_monotone,
    height_monotone,
    sum_strictly_increasing,  // checked in strict mode only
    length_bound,
    width_bound,
    height_bound,
    positive_dims,
};

struct ChainViolation {
    ChainConstraint constraint;
    int type_index;  // 1-based position in the chain
};

struct ChainValidation {
    std::vector<ChainViolation> violations;
    bool ok() const { return violations.empty(); }
    const ChainViolation& first() const { return violations.front(); }
};

// Checks monotonicity, bounds and positivity for every type; the strict-sum
// constraint between consecutive types only when `strict` is set.
inline ChainValidation validate_chain(const BinChain& chain, const Bounds& bounds,
                                      bool strict = false) {
    ChainValidation v;
    auto flag = [&](ChainConstraint c, int k) { v.violations.push_back({c, k}); };
    for (std::size_t i = 0; i < chain.types.size(); ++i) {
        const BoxDims& b = chain.types[i];
        const int k = static_cast<int>(i) + 1;
        if (!b.positive()) flag(ChainConstraint::positive_dims, k);
        if (b.l > bounds.max_l) flag(ChainConstraint::length_bound, k);
        if (b.w > bounds.max_w) flag(ChainConstraint::width_bound, k);
        if (b.h > bounds.max_h) flag(ChainConstraint::height_bound, k);
        if (i > 0) {
            const BoxDims& prev = chain.types[i - 1];
            if (b.l < prev.l) flag(ChainConstraint::length_monotone, k);
            if (b.w < prev.w) flag(ChainConstraint::width_monotone, k);
            if (b.h < prev.h) flag(ChainConstraint::height_monotone, k);
            if (strict && b.dim_sum() <= prev.dim_sum())
                flag(ChainConstraint::sum_strictly_increasing, k);
        }
    }
    return v;
}

inline const char* chain_constraint_name(ChainConstraint c) {
    switch (c) {
        case ChainConstraint::length_monotone: return "length_monotone";
        case ChainConstraint::width_monotone: return "width_monotone";
        case ChainConstraint::height_monotone: return "height_monotone";
        case ChainConstraint::sum_strictly_increasing: return "sum_strictly_increasing";
        case ChainConstraint::length_bound: return "length_bound";
        case ChainConstraint::width_bound: return "width_bound";
        case ChainConstraint::height_bound: return "height_bound";
        case ChainConstraint::positive_dims: return "positive_dims";
    }
    return "unknown";
}

}  // namespace bindesign
