#pragma once
// Divide-and-conquer update schedule for the staged DP: partitions all
// dominance-compatible (predecessor, successor) index pairs into rectangular
// blocks, per axis and tensored across the three axes.

#include <vector>

namespace bindesign {

// Inclusive 1-based index range.
struct IndexRange {
    int lo = 1;
    int hi = 1;
    int size() const { return hi - lo + 1; }
    friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

struct Block1D {
    IndexRange pred;
    IndexRange succ;
    friend bool operator==(const Block1D&, const Block1D&) = default;
};

namespace detail {

inline void axis_cross_blocks(int lo, int hi, std::vector<Block1D>& out) {
    if (lo >= hi) return;
    const int mid = lo + (hi - lo) / 2;
    out.push_back({{lo, mid}, {mid + 1, hi}});
    axis_cross_blocks(lo, mid, out);
    axis_cross_blocks(mid + 1, hi, out);
}

}  // namespace detail

// n singleton diagonal blocks (the relaxed equal-index pairs) followed by the
// recursive left-half -> right-half cross blocks. Every pair i <= j is
// covered by exactly one block.
inline std::vector<Block1D> axis_schedule(int extent) {
    std::vector<Block1D> blocks;
    blocks.reserve(extent > 0 ? 2 * extent - 1 : 0);
    for (int i = 1; i <= extent; ++i) blocks.push_back({{i, i}, {i, i}});
    detail::axis_cross_blocks(1, extent, blocks);
    return blocks;
}

struct UpdateBlock {
    IndexRange pred_l, pred_w, pred_h;
    IndexRange succ_l, succ_w, succ_h;
    friend bool operator==(const UpdateBlock&, const UpdateBlock&) = default;
};

// Tensor product of the per-axis schedules: every predecessor triple that is
// componentwise <= a successor triple lands in exactly one block.
inline std::vector<UpdateBlock> dc_schedule(int extent_l, int extent_w, int extent_h) {
    const auto ls = axis_schedule(extent_l);
    const auto ws = axis_schedule(extent_w);
    const auto hs = axis_schedule(extent_h);
    std::vector<UpdateBlock> blocks;
    blocks.reserve(ls.size() * ws.size() * hs.size());
    for (const Block1D& a : ls)
        for (const Block1D& b : ws)
            for (const Block1D& c : hs)
                blocks.push_back({a.pred, b.pred, c.pred, a.succ, b.succ, c.succ});
    return blocks;
}

}  // namespace bindesign
