#pragma once
// Order-count tensors. The difference table holds per-height signed
// increments derived from each order's marginal set; its 2-D prefix sums
// reconstruct F(l,w,h), the number of orders packable into an (l,w,h) bin.

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "bindesign/detail/parallel.hpp"
#include "bindesign/marginal.hpp"
#include "bindesign/model.hpp"

namespace bindesign {

namespace detail {

// Shared layout: (H+1) slices, each (L+1) x (W+1); index 0 rows/columns are
// the zero boundary.
template <typename Cell>
struct Tensor3 {
    int max_l = 0, max_w = 0, max_h = 0;
    std::vector<Cell> cells;

    Tensor3() = default;
    Tensor3(int L, int W, int H)
        : max_l(L), max_w(W), max_h(H),
          cells(static_cast<std::size_t>(H + 1) * (L + 1) * (W + 1), 0) {}

    std::size_t index(int l, int w, int h) const {
        return (static_cast<std::size_t>(h) * (max_l + 1) + l) * (max_w + 1) + w;
    }
    Cell at(int l, int w, int h) const { return cells[index(l, w, h)]; }
    Cell& at(int l, int w, int h) { return cells[index(l, w, h)]; }
};

}  // namespace detail

struct DiffTable : detail::Tensor3<std::int32_t> {
    using Tensor3::Tensor3;
};

struct CountTable : detail::Tensor3<std::int32_t> {
    using Tensor3::Tensor3;
    std::int64_t orders_covered() const { return at(max_l, max_w, max_h); }
};

namespace detail {

// One height's worth of difference updates into a (L+1) x (W+1) row-major
// slice: members with height <= h project to (l, w), the projection is
// reduced to its minimal antichain and swept in ascending l, charging +1 at
// each member and -1 at (l_j, w_{j-1}) for successive members.
inline void add_diff_slice(std::span<const MarginalSet> sets, int h, int max_w,
                           std::int32_t* slice) {
    std::vector<std::pair<int, int>> proj;
    for (const MarginalSet& ms : sets) {
        proj.clear();
        for (const BoxDims& m : ms.types)
            if (m.h <= h) proj.emplace_back(m.l, m.w);
        if (proj.empty()) continue;
        std::sort(proj.begin(), proj.end());
        // Minimal antichain of the projection: after the sweep l is strictly
        // increasing and w strictly decreasing.
        int kept = 0;
        int best_w = std::numeric_limits<int>::max();
        for (const auto& p : proj) {
            if (p.second < best_w) {
                proj[kept++] = p;
                best_w = p.second;
            }
        }
        proj.resize(kept);
        const auto at = [&](int l, int w) -> std::int32_t& {
            return slice[static_cast<std::size_t>(l) * (max_w + 1) + w];
        };
        at(proj[0].first, proj[0].second) += 1;
        for (int j = 1; j < kept; ++j) {
            at(proj[j].first, proj[j].second) += 1;
            at(proj[j].first, proj[j - 1].second) -= 1;
        }
    }
}

}  // namespace detail

inline DiffTable build_diff_table(std::span<const MarginalSet> sets, const Bounds& bounds,
                                  int workers = 1) {
    DiffTable f(bounds.max_l, bounds.max_w, bounds.max_h);
    detail::parallel_for(bounds.max_h + 1, workers, [&](std::int64_t h64) {
        const int h = static_cast<int>(h64);
        detail::add_diff_slice(sets, h, f.max_w, &f.cells[f.index(0, 0, h)]);
    });
    return f;
}

// F(l,w,h) = sum of f over the (<=l, <=w) rectangle at height h, computed by
// the inclusion-exclusion recursion per slice.
inline CountTable prefix_sum(const DiffTable& f, int workers = 1) {
    CountTable F(f.max_l, f.max_w, f.max_h);
    detail::parallel_for(f.max_h + 1, workers, [&](std::int64_t h64) {
        const int h = static_cast<int>(h64);
        for (int l = 1; l <= f.max_l; ++l)
            for (int w = 1; w <= f.max_w; ++w)
                F.at(l, w, h) = F.at(l - 1, w, h) + F.at(l, w - 1, h) -
                                F.at(l - 1, w - 1, h) + f.at(l, w, h);
    });
    return F;
}

// Ground truth for F(bin): a direct scan over the marginal sets.
inline std::int64_t count_direct(std::span<const MarginalSet> sets, const BoxDims& bin) {
    std::int64_t n = 0;
    for (const MarginalSet& ms : sets)
        if (fits(ms, bin)) ++n;
    return n;
}

struct CountTableFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline constexpr char kCountTableMagic[4] = {'B', 'D', 'F', '1'};
inline constexpr std::uint32_t kCountTableVersion = 1;

inline std::uint64_t fnv1a64(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < len; ++i) {
        hash ^= p[i];
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

template <typename T>
void write_raw(std::ostream& os, const T& value) {
    os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::istream& is) {
    T value{};
    is.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!is) throw CountTableFormatError("truncated count table stream");
    return value;
}

}  // namespace detail

// Binary cache of F: magic, version, L, W, H, covered order count, row-major
// slices, trailing checksum over the payload.
inline void write_count_table(const CountTable& F, std::ostream& os) {
    os.write(detail::kCountTableMagic, 4);
    detail::write_raw(os, detail::kCountTableVersion);
    detail::write_raw<std::int32_t>(os, F.max_l);
    detail::write_raw<std::int32_t>(os, F.max_w);
    detail::write_raw<std::int32_t>(os, F.max_h);
    detail::write_raw<std::int64_t>(os, F.orders_covered());
    const std::size_t bytes = F.cells.size() * sizeof(std::int32_t);
    os.write(reinterpret_cast<const char*>(F.cells.data()),
             static_cast<std::streamsize>(bytes));
    detail::write_raw(os, detail::fnv1a64(F.cells.data(), bytes));
}

inline CountTable read_count_table(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || !std::equal(magic, magic + 4, detail::kCountTableMagic))
        throw CountTableFormatError("bad count table magic");
    if (detail::read_raw<std::uint32_t>(is) != detail::kCountTableVersion)
        throw CountTableFormatError("unsupported count table version");
    const auto L = detail::read_raw<std::int32_t>(is);
    const auto W = detail::read_raw<std::int32_t>(is);
    const auto H = detail::read_raw<std::int32_t>(is);
    const auto n = detail::read_raw<std::int64_t>(is);
    if (L < 1 || W < 1 || H < 1) throw CountTableFormatError("bad count table bounds");
    CountTable F(L, W, H);
    const std::size_t bytes = F.cells.size() * sizeof(std::int32_t);
    is.read(reinterpret_cast<char*>(F.cells.data()), static_cast<std::streamsize>(bytes));
    if (!is) throw CountTableFormatError("truncated count table payload");
    if (detail::read_raw<std::uint64_t>(is) != detail::fnv1a64(F.cells.data(), bytes))
        throw CountTableFormatError("count table checksum mismatch");
    if (F.orders_covered() != n)
        throw CountTableFormatError("count table header order count mismatch");
    return F;
}

}  // namespace bindesign
