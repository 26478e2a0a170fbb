#pragma once
// Depth-first corner-point tree search producing each order's marginal bin
// types: the Pareto-minimal enclosures reachable by placing items, largest
// first, against the walls or the faces of already placed items.

#include <algorithm>
#include <array>
#include <cassert>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "bindesign/model.hpp"

namespace bindesign {

struct InfeasibleOrder : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BudgetExhaustedBeforeFirstLeaf : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Pruning slack for the tree search, kept as an exact ratio >= 1.
struct ZFactor {
    std::int64_t num = 6;
    std::int64_t den = 5;
    bool unbounded = false;

    static ZFactor ratio(std::int64_t num, std::int64_t den) {
        if (den < 1 || num < den)
            throw std::invalid_argument("z factor must be a ratio >= 1");
        return ZFactor{num, den, false};
    }

    static ZFactor infinite() { return ZFactor{1, 1, true}; }

    // Parses a nonnegative decimal such as "1.2", or "inf".
    static ZFactor from_decimal(const std::string& text) {
        if (text == "inf" || text == "INF") return infinite();
        const auto dot = text.find('.');
        std::int64_t num = 0, den = 1;
        const std::string whole = dot == std::string::npos ? text : text.substr(0, dot);
        const std::string frac = dot == std::string::npos ? "" : text.substr(dot + 1);
        if (whole.empty() && frac.empty())
            throw std::invalid_argument("empty z factor");
        for (char c : whole + frac) {
            if (c < '0' || c > '9') throw std::invalid_argument("malformed z factor");
            num = num * 10 + (c - '0');
        }
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        return ratio(num, den);
    }

    // true when candidate <= best * z
    bool allows(Cost candidate, Cost best) const {
        if (unbounded) return true;
        return static_cast<__int128>(candidate) * den <=
               static_cast<__int128>(best) * num;
    }

    double as_double() const {
        return unbounded ? std::numeric_limits<double>::infinity()
                         : static_cast<double>(num) / static_cast<double>(den);
    }
};

struct SearchBudget {
    static constexpr std::int64_t kUnlimited = std::numeric_limits<std::int64_t>::max();

    ZFactor z_factor{};                        // default 6/5
    std::int64_t max_search_count = 200000;    // node visits per order

    static SearchBudget unlimited() { return {ZFactor::infinite(), kUnlimited}; }
};

// Per-axis multiset of corner coordinates; the keys are the candidate
// positions for the next item's left-bottom-back corner. Coordinate 0 is
// always present.
struct CornerCountMap {
    std::map<int, int> xs{{0, 1}};
    std::map<int, int> ys{{0, 1}};
    std::map<int, int> zs{{0, 1}};

    void add(int x, int y, int z) {
        ++xs[x];
        ++ys[y];
        ++zs[z];
    }

    void remove(int x, int y, int z) {
        remove_one(xs, x);
        remove_one(ys, y);
        remove_one(zs, z);
    }

  private:
    static void remove_one(std::map<int, int>& m, int key) {
        auto it = m.find(key);
        assert(it != m.end() && it->second > 0);
        if (--it->second == 0) m.erase(it);
    }
};

// Pareto-minimal antichain of enclosures for one order.
struct MarginalSet {
    std::string order_id;
    std::vector<BoxDims> types;  // lexicographically sorted
};

inline bool fits(const MarginalSet& ms, const BoxDims& bin) {
    for (const BoxDims& m : ms.types)
        if (dominates(bin, m)) return true;
    return false;
}

// Distinct axis permutations of the item, lexicographically ascending:
// 6 when all dims differ, 3 when exactly two are equal, 1 when all equal.
inline std::vector<BoxDims> item_orientations(const BoxDims& item) {
    std::array<int, 3> d{item.l, item.w, item.h};
    std::sort(d.begin(), d.end());
    std::vector<BoxDims> out;
    do {
        out.push_back({d[0], d[1], d[2]});
    } while (std::next_permutation(d.begin(), d.end()));
    return out;
}

// Keeps exactly the minimal elements under `dominates`: a member is dropped
// iff some other member is componentwise <= it. Result is a lexicographically
// sorted antichain.
inline std::vector<BoxDims> pareto_filter(std::vector<BoxDims> types) {
    std::sort(types.begin(), types.end());
    types.erase(std::unique(types.begin(), types.end()), types.end());
    std::vector<BoxDims> kept;
    kept.reserve(types.size());
    for (const BoxDims& t : types) {
        bool covered = false;
        for (const BoxDims& s : kept) {
            if (dominates(t, s)) {  // s <= t, s != t
                covered = true;
                break;
            }
        }
        if (!covered) kept.push_back(t);
    }
    return kept;
}

struct SearchStats {
    Cost best_cost = std::numeric_limits<Cost>::max();
    std::int64_t nodes_visited = 0;
    bool budget_exhausted = false;
};

struct MarginalSearchResult {
    MarginalSet set;
    SearchStats stats;
};

namespace detail {

struct Placement {
    int x, y, z;     // left-bottom-back corner
    int x2, y2, z2;  // right-upper-front corner
};

class CornerSearch {
  public:
    CornerSearch(const Order& order, const Bounds& bounds, const SearchBudget& budget)
        : bounds_(bounds), budget_(budget), order_id_(order.id) {
        if (order.items.empty())
            throw std::invalid_argument("order " + order.id + " has no items");
        items_ = order.items;
        std::sort(items_.begin(), items_.end(), [](const BoxDims& a, const BoxDims& b) {
            if (a.volume() != b.volume()) return a.volume() > b.volume();
            return b < a;  // equal volume: lexicographically descending
        });
        orientations_.reserve(items_.size());
        for (const BoxDims& item : items_) {
            auto os = item_orientations(item);
            std::erase_if(os, [&](const BoxDims& o) {
                return o.l > bounds_.max_l || o.w > bounds_.max_w || o.h > bounds_.max_h;
            });
            if (os.empty())
                throw InfeasibleOrder("order " + order.id + ": item does not fit bounds in any orientation");
            orientations_.push_back(std::move(os));
        }
        placements_.reserve(items_.size());
    }

    // Leaves the search as soon as any complete placement is found; used by
    // feasibility probes.
    void set_stop_after_first_leaf() { stop_after_first_leaf_ = true; }

    MarginalSearchResult run() {
        dfs(0, kChainAnchor, 0);
        if (leaves_.empty()) {
            if (exhausted_)
                throw BudgetExhaustedBeforeFirstLeaf(
                    "order " + order_id_ + ": search budget exhausted before any packing was found");
            throw InfeasibleOrder("order " + order_id_ + ": no complete placement fits within bounds");
        }
        MarginalSearchResult result;
        result.set.order_id = order_id_;
        result.set.types = pareto_filter({leaves_.begin(), leaves_.end()});
        result.stats.best_cost = best_cost_;
        result.stats.nodes_visited = nodes_;
        result.stats.budget_exhausted = exhausted_;
        return result;
    }

  private:
    void dfs(std::size_t idx, const BoxDims& enclosure, Cost enclosure_cost) {
        if (idx == items_.size()) {
            best_cost_ = std::min(best_cost_, enclosure_cost);
            best_found_ = true;
            leaves_.insert(enclosure);
            ++nodes_;
            if (stop_after_first_leaf_) early_stop_ = true;
            return;
        }
        ++nodes_;
        if (nodes_ > budget_.max_search_count) {
            exhausted_ = true;
            return;
        }
        // Snapshot the key sets: recursion mutates the maps underneath.
        keys(corners_.xs, xkeys_buf_);
        keys(corners_.ys, ykeys_buf_);
        keys(corners_.zs, zkeys_buf_);
        const std::vector<int> xs = xkeys_buf_, ys = ykeys_buf_, zs = zkeys_buf_;

        for (const BoxDims& o : orientations_[idx]) {
            bool x_cost_stop = false;
            for (std::size_t xi = 0; xi < xs.size() && !x_cost_stop; ++xi) {
                const int x = xs[xi], x2 = x + o.l;
                if (x2 > bounds_.max_l) break;
                bool y_cost_stop = false;
                for (std::size_t yi = 0; yi < ys.size() && !y_cost_stop; ++yi) {
                    const int y = ys[yi], y2 = y + o.w;
                    if (y2 > bounds_.max_w) break;
                    for (std::size_t zi = 0; zi < zs.size(); ++zi) {
                        const int z = zs[zi], z2 = z + o.h;
                        if (z2 > bounds_.max_h) break;
                        const BoxDims grown{std::max(enclosure.l, x2),
                                            std::max(enclosure.w, y2),
                                            std::max(enclosure.h, z2)};
                        const Cost grown_cost = surface_cost(grown);
                        if (best_found_ && !budget_.z_factor.allows(grown_cost, best_cost_)) {
                            // Cost grows with each coordinate, so the rest of
                            // this z run is pruned too; cascade when the prune
                            // already hits the smallest y or x.
                            if (zi == 0) {
                                y_cost_stop = true;
                                if (yi == 0) x_cost_stop = true;
                            }
                            break;
                        }
                        if (!feasible_position(x, y, z, x2, y2, z2)) continue;
                        placements_.push_back({x, y, z, x2, y2, z2});
                        corners_.add(x2, y2, z2);
                        dfs(idx + 1, grown, grown_cost);
                        corners_.remove(x2, y2, z2);
                        placements_.pop_back();
                        if (exhausted_ || early_stop_) return;
                    }
                }
            }
        }
    }

    // Inside-bounds is already checked; requires no interior overlap with any
    // placed item and a blocking face (or the 0 wall) on every axis.
    bool feasible_position(int x, int y, int z, int x2, int y2, int z2) const {
        bool ax = x == 0, ay = y == 0, az = z == 0;
        for (const Placement& p : placements_) {
            const bool ox = x < p.x2 && p.x < x2;
            const bool oy = y < p.y2 && p.y < y2;
            const bool oz = z < p.z2 && p.z < z2;
            if (ox && oy && oz) return false;
            if (!ax && p.x2 == x && oy && oz) ax = true;
            if (!ay && p.y2 == y && ox && oz) ay = true;
            if (!az && p.z2 == z && ox && oy) az = true;
        }
        return ax && ay && az;
    }

    static void keys(const std::map<int, int>& m, std::vector<int>& out) {
        out.clear();
        for (const auto& [k, count] : m) out.push_back(k);
    }

    Bounds bounds_;
    SearchBudget budget_;
    std::string order_id_;
    std::vector<BoxDims> items_;
    std::vector<std::vector<BoxDims>> orientations_;
    CornerCountMap corners_;
    std::vector<Placement> placements_;
    std::set<BoxDims> leaves_;
    Cost best_cost_ = std::numeric_limits<Cost>::max();
    bool best_found_ = false;
    bool exhausted_ = false;
    bool stop_after_first_leaf_ = false;
    bool early_stop_ = false;
    std::int64_t nodes_ = 0;
    std::vector<int> xkeys_buf_, ykeys_buf_, zkeys_buf_;
};

}  // namespace detail

// Throws InfeasibleOrder when no complete placement exists within bounds and
// BudgetExhaustedBeforeFirstLeaf when the node budget runs out with no leaf
// found (the caller may retry with a larger budget).
inline MarginalSearchResult marginal_search(const Order& order, const Bounds& bounds,
                                            const SearchBudget& budget = {}) {
    return detail::CornerSearch(order, bounds, budget).run();
}

// One dump line: order_id<TAB>l,w,h;l,w,h;...
inline std::string marginal_dump_line(const MarginalSet& ms) {
    std::string line = ms.order_id;
    line += '\t';
    for (std::size_t i = 0; i < ms.types.size(); ++i) {
        if (i > 0) line += ';';
        const BoxDims& t = ms.types[i];
        line += std::to_string(t.l);
        line += ',';
        line += std::to_string(t.w);
        line += ',';
        line += std::to_string(t.h);
    }
    return line;
}

}  // namespace bindesign
