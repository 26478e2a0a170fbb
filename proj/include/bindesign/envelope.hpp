#pragma once
// Lower envelopes of lines. Construction consumes slope-sorted input with a
// monotone stack (each line pushed or popped at most once); queries walk the
// segments either by binary search or by an ascending two-pointer sweep.

#include <cassert>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

namespace bindesign {

struct Line {
    std::int64_t slope = 0;
    std::int64_t intercept = 0;
    std::int32_t ref = -1;  // caller-supplied tag carried through queries

    std::int64_t eval(std::int64_t x) const {
        return static_cast<std::int64_t>(static_cast<__int128>(slope) * x + intercept);
    }
};

// Exact breakpoint abscissa: x = num / den with den > 0, or +-infinity when
// den == 0 (sign taken from num).
struct EnvelopeX {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static constexpr EnvelopeX neg_infinity() { return {-1, 0}; }
    static constexpr EnvelopeX pos_infinity() { return {1, 0}; }
    bool infinite() const { return den == 0; }
};

// x >= bp
inline bool at_or_after(std::int64_t x, const EnvelopeX& bp) {
    if (bp.den == 0) return bp.num < 0;  // -inf is before everything
    return static_cast<__int128>(x) * bp.den >= static_cast<__int128>(bp.num);
}

// `line` attains the pointwise minimum exactly on [x_lo, x_hi].
struct EnvelopeSegment {
    Line line;
    EnvelopeX x_lo = EnvelopeX::neg_infinity();
    EnvelopeX x_hi = EnvelopeX::pos_infinity();
};

namespace detail {

// Intersection abscissa of two lines with a.slope > b.slope. Kept
// unreduced; all comparisons cross-multiply.
inline EnvelopeX cross_x(const Line& a, const Line& b) {
    assert(a.slope > b.slope);
    return {b.intercept - a.intercept, a.slope - b.slope};
}

// bp1 <= bp2, both finite
inline bool cross_le(const EnvelopeX& bp1, const EnvelopeX& bp2) {
    return static_cast<__int128>(bp1.num) * bp2.den <=
           static_cast<__int128>(bp2.num) * bp1.den;
}

}  // namespace detail

// Builds envelopes into reusable buffers; hot paths hold one builder and
// call it per line batch.
class EnvelopeBuilder {
  public:
    // Input must be sorted ascending by slope; among duplicate slopes the one
    // with the lowest intercept is kept (ties: the first). Returned segments
    // are ordered left to right, so their slopes strictly decrease and
    // consecutive segments meet at their shared breakpoint. The span is valid
    // until the next build call.
    std::span<const EnvelopeSegment> build(std::span<const Line> lines_by_slope) {
        stack_.clear();
        starts_.clear();
        env_.clear();

        // Walk slope-descending so the leftmost segment is built first.
        for (std::size_t i = lines_by_slope.size(); i-- > 0;) {
            Line cand = lines_by_slope[i];
            assert(i == 0 || lines_by_slope[i - 1].slope <= cand.slope);
            while (i > 0 && lines_by_slope[i - 1].slope == cand.slope) {
                --i;
                const Line& dup = lines_by_slope[i];
                if (dup.intercept <= cand.intercept) cand = dup;
            }
            for (;;) {
                if (stack_.empty()) {
                    stack_.push_back(cand);
                    break;
                }
                const EnvelopeX x = detail::cross_x(stack_.back(), cand);
                // An empty (or inverted) interval means the top line never wins.
                if (!starts_.empty() && detail::cross_le(x, starts_.back())) {
                    stack_.pop_back();
                    starts_.pop_back();
                    continue;
                }
                stack_.push_back(cand);
                starts_.push_back(x);
                break;
            }
        }

        env_.resize(stack_.size());
        for (std::size_t i = 0; i < stack_.size(); ++i) {
            env_[i].line = stack_[i];
            env_[i].x_lo = i == 0 ? EnvelopeX::neg_infinity() : starts_[i - 1];
            env_[i].x_hi = i + 1 < stack_.size() ? starts_[i] : EnvelopeX::pos_infinity();
        }
        return env_;
    }

  private:
    std::vector<Line> stack_;
    std::vector<EnvelopeX> starts_;
    std::vector<EnvelopeSegment> env_;
};

inline std::vector<EnvelopeSegment> lower_envelope(std::span<const Line> lines_by_slope) {
    EnvelopeBuilder builder;
    const auto segments = builder.build(lines_by_slope);
    return {segments.begin(), segments.end()};
}

struct EnvelopeMin {
    std::int64_t value = 0;
    Line line;
};

// Binary search for the segment owning x; ties on a breakpoint resolve to the
// later (lower-slope) segment.
inline EnvelopeMin query_envelope_at(std::span<const EnvelopeSegment> env, std::int64_t x) {
    assert(!env.empty());
    std::size_t lo = 0, hi = env.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi + 1) / 2;
        if (at_or_after(x, env[mid].x_lo))
            lo = mid;
        else
            hi = mid - 1;
    }
    return {env[lo].line.eval(x), env[lo].line};
}

// Two-pointer sweep over ascending query points.
inline std::vector<EnvelopeMin> query_envelope(std::span<const EnvelopeSegment> env,
                                               std::span<const std::int64_t> xs_ascending) {
    std::vector<EnvelopeMin> out;
    out.reserve(xs_ascending.size());
    if (xs_ascending.empty()) return out;
    assert(!env.empty());
    std::size_t seg = 0;
    for (std::size_t i = 0; i < xs_ascending.size(); ++i) {
        const std::int64_t x = xs_ascending[i];
        assert(i == 0 || xs_ascending[i - 1] <= x);
        while (seg + 1 < env.size() && at_or_after(x, env[seg + 1].x_lo)) ++seg;
        out.push_back({env[seg].line.eval(x), env[seg].line});
    }
    return out;
}

}  // namespace bindesign
