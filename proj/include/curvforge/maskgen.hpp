#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "curvforge/raster.hpp"

namespace curvforge {

/// Closed integer interval.
struct IntRange {
    int lo = 0;
    int hi = 0;
    bool valid() const noexcept { return lo <= hi; }
};

struct RectMaskParams {
    IntRange count{1, 4};
    IntRange width{16, 85};
    IntRange height{16, 85};
    std::uint64_t seed = 0;

    /// Default side range [16, canvas/3].
    static RectMaskParams defaults_for(int w, int h, std::uint64_t seed) {
        RectMaskParams p;
        p.width = {std::min(16, w), std::max(std::min(16, w), w / 3)};
        p.height = {std::min(16, h), std::max(std::min(16, h), h / 3)};
        p.seed = seed;
        return p;
    }
};

struct ChainMaskParams {
    IntRange chains{1, 3};
    IntRange vertices{4, 12};
    Interval step{16.0, 48.0};
    double turn_std = 0.6;
    Interval width{8.0, 24.0};
    std::uint64_t seed = 0;
};

/// Union of axis-aligned filled rectangles with independent side lengths.
inline Mask random_rect_mask(int w, int h, const RectMaskParams& p) {
    if (!p.count.valid() || !p.width.valid() || !p.height.valid() || p.count.lo < 0 || p.width.lo < 1 ||
        p.height.lo < 1)
        throw std::invalid_argument("invalid rectangle mask parameters");
    if (p.width.hi > w || p.height.hi > h) throw std::invalid_argument("rectangle sides exceed the canvas");
    Mask m(w, h);
    Rng rng(p.seed, Stream::masks);
    const auto n = rng.uniform_int(p.count.lo, p.count.hi);
    for (std::int64_t i = 0; i < n; ++i) {
        const int rw = static_cast<int>(rng.uniform_int(p.width.lo, p.width.hi));
        const int rh = static_cast<int>(rng.uniform_int(p.height.lo, p.height.hi));
        const int x0 = static_cast<int>(rng.uniform_int(0, w - rw));
        const int y0 = static_cast<int>(rng.uniform_int(0, h - rh));
        for (int y = y0; y < y0 + rh; ++y)
            for (int x = x0; x < x0 + rw; ++x) m(x, y) = 1;
    }
    return m;
}

/// Union of thick random-walk polylines; strokes leaving the canvas are clipped.
inline Mask random_chain_mask(int w, int h, const ChainMaskParams& p) {
    if (!p.chains.valid() || !p.vertices.valid() || !p.step.valid() || !p.width.valid() || p.chains.lo < 0 ||
        p.vertices.lo < 2 || p.width.lo < 1.0 || p.turn_std < 0.0)
        throw std::invalid_argument("invalid chain mask parameters");
    Mask m(w, h);
    Rng rng(p.seed, Stream::masks);
    const auto chains = rng.uniform_int(p.chains.lo, p.chains.hi);
    for (std::int64_t c = 0; c < chains; ++c) {
        Point2 at{rng.uniform(0.0, w), rng.uniform(0.0, h)};
        double heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const auto vertices = rng.uniform_int(p.vertices.lo, p.vertices.hi);
        for (std::int64_t v = 1; v < vertices; ++v) {
            if (v > 1 && p.turn_std > 0.0) heading += rng.normal(0.0, p.turn_std);
            const double len = rng.uniform(p.step.lo, p.step.hi);
            const double width = rng.uniform(p.width.lo, p.width.hi);
            const Point2 next{at.x + len * std::cos(heading), at.y + len * std::sin(heading)};
            stroke_segment(m, at, next, width / 2.0);
            at = next;
        }
    }
    return m;
}

/// Foreground-removal mask: the skeleton dilated by a disk.
inline Mask inpaint_mask_from_skeleton(const Mask& skeleton, int dilation_radius) {
    if (dilation_radius < 0) throw std::invalid_argument("dilation radius must be >= 0");
    if (dilation_radius == 0) return skeleton;
    return dilate(skeleton, DiskSE{dilation_radius});
}

/// 7 px up to 576 px canvases, growing linearly with the longer side beyond that.
inline int default_inpaint_radius(int w, int h) {
    const double longer = std::max(w, h);
    return static_cast<int>(std::lround(7.0 * std::max(1.0, longer / 576.0)));
}

}  // namespace curvforge
