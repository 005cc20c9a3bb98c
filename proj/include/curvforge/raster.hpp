#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "curvforge/geometry.hpp"
#include "curvforge/growth_config.hpp"
#include "curvforge/image.hpp"
#include "curvforge/random.hpp"

namespace curvforge {

// ---------------------------------------------------------------------------
// Drawing

/// Sets every pixel whose center lies within `radius` of `c`.
inline void stamp_disk(Mask& m, Point2 c, double radius) {
    const double r2 = radius * radius;
    const int x0 = std::max(0, static_cast<int>(std::floor(c.x - radius)));
    const int x1 = std::min(m.width() - 1, static_cast<int>(std::ceil(c.x + radius)));
    const int y0 = std::max(0, static_cast<int>(std::floor(c.y - radius)));
    const int y1 = std::min(m.height() - 1, static_cast<int>(std::ceil(c.y + radius)));
    for (int y = y0; y <= y1; ++y) {
        const double dy = y - c.y;
        for (int x = x0; x <= x1; ++x) {
            const double dx = x - c.x;
            if (dx * dx + dy * dy <= r2) m(x, y) = 1;
        }
    }
}

/// Disk sweep along a segment with sample spacing <= 0.5 px, endpoints included.
inline void stroke_segment(Mask& m, Point2 a, Point2 b, double radius) {
    const double len = distance(a, b);
    const int steps = std::max(1, static_cast<int>(std::ceil(len / 0.5)));
    for (int i = 0; i <= steps; ++i) {
        const double t = static_cast<double>(i) / steps;
        stamp_disk(m, a + (b - a) * t, radius);
    }
}

/// Draws every edge with the child's rounded radius and every root with its own.
/// Trees must have radii computed.
inline Mask rasterize(std::span<const CurveTree> forest, int width, int height) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("rasterize: zero canvas dimension");
    Mask m(width, height);
    for (const auto& tree : forest) {
        for (const auto& node : tree.nodes) {
            if (!(node.radius > 0.0)) throw std::invalid_argument("rasterize: radii not computed");
            const double r = std::round(node.radius);
            if (node.parent)
                stroke_segment(m, tree.nodes[*node.parent].pos, node.pos, r);
            else
                stamp_disk(m, node.pos, r);
        }
    }
    return m;
}

inline Mask circle_mask(int width, int height, Circle c) {
    Mask m(width, height);
    stamp_disk(m, c.center, c.radius);
    return m;
}

// ---------------------------------------------------------------------------
// Morphology

struct DiskSE {
    int radius = 0;
};
struct SquareSE {
    int side = 1;
};
using StructuringElement = std::variant<DiskSE, SquareSE>;

inline std::vector<std::pair<int, int>> se_offsets(const StructuringElement& se) {
    std::vector<std::pair<int, int>> out;
    if (const auto* d = std::get_if<DiskSE>(&se)) {
        if (d->radius < 0) throw std::invalid_argument("disk radius must be >= 0");
        const int r = d->radius;
        for (int dy = -r; dy <= r; ++dy)
            for (int dx = -r; dx <= r; ++dx)
                if (dx * dx + dy * dy <= r * r) out.emplace_back(dx, dy);
    } else {
        const int side = std::get<SquareSE>(se).side;
        if (side < 1 || side % 2 == 0) throw std::invalid_argument("square side must be odd and >= 1");
        const int h = side / 2;
        for (int dy = -h; dy <= h; ++dy)
            for (int dx = -h; dx <= h; ++dx) out.emplace_back(dx, dy);
    }
    return out;
}

inline Mask dilate(const Mask& m, const StructuringElement& se) {
    const auto offsets = se_offsets(se);
    Mask out(m.width(), m.height());
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x) {
            if (!m(x, y)) continue;
            for (auto [dx, dy] : offsets)
                if (out.in_bounds(x + dx, y + dy)) out(x + dx, y + dy) = 1;
        }
    return out;
}

/// Pixels outside the canvas count as background.
inline Mask erode(const Mask& m, const StructuringElement& se) {
    const auto offsets = se_offsets(se);
    Mask out(m.width(), m.height());
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x) {
            if (!m(x, y)) continue;
            bool keep = true;
            for (auto [dx, dy] : offsets) {
                if (!m.at_or(x + dx, y + dy, 0)) {
                    keep = false;
                    break;
                }
            }
            out(x, y) = keep ? 1 : 0;
        }
    return out;
}

inline Mask opening(const Mask& m, const StructuringElement& se) { return dilate(erode(m, se), se); }
/// Computed on a canvas padded by the element's reach, so m is always a
/// subset of the result even at the border.
inline Mask closing(const Mask& m, const StructuringElement& se) {
    int reach = 0;
    for (auto [dx, dy] : se_offsets(se)) reach = std::max({reach, std::abs(dx), std::abs(dy)});
    Mask padded(m.width() + 2 * reach, m.height() + 2 * reach);
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x) padded(x + reach, y + reach) = m(x, y);
    const Mask closed = erode(dilate(padded, se), se);
    Mask out(m.width(), m.height());
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x) out(x, y) = closed(x + reach, y + reach);
    return out;
}

// ---------------------------------------------------------------------------
// Thinning

namespace thinning_detail {

// Neighbours P2..P9, clockwise from north.
inline std::array<int, 8> neighbours(const Mask& m, int x, int y) {
    return {m.at_or(x, y - 1, 0), m.at_or(x + 1, y - 1, 0), m.at_or(x + 1, y, 0), m.at_or(x + 1, y + 1, 0),
            m.at_or(x, y + 1, 0), m.at_or(x - 1, y + 1, 0), m.at_or(x - 1, y, 0), m.at_or(x - 1, y - 1, 0)};
}

inline bool deletable(const Mask& m, int x, int y, bool first_pass) {
    const auto p = neighbours(m, x, y);
    int b = 0;
    for (int v : p) b += v;
    if (b < 2 || b > 6) return false;
    int a = 0;
    for (int i = 0; i < 8; ++i) a += (p[i] == 0 && p[(i + 1) % 8] == 1);
    if (a != 1) return false;
    const int n = p[0], e = p[2], s = p[4], w = p[6];
    if (first_pass) return n * e * s == 0 && e * s * w == 0;
    return n * e * w == 0 && n * s * w == 0;
}

}  // namespace thinning_detail

/// Zhang-Suen thinning to a fixpoint. Candidates of each sub-iteration are
/// collected in parallel as usual, then removed in raster order only if they
/// still qualify, so two-pixel-thick runs (and 2x2 blocks) are thinned rather
/// than erased and 8-connected components survive.
inline Mask skeletonize(const Mask& input) {
    Mask m = input;
    std::vector<std::pair<int, int>> candidates;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const bool first_pass : {true, false}) {
            candidates.clear();
            for (int y = 0; y < m.height(); ++y)
                for (int x = 0; x < m.width(); ++x)
                    if (m(x, y) && thinning_detail::deletable(m, x, y, first_pass)) candidates.emplace_back(x, y);
            for (auto [x, y] : candidates) {
                if (thinning_detail::deletable(m, x, y, first_pass)) {
                    m(x, y) = 0;
                    changed = true;
                }
            }
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Elastic jitter

struct ElasticParams {
    double alpha = 8.0;
    double sigma = 4.0;
    std::uint64_t seed = 0;
};

/// Separable Gaussian blur, kernel truncated at 4 sigma, reflect-padded borders.
inline RealGrid gaussian_blur(const RealGrid& in, double sigma) {
    const int radius = std::max(1, static_cast<int>(std::ceil(4.0 * sigma)));
    std::vector<double> kernel(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
        sum += kernel[i + radius];
    }
    for (double& k : kernel) k /= sum;

    auto reflect = [](int i, int n) {
        if (n == 1) return 0;
        const int period = 2 * n;
        i %= period;
        if (i < 0) i += period;
        return i < n ? i : period - 1 - i;
    };

    const int w = in.width(), h = in.height();
    RealGrid tmp(w, h), out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) acc += kernel[k + radius] * in(reflect(x + k, w), y);
            tmp(x, y) = acc;
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) acc += kernel[k + radius] * tmp(x, reflect(y + k, h));
            out(x, y) = acc;
        }
    return out;
}

/// Random smooth displacement (uniform [-1,1] noise, Gaussian-smoothed, scaled by
/// alpha) applied by nearest-neighbour backward mapping; samples falling off
/// the canvas read as background.
inline Mask elastic_transform(const Mask& m, const ElasticParams& p) {
    if (!(p.sigma > 0.0)) throw std::invalid_argument("elastic sigma must be > 0");
    if (!(p.alpha >= 0.0)) throw std::invalid_argument("elastic alpha must be >= 0");
    if (p.alpha == 0.0 || m.empty()) return m;
    const int w = m.width(), h = m.height();
    Rng rng(p.seed, Stream::elastic);
    RealGrid dx(w, h), dy(w, h);
    for (double& v : dx.data()) v = rng.uniform(-1.0, 1.0);
    for (double& v : dy.data()) v = rng.uniform(-1.0, 1.0);
    dx = gaussian_blur(dx, p.sigma);
    dy = gaussian_blur(dy, p.sigma);
    Mask out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const int sx = static_cast<int>(std::lround(x + p.alpha * dx(x, y)));
            const int sy = static_cast<int>(std::lround(y + p.alpha * dy(x, y)));
            out(x, y) = m.at_or(sx, sy, 0);
        }
    return out;
}

// ---------------------------------------------------------------------------
// Geometric transforms

inline Mask apply_fov(const Mask& m, const Mask& fov) {
    require_same_dims(m, fov, "apply_fov");
    return mask_and(m, fov);
}

template <typename Raster>
Raster crop(const Raster& img, int x0, int y0, int out_w, int out_h) {
    if (out_w <= 0 || out_h <= 0 || x0 < 0 || y0 < 0 || x0 + out_w > img.width() || y0 + out_h > img.height())
        throw std::invalid_argument("crop window exceeds the input");
    Raster out(out_w, out_h);
    for (int y = 0; y < out_h; ++y)
        for (int x = 0; x < out_w; ++x) out(x, y) = img(x0 + x, y0 + y);
    return out;
}

/// Crop at an offset drawn uniformly over all valid positions.
template <typename Raster>
Raster random_crop(const Raster& img, int out_w, int out_h, Rng& rng) {
    if (out_w > img.width() || out_h > img.height() || out_w <= 0 || out_h <= 0)
        throw std::invalid_argument("crop larger than input");
    const int x0 = static_cast<int>(rng.uniform_int(0, img.width() - out_w));
    const int y0 = static_cast<int>(rng.uniform_int(0, img.height() - out_h));
    return crop(img, x0, y0, out_w, out_h);
}

enum class FlipAxis { horizontal, vertical };

/// Horizontal mirrors columns (left-right); vertical mirrors rows.
template <typename Raster>
Raster flip(const Raster& img, FlipAxis axis) {
    Raster out(img.width(), img.height());
    const int w = img.width(), h = img.height();
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            out(x, y) = axis == FlipAxis::horizontal ? img(w - 1 - x, y) : img(x, h - 1 - y);
    return out;
}

/// Rotation about the image center, same canvas, zero fill. Masks resample
/// nearest-neighbour; gray images bilinearly.
template <typename Raster>
Raster rotate(const Raster& img, double degrees) {
    if (!(degrees >= 0.0 && degrees <= 90.0)) throw std::invalid_argument("rotation must lie in [0, 90] degrees");
    if (degrees == 0.0) return img;
    const int w = img.width(), h = img.height();
    const double rad = degrees * std::numbers::pi / 180.0;
    double c = std::cos(rad), s = std::sin(rad);
    if (degrees == 90.0) {
        c = 0.0;
        s = 1.0;
    }
    const double cx = (w - 1) / 2.0, cy = (h - 1) / 2.0;
    Raster out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            // Backward map: rotate the destination point by -theta.
            const double ux = x - cx, uy = y - cy;
            const double sx = c * ux + s * uy + cx;
            const double sy = -s * ux + c * uy + cy;
            if constexpr (std::is_same_v<Raster, Mask>) {
                out(x, y) = img.at_or(static_cast<int>(std::lround(sx)), static_cast<int>(std::lround(sy)), 0);
            } else {
                const int x0 = static_cast<int>(std::floor(sx)), y0 = static_cast<int>(std::floor(sy));
                const double fx = sx - x0, fy = sy - y0;
                const double v = (1 - fx) * (1 - fy) * img.at_or(x0, y0, 0) + fx * (1 - fy) * img.at_or(x0 + 1, y0, 0) +
                                 (1 - fx) * fy * img.at_or(x0, y0 + 1, 0) + fx * fy * img.at_or(x0 + 1, y0 + 1, 0);
                out(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
            }
        }
    return out;
}

/// Rotation by an angle drawn uniformly from [0, 90].
template <typename Raster>
Raster random_rotate(const Raster& img, Rng& rng) {
    return rotate(img, rng.uniform(0.0, 90.0));
}

/// Nearest-neighbour resampling (pixel-center aligned).
template <typename Raster>
Raster resize_nearest(const Raster& img, int out_w, int out_h) {
    if (out_w <= 0 || out_h <= 0) throw std::invalid_argument("resize: zero output dimension");
    Raster out(out_w, out_h);
    const double sx = static_cast<double>(img.width()) / out_w;
    const double sy = static_cast<double>(img.height()) / out_h;
    for (int y = 0; y < out_h; ++y) {
        const int iy = std::min(img.height() - 1, static_cast<int>(std::floor((y + 0.5) * sy)));
        for (int x = 0; x < out_w; ++x) {
            const int ix = std::min(img.width() - 1, static_cast<int>(std::floor((x + 0.5) * sx)));
            out(x, y) = img(ix, iy);
        }
    }
    return out;
}

}  // namespace curvforge
