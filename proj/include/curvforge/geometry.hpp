#pragma once

#include <algorithm>
#include <cmath>
#include <variant>

#include "curvforge/errors.hpp"

namespace curvforge {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point2 operator+(Point2 a, Point2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point2 operator-(Point2 a, Point2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point2 operator*(Point2 a, double s) noexcept { return {a.x * s, a.y * s}; }
    friend constexpr bool operator==(Point2, Point2) noexcept = default;

    bool finite() const noexcept { return std::isfinite(x) && std::isfinite(y); }
};

constexpr double squared_distance(Point2 a, Point2 b) noexcept {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

inline double distance(Point2 a, Point2 b) noexcept { return std::sqrt(squared_distance(a, b)); }

/// Closed real interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    constexpr bool valid() const noexcept { return lo <= hi; }
    constexpr bool contains(double v) const noexcept { return v >= lo && v <= hi; }
    friend constexpr bool operator==(Interval, Interval) noexcept = default;
};

struct Circle {
    Point2 center;
    double radius = 0.0;
    friend constexpr bool operator==(const Circle&, const Circle&) noexcept = default;
};

/// Axis-aligned square with its top-left corner at `origin`.
struct Square {
    Point2 origin;
    double side = 0.0;
    friend constexpr bool operator==(const Square&, const Square&) noexcept = default;
};

using Region = std::variant<Circle, Square>;

struct Box {
    Point2 min;
    Point2 max;

    double width() const noexcept { return max.x - min.x; }
    double height() const noexcept { return max.y - min.y; }
};

/// Boundary points count as inside.
inline bool contains(const Region& region, Point2 p) noexcept {
    return std::visit(
        [p](const auto& r) -> bool {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Circle>) {
                return squared_distance(p, r.center) <= r.radius * r.radius;
            } else {
                return p.x >= r.origin.x && p.x <= r.origin.x + r.side && p.y >= r.origin.y &&
                       p.y <= r.origin.y + r.side;
            }
        },
        region);
}

inline Box bounding_box(const Region& region) noexcept {
    return std::visit(
        [](const auto& r) -> Box {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Circle>) {
                return {{r.center.x - r.radius, r.center.y - r.radius},
                        {r.center.x + r.radius, r.center.y + r.radius}};
            } else {
                return {r.origin, {r.origin.x + r.side, r.origin.y + r.side}};
            }
        },
        region);
}

inline void validate(const Region& region) {
    std::visit(
        [](const auto& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Circle>) {
                if (!(r.radius > 0.0) || !r.center.finite())
                    throw ConfigError("circle radius must be > 0 and center finite");
            } else {
                if (!(r.side > 0.0) || !r.origin.finite())
                    throw ConfigError("square side must be > 0 and origin finite");
            }
        },
        region);
}

}  // namespace curvforge
