#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "curvforge/geometry.hpp"

namespace curvforge {

struct FixedPoints {
    std::vector<Point2> points;
    friend bool operator==(const FixedPoints&, const FixedPoints&) = default;
};

/// One root drawn uniformly from the box.
struct UniformBox {
    Interval x;
    Interval y;
    friend bool operator==(const UniformBox&, const UniformBox&) = default;
};

using RootSpec = std::variant<FixedPoints, UniformBox>;

/// An exclusion zone. Circles may carry a radius interval, in which case the
/// radius is drawn once per tree.
struct ObstacleSpec {
    Region region;
    std::optional<Interval> radius_range;
    friend bool operator==(const ObstacleSpec&, const ObstacleSpec&) = default;
};

inline constexpr double kDefaultAttractionDistance = 5.0;
inline constexpr double kDefaultKillDistance = 30.0;
inline constexpr double kDefaultSegmentLength = 5.0;
inline constexpr int kDefaultMaxNodes = 10000;

struct GrowthConfig {
    Region bound = Square{{0, 0}, 100};
    std::vector<ObstacleSpec> obstacles;
    RootSpec roots = FixedPoints{};
    int attractor_grid = 1;
    double jitter = 0.0;
    double attraction_distance = kDefaultAttractionDistance;
    double kill_distance = kDefaultKillDistance;
    double segment_length = kDefaultSegmentLength;
    int max_nodes = kDefaultMaxNodes;
    double murray_exponent = 3.0;
    std::uint64_t seed = 0;

    friend bool operator==(const GrowthConfig&, const GrowthConfig&) = default;

    /// Throws ConfigError on hard violations; returns advisory warnings.
    std::vector<std::string> validate() const {
        std::vector<std::string> warnings;
        curvforge::validate(bound);
        for (const auto& o : obstacles) {
            curvforge::validate(o.region);
            if (o.radius_range) {
                if (!std::holds_alternative<Circle>(o.region))
                    throw ConfigError("obstacle radius range is only meaningful for circles");
                if (!o.radius_range->valid() || !(o.radius_range->lo > 0.0))
                    throw ConfigError("obstacle radius range must be a non-empty positive interval");
            }
        }
        if (const auto* fixed = std::get_if<FixedPoints>(&roots)) {
            if (fixed->points.empty()) throw ConfigError("fixed root list is empty");
            for (const auto& p : fixed->points)
                if (!p.finite()) throw ConfigError("fixed root is not finite");
            if (fixed->points.size() > static_cast<std::size_t>(std::max(max_nodes, 0)))
                throw ConfigError("more fixed roots than max_nodes");
        } else {
            const auto& box = std::get<UniformBox>(roots);
            if (!box.x.valid() || !box.y.valid()) throw ConfigError("root box intervals must be non-empty");
        }
        if (attractor_grid < 1) throw ConfigError("attractor_grid must be >= 1");
        if (!(jitter >= 0.0)) throw ConfigError("jitter must be >= 0");
        if (!(attraction_distance > 0.0)) throw ConfigError("attraction_distance must be > 0");
        if (!(kill_distance > 0.0)) throw ConfigError("kill_distance must be > 0");
        if (!(segment_length > 0.0)) throw ConfigError("segment_length must be > 0");
        if (max_nodes < 1) throw ConfigError("max_nodes must be >= 1");
        if (!(murray_exponent > 0.0)) throw ConfigError("murray_exponent must be > 0");
        if (kill_distance > attraction_distance)
            warnings.emplace_back(
                "kill_distance exceeds attraction_distance: attractors are pruned before they can steer "
                "non-root nodes, so growth stops after the first step");
        return warnings;
    }
};

struct Attractor {
    Point2 pos;
    bool alive = true;
    friend bool operator==(const Attractor&, const Attractor&) = default;
};

struct CurveNode {
    Point2 pos;
    std::optional<std::size_t> parent;
    /// 0 until compute_radii runs.
    double radius = 0.0;
    friend bool operator==(const CurveNode&, const CurveNode&) = default;
};

struct CurveTree {
    std::vector<CurveNode> nodes;
    std::string config_hash;

    bool empty() const noexcept { return nodes.empty(); }
    friend bool operator==(const CurveTree&, const CurveTree&) = default;
};

using CurveForest = std::vector<CurveTree>;

}  // namespace curvforge
