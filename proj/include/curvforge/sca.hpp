#pragma once

// Space-colonization growth of curvilinear trees and Murray's-law radii.
//
// A growth run owns three kinds of points: attractors laid on a jittered grid
// over the bound, tree nodes, and (implicitly) the exclusion geometry. Each
// step every live attractor pulls its nearest node within the attraction
// distance; pulled nodes extend one segment along the mean unit direction of
// their attractors; afterwards attractors with a node inside the kill distance
// are retired.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "curvforge/config_json.hpp"
#include "curvforge/geometry.hpp"
#include "curvforge/growth_config.hpp"
#include "curvforge/random.hpp"

namespace curvforge {

/// Uniform bucket grid over a box for fixed-radius neighbour queries.
class PointGrid {
public:
    PointGrid(Box box, double cell_size) : origin_(box.min) {
        constexpr int kMaxCellsPerAxis = 2048;
        cell_ = std::max(cell_size, 1e-9);
        const double extent = std::max(box.width(), box.height());
        if (extent / cell_ > kMaxCellsPerAxis) cell_ = extent / kMaxCellsPerAxis;
        nx_ = std::max(1, static_cast<int>(std::ceil(box.width() / cell_)) + 1);
        ny_ = std::max(1, static_cast<int>(std::ceil(box.height() / cell_)) + 1);
        buckets_.resize(static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_));
    }

    void insert(std::uint32_t id, Point2 p) { buckets_[bucket(cell_x(p.x), cell_y(p.y))].push_back(id); }

    /// Calls fn(id) for every stored id whose cell intersects the query square;
    /// callers filter by exact distance.
    template <typename Fn>
    void for_each_near(Point2 p, double radius, Fn&& fn) const {
        const int x0 = cell_x(p.x - radius), x1 = cell_x(p.x + radius);
        const int y0 = cell_y(p.y - radius), y1 = cell_y(p.y + radius);
        for (int cy = y0; cy <= y1; ++cy)
            for (int cx = x0; cx <= x1; ++cx)
                for (std::uint32_t id : buckets_[bucket(cx, cy)]) fn(id);
    }

private:
    int cell_x(double x) const noexcept { return clamp_cell((x - origin_.x) / cell_, nx_); }
    int cell_y(double y) const noexcept { return clamp_cell((y - origin_.y) / cell_, ny_); }
    static int clamp_cell(double v, int n) noexcept {
        if (!(v > 0.0)) return 0;
        if (v >= n - 1) return n - 1;
        return static_cast<int>(v);
    }
    std::size_t bucket(int cx, int cy) const noexcept {
        return static_cast<std::size_t>(cy) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(cx);
    }

    Point2 origin_;
    double cell_ = 1.0;
    int nx_ = 1;
    int ny_ = 1;
    std::vector<std::vector<std::uint32_t>> buckets_;
};

/// Obstacle regions with per-tree radii drawn from their intervals.
inline std::vector<Region> resolve_obstacles(const GrowthConfig& config) {
    Rng rng(config.seed, Stream::obstacles);
    std::vector<Region> out;
    out.reserve(config.obstacles.size());
    for (const auto& o : config.obstacles) {
        Region r = o.region;
        if (o.radius_range) std::get<Circle>(r).radius = rng.uniform(o.radius_range->lo, o.radius_range->hi);
        out.push_back(r);
    }
    return out;
}

inline bool admissible(const Region& bound, std::span<const Region> obstacles, Point2 p) noexcept {
    if (!contains(bound, p)) return false;
    return std::none_of(obstacles.begin(), obstacles.end(), [p](const Region& o) { return contains(o, p); });
}

/// Jittered A_g x A_g grid over the bound's bounding box, in row-major order,
/// with points outside the bound or inside an obstacle dropped.
inline std::vector<Attractor> place_attractors(const GrowthConfig& config, std::span<const Region> obstacles,
                                               Rng& rng) {
    const Box box = bounding_box(config.bound);
    const int n = config.attractor_grid;
    const double cw = box.width() / n;
    const double ch = box.height() / n;
    std::vector<Attractor> out;
    out.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int row = 0; row < n; ++row) {
        for (int col = 0; col < n; ++col) {
            Point2 p{box.min.x + (col + 0.5) * cw, box.min.y + (row + 0.5) * ch};
            if (config.jitter > 0.0) {
                p.x += rng.uniform(-config.jitter, config.jitter);
                p.y += rng.uniform(-config.jitter, config.jitter);
            }
            if (admissible(config.bound, obstacles, p)) out.push_back({p, true});
        }
    }
    return out;
}

inline std::vector<Attractor> place_attractors(const GrowthConfig& config, Rng& rng) {
    const auto obstacles = resolve_obstacles(config);
    return place_attractors(config, obstacles, rng);
}

inline constexpr int kRootDrawAttempts = 64;

/// Fixed roots are copied; a box root is drawn uniformly from the part of the
/// box that lies inside the bound and outside every obstacle (rejection
/// sampling, kRootDrawAttempts tries). Throws RootRejected for an inadmissible
/// fixed root or a box with no admissible draw.
inline std::vector<CurveNode> init_roots(const GrowthConfig& config, std::span<const Region> obstacles, Rng& rng) {
    std::vector<CurveNode> roots;
    if (const auto* fixed = std::get_if<FixedPoints>(&config.roots)) {
        for (const auto& p : fixed->points) roots.push_back({p, std::nullopt, 0.0});
    } else {
        const auto& box = std::get<UniformBox>(config.roots);
        Point2 p;
        for (int attempt = 0; attempt < kRootDrawAttempts; ++attempt) {
            p.x = rng.uniform(box.x.lo, box.x.hi);
            p.y = rng.uniform(box.y.lo, box.y.hi);
            if (admissible(config.bound, obstacles, p)) break;
        }
        roots.push_back({p, std::nullopt, 0.0});
    }
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const Point2 p = roots[i].pos;
        if (!contains(config.bound, p))
            throw RootRejected(i, "root " + std::to_string(i) + " at (" + std::to_string(p.x) + ", " +
                                      std::to_string(p.y) + ") lies outside the bound");
        for (const auto& o : obstacles)
            if (contains(o, p))
                throw RootRejected(i, "root " + std::to_string(i) + " at (" + std::to_string(p.x) + ", " +
                                          std::to_string(p.y) + ") lies inside an obstacle");
    }
    return roots;
}

inline std::vector<CurveNode> init_roots(const GrowthConfig& config, Rng& rng) {
    const auto obstacles = resolve_obstacles(config);
    return init_roots(config, obstacles, rng);
}

/// Nearest node within `attraction_distance` (inclusive); ties go to the lower index.
inline std::optional<std::size_t> influencer_of(const Attractor& attractor, const CurveTree& tree,
                                                double attraction_distance) {
    const double limit = attraction_distance * attraction_distance;
    std::optional<std::size_t> best;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const double d2 = squared_distance(attractor.pos, tree.nodes[i].pos);
        if (d2 <= limit && d2 < best_d2) {
            best = i;
            best_d2 = d2;
        }
    }
    return best;
}

class GrowthState;
inline std::size_t grow_step(GrowthState& state, const GrowthConfig& config);

/// Mutable state of one growth run.
class GrowthState {
public:
    explicit GrowthState(const GrowthConfig& config)
        : bound_(config.bound),
          obstacles_(resolve_obstacles(config)),
          node_index_(bounding_box(config.bound), config.attraction_distance),
          attractor_index_(bounding_box(config.bound), config.kill_distance) {
        Rng attractor_rng(config.seed, Stream::attractors);
        attractors_ = place_attractors(config, obstacles_, attractor_rng);
        Rng root_rng(config.seed, Stream::roots);
        tree_.nodes = init_roots(config, obstacles_, root_rng);
        tree_.config_hash = config_digest(config);
        for (std::uint32_t i = 0; i < attractors_.size(); ++i) attractor_index_.insert(i, attractors_[i].pos);
        for (std::uint32_t i = 0; i < tree_.nodes.size(); ++i) node_index_.insert(i, tree_.nodes[i].pos);
    }

    const CurveTree& tree() const noexcept { return tree_; }
    CurveTree take_tree() && { return std::move(tree_); }
    const std::vector<Attractor>& attractors() const noexcept { return attractors_; }
    const Region& bound() const noexcept { return bound_; }
    std::span<const Region> obstacles() const noexcept { return obstacles_; }

    std::size_t alive_attractors() const noexcept {
        return static_cast<std::size_t>(
            std::count_if(attractors_.begin(), attractors_.end(), [](const Attractor& a) { return a.alive; }));
    }

private:
    friend std::size_t grow_step(GrowthState& state, const GrowthConfig& config);

    std::optional<std::size_t> nearest_node(Point2 p, double radius) const {
        const double limit = radius * radius;
        std::optional<std::size_t> best;
        double best_d2 = std::numeric_limits<double>::infinity();
        node_index_.for_each_near(p, radius, [&](std::uint32_t id) {
            const double d2 = squared_distance(p, tree_.nodes[id].pos);
            if (d2 > limit) return;
            if (d2 < best_d2 || (d2 == best_d2 && id < *best)) {
                best = id;
                best_d2 = d2;
            }
        });
        return best;
    }

    Region bound_;
    std::vector<Region> obstacles_;
    CurveTree tree_;
    std::vector<Attractor> attractors_;
    PointGrid node_index_;
    PointGrid attractor_index_;
    // Nodes below this index have already retired every attractor in their kill zone.
    std::size_t kill_checked_ = 0;
};

/// One colonization step; returns the number of nodes spawned.
inline std::size_t grow_step(GrowthState& state, const GrowthConfig& config) {
    auto& nodes = state.tree_.nodes;
    const std::size_t cap = static_cast<std::size_t>(config.max_nodes);
    const std::size_t existing = nodes.size();

    std::vector<Point2> pull(existing);
    std::vector<std::uint32_t> pull_count(existing, 0);
    for (const auto& a : state.attractors_) {
        if (!a.alive) continue;
        const auto node = state.nearest_node(a.pos, config.attraction_distance);
        if (!node) continue;
        const Point2 d = a.pos - nodes[*node].pos;
        const double len = std::hypot(d.x, d.y);
        if (len <= 0.0) continue;
        pull[*node] = pull[*node] + d * (1.0 / len);
        ++pull_count[*node];
    }

    std::size_t spawned = 0;
    for (std::size_t i = 0; i < existing && nodes.size() < cap; ++i) {
        if (pull_count[i] == 0) continue;
        const Point2 mean = pull[i] * (1.0 / pull_count[i]);
        const double norm = std::hypot(mean.x, mean.y);
        if (norm < 1e-9) continue;
        const Point2 child = nodes[i].pos + mean * (config.segment_length / norm);
        if (!admissible(state.bound_, state.obstacles_, child)) continue;
        nodes.push_back({child, i, 0.0});
        state.node_index_.insert(static_cast<std::uint32_t>(nodes.size() - 1), child);
        ++spawned;
    }

    const double kill2 = config.kill_distance * config.kill_distance;
    for (std::size_t n = state.kill_checked_; n < nodes.size(); ++n) {
        const Point2 p = nodes[n].pos;
        state.attractor_index_.for_each_near(p, config.kill_distance, [&](std::uint32_t id) {
            auto& a = state.attractors_[id];
            if (a.alive && squared_distance(a.pos, p) <= kill2) a.alive = false;
        });
    }
    state.kill_checked_ = nodes.size();
    return spawned;
}

/// Grows a tree until max_nodes is reached or a step spawns nothing.
/// Pure in (config, config.seed).
inline CurveTree grow(const GrowthConfig& config) {
    config.validate();
    GrowthState state(config);
    const std::size_t cap = static_cast<std::size_t>(config.max_nodes);
    while (state.tree().nodes.size() < cap) {
        if (grow_step(state, config) == 0) break;
    }
    return std::move(state).take_tree();
}

/// Child index lists, in ascending order.
inline std::vector<std::vector<std::size_t>> children_of(const CurveTree& tree) {
    std::vector<std::vector<std::size_t>> children(tree.nodes.size());
    for (std::size_t i = 0; i < tree.nodes.size(); ++i)
        if (const auto& p = tree.nodes[i].parent) children[*p].push_back(i);
    return children;
}

/// Leaves get radius 1; an internal node gets (sum of child radius^n)^(1/n),
/// which passes a single child's radius through unchanged.
inline CurveTree compute_radii(CurveTree tree, double exponent) {
    if (!(exponent > 0.0)) throw ConfigError("Murray exponent must be > 0");
    const auto children = children_of(tree);
    for (std::size_t k = tree.nodes.size(); k-- > 0;) {
        const auto& kids = children[k];
        if (kids.empty()) {
            tree.nodes[k].radius = 1.0;
        } else if (kids.size() == 1) {
            tree.nodes[k].radius = tree.nodes[kids.front()].radius;
        } else {
            double sum = 0.0;
            for (std::size_t c : kids) sum += std::pow(tree.nodes[c].radius, exponent);
            tree.nodes[k].radius = std::pow(sum, 1.0 / exponent);
        }
    }
    return tree;
}

/// Joint rasterization set; empty trees are dropped.
inline CurveForest union_trees(const CurveTree& a, const CurveTree& b) {
    CurveForest forest;
    if (!a.empty()) forest.push_back(a);
    if (!b.empty()) forest.push_back(b);
    return forest;
}

}  // namespace curvforge
