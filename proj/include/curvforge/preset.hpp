#pragma once

// Curve presets: one or two growth components on a canvas plus an ordered
// post-processing recipe. The four built-ins carry the tabulated parameters
// for OCTA500, CORN, DRIVE and CHASEDB1 style curves.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "curvforge/config_json.hpp"
#include "curvforge/raster.hpp"
#include "curvforge/sca.hpp"

namespace curvforge {

/// OR-combine the per-component masks. Steps before it run on each component.
struct UnionOp {
    friend bool operator==(const UnionOp&, const UnionOp&) = default;
};
struct FovOp {
    Circle circle;
    friend bool operator==(const FovOp&, const FovOp&) = default;
};
/// Fixed (centered) or random crop.
struct CropOp {
    int width = 0;
    int height = 0;
    bool random = false;
    friend bool operator==(const CropOp&, const CropOp&) = default;
};
/// Random flips each axis with probability 1/2.
struct FlipOp {
    enum class Mode { random, horizontal, vertical } mode = Mode::random;
    friend bool operator==(const FlipOp&, const FlipOp&) = default;
};
struct ErodeOp {
    StructuringElement se;
};
struct DilateOp {
    StructuringElement se;
};
/// Nearest-neighbour rescale to the target resolution.
struct ResizeOp {
    int width = 0;
    int height = 0;
    friend bool operator==(const ResizeOp&, const ResizeOp&) = default;
};

using PostOp = std::variant<UnionOp, FovOp, CropOp, FlipOp, ErodeOp, DilateOp, ResizeOp>;

struct Preset {
    std::string name;
    int canvas_width = 0;
    int canvas_height = 0;
    std::vector<GrowthConfig> growth;
    std::vector<PostOp> post_ops;
};

inline std::vector<std::string> built_in_preset_names() { return {"octa500", "corn", "drive", "chasedb1"}; }

namespace preset_detail {

inline GrowthConfig base(Region bound, int grid, double jitter) {
    GrowthConfig g;
    g.bound = bound;
    g.attractor_grid = grid;
    g.jitter = jitter;
    g.attraction_distance = 5.0;
    g.kill_distance = 30.0;
    g.segment_length = 5.0;
    g.max_nodes = kDefaultMaxNodes;
    g.murray_exponent = 3.0;
    return g;
}

}  // namespace preset_detail

inline std::optional<Preset> built_in_preset(const std::string& name) {
    using preset_detail::base;
    if (name == "octa500") {
        // Large horizontal vessels from the four side midpoints, plus a
        // centripetal small-vessel component around a circular hole.
        const Circle bound{{450, 450}, 450};
        GrowthConfig large = base(bound, 130, 20);
        large.roots = FixedPoints{{{450, 0}, {900, 450}, {450, 900}, {0, 450}}};
        GrowthConfig small = base(bound, 130, 20);
        small.obstacles.push_back({Circle{{650, 450}, 90}, Interval{60, 90}});
        small.roots = UniformBox{{75, 375}, {75, 375}};
        return Preset{"octa500", 900, 900, {large, small}, {CropOp{900, 900, false}, UnionOp{}, ResizeOp{400, 400}}};
    }
    if (name == "corn") {
        GrowthConfig g = base(Square{{0, 0}, 1300}, 110, 15);
        g.roots = UniformBox{{620, 680}, {620, 680}};
        return Preset{"corn", 1300, 1300, {g}, {ErodeOp{DiskSE{1}}, CropOp{384, 384, true}}};
    }
    if (name == "drive") {
        GrowthConfig g = base(Circle{{400, 400}, 400}, 85, 30);
        g.obstacles.push_back({Circle{{400, 400}, 60}, Interval{40, 60}});
        g.roots = UniformBox{{70, 130}, {350, 450}};
        return Preset{"drive", 800, 800, {g}, {ResizeOp{576, 576}, FovOp{Circle{{288, 288}, 288}}, FlipOp{}}};
    }
    if (name == "chasedb1") {
        GrowthConfig g = base(Square{{0, 0}, 960}, 100, 12);
        g.attraction_distance = 3.0;
        g.kill_distance = 35.0;
        g.segment_length = 10.0;
        g.roots = UniformBox{{440, 520}, {440, 520}};
        return Preset{"chasedb1", 960, 960, {g}, {FovOp{Circle{{480, 480}, 480}}, DilateOp{DiskSE{1}}}};
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// JSON

inline Json se_to_json(const StructuringElement& se) {
    if (const auto* d = std::get_if<DiskSE>(&se)) return Json{{"disk", d->radius}};
    return Json{{"square", std::get<SquareSE>(se).side}};
}

inline StructuringElement se_from_json(const Json& j, const std::string& where) {
    json_detail::require(j.is_object() && j.size() == 1, where + " must be {\"disk\": r} or {\"square\": side}");
    if (j.contains("disk") && j["disk"].is_number_integer()) {
        const int r = j["disk"].get<int>();
        json_detail::require(r >= 0, where + ".disk must be >= 0");
        return DiskSE{r};
    }
    if (j.contains("square") && j["square"].is_number_integer()) {
        const int s = j["square"].get<int>();
        json_detail::require(s >= 1 && s % 2 == 1, where + ".square must be odd and >= 1");
        return SquareSE{s};
    }
    throw ConfigError(where + " must be {\"disk\": r} or {\"square\": side}");
}

inline Json to_json(const PostOp& op) {
    return std::visit(
        [](const auto& o) -> Json {
            using T = std::decay_t<decltype(o)>;
            Json j;
            if constexpr (std::is_same_v<T, UnionOp>) {
                j["op"] = "union";
            } else if constexpr (std::is_same_v<T, FovOp>) {
                j["op"] = "fov";
                j["circle"] = region_to_json(o.circle)["circle"];
            } else if constexpr (std::is_same_v<T, CropOp>) {
                j["op"] = "crop";
                j["size"] = Json::array({o.width, o.height});
                j["random"] = o.random;
            } else if constexpr (std::is_same_v<T, FlipOp>) {
                j["op"] = "flip";
                j["axes"] = o.mode == FlipOp::Mode::random       ? "random"
                            : o.mode == FlipOp::Mode::horizontal ? "horizontal"
                                                                 : "vertical";
            } else if constexpr (std::is_same_v<T, ErodeOp>) {
                j["op"] = "erode";
                j["se"] = se_to_json(o.se);
            } else if constexpr (std::is_same_v<T, DilateOp>) {
                j["op"] = "dilate";
                j["se"] = se_to_json(o.se);
            } else {
                j["op"] = "resize";
                j["size"] = Json::array({o.width, o.height});
            }
            return j;
        },
        op);
}

inline Json to_json(const Preset& p) {
    Json j;
    j["name"] = p.name;
    j["canvas"] = Json::array({p.canvas_width, p.canvas_height});
    Json growth = Json::array();
    for (const auto& g : p.growth) growth.push_back(to_json(g));
    j["growth"] = growth;
    Json ops = Json::array();
    for (const auto& op : p.post_ops) ops.push_back(to_json(op));
    j["post_ops"] = ops;
    return j;
}

namespace preset_detail {

inline std::pair<int, int> size_pair(const Json& j, const std::string& where) {
    json_detail::require(j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer(),
                         where + " must be [width, height] integers");
    const int w = j[0].get<int>(), h = j[1].get<int>();
    json_detail::require(w > 0 && h > 0, where + " must be positive");
    return {w, h};
}

inline PostOp post_op_from_json(const Json& j, const std::string& where) {
    using namespace json_detail;
    require(j.is_object() && j.contains("op") && j["op"].is_string(), where + " needs an \"op\" string");
    const std::string op = j["op"].get<std::string>();
    if (op == "union") {
        reject_unknown(j, {"op"}, where);
        return UnionOp{};
    }
    if (op == "fov") {
        reject_unknown(j, {"op", "circle"}, where);
        require(j.contains("circle"), where + " needs circle");
        const Region r = region_from_json(Json{{"circle", j["circle"]}}, where);
        validate(r);
        return FovOp{std::get<Circle>(r)};
    }
    if (op == "crop") {
        reject_unknown(j, {"op", "size", "random"}, where);
        require(j.contains("size"), where + " needs size");
        auto [w, h] = size_pair(j["size"], where + ".size");
        bool random = false;
        if (j.contains("random")) {
            require(j["random"].is_boolean(), where + ".random must be a boolean");
            random = j["random"].get<bool>();
        }
        return CropOp{w, h, random};
    }
    if (op == "flip") {
        reject_unknown(j, {"op", "axes"}, where);
        const std::string axes = j.value("axes", std::string("random"));
        if (axes == "random") return FlipOp{FlipOp::Mode::random};
        if (axes == "horizontal") return FlipOp{FlipOp::Mode::horizontal};
        if (axes == "vertical") return FlipOp{FlipOp::Mode::vertical};
        throw ConfigError(where + ".axes must be random, horizontal or vertical");
    }
    if (op == "erode" || op == "dilate") {
        reject_unknown(j, {"op", "se"}, where);
        require(j.contains("se"), where + " needs se");
        const auto se = se_from_json(j["se"], where + ".se");
        if (op == "erode") return ErodeOp{se};
        return DilateOp{se};
    }
    if (op == "resize") {
        reject_unknown(j, {"op", "size"}, where);
        require(j.contains("size"), where + " needs size");
        auto [w, h] = size_pair(j["size"], where + ".size");
        return ResizeOp{w, h};
    }
    throw ConfigError(where + ": unknown post-processing op '" + op + "'");
}

}  // namespace preset_detail

/// Validates the recipe shape; returns growth warnings.
inline std::vector<std::string> validate(const Preset& p) {
    if (p.name.empty()) throw ConfigError("preset name must not be empty");
    if (p.canvas_width <= 0 || p.canvas_height <= 0) throw ConfigError("canvas must be positive");
    if (p.growth.empty()) throw ConfigError("preset needs at least one growth component");
    std::vector<std::string> warnings;
    for (const auto& g : p.growth) {
        auto w = g.validate();
        warnings.insert(warnings.end(), w.begin(), w.end());
    }
    const bool has_union =
        std::any_of(p.post_ops.begin(), p.post_ops.end(), [](const PostOp& op) { return std::holds_alternative<UnionOp>(op); });
    if (p.growth.size() > 1 && !has_union) throw ConfigError("multi-component presets need a union step");
    std::sort(warnings.begin(), warnings.end());
    warnings.erase(std::unique(warnings.begin(), warnings.end()), warnings.end());
    return warnings;
}

inline Preset preset_from_json(const Json& j) {
    using namespace json_detail;
    reject_unknown(j, {"name", "canvas", "growth", "post_ops"}, "preset");
    require(j.contains("name") && j["name"].is_string(), "preset.name must be a string");
    Preset p;
    p.name = j["name"].get<std::string>();
    require(j.contains("canvas"), "preset.canvas is required");
    std::tie(p.canvas_width, p.canvas_height) = preset_detail::size_pair(j["canvas"], "preset.canvas");
    require(j.contains("growth") && j["growth"].is_array(), "preset.growth must be an array");
    for (std::size_t i = 0; i < j["growth"].size(); ++i)
        p.growth.push_back(growth_config_from_json(j["growth"][i], "preset.growth[" + std::to_string(i) + "]"));
    if (j.contains("post_ops")) {
        require(j["post_ops"].is_array(), "preset.post_ops must be an array");
        for (std::size_t i = 0; i < j["post_ops"].size(); ++i)
            p.post_ops.push_back(
                preset_detail::post_op_from_json(j["post_ops"][i], "preset.post_ops[" + std::to_string(i) + "]"));
    }
    validate(p);
    return p;
}

inline std::string preset_digest(const Preset& p) { return fnv1a_hex(to_json(p).dump()); }

// ---------------------------------------------------------------------------
// Generation

struct CurveSample {
    Mask mask;
    CurveForest forest;
    /// Largest radius actually stamped (rounded), in canvas pixels.
    double max_rendered_radius = 0.0;
};

inline Mask apply_post_op(const PostOp& op, const Mask& m, Rng& rng) {
    return std::visit(
        [&](const auto& o) -> Mask {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, UnionOp>) {
                return m;
            } else if constexpr (std::is_same_v<T, FovOp>) {
                return apply_fov(m, circle_mask(m.width(), m.height(), o.circle));
            } else if constexpr (std::is_same_v<T, CropOp>) {
                if (o.width > m.width() || o.height > m.height())
                    throw ConfigError("crop size exceeds the mask at that step");
                if (o.random) return random_crop(m, o.width, o.height, rng);
                return crop(m, (m.width() - o.width) / 2, (m.height() - o.height) / 2, o.width, o.height);
            } else if constexpr (std::is_same_v<T, FlipOp>) {
                if (o.mode == FlipOp::Mode::horizontal) return flip(m, FlipAxis::horizontal);
                if (o.mode == FlipOp::Mode::vertical) return flip(m, FlipAxis::vertical);
                Mask out = m;
                if (rng.bernoulli(0.5)) out = flip(out, FlipAxis::horizontal);
                if (rng.bernoulli(0.5)) out = flip(out, FlipAxis::vertical);
                return out;
            } else if constexpr (std::is_same_v<T, ErodeOp>) {
                return erode(m, o.se);
            } else if constexpr (std::is_same_v<T, DilateOp>) {
                return dilate(m, o.se);
            } else {
                return resize_nearest(m, o.width, o.height);
            }
        },
        op);
}

/// Grows every component with seeds split from `item_seed`, rasterizes, and
/// runs the post-processing recipe.
inline CurveSample generate_curve(const Preset& preset, std::uint64_t item_seed) {
    CurveSample sample;
    std::vector<Mask> layers;
    for (std::size_t c = 0; c < preset.growth.size(); ++c) {
        GrowthConfig cfg = preset.growth[c];
        cfg.seed = split_seed(item_seed, c);
        CurveTree tree = compute_radii(grow(cfg), cfg.murray_exponent);
        for (const auto& n : tree.nodes) sample.max_rendered_radius = std::max(sample.max_rendered_radius, std::round(n.radius));
        layers.push_back(rasterize(std::span(&tree, 1), preset.canvas_width, preset.canvas_height));
        sample.forest.push_back(std::move(tree));
    }
    Rng rng(item_seed, Stream::post);
    bool merged = layers.size() == 1;
    for (const auto& op : preset.post_ops) {
        if (std::holds_alternative<UnionOp>(op) && !merged) {
            Mask combined = layers.front();
            for (std::size_t i = 1; i < layers.size(); ++i) combined = mask_or(combined, layers[i]);
            layers.assign(1, std::move(combined));
            merged = true;
            continue;
        }
        for (auto& layer : layers) layer = apply_post_op(op, layer, rng);
    }
    if (!merged) throw ConfigError("multi-component presets need a union step");
    sample.mask = std::move(layers.front());
    return sample;
}

}  // namespace curvforge
