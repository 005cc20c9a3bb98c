#pragma once

#include <initializer_list>
#include <string>

#include <json.hpp>

#include "curvforge/digest.hpp"
#include "curvforge/growth_config.hpp"

namespace curvforge {

using Json = nlohmann::ordered_json;

namespace json_detail {

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

inline void reject_unknown(const Json& obj, std::initializer_list<const char*> known, const std::string& where) {
    require(obj.is_object(), where + " must be an object");
    for (const auto& [key, _] : obj.items()) {
        bool found = false;
        for (const char* k : known) found = found || key == k;
        require(found, "unknown key '" + key + "' in " + where);
    }
}

inline double number(const Json& j, const std::string& where) {
    require(j.is_number(), where + " must be a number");
    return j.get<double>();
}

inline Point2 point(const Json& j, const std::string& where) {
    require(j.is_array() && j.size() == 2, where + " must be [x, y]");
    return {number(j[0], where), number(j[1], where)};
}

inline Interval interval(const Json& j, const std::string& where) {
    require(j.is_array() && j.size() == 2, where + " must be [lo, hi]");
    Interval iv{number(j[0], where), number(j[1], where)};
    require(iv.valid(), where + " must satisfy lo <= hi");
    return iv;
}

inline Json to_json(Point2 p) { return Json::array({p.x, p.y}); }
inline Json to_json(Interval iv) { return Json::array({iv.lo, iv.hi}); }

}  // namespace json_detail

inline Json region_to_json(const Region& region, const std::optional<Interval>& radius_range = std::nullopt) {
    using json_detail::to_json;
    if (const auto* c = std::get_if<Circle>(&region)) {
        Json body;
        body["center"] = to_json(c->center);
        body["radius"] = radius_range ? to_json(*radius_range) : Json(c->radius);
        return Json{{"circle", body}};
    }
    const auto& s = std::get<Square>(region);
    Json body;
    body["origin"] = to_json(s.origin);
    body["side"] = s.side;
    return Json{{"square", body}};
}

/// Parses a region. A circle radius given as [lo, hi] is only accepted when
/// `radius_range` is non-null; it is stored there and the circle keeps the upper end.
inline Region region_from_json(const Json& j, const std::string& where, std::optional<Interval>* radius_range = nullptr) {
    using namespace json_detail;
    require(j.is_object() && j.size() == 1, where + " must be {\"circle\": ...} or {\"square\": ...}");
    if (j.contains("circle")) {
        const Json& c = j["circle"];
        reject_unknown(c, {"center", "radius"}, where + ".circle");
        require(c.contains("center") && c.contains("radius"), where + ".circle needs center and radius");
        Circle circle{point(c["center"], where + ".circle.center"), 0.0};
        if (c["radius"].is_array()) {
            require(radius_range != nullptr, where + ".circle.radius must be a number here");
            const Interval iv = interval(c["radius"], where + ".circle.radius");
            *radius_range = iv;
            circle.radius = iv.hi;
        } else {
            circle.radius = number(c["radius"], where + ".circle.radius");
        }
        return circle;
    }
    if (j.contains("square")) {
        const Json& s = j["square"];
        reject_unknown(s, {"origin", "side"}, where + ".square");
        require(s.contains("origin") && s.contains("side"), where + ".square needs origin and side");
        return Square{point(s["origin"], where + ".square.origin"), number(s["side"], where + ".square.side")};
    }
    throw ConfigError(where + " must be a circle or a square");
}

inline Json to_json(const GrowthConfig& cfg) {
    using json_detail::to_json;
    Json j;
    j["bound"] = region_to_json(cfg.bound);
    Json obstacles = Json::array();
    for (const auto& o : cfg.obstacles) obstacles.push_back(region_to_json(o.region, o.radius_range));
    j["obstacles"] = obstacles;
    if (const auto* fixed = std::get_if<FixedPoints>(&cfg.roots)) {
        Json pts = Json::array();
        for (const auto& p : fixed->points) pts.push_back(to_json(p));
        j["roots"] = Json{{"fixed", pts}};
    } else {
        const auto& box = std::get<UniformBox>(cfg.roots);
        j["roots"] = Json{{"uniform_box", Json{{"x", to_json(box.x)}, {"y", to_json(box.y)}}}};
    }
    j["attractor_grid"] = cfg.attractor_grid;
    j["jitter"] = cfg.jitter;
    j["attraction_distance"] = cfg.attraction_distance;
    j["kill_distance"] = cfg.kill_distance;
    j["segment_length"] = cfg.segment_length;
    j["max_nodes"] = cfg.max_nodes;
    j["murray_exponent"] = cfg.murray_exponent;
    j["seed"] = cfg.seed;
    return j;
}

/// Missing distances default to 5/30/5; everything else except `obstacles`,
/// `max_nodes`, `murray_exponent` and `seed` is required.
inline GrowthConfig growth_config_from_json(const Json& j, const std::string& where = "growth") {
    using namespace json_detail;
    reject_unknown(j,
                   {"bound", "obstacles", "roots", "attractor_grid", "jitter", "attraction_distance", "kill_distance",
                    "segment_length", "max_nodes", "murray_exponent", "seed"},
                   where);
    GrowthConfig cfg;
    require(j.contains("bound"), where + ".bound is required");
    cfg.bound = region_from_json(j["bound"], where + ".bound");
    if (j.contains("obstacles")) {
        require(j["obstacles"].is_array(), where + ".obstacles must be an array");
        for (std::size_t i = 0; i < j["obstacles"].size(); ++i) {
            ObstacleSpec o;
            o.region = region_from_json(j["obstacles"][i], where + ".obstacles[" + std::to_string(i) + "]",
                                        &o.radius_range);
            cfg.obstacles.push_back(o);
        }
    }
    require(j.contains("roots"), where + ".roots is required");
    const Json& r = j["roots"];
    require(r.is_object() && r.size() == 1, where + ".roots must hold exactly one of fixed/uniform_box");
    if (r.contains("fixed")) {
        require(r["fixed"].is_array(), where + ".roots.fixed must be an array of points");
        FixedPoints fp;
        for (const auto& p : r["fixed"]) fp.points.push_back(point(p, where + ".roots.fixed[]"));
        cfg.roots = fp;
    } else if (r.contains("uniform_box")) {
        const Json& b = r["uniform_box"];
        reject_unknown(b, {"x", "y"}, where + ".roots.uniform_box");
        require(b.contains("x") && b.contains("y"), where + ".roots.uniform_box needs x and y");
        cfg.roots = UniformBox{interval(b["x"], where + ".roots.uniform_box.x"),
                               interval(b["y"], where + ".roots.uniform_box.y")};
    } else {
        throw ConfigError(where + ".roots must be fixed or uniform_box");
    }
    auto integer = [&](const char* key) {
        require(j[key].is_number_integer(), where + "." + key + " must be an integer");
        return j[key].get<long long>();
    };
    require(j.contains("attractor_grid") && j.contains("jitter"), where + " needs attractor_grid and jitter");
    cfg.attractor_grid = static_cast<int>(integer("attractor_grid"));
    cfg.jitter = number(j["jitter"], where + ".jitter");
    if (j.contains("attraction_distance")) cfg.attraction_distance = number(j["attraction_distance"], where);
    if (j.contains("kill_distance")) cfg.kill_distance = number(j["kill_distance"], where);
    if (j.contains("segment_length")) cfg.segment_length = number(j["segment_length"], where);
    if (j.contains("max_nodes")) cfg.max_nodes = static_cast<int>(integer("max_nodes"));
    if (j.contains("murray_exponent")) cfg.murray_exponent = number(j["murray_exponent"], where);
    if (j.contains("seed")) {
        require(j["seed"].is_number_unsigned() || (j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0),
                where + ".seed must be a non-negative integer");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    return cfg;
}

/// Stable tag of a growth configuration (including its seed).
inline std::string config_digest(const GrowthConfig& cfg) { return fnv1a_hex(to_json(cfg).dump()); }

}  // namespace curvforge
