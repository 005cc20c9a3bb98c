#pragma once

// Curve/background banks on disk and the manifest that ties them together.
//
// Layout: <bank>/manifest.json, <bank>/curves/*.png, <bank>/backgrounds/*.png,
// <bank>/masks/*.png. Manifests hold only relative paths and no timestamps, so
// identical inputs give byte-identical banks.

#include <array>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "curvforge/config_json.hpp"
#include "curvforge/parallel.hpp"
#include "curvforge/png_io.hpp"
#include "curvforge/preset.hpp"
#include "curvforge/raster.hpp"

namespace curvforge {

inline constexpr int kManifestVersion = 1;

enum class EntryKind { curve, background, fov, skeleton, inpaint_mask };

inline const char* to_string(EntryKind k) {
    switch (k) {
        case EntryKind::curve: return "curve";
        case EntryKind::background: return "background";
        case EntryKind::fov: return "fov";
        case EntryKind::skeleton: return "skeleton";
        case EntryKind::inpaint_mask: return "inpaint_mask";
    }
    return "curve";
}

inline EntryKind entry_kind_from_string(const std::string& s) {
    for (auto k : {EntryKind::curve, EntryKind::background, EntryKind::fov, EntryKind::skeleton, EntryKind::inpaint_mask})
        if (s == to_string(k)) return k;
    throw ConfigError("unknown entry kind '" + s + "'");
}

struct BankEntry {
    std::string id;
    std::string path;  // relative to the bank directory
    EntryKind kind = EntryKind::curve;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::string preset;
    friend bool operator==(const BankEntry&, const BankEntry&) = default;
};

struct BankPair {
    std::string curve_id;
    std::string background_id;
    std::string pair_id;
    friend bool operator==(const BankPair&, const BankPair&) = default;
};

struct BankManifest {
    int version = kManifestVersion;
    std::string preset;
    std::vector<BankEntry> entries;
    std::vector<BankPair> pairs;
    friend bool operator==(const BankManifest&, const BankManifest&) = default;

    const BankEntry* find(const std::string& id) const {
        for (const auto& e : entries)
            if (e.id == id) return &e;
        return nullptr;
    }
};

inline Json to_json(const BankManifest& m) {
    Json j;
    j["version"] = m.version;
    j["preset"] = m.preset;
    Json entries = Json::array();
    for (const auto& e : m.entries) {
        Json je;
        je["id"] = e.id;
        je["path"] = e.path;
        je["kind"] = to_string(e.kind);
        je["seed"] = e.seed;
        je["config_hash"] = e.config_hash;
        je["preset"] = e.preset;
        entries.push_back(je);
    }
    j["entries"] = entries;
    Json pairs = Json::array();
    for (const auto& p : m.pairs)
        pairs.push_back(Json{{"curve_id", p.curve_id}, {"background_id", p.background_id}, {"pair_id", p.pair_id}});
    j["pairs"] = pairs;
    return j;
}

inline std::string serialize(const BankManifest& m) { return to_json(m).dump(2) + "\n"; }

inline BankManifest manifest_from_json(const Json& j) {
    using namespace json_detail;
    reject_unknown(j, {"version", "preset", "entries", "pairs"}, "manifest");
    require(j.contains("version") && j["version"].is_number_integer(), "manifest.version must be an integer");
    BankManifest m;
    m.version = j["version"].get<int>();
    require(m.version == kManifestVersion, "unsupported manifest version " + std::to_string(m.version));
    require(j.contains("preset") && j["preset"].is_string(), "manifest.preset must be a string");
    m.preset = j["preset"].get<std::string>();
    require(j.contains("entries") && j["entries"].is_array(), "manifest.entries must be an array");
    for (const auto& je : j["entries"]) {
        reject_unknown(je, {"id", "path", "kind", "seed", "config_hash", "preset"}, "manifest entry");
        BankEntry e;
        try {
            e.id = je.at("id").get<std::string>();
            e.path = je.at("path").get<std::string>();
            e.kind = entry_kind_from_string(je.at("kind").get<std::string>());
            e.seed = je.at("seed").get<std::uint64_t>();
            e.config_hash = je.at("config_hash").get<std::string>();
            e.preset = je.at("preset").get<std::string>();
        } catch (const nlohmann::json::exception& ex) {
            throw ConfigError(std::string("malformed manifest entry: ") + ex.what());
        }
        m.entries.push_back(std::move(e));
    }
    if (j.contains("pairs")) {
        require(j["pairs"].is_array(), "manifest.pairs must be an array");
        for (const auto& jp : j["pairs"]) {
            reject_unknown(jp, {"curve_id", "background_id", "pair_id"}, "manifest pair");
            try {
                m.pairs.push_back({jp.at("curve_id").get<std::string>(), jp.at("background_id").get<std::string>(),
                                   jp.at("pair_id").get<std::string>()});
            } catch (const nlohmann::json::exception& ex) {
                throw ConfigError(std::string("malformed manifest pair: ") + ex.what());
            }
        }
    }
    return m;
}

inline BankManifest parse_manifest(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("manifest is not valid JSON: ") + ex.what());
    }
    return manifest_from_json(j);
}

inline BankManifest load_manifest(const std::filesystem::path& bank_dir) {
    return parse_manifest(read_text_file(bank_dir / "manifest.json"));
}

inline void save_manifest(const std::filesystem::path& bank_dir, const BankManifest& m) {
    write_text_atomic(bank_dir / "manifest.json", serialize(m));
}

/// Problems found in a manifest; empty means valid. Checks id and pair-id
/// uniqueness, pair references, and (when `bank_dir` is given) file presence.
inline std::vector<std::string> validate_manifest(const BankManifest& m,
                                                  const std::optional<std::filesystem::path>& bank_dir = std::nullopt) {
    std::vector<std::string> problems;
    std::set<std::string> ids;
    for (const auto& e : m.entries) {
        if (!ids.insert(e.id).second) problems.push_back("duplicate entry id " + e.id);
        if (bank_dir && !std::filesystem::exists(*bank_dir / e.path))
            problems.push_back("missing file " + e.path + " for entry " + e.id);
    }
    std::set<std::string> pair_ids;
    for (const auto& p : m.pairs) {
        if (!pair_ids.insert(p.pair_id).second) problems.push_back("duplicate pair id " + p.pair_id);
        if (!ids.contains(p.curve_id)) problems.push_back("pair " + p.pair_id + " references missing " + p.curve_id);
        if (!ids.contains(p.background_id))
            problems.push_back("pair " + p.pair_id + " references missing " + p.background_id);
    }
    return problems;
}

inline std::string indexed_id(const char* prefix, std::size_t i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%04zu", prefix, i);
    return buf;
}

// ---------------------------------------------------------------------------
// Curve bank

/// Generates `count` curve masks with per-item seeds split_seed(master_seed, i)
/// and writes them with a manifest under `out_dir`.
inline BankManifest build_curve_bank(const Preset& preset, std::size_t count, std::uint64_t master_seed,
                                     const std::filesystem::path& out_dir, unsigned workers = worker_count()) {
    if (count < 1) throw ConfigError("bank count must be >= 1");
    validate(preset);
    const std::string hash = preset_digest(preset);
    BankManifest manifest;
    manifest.preset = preset.name;
    manifest.entries.resize(count);
    std::error_code ec;
    std::filesystem::create_directories(out_dir / "curves", ec);
    if (ec) throw IoError("cannot create " + (out_dir / "curves").string() + ": " + ec.message());
    parallel_for(count, workers, [&](std::size_t i) {
        const std::uint64_t seed = split_seed(master_seed, i);
        const CurveSample sample = generate_curve(preset, seed);
        const std::string id = indexed_id("curve", i);
        const std::string rel = "curves/" + id + ".png";
        save_png(out_dir / rel, sample.mask);
        manifest.entries[i] = BankEntry{id, rel, EntryKind::curve, seed, hash, preset.name};
    });
    save_manifest(out_dir, manifest);
    return manifest;
}

// ---------------------------------------------------------------------------
// Background bank

struct AugmentOptions {
    bool flip_horizontal = true;
    bool flip_vertical = true;
    /// Empty means "no rotation" (only the unrotated variants are produced).
    std::vector<double> rotations{0.0, 30.0, 60.0, 90.0};
};

struct BackgroundVariant {
    std::string id;
    GrayImage image;
};

inline std::string format_degrees(double deg) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", deg);
    return buf;
}

/// Every input under every requested rotation, each in its identity and
/// requested flipped forms: inputs x (1 + flips) x max(1, rotations) variants.
inline std::vector<BackgroundVariant> augment_backgrounds(const std::vector<std::pair<std::string, GrayImage>>& inputs,
                                                          const AugmentOptions& opts) {
    if (inputs.empty()) throw ConfigError("background augmentation needs at least one input");
    std::vector<double> rotations = opts.rotations;
    const bool rotate_any = !rotations.empty();
    if (!rotate_any) rotations.push_back(0.0);
    std::vector<BackgroundVariant> out;
    for (const auto& [stem, image] : inputs) {
        for (double deg : rotations) {
            const GrayImage base = rotate(image, deg);
            const std::string prefix = "bg_" + stem + (rotate_any ? "_r" + format_degrees(deg) : std::string());
            out.push_back({prefix, base});
            if (opts.flip_horizontal) out.push_back({prefix + "_h", flip(base, FlipAxis::horizontal)});
            if (opts.flip_vertical) out.push_back({prefix + "_v", flip(base, FlipAxis::vertical)});
        }
    }
    return out;
}

inline std::string augment_digest(const AugmentOptions& opts) {
    Json j;
    j["flip_horizontal"] = opts.flip_horizontal;
    j["flip_vertical"] = opts.flip_vertical;
    j["rotations"] = opts.rotations;
    return fnv1a_hex(j.dump());
}

inline BankManifest write_background_bank(const std::vector<BackgroundVariant>& variants, const AugmentOptions& opts,
                                          const std::filesystem::path& out_dir) {
    BankManifest manifest;
    manifest.preset = "backgrounds";
    const std::string hash = augment_digest(opts);
    for (const auto& v : variants) {
        const std::string rel = "backgrounds/" + v.id + ".png";
        save_png(out_dir / rel, v.image);
        manifest.entries.push_back({v.id, rel, EntryKind::background, 0, hash, manifest.preset});
    }
    if (const auto problems = validate_manifest(manifest); !problems.empty())
        throw ConfigError("background bank: " + problems.front());
    save_manifest(out_dir, manifest);
    return manifest;
}

// ---------------------------------------------------------------------------
// Pairing

/// Draws `count` (curve, background) pairs uniformly with replacement. The
/// result holds the curve entries, then the background entries, then the pairs.
inline BankManifest assemble_pairs(const BankManifest& curves, const BankManifest& backgrounds, std::size_t count,
                                   std::uint64_t seed) {
    std::vector<const BankEntry*> curve_pool, background_pool;
    for (const auto& e : curves.entries)
        if (e.kind == EntryKind::curve) curve_pool.push_back(&e);
    for (const auto& e : backgrounds.entries)
        if (e.kind == EntryKind::background) background_pool.push_back(&e);
    if (curve_pool.empty()) throw PairingError("curve bank is empty");
    if (background_pool.empty()) throw PairingError("background bank is empty");

    BankManifest out;
    out.preset = curves.preset;
    for (const auto* e : curve_pool) out.entries.push_back(*e);
    for (const auto* e : background_pool) out.entries.push_back(*e);
    Rng rng(seed, Stream::pairs);
    for (std::size_t i = 0; i < count; ++i) {
        const auto c = rng.uniform_int(0, static_cast<std::int64_t>(curve_pool.size()) - 1);
        const auto b = rng.uniform_int(0, static_cast<std::int64_t>(background_pool.size()) - 1);
        out.pairs.push_back({curve_pool[c]->id, background_pool[b]->id, indexed_id("pair", i)});
    }
    if (const auto problems = validate_manifest(out); !problems.empty())
        throw PairingError("assembled manifest is inconsistent: " + problems.front());
    return out;
}

/// Background with curve pixels shifted by `offset`, clamped to [0, 255].
/// A stand-in for visual checks of a pair.
inline GrayImage preview_composite(const GrayImage& background, const Mask& curve, int offset) {
    require_same_dims(background, curve, "preview_composite");
    if (offset < -255 || offset > 255) throw std::invalid_argument("intensity offset must lie in [-255, 255]");
    GrayImage out = background;
    for (std::size_t i = 0; i < out.size(); ++i)
        if (curve.data()[i]) out.data()[i] = static_cast<std::uint8_t>(std::clamp(out.data()[i] + offset, 0, 255));
    return out;
}

// ---------------------------------------------------------------------------
// Intensity histograms

struct Histogram256 {
    std::array<std::uint64_t, 256> bins{};
    std::uint64_t total = 0;

    void add(const GrayImage& img) {
        for (std::uint8_t v : img.data()) ++bins[v];
        total += img.size();
    }
};

inline Histogram256 histogram(std::span<const GrayImage> images) {
    Histogram256 h;
    for (const auto& img : images) h.add(img);
    return h;
}

/// L1 distance between normalized histograms, in [0, 2].
inline double histogram_l1(const Histogram256& a, const Histogram256& b) {
    if (a.total == 0 || b.total == 0) throw UndefinedMetric("histogram_l1: empty histogram");
    double d = 0.0;
    for (std::size_t i = 0; i < 256; ++i)
        d += std::abs(static_cast<double>(a.bins[i]) / static_cast<double>(a.total) -
                      static_cast<double>(b.bins[i]) / static_cast<double>(b.total));
    return d;
}

}  // namespace curvforge
