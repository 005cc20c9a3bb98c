#pragma once

// Command-line front end. Exit codes: 0 success, 2 invalid arguments or
// configuration, 3 I/O failure, 4 pairing mismatch.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "curvforge/bank.hpp"
#include "curvforge/maskgen.hpp"
#include "curvforge/report.hpp"

namespace curvforge::cli {

namespace fs = std::filesystem;

enum ExitCode { kOk = 0, kInvalid = 2, kIo = 3, kPairing = 4 };

/// PNG files directly inside `dir`, sorted by file name.
inline std::vector<fs::path> list_pngs(const fs::path& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir, ec))
        if (e.is_regular_file() && e.path().extension() == ".png") out.push_back(e.path());
    if (ec) throw IoError("cannot list " + dir.string() + ": " + ec.message());
    std::sort(out.begin(), out.end(), [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
    return out;
}

inline std::vector<std::uint8_t> read_bytes(const fs::path& path) {
    const std::string text = read_text_file(path);
    return {text.begin(), text.end()};
}

/// The bank's manifest if present, otherwise every PNG in the directory as an
/// entry of `kind` with id = file stem.
inline BankManifest load_or_scan(const fs::path& dir, EntryKind kind) {
    if (fs::exists(dir / "manifest.json")) return load_manifest(dir);
    BankManifest m;
    m.preset = "external";
    for (const auto& p : list_pngs(dir))
        m.entries.push_back({p.stem().string(), p.filename().string(), kind, 0, "", m.preset});
    return m;
}

inline std::vector<double> parse_rotations(const std::string& text) {
    std::vector<double> out;
    if (text.empty() || text == "none") return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw ConfigError("bad rotation '" + item + "'");
        }
        if (used != item.size()) throw ConfigError("bad rotation '" + item + "'");
        if (!(v >= 0.0 && v <= 90.0)) throw ConfigError("rotation " + item + " outside [0, 90]");
        out.push_back(v);
    }
    return out;
}

inline Mask load_input_mask(const fs::path& path) {
    try {
        return load_mask_png(path);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
}

inline Preset resolve_preset(const std::string& name, const std::string& config_path) {
    if (!config_path.empty()) {
        Json j;
        try {
            j = Json::parse(read_text_file(config_path));
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(config_path + ": " + e.what());
        } catch (const IoError& e) {
            throw ConfigError(e.what());
        }
        return preset_from_json(j);
    }
    auto p = built_in_preset(name);
    if (!p) throw ConfigError("unknown preset '" + name + "'");
    return *p;
}

struct Options {
    std::string preset, config, in, out, curves, backgrounds, pred, gt, report, a, b, rotations = "0,30,60,90",
                                                                                       flips = "both", show_name;
    std::size_t count = 1;
    std::uint64_t seed = 0;
    double alpha = 8.0, sigma = 4.0;
    std::optional<int> radius;
    int rects = 0, chains = 0;
};

inline int cmd_gen(const Options& o, std::ostream& out, std::ostream& err) {
    const Preset preset = resolve_preset(o.preset, o.config);
    for (const auto& w : validate(preset)) err << "warning: " << w << "\n";
    build_curve_bank(preset, o.count, o.seed, o.out);
    out << (fs::path(o.out) / "manifest.json").string() << "\n";
    return kOk;
}

inline int cmd_noisy_skel(const Options& o, std::ostream&, std::ostream&) {
    const Mask m = load_input_mask(o.in);
    save_png(o.out, elastic_transform(skeletonize(m), ElasticParams{o.alpha, o.sigma, o.seed}));
    return kOk;
}

inline int cmd_inpaint_mask(const Options& o, std::ostream&, std::ostream&) {
    if (o.rects < 0 || o.chains < 0) throw ConfigError("--rects and --chains must be >= 0");
    const Mask skel = load_input_mask(o.in);
    const int radius = o.radius ? *o.radius : default_inpaint_radius(skel.width(), skel.height());
    Mask m = inpaint_mask_from_skeleton(skel, radius);
    if (o.rects > 0) {
        auto p = RectMaskParams::defaults_for(skel.width(), skel.height(), split_seed(o.seed, 0));
        p.count = {o.rects, o.rects};
        m = mask_or(m, random_rect_mask(skel.width(), skel.height(), p));
    }
    if (o.chains > 0) {
        ChainMaskParams p;
        p.chains = {o.chains, o.chains};
        p.seed = split_seed(o.seed, 1);
        m = mask_or(m, random_chain_mask(skel.width(), skel.height(), p));
    }
    save_png(o.out, m);
    return kOk;
}

inline int cmd_assemble(const Options& o, std::ostream& out, std::ostream&) {
    const fs::path curve_dir = o.curves, bg_dir = o.backgrounds, out_dir = o.out;
    const BankManifest curves = load_or_scan(curve_dir, EntryKind::curve);
    const BankManifest backgrounds = load_or_scan(bg_dir, EntryKind::background);
    BankManifest assembled = assemble_pairs(curves, backgrounds, o.count, o.seed);
    for (auto& e : assembled.entries) {
        const bool is_curve = e.kind == EntryKind::curve;
        const fs::path src = (is_curve ? curve_dir : bg_dir) / e.path;
        const std::string rel = std::string(is_curve ? "curves/" : "backgrounds/") + fs::path(e.path).filename().string();
        write_file_atomic(out_dir / rel, read_bytes(src));
        e.path = rel;
    }
    if (const auto problems = validate_manifest(assembled, out_dir); !problems.empty())
        throw PairingError(problems.front());
    save_manifest(out_dir, assembled);
    out << (out_dir / "manifest.json").string() << "\n";
    return kOk;
}

inline int cmd_augment_bg(const Options& o, std::ostream& out, std::ostream&) {
    AugmentOptions opts;
    opts.rotations = parse_rotations(o.rotations);
    if (o.flips == "both") {
    } else if (o.flips == "h") {
        opts.flip_vertical = false;
    } else if (o.flips == "v") {
        opts.flip_horizontal = false;
    } else if (o.flips == "none") {
        opts.flip_horizontal = opts.flip_vertical = false;
    } else {
        throw ConfigError("--flips must be one of both, h, v, none");
    }
    std::vector<std::pair<std::string, GrayImage>> inputs;
    for (const auto& p : list_pngs(o.in)) inputs.emplace_back(p.stem().string(), load_gray_png(p));
    write_background_bank(augment_backgrounds(inputs, opts), opts, o.out);
    out << (fs::path(o.out) / "manifest.json").string() << "\n";
    return kOk;
}

inline int cmd_eval(const Options& o, std::ostream& out, std::ostream&) {
    std::map<std::string, fs::path> preds, gts;
    for (const auto& p : list_pngs(o.pred)) preds[p.stem().string()] = p;
    for (const auto& p : list_pngs(o.gt)) gts[p.stem().string()] = p;
    std::vector<std::string> unmatched;
    for (const auto& [stem, _] : preds)
        if (!gts.contains(stem)) unmatched.push_back(stem + " (prediction only)");
    for (const auto& [stem, _] : gts)
        if (!preds.contains(stem)) unmatched.push_back(stem + " (ground truth only)");
    if (!unmatched.empty()) throw PairingError("unmatched stems: " + unmatched.front());
    if (preds.empty()) throw PairingError("no images to evaluate");

    std::vector<std::string> stems;
    for (const auto& [stem, _] : preds) stems.push_back(stem);
    std::vector<ImageScores> scores(stems.size());
    parallel_for(stems.size(), worker_count(), [&](std::size_t i) {
        scores[i] = score_pair(stems[i], load_mask_png(preds.at(stems[i])), load_mask_png(gts.at(stems[i])));
    });
    const Json report = report_json(scores);
    write_text_atomic(o.report, report.dump(2) + "\n");
    auto fmt = [](const Json& v) {
        if (v.is_null()) return std::string("n/a");
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v.get<double>());
        return std::string(buf);
    };
    for (const char* key : {"dsc", "assd", "se", "sp", "cldice"})
        out << key << " " << fmt(report["mean"][key]) << " +- " << fmt(report["std"][key]) << "\n";
    return kOk;
}

inline Histogram256 dir_histogram(const fs::path& dir) {
    Histogram256 h;
    for (const auto& p : list_pngs(dir)) h.add(load_gray_png(p));
    return h;
}

inline int cmd_hist(const Options& o, std::ostream& out, std::ostream&) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", histogram_l1(dir_histogram(o.a), dir_histogram(o.b)));
    out << buf << "\n";
    return kOk;
}

inline int cmd_preset_show(const Options& o, std::ostream& out, std::ostream&) {
    const auto p = built_in_preset(o.show_name);
    if (!p) throw ConfigError("unknown preset '" + o.show_name + "'");
    out << to_json(*p).dump(2) << "\n";
    return kOk;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    Options o;
    CLI::App app{"Synthetic curvilinear structure generator"};
    app.name("curvforge");
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "Grow and render a curve bank");
    auto* preset_opt = gen->add_option("--preset", o.preset, "Built-in preset name");
    auto* config_opt = gen->add_option("--config", o.config, "Preset JSON file");
    preset_opt->excludes(config_opt);
    gen->add_option("--count", o.count, "Number of curves")->required();
    gen->add_option("--seed", o.seed, "Master seed");
    gen->add_option("--out", o.out, "Bank directory")->required();

    auto* skel = app.add_subcommand("noisy-skel", "Skeletonize a mask and jitter it elastically");
    skel->add_option("--in", o.in, "Input mask PNG")->required();
    skel->add_option("--alpha", o.alpha, "Displacement scale");
    skel->add_option("--sigma", o.sigma, "Displacement smoothing");
    skel->add_option("--seed", o.seed, "Seed");
    skel->add_option("--out", o.out, "Output PNG")->required();

    auto* inpaint = app.add_subcommand("inpaint-mask", "Dilate a skeleton and add random free-form masks");
    inpaint->add_option("--in", o.in, "Input skeleton PNG")->required();
    inpaint->add_option("--radius", o.radius, "Dilation radius (default scales with the image)");
    inpaint->add_option("--rects", o.rects, "Number of rectangles");
    inpaint->add_option("--chains", o.chains, "Number of stroke chains");
    inpaint->add_option("--seed", o.seed, "Seed");
    inpaint->add_option("--out", o.out, "Output PNG")->required();

    auto* assemble = app.add_subcommand("assemble", "Pair curves with backgrounds");
    assemble->add_option("--curves", o.curves, "Curve bank directory")->required();
    assemble->add_option("--backgrounds", o.backgrounds, "Background bank or PNG directory")->required();
    assemble->add_option("--count", o.count, "Number of pairs")->required();
    assemble->add_option("--seed", o.seed, "Seed");
    assemble->add_option("--out", o.out, "Output directory")->required();

    auto* augment = app.add_subcommand("augment-bg", "Build a background bank with flips and rotations");
    augment->add_option("--in", o.in, "Directory of background PNGs")->required();
    augment->add_option("--rotations", o.rotations, "Comma-separated degrees in [0, 90], or none");
    augment->add_option("--flips", o.flips, "both, h, v or none");
    augment->add_option("--out", o.out, "Bank directory")->required();

    auto* eval = app.add_subcommand("eval", "Score predictions against ground truth");
    eval->add_option("--pred", o.pred, "Prediction mask directory")->required();
    eval->add_option("--gt", o.gt, "Ground-truth mask directory")->required();
    eval->add_option("--report", o.report, "Report JSON path")->required();

    auto* hist = app.add_subcommand("hist", "L1 distance between intensity histograms");
    hist->add_option("--a", o.a, "First PNG directory")->required();
    hist->add_option("--b", o.b, "Second PNG directory")->required();

    auto* preset = app.add_subcommand("preset", "Inspect built-in presets");
    preset->require_subcommand(1);
    auto* show = preset->add_subcommand("show", "Print a built-in preset as JSON");
    show->add_option("name", o.show_name, "Preset name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kOk;
        }
        err << "error: " << e.what() << "\n";
        const CLI::App* failing = &app;
        while (!failing->get_subcommands().empty()) failing = failing->get_subcommands().front();
        err << failing->help();
        return kInvalid;
    }
    if (gen->parsed() && o.preset.empty() == o.config.empty()) {
        err << "error: gen needs exactly one of --preset or --config\n" << gen->help();
        return kInvalid;
    }

    try {
        if (gen->parsed()) return cmd_gen(o, out, err);
        if (skel->parsed()) return cmd_noisy_skel(o, out, err);
        if (inpaint->parsed()) return cmd_inpaint_mask(o, out, err);
        if (assemble->parsed()) return cmd_assemble(o, out, err);
        if (augment->parsed()) return cmd_augment_bg(o, out, err);
        if (eval->parsed()) return cmd_eval(o, out, err);
        if (hist->parsed()) return cmd_hist(o, out, err);
        if (show->parsed()) return cmd_preset_show(o, out, err);
    } catch (const PairingError& e) {
        err << "error: " << e.what() << "\n";
        return kPairing;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIo;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInvalid;
    }
    return kInvalid;
}

}  // namespace curvforge::cli
