#pragma once

// Batch evaluation report. Overlap scores are stored as fractions and printed
// as percentages with two decimals; ASSD is in pixels, null when undefined.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "curvforge/config_json.hpp"
#include "curvforge/metrics.hpp"

namespace curvforge {

struct ImageScores {
    std::string id;
    double dsc = 0.0;
    std::optional<double> assd;
    double se = 0.0;
    double sp = 0.0;
    double cldice = 0.0;
};

inline ImageScores score_pair(const std::string& id, const Mask& pred, const Mask& gt) {
    ImageScores s;
    s.id = id;
    const auto c = confusion(pred, gt);
    s.dsc = dsc(c);
    s.se = sensitivity(c);
    s.sp = specificity(c);
    s.cldice = cldice(pred, gt);
    try {
        s.assd = assd(pred, gt);
    } catch (const UndefinedMetric&) {
        s.assd.reset();
    }
    return s;
}

inline double round2(double v) {
    const double r = std::round(v * 100.0) / 100.0;
    return r == 0.0 ? 0.0 : r;  // no "-0.0"
}

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
    std::size_t n = 0;
};

/// Population mean and standard deviation.
inline MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd out;
    out.n = xs.size();
    if (xs.empty()) return out;
    for (double x : xs) out.mean += x;
    out.mean /= static_cast<double>(xs.size());
    for (double x : xs) out.std += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(out.std / static_cast<double>(xs.size()));
    return out;
}

inline Json report_json(const std::vector<ImageScores>& scores) {
    Json images = Json::array();
    std::vector<double> dscs, assds, ses, sps, cls;
    for (const auto& s : scores) {
        Json j;
        j["id"] = s.id;
        j["dsc"] = round2(100.0 * s.dsc);
        j["assd"] = s.assd ? Json(round2(*s.assd)) : Json(nullptr);
        j["se"] = round2(100.0 * s.se);
        j["sp"] = round2(100.0 * s.sp);
        j["cldice"] = round2(100.0 * s.cldice);
        images.push_back(j);
        dscs.push_back(100.0 * s.dsc);
        if (s.assd) assds.push_back(*s.assd);
        ses.push_back(100.0 * s.se);
        sps.push_back(100.0 * s.sp);
        cls.push_back(100.0 * s.cldice);
    }
    Json mean, stdev;
    auto put = [&](const char* key, const std::vector<double>& xs) {
        if (xs.empty()) {
            mean[key] = nullptr;
            stdev[key] = nullptr;
            return;
        }
        const auto ms = mean_std(xs);
        mean[key] = round2(ms.mean);
        stdev[key] = round2(ms.std);
    };
    put("dsc", dscs);
    put("assd", assds);
    put("se", ses);
    put("sp", sps);
    put("cldice", cls);
    Json out;
    out["images"] = images;
    out["mean"] = mean;
    out["std"] = stdev;
    out["count"] = scores.size();
    return out;
}

}  // namespace curvforge
