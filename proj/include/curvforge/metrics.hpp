#pragma once

// Overlap and surface metrics for binary segmentations, plus the loss kernels
// (cross-entropy, soft Dice, InfoNCE) as plain numeric functions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "curvforge/image.hpp"
#include "curvforge/raster.hpp"

namespace curvforge {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

inline ConfusionCounts confusion(const Mask& pred, const Mask& gt) {
    require_same_dims(pred, gt, "confusion");
    ConfusionCounts c;
    const auto p = pred.data();
    const auto g = gt.data();
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] && g[i]) ++c.tp;
        else if (p[i]) ++c.fp;
        else if (g[i]) ++c.fn;
        else ++c.tn;
    }
    return c;
}

// Zero denominators (empty pred and gt for DSC; no positives/negatives for
// SE/SP) score 1.
inline double dsc(const ConfusionCounts& c) {
    const auto denom = 2 * c.tp + c.fp + c.fn;
    return denom == 0 ? 1.0 : 2.0 * static_cast<double>(c.tp) / static_cast<double>(denom);
}

inline double sensitivity(const ConfusionCounts& c) {
    const auto denom = c.tp + c.fn;
    return denom == 0 ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(denom);
}

inline double specificity(const ConfusionCounts& c) {
    const auto denom = c.tn + c.fp;
    return denom == 0 ? 1.0 : static_cast<double>(c.tn) / static_cast<double>(denom);
}

namespace edt_detail {

// Lower envelope of parabolas (Felzenszwalb & Huttenlocher) on one line of
// squared distances, in place.
inline void transform_line(std::span<double> f, std::vector<int>& v, std::vector<double>& z, std::vector<double>& d) {
    const int n = static_cast<int>(f.size());
    constexpr double inf = std::numeric_limits<double>::infinity();
    v.assign(n, 0);
    z.assign(n + 1, 0.0);
    d.assign(n, 0.0);
    auto meet = [&](int q, int p) {
        return ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
    };
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (f[q] == inf) continue;  // never a minimiser
        if (k < 0) {
            k = 0;
            v[0] = q;
            z[0] = -inf;
            z[1] = inf;
            continue;
        }
        double s = meet(q, v[k]);
        while (s <= z[k]) {
            --k;
            s = meet(q, v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = inf;
    }
    if (k < 0) return;
    int j = 0;
    for (int q = 0; q < n; ++q) {
        while (z[j + 1] < q) ++j;
        const double dq = q - v[j];
        d[q] = dq * dq + f[v[j]];
    }
    std::copy(d.begin(), d.end(), f.begin());
}

}  // namespace edt_detail

/// Exact Euclidean distance from every pixel to the nearest foreground pixel
/// (separable two-pass squared EDT).
inline RealGrid distance_transform(const Mask& m) {
    if (count_foreground(m) == 0) throw UndefinedMetric("distance_transform: mask has no foreground");
    const int w = m.width(), h = m.height();
    constexpr double inf = std::numeric_limits<double>::infinity();
    RealGrid sq(w, h);
    for (std::size_t i = 0; i < m.size(); ++i) sq.data()[i] = m.data()[i] ? 0.0 : inf;

    std::vector<int> v;
    std::vector<double> z, d, line(std::max(w, h));
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) line[y] = sq(x, y);
        edt_detail::transform_line(std::span(line.data(), h), v, z, d);
        for (int y = 0; y < h; ++y) sq(x, y) = line[y];
    }
    for (int y = 0; y < h; ++y) {
        auto row = sq.data().subspan(sq.index(0, y), static_cast<std::size_t>(w));
        edt_detail::transform_line(row, v, z, d);
    }
    for (double& val : sq.data()) val = std::sqrt(val);
    return sq;
}

/// Foreground pixels with at least one 4-neighbour in the background (the
/// canvas edge counts as background).
inline Mask surface(const Mask& m) {
    Mask s(m.width(), m.height());
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x)
            if (m(x, y) && (!m.at_or(x - 1, y, 0) || !m.at_or(x + 1, y, 0) || !m.at_or(x, y - 1, 0) ||
                            !m.at_or(x, y + 1, 0)))
                s(x, y) = 1;
    return s;
}

/// Average symmetric surface distance in pixels.
inline double assd(const Mask& pred, const Mask& gt) {
    require_same_dims(pred, gt, "assd");
    if (count_foreground(pred) == 0 || count_foreground(gt) == 0)
        throw UndefinedMetric("assd: prediction and ground truth must both be non-empty");
    const Mask sp = surface(pred), sg = surface(gt);
    const RealGrid to_gt = distance_transform(sg), to_pred = distance_transform(sp);
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < sp.size(); ++i) {
        if (sp.data()[i]) {
            sum += to_gt.data()[i];
            ++n;
        }
        if (sg.data()[i]) {
            sum += to_pred.data()[i];
            ++n;
        }
    }
    return sum / static_cast<double>(n);
}

/// Centerline Dice on binary masks using the Zhang-Suen skeleton. 0 when
/// either skeleton is empty.
inline double cldice(const Mask& pred, const Mask& gt) {
    require_same_dims(pred, gt, "cldice");
    const Mask skel_pred = skeletonize(pred), skel_gt = skeletonize(gt);
    const auto np = count_foreground(skel_pred), ng = count_foreground(skel_gt);
    if (np == 0 || ng == 0) return 0.0;
    const double tprec = static_cast<double>(count_foreground(mask_and(skel_pred, gt))) / static_cast<double>(np);
    const double tsens = static_cast<double>(count_foreground(mask_and(skel_gt, pred))) / static_cast<double>(ng);
    if (tprec + tsens == 0.0) return 0.0;
    return 2.0 * tprec * tsens / (tprec + tsens);
}

// ---------------------------------------------------------------------------
// Losses

/// Per-pixel foreground probabilities in [0, 1].
using ProbMap = RealGrid;

inline constexpr double kProbClamp = 1e-7;
inline constexpr double kDiceSmooth = 1.0;

struct LossAndGrad {
    double loss = 0.0;
    RealGrid grad;
};

namespace loss_detail {

inline void check(const ProbMap& probs, const Mask& gt, const char* what) {
    require_same_dims(probs, gt, what);
    for (double p : probs.data())
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + ": probability outside [0, 1]");
}

inline double clamp_prob(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

}  // namespace loss_detail

/// Mean binary cross-entropy and its gradient with respect to each
/// probability, evaluated at the clamped value.
inline LossAndGrad ce_loss_grad(const ProbMap& probs, const Mask& gt) {
    loss_detail::check(probs, gt, "ce_loss_grad");
    const double n = static_cast<double>(probs.size());
    LossAndGrad out{0.0, RealGrid(probs.width(), probs.height())};
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double p = loss_detail::clamp_prob(probs.data()[i]);
        const double g = gt.data()[i];
        out.loss -= g * std::log(p) + (1.0 - g) * std::log(1.0 - p);
        out.grad.data()[i] = -(g / p - (1.0 - g) / (1.0 - p)) / n;
    }
    out.loss /= n;
    return out;
}

/// Soft Dice loss 1 - (2*sum(p*g) + s) / (sum(p) + sum(g) + s), s = 1.
inline LossAndGrad dice_loss_grad(const ProbMap& probs, const Mask& gt) {
    loss_detail::check(probs, gt, "dice_loss_grad");
    double inter = 0.0, psum = 0.0, gsum = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double p = loss_detail::clamp_prob(probs.data()[i]);
        const double g = gt.data()[i];
        inter += p * g;
        psum += p;
        gsum += g;
    }
    const double num = 2.0 * inter + kDiceSmooth;
    const double den = psum + gsum + kDiceSmooth;
    LossAndGrad out{1.0 - num / den, RealGrid(probs.width(), probs.height())};
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double g = gt.data()[i];
        out.grad.data()[i] = -(2.0 * g * den - num) / (den * den);
    }
    return out;
}

/// 0.5 * CE + 0.5 * soft Dice.
inline LossAndGrad seg_loss(const ProbMap& probs, const Mask& gt) {
    auto ce = ce_loss_grad(probs, gt);
    const auto dice = dice_loss_grad(probs, gt);
    ce.loss = 0.5 * ce.loss + 0.5 * dice.loss;
    for (std::size_t i = 0; i < ce.grad.size(); ++i)
        ce.grad.data()[i] = 0.5 * ce.grad.data()[i] + 0.5 * dice.grad.data()[i];
    return ce;
}

/// Supervised loss plus the weighted pseudo-label term.
inline double final_loss(double seg, double psd, double lambda_psd) { return seg + lambda_psd * psd; }

using FeatureVec = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Contrastive softmax cross-entropy of one anchor against its positive and N
/// negatives at temperature tau. Negative logits are summed in sorted order, so
/// the result does not depend on the order of `negatives`.
inline double info_nce(std::span<const double> v, std::span<const double> v_plus, std::span<const FeatureVec> negatives,
                       double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("info_nce: tau must be > 0");
    if (negatives.empty()) throw std::invalid_argument("info_nce: at least one negative is required");
    if (v.size() != v_plus.size()) throw DimensionMismatch("info_nce: positive has a different length");
    const double pos = dot(v, v_plus) / tau;
    std::vector<double> neg;
    neg.reserve(negatives.size());
    for (const auto& n : negatives) {
        if (n.size() != v.size()) throw DimensionMismatch("info_nce: negative has a different length");
        neg.push_back(dot(v, n) / tau);
    }
    std::sort(neg.begin(), neg.end());
    const double neg_max = neg.back();
    if (pos >= neg_max) {
        double tail = 0.0;
        for (double l : neg) tail += std::exp(l - pos);
        return std::log1p(tail);
    }
    double total = std::exp(pos - neg_max);
    for (double l : neg) total += std::exp(l - neg_max);
    return std::log(total) + neg_max - pos;
}

}  // namespace curvforge
