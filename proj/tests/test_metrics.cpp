#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "curvforge/metrics.hpp"
#include "support.hpp"

using namespace curvforge;
using testing_support::random_mask;

namespace {

Mask from_bits(int w, int h, std::initializer_list<int> bits) {
    Mask m(w, h);
    std::size_t i = 0;
    for (int b : bits) m.data()[i++] = static_cast<std::uint8_t>(b);
    return m;
}

std::vector<std::pair<int, int>> brute_surface(const Mask& m) {
    std::vector<std::pair<int, int>> s;
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x) {
            if (!m(x, y)) continue;
            const int nb[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
            bool border = false;
            for (auto& n : nb) border = border || !m.in_bounds(n[0], n[1]) || !m(n[0], n[1]);
            if (border) s.emplace_back(x, y);
        }
    return s;
}

double brute_assd(const Mask& a, const Mask& b) {
    const auto sa = brute_surface(a), sb = brute_surface(b);
    auto min_to = [](std::pair<int, int> p, const std::vector<std::pair<int, int>>& set) {
        double best = std::numeric_limits<double>::infinity();
        for (auto q : set) best = std::min(best, std::hypot(p.first - q.first, p.second - q.second));
        return best;
    };
    double sum = 0;
    for (auto p : sa) sum += min_to(p, sb);
    for (auto p : sb) sum += min_to(p, sa);
    return sum / double(sa.size() + sb.size());
}

ProbMap random_probs(int w, int h, Rng& rng) {
    ProbMap p(w, h);
    for (auto& v : p.data()) v = rng.uniform(0.05, 0.95);
    return p;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-8}); }

}  // namespace

TEST(Confusion, HandCounted) {
    const Mask pred = from_bits(4, 1, {1, 1, 0, 0}), gt = from_bits(4, 1, {1, 0, 1, 0});
    const auto c = confusion(pred, gt);
    EXPECT_EQ(c, (ConfusionCounts{1, 1, 1, 1}));
    EXPECT_DOUBLE_EQ(dsc(c), 0.5);
    EXPECT_DOUBLE_EQ(sensitivity(c), 0.5);
    EXPECT_DOUBLE_EQ(specificity(c), 0.5);
}

TEST(Confusion, IdentityDisjointAndEmpty) {
    const Mask m = from_bits(3, 1, {1, 0, 1});
    const auto same = confusion(m, m);
    EXPECT_EQ(dsc(same), 1.0);
    EXPECT_EQ(sensitivity(same), 1.0);
    EXPECT_EQ(specificity(same), 1.0);
    EXPECT_EQ(dsc(confusion(m, from_bits(3, 1, {0, 1, 0}))), 0.0);
    const auto empty = confusion(Mask(3, 3), Mask(3, 3));
    EXPECT_EQ(dsc(empty), 1.0);
    EXPECT_EQ(sensitivity(empty), 1.0);
    EXPECT_THROW(confusion(Mask(3, 3), Mask(3, 4)), DimensionMismatch);
}

TEST(Confusion, MatchesPixelCountingOnRandomPairs) {
    Rng rng(1);
    for (int trial = 0; trial < 100; ++trial) {
        const Mask a = random_mask(32, 32, rng.uniform(0.05, 0.6), rng), b = random_mask(32, 32, rng.uniform(0.05, 0.6), rng);
        std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
        for (int y = 0; y < 32; ++y)
            for (int x = 0; x < 32; ++x) {
                tp += a(x, y) && b(x, y);
                fp += a(x, y) && !b(x, y);
                fn += !a(x, y) && b(x, y);
                tn += !a(x, y) && !b(x, y);
            }
        const auto c = confusion(a, b);
        EXPECT_EQ(c, (ConfusionCounts{tp, fp, tn, fn}));
        EXPECT_EQ(dsc(c), 2.0 * tp / double(2 * tp + fp + fn));
        EXPECT_EQ(sensitivity(c), tp / double(tp + fn));
        EXPECT_EQ(specificity(c), tn / double(tn + fp));
        EXPECT_EQ(dsc(c), dsc(confusion(b, a)));
    }
}

TEST(DistanceTransform, Examples) {
    Mask m(5, 5);
    m(2, 2) = 1;
    const auto d = distance_transform(m);
    EXPECT_EQ(d(2, 2), 0.0);
    EXPECT_DOUBLE_EQ(d(3, 3), std::sqrt(2.0));
    EXPECT_DOUBLE_EQ(d(0, 2), 2.0);
    EXPECT_THROW(distance_transform(Mask(4, 4)), UndefinedMetric);
}

TEST(DistanceTransform, MatchesAllPairsBruteForce) {
    Rng rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        const Mask m = random_mask(32, 32, rng.uniform(0.002, 0.2), rng);
        if (count_foreground(m) == 0) continue;
        const auto d = distance_transform(m);
        for (int y = 0; y < 32; ++y)
            for (int x = 0; x < 32; ++x) {
                double best = std::numeric_limits<double>::infinity();
                for (int v = 0; v < 32; ++v)
                    for (int u = 0; u < 32; ++u)
                        if (m(u, v)) best = std::min(best, std::hypot(x - u, y - v));
                ASSERT_NEAR(d(x, y), best, 1e-9);
            }
    }
}

TEST(Assd, Examples) {
    Mask a(8, 3), b(8, 3);
    a(1, 1) = 1;
    b(4, 1) = 1;
    EXPECT_DOUBLE_EQ(assd(a, b), 3.0);
    EXPECT_EQ(assd(a, a), 0.0);
    EXPECT_THROW(assd(a, Mask(8, 3)), UndefinedMetric);
    EXPECT_THROW(assd(Mask(8, 3), a), UndefinedMetric);
}

TEST(Assd, SurfaceCountsCanvasEdgeAsBackground) {
    const Mask full(4, 4, 1);
    const Mask s = surface(full);
    EXPECT_EQ(count_foreground(s), 12u);
    EXPECT_EQ(s(1, 1), 0);
}

TEST(Assd, MatchesAllPairsBruteForceAndIsSymmetric) {
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const Mask a = random_mask(32, 32, rng.uniform(0.01, 0.5), rng), b = random_mask(32, 32, rng.uniform(0.01, 0.5), rng);
        if (!count_foreground(a) || !count_foreground(b)) continue;
        const double v = assd(a, b);
        EXPECT_NEAR(v, brute_assd(a, b), 1e-9);
        EXPECT_NEAR(v, assd(b, a), 1e-12);
        EXPECT_GE(v, 0.0);
    }
}

TEST(ClDice, IdentityIsOne) {
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const Mask m = testing_support::blob_mask(32, 32, 4, rng);
        EXPECT_DOUBLE_EQ(cldice(m, m), 1.0);
    }
}

TEST(ClDice, CrossingLinesHandComputed) {
    // Each 12-pixel line is its own skeleton; they share only (8, 8).
    Mask pred(16, 16), gt(16, 16);
    for (int i = 2; i <= 13; ++i) {
        pred(i, 8) = 1;
        gt(8, i) = 1;
    }
    EXPECT_EQ(skeletonize(pred), pred);
    EXPECT_EQ(skeletonize(gt), gt);
    const double tprec = 1.0 / 12, tsens = 1.0 / 12;
    EXPECT_DOUBLE_EQ(cldice(pred, gt), 2 * tprec * tsens / (tprec + tsens));
}

TEST(ClDice, ZeroTopologySensitivityGivesZero) {
    Mask gt(16, 16), pred(16, 16);
    for (int y = 4; y <= 12; ++y)
        for (int x = 2; x <= 13; ++x) gt(x, y) = 1;
    for (int x = 3; x <= 12; ++x) pred(x, 5) = 1;
    ASSERT_TRUE(is_subset(skeletonize(pred), gt));
    ASSERT_EQ(count_foreground(mask_and(skeletonize(gt), pred)), 0u);
    EXPECT_EQ(cldice(pred, gt), 0.0);
    EXPECT_EQ(cldice(Mask(16, 16), gt), 0.0);
}

TEST(ClDice, RangeAndMismatch) {
    Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const Mask a = random_mask(32, 32, 0.3, rng), b = random_mask(32, 32, 0.3, rng);
        const double v = cldice(a, b);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
    }
    EXPECT_THROW(cldice(Mask(3, 3), Mask(2, 3)), DimensionMismatch);
}

TEST(Losses, PerfectPredictionNearZero) {
    const Mask gt = from_bits(2, 2, {1, 1, 0, 0});
    ProbMap p(2, 2);
    for (std::size_t i = 0; i < 4; ++i) p.data()[i] = gt.data()[i];
    EXPECT_NEAR(ce_loss_grad(p, gt).loss, 0.0, 1e-6);
    EXPECT_NEAR(dice_loss_grad(p, gt).loss, 0.0, 1e-6);
}

TEST(Losses, HalfProbabilitiesHandComputed) {
    const Mask gt = from_bits(2, 2, {1, 1, 0, 0});
    const ProbMap p(2, 2, 0.5);
    EXPECT_NEAR(ce_loss_grad(p, gt).loss, std::log(2.0), 1e-12);
    EXPECT_NEAR(dice_loss_grad(p, gt).loss, 0.4, 1e-12);
    EXPECT_NEAR(seg_loss(p, gt).loss, 0.5 * std::log(2.0) + 0.2, 1e-12);
}

TEST(Losses, RejectsBadInput) {
    EXPECT_THROW(ce_loss_grad(ProbMap(2, 2, 0.5), Mask(2, 3)), DimensionMismatch);
    EXPECT_THROW(dice_loss_grad(ProbMap(2, 2, 1.5), Mask(2, 2)), std::invalid_argument);
}

TEST(Losses, GradientsMatchCentralDifferences) {
    Rng rng(6);
    const double h = 1e-5;
    for (int trial = 0; trial < 20; ++trial) {
        const ProbMap p = random_probs(8, 8, rng);
        const Mask gt = random_mask(8, 8, 0.4, rng);
        for (auto fn : {&ce_loss_grad, &dice_loss_grad, &seg_loss}) {
            const auto analytic = fn(p, gt);
            double worst = 0;
            for (std::size_t i = 0; i < p.size(); ++i) {
                ProbMap up = p, down = p;
                up.data()[i] += h;
                down.data()[i] -= h;
                const double numeric = (fn(up, gt).loss - fn(down, gt).loss) / (2 * h);
                worst = std::max(worst, rel_err(analytic.grad.data()[i], numeric));
            }
            EXPECT_LT(worst, 1e-4);
        }
    }
}

TEST(Losses, FinalLoss) {
    EXPECT_DOUBLE_EQ(final_loss(0.3, 0.2, 1.0), 0.5);
    EXPECT_DOUBLE_EQ(final_loss(0.3, 0.2, 0.0), 0.3);
    EXPECT_DOUBLE_EQ(final_loss(0.3, 0.2, 0.5), 0.4);
}

TEST(InfoNce, UniformSimilarityIsLogNPlusOne) {
    const FeatureVec v{1, 0}, pos{0.5, 3};
    for (int n : {1, 4, 16, 255}) {
        std::vector<FeatureVec> negs(n, FeatureVec{0.5, -7});
        EXPECT_NEAR(info_nce(v, pos, negs, 0.07), std::log(n + 1.0), 1e-9);
    }
}

TEST(InfoNce, ScalarExample) {
    const FeatureVec v{1}, pos{1}, neg{0};
    const std::vector<FeatureVec> negs{neg};
    const double expected = -std::log(std::exp(1 / 0.07) / (std::exp(1 / 0.07) + 1));
    EXPECT_NEAR(info_nce(v, pos, negs, 0.07), expected, 1e-15);
    EXPECT_NEAR(info_nce(v, pos, negs, 0.07), 6.248747557120388e-07, 1e-20);
    EXPECT_NEAR(info_nce(v, pos, negs, 0.07), 6.2e-7, 0.05e-7);
}

TEST(InfoNce, StrictlyDecreasesWithPositiveSimilarity) {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        FeatureVec v(8), pos(8);
        for (auto& x : v) x = rng.uniform(-1, 1);
        for (auto& x : pos) x = rng.uniform(-1, 1);
        std::vector<FeatureVec> negs(5, FeatureVec(8));
        for (auto& n : negs)
            for (auto& x : n) x = rng.uniform(-1, 1);
        // Raise v.pos by 0.1 by moving pos along v.
        const double vv = dot(v, v);
        FeatureVec pos2 = pos;
        for (std::size_t i = 0; i < 8; ++i) pos2[i] += 0.1 * v[i] / vv;
        EXPECT_LT(info_nce(v, pos2, negs, 0.5), info_nce(v, pos, negs, 0.5));
        EXPECT_GE(info_nce(v, pos, negs, 0.5), 0.0);
    }
}

TEST(InfoNce, PermutationInvariantToTheBit) {
    Rng rng(8);
    FeatureVec v(16), pos(16);
    for (auto& x : v) x = rng.uniform(-1, 1);
    for (auto& x : pos) x = rng.uniform(-1, 1);
    std::vector<FeatureVec> negs(40, FeatureVec(16));
    for (auto& n : negs)
        for (auto& x : n) x = rng.uniform(-1, 1);
    const double base = info_nce(v, pos, negs, 0.07);
    for (int k = 0; k < 20; ++k) {
        for (std::size_t i = negs.size() - 1; i > 0; --i)
            std::swap(negs[i], negs[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)))]);
        EXPECT_EQ(info_nce(v, pos, negs, 0.07), base);
    }
}

TEST(InfoNce, RejectsBadInput) {
    const FeatureVec v{1, 2}, short_vec{1};
    const std::vector<FeatureVec> negs{FeatureVec{0, 1}};
    EXPECT_THROW(info_nce(v, v, negs, 0.0), std::invalid_argument);
    EXPECT_THROW(info_nce(v, short_vec, negs, 1.0), DimensionMismatch);
    EXPECT_THROW(info_nce(v, v, std::vector<FeatureVec>{short_vec}, 1.0), DimensionMismatch);
    EXPECT_THROW(info_nce(v, v, std::vector<FeatureVec>{}, 1.0), std::invalid_argument);
}
