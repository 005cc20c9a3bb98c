#include <gtest/gtest.h>

#include <cmath>

#include "curvforge/maskgen.hpp"
#include "curvforge/preset.hpp"
#include "support.hpp"

using namespace curvforge;
using testing_support::mask_digest;

TEST(RectMask, ZeroCountIsEmpty) {
    RectMaskParams p;
    p.count = {0, 0};
    EXPECT_EQ(count_foreground(random_rect_mask(128, 128, p)), 0u);
}

TEST(RectMask, CanvasSizedRectangleCoversAll) {
    RectMaskParams p;
    p.count = {1, 1};
    p.width = {40, 40};
    p.height = {30, 30};
    EXPECT_EQ(count_foreground(random_rect_mask(40, 30, p)), 1200u);
}

TEST(RectMask, Golden) {
    RectMaskParams p;
    p.count = {1, 3};
    p.width = {20, 80};
    p.height = {20, 80};
    p.seed = 7;
    const Mask m = random_rect_mask(256, 256, p);
    const double frac = double(count_foreground(m)) / m.size();
    EXPECT_GT(frac, 0.0);
    EXPECT_LE(frac, 0.3);
    EXPECT_EQ(m, random_rect_mask(256, 256, p));
    EXPECT_EQ(mask_digest(m), "10f5224e59c47d9f");
}

TEST(RectMask, InvalidParams) {
    RectMaskParams p;
    p.width = {10, 5};
    EXPECT_THROW(random_rect_mask(64, 64, p), std::invalid_argument);
    p = RectMaskParams{};
    p.width = {16, 100};
    EXPECT_THROW(random_rect_mask(64, 64, p), std::invalid_argument);
}

TEST(RectMask, DefaultsScaleWithCanvas) {
    const auto p = RectMaskParams::defaults_for(576, 300, 1);
    EXPECT_EQ(p.width.lo, 16);
    EXPECT_EQ(p.width.hi, 192);
    EXPECT_EQ(p.height.hi, 100);
    EXPECT_EQ(p.count.lo, 1);
    EXPECT_EQ(p.count.hi, 4);
}

TEST(ChainMask, ZeroChainsIsEmpty) {
    ChainMaskParams p;
    p.chains = {0, 0};
    EXPECT_EQ(count_foreground(random_chain_mask(64, 64, p)), 0u);
}

TEST(ChainMask, TwoVertexChainIsStraightStroke) {
    ChainMaskParams p;
    p.chains = {1, 1};
    p.vertices = {2, 2};
    p.turn_std = 0;
    p.width = {3, 3};
    p.step = {30, 30};
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        p.seed = seed;
        const Mask m = random_chain_mask(200, 200, p);
        ASSERT_GT(count_foreground(m), 0u);
        // Recover the segment ends from the generator's own draws.
        Rng rng(seed, Stream::masks);
        rng.uniform_int(1, 1);
        const Point2 a{rng.uniform(0.0, 200), rng.uniform(0.0, 200)};
        const double heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
        rng.uniform_int(2, 2);
        const Point2 b{a.x + 30 * std::cos(heading), a.y + 30 * std::sin(heading)};
        for (int y = 0; y < 200; ++y)
            for (int x = 0; x < 200; ++x) {
                const Point2 q{double(x), double(y)};
                const Point2 ab = b - a, aq = q - a;
                const double t = std::clamp((aq.x * ab.x + aq.y * ab.y) / 900.0, 0.0, 1.0);
                const double d = distance(q, a + ab * t);
                if (d <= 1.45) ASSERT_EQ(m(x, y), 1) << seed;
                if (d > 1.5 + 1e-9) ASSERT_EQ(m(x, y), 0) << seed;
            }
    }
}

TEST(ChainMask, HorizontalStrokeIsThreePixelsWide) {
    Mask m(20, 9);
    stroke_segment(m, {3, 4}, {15, 4}, 1.5);
    for (int x = 3; x <= 15; ++x) {
        int col = 0;
        for (int y = 0; y < 9; ++y) col += m(x, y);
        EXPECT_EQ(col, 3);
    }
}

TEST(ChainMask, Golden) {
    ChainMaskParams p;
    p.chains = {2, 2};
    p.vertices = {6, 6};
    p.width = {8, 16};
    p.seed = 11;
    const Mask m = random_chain_mask(256, 256, p);
    EXPECT_GT(count_foreground(m), 0u);
    EXPECT_EQ(m, random_chain_mask(256, 256, p));
    EXPECT_EQ(mask_digest(m), "aaec8dcd25ee8675");
}

TEST(InpaintMask, ZeroRadiusIsSkeleton) {
    Rng rng(1);
    const Mask s = testing_support::random_mask(32, 32, 0.1, rng);
    EXPECT_EQ(inpaint_mask_from_skeleton(s, 0), s);
    EXPECT_THROW(inpaint_mask_from_skeleton(s, -1), std::invalid_argument);
}

TEST(InpaintMask, LineWithRadiusThreeIsSevenWide) {
    Mask s(40, 21);
    for (int x = 0; x < 40; ++x) s(x, 10) = 1;
    const Mask m = inpaint_mask_from_skeleton(s, 3);
    for (int y = 0; y < 21; ++y)
        for (int x = 0; x < 40; ++x) EXPECT_EQ(m(x, y), std::abs(y - 10) <= 3 ? 1 : 0);
}

TEST(InpaintMask, CornSkeletonRadiusOneIsThreeWide) {
    const auto sample = generate_curve(testing_support::classic_variant(*built_in_preset("corn")), 2);
    const Mask skel = skeletonize(sample.mask);
    ASSERT_GT(count_foreground(skel), 0u);
    const Mask m = inpaint_mask_from_skeleton(skel, 1);
    // Cross-shaped dilation: every skeleton pixel's 4-neighbourhood, nothing further.
    EXPECT_EQ(m, dilate(skel, DiskSE{1}));
    EXPECT_TRUE(is_subset(skel, m));
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x) {
            if (!m(x, y) || skel(x, y)) continue;
            EXPECT_TRUE(skel.at_or(x - 1, y, 0) || skel.at_or(x + 1, y, 0) || skel.at_or(x, y - 1, 0) ||
                        skel.at_or(x, y + 1, 0));
        }
}

TEST(InpaintMask, CoverageAndMonotonicity) {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const Mask s = testing_support::random_mask(48, 48, 0.05, rng);
        Mask prev = s;
        for (int r = 0; r <= 6; ++r) {
            const Mask m = inpaint_mask_from_skeleton(s, r);
            EXPECT_TRUE(is_subset(s, m));
            EXPECT_TRUE(is_subset(prev, m));
            prev = m;
        }
    }
}

TEST(InpaintMask, DefaultRadius) {
    EXPECT_EQ(default_inpaint_radius(400, 400), 7);
    EXPECT_EQ(default_inpaint_radius(576, 576), 7);
    EXPECT_EQ(default_inpaint_radius(960, 960), 12);
    EXPECT_EQ(default_inpaint_radius(1152, 100), 14);
}

TEST(MaskUnion, FractionBoundedBySum) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto rp = RectMaskParams::defaults_for(128, 128, seed);
        ChainMaskParams cp;
        cp.seed = seed;
        const Mask r = random_rect_mask(128, 128, rp), c = random_chain_mask(128, 128, cp);
        const Mask u = mask_or(r, c);
        EXPECT_LE(count_foreground(u), count_foreground(r) + count_foreground(c));
        EXPECT_TRUE(is_subset(r, u));
        EXPECT_TRUE(is_subset(c, u));
    }
}
