#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "curvforge/digest.hpp"
#include "curvforge/image.hpp"
#include "curvforge/random.hpp"

namespace testing_support {

using namespace curvforge;

inline Mask random_mask(int w, int h, double density, Rng& rng) {
    Mask m(w, h);
    for (auto& v : m.data()) v = rng.bernoulli(density) ? 1 : 0;
    return m;
}

/// Random blobs: a few filled disks, so components are thicker than one pixel.
inline Mask blob_mask(int w, int h, int blobs, Rng& rng) {
    Mask m(w, h);
    for (int b = 0; b < blobs; ++b) {
        const double cx = rng.uniform(0, w), cy = rng.uniform(0, h), r = rng.uniform(2.0, 7.0);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) m(x, y) = 1;
    }
    return m;
}

inline std::string mask_digest(const Mask& m) {
    std::string bytes = std::to_string(m.width()) + "x" + std::to_string(m.height()) + ":";
    for (auto v : m.data()) bytes.push_back(v ? '1' : '0');
    return fnv1a_hex(bytes);
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("curvforge_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

/// 8-connected component count.
inline int components8(const Mask& m) {
    Mask seen(m.width(), m.height());
    int count = 0;
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x) {
            if (!m(x, y) || seen(x, y)) continue;
            ++count;
            stack.assign(1, {x, y});
            seen(x, y) = 1;
            while (!stack.empty()) {
                auto [cx, cy] = stack.back();
                stack.pop_back();
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = cx + dx, ny = cy + dy;
                        if (m.in_bounds(nx, ny) && m(nx, ny) && !seen(nx, ny)) {
                            seen(nx, ny) = 1;
                            stack.emplace_back(nx, ny);
                        }
                    }
            }
        }
    return count;
}

}  // namespace testing_support

#include "curvforge/preset.hpp"

namespace testing_support {

/// The preset with attraction and kill distances in the classic order
/// (attraction > kill), so growth runs past the first step.
inline curvforge::Preset classic_variant(curvforge::Preset p) {
    for (auto& g : p.growth)
        if (g.kill_distance > g.attraction_distance) std::swap(g.kill_distance, g.attraction_distance);
    p.name += "_classic";
    return p;
}

}  // namespace testing_support
