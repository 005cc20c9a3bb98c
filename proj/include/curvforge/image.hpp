#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "curvforge/errors.hpp"

namespace curvforge {

/// Dense row-major 2-D grid.
template <typename T, typename Tag = void>
class Grid {
public:
    using value_type = T;

    Grid() = default;
    Grid(int width, int height, T fill = T{})
        : width_(width), height_(height),
          data_(static_cast<std::size_t>(checked(width)) * static_cast<std::size_t>(checked(height)), fill) {}
    Grid(int width, int height, std::vector<T> data)
        : width_(width), height_(height), data_(std::move(data)) {
        if (data_.size() != static_cast<std::size_t>(checked(width)) * static_cast<std::size_t>(checked(height)))
            throw std::invalid_argument("grid data length does not match dimensions");
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    bool in_bounds(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    T& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
    const T& operator()(int x, int y) const noexcept { return data_[index(x, y)]; }

    /// Out-of-canvas reads return `outside`.
    T at_or(int x, int y, T outside) const noexcept { return in_bounds(x, y) ? (*this)(x, y) : outside; }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }

    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    static int checked(int v) {
        if (v < 0) throw std::invalid_argument("negative grid dimension");
        return v;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

struct MaskTag {};
struct GrayTag {};

/// Binary raster; every value is 0 or 1.
using Mask = Grid<std::uint8_t, MaskTag>;
/// 8-bit single-channel intensity image.
using GrayImage = Grid<std::uint8_t, GrayTag>;
/// Real-valued per-pixel grid (distance fields, probabilities, gradients).
using RealGrid = Grid<double>;

template <typename A, typename B>
void require_same_dims(const A& a, const B& b, const char* what) {
    if (a.width() != b.width() || a.height() != b.height())
        throw DimensionMismatch(std::string(what) + ": dimension mismatch (" + std::to_string(a.width()) + "x" +
                                std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                                std::to_string(b.height()) + ")");
}

inline std::size_t count_foreground(const Mask& m) noexcept {
    return static_cast<std::size_t>(std::count(m.data().begin(), m.data().end(), std::uint8_t{1}));
}

inline Mask complement(const Mask& m) {
    Mask out(m.width(), m.height());
    std::ranges::transform(m.data(), out.data().begin(), [](std::uint8_t v) { return std::uint8_t(v ? 0 : 1); });
    return out;
}

inline Mask mask_and(const Mask& a, const Mask& b) {
    require_same_dims(a, b, "mask_and");
    Mask out(a.width(), a.height());
    std::ranges::transform(a.data(), b.data(), out.data().begin(),
                           [](std::uint8_t x, std::uint8_t y) { return std::uint8_t(x & y); });
    return out;
}

inline Mask mask_or(const Mask& a, const Mask& b) {
    require_same_dims(a, b, "mask_or");
    Mask out(a.width(), a.height());
    std::ranges::transform(a.data(), b.data(), out.data().begin(),
                           [](std::uint8_t x, std::uint8_t y) { return std::uint8_t(x | y); });
    return out;
}

/// a ⊆ b
inline bool is_subset(const Mask& a, const Mask& b) {
    require_same_dims(a, b, "is_subset");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a.data()[i] && !b.data()[i]) return false;
    return true;
}

}  // namespace curvforge
