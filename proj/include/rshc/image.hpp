#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "rshc/error.hpp"

namespace rshc {

// Row-major 2-D grid of values. (0,0) is the top-left pixel.
template <typename T>
class Grid {
public:
    Grid() = default;

    Grid(int width, int height, T fill = T{})
        : width_(width), height_(height) {
        if (width <= 0 || height <= 0) {
            throw InvalidParameterError("Grid dimensions must be positive");
        }
        data_.assign(static_cast<std::size_t>(width) * height, fill);
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T& at(int x, int y) { return data_[index(x, y)]; }
    const T& at(int x, int y) const { return data_[index(x, y)]; }

    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width_ && y >= 0 && y < height_;
    }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    bool operator==(const Grid&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

struct Rgb8 {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    bool operator==(const Rgb8&) const = default;
};

using RgbImage = Grid<Rgb8>;

// Single-channel double image; luminance images use the CIELAB L scale [0, 100].
using GrayImage = Grid<double>;

inline int clamp_coord(int v, int lo, int hi) {
    return std::clamp(v, lo, hi);
}

}  // namespace rshc
