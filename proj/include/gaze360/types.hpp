#pragma once

#include <cstdint>
#include <vector>

#include "gaze360/error.hpp"

namespace gaze360 {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

// Dense row-major raster, top-left origin.
template <typename T>
struct Grid {
    int width = 0;
    int height = 0;
    std::vector<T> values;

    Grid() = default;
    Grid(int w, int h, T fill = T{}) : width(w), height(h), values(static_cast<size_t>(w) * h, fill) {
        if (w <= 0 || h <= 0) fail(ErrorCode::BadConfig, "grid dimensions must be positive");
    }

    size_t size() const { return values.size(); }
    T& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }
    const T& at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
    bool same_shape(const Grid& other) const { return width == other.width && height == other.height; }

    friend bool operator==(const Grid&, const Grid&) = default;
};

using FloatGrid = Grid<double>;
using IdGrid = Grid<uint16_t>;
using ByteGrid = Grid<uint8_t>;

template <typename A, typename B>
void require_same_shape(const Grid<A>& a, const Grid<B>& b) {
    if (a.width != b.width || a.height != b.height)
        fail(ErrorCode::ShapeMismatch, "grids are " + std::to_string(a.width) + "x" + std::to_string(a.height) +
                                           " vs " + std::to_string(b.width) + "x" + std::to_string(b.height));
}

}  // namespace gaze360
