#include "gaze360/attention.hpp"

#include <algorithm>
#include <cmath>

namespace gaze360 {

double AttentionMap::sum() const {
    double s = 0.0;
    for (double v : grid.values) s += v;
    return s;
}

double WindowConfig::sigma_for_width(int width) const { return sigma > 0 ? sigma : 0.015 * width; }

void WindowConfig::validate() const {
    if (k < 2 || k % 2 != 0) fail(ErrorCode::BadConfig, "window length k must be even and >= 2");
    if (sigma < 0) fail(ErrorCode::BadConfig, "sigma must be positive");
    if (fps <= 0) fail(ErrorCode::BadConfig, "fps must be positive");
}

AttentionMap build_attention_map(const std::vector<Point2>& fixations, const WindowConfig& cfg, int width,
                                 int height) {
    cfg.validate();
    if (width <= 0 || height <= 0) fail(ErrorCode::BadConfig, "map dimensions must be positive");
    for (const auto& f : fixations)
        if (!std::isfinite(f.x) || !std::isfinite(f.y)) fail(ErrorCode::BadConfig, "non-finite fixation point");

    AttentionMap map;
    map.grid = FloatGrid(width, height, 0.0);
    if (fixations.empty()) return map;

    // Fixed accumulation order makes the result independent of input order,
    // bit for bit.
    std::vector<Point2> sorted = fixations;
    std::sort(sorted.begin(), sorted.end(),
              [](const Point2& a, const Point2& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });

    const double sigma = cfg.sigma_for_width(width);
    const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);

    // The Gaussian is separable; one row and one column table per fixation
    // replaces a full-grid exp(). Accumulation walks the grid row by row with
    // the fixation loop inside, so each output row stays cache-hot; per pixel
    // the additions still happen in sorted-fixation order, bit for bit.
    const size_t n = sorted.size();
    std::vector<double> rows(n * static_cast<size_t>(width)), cols(n * static_cast<size_t>(height));
    for (size_t i = 0; i < n; ++i) {
        for (int x = 0; x < width; ++x) {
            const double dx = x - sorted[i].x;
            rows[i * width + x] = std::exp(-dx * dx * inv_two_sigma2);
        }
        for (int y = 0; y < height; ++y) {
            const double dy = y - sorted[i].y;
            cols[i * height + y] = std::exp(-dy * dy * inv_two_sigma2);
        }
    }
    for (int y = 0; y < height; ++y) {
        double* out = &map.grid.values[static_cast<size_t>(y) * width];
        for (size_t i = 0; i < n; ++i) {
            const double cy = cols[i * height + y];
            const double* row = &rows[i * width];
            for (int x = 0; x < width; ++x) out[x] += cy * row[x];
        }
    }

    double total = 0.0;
    for (double v : map.grid.values) total += v;
    if (!(total > 0.0) || !std::isfinite(total)) {
        // All mass underflowed (fixations far outside the grid): treat the
        // window as empty.
        std::fill(map.grid.values.begin(), map.grid.values.end(), 0.0);
        return map;
    }
    for (double& v : map.grid.values) v /= total;
    map.valid = true;
    return map;
}

double ThresholdPolicy::absolute_for(const AttentionMap& map) const {
    if (kind == Kind::Absolute) return value;
    const double peak = *std::max_element(map.grid.values.begin(), map.grid.values.end());
    return value * peak;
}

ByteGrid binarize(const AttentionMap& map, const ThresholdPolicy& tau) {
    if (!map.valid) fail(ErrorCode::InvalidMap, "cannot binarize an invalid attention map");
    const double cutoff = tau.absolute_for(map);
    ByteGrid mask(map.grid.width, map.grid.height, 0);
    for (size_t i = 0; i < map.grid.values.size(); ++i) mask.values[i] = map.grid.values[i] > cutoff ? 1 : 0;
    return mask;
}

}  // namespace gaze360
