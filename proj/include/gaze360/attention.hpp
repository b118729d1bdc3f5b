#pragma once

#include <vector>

#include "gaze360/types.hpp"

namespace gaze360 {

// Per-pixel probability distribution of fixations. A valid map is
// nonnegative and sums to 1 within 1e-6; a window with no fixations yields
// an all-zero map with valid == false.
struct AttentionMap {
    FloatGrid grid;
    bool valid = false;

    double sum() const;
};

struct WindowConfig {
    int k = 30;            // window length in frames; the window covers offsets [-k/2, k/2]
    double sigma = 0.0;    // Gaussian std in pixels; <= 0 means 1.5% of map width
    double fps = 30.0;

    double sigma_for_width(int width) const;
    // Throws BadConfig when k is odd or < 2, or sigma/fps are unusable.
    void validate() const;
};

// Accumulates an isotropic Gaussian (std sigma) at every fixation, truncated
// at the image borders, then renormalizes the grid to sum exactly 1.
// Fixations are sorted internally, so the result is bitwise independent of
// input order. Throws BadConfig on an invalid WindowConfig.
AttentionMap build_attention_map(const std::vector<Point2>& fixations, const WindowConfig& cfg, int width,
                                 int height);

struct ThresholdPolicy {
    enum class Kind { Relative, Absolute };
    Kind kind = Kind::Relative;
    double value = 0.5;  // ratio of the map max (Relative) or raw cutoff (Absolute)

    double absolute_for(const AttentionMap& map) const;
};

// mask(p) = 1 iff map(p) > tau_abs (strict). Throws InvalidMap on an invalid
// attention map.
ByteGrid binarize(const AttentionMap& map, const ThresholdPolicy& tau);

}  // namespace gaze360
