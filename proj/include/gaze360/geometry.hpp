#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gaze360/types.hpp"

namespace gaze360 {

// One timestamped gaze sample in the eye-tracker frame, coordinates
// normalized to [0,1] x [0,1].
struct FixationRecord {
    double timestamp = 0.0;  // seconds, monotone within a session
    double x = 0.0;
    double y = 0.0;
    double confidence = 0.0;  // [0,1]
};

// Quad corners are ordered top-left, top-right, bottom-right, bottom-left.
using Quad = std::array<Point2, 4>;

// A fiducial tag observed in the eye-tracker image (pixels).
struct TagDetection {
    int tag_id = 0;
    Quad corners;
};

// Twice the signed area of a quad; positive for the TL,TR,BR,BL winding
// in an image frame (y grows downward).
double quad_signed_area2(const Quad& q);

enum class ScreenRole { FrontLeft, FrontCenter, FrontRight, MirrorLeft, MirrorRight };

ScreenRole screen_role_from_string(const std::string& s);
std::string to_string(ScreenRole role);
bool is_mirror(ScreenRole role);

struct ScreenSpec {
    int screen_id = 0;
    ScreenRole role = ScreenRole::FrontCenter;
    // Where each expected tag sits on the display, in screen-local unit
    // coordinates ([0,1]^2, origin at the screen's top-left).
    std::map<int, Quad> tags;
    // The screen's extent in the scene (concatenated panorama) frame, pixels.
    Quad scene_quad;

    std::vector<int> tag_ids() const;
};

// The five-display geometry plus the eye-tracker frame size used to turn
// normalized fixation coordinates into pixels.
struct ScreenLayout {
    std::vector<ScreenSpec> screens;
    double et_width = 1280.0;
    double et_height = 720.0;

    const ScreenSpec* find_screen(int screen_id) const;
    const ScreenSpec* screen_of_tag(int tag_id) const;
    // Throws BadConfig on duplicate screen ids, duplicate tag assignment,
    // or non-convex quads.
    void validate() const;
};

// 3x3 projective map, stored normalized: m[2][2] = 1 when |m[2][2]| > 1e-12,
// Frobenius-normalized otherwise.
struct Homography {
    std::array<std::array<double, 3>, 3> m{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

    static Homography identity() { return {}; }
    void normalize();
};

// Least-squares homography from >=4 point pairs via the normalized direct
// linear transform (Hartley conditioning: translate centroids to the origin,
// scale mean distance to sqrt(2), solve the 2Nx9 system by SVD).
// Throws Underdetermined (<4 pairs) or Degenerate (rank-deficient system,
// e.g. a collinear src triple in the minimal case, or a singular result).
Homography homography_from_correspondences(const std::vector<Point2>& src, const std::vector<Point2>& dst);

// Dehomogenized application of h to p. Throws AtInfinity when |w| < 1e-12.
Point2 project_fixation(const Homography& h, Point2 p);

// Exact homography mapping the unit square (TL,TR,BR,BL) onto `quad`.
Homography unit_square_to_quad(const Quad& quad);

// Maps a screen-local unit point into the scene frame through the screen's
// scene_quad.
Point2 screen_unit_to_scene(const ScreenSpec& screen, Point2 unit);

// Vertical-strip test: each screen's strip spans from the leftmost left edge
// to the rightmost right edge of its detected tags; the gaze x coordinate
// selects the screen. A gaze exactly on a shared strip boundary goes to the
// left screen. Returns nullopt when no strip contains the gaze.
// Throws EmptyDetections / UnknownTag.
std::optional<int> screen_for_gaze(Point2 gaze_px, const std::vector<TagDetection>& detections,
                                   const ScreenLayout& layout);

struct CalibratedFixation {
    int frame_id = 0;
    double timestamp = 0.0;
    Point2 scene;  // scene-frame pixels
    int screen_id = 0;
};

struct CalibrationOptions {
    double min_confidence = 0.6;
    // Containment slack for the projected point, as a fraction of the
    // screen's scene_quad extent.
    double quad_margin = 0.02;
};

// Full fixation calibration: resolve the fixated screen from the tag strips,
// fit the screen's eye-tracker->scene homography from its detected tag
// corners, and project the gaze point. Returns nullopt when the gaze falls
// on no screen strip. Throws LowConfidence below the configured threshold and
// ProjectionOutsideScreen when the result escapes the screen's scene_quad
// expanded by `quad_margin`.
std::optional<CalibratedFixation> calibrate_fixation(const FixationRecord& f,
                                                     const std::vector<TagDetection>& detections,
                                                     const ScreenLayout& layout,
                                                     const CalibrationOptions& opts = {});

}  // namespace gaze360
