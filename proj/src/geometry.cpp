#include "gaze360/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace gaze360 {

namespace {

constexpr double kWTolerance = 1e-12;
// Relative floor on the 8th singular value of the DLT design matrix; below it
// the solution is not unique (e.g. a collinear src triple in the 4-point case).
constexpr double kRankTolerance = 1e-10;

}  // namespace

double quad_signed_area2(const Quad& q) {
    double a = 0.0;
    for (int i = 0; i < 4; ++i) {
        const Point2& p = q[i];
        const Point2& n = q[(i + 1) % 4];
        a += p.x * n.y - n.x * p.y;
    }
    return a;
}

ScreenRole screen_role_from_string(const std::string& s) {
    if (s == "front-left") return ScreenRole::FrontLeft;
    if (s == "front-center") return ScreenRole::FrontCenter;
    if (s == "front-right") return ScreenRole::FrontRight;
    if (s == "mirror-left") return ScreenRole::MirrorLeft;
    if (s == "mirror-right") return ScreenRole::MirrorRight;
    fail(ErrorCode::ParseError, "unknown screen role '" + s + "'");
}

std::string to_string(ScreenRole role) {
    switch (role) {
        case ScreenRole::FrontLeft: return "front-left";
        case ScreenRole::FrontCenter: return "front-center";
        case ScreenRole::FrontRight: return "front-right";
        case ScreenRole::MirrorLeft: return "mirror-left";
        case ScreenRole::MirrorRight: return "mirror-right";
    }
    return "?";
}

bool is_mirror(ScreenRole role) { return role == ScreenRole::MirrorLeft || role == ScreenRole::MirrorRight; }

std::vector<int> ScreenSpec::tag_ids() const {
    std::vector<int> ids;
    ids.reserve(tags.size());
    for (const auto& [id, quad] : tags) ids.push_back(id);
    return ids;
}

const ScreenSpec* ScreenLayout::find_screen(int screen_id) const {
    for (const auto& s : screens)
        if (s.screen_id == screen_id) return &s;
    return nullptr;
}

const ScreenSpec* ScreenLayout::screen_of_tag(int tag_id) const {
    for (const auto& s : screens)
        if (s.tags.count(tag_id)) return &s;
    return nullptr;
}

void ScreenLayout::validate() const {
    if (screens.empty()) fail(ErrorCode::BadConfig, "layout has no screens");
    if (et_width <= 0 || et_height <= 0) fail(ErrorCode::BadConfig, "eye-tracker frame size must be positive");
    std::vector<int> seen_tags;
    for (const auto& s : screens) {
        int dup = 0;
        for (const auto& o : screens)
            if (o.screen_id == s.screen_id) ++dup;
        if (dup != 1) fail(ErrorCode::BadConfig, "duplicate screen id " + std::to_string(s.screen_id));
        if (s.tags.empty()) fail(ErrorCode::BadConfig, "screen " + std::to_string(s.screen_id) + " has no tags");
        if (quad_signed_area2(s.scene_quad) <= 0)
            fail(ErrorCode::BadConfig, "scene_quad of screen " + std::to_string(s.screen_id) + " is not convex");
        for (const auto& [tag_id, quad] : s.tags) {
            if (std::count(seen_tags.begin(), seen_tags.end(), tag_id))
                fail(ErrorCode::BadConfig, "tag " + std::to_string(tag_id) + " assigned to more than one screen");
            seen_tags.push_back(tag_id);
        }
    }
}

void Homography::normalize() {
    double scale = m[2][2];
    if (std::abs(scale) > kWTolerance) {
        for (auto& row : m)
            for (auto& v : row) v /= scale;
        return;
    }
    double frob = 0.0;
    for (const auto& row : m)
        for (double v : row) frob += v * v;
    frob = std::sqrt(frob);
    if (frob > 0)
        for (auto& row : m)
            for (auto& v : row) v /= frob;
}

namespace {

struct Conditioning {
    Eigen::Matrix3d transform;
    std::vector<Point2> points;
};

// Hartley normalization: centroid to the origin, mean distance sqrt(2).
Conditioning condition_points(const std::vector<Point2>& pts) {
    double cx = 0, cy = 0;
    for (const auto& p : pts) {
        cx += p.x;
        cy += p.y;
    }
    cx /= static_cast<double>(pts.size());
    cy /= static_cast<double>(pts.size());
    double mean_dist = 0;
    for (const auto& p : pts) mean_dist += std::hypot(p.x - cx, p.y - cy);
    mean_dist /= static_cast<double>(pts.size());
    const double s = mean_dist > 1e-15 ? std::sqrt(2.0) / mean_dist : 1.0;

    Conditioning c;
    c.transform << s, 0, -s * cx, 0, s, -s * cy, 0, 0, 1;
    c.points.reserve(pts.size());
    for (const auto& p : pts) c.points.push_back({s * (p.x - cx), s * (p.y - cy)});
    return c;
}

}  // namespace

Homography homography_from_correspondences(const std::vector<Point2>& src, const std::vector<Point2>& dst) {
    if (src.size() != dst.size())
        fail(ErrorCode::ShapeMismatch, "src and dst point counts differ (" + std::to_string(src.size()) + " vs " +
                                           std::to_string(dst.size()) + ")");
    const size_t n = src.size();
    if (n < 4) fail(ErrorCode::Underdetermined, "need at least 4 point pairs, got " + std::to_string(n));

    const Conditioning cs = condition_points(src);
    const Conditioning cd = condition_points(dst);

    Eigen::MatrixXd a(2 * n, 9);
    for (size_t i = 0; i < n; ++i) {
        const Point2& p = cs.points[i];
        const Point2& q = cd.points[i];
        a.row(2 * i) << -p.x, -p.y, -1, 0, 0, 0, q.x * p.x, q.x * p.y, q.x;
        a.row(2 * i + 1) << 0, 0, 0, -p.x, -p.y, -1, q.y * p.x, q.y * p.y, q.y;
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    // A unique (up to scale) solution needs rank 8; sigma[7] exists for n >= 4.
    if (sigma(7) <= kRankTolerance * sigma(0))
        fail(ErrorCode::Degenerate, "rank-deficient correspondence system");

    const Eigen::VectorXd h = svd.matrixV().col(8);
    Eigen::Matrix3d hn;
    hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
    const Eigen::Matrix3d full = cd.transform.inverse() * hn * cs.transform;

    Homography result;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) result.m[r][c] = full(r, c);
    result.normalize();

    const double det = result.m[0][0] * (result.m[1][1] * result.m[2][2] - result.m[1][2] * result.m[2][1]) -
                       result.m[0][1] * (result.m[1][0] * result.m[2][2] - result.m[1][2] * result.m[2][0]) +
                       result.m[0][2] * (result.m[1][0] * result.m[2][1] - result.m[1][1] * result.m[2][0]);
    if (std::abs(det) < 1e-12) fail(ErrorCode::Degenerate, "estimated homography is singular");
    return result;
}

Point2 project_fixation(const Homography& h, Point2 p) {
    const double hx = h.m[0][0] * p.x + h.m[0][1] * p.y + h.m[0][2];
    const double hy = h.m[1][0] * p.x + h.m[1][1] * p.y + h.m[1][2];
    const double w = h.m[2][0] * p.x + h.m[2][1] * p.y + h.m[2][2];
    if (std::abs(w) < kWTolerance) fail(ErrorCode::AtInfinity, "projected point has w ~ 0");
    return {hx / w, hy / w};
}

// Closed-form unit-square -> quad map (Heckbert's bilinear-to-projective
// construction). Exactly affine for parallelograms, which keeps rectangle
// layouts free of projective rounding.
Homography unit_square_to_quad(const Quad& quad) {
    if (quad_signed_area2(quad) <= 0) fail(ErrorCode::BadConfig, "quad is not strictly convex");
    const double x0 = quad[0].x, y0 = quad[0].y;
    const double x1 = quad[1].x, y1 = quad[1].y;
    const double x2 = quad[2].x, y2 = quad[2].y;
    const double x3 = quad[3].x, y3 = quad[3].y;

    const double px = x0 - x1 + x2 - x3;
    const double py = y0 - y1 + y2 - y3;

    Homography h;
    if (std::abs(px) < 1e-12 && std::abs(py) < 1e-12) {
        h.m = {{{x1 - x0, x3 - x0, x0}, {y1 - y0, y3 - y0, y0}, {0, 0, 1}}};
        return h;
    }
    const double dx1 = x1 - x2, dx2 = x3 - x2;
    const double dy1 = y1 - y2, dy2 = y3 - y2;
    const double den = dx1 * dy2 - dx2 * dy1;
    if (std::abs(den) < 1e-15) fail(ErrorCode::Degenerate, "quad corners are degenerate");
    const double g = (px * dy2 - py * dx2) / den;
    const double k = (dx1 * py - dy1 * px) / den;
    h.m = {{{x1 - x0 + g * x1, x3 - x0 + k * x3, x0}, {y1 - y0 + g * y1, y3 - y0 + k * y3, y0}, {g, k, 1}}};
    return h;
}

Point2 screen_unit_to_scene(const ScreenSpec& screen, Point2 unit) {
    return project_fixation(unit_square_to_quad(screen.scene_quad), unit);
}

namespace {

struct Strip {
    int screen_id;
    double lo;
    double hi;
};

double tag_left_edge_x(const TagDetection& d) { return std::min(d.corners[0].x, d.corners[3].x); }
double tag_right_edge_x(const TagDetection& d) { return std::max(d.corners[1].x, d.corners[2].x); }

std::vector<Strip> build_strips(const std::vector<TagDetection>& detections, const ScreenLayout& layout) {
    std::vector<Strip> strips;
    for (const auto& d : detections) {
        const ScreenSpec* screen = layout.screen_of_tag(d.tag_id);
        if (!screen) fail(ErrorCode::UnknownTag, "tag " + std::to_string(d.tag_id) + " is not in the layout");
        auto it = std::find_if(strips.begin(), strips.end(),
                               [&](const Strip& s) { return s.screen_id == screen->screen_id; });
        const double lo = tag_left_edge_x(d);
        const double hi = tag_right_edge_x(d);
        if (it == strips.end()) {
            strips.push_back({screen->screen_id, lo, hi});
        } else {
            it->lo = std::min(it->lo, lo);
            it->hi = std::max(it->hi, hi);
        }
    }
    return strips;
}

}  // namespace

std::optional<int> screen_for_gaze(Point2 gaze_px, const std::vector<TagDetection>& detections,
                                   const ScreenLayout& layout) {
    if (detections.empty()) fail(ErrorCode::EmptyDetections, "no tag detections for frame");
    const std::vector<Strip> strips = build_strips(detections, layout);

    const Strip* best = nullptr;
    for (const auto& s : strips) {
        if (gaze_px.x < s.lo || gaze_px.x > s.hi) continue;
        // On a shared boundary the left screen (smaller right edge) wins.
        if (!best || s.hi < best->hi) best = &s;
    }
    if (!best) return std::nullopt;
    return best->screen_id;
}

namespace {

bool inside_expanded_quad(const Quad& quad, Point2 p, double margin) {
    Point2 centroid{0, 0};
    for (const auto& v : quad) {
        centroid.x += v.x / 4.0;
        centroid.y += v.y / 4.0;
    }
    Quad expanded;
    for (int i = 0; i < 4; ++i) expanded[i] = centroid + (1.0 + margin) * (quad[i] - centroid);

    const double orientation = quad_signed_area2(expanded) >= 0 ? 1.0 : -1.0;
    for (int i = 0; i < 4; ++i) {
        const Point2 a = expanded[i];
        const Point2 b = expanded[(i + 1) % 4];
        const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
        if (orientation * cross < 0) return false;
    }
    return true;
}

}  // namespace

std::optional<CalibratedFixation> calibrate_fixation(const FixationRecord& f,
                                                     const std::vector<TagDetection>& detections,
                                                     const ScreenLayout& layout, const CalibrationOptions& opts) {
    if (f.confidence < opts.min_confidence)
        fail(ErrorCode::LowConfidence, "confidence " + std::to_string(f.confidence) + " below threshold " +
                                           std::to_string(opts.min_confidence));

    const Point2 gaze_px{f.x * layout.et_width, f.y * layout.et_height};
    const std::optional<int> screen_id = screen_for_gaze(gaze_px, detections, layout);
    if (!screen_id) return std::nullopt;
    const ScreenSpec* screen = layout.find_screen(*screen_id);

    std::vector<Point2> src, dst;
    for (const auto& d : detections) {
        auto it = screen->tags.find(d.tag_id);
        if (it == screen->tags.end()) continue;
        for (int c = 0; c < 4; ++c) {
            src.push_back(d.corners[c]);
            dst.push_back(screen_unit_to_scene(*screen, it->second[c]));
        }
    }

    const Homography h = homography_from_correspondences(src, dst);
    const Point2 scene = project_fixation(h, gaze_px);

    if (!inside_expanded_quad(screen->scene_quad, scene, opts.quad_margin))
        fail(ErrorCode::ProjectionOutsideScreen,
             "projection (" + std::to_string(scene.x) + ", " + std::to_string(scene.y) + ") escapes screen " +
                 std::to_string(*screen_id));

    return CalibratedFixation{0, f.timestamp, scene, *screen_id};
}

}  // namespace gaze360
