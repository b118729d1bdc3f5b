#include "gaze360/synth.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>

#include "gaze360/formats.hpp"
#include "gaze360/rng.hpp"

namespace gaze360::synth {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

// Eye-tracker rig: the five screens sit side by side in the 1280x720
// eye-tracker image with gaps between them, so tag strips never touch.
constexpr double kEtWidth = 1280.0;
constexpr double kEtHeight = 720.0;
constexpr double kScreenEtW = 210.0;
constexpr double kScreenEtH = 360.0;
constexpr double kScreenEtY = 200.0;
double screen_et_x(int view) { return 40.0 + 250.0 * view; }

// Tag placements in screen-local unit coordinates. The y extents of the two
// tags differ so that no three of the eight corners are collinear.
const Quad kLeftTagUnit = {{{0.0, 0.28}, {0.1, 0.28}, {0.1, 0.68}, {0.0, 0.68}}};
const Quad kRightTagUnit = {{{0.9, 0.32}, {1.0, 0.32}, {1.0, 0.72}, {0.9, 0.72}}};

// Per-view site geometry, as fractions of the view size. Each view carries
// two road-user instance rectangles (sites 0 and 1), one background anchor
// (site 2), and one building-class decoy rectangle centered on the
// background anchor so background dwells still exercise the class filter.
constexpr double kSiteFrac[3][2] = {{22.0 / 112, 22.0 / 112}, {82.0 / 112, 82.0 / 112}, {56.0 / 112, 56.0 / 112}};
constexpr double kSiteRectFrac[2][2] = {{10.0 / 112, 34.0 / 112}, {70.0 / 112, 94.0 / 112}};
constexpr double kDecoyRectFrac[2] = {42.0 / 112, 70.0 / 112};

struct PixelRect {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // half-open

    bool contains(double x, double y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }
    // Distance from a point to the rectangle of pixel centers.
    double distance(Point2 p) const {
        const double dx = std::max({static_cast<double>(x0) - p.x, 0.0, p.x - (x1 - 1.0)});
        const double dy = std::max({static_cast<double>(y0) - p.y, 0.0, p.y - (y1 - 1.0)});
        return std::hypot(dx, dy);
    }
    double reach_from(Point2 p) const {
        const double dx = std::max(p.x - x0, (x1 - 1.0) - p.x);
        const double dy = std::max(p.y - y0, (y1 - 1.0) - p.y);
        return std::hypot(std::max(dx, 0.0), std::max(dy, 0.0));
    }
};

struct SiteGeometry {
    Point2 anchor;          // scene px
    PixelRect rect;         // road-user instance extent (sites 0, 1 only)
    uint16_t instance = 0;  // 0 for the background site
};

struct SceneGeometry {
    int width = 0, height = 0;
    double sigma = 0.0;
    double jitter_scene = 0.0;  // max scene-px displacement from ET jitter
    std::vector<std::array<SiteGeometry, 3>> sites;  // per view
    std::vector<PixelRect> decoys;                   // per view

    double gauss(double d) const { return std::exp(-(d * d) / (2.0 * sigma * sigma)); }
};

constexpr double kHalfPixel = 0.7072;  // max distance from a point to the nearest pixel center

int scale_px(double frac, int view_size) { return static_cast<int>(std::lround(frac * view_size)); }

SceneGeometry make_geometry(const SynthConfig& cfg) {
    SceneGeometry g;
    const int vs = cfg.view_size;
    g.width = cfg.n_screens * vs;
    g.height = vs;
    g.sigma = 0.015 * g.width;
    g.jitter_scene = std::hypot(cfg.jitter_px * vs / kScreenEtW, cfg.jitter_px * vs / kScreenEtH);
    for (int v = 0; v < cfg.n_screens; ++v) {
        const int base = v * vs;
        std::array<SiteGeometry, 3> row;
        for (int s = 0; s < 3; ++s) {
            row[s].anchor = {base + kSiteFrac[s][0] * vs, kSiteFrac[s][1] * vs};
            if (s < 2) {
                const int a = scale_px(kSiteRectFrac[s][0], vs);
                const int b = scale_px(kSiteRectFrac[s][1], vs);
                row[s].rect = {base + a, a, base + b, b};
                row[s].instance = static_cast<uint16_t>(3 * v + s + 1);
            }
        }
        g.sites.push_back(row);
        const int a = scale_px(kDecoyRectFrac[0], vs);
        const int b = scale_px(kDecoyRectFrac[1], vs);
        g.decoys.push_back({base + a, a, base + b, b});
    }
    return g;
}

// Largest distance from an anchor at which a pixel can still exceed the
// relative threshold, under any window composition. Used to prove that a
// dwell's salient blob can touch no rectangle except its own target.
double blob_radius(const SceneGeometry& g, double r) {
    const double g_peak = g.gauss(r + kHalfPixel);
    return r + g.sigma * std::sqrt(2.0 * (std::log(2.0) - std::log(g_peak))) + kHalfPixel;
}

// Whether the anchor with n_self samples keeps at least one pixel above
// tau = 0.5 * max in a window shared with a second anchor (n_other samples,
// separation sep). Returns nullopt when the conservative bounds cannot
// decide either way.
std::optional<bool> decide_survival(const SceneGeometry& g, double r, long n_self, long n_other, double sep,
                                    double reach) {
    const double g_peak = g.gauss(r + kHalfPixel);
    if (n_other == 0) return g_peak > 0.5;
    const double n_max = static_cast<double>(std::max(n_self, n_other));
    const double n_min = static_cast<double>(std::min(n_self, n_other));
    // Any pixel is at distance >= sep/2 from one of the anchors.
    const double max_ub = n_max + n_min * g.gauss(std::max(0.0, sep / 2.0 - r));
    const double max_lb = n_max * g_peak;
    const bool survives = n_self * g_peak > 0.5 * max_ub;
    const bool dies = n_self + n_other * g.gauss(std::max(0.0, sep - reach - r)) <= 0.5 * max_lb;
    if (survives) return true;
    if (dies) return false;
    return std::nullopt;
}

ScreenRole role_for_view(int view, int n_screens) {
    if (n_screens == 5) {
        switch (view) {
            case 0: return ScreenRole::MirrorLeft;
            case 1: return ScreenRole::FrontLeft;
            case 2: return ScreenRole::FrontCenter;
            case 3: return ScreenRole::FrontRight;
            case 4: return ScreenRole::MirrorRight;
        }
    }
    return view == 0 ? ScreenRole::FrontCenter : ScreenRole::FrontLeft;
}

ScreenLayout make_layout(const SynthConfig& cfg) {
    ScreenLayout layout;
    layout.et_width = kEtWidth;
    layout.et_height = kEtHeight;
    const int vs = cfg.view_size;
    for (int v = 0; v < cfg.n_screens; ++v) {
        ScreenSpec s;
        s.screen_id = v;
        s.role = role_for_view(v, cfg.n_screens);
        const double x0 = static_cast<double>(v) * vs;
        const double x1 = x0 + vs;
        s.scene_quad = {{{x0, 0.0}, {x1, 0.0}, {x1, static_cast<double>(vs)}, {x0, static_cast<double>(vs)}}};
        s.tags[2 * v] = kLeftTagUnit;
        s.tags[2 * v + 1] = kRightTagUnit;
        layout.screens.push_back(std::move(s));
    }
    layout.validate();
    return layout;
}

InstanceMask make_instances(const SynthConfig& cfg, const SceneGeometry& g, SplitMix64& rng) {
    InstanceMask mask;
    mask.ids = IdGrid(g.width, g.height, 0);
    auto fill = [&](const PixelRect& r, uint16_t id) {
        for (int y = r.y0; y < r.y1; ++y)
            for (int x = r.x0; x < r.x1; ++x) mask.ids.at(x, y) = id;
    };
    for (int v = 0; v < cfg.n_screens; ++v) {
        for (int s = 0; s < 2; ++s) {
            const auto& site = g.sites[v][s];
            fill(site.rect, site.instance);
            mask.class_of[site.instance] = static_cast<uint16_t>(1 + rng.next_u64() % 5);
        }
        const uint16_t decoy_id = static_cast<uint16_t>(3 * v + 3);
        fill(g.decoys[v], decoy_id);
        mask.class_of[decoy_id] = 6;  // building: road-user filter must drop it
    }
    mask.validate();
    return mask;
}

std::vector<DwellSegment> script_random(const SynthConfig& cfg, const SceneGeometry& g, SplitMix64& rng) {
    std::vector<DwellSegment> segments;
    int t = 0;
    int prev_view = -1;
    while (t < cfg.n_frames) {
        int len = 32 + static_cast<int>(rng.next_u64() % 8);
        const int view = prev_view < 0 ? static_cast<int>(rng.next_u64() % cfg.n_screens)
                                       : (prev_view + 1 + static_cast<int>(rng.next_u64() % (cfg.n_screens - 1))) %
                                             cfg.n_screens;
        const int site = static_cast<int>(rng.next_u64() % 3);
        if (cfg.n_frames - (t + len) < 32) len = cfg.n_frames - t;
        DwellSegment seg;
        seg.begin = t;
        seg.end = t + len;
        seg.view = view;
        seg.site = site;
        seg.anchor = g.sites[view][site].anchor;
        seg.instance_id = g.sites[view][site].instance;
        segments.push_back(seg);
        t += len;
        prev_view = view;
    }
    return segments;
}

std::vector<DwellSegment> script_rear_demo(const SynthConfig& cfg, const SceneGeometry& g) {
    // Exactly 6 of the 100 fixations land on mirror screens.
    std::vector<int> view_of(cfg.n_frames, 2);
    const int mirror_frames[6] = {10, 25, 40, 55, 70, 85};
    for (int i = 0; i < 6; ++i) view_of[mirror_frames[i]] = i < 3 ? 0 : 4;
    std::vector<DwellSegment> segments;
    for (int t = 0; t < cfg.n_frames; ++t) {
        if (!segments.empty() && segments.back().view == view_of[t]) {
            segments.back().end = t + 1;
            continue;
        }
        DwellSegment seg;
        seg.begin = t;
        seg.end = t + 1;
        seg.view = view_of[t];
        seg.site = 0;
        seg.anchor = g.sites[seg.view][0].anchor;
        seg.instance_id = g.sites[seg.view][0].instance;
        segments.push_back(seg);
    }
    return segments;
}

// Proves that no dwell's blob can reach a rectangle other than its target,
// and that background blobs stay inside the building decoy.
void check_placement(const SynthConfig& cfg, const SceneGeometry& g) {
    const double radius = blob_radius(g, g.jitter_scene) + 0.5;
    for (int v = 0; v < cfg.n_screens; ++v) {
        for (int s = 0; s < 3; ++s) {
            const Point2 a = g.sites[v][s].anchor;
            for (int v2 = 0; v2 < cfg.n_screens; ++v2)
                for (int s2 = 0; s2 < 2; ++s2) {
                    if (v2 == v && s2 == s) continue;
                    if (g.sites[v2][s2].rect.distance(a) <= radius)
                        fail(ErrorCode::BadConfig, "synth geometry: blob can reach a foreign instance");
                }
            if (s < 2) {
                for (const auto& decoy : g.decoys)
                    if (decoy.distance(a) <= radius)
                        fail(ErrorCode::BadConfig, "synth geometry: blob can reach a decoy");
            } else {
                // Every pixel center the background blob can touch must lie inside
                // this view's decoy rectangle.
                const auto& d = g.decoys[v];
                if (std::ceil(a.x - radius) < d.x0 || std::floor(a.x + radius) > d.x1 - 1 ||
                    std::ceil(a.y - radius) < d.y0 || std::floor(a.y + radius) > d.y1 - 1)
                    fail(ErrorCode::BadConfig, "synth geometry: decoy does not cover the background blob");
            }
        }
    }
}

std::vector<std::set<uint16_t>> attended_truth(const SynthConfig& cfg, const SceneGeometry& g,
                                               const std::vector<DwellSegment>& segments) {
    check_placement(cfg, g);
    std::vector<std::set<uint16_t>> truth(cfg.n_frames);
    const double r = g.jitter_scene;
    for (int t = 0; t < cfg.n_frames; ++t) {
        const int lo = std::max(0, t - 15);
        const int hi = std::min(cfg.n_frames - 1, t + 15);
        struct Part {
            const DwellSegment* seg;
            long count;
        };
        std::vector<Part> parts;
        for (const auto& seg : segments) {
            const long n = std::min(hi, seg.end - 1) - std::max(lo, seg.begin) + 1;
            if (n > 0) parts.push_back({&seg, n});
        }
        if (parts.size() > 2) fail(ErrorCode::BadConfig, "synth script: window spans more than two dwells");
        for (size_t i = 0; i < parts.size(); ++i) {
            if (parts[i].seg->site == 2) continue;
            const long n_self = parts[i].count;
            const long n_other = parts.size() == 2 ? parts[1 - i].count : 0;
            double sep = 0.0;
            if (parts.size() == 2) {
                const Point2 d = parts[0].seg->anchor - parts[1].seg->anchor;
                sep = std::hypot(d.x, d.y);
            }
            const double reach = g.sites[parts[i].seg->view][parts[i].seg->site].rect.reach_from(parts[i].seg->anchor);
            const auto verdict = decide_survival(g, r, n_self, n_other, sep, reach);
            if (!verdict) fail(ErrorCode::BadConfig, "synth script: undecidable window at frame " + std::to_string(t));
            if (*verdict) truth[t].insert(parts[i].seg->instance_id);
        }
    }
    return truth;
}

Point2 gaze_et_px(const SceneGeometry& g, const SynthConfig& cfg, const DwellSegment& seg, Point2 jitter) {
    const int vs = cfg.view_size;
    const double u = (seg.anchor.x - seg.view * vs) / vs;
    const double w = seg.anchor.y / vs;
    return {screen_et_x(seg.view) + u * kScreenEtW + jitter.x, kScreenEtY + w * kScreenEtH + jitter.y};
}

}  // namespace

void SynthConfig::validate() const {
    if (preset != "random" && preset != "rear-demo") fail(ErrorCode::BadConfig, "unknown synth preset '" + preset + "'");
    if (n_screens < 1) fail(ErrorCode::BadConfig, "synth needs at least one screen");
    if (n_screens > 5) fail(ErrorCode::BadConfig, "synth supports at most five screens");
    if (view_size < 32) fail(ErrorCode::BadConfig, "synth view size too small");
    if (preset == "rear-demo") {
        if (n_frames != 100) fail(ErrorCode::BadConfig, "rear-demo preset requires exactly 100 frames");
        if (n_screens != 5) fail(ErrorCode::BadConfig, "rear-demo preset requires all five screens");
    } else if (n_frames < 32) {
        fail(ErrorCode::BadConfig, "random preset needs at least 32 frames");
    }
    if (jitter_px < 0 || jitter_px > 4) fail(ErrorCode::BadConfig, "jitter must be in [0, 4] eye-tracker px");
    if (fps <= 0) fail(ErrorCode::BadConfig, "fps must be positive");
}

SynthScenario plan_scenario(const SynthConfig& cfg) {
    cfg.validate();
    SynthScenario sc;
    sc.config = cfg;
    sc.layout = make_layout(cfg);
    const SceneGeometry g = make_geometry(cfg);
    if (g.gauss(g.jitter_scene + kHalfPixel) <= 0.51)
        fail(ErrorCode::BadConfig, "jitter too large for decidable windows");

    SplitMix64 rng(cfg.seed);
    sc.instances = make_instances(cfg, g, rng);
    sc.segments = cfg.preset == "rear-demo" ? script_rear_demo(cfg, g) : script_random(cfg, g, rng);

    sc.screen_of_frame.assign(cfg.n_frames, 0);
    long mirror_count = 0;
    for (const auto& seg : sc.segments)
        for (int t = seg.begin; t < seg.end; ++t) {
            sc.screen_of_frame[t] = seg.view;
            if (is_mirror(role_for_view(seg.view, cfg.n_screens))) ++mirror_count;
        }
    sc.rear_fraction = static_cast<double>(mirror_count) / static_cast<double>(cfg.n_frames);

    sc.jitter_of_frame.reserve(cfg.n_frames);
    for (int t = 0; t < cfg.n_frames; ++t)
        sc.jitter_of_frame.push_back({rng.uniform(-cfg.jitter_px, cfg.jitter_px),
                                      rng.uniform(-cfg.jitter_px, cfg.jitter_px)});

    if (cfg.preset == "random") sc.attended_of_frame = attended_truth(cfg, g, sc.segments);
    return sc;
}

SynthScenario generate(const SynthConfig& cfg, const fs::path& out_dir) {
    SynthScenario sc = plan_scenario(cfg);
    const SceneGeometry g = make_geometry(cfg);
    fs::create_directories(out_dir);

    std::vector<FixationRecord> gaze;
    gaze.reserve(cfg.n_frames);
    for (const auto& seg : sc.segments)
        for (int t = seg.begin; t < seg.end; ++t) {
            const Point2 px = gaze_et_px(g, cfg, seg, sc.jitter_of_frame[t]);
            FixationRecord r;
            r.timestamp = (t + 0.5) / cfg.fps;
            r.x = px.x / kEtWidth;
            r.y = px.y / kEtHeight;
            r.confidence = 0.9;
            gaze.push_back(r);
        }
    write_gaze_csv(out_dir / "gaze.csv", gaze);

    std::vector<FrameDetections> detections(cfg.n_frames);
    for (int t = 0; t < cfg.n_frames; ++t) {
        detections[t].frame = t;
        for (const auto& screen : sc.layout.screens)
            for (const auto& [tag_id, unit] : screen.tags) {
                TagDetection d;
                d.tag_id = tag_id;
                for (int c = 0; c < 4; ++c) {
                    d.corners[c] = {screen_et_x(screen.screen_id) + unit[c].x * kScreenEtW,
                                    kScreenEtY + unit[c].y * kScreenEtH};
                }
                detections[t].detections.push_back(d);
            }
    }
    write_detections_csv(out_dir / "detections.csv", detections);

    write_agm_instance(out_dir / "instances.agm", sc.instances);
    write_layout(out_dir / "layout.ini", sc.layout);

    {
        auto out = std::ofstream(out_dir / "classes.csv", std::ios::trunc);
        out << "class_id,name,road_user\n";
        for (const auto& [id, name] : sc.classes.names())
            out << id << ',' << name << ',' << (sc.classes.is_road_user(id) ? 1 : 0) << '\n';
    }

    {
        auto out = std::ofstream(out_dir / "pipeline.ini", std::ios::trunc);
        out << "[window]\n";
        out << "k = 30\n";
        out << "sigma = " << format_double(g.sigma) << "\n";
        out << "fps = " << format_double(cfg.fps) << "\n\n";
        out << "[maps]\n";
        out << "width = " << g.width << "\n";
        out << "height = " << g.height << "\n\n";
        out << "[threshold]\n";
        out << "kind = relative\n";
        out << "value = 0.5\n\n";
        out << "[calibration]\n";
        out << "min_confidence = 0.6\n";
        out << "quad_margin = 0.02\n";
    }

    SessionManifest manifest;
    manifest.session_id = cfg.preset + "-" + std::to_string(cfg.seed);
    manifest.driver_id = "d00";
    manifest.town = 3;
    manifest.scenario_class = "unscripted";
    manifest.weather = "clear";
    manifest.fps = cfg.fps;
    manifest.gaze_log = "gaze.csv";
    char name[64];
    for (int t = 0; t < cfg.n_frames; ++t) {
        FrameEntry f;
        f.frame_id = t;
        for (int v = 0; v < 5; ++v) {
            std::snprintf(name, sizeof(name), "views/f%06d_v%d.png", t, v);
            f.view_paths[v] = name;
        }
        f.gaze_begin = t / cfg.fps;
        f.gaze_end = (t + 1) / cfg.fps;
        f.detections_path = "detections.csv";
        manifest.frames.push_back(std::move(f));
    }
    write_session_manifest(out_dir / "session.manifest", manifest);

    ordered_json truth;
    truth["preset"] = cfg.preset;
    truth["seed"] = cfg.seed;
    truth["n_frames"] = cfg.n_frames;
    truth["scene_width"] = g.width;
    truth["scene_height"] = g.height;
    truth["window_k"] = 30;
    truth["sigma"] = g.sigma;
    truth["threshold_ratio"] = 0.5;
    truth["require_stats"] = cfg.preset == "rear-demo";
    truth["rear_fraction"] = *sc.rear_fraction;
    ordered_json frames = ordered_json::array();
    for (int t = 0; t < cfg.n_frames; ++t) {
        ordered_json f;
        f["frame"] = t;
        f["screen"] = sc.screen_of_frame[t];
        if (!sc.attended_of_frame.empty()) {
            ordered_json ids = ordered_json::array();
            for (uint16_t id : sc.attended_of_frame[t]) ids.push_back(id);
            f["attended"] = ids;
        }
        frames.push_back(std::move(f));
    }
    truth["frames"] = std::move(frames);
    auto out = std::ofstream(out_dir / "truth.json", std::ios::trunc);
    out << truth.dump(2) << '\n';

    return sc;
}

VerifyReport verify(const fs::path& session_dir, const fs::path& run_dir) {
    const fs::path truth_path = session_dir / "truth.json";
    if (!fs::exists(truth_path)) fail(ErrorCode::MissingOutputs, "missing " + truth_path.string());
    std::ifstream in(truth_path);
    nlohmann::json truth;
    try {
        in >> truth;
    } catch (const std::exception& e) {
        fail(ErrorCode::ParseError, truth_path.string() + ": " + e.what());
    }

    VerifyReport report;
    auto note = [&](const std::string& line) {
        if (report.failures.size() < 10) report.failures.push_back(line);
    };

    const fs::path calibrated_path = run_dir / "calibrated.csv";
    if (!fs::exists(calibrated_path)) fail(ErrorCode::MissingOutputs, "missing " + calibrated_path.string());
    std::map<int, int> screen_of_frame;
    for (const auto& f : read_calibrated_csv(calibrated_path)) screen_of_frame[f.frame_id] = f.screen_id;

    const bool expect_attended = !truth["frames"].empty() && truth["frames"][0].contains("attended");
    std::map<int, std::set<uint16_t>> attended_of_frame;
    if (expect_attended) {
        const fs::path attended_path = run_dir / "attended_sets.json";
        if (!fs::exists(attended_path)) fail(ErrorCode::MissingOutputs, "missing " + attended_path.string());
        std::ifstream ain(attended_path);
        nlohmann::json doc;
        try {
            ain >> doc;
        } catch (const std::exception& e) {
            fail(ErrorCode::ParseError, attended_path.string() + ": " + e.what());
        }
        for (const auto& f : doc["frames"])
            for (const auto& id : f["attended"]) attended_of_frame[f["frame"].get<int>()].insert(id.get<uint16_t>());
    }

    for (const auto& f : truth["frames"]) {
        const int frame = f["frame"].get<int>();
        ++report.frames_checked;
        const auto it = screen_of_frame.find(frame);
        if (it == screen_of_frame.end() || it->second != f["screen"].get<int>()) {
            ++report.screen_mismatches;
            note("frame " + std::to_string(frame) + ": screen mismatch");
        }
        if (expect_attended) {
            std::set<uint16_t> want;
            for (const auto& id : f["attended"]) want.insert(id.get<uint16_t>());
            const auto got = attended_of_frame.find(frame);
            const std::set<uint16_t> got_set = got == attended_of_frame.end() ? std::set<uint16_t>{} : got->second;
            if (got_set != want) {
                ++report.attended_mismatches;
                note("frame " + std::to_string(frame) + ": attended set mismatch");
            }
        }
    }

    if (truth.value("require_stats", false)) {
        const fs::path stats_path = run_dir / "stats.json";
        if (!fs::exists(stats_path)) fail(ErrorCode::MissingOutputs, "missing " + stats_path.string());
        std::ifstream sin(stats_path);
        nlohmann::json stats;
        try {
            sin >> stats;
        } catch (const std::exception& e) {
            fail(ErrorCode::ParseError, stats_path.string() + ": " + e.what());
        }
        report.rear_checked = true;
        const double want = truth["rear_fraction"].get<double>();
        const double got = stats.value("rear_fraction", -1.0);
        report.rear_ok = got == want;
        if (!report.rear_ok) note("rear fraction mismatch");
    }
    return report;
}

}  // namespace gaze360::synth
