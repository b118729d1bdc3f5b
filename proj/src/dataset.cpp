#include "gaze360/dataset.hpp"

#include <algorithm>
#include <cmath>

namespace gaze360 {

void SessionManifest::validate() const {
    if (session_id.empty()) fail(ErrorCode::BadConfig, "manifest has no session id");
    if (fps != 30.0) fail(ErrorCode::BadConfig, "manifest fps must be 30");
    if (scenario_class != "unscripted" && scenario_class != "goal-directed" && scenario_class != "safety-critical")
        fail(ErrorCode::BadConfig, "unknown scenario class '" + scenario_class + "'");
    for (size_t i = 0; i < frames.size(); ++i) {
        if (frames[i].frame_id != static_cast<int>(i))
            fail(ErrorCode::BadConfig, "frame ids must be contiguous from 0");
        for (const auto& view : frames[i].view_paths)
            if (view.empty()) fail(ErrorCode::BadConfig, "frame " + std::to_string(i) + " is missing a view path");
    }
}

void ViewConcatSpec::validate() const {
    if (out_width <= 0 || out_height <= 0 || src_width <= 0 || src_height <= 0)
        fail(ErrorCode::BadConfig, "concat spec sizes must be positive");
    if (out_width % 5 != 0) fail(ErrorCode::BadConfig, "output width must be divisible by 5");
    std::set<ScreenRole> roles(order.begin(), order.end());
    if (roles.size() != 5) fail(ErrorCode::BadConfig, "view order must be a permutation of the five roles");
}

Point2 concat_view_transform(const ViewConcatSpec& spec, int view_index, Point2 p) {
    spec.validate();
    if (view_index < 0 || view_index >= 5)
        fail(ErrorCode::OutOfBounds, "view index " + std::to_string(view_index) + " not in [0,5)");
    if (p.x < 0 || p.x > spec.src_width || p.y < 0 || p.y > spec.src_height)
        fail(ErrorCode::OutOfBounds, "point outside the source view");
    const double slot = spec.out_width / 5.0;
    return {view_index * slot + p.x * slot / spec.src_width, p.y * spec.out_height / spec.src_height};
}

Split assign_split(const SessionManifest& manifest, const SplitSpec& spec) {
    if (spec.train_towns.count(manifest.town)) return Split::Train;
    if (spec.val_towns.count(manifest.town)) return Split::Val;
    fail(ErrorCode::UnknownTown, "town " + std::to_string(manifest.town) + " is in neither split");
}

GazeStats gaze_statistics(const std::vector<SessionGaze>& sessions, const ScreenLayout& layout) {
    GazeStats stats;
    for (const auto& session : sessions) {
        for (const auto& f : session.fixations) {
            ++stats.total_fixations;
            ++stats.per_screen_counts[f.screen_id];
        }
        if (session.manifest) {
            stats.per_driver_frames[session.manifest->driver_id] += session.manifest->frames.size();
            stats.per_town_seconds[session.manifest->town] +=
                static_cast<double>(session.manifest->frames.size()) / session.manifest->fps;
        }
    }
    if (stats.total_fixations == 0) return stats;

    // Aggregate counts first, divide once: fractions come out exact to the
    // last bit and sum to 1 over assigned fixations.
    std::map<std::string, size_t> role_counts;
    size_t mirror_count = 0;
    for (const auto& [screen_id, count] : stats.per_screen_counts) {
        const ScreenSpec* screen = layout.find_screen(screen_id);
        const std::string role = screen ? to_string(screen->role) : "unknown";
        role_counts[role] += count;
        if (screen && is_mirror(screen->role)) mirror_count += count;
    }
    const double total = static_cast<double>(stats.total_fixations);
    for (const auto& [role, count] : role_counts) stats.per_role_fraction[role] = static_cast<double>(count) / total;
    stats.rear_fraction = static_cast<double>(mirror_count) / total;
    return stats;
}

std::vector<int> window_sampler(const SessionManifest& manifest, int t, int T) {
    if (T < 1) fail(ErrorCode::BadConfig, "window length must be >= 1");
    if (t < T - 1)
        fail(ErrorCode::InsufficientHistory,
             "frame " + std::to_string(t) + " has fewer than " + std::to_string(T) + " frames of history");
    if (t >= static_cast<int>(manifest.frames.size()))
        fail(ErrorCode::OutOfBounds, "frame " + std::to_string(t) + " not in session");
    std::vector<int> out(static_cast<size_t>(T));
    for (int i = 0; i < T; ++i) out[i] = t - T + 1 + i;
    return out;
}

}  // namespace gaze360
