#pragma once

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gaze360/geometry.hpp"
#include "gaze360/types.hpp"

namespace gaze360 {

struct FrameEntry {
    int frame_id = 0;
    std::array<std::string, 5> view_paths;
    double gaze_begin = 0.0;  // gaze-log span [begin, end), seconds
    double gaze_end = 0.0;
    std::string detections_path;
};

struct SessionManifest {
    std::string session_id;
    std::string driver_id;
    int town = 0;
    std::string scenario_class;  // unscripted | goal-directed | safety-critical
    std::string weather;
    double fps = 30.0;
    std::string gaze_log;  // session gaze CSV, relative to the manifest
    std::vector<FrameEntry> frames;

    // Throws BadConfig on non-contiguous frame ids, fps != 30, or a bad
    // scenario class.
    void validate() const;
};

// Geometry of the five-view horizontal concatenation.
struct ViewConcatSpec {
    std::array<ScreenRole, 5> order = {ScreenRole::MirrorLeft, ScreenRole::FrontLeft, ScreenRole::FrontCenter,
                                       ScreenRole::FrontRight, ScreenRole::MirrorRight};
    double src_width = 1280.0;
    double src_height = 720.0;
    int out_width = 1120;
    int out_height = 224;

    // Throws BadConfig when out_width is not divisible by 5 or the order is
    // not a permutation of the five roles.
    void validate() const;
};

// Maps a point inside view `view_index` to the concatenated output frame:
// each view lands in its own out_width/5 slot, scaled from the source size.
// Throws OutOfBounds for a bad view index or a point outside the source.
Point2 concat_view_transform(const ViewConcatSpec& spec, int view_index, Point2 point_in_view);

enum class Split { Train, Val };

struct SplitSpec {
    std::set<int> train_towns = {2, 3, 4, 7, 10, 11};
    std::set<int> val_towns = {1, 5, 6, 12, 15};
};

// Membership by town set; throws UnknownTown when the town is in neither.
Split assign_split(const SessionManifest& manifest, const SplitSpec& spec = {});

struct SessionGaze {
    const SessionManifest* manifest = nullptr;
    std::vector<CalibratedFixation> fixations;
};

struct GazeStats {
    size_t total_fixations = 0;
    std::map<int, size_t> per_screen_counts;          // screen_id -> fixations
    std::map<std::string, double> per_role_fraction;  // role name -> fraction of fixations
    double rear_fraction = 0.0;                       // mirror-left + mirror-right
    std::map<std::string, size_t> per_driver_frames;
    std::map<int, double> per_town_seconds;
};

// Per-screen fixation fractions, per-driver frame counts, per-town durations.
// Fractions are over assigned fixations and sum to 1; empty input yields
// all-zero stats.
GazeStats gaze_statistics(const std::vector<SessionGaze>& sessions, const ScreenLayout& layout);

// The model-input sampler: the T consecutive frames ending at t, i.e.
// [t - T + 1, t]. Throws InsufficientHistory when t < T - 1.
std::vector<int> window_sampler(const SessionManifest& manifest, int t, int T = 16);

}  // namespace gaze360
