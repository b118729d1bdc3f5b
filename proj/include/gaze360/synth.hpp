#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gaze360/attended.hpp"
#include "gaze360/geometry.hpp"

namespace gaze360::synth {

// One scripted dwell: every frame in [begin, end) fixates the same scene
// anchor, plus per-frame jitter in the eye-tracker frame.
struct DwellSegment {
    int begin = 0;
    int end = 0;
    int view = 0;
    int site = 0;  // 0, 1: road-user instance sites; 2: background point
    Point2 anchor;
    uint16_t instance_id = 0;  // 0 when the target is background
};

struct SynthConfig {
    std::string preset = "random";  // "random" or "rear-demo"
    uint64_t seed = 0;
    int n_frames = 124;
    int n_screens = 5;
    int view_size = 112;     // scene is (n_screens*view_size) x view_size
    double jitter_px = 1.0;  // eye-tracker-frame jitter amplitude
    double fps = 30.0;

    // Throws BadConfig: preset unknown, n_screens < 1, n_frames too short
    // for the preset, jitter so large that windows become undecidable.
    void validate() const;
};

struct SynthScenario {
    SynthConfig config;
    ScreenLayout layout;
    ClassTable classes = ClassTable::standard();
    std::vector<DwellSegment> segments;
    InstanceMask instances;
    std::vector<int> screen_of_frame;
    // Per-frame eye-tracker-px jitter, drawn last from the same seed stream.
    std::vector<Point2> jitter_of_frame;
    // Attended-set truth per frame, derived analytically from the script.
    // Empty when the preset does not guarantee decidable windows (rear-demo).
    std::vector<std::set<uint16_t>> attended_of_frame;
    std::optional<double> rear_fraction;

    int scene_width() const { return config.n_screens * config.view_size; }
    int scene_height() const { return config.view_size; }
};

// Builds the scenario in memory: layout, instances, dwell script, and the
// analytic per-frame truth. Pure function of the config.
SynthScenario plan_scenario(const SynthConfig& cfg);

// Plans the scenario and writes the full on-disk session under out_dir:
// session.manifest, gaze.csv, detections.csv, instances.agm, classes.csv,
// layout.ini, pipeline.ini, truth.json. Byte-identical per (preset, seed).
SynthScenario generate(const SynthConfig& cfg, const std::filesystem::path& out_dir);

struct VerifyReport {
    int frames_checked = 0;
    int screen_mismatches = 0;
    int attended_mismatches = 0;
    bool rear_checked = false;
    bool rear_ok = true;
    std::vector<std::string> failures;  // first few mismatches, for the report

    bool pass() const { return screen_mismatches == 0 && attended_mismatches == 0 && rear_ok; }
};

// Compares pipeline outputs under run_dir (calibrated.csv, attended_sets.json,
// stats.json) against session_dir/truth.json. Exact equality required.
// Throws MissingOutputs when a file the truth calls for is absent.
VerifyReport verify(const std::filesystem::path& session_dir, const std::filesystem::path& run_dir);

}  // namespace gaze360::synth
