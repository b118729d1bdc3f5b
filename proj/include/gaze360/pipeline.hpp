#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gaze360/attention.hpp"
#include "gaze360/dataset.hpp"
#include "gaze360/geometry.hpp"
#include "gaze360/metrics.hpp"

namespace gaze360::pipeline {

// Everything the batch subcommands need, merged from defaults, an optional
// config file, and command-line flags (flags win).
struct PipelineConfig {
    std::filesystem::path session;  // session manifest path
    std::filesystem::path layout;
    std::filesystem::path output;  // output directory
    WindowConfig window;
    int map_width = 1120;
    int map_height = 224;
    ThresholdPolicy threshold;
    CalibrationOptions calibration;
    double epsilon = kKldEpsilon;
    double lambda_sal = 1.0;
    double lambda_seg = 1.0;
    SplitSpec split;
    int jobs = 0;  // 0: take GAZE360_JOBS, else 1

    // Throws BadConfig on out-of-range numerics.
    void validate() const;
};

// Applies a sectioned key = value file onto cfg. Unknown sections or keys
// are rejected (BadConfig).
void load_config_file(const std::filesystem::path& path, PipelineConfig& cfg);

struct CalibrateSummary {
    long total = 0;
    long calibrated = 0;
    long low_confidence = 0;
    long off_screen = 0;
    long outside_quad = 0;
    long unmatched = 0;  // fixations outside every frame's gaze span
};

// Reads the session manifest, gaze log, and per-frame detections; writes
// calibrated.csv and calibrate_summary.json under cfg.output.
CalibrateSummary calibrate_session(const PipelineConfig& cfg, bool dry_run);

struct BuildMapsSummary {
    int frames = 0;
    int valid_maps = 0;
    double seconds = 0.0;
};

// Builds the per-frame attention maps from calibrated fixations over the
// window [t - k/2, t + k/2] (clipped at sequence ends) and writes
// maps/f*.agz plus maps_manifest.tsv. With emit_fixmaps, also writes binary
// fixation-point grids (fixmaps/f*.agm + fixmaps_manifest.tsv).
BuildMapsSummary build_maps(const PipelineConfig& cfg, const std::filesystem::path& calibrated_csv, bool dry_run,
                            bool emit_fixmaps);

struct ExtractSummary {
    int frames = 0;
    int valid_frames = 0;
    long attended_instances = 0;
};

// Runs attended-object extraction over every valid map in maps_manifest.
// `instances` is either one AGM1 file (shared by all frames) or a frame
// manifest of per-frame AGM1 paths. Writes attended/f*.agm, an
// attended_manifest.tsv, and attended_sets.json.
ExtractSummary extract_attended_run(const PipelineConfig& cfg, const std::filesystem::path& maps_manifest,
                                    const std::filesystem::path& instances, const std::filesystem::path& classes_csv,
                                    bool dry_run);

// Pairs the two eval manifests frame by frame, computes every metric whose
// inputs are present, and writes eval_report.csv + eval_summary.json.
// Manifests of different length or with mismatched frame ids are a
// ShapeMismatch error.
EvalReport evaluate_run(const PipelineConfig& cfg, const std::filesystem::path& gt_manifest,
                        const std::filesystem::path& pred_manifest, bool dry_run);

// Aggregates gaze statistics over (session manifest, calibrated csv) pairs
// and writes stats.json.
GazeStats stats_run(const PipelineConfig& cfg, const std::vector<std::filesystem::path>& sessions,
                    const std::vector<std::filesystem::path>& calibrated, bool dry_run);

struct SplitSummary {
    int train = 0;
    int val = 0;
};

// Routes each session manifest to train.txt or val.txt by town.
SplitSummary split_run(const PipelineConfig& cfg, const std::vector<std::filesystem::path>& manifests, bool dry_run);

}  // namespace gaze360::pipeline
