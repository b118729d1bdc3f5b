#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gaze360/attended.hpp"
#include "gaze360/attention.hpp"
#include "gaze360/dataset.hpp"
#include "gaze360/geometry.hpp"
#include "gaze360/metrics.hpp"

namespace gaze360 {

// Shortest round-trip decimal representation; all text output goes through
// this so reruns are byte-identical.
std::string format_double(double v);

// --- Gaze log CSV: header "timestamp,x,y,confidence" ---------------------
std::vector<FixationRecord> read_gaze_csv(const std::filesystem::path& path);
void write_gaze_csv(const std::filesystem::path& path, const std::vector<FixationRecord>& records);

// --- Tag detections CSV: "frame,tag_id,x0,y0,x1,y1,x2,y2,x3,y3" ----------
struct FrameDetections {
    int frame = 0;
    std::vector<TagDetection> detections;
};
// Rows grouped by frame, preserving file order inside a frame.
std::map<int, std::vector<TagDetection>> read_detections_csv(const std::filesystem::path& path);
void write_detections_csv(const std::filesystem::path& path, const std::vector<FrameDetections>& frames);

// --- Calibrated fixations CSV: "frame,timestamp,x,y,screen_id" -----------
std::vector<CalibratedFixation> read_calibrated_csv(const std::filesystem::path& path);
void write_calibrated_csv(const std::filesystem::path& path, const std::vector<CalibratedFixation>& fixations);

// --- Screen layout config (key = value sections, one per screen) ---------
ScreenLayout read_layout(const std::filesystem::path& path);
void write_layout(const std::filesystem::path& path, const ScreenLayout& layout);

// --- AGZ1 attention map: magic "AGZ1", u32 LE width/height, f32 LE pixels,
//     row-major, top-left origin. Validity is derived on load: a map is
//     valid iff its values sum to 1 within 1e-4.
void write_agz(const std::filesystem::path& path, const AttentionMap& map);
AttentionMap read_agz(const std::filesystem::path& path);

// --- AGM1 mask: magic "AGM1", u32 width/height, u8 kind (0 semantic,
//     1 instance), u16 LE ids row-major; instance files end with CSV lines
//     "instance_id,class_id".
void write_agm_semantic(const std::filesystem::path& path, const SemanticMask& mask);
void write_agm_instance(const std::filesystem::path& path, const InstanceMask& mask);
SemanticMask read_agm_semantic(const std::filesystem::path& path);
InstanceMask read_agm_instance(const std::filesystem::path& path);

// --- Session manifest (line-delimited key = value header + frame records) -
SessionManifest read_session_manifest(const std::filesystem::path& path);
void write_session_manifest(const std::filesystem::path& path, const SessionManifest& manifest);

// --- Frame-file manifest: one "frame_id<TAB>path[<TAB>flag]" line per frame
struct FrameFile {
    int frame_id = 0;
    std::string path;
    bool valid = true;
};
std::vector<FrameFile> read_frame_manifest(const std::filesystem::path& path);
void write_frame_manifest(const std::filesystem::path& path, const std::vector<FrameFile>& entries);

// --- Evaluation manifest: "<frame_id> sal=<path> fix=<path> seg=<path>",
//     any subset of keys per line.
struct EvalEntry {
    std::string frame_id;
    std::optional<std::string> sal, fix, seg;
};
std::vector<EvalEntry> read_eval_manifest(const std::filesystem::path& path);
void write_eval_manifest(const std::filesystem::path& path, const std::vector<EvalEntry>& entries);

// --- Class table CSV: "class_id,name,road_user" ---------------------------
ClassTable read_class_table(const std::filesystem::path& path);

// --- Generic key = value config with [section] headers --------------------
struct ConfigSection {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;

    std::optional<std::string> get(const std::string& key) const;
};
std::vector<ConfigSection> read_config_sections(const std::filesystem::path& path);

}  // namespace gaze360
