#include "gaze360/pipeline.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "gaze360/attended.hpp"
#include "gaze360/formats.hpp"
#include "gaze360/parallel.hpp"

namespace gaze360::pipeline {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

fs::path resolve(const fs::path& base_file, const std::string& rel) {
    const fs::path p(rel);
    if (p.is_absolute()) return p;
    return base_file.parent_path() / p;
}

void require_file(const fs::path& p) {
    if (!fs::exists(p)) fail(ErrorCode::IoError, "missing input file " + p.string());
}

std::string frame_name(int frame_id, const char* ext) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "f%06d.%s", frame_id, ext);
    return buf;
}

void write_json(const fs::path& path, const ordered_json& doc) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(ErrorCode::IoError, "cannot create " + path.string());
    out << doc.dump(2) << '\n';
}

double parse_numeric(const std::string& value, const std::string& key) {
    try {
        size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        fail(ErrorCode::BadConfig, "config key '" + key + "': bad number '" + value + "'");
    }
}

}  // namespace

void PipelineConfig::validate() const {
    window.validate();
    if (map_width <= 0 || map_height <= 0) fail(ErrorCode::BadConfig, "map size must be positive");
    if (threshold.value < 0) fail(ErrorCode::BadConfig, "threshold must be nonnegative");
    if (threshold.kind == ThresholdPolicy::Kind::Relative && threshold.value > 1)
        fail(ErrorCode::BadConfig, "relative threshold ratio must be in [0, 1]");
    if (calibration.min_confidence < 0 || calibration.min_confidence > 1)
        fail(ErrorCode::BadConfig, "min_confidence must be in [0, 1]");
    if (calibration.quad_margin < 0 || calibration.quad_margin > 1)
        fail(ErrorCode::BadConfig, "quad_margin must be in [0, 1]");
    if (epsilon < 0) fail(ErrorCode::BadConfig, "epsilon must be nonnegative");
    if (jobs < 0) fail(ErrorCode::BadConfig, "jobs must be positive");
}

void load_config_file(const fs::path& path, PipelineConfig& cfg) {
    for (const auto& section : read_config_sections(path)) {
        auto reject = [&](const std::string& key) {
            fail(ErrorCode::BadConfig,
                 path.string() + ": unknown config key '" + key + "' in section [" + section.name + "]");
        };
        if (section.name == "paths") {
            for (const auto& [key, value] : section.entries) {
                if (key == "session") cfg.session = resolve(path, value);
                else if (key == "layout") cfg.layout = resolve(path, value);
                else if (key == "output") cfg.output = resolve(path, value);
                else reject(key);
            }
        } else if (section.name == "window") {
            for (const auto& [key, value] : section.entries) {
                if (key == "k") cfg.window.k = static_cast<int>(parse_numeric(value, key));
                else if (key == "sigma") cfg.window.sigma = parse_numeric(value, key);
                else if (key == "fps") cfg.window.fps = parse_numeric(value, key);
                else reject(key);
            }
        } else if (section.name == "maps") {
            for (const auto& [key, value] : section.entries) {
                if (key == "width") cfg.map_width = static_cast<int>(parse_numeric(value, key));
                else if (key == "height") cfg.map_height = static_cast<int>(parse_numeric(value, key));
                else reject(key);
            }
        } else if (section.name == "threshold") {
            for (const auto& [key, value] : section.entries) {
                if (key == "kind") {
                    if (value == "relative") cfg.threshold.kind = ThresholdPolicy::Kind::Relative;
                    else if (value == "absolute") cfg.threshold.kind = ThresholdPolicy::Kind::Absolute;
                    else fail(ErrorCode::BadConfig, "threshold kind must be relative|absolute");
                } else if (key == "value") {
                    cfg.threshold.value = parse_numeric(value, key);
                } else {
                    reject(key);
                }
            }
        } else if (section.name == "calibration") {
            for (const auto& [key, value] : section.entries) {
                if (key == "min_confidence") cfg.calibration.min_confidence = parse_numeric(value, key);
                else if (key == "quad_margin") cfg.calibration.quad_margin = parse_numeric(value, key);
                else reject(key);
            }
        } else if (section.name == "metrics") {
            for (const auto& [key, value] : section.entries) {
                if (key == "epsilon") cfg.epsilon = parse_numeric(value, key);
                else if (key == "lambda_sal") cfg.lambda_sal = parse_numeric(value, key);
                else if (key == "lambda_seg") cfg.lambda_seg = parse_numeric(value, key);
                else reject(key);
            }
        } else if (section.name == "run") {
            for (const auto& [key, value] : section.entries) {
                if (key == "jobs") cfg.jobs = static_cast<int>(parse_numeric(value, key));
                else reject(key);
            }
        } else {
            fail(ErrorCode::BadConfig, path.string() + ": unknown config section [" + section.name + "]");
        }
    }
}

CalibrateSummary calibrate_session(const PipelineConfig& cfg, bool dry_run) {
    cfg.validate();
    require_file(cfg.session);
    require_file(cfg.layout);
    const SessionManifest manifest = read_session_manifest(cfg.session);
    const ScreenLayout layout = read_layout(cfg.layout);
    const auto gaze = read_gaze_csv(resolve(cfg.session, manifest.gaze_log));

    std::map<std::string, std::map<int, std::vector<TagDetection>>> detection_cache;
    auto detections_for = [&](const FrameEntry& frame) -> const std::vector<TagDetection>& {
        auto [it, inserted] = detection_cache.try_emplace(frame.detections_path);
        if (inserted) it->second = read_detections_csv(resolve(cfg.session, frame.detections_path));
        static const std::vector<TagDetection> empty;
        const auto found = it->second.find(frame.frame_id);
        return found == it->second.end() ? empty : found->second;
    };

    CalibrateSummary summary;
    summary.total = static_cast<long>(gaze.size());
    std::vector<CalibratedFixation> calibrated;
    size_t gi = 0;
    for (const auto& frame : manifest.frames) {
        while (gi < gaze.size() && gaze[gi].timestamp < frame.gaze_begin) {
            ++gi;
            ++summary.unmatched;
        }
        while (gi < gaze.size() && gaze[gi].timestamp < frame.gaze_end) {
            const auto& record = gaze[gi];
            try {
                auto fix = calibrate_fixation(record, detections_for(frame), layout, cfg.calibration);
                if (!fix) {
                    ++summary.off_screen;
                } else {
                    fix->frame_id = frame.frame_id;
                    calibrated.push_back(*fix);
                    ++summary.calibrated;
                }
            } catch (const Error& e) {
                if (e.code() == ErrorCode::LowConfidence) ++summary.low_confidence;
                else if (e.code() == ErrorCode::ProjectionOutsideScreen) ++summary.outside_quad;
                else throw;
            }
            ++gi;
        }
    }
    summary.unmatched += static_cast<long>(gaze.size() - gi);

    if (dry_run) return summary;
    fs::create_directories(cfg.output);
    write_calibrated_csv(cfg.output / "calibrated.csv", calibrated);
    ordered_json doc;
    doc["total"] = summary.total;
    doc["calibrated"] = summary.calibrated;
    doc["low_confidence"] = summary.low_confidence;
    doc["off_screen"] = summary.off_screen;
    doc["outside_quad"] = summary.outside_quad;
    doc["unmatched"] = summary.unmatched;
    write_json(cfg.output / "calibrate_summary.json", doc);
    return summary;
}

BuildMapsSummary build_maps(const PipelineConfig& cfg, const fs::path& calibrated_csv, bool dry_run,
                            bool emit_fixmaps) {
    cfg.validate();
    require_file(cfg.session);
    require_file(calibrated_csv);
    const SessionManifest manifest = read_session_manifest(cfg.session);
    const auto calibrated = read_calibrated_csv(calibrated_csv);

    const int n = static_cast<int>(manifest.frames.size());
    std::vector<std::vector<Point2>> by_frame(n);
    for (const auto& f : calibrated) {
        if (f.frame_id < 0 || f.frame_id >= n)
            fail(ErrorCode::ParseError, "calibrated fixation references unknown frame " + std::to_string(f.frame_id));
        by_frame[f.frame_id].push_back(f.scene);
    }

    BuildMapsSummary summary;
    summary.frames = n;
    if (dry_run) return summary;

    fs::create_directories(cfg.output / "maps");
    if (emit_fixmaps) fs::create_directories(cfg.output / "fixmaps");

    const int half = cfg.window.k / 2;
    std::vector<FrameFile> map_manifest(n);
    std::vector<FrameFile> fix_manifest(emit_fixmaps ? n : 0);
    std::vector<char> valid_flags(n, 0);

    const auto started = std::chrono::steady_clock::now();
    parallel_for(n, resolve_jobs(cfg.jobs), [&](long t) {
        std::vector<Point2> window;
        const int lo = std::max(0, static_cast<int>(t) - half);
        const int hi = std::min(n - 1, static_cast<int>(t) + half);
        for (int f = lo; f <= hi; ++f) window.insert(window.end(), by_frame[f].begin(), by_frame[f].end());
        const AttentionMap map = build_attention_map(window, cfg.window, cfg.map_width, cfg.map_height);
        valid_flags[t] = map.valid ? 1 : 0;
        const std::string rel = "maps/" + frame_name(static_cast<int>(t), "agz");
        write_agz(cfg.output / rel, map);
        map_manifest[t] = {static_cast<int>(t), rel, map.valid};
        if (emit_fixmaps) {
            SemanticMask points;
            points.class_ids = IdGrid(cfg.map_width, cfg.map_height, 0);
            for (const auto& p : by_frame[t]) {
                const int x = static_cast<int>(std::lround(p.x));
                const int y = static_cast<int>(std::lround(p.y));
                if (x >= 0 && x < cfg.map_width && y >= 0 && y < cfg.map_height) points.class_ids.at(x, y) = 1;
            }
            const std::string fix_rel = "fixmaps/" + frame_name(static_cast<int>(t), "agm");
            write_agm_semantic(cfg.output / fix_rel, points);
            fix_manifest[t] = {static_cast<int>(t), fix_rel, !by_frame[t].empty()};
        }
    });
    summary.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    for (char v : valid_flags) summary.valid_maps += v;
    write_frame_manifest(cfg.output / "maps_manifest.tsv", map_manifest);
    if (emit_fixmaps) write_frame_manifest(cfg.output / "fixmaps_manifest.tsv", fix_manifest);
    return summary;
}

ExtractSummary extract_attended_run(const PipelineConfig& cfg, const fs::path& maps_manifest,
                                    const fs::path& instances, const fs::path& classes_csv, bool dry_run) {
    cfg.validate();
    require_file(maps_manifest);
    require_file(instances);
    const auto maps = read_frame_manifest(maps_manifest);
    const ClassTable classes = classes_csv.empty() ? ClassTable::standard() : read_class_table(classes_csv);

    // A single .agm serves every frame; anything else is a per-frame manifest.
    const bool shared_instances = instances.extension() == ".agm";
    InstanceMask shared_mask;
    std::map<int, std::string> instance_paths;
    if (shared_instances) {
        shared_mask = read_agm_instance(instances);
    } else {
        for (const auto& e : read_frame_manifest(instances)) instance_paths[e.frame_id] = e.path;
    }

    ExtractSummary summary;
    summary.frames = static_cast<int>(maps.size());
    if (dry_run) return summary;

    fs::create_directories(cfg.output / "attended");
    const long n = static_cast<long>(maps.size());
    std::vector<FrameFile> out_manifest(n);
    std::vector<std::vector<uint16_t>> attended(n);
    std::vector<char> valid_flags(n, 0);

    parallel_for(n, resolve_jobs(cfg.jobs), [&](long i) {
        const auto& entry = maps[i];
        out_manifest[i] = {entry.frame_id, "-", false};
        if (!entry.valid) return;
        const AttentionMap map = read_agz(resolve(maps_manifest, entry.path));
        if (!map.valid) return;

        InstanceMask local;
        const InstanceMask* inst = &shared_mask;
        if (!shared_instances) {
            const auto it = instance_paths.find(entry.frame_id);
            if (it == instance_paths.end())
                fail(ErrorCode::MissingOutputs, "no instance mask for frame " + std::to_string(entry.frame_id));
            local = read_agm_instance(resolve(instances, it->second));
            inst = &local;
        }

        const auto ids = attended_instance_ids(map, *inst, cfg.threshold, classes);
        attended[i].assign(ids.begin(), ids.end());
        const SemanticMask mask = extract_attended(map, *inst, cfg.threshold, classes);
        const std::string rel = "attended/" + frame_name(entry.frame_id, "agm");
        write_agm_semantic(cfg.output / rel, mask);
        out_manifest[i] = {entry.frame_id, rel, true};
        valid_flags[i] = 1;
    });

    ordered_json doc;
    ordered_json frames = ordered_json::array();
    for (long i = 0; i < n; ++i) {
        summary.valid_frames += valid_flags[i];
        summary.attended_instances += static_cast<long>(attended[i].size());
        ordered_json f;
        f["frame"] = maps[i].frame_id;
        f["valid"] = valid_flags[i] != 0;
        f["attended"] = attended[i];
        frames.push_back(std::move(f));
    }
    doc["frames"] = std::move(frames);
    write_json(cfg.output / "attended_sets.json", doc);
    write_frame_manifest(cfg.output / "attended_manifest.tsv", out_manifest);
    return summary;
}

namespace {

ByteGrid to_fixation_grid(const IdGrid& ids) {
    ByteGrid grid(ids.width, ids.height, 0);
    for (size_t i = 0; i < ids.values.size(); ++i) grid.values[i] = ids.values[i] != 0 ? 1 : 0;
    return grid;
}

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

EvalReport evaluate_run(const PipelineConfig& cfg, const fs::path& gt_manifest, const fs::path& pred_manifest,
                        bool dry_run) {
    cfg.validate();
    require_file(gt_manifest);
    require_file(pred_manifest);
    const auto gt_entries = read_eval_manifest(gt_manifest);
    const auto pred_entries = read_eval_manifest(pred_manifest);
    if (gt_entries.size() != pred_entries.size())
        fail(ErrorCode::ShapeMismatch, "eval manifests differ in length: " + std::to_string(gt_entries.size()) +
                                           " vs " + std::to_string(pred_entries.size()));
    for (size_t i = 0; i < gt_entries.size(); ++i)
        if (gt_entries[i].frame_id != pred_entries[i].frame_id)
            fail(ErrorCode::ShapeMismatch, "eval manifests disagree on frame " + gt_entries[i].frame_id);

    EvalReport report;
    report.frames.resize(gt_entries.size());
    if (dry_run) return report;

    parallel_for(static_cast<long>(gt_entries.size()), resolve_jobs(cfg.jobs), [&](long i) {
        const auto& gt = gt_entries[i];
        const auto& pred = pred_entries[i];
        FrameEval& out = report.frames[i];
        out.frame_id = gt.frame_id;
        out.valid = true;
        auto attempt = [&](const char* what, auto&& fn) {
            try {
                fn();
            } catch (const Error& e) {
                if (out.valid) {
                    out.valid = false;
                    out.skip_reason = std::string(what) + ": " + std::string(to_string(e.code()));
                }
            }
        };
        if (gt.sal && pred.sal) {
            const AttentionMap x = read_agz(resolve(gt_manifest, *gt.sal));
            const AttentionMap y = read_agz(resolve(pred_manifest, *pred.sal));
            attempt("kld", [&] { out.kld = kld(x.grid, y.grid, cfg.epsilon); });
            attempt("cc", [&] { out.cc = cc(x.grid, y.grid); });
            attempt("sim", [&] { out.sim = sim(x.grid, y.grid); });
            if (gt.fix) {
                FixationPointMap fix{to_fixation_grid(read_agm_semantic(resolve(gt_manifest, *gt.fix)).class_ids)};
                attempt("nss", [&] { out.nss = nss(y.grid, fix); });
            }
        } else if (gt.fix && pred.sal) {
            const AttentionMap y = read_agz(resolve(pred_manifest, *pred.sal));
            FixationPointMap fix{to_fixation_grid(read_agm_semantic(resolve(gt_manifest, *gt.fix)).class_ids)};
            attempt("nss", [&] { out.nss = nss(y.grid, fix); });
        }
        if (gt.seg && pred.seg) {
            const SemanticMask x = read_agm_semantic(resolve(gt_manifest, *gt.seg));
            const SemanticMask y = read_agm_semantic(resolve(pred_manifest, *pred.seg));
            attempt("dice", [&] { out.dice = dice(x, y); });
            attempt("iou", [&] { out.iou = iou(x, y); });
        }
    });
    report.finalize();

    fs::create_directories(cfg.output);
    std::ofstream csv(cfg.output / "eval_report.csv", std::ios::trunc);
    if (!csv) fail(ErrorCode::IoError, "cannot create eval_report.csv");
    csv << "frame,kld,cc,nss,sim,dice,iou,valid,skip_reason\n";
    for (const auto& f : report.frames)
        csv << f.frame_id << ',' << cell(f.kld) << ',' << cell(f.cc) << ',' << cell(f.nss) << ',' << cell(f.sim)
            << ',' << cell(f.dice) << ',' << cell(f.iou) << ',' << (f.valid ? "1" : "0") << ',' << f.skip_reason
            << '\n';
    csv << "mean," << cell(report.mean_kld) << ',' << cell(report.mean_cc) << ',' << cell(report.mean_nss) << ','
        << cell(report.mean_sim) << ',' << cell(report.mean_dice) << ',' << cell(report.mean_iou) << ','
        << report.valid_count << ',' << report.skip_count << '\n';

    ordered_json doc;
    doc["frames"] = report.frames.size();
    doc["valid"] = report.valid_count;
    doc["skipped"] = report.skip_count;
    auto put = [&](const char* key, const std::optional<double>& v) {
        if (v) doc[key] = *v;
        else doc[key] = nullptr;
    };
    put("mean_kld", report.mean_kld);
    put("mean_cc", report.mean_cc);
    put("mean_nss", report.mean_nss);
    put("mean_sim", report.mean_sim);
    put("mean_dice", report.mean_dice);
    put("mean_iou", report.mean_iou);
    write_json(cfg.output / "eval_summary.json", doc);
    return report;
}

GazeStats stats_run(const PipelineConfig& cfg, const std::vector<fs::path>& sessions,
                    const std::vector<fs::path>& calibrated, bool dry_run) {
    cfg.validate();
    if (sessions.size() != calibrated.size())
        fail(ErrorCode::BadConfig, "each session manifest needs exactly one calibrated csv");
    require_file(cfg.layout);
    const ScreenLayout layout = read_layout(cfg.layout);

    std::vector<SessionManifest> manifests(sessions.size());
    std::vector<SessionGaze> gaze(sessions.size());
    for (size_t i = 0; i < sessions.size(); ++i) {
        require_file(sessions[i]);
        require_file(calibrated[i]);
        manifests[i] = read_session_manifest(sessions[i]);
        gaze[i].fixations = read_calibrated_csv(calibrated[i]);
    }
    for (size_t i = 0; i < sessions.size(); ++i) gaze[i].manifest = &manifests[i];

    const GazeStats stats = gaze_statistics(gaze, layout);
    if (dry_run) return stats;

    ordered_json doc;
    doc["total_fixations"] = stats.total_fixations;
    ordered_json screens = ordered_json::object();
    for (const auto& [id, count] : stats.per_screen_counts) screens[std::to_string(id)] = count;
    doc["per_screen_counts"] = std::move(screens);
    ordered_json roles = ordered_json::object();
    for (const auto& [role, fraction] : stats.per_role_fraction) roles[role] = fraction;
    doc["per_role_fraction"] = std::move(roles);
    doc["rear_fraction"] = stats.rear_fraction;
    ordered_json drivers = ordered_json::object();
    for (const auto& [driver, frames] : stats.per_driver_frames) drivers[driver] = frames;
    doc["per_driver_frames"] = std::move(drivers);
    ordered_json towns = ordered_json::object();
    for (const auto& [town, seconds] : stats.per_town_seconds) towns[std::to_string(town)] = seconds;
    doc["per_town_seconds"] = std::move(towns);
    write_json(cfg.output / "stats.json", doc);
    return stats;
}

SplitSummary split_run(const PipelineConfig& cfg, const std::vector<fs::path>& manifests, bool dry_run) {
    cfg.validate();
    SplitSummary summary;
    std::vector<std::string> train, val;
    for (const auto& path : manifests) {
        require_file(path);
        const SessionManifest manifest = read_session_manifest(path);
        if (assign_split(manifest, cfg.split) == Split::Train) {
            train.push_back(path.string());
            ++summary.train;
        } else {
            val.push_back(path.string());
            ++summary.val;
        }
    }
    if (dry_run) return summary;
    fs::create_directories(cfg.output);
    std::ofstream tout(cfg.output / "train.txt", std::ios::trunc);
    for (const auto& p : train) tout << p << '\n';
    std::ofstream vout(cfg.output / "val.txt", std::ios::trunc);
    for (const auto& p : val) vout << p << '\n';
    return summary;
}

}  // namespace gaze360::pipeline
