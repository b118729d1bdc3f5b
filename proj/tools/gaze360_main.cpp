#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>

#include "gaze360/formats.hpp"
#include "gaze360/pipeline.hpp"
#include "gaze360/synth.hpp"

namespace {

using gaze360::Error;
using gaze360::ErrorCode;
namespace pl = gaze360::pipeline;

// Exit codes: 0 success, 1 verification failure, 2 usage error,
// 10 + error code for module errors, 70 for unexpected internal errors.
constexpr int kVerifyFailExit = 1;
constexpr int kUsageExit = 2;
constexpr int kModuleExitBase = 10;
constexpr int kInternalExit = 70;

void print_error_line(const std::string& code, const std::string& message) {
    nlohmann::ordered_json line;
    line["error"] = code;
    line["message"] = message;
    std::cerr << line.dump() << '\n';
}

struct CommonFlags {
    std::string config;
    int jobs = 0;
    bool dry_run = false;

    CLI::Option* config_opt = nullptr;
    CLI::Option* jobs_opt = nullptr;

    void add_to(CLI::App& sub) {
        config_opt = sub.add_option("--config", config, "Sectioned key = value config file; flags override it");
        jobs_opt = sub.add_option("--jobs", jobs, "Worker threads (default: GAZE360_JOBS or 1)");
        sub.add_flag("--dry-run", dry_run, "Validate inputs without writing outputs");
    }

    // Config file first, then explicit flags on top.
    pl::PipelineConfig base() const {
        pl::PipelineConfig cfg;
        if (config_opt->count() > 0) pl::load_config_file(config, cfg);
        if (jobs_opt->count() > 0) cfg.jobs = jobs;
        return cfg;
    }
};

struct Override {
    CLI::Option* opt = nullptr;
    std::function<void(pl::PipelineConfig&)> apply;
};

void apply_overrides(pl::PipelineConfig& cfg, const std::vector<Override>& overrides) {
    for (const auto& o : overrides)
        if (o.opt->count() > 0) o.apply(cfg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gaze360: turns multi-screen eye-tracker logs into calibrated 360-degree\n"
                 "attention maps and attended-object masks, and scores predictions"};
    app.require_subcommand(1);

    int exit_code = 0;

    // --- calibrate -----------------------------------------------------
    auto* cal = app.add_subcommand("calibrate", "Project gaze samples onto scene coordinates");
    auto cal_common = std::make_shared<CommonFlags>();
    cal_common->add_to(*cal);
    auto cal_session = std::make_shared<std::string>();
    auto cal_layout = std::make_shared<std::string>();
    auto cal_out = std::make_shared<std::string>();
    auto cal_minconf = std::make_shared<double>(0.6);
    auto cal_margin = std::make_shared<double>(0.02);
    auto* cal_session_opt = cal->add_option("--session", *cal_session, "Session manifest");
    auto* cal_layout_opt = cal->add_option("--layout", *cal_layout, "Screen layout config");
    auto* cal_out_opt = cal->add_option("--out", *cal_out, "Output directory");
    auto* cal_minconf_opt = cal->add_option("--min-confidence", *cal_minconf, "Minimum fixation confidence");
    auto* cal_margin_opt = cal->add_option("--quad-margin", *cal_margin, "Scene-quad containment margin");
    cal->callback([=] {
        pl::PipelineConfig cfg = cal_common->base();
        apply_overrides(cfg, {{cal_session_opt, [&](pl::PipelineConfig& c) { c.session = *cal_session; }},
                              {cal_layout_opt, [&](pl::PipelineConfig& c) { c.layout = *cal_layout; }},
                              {cal_out_opt, [&](pl::PipelineConfig& c) { c.output = *cal_out; }},
                              {cal_minconf_opt,
                               [&](pl::PipelineConfig& c) { c.calibration.min_confidence = *cal_minconf; }},
                              {cal_margin_opt, [&](pl::PipelineConfig& c) { c.calibration.quad_margin = *cal_margin; }}});
        const auto s = pl::calibrate_session(cfg, cal_common->dry_run);
        std::cout << "calibrated " << s.calibrated << "/" << s.total << " fixations (low-confidence "
                  << s.low_confidence << ", off-screen " << s.off_screen << ", outside-quad " << s.outside_quad
                  << ", unmatched " << s.unmatched << ")" << (cal_common->dry_run ? " [dry-run]" : "") << '\n';
    });

    // --- build-maps ----------------------------------------------------
    auto* bm = app.add_subcommand("build-maps", "Accumulate windowed fixations into attention maps");
    auto bm_common = std::make_shared<CommonFlags>();
    bm_common->add_to(*bm);
    auto bm_session = std::make_shared<std::string>();
    auto bm_calibrated = std::make_shared<std::string>();
    auto bm_out = std::make_shared<std::string>();
    auto bm_width = std::make_shared<int>(1120);
    auto bm_height = std::make_shared<int>(224);
    auto bm_k = std::make_shared<int>(30);
    auto bm_sigma = std::make_shared<double>(0.0);
    auto bm_fps = std::make_shared<double>(30.0);
    auto bm_fixmaps = std::make_shared<bool>(false);
    auto* bm_session_opt = bm->add_option("--session", *bm_session, "Session manifest");
    auto* bm_cal_opt = bm->add_option("--calibrated", *bm_calibrated, "Calibrated fixation CSV")->required();
    auto* bm_out_opt = bm->add_option("--out", *bm_out, "Output directory");
    auto* bm_width_opt = bm->add_option("--width", *bm_width, "Map width in px");
    auto* bm_height_opt = bm->add_option("--height", *bm_height, "Map height in px");
    auto* bm_k_opt = bm->add_option("--window", *bm_k, "Window length k in frames (even)");
    auto* bm_sigma_opt = bm->add_option("--sigma", *bm_sigma, "Gaussian std in px (default 1.5% of width)");
    auto* bm_fps_opt = bm->add_option("--fps", *bm_fps, "Frames per second");
    bm->add_flag("--fixmaps", *bm_fixmaps, "Also write binary fixation-point grids");
    bm->callback([=] {
        pl::PipelineConfig cfg = bm_common->base();
        apply_overrides(cfg, {{bm_session_opt, [&](pl::PipelineConfig& c) { c.session = *bm_session; }},
                              {bm_out_opt, [&](pl::PipelineConfig& c) { c.output = *bm_out; }},
                              {bm_width_opt, [&](pl::PipelineConfig& c) { c.map_width = *bm_width; }},
                              {bm_height_opt, [&](pl::PipelineConfig& c) { c.map_height = *bm_height; }},
                              {bm_k_opt, [&](pl::PipelineConfig& c) { c.window.k = *bm_k; }},
                              {bm_sigma_opt, [&](pl::PipelineConfig& c) { c.window.sigma = *bm_sigma; }},
                              {bm_fps_opt, [&](pl::PipelineConfig& c) { c.window.fps = *bm_fps; }}});
        const auto s = pl::build_maps(cfg, *bm_calibrated, bm_common->dry_run, *bm_fixmaps);
        std::cout << "built " << s.valid_maps << "/" << s.frames << " valid maps"
                  << (bm_common->dry_run ? " [dry-run]" : "") << '\n';
        if (!bm_common->dry_run && s.seconds > 0)
            std::fprintf(stderr, "throughput: %.1f frames/s\n", s.frames / s.seconds);
    });

    // --- extract-attended ------------------------------------------------
    auto* ex = app.add_subcommand("extract-attended", "Label road-user instances hit by the salient region");
    auto ex_common = std::make_shared<CommonFlags>();
    ex_common->add_to(*ex);
    auto ex_maps = std::make_shared<std::string>();
    auto ex_instances = std::make_shared<std::string>();
    auto ex_classes = std::make_shared<std::string>();
    auto ex_out = std::make_shared<std::string>();
    auto ex_tau_kind = std::make_shared<std::string>("relative");
    auto ex_tau = std::make_shared<double>(0.5);
    ex->add_option("--maps", *ex_maps, "Attention-map frame manifest")->required();
    ex->add_option("--instances", *ex_instances, "Instance mask (.agm) or per-frame manifest")->required();
    ex->add_option("--classes", *ex_classes, "Class table CSV (default: built-in)");
    auto* ex_out_opt = ex->add_option("--out", *ex_out, "Output directory");
    auto* ex_tau_kind_opt = ex->add_option("--tau-kind", *ex_tau_kind, "relative|absolute");
    auto* ex_tau_opt = ex->add_option("--tau", *ex_tau, "Threshold ratio or absolute cutoff");
    ex->callback([=] {
        pl::PipelineConfig cfg = ex_common->base();
        apply_overrides(
            cfg, {{ex_out_opt, [&](pl::PipelineConfig& c) { c.output = *ex_out; }},
                  {ex_tau_kind_opt,
                   [&](pl::PipelineConfig& c) {
                       if (*ex_tau_kind == "relative") c.threshold.kind = gaze360::ThresholdPolicy::Kind::Relative;
                       else if (*ex_tau_kind == "absolute") c.threshold.kind = gaze360::ThresholdPolicy::Kind::Absolute;
                       else gaze360::fail(ErrorCode::BadConfig, "--tau-kind must be relative|absolute");
                   }},
                  {ex_tau_opt, [&](pl::PipelineConfig& c) { c.threshold.value = *ex_tau; }}});
        const auto s = pl::extract_attended_run(cfg, *ex_maps, *ex_instances, *ex_classes, ex_common->dry_run);
        std::cout << "extracted attended objects for " << s.valid_frames << "/" << s.frames << " frames ("
                  << s.attended_instances << " attended instances)" << (ex_common->dry_run ? " [dry-run]" : "")
                  << '\n';
    });

    // --- evaluate --------------------------------------------------------
    auto* ev = app.add_subcommand("evaluate", "Score predicted maps and masks against ground truth");
    auto ev_common = std::make_shared<CommonFlags>();
    ev_common->add_to(*ev);
    auto ev_gt = std::make_shared<std::string>();
    auto ev_pred = std::make_shared<std::string>();
    auto ev_out = std::make_shared<std::string>();
    auto ev_eps = std::make_shared<double>(gaze360::kKldEpsilon);
    ev->add_option("--gt", *ev_gt, "Ground-truth eval manifest")->required();
    ev->add_option("--pred", *ev_pred, "Prediction eval manifest")->required();
    auto* ev_out_opt = ev->add_option("--out", *ev_out, "Output directory");
    auto* ev_eps_opt = ev->add_option("--epsilon", *ev_eps, "KLD epsilon");
    ev->callback([=] {
        pl::PipelineConfig cfg = ev_common->base();
        apply_overrides(cfg, {{ev_out_opt, [&](pl::PipelineConfig& c) { c.output = *ev_out; }},
                              {ev_eps_opt, [&](pl::PipelineConfig& c) { c.epsilon = *ev_eps; }}});
        const auto report = pl::evaluate_run(cfg, *ev_gt, *ev_pred, ev_common->dry_run);
        std::cout << "evaluated " << report.frames.size() << " frames: " << report.valid_count << " valid, "
                  << report.skip_count << " skipped" << (ev_common->dry_run ? " [dry-run]" : "") << '\n';
    });

    // --- stats -----------------------------------------------------------
    auto* st = app.add_subcommand("stats", "Aggregate gaze-distribution statistics");
    auto st_common = std::make_shared<CommonFlags>();
    st_common->add_to(*st);
    auto st_sessions = std::make_shared<std::vector<std::string>>();
    auto st_calibrated = std::make_shared<std::vector<std::string>>();
    auto st_layout = std::make_shared<std::string>();
    auto st_out = std::make_shared<std::string>();
    st->add_option("--session", *st_sessions, "Session manifest (repeatable)")->required();
    st->add_option("--calibrated", *st_calibrated, "Calibrated CSV, one per --session")->required();
    auto* st_layout_opt = st->add_option("--layout", *st_layout, "Screen layout config");
    auto* st_out_opt = st->add_option("--out", *st_out, "Output directory");
    st->callback([=] {
        pl::PipelineConfig cfg = st_common->base();
        apply_overrides(cfg, {{st_layout_opt, [&](pl::PipelineConfig& c) { c.layout = *st_layout; }},
                              {st_out_opt, [&](pl::PipelineConfig& c) { c.output = *st_out; }}});
        std::vector<std::filesystem::path> sessions(st_sessions->begin(), st_sessions->end());
        std::vector<std::filesystem::path> calibrated(st_calibrated->begin(), st_calibrated->end());
        const auto stats = pl::stats_run(cfg, sessions, calibrated, st_common->dry_run);
        std::cout << "stats over " << stats.total_fixations << " fixations, rear fraction "
                  << gaze360::format_double(stats.rear_fraction) << (st_common->dry_run ? " [dry-run]" : "") << '\n';
    });

    // --- split -----------------------------------------------------------
    auto* sp = app.add_subcommand("split", "Route sessions into train/val by town");
    auto sp_common = std::make_shared<CommonFlags>();
    sp_common->add_to(*sp);
    auto sp_manifests = std::make_shared<std::vector<std::string>>();
    auto sp_out = std::make_shared<std::string>();
    sp->add_option("--session", *sp_manifests, "Session manifest (repeatable)")->required();
    auto* sp_out_opt = sp->add_option("--out", *sp_out, "Output directory");
    sp->callback([=] {
        pl::PipelineConfig cfg = sp_common->base();
        apply_overrides(cfg, {{sp_out_opt, [&](pl::PipelineConfig& c) { c.output = *sp_out; }}});
        std::vector<std::filesystem::path> manifests(sp_manifests->begin(), sp_manifests->end());
        const auto s = pl::split_run(cfg, manifests, sp_common->dry_run);
        std::cout << "split " << s.train << " train / " << s.val << " val"
                  << (sp_common->dry_run ? " [dry-run]" : "") << '\n';
    });

    // --- synth -----------------------------------------------------------
    auto* sy = app.add_subcommand("synth", "Generate a deterministic synthetic session with known truth");
    auto sy_preset = std::make_shared<std::string>("random");
    auto sy_seed = std::make_shared<uint64_t>(0);
    auto sy_frames = std::make_shared<int>(0);
    auto sy_jitter = std::make_shared<double>(1.0);
    auto sy_out = std::make_shared<std::string>();
    sy->add_option("--preset", *sy_preset, "random|rear-demo");
    sy->add_option("--seed", *sy_seed, "Generator seed");
    sy->add_option("--frames", *sy_frames, "Frame count (0: preset default)");
    sy->add_option("--jitter", *sy_jitter, "Eye-tracker jitter amplitude in px");
    sy->add_option("--out", *sy_out, "Session output directory")->required();
    sy->callback([=] {
        gaze360::synth::SynthConfig cfg;
        cfg.preset = *sy_preset;
        cfg.seed = *sy_seed;
        cfg.jitter_px = *sy_jitter;
        cfg.n_frames = *sy_frames > 0 ? *sy_frames : (cfg.preset == "rear-demo" ? 100 : 124);
        const auto scenario = gaze360::synth::generate(cfg, *sy_out);
        std::cout << "generated " << cfg.preset << " scenario seed " << cfg.seed << ": " << cfg.n_frames
                  << " frames, " << scenario.segments.size() << " dwells in " << *sy_out << '\n';
    });

    // --- verify ----------------------------------------------------------
    auto* vf = app.add_subcommand("verify", "Check pipeline outputs against synthetic truth");
    auto vf_session = std::make_shared<std::string>();
    auto vf_run = std::make_shared<std::string>();
    vf->add_option("--session", *vf_session, "Synthetic session directory (with truth.json)")->required();
    vf->add_option("--run", *vf_run, "Pipeline output directory")->required();
    vf->callback([=, &exit_code] {
        const auto report = gaze360::synth::verify(*vf_session, *vf_run);
        std::cout << "checked " << report.frames_checked << " frames: " << report.screen_mismatches
                  << " screen mismatches, " << report.attended_mismatches << " attended-set mismatches";
        if (report.rear_checked) std::cout << ", rear fraction " << (report.rear_ok ? "ok" : "MISMATCH");
        std::cout << '\n';
        for (const auto& line : report.failures) std::cout << "  " << line << '\n';
        if (report.pass()) {
            std::cout << "verify: PASS\n";
        } else {
            std::cout << "verify: FAIL\n";
            exit_code = kVerifyFailExit;
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        if (rc == 0) return 0;  // --help / --version
        print_error_line("UsageError", e.what());
        return kUsageExit;
    } catch (const Error& e) {
        print_error_line(std::string(to_string(e.code())), e.what());
        return kModuleExitBase + static_cast<int>(e.code());
    } catch (const std::exception& e) {
        print_error_line("Internal", e.what());
        return kInternalExit;
    }
    return exit_code;
}
