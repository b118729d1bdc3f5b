#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>
#include <string>
#include <vector>

#include "gaze360/formats.hpp"
#include "gaze360/pipeline.hpp"
#include "gaze360/rng.hpp"
#include "gaze360/synth.hpp"

using namespace gaze360;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "gaze360_test_synth" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// Runs the full pipeline over a generated session; returns the run dir.
fs::path run_pipeline(const fs::path& sdir, const fs::path& rdir) {
    pipeline::PipelineConfig pc;
    pc.session = sdir / "session.manifest";
    pc.layout = sdir / "layout.ini";
    pc.output = rdir;
    pipeline::load_config_file(sdir / "pipeline.ini", pc);
    pc.jobs = 1;

    const auto cal = pipeline::calibrate_session(pc, false);
    REQUIRE(cal.calibrated == cal.total);
    const auto maps = pipeline::build_maps(pc, rdir / "calibrated.csv", false, false);
    REQUIRE(maps.valid_maps == maps.frames);
    pipeline::extract_attended_run(pc, rdir / "maps_manifest.tsv", sdir / "instances.agm", sdir / "classes.csv",
                                   false);
    return rdir;
}

}  // namespace

TEST_CASE("splitmix64 reproduces the pinned reference streams") {
    {
        SplitMix64 rng(0);
        CHECK(rng.next_u64() == 0xe220a8397b1dcdafull);
        CHECK(rng.next_u64() == 0x6e789e6aa1b965f4ull);
        CHECK(rng.next_u64() == 0x06c45d188009454full);
        CHECK(rng.next_u64() == 0xf88bb8a8724c81ecull);
    }
    {
        SplitMix64 rng(1);
        CHECK(rng.next_u64() == 0x910a2dec89025cc1ull);
        CHECK(rng.next_u64() == 0xbeeb8da1658eec67ull);
        CHECK(rng.next_u64() == 0xf893a2eefb32555eull);
        CHECK(rng.next_u64() == 0x71c18690ee42c90bull);
    }
    {
        SplitMix64 rng(1234567);
        CHECK(rng.next_u64() == 0x599ed017fb08fc85ull);
        CHECK(rng.next_u64() == 0x2c73f08458540fa5ull);
        CHECK(rng.next_u64() == 0x883ebce5a3f27c77ull);
        CHECK(rng.next_u64() == 0x3fbef740e9177b3full);
    }
    {
        SplitMix64 rng(42);
        CHECK(rng.next_double() == 0.7415648787718233);
        CHECK(rng.next_double() == 0.1599103928769201);
        CHECK(rng.next_double() == 0.27860113025513866);
        CHECK(rng.next_double() == 0.34419071652363753);
    }
}

TEST_CASE("scenario planning is a pure function of the config") {
    synth::SynthConfig cfg;
    cfg.seed = 9;
    const auto a = synth::plan_scenario(cfg);
    const auto b = synth::plan_scenario(cfg);
    CHECK(a.screen_of_frame == b.screen_of_frame);
    CHECK(a.attended_of_frame == b.attended_of_frame);
    REQUIRE(a.segments.size() == b.segments.size());
    for (size_t i = 0; i < a.segments.size(); ++i) {
        CHECK(a.segments[i].begin == b.segments[i].begin);
        CHECK(a.segments[i].anchor == b.segments[i].anchor);
        CHECK(a.segments[i].instance_id == b.segments[i].instance_id);
    }
    REQUIRE(a.jitter_of_frame.size() == b.jitter_of_frame.size());
    for (size_t i = 0; i < a.jitter_of_frame.size(); ++i) CHECK(a.jitter_of_frame[i] == b.jitter_of_frame[i]);
}

TEST_CASE("random-preset scripts tile the session with long dwells") {
    for (uint64_t seed : {0ull, 5ull, 11ull}) {
        synth::SynthConfig cfg;
        cfg.seed = seed;
        const auto sc = synth::plan_scenario(cfg);

        REQUIRE_FALSE(sc.segments.empty());
        CHECK(sc.segments.front().begin == 0);
        CHECK(sc.segments.back().end == cfg.n_frames);
        for (size_t i = 0; i < sc.segments.size(); ++i) {
            const auto& seg = sc.segments[i];
            CHECK(seg.end - seg.begin >= 32);
            if (i > 0) CHECK(seg.begin == sc.segments[i - 1].end);
            if (i > 0) CHECK(seg.view != sc.segments[i - 1].view);
            for (int t = seg.begin; t < seg.end; ++t) CHECK(sc.screen_of_frame[t] == seg.view);
            CHECK((seg.site == 2) == (seg.instance_id == 0));
        }

        // Deep inside a road-user dwell the target instance is attended.
        REQUIRE(sc.attended_of_frame.size() == static_cast<size_t>(cfg.n_frames));
        for (const auto& seg : sc.segments) {
            if (seg.instance_id == 0) continue;
            const int mid = (seg.begin + seg.end) / 2;
            if (mid - 15 >= seg.begin && mid + 15 < seg.end)
                CHECK(sc.attended_of_frame[mid].count(seg.instance_id) == 1);
        }
    }
}

TEST_CASE("rear-demo preset pins the mirror schedule") {
    synth::SynthConfig cfg;
    cfg.preset = "rear-demo";
    cfg.n_frames = 100;
    const auto sc = synth::plan_scenario(cfg);

    REQUIRE(sc.rear_fraction.has_value());
    CHECK(*sc.rear_fraction == 6.0 / 100.0);
    CHECK(sc.attended_of_frame.empty());

    const std::set<int> left = {10, 25, 40};
    const std::set<int> right = {55, 70, 85};
    for (int t = 0; t < 100; ++t) {
        const int want = left.count(t) ? 0 : right.count(t) ? 4 : 2;
        CHECK(sc.screen_of_frame[t] == want);
    }
}

TEST_CASE("configs outside the supported envelope are rejected") {
    const auto expect_bad = [](synth::SynthConfig cfg) {
        try {
            cfg.validate();
            FAIL("expected BadConfig");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::BadConfig);
        }
    };
    synth::SynthConfig cfg;
    cfg.preset = "chaos";
    expect_bad(cfg);
    cfg = {};
    cfg.n_screens = 0;
    expect_bad(cfg);
    cfg = {};
    cfg.n_frames = 20;
    expect_bad(cfg);
    cfg = {};
    cfg.jitter_px = 9.0;
    expect_bad(cfg);
    cfg = {};
    cfg.preset = "rear-demo";
    cfg.n_frames = 124;
    expect_bad(cfg);
    cfg = {};
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("generation is byte-identical per preset and seed") {
    synth::SynthConfig cfg;
    cfg.seed = 4;
    const fs::path a = fresh_dir("gen_a");
    const fs::path b = fresh_dir("gen_b");
    synth::generate(cfg, a);
    synth::generate(cfg, b);

    int compared = 0;
    for (const auto& entry : fs::recursive_directory_iterator(a)) {
        if (!entry.is_regular_file()) continue;
        const fs::path rel = fs::relative(entry.path(), a);
        CHECK(slurp(entry.path()) == slurp(b / rel));
        ++compared;
    }
    CHECK(compared >= 8);

    const fs::path c = fresh_dir("gen_c");
    synth::SynthConfig other = cfg;
    other.seed = 5;
    synth::generate(other, c);
    CHECK(slurp(a / "gaze.csv") != slurp(c / "gaze.csv"));
}

TEST_CASE("the truth sidecar describes the generated session") {
    synth::SynthConfig cfg;
    cfg.seed = 2;
    const fs::path dir = fresh_dir("truth");
    const auto sc = synth::generate(cfg, dir);

    const auto truth = nlohmann::json::parse(slurp(dir / "truth.json"));
    CHECK(truth.at("preset") == "random");
    CHECK(truth.at("seed") == 2);
    CHECK(truth.at("n_frames") == 124);
    CHECK(truth.at("scene_width") == 560);
    CHECK(truth.at("scene_height") == 112);
    CHECK(truth.at("window_k") == 30);
    CHECK(truth.at("threshold_ratio") == 0.5);
    CHECK(truth.at("require_stats") == false);
    REQUIRE(truth.at("frames").size() == 124);
    for (int t = 0; t < 124; ++t) {
        const auto& frame = truth.at("frames").at(t);
        CHECK(frame.at("frame") == t);
        CHECK(frame.at("screen") == sc.screen_of_frame[t]);
        std::set<uint16_t> attended;
        for (const auto& id : frame.at("attended")) attended.insert(id.get<uint16_t>());
        CHECK(attended == sc.attended_of_frame[t]);
    }
}

TEST_CASE("verification accepts a faithful pipeline run") {
    synth::SynthConfig cfg;
    cfg.seed = 13;
    const fs::path sdir = fresh_dir("ok_session");
    const fs::path rdir = fresh_dir("ok_run");
    synth::generate(cfg, sdir);
    run_pipeline(sdir, rdir);

    const auto report = synth::verify(sdir, rdir);
    CHECK(report.pass());
    CHECK(report.frames_checked == 124);
    CHECK(report.screen_mismatches == 0);
    CHECK(report.attended_mismatches == 0);
    CHECK_FALSE(report.rear_checked);
}

TEST_CASE("verification flags a tampered attended set") {
    synth::SynthConfig cfg;
    cfg.seed = 14;
    const fs::path sdir = fresh_dir("tamper_session");
    const fs::path rdir = fresh_dir("tamper_run");
    synth::generate(cfg, sdir);
    run_pipeline(sdir, rdir);

    auto sets = nlohmann::json::parse(slurp(rdir / "attended_sets.json"));
    bool tampered = false;
    for (auto& frame : sets.at("frames")) {
        if (!tampered && !frame.at("attended").empty()) {
            frame.at("attended").erase(0);
            tampered = true;
        }
    }
    REQUIRE(tampered);
    std::ofstream(rdir / "attended_sets.json") << sets.dump(2) << "\n";

    const auto report = synth::verify(sdir, rdir);
    CHECK_FALSE(report.pass());
    CHECK(report.attended_mismatches == 1);
    REQUIRE_FALSE(report.failures.empty());
}

TEST_CASE("verification flags a tampered screen assignment") {
    synth::SynthConfig cfg;
    cfg.seed = 15;
    const fs::path sdir = fresh_dir("screen_session");
    const fs::path rdir = fresh_dir("screen_run");
    synth::generate(cfg, sdir);
    run_pipeline(sdir, rdir);

    auto fixations = read_calibrated_csv(rdir / "calibrated.csv");
    REQUIRE_FALSE(fixations.empty());
    fixations[0].screen_id = (fixations[0].screen_id + 1) % 5;
    write_calibrated_csv(rdir / "calibrated.csv", fixations);

    const auto report = synth::verify(sdir, rdir);
    CHECK_FALSE(report.pass());
    CHECK(report.screen_mismatches == 1);
}

TEST_CASE("verification demands the outputs it checks") {
    synth::SynthConfig cfg;
    cfg.seed = 16;
    const fs::path sdir = fresh_dir("missing_session");
    const fs::path rdir = fresh_dir("missing_run");
    synth::generate(cfg, sdir);
    try {
        synth::verify(sdir, rdir);
        FAIL("expected MissingOutputs");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MissingOutputs);
    }
}
