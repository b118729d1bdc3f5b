#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "gaze360/attention.hpp"
#include "gaze360/rng.hpp"

using namespace gaze360;

namespace {

WindowConfig sigma_cfg(double sigma) {
    WindowConfig cfg;
    cfg.sigma = sigma;
    return cfg;
}

// Independent dense reference: accumulate the full 2-D Gaussian per
// fixation, then normalize.
FloatGrid reference_map(const std::vector<Point2>& fixations, double sigma, int w, int h) {
    FloatGrid g(w, h, 0.0);
    for (const auto& f : fixations)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const double d2 = (x - f.x) * (x - f.x) + (y - f.y) * (y - f.y);
                g.at(x, y) += std::exp(-d2 / (2 * sigma * sigma));
            }
    double total = 0.0;
    for (double v : g.values) total += v;
    for (double& v : g.values) v /= total;
    return g;
}

}  // namespace

TEST_CASE("central unit-sigma blob matches the closed form") {
    const auto map = build_attention_map({{2.0, 2.0}}, sigma_cfg(1.0), 5, 5);
    REQUIRE(map.valid);
    // Z = (1 + 2e^{-1/2} + 2e^{-2})^2 = 6.168924081028881
    CHECK(map.grid.at(2, 2) == doctest::Approx(0.16210282163712664).epsilon(1e-12));
    CHECK(map.grid.at(0, 0) == doctest::Approx(0.002969016743950497).epsilon(1e-12));
    CHECK(map.grid.at(4, 4) == doctest::Approx(0.002969016743950497).epsilon(1e-12));
    CHECK(map.grid.at(2, 0) == map.grid.at(0, 2));
    CHECK(map.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("maps are nonnegative and sum to one") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Point2> fx;
        const int n = 1 + static_cast<int>(rng.uniform_int(0, 30));
        for (int i = 0; i < n; ++i) fx.push_back({rng.uniform(-5, 85), rng.uniform(-5, 45)});
        const auto map = build_attention_map(fx, sigma_cfg(2.5), 80, 40);
        REQUIRE(map.valid);
        CHECK(map.sum() == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(*std::min_element(map.grid.values.begin(), map.grid.values.end()) >= 0.0);
    }
}

TEST_CASE("result is bitwise independent of fixation order") {
    SplitMix64 rng(12);
    std::vector<Point2> fx;
    for (int i = 0; i < 17; ++i) fx.push_back({rng.uniform(0, 64), rng.uniform(0, 32)});

    const auto a = build_attention_map(fx, sigma_cfg(3.0), 64, 32);
    std::reverse(fx.begin(), fx.end());
    const auto b = build_attention_map(fx, sigma_cfg(3.0), 64, 32);
    std::rotate(fx.begin(), fx.begin() + 5, fx.end());
    const auto c = build_attention_map(fx, sigma_cfg(3.0), 64, 32);

    CHECK(a.grid.values == b.grid.values);
    CHECK(a.grid.values == c.grid.values);
}

TEST_CASE("accumulation matches a dense reference") {
    SplitMix64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Point2> fx;
        const int n = 1 + static_cast<int>(rng.uniform_int(0, 7));
        for (int i = 0; i < n; ++i) fx.push_back({rng.uniform(0, 24), rng.uniform(0, 16)});
        const auto map = build_attention_map(fx, sigma_cfg(1.8), 24, 16);
        const auto ref = reference_map(fx, 1.8, 24, 16);
        for (size_t i = 0; i < ref.values.size(); ++i)
            CHECK(map.grid.values[i] == doctest::Approx(ref.values[i]).epsilon(1e-12));
    }
}

TEST_CASE("border truncation renormalizes to one") {
    const auto map = build_attention_map({{0.0, 0.0}}, sigma_cfg(2.0), 16, 16);
    REQUIRE(map.valid);
    CHECK(map.sum() == doctest::Approx(1.0).epsilon(1e-12));
    // Truncation leaves the peak at the corner itself.
    CHECK(map.grid.at(0, 0) == *std::max_element(map.grid.values.begin(), map.grid.values.end()));
}

TEST_CASE("the peak sits at the pixel nearest the fixation") {
    const auto map = build_attention_map({{1.4, 3.2}}, sigma_cfg(1.0), 7, 9);
    const auto it = std::max_element(map.grid.values.begin(), map.grid.values.end());
    const auto idx = static_cast<int>(it - map.grid.values.begin());
    CHECK(idx % 7 == 1);
    CHECK(idx / 7 == 3);
}

TEST_CASE("a symmetric fixation yields a symmetric map") {
    const auto map = build_attention_map({{3.0, 3.0}}, sigma_cfg(1.3), 7, 7);
    for (int y = 0; y < 7; ++y)
        for (int x = 0; x < 7; ++x) {
            CHECK(map.grid.at(x, y) == map.grid.at(6 - x, y));
            CHECK(map.grid.at(x, y) == map.grid.at(x, 6 - y));
        }
}

TEST_CASE("an empty window yields an invalid all-zero map") {
    const auto map = build_attention_map({}, sigma_cfg(1.0), 8, 8);
    CHECK_FALSE(map.valid);
    CHECK(map.sum() == 0.0);
}

TEST_CASE("total underflow yields an invalid all-zero map") {
    const auto map = build_attention_map({{1e5, 1e5}}, sigma_cfg(1.0), 8, 8);
    CHECK_FALSE(map.valid);
    CHECK(map.sum() == 0.0);
}

TEST_CASE("default sigma is 1.5 percent of the map width") {
    WindowConfig cfg;
    CHECK(cfg.sigma_for_width(1120) == doctest::Approx(16.8));
    CHECK(cfg.sigma_for_width(200) == doctest::Approx(3.0));
    CHECK(sigma_cfg(4.0).sigma_for_width(1120) == 4.0);
}

TEST_CASE("window parameters are validated") {
    WindowConfig cfg;
    cfg.k = 31;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("BadConfig"), Error);
    cfg.k = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = WindowConfig{};
    cfg.sigma = -1.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = WindowConfig{};
    cfg.fps = 0.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    CHECK_NOTHROW(WindowConfig{}.validate());
}

TEST_CASE("binarization is a strict comparison against the cutoff") {
    AttentionMap uniform;
    uniform.grid = FloatGrid(4, 2, 0.125);
    uniform.valid = true;

    ThresholdPolicy half;  // relative 0.5: every pixel equals the peak, all pass
    CHECK(binarize(uniform, half).values == std::vector<uint8_t>(8, 1));

    ThresholdPolicy at_peak;
    at_peak.value = 1.0;  // cutoff == peak, strict > keeps nothing
    CHECK(binarize(uniform, at_peak).values == std::vector<uint8_t>(8, 0));
}

TEST_CASE("relative and absolute thresholds agree when matched") {
    const auto map = build_attention_map({{2.0, 2.0}}, sigma_cfg(1.0), 5, 5);
    ThresholdPolicy rel;
    ThresholdPolicy abs;
    abs.kind = ThresholdPolicy::Kind::Absolute;
    abs.value = rel.absolute_for(map);
    CHECK(binarize(map, rel).values == binarize(map, abs).values);
    CHECK(abs.absolute_for(map) == abs.value);
}

TEST_CASE("raising the threshold never grows the mask") {
    const auto map = build_attention_map({{2.2, 1.7}, {10.5, 6.1}}, sigma_cfg(1.5), 16, 8);
    ThresholdPolicy lo, hi;
    lo.value = 0.3;
    hi.value = 0.7;
    const auto m_lo = binarize(map, lo);
    const auto m_hi = binarize(map, hi);
    for (size_t i = 0; i < m_lo.values.size(); ++i) CHECK(m_hi.values[i] <= m_lo.values[i]);
}

TEST_CASE("binarizing an invalid map throws") {
    AttentionMap empty;
    empty.grid = FloatGrid(4, 4, 0.0);
    try {
        binarize(empty, ThresholdPolicy{});
        FAIL("expected InvalidMap");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidMap);
    }
}
