#include "elguard/monitor.hpp"
#include "elguard/scenegen.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace elguard;

namespace {

/// Stack whose (pixel 0, class 0) samples are `xs`; class 1 absorbs the rest.
ScoreMapStack series(const std::vector<float>& xs) {
    ScoreMapStack s(static_cast<std::uint32_t>(xs.size()), 2, 1, 1);
    for (std::uint32_t i = 0; i < xs.size(); ++i) {
        s.at(i, 0, 0, 0) = xs[i];
        s.at(i, 1, 0, 0) = 1.0f - xs[i];
    }
    return s;
}

/// One-pixel moment map with the given composite (mu, sigma) pairs.
MomentMaps moments_of(const std::vector<std::pair<double, double>>& road_car_car) {
    MomentMaps m;
    m.region = Rect{0, 0, 1, 1};
    m.sample_count = 10;
    m.classes = {2, 3, 4};
    for (auto [mu, sigma] : road_car_car) {
        m.mu.push_back(mu);
        m.sigma.push_back(sigma);
    }
    return m;
}

std::vector<float> samples_at(const ScoreMapStack& s, std::uint32_t k, std::uint32_t r, std::uint32_t c,
                              std::uint32_t n) {
    std::vector<float> out;
    for (std::uint32_t i = 0; i < n; ++i) out.push_back(s.at(i, k, r, c));
    return out;
}

} // namespace

TEST_CASE("moments of 0.1, 0.2, 0.3") {
    const auto m = aggregate(series({0.1f, 0.2f, 0.3f}), Rect{0, 0, 1, 1});
    const auto exact = oracle::exact_moments({0.1f, 0.2f, 0.3f});
    CHECK(m.mean(0, 0, 0) == doctest::Approx(0.2).epsilon(1e-7));
    CHECK(m.stddev(0, 0, 0) == doctest::Approx(0.0816497).epsilon(1e-6));
    CHECK(std::abs(m.mean(0, 0, 0) - exact.mu) <= 1e-15);
    CHECK(std::abs(m.stddev(0, 0, 0) - exact.sigma) <= 1e-15);
}

TEST_CASE("identical samples and a single sample have zero sigma") {
    const auto same = aggregate(series({0.3f, 0.3f, 0.3f, 0.3f}), Rect{0, 0, 1, 1});
    CHECK(same.stddev(0, 0, 0) == 0.0);
    CHECK(same.stddev(1, 0, 0) == 0.0);
    const auto one = aggregate(series({0.42f}), Rect{0, 0, 1, 1});
    CHECK(one.mean(0, 0, 0) == double(0.42f));
    CHECK(one.stddev(0, 0, 0) == 0.0);
    CHECK(one.degenerate());
}

TEST_CASE("aggregate checks the region") {
    const auto s = series({0.1f, 0.2f});
    CHECK(code_of([&] { aggregate(s, Rect{0, 0, 2, 1}); }) == ErrorCode::RegionOutOfBounds);
    CHECK(code_of([&] { aggregate(s, Rect{0, 0, 0, 1}); }) == ErrorCode::RegionOutOfBounds);
}

TEST_CASE("aggregate matches an arbitrary-precision oracle") {
    Rng64 rng(31337);
    for (int trial = 0; trial < 20; ++trial) {
        const auto S = static_cast<std::uint32_t>(1 + rng.below(16));
        const auto K = static_cast<std::uint32_t>(2 + rng.below(7));
        const auto H = static_cast<std::uint32_t>(1 + rng.below(32));
        const auto W = static_cast<std::uint32_t>(1 + rng.below(32));
        const auto stack = oracle::random_stack(rng, S, K, H, W, 1.0 + 3.0 * rng.uniform());
        const auto m = aggregate(stack, Rect{0, 0, H, W});
        for (std::uint32_t k = 0; k < K; ++k)
            for (std::uint32_t r = 0; r < H; ++r)
                for (std::uint32_t c = 0; c < W; ++c) {
                    const auto exact = oracle::exact_moments(samples_at(stack, k, r, c, S));
                    REQUIRE(std::abs(m.mean(k, r, c) - exact.mu) <= 1e-12);
                    REQUIRE(std::abs(m.stddev(k, r, c) - exact.sigma) <= 1e-12);
                    REQUIRE(m.stddev(k, r, c) <= 0.5);
                }
    }
}

TEST_CASE("aggregate honours class and sample selection") {
    Rng64 rng(8);
    const auto stack = oracle::random_stack(rng, 6, 8, 4, 5);
    const auto m = aggregate(stack, Rect{1, 2, 3, 3}, {{4, 2}, 3});
    CHECK(m.sample_count == 3);
    CHECK(m.slot_of(4) == 0);
    CHECK(m.slot_of(2) == 1);
    CHECK(m.slot_of(3) == -1);
    const auto exact = oracle::exact_moments(samples_at(stack, 2, 2, 3, 3));
    CHECK(std::abs(m.mean(1, 1, 1) - exact.mu) <= 1e-12);
}

TEST_CASE("pixel rule on composite classes") {
    MonitorConfig cfg;
    CHECK(pixel_safety(moments_of({{0.12, 0.001}, {0, 0}, {0, 0}}), cfg).at(0, 0) == 1);
    CHECK(pixel_safety(moments_of({{0, 0}, {0, 0}, {0.13, 0}}), cfg).at(0, 0) == 0);
    CHECK(pixel_safety(moments_of({{0, 0}, {0, 0}, {0, 0}}), cfg).at(0, 0) == 1);
    // the bound is inclusive
    CHECK(pixel_safety(moments_of({{0.125, 0}, {0, 0}, {0, 0}}), cfg).at(0, 0) == 1);
    // per class, not summed
    CHECK(pixel_safety(moments_of({{0.1, 0}, {0.1, 0}, {0.1, 0}}), cfg).at(0, 0) == 1);
}

TEST_CASE("pixel rule is monotone in tau and ci multiplier") {
    Rng64 rng(4);
    for (int trial = 0; trial < 5000; ++trial) {
        const auto m = moments_of({{0.3 * rng.uniform(), 0.05 * rng.uniform()},
                                   {0.3 * rng.uniform(), 0.05 * rng.uniform()},
                                   {0.3 * rng.uniform(), 0.05 * rng.uniform()}});
        MonitorConfig lo, hi;
        lo.tau = 0.01 + 0.5 * rng.uniform();
        hi.tau = lo.tau + 0.3 * rng.uniform();
        REQUIRE(pixel_safety(m, lo).at(0, 0) <= pixel_safety(m, hi).at(0, 0));

        MonitorConfig k_lo, k_hi;
        k_lo.ci_multiplier = 0.1 + 4 * rng.uniform();
        k_hi.ci_multiplier = k_lo.ci_multiplier + 3 * rng.uniform();
        REQUIRE(pixel_safety(m, k_hi).at(0, 0) <= pixel_safety(m, k_lo).at(0, 0));
    }
}

TEST_CASE("config validation") {
    MonitorConfig cfg;
    cfg.tau = 1.0;
    CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::InvalidArgument);
    cfg = {};
    cfg.ci_multiplier = 0.0;
    CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::InvalidArgument);
    cfg = {};
    cfg.theta = 1.0;
    CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("noiseless grass tile is SAFE") {
    SceneSpec spec;
    spec.height = spec.width = 64;
    spec.road_fraction = 0.0;
    spec.fixed = {{SemanticClass::Road, Rect{0, 0, 64, 8}}};
    NoiseSpec noise;
    noise.logit_noise_sd = 0.0;
    const auto stack = sample_scores(generate_scene(spec, 1), noise, 1);
    const auto v = verify_tile(stack, Rect{16, 32, 32, 32}, MonitorConfig{});
    CHECK(v.decision == Decision::Safe);
    CHECK(v.unsafe_pixel_count == 0);
    CHECK(v.samples_used == 10);
    const auto road = verify_tile(stack, Rect{0, 0, 8, 8}, MonitorConfig{});
    CHECK(road.decision == Decision::Unsafe);
    CHECK(road.unsafe_pixel_count == 64);
}

TEST_CASE("a tile touching a constructed OOD road pixel is UNSAFE") {
    SceneSpec spec;
    spec.height = spec.width = 64;
    spec.road_fraction = 0.0;
    spec.fixed = {{SemanticClass::Road, Rect{30, 0, 4, 64}}};
    NoiseSpec noise;
    noise.mode = NoiseMode::OutOfDistribution;
    noise.ood_flip_fraction = 1.0;
    const auto scene = generate_scene(spec, 2);
    const auto stack = sample_scores(scene, noise, 2);
    // one road row inside the tile
    const auto v = verify_tile(stack, Rect{0, 0, 31, 32}, MonitorConfig{});
    CHECK(v.decision == Decision::Unsafe);
    CHECK(v.unsafe_pixel_count >= 32);
    for (std::uint32_t c = 0; c < 32; ++c) CHECK(v.warning_mask.at(30, c) == 255);
}

TEST_CASE("theta tolerates a small unsafe fraction") {
    ScoreMapStack stack(2, 8, 128, 128);
    for (std::uint32_t s = 0; s < 2; ++s)
        for (std::uint32_t r = 0; r < 128; ++r)
            for (std::uint32_t c = 0; c < 128; ++c) stack.at(s, 6, r, c) = 1.0f;
    stack.at(0, 6, 5, 5) = 0.5f;
    stack.at(0, 2, 5, 5) = 0.5f;
    MonitorConfig cfg;
    cfg.samples = 2;
    const auto strict = verify_tile(stack, Rect{0, 0, 128, 128}, cfg);
    CHECK(strict.decision == Decision::Unsafe);
    CHECK(strict.unsafe_pixel_count == 1);
    CHECK(strict.warning_mask.count_nonzero() == 1);
    cfg.theta = 0.01;
    const auto lenient = verify_tile(stack, Rect{0, 0, 128, 128}, cfg);
    CHECK(lenient.decision == Decision::Safe);
    CHECK(lenient.unsafe_fraction() == doctest::Approx(1.0 / 16384));
}

TEST_CASE("monitor needs as many samples as configured") {
    ScoreMapStack stack(2, 8, 4, 4);
    for (std::size_t i = 0; i < stack.data.size(); i += 1) stack.data[i] = 0.125f;
    MonitorConfig cfg;  // 10 samples
    CHECK(code_of([&] { verify_tile(stack, Rect{0, 0, 4, 4}, cfg); }) == ErrorCode::InvalidArgument);
    cfg.samples = 2;
    CHECK(code_of([&] { verify_tile(stack, Rect{0, 0, 5, 4}, cfg); }) == ErrorCode::RegionOutOfBounds);
}

TEST_CASE("every OOD road pixel is flagged") {
    NoiseSpec noise;
    noise.mode = NoiseMode::OutOfDistribution;
    noise.logit_noise_sd = 1.0;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto scene = generate_scene(urban_scene_spec(128, 128), seed);
        const auto stack = sample_scores(scene, noise, seed);
        const auto truth = busy_road_truth(scene);
        const auto v = verify_tile(stack, Rect{0, 0, 128, 128}, MonitorConfig{});
        for (std::size_t i = 0; i < truth.data.size(); ++i)
            if (truth.data[i]) REQUIRE(v.warning_mask.data[i] == 255);
    }
}

TEST_CASE("concurrent verification matches sequential") {
    const auto scene = generate_scene(urban_scene_spec(128, 128), 12);
    NoiseSpec noise;
    noise.logit_noise_sd = 2.5;
    const auto stack = sample_scores(scene, noise, 12);
    std::vector<Rect> tiles;
    for (std::uint32_t r = 0; r < 128; r += 16)
        for (std::uint32_t c = 0; c < 128; c += 16) tiles.push_back(Rect{r, c, 16, 16});
    const auto serial = verify_tiles(stack, tiles, MonitorConfig{}, 1);
    for (unsigned threads : {2u, 3u, 8u}) {
        const auto parallel = verify_tiles(stack, tiles, MonitorConfig{}, threads);
        REQUIRE(parallel.size() == serial.size());
        for (std::size_t i = 0; i < serial.size(); ++i) {
            CHECK(parallel[i].tile == serial[i].tile);
            CHECK(parallel[i].decision == serial[i].decision);
            CHECK(parallel[i].warning_mask == serial[i].warning_mask);
        }
    }
    std::vector<Rect> bad = tiles;
    bad.push_back(Rect{120, 120, 16, 16});
    CHECK(code_of([&] { verify_tiles(stack, bad, MonitorConfig{}, 4); }) == ErrorCode::RegionOutOfBounds);
}
