#include "elguard/lzs.hpp"
#include "elguard/scenegen.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace elguard;

namespace {

SegmentationMap seg_from(const ByteMap& labels) {
    return {kNumClasses, labels, busy_road_mask(labels, BusyRoadComposite{})};
}

} // namespace

TEST_CASE("single hazard corner on a 3x3 grid") {
    ByteMap mask(3, 3, 0);
    mask.at(0, 0) = 1;
    const auto d = distance_transform(mask, 1.0);
    CHECK(d.at(2, 2) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(d.at(0, 0) == 0.0);
    CHECK(d.at(0, 2) == doctest::Approx(2.0));
    CHECK(distance_transform(mask, 0.5).at(2, 2) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("all-hazard and hazard-free masks") {
    const auto all = distance_transform(ByteMap(4, 5, 1), 0.3);
    for (double v : all.meters) CHECK(v == 0.0);
    const auto none = distance_transform(ByteMap(4, 5, 0), 0.3);
    for (double v : none.meters) CHECK(std::isinf(v));
    CHECK(code_of([] { distance_transform(ByteMap(2, 2), 0.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("distance transform equals brute force on random masks") {
    Rng64 rng(64);
    for (int trial = 0; trial < 30; ++trial) {
        const auto h = static_cast<std::uint32_t>(1 + rng.below(64));
        const auto w = static_cast<std::uint32_t>(1 + rng.below(64));
        const double density = trial % 3 == 0 ? 0.002 : rng.uniform() * 0.3;
        ByteMap mask(h, w);
        for (auto& v : mask.data) v = rng.uniform() < density ? 1 : 0;
        const double gsd = 0.1 + rng.uniform();
        const auto fast = distance_transform(mask, gsd);
        const auto slow = oracle::brute_force_distance(mask, gsd);
        for (std::size_t i = 0; i < slow.size(); ++i) {
            if (std::isinf(slow[i])) {
                REQUIRE(std::isinf(fast.meters[i]));
            } else {
                REQUIRE(std::abs(fast.meters[i] - slow[i]) <= 1e-9);
            }
            REQUIRE((fast.meters[i] == 0.0) == (mask.data[i] != 0));
        }
    }
}

TEST_CASE("drift buffer") {
    CHECK(buffer_radius({120, 5, 5, 10}) == doctest::Approx(130.0));
    CHECK(buffer_radius({120, 5, 0, 0}) == 0.0);
    CHECK(buffer_radius({120, 6, 3, 5}) == doctest::Approx(65.0));
    CHECK(code_of([] { buffer_radius({120, 0, 3, 5}); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { buffer_radius({120, 1, -3, 5}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("default exclusions are the composite plus building and human") {
    CHECK(default_excluded_classes() == std::vector<std::uint32_t>{1, 2, 3, 4, 7});
    CHECK(default_excluded_classes(BusyRoadComposite({2})) == std::vector<std::uint32_t>{1, 2, 7});
}

TEST_CASE("equal clearance ranks by tile origin") {
    // road along the left column: tiles in the same column tie
    ByteMap labels(8, 8, index_of(SemanticClass::LowVegetation));
    for (std::uint32_t r = 0; r < 8; ++r) labels.at(r, 0) = index_of(SemanticClass::Road);
    const auto seg = seg_from(labels);
    const auto dist = distance_transform(seg.busy_road, 1.0);
    const auto cands = select_candidates(seg, dist, 4, 0.0, default_excluded_classes());
    REQUIRE(cands.size() == 2);
    CHECK(cands[0].tile == Rect{0, 4, 4, 4});
    CHECK(cands[1].tile == Rect{4, 4, 4, 4});
    CHECK(cands[0].clearance_m == 4.0);
    CHECK(cands[0].rank == 0);
    CHECK(cands[1].rank == 1);
}

TEST_CASE("partial edge tiles are dropped and oversized tiles rejected") {
    const auto seg = seg_from(ByteMap(10, 7, index_of(SemanticClass::LowVegetation)));
    const auto dist = distance_transform(seg.busy_road, 1.0);
    const auto cands = select_candidates(seg, dist, 3, 0.0, default_excluded_classes());
    CHECK(cands.size() == 6);  // 3 rows x 2 columns of full tiles
    for (const auto& c : cands) CHECK(std::isinf(c.clearance_m));
    CHECK(code_of([&] { select_candidates(seg, dist, 8, 0.0, {}); }) == ErrorCode::TileLargerThanImage);
}

TEST_CASE("a buffer longer than the image diagonal leaves nothing") {
    const auto scene = generate_scene(urban_scene_spec(128, 128), 3);
    const auto seg = seg_from(scene.labels);
    const auto dist = distance_transform(seg.busy_road, scene.gsd);
    REQUIRE(seg.busy_road.count_nonzero() > 0);
    const double diagonal = std::hypot(128.0, 128.0) * scene.gsd;
    CHECK(select_candidates(seg, dist, 16, diagonal + 1.0, default_excluded_classes()).empty());
}

TEST_CASE("top candidate sits in the grass far from the only road") {
    SceneSpec spec;
    spec.height = spec.width = 128;
    spec.road_fraction = 0.0;
    spec.fixed = {{SemanticClass::Road, Rect{0, 0, 128, 12}}, {SemanticClass::Building, Rect{0, 64, 64, 64}}};
    const auto scene = generate_scene(spec, 0);
    const auto seg = seg_from(scene.labels);
    const auto dist = distance_transform(seg.busy_road, scene.gsd);
    const auto cands = select_candidates(seg, dist, 32, 10.0, default_excluded_classes());
    REQUIRE(!cands.empty());
    CHECK(cands[0].tile == Rect{64, 96, 32, 32});
    const auto truth = busy_road_truth(scene);
    CHECK(cands[0].clearance_m == doctest::Approx(oracle::tile_clearance(truth, cands[0].tile, scene.gsd)));
}

TEST_CASE("candidates on noiseless scenes are sound against ground truth") {
    const auto excluded = default_excluded_classes();
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const auto scene = generate_scene(urban_scene_spec(128, 128), seed);
        const auto seg = seg_from(scene.labels);
        const auto dist = distance_transform(seg.busy_road, scene.gsd);
        const auto truth = busy_road_truth(scene);
        const double buffer = 2.0 * double(seed % 5);
        for (const auto& c : select_candidates(seg, dist, 16, buffer, excluded)) {
            REQUIRE(oracle::count_in_tile(scene.labels, c.tile, excluded) == 0);
            REQUIRE(oracle::tile_clearance(truth, c.tile, scene.gsd) >= buffer);
            REQUIRE(c.clearance_m == doctest::Approx(oracle::tile_clearance(truth, c.tile, scene.gsd)));
        }
    }
}

TEST_CASE("a larger buffer never adds candidates") {
    const auto excluded = default_excluded_classes();
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto scene = generate_scene(urban_scene_spec(128, 128), 100 + seed);
        const auto seg = seg_from(scene.labels);
        const auto dist = distance_transform(seg.busy_road, scene.gsd);
        std::vector<Rect> previous;
        bool first = true;
        for (double buffer = 0; buffer <= 40; buffer += 2.5) {
            std::vector<Rect> tiles;
            for (const auto& c : select_candidates(seg, dist, 16, buffer, excluded)) tiles.push_back(c.tile);
            if (!first) {
                for (const auto& t : tiles)
                    REQUIRE(std::find(previous.begin(), previous.end(), t) != previous.end());
            }
            previous = tiles;
            first = false;
        }
    }
}
