#include "elguard/scenegen.hpp"

#include "elguard/error.hpp"
#include "elguard/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace elguard {

namespace {

std::uint32_t side_from_fraction(double fraction, std::uint32_t side) {
    const auto px = static_cast<std::uint32_t>(std::lround(fraction * side));
    return std::clamp<std::uint32_t>(px, 1, side);
}

void paint(ByteMap& labels, const RectPlacement& p) {
    for (std::uint32_t r = p.rect.row; r < p.rect.row + p.rect.height; ++r) {
        std::fill_n(labels.data.begin() + static_cast<std::ptrdiff_t>(std::size_t{r} * labels.width + p.rect.col),
                    p.rect.width, index_of(p.label));
    }
}

void check_spec(const SceneSpec& spec) {
    ELGUARD_REQUIRE(spec.height >= 32 && spec.width >= 32, ErrorCode::SpecInfeasible,
                    "scene must be at least 32x32 pixels");
    ELGUARD_REQUIRE(std::isfinite(spec.gsd) && spec.gsd > 0.0, ErrorCode::InvalidArgument, "gsd must be > 0");
    ELGUARD_REQUIRE(spec.road_fraction >= 0.0 && spec.road_fraction <= 1.0, ErrorCode::SpecInfeasible,
                    "road_fraction outside [0,1]");
    for (const auto& layer : spec.layers) {
        ELGUARD_REQUIRE(layer.min_size_fraction >= 0.0 && layer.max_size_fraction <= 1.0 &&
                            layer.min_size_fraction <= layer.max_size_fraction,
                        ErrorCode::SpecInfeasible,
                        "size fractions of layer '" + std::string(class_name(layer.label)) + "' are invalid");
    }
    for (const auto& p : spec.fixed) {
        ELGUARD_REQUIRE(p.rect.fits_in(spec.height, spec.width), ErrorCode::SpecInfeasible,
                        "fixed rectangle does not fit inside the image");
    }
}

} // namespace

SceneSpec urban_scene_spec(std::uint32_t height, std::uint32_t width, double gsd) {
    SceneSpec spec;
    spec.height = height;
    spec.width = width;
    spec.gsd = gsd;
    spec.road_bands = 2;
    spec.road_fraction = 0.06;
    spec.layers = {
        {SemanticClass::Building, 4, 0.08, 0.20, false},
        {SemanticClass::Tree, 6, 0.03, 0.10, false},
        {SemanticClass::Clutter, 2, 0.02, 0.05, false},
        {SemanticClass::StaticCar, 3, 0.02, 0.04, true},
        {SemanticClass::MovingCar, 3, 0.02, 0.04, true},
        {SemanticClass::Human, 3, 0.01, 0.02, false},
    };
    return spec;
}

GroundTruthScene generate_scene(const SceneSpec& spec, std::uint64_t seed) {
    check_spec(spec);
    Rng64 rng(seed);

    GroundTruthScene scene;
    scene.height = spec.height;
    scene.width = spec.width;
    scene.gsd = spec.gsd;
    scene.labels = ByteMap(spec.height, spec.width, index_of(SemanticClass::LowVegetation));

    std::vector<Rect> bands;
    if (spec.road_fraction > 0.0) {
        for (std::uint32_t b = 0; b < spec.road_bands; ++b) {
            const bool vertical = rng.below(2) == 1;
            const std::uint32_t across = vertical ? spec.width : spec.height;
            const std::uint32_t thickness = side_from_fraction(spec.road_fraction, across);
            const auto offset = static_cast<std::uint32_t>(rng.below(across - thickness + 1));
            const Rect band = vertical ? Rect{0, offset, spec.height, thickness}
                                       : Rect{offset, 0, thickness, spec.width};
            bands.push_back(band);
            scene.placements.push_back({SemanticClass::Road, band});
        }
    }

    for (const auto& layer : spec.layers) {
        if (layer.on_roads && bands.empty()) continue;
        for (std::uint32_t i = 0; i < layer.count; ++i) {
            const double span = layer.max_size_fraction - layer.min_size_fraction;
            std::uint32_t h = side_from_fraction(layer.min_size_fraction + span * rng.uniform(), spec.height);
            std::uint32_t w = side_from_fraction(layer.min_size_fraction + span * rng.uniform(), spec.width);
            Rect area{0, 0, spec.height, spec.width};
            if (layer.on_roads) area = bands[rng.below(bands.size())];
            h = std::min(h, area.height);
            w = std::min(w, area.width);
            const auto r = area.row + static_cast<std::uint32_t>(rng.below(area.height - h + 1));
            const auto c = area.col + static_cast<std::uint32_t>(rng.below(area.width - w + 1));
            scene.placements.push_back({layer.label, Rect{r, c, h, w}});
        }
    }
    scene.placements.insert(scene.placements.end(), spec.fixed.begin(), spec.fixed.end());

    for (const auto& p : scene.placements) paint(scene.labels, p);
    return scene;
}

void NoiseSpec::validate() const {
    ELGUARD_REQUIRE(std::isfinite(logit_gain) && logit_gain > 0.0, ErrorCode::InvalidArgument,
                    "logit_gain must be > 0");
    ELGUARD_REQUIRE(std::isfinite(logit_noise_sd) && logit_noise_sd >= 0.0, ErrorCode::InvalidArgument,
                    "logit_noise_sd must be >= 0");
    ELGUARD_REQUIRE(samples >= 1, ErrorCode::InvalidArgument, "samples must be >= 1");
    if (mode == NoiseMode::OutOfDistribution) {
        ELGUARD_REQUIRE(ood_road_floor > 0.0 && kDefaultTau + ood_road_floor < 1.0, ErrorCode::InvalidArgument,
                        "ood_road_floor must be > 0 and keep tau + floor below 1");
        ELGUARD_REQUIRE(ood_flip_fraction >= 0.0 && ood_flip_fraction <= 1.0, ErrorCode::InvalidArgument,
                        "ood_flip_fraction outside [0,1]");
        ELGUARD_REQUIRE(!BusyRoadComposite().contains(index_of(ood_flip_class)), ErrorCode::InvalidArgument,
                        "ood_flip_class must not be a busy-road class");
    }
}

namespace {

struct StreamSeeds {
    std::uint64_t flip;
    std::uint64_t noise;
};

StreamSeeds derive_seeds(std::uint64_t seed) {
    Rng64 master(seed);
    const std::uint64_t flip = master.next();
    const std::uint64_t noise = master.next();
    return {flip, noise};
}

} // namespace

ByteMap ood_flip_mask(const GroundTruthScene& scene, const NoiseSpec& noise, std::uint64_t seed) {
    noise.validate();
    ByteMap flipped(scene.height, scene.width, 0);
    if (noise.mode != NoiseMode::OutOfDistribution) return flipped;
    const BusyRoadComposite composite;
    Rng64 rng(derive_seeds(seed).flip);
    for (std::size_t i = 0; i < flipped.data.size(); ++i) {
        if (composite.contains(scene.labels.data[i]) && rng.uniform() < noise.ood_flip_fraction) {
            flipped.data[i] = 1;
        }
    }
    return flipped;
}

ScoreMapStack sample_scores(const GroundTruthScene& scene, const NoiseSpec& noise, std::uint64_t seed) {
    noise.validate();
    const bool ood = noise.mode == NoiseMode::OutOfDistribution;
    const ByteMap flipped = ood_flip_mask(scene, noise, seed);
    const BusyRoadComposite composite;

    // Smallest float not below tau + floor, so the emitted f32 keeps the bound.
    const double floor_value = kDefaultTau + noise.ood_road_floor;
    float floor_f = static_cast<float>(floor_value);
    if (static_cast<double>(floor_f) < floor_value) floor_f = std::nextafter(floor_f, 1.0f);
    const double floor_d = floor_f;

    ScoreMapStack stack(noise.samples, kNumClasses, scene.height, scene.width);
    Rng64 rng(derive_seeds(seed).noise);
    std::array<double, kNumClasses> p{};
    for (std::uint32_t s = 0; s < noise.samples; ++s) {
        for (std::uint32_t r = 0; r < scene.height; ++r) {
            for (std::uint32_t c = 0; c < scene.width; ++c) {
                const std::uint8_t truth = scene.labels.at(r, c);
                const std::uint8_t shown = flipped.at(r, c) ? index_of(noise.ood_flip_class) : truth;
                double max_logit = -1e300;
                for (std::uint32_t k = 0; k < kNumClasses; ++k) {
                    p[k] = (k == shown ? noise.logit_gain : 0.0) + noise.logit_noise_sd * rng.gauss();
                    max_logit = std::max(max_logit, p[k]);
                }
                double total = 0.0;
                for (auto& v : p) {
                    v = std::exp(v - max_logit);
                    total += v;
                }
                for (auto& v : p) v /= total;

                if (ood && composite.contains(truth) && p[truth] < floor_d) {
                    const double scale = (1.0 - floor_d) / (1.0 - p[truth]);
                    for (std::uint32_t k = 0; k < kNumClasses; ++k) p[k] = k == truth ? floor_d : p[k] * scale;
                }
                for (std::uint32_t k = 0; k < kNumClasses; ++k) stack.at(s, k, r, c) = static_cast<float>(p[k]);
            }
        }
    }
    return stack;
}

ByteMap busy_road_truth(const GroundTruthScene& scene, const BusyRoadComposite& composite) {
    ByteMap mask(scene.height, scene.width, 0);
    for (std::size_t i = 0; i < mask.data.size(); ++i) mask.data[i] = composite.contains(scene.labels.data[i]) ? 1 : 0;
    return mask;
}

} // namespace elguard
