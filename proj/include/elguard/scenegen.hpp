#pragma once

#include "elguard/taxonomy.hpp"
#include "elguard/tensors.hpp"

#include <cstdint>
#include <vector>

namespace elguard {

struct RectPlacement {
    SemanticClass label = SemanticClass::Clutter;
    Rect rect;
    friend bool operator==(const RectPlacement&, const RectPlacement&) = default;
};

/// `count` random rectangles of one class. Side lengths are drawn uniformly
/// between min and max fraction of the corresponding image side. With
/// `on_roads` set, rectangles are placed inside a randomly chosen road band
/// and skipped entirely when the scene has no roads.
struct RectLayer {
    SemanticClass label = SemanticClass::Building;
    std::uint32_t count = 0;
    double min_size_fraction = 0.05;
    double max_size_fraction = 0.15;
    bool on_roads = false;
    friend bool operator==(const RectLayer&, const RectLayer&) = default;
};

struct SceneSpec {
    std::uint32_t height = 256;
    std::uint32_t width = 256;
    double gsd = 0.5;  // m/px
    /// Full-length road bands, horizontal or vertical; thickness is
    /// road_fraction of the image side. road_fraction 0 disables roads.
    std::uint32_t road_bands = 1;
    double road_fraction = 0.06;
    /// Random layers, drawn in order after the roads.
    std::vector<RectLayer> layers;
    /// Explicit rectangles painted last, in order.
    std::vector<RectPlacement> fixed;

    friend bool operator==(const SceneSpec&, const SceneSpec&) = default;
};

/// A representative urban block: roads with cars, buildings, trees, a few
/// humans and clutter on a low-vegetation background.
SceneSpec urban_scene_spec(std::uint32_t height = 256, std::uint32_t width = 256, double gsd = 0.5);

struct GroundTruthScene {
    std::uint32_t height = 0;
    std::uint32_t width = 0;
    double gsd = 0.0;
    ByteMap labels;
    /// Every rectangle painted, in paint order (roads first). Later entries
    /// overwrite earlier ones.
    std::vector<RectPlacement> placements;

    SemanticClass label(std::uint32_t r, std::uint32_t c) const noexcept {
        return static_cast<SemanticClass>(labels.at(r, c));
    }
};

/// Deterministic in (spec, seed). Throws SpecInfeasible for images smaller
/// than 32x32, fractions outside [0,1], or explicit rectangles that do not fit.
GroundTruthScene generate_scene(const SceneSpec& spec, std::uint64_t seed);

enum class NoiseMode { InDistribution, OutOfDistribution };

struct NoiseSpec {
    NoiseMode mode = NoiseMode::InDistribution;
    double logit_gain = 8.0;
    double logit_noise_sd = 0.75;
    /// Busy-road scores are floored at kDefaultTau + ood_road_floor in every
    /// sample (ood mode only).
    double ood_road_floor = 0.05;
    std::uint32_t samples = 10;
    /// Fraction of ground-truth busy-road pixels whose argmax is flipped to
    /// ood_flip_class (ood mode only).
    double ood_flip_fraction = 0.5;
    SemanticClass ood_flip_class = SemanticClass::LowVegetation;

    void validate() const;
    friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

/// Emulated MC-dropout inference: per sample and pixel, logits are
/// gain*onehot(label) + N(0, sd) per class, scores = softmax(logits).
/// Out-of-distribution mode additionally floors the ground-truth busy-road
/// score and flips the argmax on a seeded subset of road pixels.
ScoreMapStack sample_scores(const GroundTruthScene& scene, const NoiseSpec& noise, std::uint64_t seed);

/// Pixels whose argmax sample_scores flips (all zero outside ood mode).
ByteMap ood_flip_mask(const GroundTruthScene& scene, const NoiseSpec& noise, std::uint64_t seed);

/// Ground-truth busy-road mask (1 where the label is in the composite).
ByteMap busy_road_truth(const GroundTruthScene& scene, const BusyRoadComposite& composite = {});

} // namespace elguard
