#pragma once

#include "elguard/segcore.hpp"
#include "elguard/taxonomy.hpp"
#include "elguard/tensors.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace elguard {

/// Euclidean distance in meters from each pixel to the nearest hazard pixel;
/// +infinity when the mask has no hazard at all.
struct DistanceMap {
    std::uint32_t height = 0;
    std::uint32_t width = 0;
    double gsd = 0.0;
    std::vector<double> meters;

    double at(std::uint32_t r, std::uint32_t c) const noexcept { return meters[std::size_t{r} * width + c]; }
    /// Smallest distance inside a rectangle.
    double min_over(const Rect& rect) const noexcept;
};

inline constexpr double kNoHazard = std::numeric_limits<double>::infinity();

/// Exact EDT: a column pass then a row pass of the lower-envelope-of-parabolas
/// squared-distance transform, square-rooted and scaled by gsd.
DistanceMap distance_transform(const ByteMap& hazard, double gsd);

/// Linear parachute-drift model.
struct DriftModel {
    double altitude_m = 0.0;
    double descent_rate_mps = 1.0;
    double wind_speed_mps = 0.0;
    double margin_m = 0.0;

    void validate() const;
};

/// (altitude / descent_rate) * wind_speed + margin.
double buffer_radius(const DriftModel& drift);

struct LandingCandidate {
    Rect tile;
    double clearance_m = 0.0;
    double buffer_required_m = 0.0;
    std::uint32_t rank = 0;
    std::uint64_t excluded_class_hits = 0;
};

/// composite + {building, human}.
std::vector<std::uint32_t> default_excluded_classes(const BusyRoadComposite& composite = {});

/// Eligible tiles of a non-overlapping tile_size grid (partial edge tiles
/// dropped), ranked by decreasing clearance then (row, col) of the origin.
/// A tile is eligible iff it has no excluded-class pixel and its clearance is
/// at least buffer_m. Throws TileLargerThanImage.
std::vector<LandingCandidate> select_candidates(const SegmentationMap& seg, const DistanceMap& dist,
                                                std::uint32_t tile_size, double buffer_m,
                                                const std::vector<std::uint32_t>& excluded);

} // namespace elguard
