#pragma once

#include "elguard/taxonomy.hpp"
#include "elguard/tensors.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace elguard {

/// Per-pixel, per-class empirical mean and population standard deviation of
/// the sampled scores over a region. Pixel coordinates are region-relative.
struct MomentMaps {
    Rect region;
    std::uint32_t sample_count = 0;
    std::vector<std::uint32_t> classes;  // class index held by each slot
    std::vector<double> mu;              // [slot][row][col]
    std::vector<double> sigma;

    /// Slot of a class, or -1 when the class was not aggregated.
    int slot_of(std::uint32_t cls) const noexcept;
    std::size_t index(std::size_t slot, std::uint32_t r, std::uint32_t c) const noexcept {
        return (slot * region.height + r) * region.width + c;
    }
    double mean(std::size_t slot, std::uint32_t r, std::uint32_t c) const noexcept { return mu[index(slot, r, c)]; }
    double stddev(std::size_t slot, std::uint32_t r, std::uint32_t c) const noexcept {
        return sigma[index(slot, r, c)];
    }
    /// A single sample yields sigma = 0 everywhere.
    bool degenerate() const noexcept { return sample_count < 2; }
};

struct AggregateOptions {
    /// Classes to aggregate; empty means all K.
    std::vector<std::uint32_t> classes;
    /// Number of leading samples to use; 0 means all S.
    std::uint32_t samples = 0;
};

/// Two-pass mean / population std with long double accumulation, samples
/// visited in index order. Throws RegionOutOfBounds.
MomentMaps aggregate(const ScoreMapStack& stack, const Rect& region, const AggregateOptions& options = {});

struct MonitorConfig {
    double tau = kDefaultTau;
    double ci_multiplier = 3.0;
    /// Largest unsafe-pixel fraction a SAFE tile may contain.
    double theta = 0.0;
    /// Samples the monitor aggregates; the stack must carry at least this many.
    std::uint32_t samples = 10;
    BusyRoadComposite composite;

    void validate() const;
};

/// 1 where every composite class satisfies mu + ci_multiplier * sigma <= tau.
ByteMap pixel_safety(const MomentMaps& moments, const MonitorConfig& cfg);

enum class Decision { Safe, Unsafe };

struct MonitorVerdict {
    Rect tile;
    Decision decision = Decision::Unsafe;
    std::uint64_t unsafe_pixel_count = 0;
    ByteMap warning_mask;  // over the tile; 255 = warning
    double tau = 0.0;
    double theta = 0.0;
    double ci_multiplier = 0.0;
    std::uint32_t samples_used = 0;

    double unsafe_fraction() const noexcept {
        return tile.area() == 0 ? 0.0 : static_cast<double>(unsafe_pixel_count) / static_cast<double>(tile.area());
    }
};

MonitorVerdict verify_tile(const ScoreMapStack& stack, const Rect& tile, const MonitorConfig& cfg);

/// Verifies tiles on up to `threads` workers; results are in input order and
/// identical to calling verify_tile sequentially.
std::vector<MonitorVerdict> verify_tiles(const ScoreMapStack& stack, std::span<const Rect> tiles,
                                         const MonitorConfig& cfg, unsigned threads = 1);

} // namespace elguard
