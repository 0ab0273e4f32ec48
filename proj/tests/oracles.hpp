#pragma once

// Test-only reference computations. Nothing here calls into the code paths
// the tests check: brute-force scans, arbitrary-precision arithmetic and
// ground-truth geometry from the scene generator's placements.

#include "elguard/rng.hpp"
#include "elguard/scenegen.hpp"
#include "elguard/taxonomy.hpp"
#include "elguard/tensors.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace oracle {

using BigFloat = boost::multiprecision::cpp_bin_float_50;

struct Moments {
    double mu;
    double sigma;
};

/// Two-pass mean / population std in 50-digit arithmetic.
inline Moments exact_moments(const std::vector<float>& xs) {
    BigFloat sum = 0;
    for (float x : xs) sum += BigFloat(x);
    const BigFloat mean = sum / BigFloat(static_cast<unsigned>(xs.size()));
    BigFloat dev = 0;
    for (float x : xs) {
        const BigFloat d = BigFloat(x) - mean;
        dev += d * d;
    }
    const BigFloat var = dev / BigFloat(static_cast<unsigned>(xs.size()));
    return {static_cast<double>(mean), static_cast<double>(boost::multiprecision::sqrt(var))};
}

/// O(N^2) nearest-hazard scan in meters; +inf without hazards.
inline std::vector<double> brute_force_distance(const elguard::ByteMap& hazard, double gsd) {
    std::vector<std::pair<long, long>> points;
    for (std::uint32_t r = 0; r < hazard.height; ++r)
        for (std::uint32_t c = 0; c < hazard.width; ++c)
            if (hazard.at(r, c)) points.emplace_back(r, c);
    std::vector<double> out(hazard.data.size(), std::numeric_limits<double>::infinity());
    for (std::uint32_t r = 0; r < hazard.height; ++r) {
        for (std::uint32_t c = 0; c < hazard.width; ++c) {
            long best = std::numeric_limits<long>::max();
            for (auto [pr, pc] : points) {
                const long dr = pr - long(r), dc = pc - long(c);
                best = std::min(best, dr * dr + dc * dc);
            }
            if (!points.empty()) out[std::size_t{r} * hazard.width + c] = std::sqrt(double(best)) * gsd;
        }
    }
    return out;
}

/// Ground-truth clearance of a tile: smallest Euclidean distance (m) between
/// any tile pixel and any ground-truth hazard pixel, by exhaustive scan.
inline double tile_clearance(const elguard::ByteMap& hazard, const elguard::Rect& tile, double gsd) {
    long best = std::numeric_limits<long>::max();
    for (std::uint32_t r = 0; r < hazard.height; ++r) {
        for (std::uint32_t c = 0; c < hazard.width; ++c) {
            if (!hazard.at(r, c)) continue;
            // Nearest tile pixel to (r, c) along each axis.
            const long nr = std::clamp<long>(r, tile.row, long(tile.row + tile.height) - 1);
            const long nc = std::clamp<long>(c, tile.col, long(tile.col + tile.width) - 1);
            const long dr = nr - long(r), dc = nc - long(c);
            best = std::min(best, dr * dr + dc * dc);
        }
    }
    return best == std::numeric_limits<long>::max() ? std::numeric_limits<double>::infinity()
                                                     : std::sqrt(double(best)) * gsd;
}

/// Ground-truth label grid rebuilt by painting the generator's placements.
inline elguard::ByteMap repaint(const elguard::GroundTruthScene& scene) {
    elguard::ByteMap labels(scene.height, scene.width, elguard::index_of(elguard::SemanticClass::LowVegetation));
    for (const auto& p : scene.placements)
        for (std::uint32_t r = p.rect.row; r < p.rect.row + p.rect.height; ++r)
            for (std::uint32_t c = p.rect.col; c < p.rect.col + p.rect.width; ++c)
                labels.at(r, c) = elguard::index_of(p.label);
    return labels;
}

inline std::uint64_t count_in_tile(const elguard::ByteMap& labels, const elguard::Rect& tile,
                                   const std::vector<std::uint32_t>& classes) {
    std::uint64_t n = 0;
    for (std::uint32_t r = tile.row; r < tile.row + tile.height; ++r)
        for (std::uint32_t c = tile.col; c < tile.col + tile.width; ++c)
            n += std::find(classes.begin(), classes.end(), labels.at(r, c)) != classes.end();
    return n;
}

/// Is there any grid tile with no excluded class and clearance >= buffer in
/// the ground truth?
inline bool has_feasible_tile(const elguard::ByteMap& labels, const elguard::ByteMap& hazard, std::uint32_t tile,
                              double gsd, double buffer, const std::vector<std::uint32_t>& excluded) {
    for (std::uint32_t r = 0; r + tile <= labels.height; r += tile)
        for (std::uint32_t c = 0; c + tile <= labels.width; c += tile) {
            const elguard::Rect t{r, c, tile, tile};
            if (count_in_tile(labels, t, excluded) == 0 && tile_clearance(hazard, t, gsd) >= buffer) return true;
        }
    return false;
}

/// A random valid softmax stack (float scores from double softmax).
inline elguard::ScoreMapStack random_stack(elguard::Rng64& rng, std::uint32_t s, std::uint32_t k, std::uint32_t h,
                                           std::uint32_t w, double spread = 3.0) {
    elguard::ScoreMapStack stack(s, k, h, w);
    std::vector<double> logits(k);
    for (std::uint32_t si = 0; si < s; ++si)
        for (std::uint32_t r = 0; r < h; ++r)
            for (std::uint32_t c = 0; c < w; ++c) {
                double total = 0;
                for (auto& v : logits) {
                    v = std::exp(spread * rng.gauss());
                    total += v;
                }
                for (std::uint32_t ki = 0; ki < k; ++ki) stack.at(si, ki, r, c) = static_cast<float>(logits[ki] / total);
            }
    return stack;
}

} // namespace oracle
