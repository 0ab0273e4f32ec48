#include "elguard/lzs.hpp"

#include "elguard/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace elguard {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1-D squared distance transform over f (entries may be +inf). Only finite
// samples enter the lower envelope; an all-infinite line stays infinite.
void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<std::size_t>& v,
            std::vector<double>& z) {
    const std::size_t n = f.size();
    std::size_t k = 0;
    bool any = false;
    for (std::size_t q = 0; q < n; ++q) {
        if (!std::isfinite(f[q])) continue;
        if (!any) {
            v[0] = q;
            z[0] = -kInf;
            z[1] = kInf;
            k = 0;
            any = true;
            continue;
        }
        const auto parabola_cross = [&](std::size_t p) {
            return ((f[q] + double(q) * double(q)) - (f[p] + double(p) * double(p))) /
                   (2.0 * double(q) - 2.0 * double(p));
        };
        double s = parabola_cross(v[k]);
        // z[0] is -inf, so this stops at k == 0 at the latest.
        while (s <= z[k]) s = parabola_cross(v[--k]);
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInf;
    }
    if (!any) {
        std::fill(d.begin(), d.end(), kInf);
        return;
    }
    k = 0;
    for (std::size_t q = 0; q < n; ++q) {
        while (z[k + 1] < double(q)) ++k;
        const double diff = double(q) - double(v[k]);
        d[q] = diff * diff + f[v[k]];
    }
}

} // namespace

double DistanceMap::min_over(const Rect& rect) const noexcept {
    double best = kInf;
    for (std::uint32_t r = rect.row; r < rect.row + rect.height; ++r) {
        const double* row = meters.data() + std::size_t{r} * width + rect.col;
        for (std::uint32_t c = 0; c < rect.width; ++c) best = std::min(best, row[c]);
    }
    return best;
}

DistanceMap distance_transform(const ByteMap& hazard, double gsd) {
    ELGUARD_REQUIRE(std::isfinite(gsd) && gsd > 0.0, ErrorCode::InvalidArgument, "gsd must be > 0");
    ELGUARD_REQUIRE(hazard.data.size() == std::size_t{hazard.height} * hazard.width, ErrorCode::SizeMismatch,
                    "mask length does not equal H*W");
    const std::uint32_t h = hazard.height;
    const std::uint32_t w = hazard.width;
    std::vector<double> sq(hazard.data.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = hazard.data[i] ? 0.0 : kInf;

    const std::size_t longest = std::max(h, w);
    std::vector<double> f(longest), d(longest), z(longest + 1);
    std::vector<std::size_t> v(longest);

    f.resize(h);
    d.resize(h);
    for (std::uint32_t c = 0; c < w; ++c) {
        for (std::uint32_t r = 0; r < h; ++r) f[r] = sq[std::size_t{r} * w + c];
        edt_1d(f, d, v, z);
        for (std::uint32_t r = 0; r < h; ++r) sq[std::size_t{r} * w + c] = d[r];
    }
    f.resize(w);
    d.resize(w);
    for (std::uint32_t r = 0; r < h; ++r) {
        std::copy_n(sq.begin() + static_cast<std::ptrdiff_t>(std::size_t{r} * w), w, f.begin());
        edt_1d(f, d, v, z);
        std::copy(d.begin(), d.end(), sq.begin() + static_cast<std::ptrdiff_t>(std::size_t{r} * w));
    }

    DistanceMap out;
    out.height = h;
    out.width = w;
    out.gsd = gsd;
    out.meters.resize(sq.size());
    for (std::size_t i = 0; i < sq.size(); ++i) out.meters[i] = std::isfinite(sq[i]) ? std::sqrt(sq[i]) * gsd : kInf;
    return out;
}

void DriftModel::validate() const {
    ELGUARD_REQUIRE(std::isfinite(altitude_m) && altitude_m >= 0.0, ErrorCode::InvalidArgument,
                    "altitude must be finite and >= 0");
    ELGUARD_REQUIRE(std::isfinite(descent_rate_mps) && descent_rate_mps > 0.0, ErrorCode::InvalidArgument,
                    "descent rate must be > 0");
    ELGUARD_REQUIRE(std::isfinite(wind_speed_mps) && wind_speed_mps >= 0.0, ErrorCode::InvalidArgument,
                    "wind speed must be >= 0");
    ELGUARD_REQUIRE(std::isfinite(margin_m) && margin_m >= 0.0, ErrorCode::InvalidArgument, "margin must be >= 0");
}

double buffer_radius(const DriftModel& drift) {
    drift.validate();
    return drift.altitude_m / drift.descent_rate_mps * drift.wind_speed_mps + drift.margin_m;
}

std::vector<std::uint32_t> default_excluded_classes(const BusyRoadComposite& composite) {
    std::vector<std::uint32_t> out = composite.members();
    out.push_back(index_of(SemanticClass::Building));
    out.push_back(index_of(SemanticClass::Human));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<LandingCandidate> select_candidates(const SegmentationMap& seg, const DistanceMap& dist,
                                                std::uint32_t tile_size, double buffer_m,
                                                const std::vector<std::uint32_t>& excluded) {
    const std::uint32_t h = seg.height();
    const std::uint32_t w = seg.width();
    ELGUARD_REQUIRE(dist.height == h && dist.width == w, ErrorCode::SizeMismatch,
                    "distance map and segmentation differ in size");
    ELGUARD_REQUIRE(tile_size >= 1, ErrorCode::InvalidArgument, "tile size must be >= 1");
    ELGUARD_REQUIRE(tile_size <= h && tile_size <= w, ErrorCode::TileLargerThanImage,
                    "tile size " + std::to_string(tile_size) + " exceeds the " + std::to_string(h) + "x" +
                        std::to_string(w) + " image");
    ELGUARD_REQUIRE(!std::isnan(buffer_m) && buffer_m >= 0.0, ErrorCode::InvalidArgument, "buffer must be >= 0");

    std::array<bool, 256> is_excluded{};
    for (auto k : excluded) {
        if (k < is_excluded.size()) is_excluded[k] = true;
    }

    std::vector<LandingCandidate> out;
    for (std::uint32_t r = 0; r + tile_size <= h; r += tile_size) {
        for (std::uint32_t c = 0; c + tile_size <= w; c += tile_size) {
            const Rect tile{r, c, tile_size, tile_size};
            std::uint64_t hits = 0;
            for (std::uint32_t y = r; y < r + tile_size; ++y) {
                for (std::uint32_t x = c; x < c + tile_size; ++x) hits += is_excluded[seg.labels.at(y, x)];
            }
            if (hits != 0) continue;
            const double clearance = dist.min_over(tile);
            if (!(clearance >= buffer_m)) continue;
            out.push_back({tile, clearance, buffer_m, 0, 0});
        }
    }
    std::sort(out.begin(), out.end(), [](const LandingCandidate& a, const LandingCandidate& b) {
        if (a.clearance_m != b.clearance_m) return a.clearance_m > b.clearance_m;
        if (a.tile.row != b.tile.row) return a.tile.row < b.tile.row;
        return a.tile.col < b.tile.col;
    });
    for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = static_cast<std::uint32_t>(i);
    return out;
}

} // namespace elguard
