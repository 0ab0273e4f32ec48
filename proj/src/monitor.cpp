#include "elguard/monitor.hpp"

#include "elguard/error.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>
#include <thread>

namespace elguard {

int MomentMaps::slot_of(std::uint32_t cls) const noexcept {
    const auto it = std::find(classes.begin(), classes.end(), cls);
    return it == classes.end() ? -1 : static_cast<int>(it - classes.begin());
}

MomentMaps aggregate(const ScoreMapStack& stack, const Rect& region, const AggregateOptions& options) {
    ELGUARD_REQUIRE(region.fits_in(stack.height, stack.width), ErrorCode::RegionOutOfBounds,
                    "region exceeds the " + std::to_string(stack.height) + "x" + std::to_string(stack.width) +
                        " stack");
    ELGUARD_REQUIRE(options.samples <= stack.samples, ErrorCode::InvalidArgument,
                    "requested " + std::to_string(options.samples) + " samples, stack has " +
                        std::to_string(stack.samples));

    MomentMaps m;
    m.region = region;
    m.sample_count = options.samples == 0 ? stack.samples : options.samples;
    if (options.classes.empty()) {
        m.classes.resize(stack.classes);
        std::iota(m.classes.begin(), m.classes.end(), 0u);
    } else {
        m.classes = options.classes;
        for (auto k : m.classes) {
            ELGUARD_REQUIRE(k < stack.classes, ErrorCode::InvalidArgument, "class index out of range");
        }
    }

    const std::size_t n = static_cast<std::size_t>(region.area());
    const std::size_t total = m.classes.size() * n;
    std::vector<long double> acc(total, 0.0L);
    auto for_each_value = [&](auto&& fn) {
        for (std::uint32_t s = 0; s < m.sample_count; ++s) {
            for (std::size_t slot = 0; slot < m.classes.size(); ++slot) {
                const auto plane = stack.plane(s, m.classes[slot]);
                long double* out = acc.data() + slot * n;
                for (std::uint32_t r = 0; r < region.height; ++r) {
                    const float* row = plane.data() + std::size_t{region.row + r} * stack.width + region.col;
                    long double* dst = out + std::size_t{r} * region.width;
                    for (std::uint32_t c = 0; c < region.width; ++c) fn(dst[c], row[c], slot * n + std::size_t{r} * region.width + c);
                }
            }
        }
    };

    const long double count = m.sample_count;
    for_each_value([](long double& sum, float x, std::size_t) { sum += x; });
    std::vector<long double> mean(total);
    for (std::size_t i = 0; i < total; ++i) mean[i] = acc[i] / count;

    std::fill(acc.begin(), acc.end(), 0.0L);
    for_each_value([&mean](long double& dev, float x, std::size_t i) {
        const long double d = static_cast<long double>(x) - mean[i];
        dev += d * d;
    });

    m.mu.resize(total);
    m.sigma.resize(total);
    for (std::size_t i = 0; i < total; ++i) {
        m.mu[i] = static_cast<double>(mean[i]);
        m.sigma[i] = static_cast<double>(std::sqrt(acc[i] / count));
    }
    return m;
}

void MonitorConfig::validate() const {
    ELGUARD_REQUIRE(std::isfinite(tau) && tau > 0.0 && tau < 1.0, ErrorCode::InvalidArgument, "tau must be in (0,1)");
    ELGUARD_REQUIRE(std::isfinite(ci_multiplier) && ci_multiplier > 0.0, ErrorCode::InvalidArgument,
                    "ci_multiplier must be > 0");
    ELGUARD_REQUIRE(std::isfinite(theta) && theta >= 0.0 && theta < 1.0, ErrorCode::InvalidArgument,
                    "theta must be in [0,1)");
    ELGUARD_REQUIRE(samples >= 1, ErrorCode::InvalidArgument, "monitor needs at least one sample");
}

ByteMap pixel_safety(const MomentMaps& moments, const MonitorConfig& cfg) {
    std::vector<std::size_t> slots;
    for (auto cls : cfg.composite.members()) {
        const int slot = moments.slot_of(cls);
        ELGUARD_REQUIRE(slot >= 0, ErrorCode::InvalidArgument,
                        "moments do not cover composite class " + std::to_string(cls));
        slots.push_back(static_cast<std::size_t>(slot));
    }
    ByteMap safe(moments.region.height, moments.region.width, 1);
    const std::size_t n = safe.data.size();
    for (std::size_t slot : slots) {
        const double* mu = moments.mu.data() + slot * n;
        const double* sigma = moments.sigma.data() + slot * n;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(mu[i] + cfg.ci_multiplier * sigma[i] <= cfg.tau)) safe.data[i] = 0;
        }
    }
    return safe;
}

MonitorVerdict verify_tile(const ScoreMapStack& stack, const Rect& tile, const MonitorConfig& cfg) {
    cfg.validate();
    ELGUARD_REQUIRE(cfg.samples <= stack.samples, ErrorCode::InvalidArgument,
                    "monitor configured for " + std::to_string(cfg.samples) + " samples, stack has " +
                        std::to_string(stack.samples));
    const MomentMaps moments = aggregate(stack, tile, {cfg.composite.members(), cfg.samples});
    const ByteMap safe = pixel_safety(moments, cfg);

    MonitorVerdict v;
    v.tile = tile;
    v.tau = cfg.tau;
    v.theta = cfg.theta;
    v.ci_multiplier = cfg.ci_multiplier;
    v.samples_used = moments.sample_count;
    v.warning_mask = ByteMap(tile.height, tile.width, 0);
    for (std::size_t i = 0; i < safe.data.size(); ++i) {
        if (!safe.data[i]) {
            v.warning_mask.data[i] = 255;
            ++v.unsafe_pixel_count;
        }
    }
    v.decision = v.unsafe_fraction() <= cfg.theta ? Decision::Safe : Decision::Unsafe;
    return v;
}

std::vector<MonitorVerdict> verify_tiles(const ScoreMapStack& stack, std::span<const Rect> tiles,
                                         const MonitorConfig& cfg, unsigned threads) {
    std::vector<MonitorVerdict> out(tiles.size());
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(tiles.size())));
    if (workers <= 1) {
        for (std::size_t i = 0; i < tiles.size(); ++i) out[i] = verify_tile(stack, tiles[i], cfg);
        return out;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < tiles.size(); i += workers) out[i] = verify_tile(stack, tiles[i], cfg);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

} // namespace elguard
