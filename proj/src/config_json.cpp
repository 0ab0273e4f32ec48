#include "elguard/config_json.hpp"

#include "elguard/error.hpp"

#include <cmath>

namespace elguard {

namespace {

using nlohmann::json;

template <typename Fn>
auto guarded(std::string_view what, Fn&& fn) {
    try {
        return fn();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ConfigError, std::string(what) + ": " + e.what());
    }
}

SemanticClass class_from_json(const json& j) {
    if (j.is_number_unsigned()) {
        const auto v = j.get<std::uint32_t>();
        ELGUARD_REQUIRE(v < kNumClasses, ErrorCode::ConfigError, "class index out of range");
        return static_cast<SemanticClass>(v);
    }
    const auto name = j.get<std::string>();
    const auto cls = parse_class(name);
    ELGUARD_REQUIRE(cls.has_value(), ErrorCode::ConfigError, "unknown class '" + name + "'");
    return *cls;
}

std::vector<std::uint32_t> class_list(const json& j) {
    std::vector<std::uint32_t> out;
    for (const auto& e : j) out.push_back(index_of(class_from_json(e)));
    return out;
}

json class_names(const std::vector<std::uint32_t>& classes) {
    json out = json::array();
    for (auto k : classes) {
        if (k < kNumClasses) {
            out.push_back(class_name(static_cast<SemanticClass>(k)));
        } else {
            out.push_back(k);
        }
    }
    return out;
}

// JSON has no infinity; an unbounded clearance is written as null.
json meters(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

} // namespace

SceneSpec scene_spec_from_json(const json& j) {
    return guarded("scene spec", [&] {
        SceneSpec s = urban_scene_spec();
        s.height = j.value("height", s.height);
        s.width = j.value("width", s.width);
        s.gsd = j.value("gsd", s.gsd);
        s.road_bands = j.value("road_bands", s.road_bands);
        s.road_fraction = j.value("road_fraction", s.road_fraction);
        if (j.contains("layers")) {
            s.layers.clear();
            for (const auto& l : j.at("layers")) {
                RectLayer layer;
                layer.label = class_from_json(l.at("class"));
                layer.count = l.at("count").get<std::uint32_t>();
                layer.min_size_fraction = l.value("min_size_fraction", layer.min_size_fraction);
                layer.max_size_fraction = l.value("max_size_fraction", layer.max_size_fraction);
                layer.on_roads = l.value("on_roads", false);
                s.layers.push_back(layer);
            }
        }
        if (j.contains("fixed")) {
            for (const auto& f : j.at("fixed")) {
                s.fixed.push_back({class_from_json(f.at("class")),
                                   Rect{f.at("row").get<std::uint32_t>(), f.at("col").get<std::uint32_t>(),
                                        f.at("height").get<std::uint32_t>(), f.at("width").get<std::uint32_t>()}});
            }
        }
        return s;
    });
}

json to_json(const SceneSpec& s) {
    json layers = json::array();
    for (const auto& l : s.layers) {
        layers.push_back({{"class", class_name(l.label)},
                          {"count", l.count},
                          {"min_size_fraction", l.min_size_fraction},
                          {"max_size_fraction", l.max_size_fraction},
                          {"on_roads", l.on_roads}});
    }
    json fixed = json::array();
    for (const auto& f : s.fixed) {
        fixed.push_back({{"class", class_name(f.label)},
                         {"row", f.rect.row},
                         {"col", f.rect.col},
                         {"height", f.rect.height},
                         {"width", f.rect.width}});
    }
    return {{"height", s.height}, {"width", s.width},   {"gsd", s.gsd}, {"road_bands", s.road_bands},
            {"road_fraction", s.road_fraction}, {"layers", layers}, {"fixed", fixed}};
}

json to_json(const NoiseSpec& n) {
    return {{"mode", n.mode == NoiseMode::OutOfDistribution ? "ood" : "in_distribution"},
            {"logit_gain", n.logit_gain},
            {"logit_noise_sd", n.logit_noise_sd},
            {"ood_road_floor", n.ood_road_floor},
            {"samples", n.samples},
            {"ood_flip_fraction", n.ood_flip_fraction},
            {"ood_flip_class", class_name(n.ood_flip_class)}};
}

NoiseSpec noise_spec_from_json(const json& j) {
    return guarded("noise spec", [&] {
        NoiseSpec n;
        const std::string mode = j.value("mode", std::string("in_distribution"));
        ELGUARD_REQUIRE(mode == "ood" || mode == "in_distribution", ErrorCode::ConfigError,
                        "noise mode must be 'in_distribution' or 'ood'");
        n.mode = mode == "ood" ? NoiseMode::OutOfDistribution : NoiseMode::InDistribution;
        n.logit_gain = j.value("logit_gain", n.logit_gain);
        n.logit_noise_sd = j.value("logit_noise_sd", n.logit_noise_sd);
        n.ood_road_floor = j.value("ood_road_floor", n.ood_road_floor);
        n.samples = j.value("samples", n.samples);
        n.ood_flip_fraction = j.value("ood_flip_fraction", n.ood_flip_fraction);
        if (j.contains("ood_flip_class")) n.ood_flip_class = class_from_json(j.at("ood_flip_class"));
        return n;
    });
}

json to_json(const MonitorConfig& cfg) {
    return {{"tau", cfg.tau},
            {"ci_multiplier", cfg.ci_multiplier},
            {"theta", cfg.theta},
            {"samples", cfg.samples},
            {"composite", class_names(cfg.composite.members())}};
}

json to_json(const DriftModel& d) {
    return {{"altitude_m", d.altitude_m},
            {"descent_rate_mps", d.descent_rate_mps},
            {"wind_speed_mps", d.wind_speed_mps},
            {"margin_m", d.margin_m}};
}

json to_json(const Rect& r) {
    return {{"row", r.row}, {"col", r.col}, {"height", r.height}, {"width", r.width}};
}

json to_json(const LandingCandidate& c) {
    return {{"rank", c.rank},
            {"tile", to_json(c.tile)},
            {"clearance_m", meters(c.clearance_m)},
            {"buffer_required_m", c.buffer_required_m},
            {"excluded_class_hits", c.excluded_class_hits}};
}

json to_json(const MonitorVerdict& v) {
    return {{"tile", to_json(v.tile)},
            {"decision", v.decision == Decision::Safe ? "SAFE" : "UNSAFE"},
            {"unsafe_pixel_count", v.unsafe_pixel_count},
            {"unsafe_fraction", v.unsafe_fraction()},
            {"tau", v.tau},
            {"theta", v.theta},
            {"ci_multiplier", v.ci_multiplier},
            {"samples_used", v.samples_used}};
}

json to_json(const PipelineResult& r) {
    json trace = json::array();
    for (const auto& e : r.trace) {
        json entry = {{"step", e.step},
                      {"phase_before", to_string(e.phase_before)},
                      {"event", e.event},
                      {"action", to_string(e.action)},
                      {"phase_after", to_string(e.phase_after)}};
        if (e.tile) entry["tile"] = to_json(*e.tile);
        if (e.verdict) {
            entry["verdict"] = *e.verdict == Decision::Safe ? "SAFE" : "UNSAFE";
            entry["unsafe_pixels"] = e.unsafe_pixels;
        }
        trace.push_back(std::move(entry));
    }
    json verdicts = json::array();
    for (const auto& v : r.verdicts) verdicts.push_back(to_json(v));
    json out = {{"outcome", to_string(r.outcome)},
                {"phase", to_string(r.final_state.phase)},
                {"trials_used", r.final_state.trials_used},
                {"budget", r.final_state.budget},
                {"candidate_count", r.candidates.size()},
                {"verdicts", verdicts},
                {"trace", trace}};
    if (r.outcome == Outcome::Landed) {
        out["candidate"] = to_json(*r.landed);
    } else {
        out["reason"] = to_string(r.reason);
    }
    return out;
}

double RunConfig::effective_buffer() const { return drift ? buffer_radius(*drift) : pipeline.buffer_m; }

void merge_run_config(RunConfig& cfg, const json& j) {
    guarded("run config", [&] {
        PipelineConfig& p = cfg.pipeline;
        if (j.contains("monitor")) {
            const json& m = j.at("monitor");
            p.monitor.tau = m.value("tau", p.monitor.tau);
            p.monitor.theta = m.value("theta", p.monitor.theta);
            p.monitor.ci_multiplier = m.value("ci_multiplier", p.monitor.ci_multiplier);
            p.monitor.samples = m.value("samples", p.monitor.samples);
            if (m.contains("composite")) p.monitor.composite = BusyRoadComposite(class_list(m.at("composite")));
        }
        p.tile_size = j.value("tile_size", p.tile_size);
        p.gsd = j.value("gsd", p.gsd);
        p.buffer_m = j.value("buffer_m", p.buffer_m);
        p.budget = j.value("budget", p.budget);
        p.core_sample = j.value("core_sample", p.core_sample);
        if (j.contains("excluded")) p.excluded = class_list(j.at("excluded"));
        if (j.contains("drift") && !j.at("drift").is_null()) {
            const json& d = j.at("drift");
            DriftModel drift;
            drift.altitude_m = d.at("altitude_m").get<double>();
            drift.descent_rate_mps = d.at("descent_rate_mps").get<double>();
            drift.wind_speed_mps = d.at("wind_speed_mps").get<double>();
            drift.margin_m = d.value("margin_m", 0.0);
            drift.validate();
            cfg.drift = drift;
        }
        if (j.contains("palette")) {
            cfg.palette.clear();
            for (const auto& c : j.at("palette")) cfg.palette.push_back(c.get<Rgb>());
        }
        return 0;
    });
}

json to_json(const RunConfig& cfg) {
    const PipelineConfig& p = cfg.pipeline;
    json palette = json::array();
    for (const auto& c : cfg.palette) palette.push_back(c);
    return {{"monitor", to_json(p.monitor)},
            {"tile_size", p.tile_size},
            {"gsd", p.gsd},
            {"buffer_m", cfg.effective_buffer()},
            {"drift", cfg.drift ? to_json(*cfg.drift) : json(nullptr)},
            {"budget", p.budget},
            {"core_sample", p.core_sample},
            {"excluded", class_names(p.excluded.empty() ? default_excluded_classes(p.monitor.composite) : p.excluded)},
            {"palette", palette}};
}

} // namespace elguard
