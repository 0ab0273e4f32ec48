#pragma once

#include "elguard/decision.hpp"
#include "elguard/lzs.hpp"
#include "elguard/monitor.hpp"
#include "elguard/scenegen.hpp"
#include "elguard/segcore.hpp"

#include <json.hpp>

#include <optional>

namespace elguard {

// Scene spec:
//   {"height", "width", "gsd", "road_bands", "road_fraction",
//    "layers": [{"class", "count", "min_size_fraction", "max_size_fraction", "on_roads"}],
//    "fixed":  [{"class", "row", "col", "height", "width"}]}
// Missing keys keep the urban_scene_spec defaults.
SceneSpec scene_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SceneSpec& spec);

nlohmann::json to_json(const NoiseSpec& noise);
NoiseSpec noise_spec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const MonitorConfig& cfg);
nlohmann::json to_json(const DriftModel& drift);
nlohmann::json to_json(const Rect& rect);
nlohmann::json to_json(const LandingCandidate& candidate);
nlohmann::json to_json(const MonitorVerdict& verdict);  // without the mask
nlohmann::json to_json(const PipelineResult& result);

/// Everything the select/decide/monitor subcommands need. Either `drift` or
/// `pipeline.buffer_m` determines the buffer.
struct RunConfig {
    PipelineConfig pipeline;
    std::optional<DriftModel> drift;
    Palette palette = default_palette();

    /// Buffer in meters: drift model when present, otherwise pipeline.buffer_m.
    double effective_buffer() const;
};

// {"monitor": {"tau", "theta", "ci_multiplier", "samples", "composite": [..]},
//  "tile_size", "gsd", "buffer_m", "drift": {"altitude_m", "descent_rate_mps",
//  "wind_speed_mps", "margin_m"}, "budget", "core_sample", "excluded": [..],
//  "palette": [[r,g,b], ...]}. Missing keys keep defaults.
void merge_run_config(RunConfig& cfg, const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& cfg);

} // namespace elguard
