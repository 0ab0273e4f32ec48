#include "elguard/cli.hpp"

#include "elguard/config_json.hpp"
#include "elguard/decision.hpp"
#include "elguard/error.hpp"
#include "elguard/lzs.hpp"
#include "elguard/monitor.hpp"
#include "elguard/scenegen.hpp"
#include "elguard/segcore.hpp"
#include "elguard/sora.hpp"
#include "elguard/sora_json.hpp"
#include "elguard/tensors.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace elguard::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<double> parse_numbers(const std::string& text, std::size_t expected, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            ELGUARD_REQUIRE(used == item.size(), ErrorCode::InvalidArgument, "");
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidArgument, std::string(what) + ": '" + text + "' is not a number list");
        }
    }
    ELGUARD_REQUIRE(out.size() == expected, ErrorCode::InvalidArgument,
                    std::string(what) + " expects " + std::to_string(expected) + " comma-separated values");
    return out;
}

Rect parse_tile(const std::string& text) {
    const auto v = parse_numbers(text, 4, "--tile");
    for (double x : v) {
        ELGUARD_REQUIRE(x >= 0 && x == std::floor(x) && x <= 4294967295.0, ErrorCode::InvalidArgument,
                        "--tile values must be non-negative integers");
    }
    return {static_cast<std::uint32_t>(v[0]), static_cast<std::uint32_t>(v[1]), static_cast<std::uint32_t>(v[2]),
            static_cast<std::uint32_t>(v[3])};
}

DriftModel parse_drift(const std::string& text) {
    const auto v = parse_numbers(text, 4, "--drift");
    DriftModel d{v[0], v[1], v[2], v[3]};
    d.validate();
    return d;
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path, std::ios::trunc);
    ELGUARD_REQUIRE(out, ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
    ELGUARD_REQUIRE(out.good(), ErrorCode::IoError, "write failed for " + path.string());
}

ScoreMapStack load_stack(const fs::path& path) { return decode_stack(read_file(path)); }

// Draws a one-pixel outline of `rect` into an RGB image.
void outline(RgbImage& img, const Rect& rect, const Rgb& color) {
    auto put = [&](std::uint32_t r, std::uint32_t c) {
        const std::size_t i = (std::size_t{r} * img.width + c) * 3;
        img.data[i] = color[0];
        img.data[i + 1] = color[1];
        img.data[i + 2] = color[2];
    };
    const std::uint32_t r1 = rect.row + rect.height - 1;
    const std::uint32_t c1 = rect.col + rect.width - 1;
    for (std::uint32_t c = rect.col; c <= c1; ++c) {
        put(rect.row, c);
        put(r1, c);
    }
    for (std::uint32_t r = rect.row; r <= r1; ++r) {
        put(r, rect.col);
        put(r, c1);
    }
}

// Shared flags of the subcommands that run selection, monitoring or the
// decision module. Each is optional; set flags override --config values.
struct PipelineFlags {
    std::string stack_path;
    std::string manifest_path;
    CLI::Option* tau = nullptr;
    CLI::Option* theta = nullptr;
    CLI::Option* ci_mult = nullptr;
    CLI::Option* samples = nullptr;
    CLI::Option* tile_size = nullptr;
    CLI::Option* buffer = nullptr;
    CLI::Option* drift = nullptr;
    CLI::Option* gsd = nullptr;
    CLI::Option* budget = nullptr;
    double tau_v = 0, theta_v = 0, ci_mult_v = 0, buffer_v = 0, gsd_v = 0;
    std::uint32_t samples_v = 0, tile_size_v = 0, budget_v = 0;
    std::string drift_v;

    void add_monitor(CLI::App* app) {
        tau = app->add_option("--tau", tau_v, "Safety threshold (default 0.125)");
        theta = app->add_option("--theta", theta_v, "Largest tolerated unsafe-pixel fraction (default 0)");
        ci_mult = app->add_option("--ci-mult", ci_mult_v, "Confidence-interval multiplier (default 3)");
        samples = app->add_option("--samples", samples_v, "Samples aggregated by the monitor (default 10)");
    }
    void add_selection(CLI::App* app) {
        tile_size = app->add_option("--tile-size", tile_size_v, "Candidate tile edge in pixels (default 32)");
        buffer = app->add_option("--buffer-m", buffer_v, "Required clearance from busy roads in meters");
        drift = app->add_option("--drift", drift_v, "Drift model h,vd,vw,margin (buffer = h/vd*vw + margin)");
        buffer->excludes(drift);
        gsd = app->add_option("--gsd", gsd_v, "Ground sampling distance in m/px");
        app->add_option("--manifest", manifest_path, "Scene manifest written by gen (supplies gsd)");
    }

    void apply(RunConfig& cfg) const {
        MonitorConfig& m = cfg.pipeline.monitor;
        if (tau && tau->count()) m.tau = tau_v;
        if (theta && theta->count()) m.theta = theta_v;
        if (ci_mult && ci_mult->count()) m.ci_multiplier = ci_mult_v;
        if (samples && samples->count()) m.samples = samples_v;
        if (tile_size && tile_size->count()) cfg.pipeline.tile_size = tile_size_v;
        if (!manifest_path.empty()) {
            const json manifest = load_json(manifest_path);
            ELGUARD_REQUIRE(manifest.contains("gsd") && manifest.at("gsd").is_number(), ErrorCode::ConfigError,
                            "manifest has no numeric gsd");
            cfg.pipeline.gsd = manifest.at("gsd").get<double>();
        }
        if (gsd && gsd->count()) cfg.pipeline.gsd = gsd_v;
        if (buffer && buffer->count()) {
            cfg.pipeline.buffer_m = buffer_v;
            cfg.drift.reset();
        }
        if (drift && drift->count()) cfg.drift = parse_drift(drift_v);
        if (budget && budget->count()) cfg.pipeline.budget = budget_v;
        cfg.pipeline.monitor.validate();
    }
};

struct Globals {
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::string config_path;
};

RunConfig base_config(const Globals& g) {
    RunConfig cfg;
    if (!g.config_path.empty()) merge_run_config(cfg, load_json(g.config_path));
    return cfg;
}

fs::path output_dir(const Globals& g) {
    const fs::path dir(g.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    ELGUARD_REQUIRE(!ec, ErrorCode::IoError, "cannot create output directory " + dir.string());
    return dir;
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"el-guard: emergency-landing zone selection, runtime monitoring and SORA tailoring"};
    app.name("el-guard");
    app.require_subcommand(1);

    Globals g;
    app.add_option("--seed", g.seed, "Seed for every randomized step");
    app.add_option("--out", g.out_dir, "Output directory (created if missing)");
    app.add_option("--config", g.config_path, "JSON run configuration");

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a synthetic scene and its emulated MC-dropout score stack");
    std::string scene_path;
    std::string mode = "in_distribution";
    NoiseSpec noise;
    std::uint32_t gen_height = 256, gen_width = 256;
    double gen_gsd = 0.5;
    gen->add_option("--scene", scene_path, "Scene spec JSON (default: urban block)");
    auto* gen_h = gen->add_option("--height", gen_height, "Image height in pixels");
    auto* gen_w = gen->add_option("--width", gen_width, "Image width in pixels");
    auto* gen_g = gen->add_option("--gsd", gen_gsd, "Ground sampling distance in m/px");
    gen->add_option("--mode", mode, "in_distribution or ood")->check(CLI::IsMember({"in_distribution", "ood"}));
    gen->add_option("--samples", noise.samples, "Number of stochastic samples S");
    gen->add_option("--gain", noise.logit_gain, "Logit gain of the true class");
    gen->add_option("--noise-sd", noise.logit_noise_sd, "Logit noise standard deviation");
    gen->add_option("--ood-floor", noise.ood_road_floor, "Busy-road score floor above tau (ood mode)");
    gen->add_option("--flip-fraction", noise.ood_flip_fraction, "Fraction of road pixels misclassified (ood mode)");

    // segment
    auto* segment = app.add_subcommand("segment", "Argmax segmentation of one sample");
    std::string seg_stack;
    std::uint32_t seg_sample = 0;
    segment->add_option("--stack", seg_stack, "ELSM score stack")->required();
    segment->add_option("--sample", seg_sample, "Sample index used by the core function");

    // monitor
    auto* monitor = app.add_subcommand("monitor", "Verify tiles with the mu + k*sigma <= tau rule");
    PipelineFlags mon_flags;
    std::vector<std::string> tiles_text;
    unsigned threads = 1;
    std::string mon_expect;
    monitor->add_option("--stack", mon_flags.stack_path, "ELSM score stack")->required();
    monitor->add_option("--tile", tiles_text, "Tile r,c,h,w (repeatable)")->required();
    monitor->add_option("--threads", threads, "Worker threads for multiple tiles");
    monitor->add_option("--expect", mon_expect, "Exit 1 unless every tile is SAFE")->check(CLI::IsMember({"safe"}));
    mon_flags.add_monitor(monitor);

    // select
    auto* select = app.add_subcommand("select", "Rank candidate landing tiles");
    PipelineFlags sel_flags;
    select->add_option("--stack", sel_flags.stack_path, "ELSM score stack")->required();
    sel_flags.add_selection(select);

    // decide
    auto* decide = app.add_subcommand("decide", "Run the full select/verify/decide pipeline");
    PipelineFlags dec_flags;
    std::string dec_expect;
    decide->add_option("--stack", dec_flags.stack_path, "ELSM score stack")->required();
    dec_flags.budget = decide->add_option("--budget", dec_flags.budget_v, "Trial budget (default 3)");
    decide->add_option("--expect", dec_expect, "Exit 1 unless the outcome matches")
        ->check(CLI::IsMember({"landed", "terminated"}));
    dec_flags.add_monitor(decide);
    dec_flags.add_selection(decide);

    // sora assess
    auto* sora_cmd = app.add_subcommand("sora", "SORA ground-risk tailoring");
    sora_cmd->require_subcommand(1);
    auto* assess = sora_cmd->add_subcommand("assess", "Intrinsic GRC, mitigations, final GRC and SAIL");
    std::string spec_path, tables_path, ledger_path;
    assess->add_option("--spec", spec_path, "Operation spec JSON")->required();
    assess->add_option("--tables", tables_path, "Risk tables JSON (default: built-in tables)");
    assess->add_option("--ledger", ledger_path, "Mitigation ledger JSON (default: empty)");

    for (auto* sub : {gen, segment, monitor, select, decide, sora_cmd, assess}) sub->fallthrough();

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::Success&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (gen->parsed()) {
            SceneSpec spec = scene_path.empty() ? urban_scene_spec() : scene_spec_from_json(load_json(scene_path));
            if (gen_h->count()) spec.height = gen_height;
            if (gen_w->count()) spec.width = gen_width;
            if (gen_g->count()) spec.gsd = gen_gsd;
            noise.mode = mode == "ood" ? NoiseMode::OutOfDistribution : NoiseMode::InDistribution;
            const GroundTruthScene scene = generate_scene(spec, g.seed);
            const ScoreMapStack stack = sample_scores(scene, noise, g.seed);
            const fs::path dir = output_dir(g);
            write_file(dir / "gt_labels.pgm", write_mask(scene.labels, MaskKind::Labels, kNumClasses));
            write_file(dir / "stack.elsm", encode_stack(stack));
            write_json(dir / "scene.json",
                       {{"seed", g.seed}, {"gsd", scene.gsd}, {"spec", to_json(spec)}, {"noise", to_json(noise)}});
            out << "wrote " << (dir / "stack.elsm").string() << " (S=" << stack.samples << ", K=" << stack.classes
                << ", " << stack.height << "x" << stack.width << ")\n";
            return kExitOk;
        }

        if (segment->parsed()) {
            const RunConfig cfg = base_config(g);
            const ScoreMapStack stack = load_stack(seg_stack);
            const SegmentationMap seg = argmax_segment(stack, seg_sample, cfg.pipeline.monitor.composite);
            const fs::path dir = output_dir(g);
            write_file(dir / "labels.pgm", write_mask(seg.labels, MaskKind::Labels, seg.classes));
            write_file(dir / "segmentation.ppm", write_ppm(colorize(seg, cfg.palette)));
            out << "busy-road pixels: " << seg.busy_road.count_nonzero() << "\n";
            return kExitOk;
        }

        if (monitor->parsed()) {
            RunConfig cfg = base_config(g);
            mon_flags.apply(cfg);
            const ScoreMapStack stack = load_stack(mon_flags.stack_path);
            if (std::min(stack.samples, cfg.pipeline.monitor.samples) < 2) {
                err << "warning: a single sample yields sigma = 0; the interval rule degenerates to mu <= tau\n";
            }
            std::vector<Rect> tiles;
            for (const auto& t : tiles_text) tiles.push_back(parse_tile(t));

            const auto start = std::chrono::steady_clock::now();
            const auto verdicts = verify_tiles(stack, tiles, cfg.pipeline.monitor, threads);
            const double elapsed_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

            const fs::path dir = output_dir(g);
            json list = json::array();
            bool all_safe = true;
            for (std::size_t i = 0; i < verdicts.size(); ++i) {
                const std::string name = verdicts.size() == 1 ? "warning.pgm" : "warning_" + std::to_string(i) + ".pgm";
                write_file(dir / name, write_mask(verdicts[i].warning_mask, MaskKind::Warning));
                json v = to_json(verdicts[i]);
                v["warning_mask"] = name;
                list.push_back(std::move(v));
                all_safe = all_safe && verdicts[i].decision == Decision::Safe;
            }
            const json report = {{"stack", {{"samples", stack.samples},
                                            {"classes", stack.classes},
                                            {"height", stack.height},
                                            {"width", stack.width}}},
                                 {"config", to_json(cfg)},
                                 {"threads", threads},
                                 {"timing_ms", {{"verify_total", elapsed_ms}}},
                                 {"verdicts", list}};
            write_json(dir / "verdict.json", report);
            out << report.dump(2) << "\n";
            return (!mon_expect.empty() && !all_safe) ? kExitRejected : kExitOk;
        }

        if (select->parsed()) {
            RunConfig cfg = base_config(g);
            sel_flags.apply(cfg);
            const ScoreMapStack stack = load_stack(sel_flags.stack_path);
            const PipelineConfig& p = cfg.pipeline;
            const SegmentationMap seg = argmax_segment(stack, p.core_sample, p.monitor.composite);
            const DistanceMap dist = distance_transform(seg.busy_road, p.gsd);
            const auto excluded = p.excluded.empty() ? default_excluded_classes(p.monitor.composite) : p.excluded;
            const double buffer = cfg.effective_buffer();
            const auto candidates = select_candidates(seg, dist, p.tile_size, buffer, excluded);

            RgbImage overlay = colorize(seg, cfg.palette);
            for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) {
                outline(overlay, it->tile, it->rank == 0 ? Rgb{255, 255, 255} : Rgb{255, 255, 0});
            }
            const fs::path dir = output_dir(g);
            write_file(dir / "overlay.ppm", write_ppm(overlay));
            json list = json::array();
            for (const auto& c : candidates) list.push_back(to_json(c));
            const json report = {{"config", to_json(cfg)}, {"candidates", list}};
            write_json(dir / "candidates.json", report);
            out << candidates.size() << " candidate tile(s), buffer " << buffer << " m\n";
            return kExitOk;
        }

        if (decide->parsed()) {
            RunConfig cfg = base_config(g);
            dec_flags.apply(cfg);
            const ScoreMapStack stack = load_stack(dec_flags.stack_path);
            PipelineConfig p = cfg.pipeline;
            p.buffer_m = cfg.effective_buffer();
            const PipelineResult result = run_pipeline(stack, p);
            json report = to_json(result);
            report["config"] = to_json(cfg);
            const fs::path dir = output_dir(g);
            write_json(dir / "decision.json", report);
            out << report.dump(2) << "\n";
            if (dec_expect == "landed" && result.outcome != Outcome::Landed) return kExitRejected;
            if (dec_expect == "terminated" && result.outcome != Outcome::Terminated) return kExitRejected;
            return kExitOk;
        }

        if (assess->parsed()) {
            const sora::OperationSpec spec = sora::spec_from_json(load_json(spec_path));
            const sora::RiskTables tables =
                tables_path.empty() ? sora::default_risk_tables() : sora::tables_from_json(load_json(tables_path));
            sora::LedgerFile ledger;
            if (!ledger_path.empty()) ledger = sora::ledger_from_json(load_json(ledger_path));
            const sora::RiskAssessment result = sora::assess(spec, tables, ledger.mitigations, ledger.el_checklist);
            json report = sora::to_json(result);
            report["ledger"] = sora::to_json(ledger);
            report["tables"] = tables_path.empty() ? json("built-in") : json(tables_path);
            const fs::path dir = output_dir(g);
            write_json(dir / "assessment.json", report);
            out << report.dump(2) << "\n";
            return kExitOk;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    err << app.help();
    return kExitUsage;
}

} // namespace elguard::cli
