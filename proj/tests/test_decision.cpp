#include "elguard/decision.hpp"
#include "elguard/scenegen.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <functional>

using namespace elguard;

namespace {

LandingCandidate candidate_at(std::uint32_t r, std::uint32_t c) { return {Rect{r, c, 8, 8}, 5.0, 0.0, 0, 0}; }

DmState awaiting(std::uint32_t budget, std::uint32_t used) {
    DmState s = DmState::initial(budget);
    s.phase = DmPhase::AwaitVerdict;
    s.trials_used = used;
    s.current_candidate = candidate_at(0, 0);
    return s;
}

} // namespace

TEST_CASE("state table") {
    auto [s1, a1] = dm_step(DmState::initial(3), dm_event::Propose{candidate_at(8, 8)});
    CHECK(s1.phase == DmPhase::AwaitVerdict);
    CHECK(a1 == DmAction::RequestMonitor);
    CHECK(s1.trials_used == 1);
    CHECK(s1.current_candidate->tile == Rect{8, 8, 8, 8});

    auto [s2, a2] = dm_step(awaiting(3, 1), dm_event::Verdict{Decision::Safe});
    CHECK(s2.phase == DmPhase::Landing);
    CHECK(a2 == DmAction::ExecuteLanding);

    auto [s3, a3] = dm_step(awaiting(3, 1), dm_event::Verdict{Decision::Unsafe});
    CHECK(s3.phase == DmPhase::Idle);
    CHECK(a3 == DmAction::Retry);

    auto [s4, a4] = dm_step(awaiting(1, 1), dm_event::Verdict{Decision::Unsafe});
    CHECK(s4.phase == DmPhase::Aborted);
    CHECK(a4 == DmAction::FlightTermination);

    auto [s5, a5] = dm_step(DmState::initial(2), dm_event::NoCandidate{});
    CHECK(s5.phase == DmPhase::Aborted);
    CHECK(a5 == DmAction::FlightTermination);
}

TEST_CASE("illegal events") {
    DmState landing = awaiting(3, 1);
    landing.phase = DmPhase::Landing;
    for (const DmEvent& e : {DmEvent{dm_event::Propose{}}, DmEvent{dm_event::Verdict{Decision::Safe}},
                             DmEvent{dm_event::NoCandidate{}}}) {
        CHECK(code_of([&] { dm_step(landing, e); }) == ErrorCode::IllegalEvent);
        DmState aborted = landing;
        aborted.phase = DmPhase::Aborted;
        CHECK(code_of([&] { dm_step(aborted, e); }) == ErrorCode::IllegalEvent);
    }
    CHECK(code_of([] { dm_step(DmState::initial(1), dm_event::Verdict{Decision::Safe}); }) ==
          ErrorCode::IllegalEvent);
    CHECK(code_of([] { dm_step(awaiting(2, 1), dm_event::Propose{}); }) == ErrorCode::IllegalEvent);
    CHECK(code_of([] { dm_step(awaiting(2, 1), dm_event::NoCandidate{}); }) == ErrorCode::IllegalEvent);
    CHECK(code_of([] { DmState::initial(0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("exhaustive check of event sequences") {
    const std::vector<DmEvent> alphabet = {dm_event::Propose{candidate_at(0, 0)},
                                           dm_event::Verdict{Decision::Safe},
                                           dm_event::Verdict{Decision::Unsafe}, dm_event::NoCandidate{}};
    std::size_t explored = 0;
    for (std::uint32_t budget = 1; budget <= 3; ++budget) {
        std::function<void(const DmState&, int, int, bool)> walk = [&](const DmState& s, int depth, int requests,
                                                                       bool last_safe) {
            ++explored;
            REQUIRE(s.trials_used <= s.budget);
            REQUIRE(requests == int(s.trials_used));
            if (s.phase == DmPhase::Landing) REQUIRE(last_safe);
            if (s.phase == DmPhase::Aborted) REQUIRE(!last_safe);
            if (depth == 12) return;
            for (const auto& e : alphabet) {
                DmState next;
                DmAction action;
                try {
                    std::tie(next, action) = dm_step(s, e);
                } catch (const Error& err) {
                    REQUIRE(err.code() == ErrorCode::IllegalEvent);
                    continue;
                }
                const bool safe_verdict = std::holds_alternative<dm_event::Verdict>(e) &&
                                          std::get<dm_event::Verdict>(e).decision == Decision::Safe;
                if (action == DmAction::ExecuteLanding) REQUIRE(safe_verdict);
                if (safe_verdict) REQUIRE(action == DmAction::ExecuteLanding);
                if (action == DmAction::FlightTermination && std::holds_alternative<dm_event::Verdict>(e))
                    REQUIRE(next.trials_used == budget);
                walk(next, depth + 1, requests + (action == DmAction::RequestMonitor), safe_verdict);
            }
        };
        walk(DmState::initial(budget), 0, 0, false);
    }
    CHECK(explored > 0);
}

TEST_CASE("liveness: every verdict stream ends within the budget") {
    for (std::uint32_t budget = 1; budget <= 4; ++budget) {
        for (std::uint32_t pattern = 0; pattern < (1u << budget); ++pattern) {
            DmState s = DmState::initial(budget);
            int steps = 0;
            for (std::uint32_t trial = 0; s.phase != DmPhase::Landing && s.phase != DmPhase::Aborted; ++trial) {
                s = dm_step(s, dm_event::Propose{candidate_at(0, 0)}).first;
                const bool safe = (pattern >> trial) & 1u;
                s = dm_step(s, dm_event::Verdict{safe ? Decision::Safe : Decision::Unsafe}).first;
                steps += 2;
                REQUIRE(steps <= int(2 * budget));
            }
            CHECK(s.trials_used <= budget);
        }
    }
}

TEST_CASE("pipeline lands on the top candidate of a clean scene") {
    SceneSpec spec;
    spec.height = spec.width = 128;
    spec.road_fraction = 0.0;
    spec.fixed = {{SemanticClass::Road, Rect{0, 0, 16, 128}}};
    const auto scene = generate_scene(spec, 0);
    NoiseSpec noise;
    noise.logit_noise_sd = 0.0;
    PipelineConfig cfg;
    cfg.buffer_m = 20.0;
    const auto result = run_pipeline(sample_scores(scene, noise, 0), cfg);
    REQUIRE(result.outcome == Outcome::Landed);
    CHECK(result.final_state.trials_used == 1);
    CHECK(result.landed->tile == result.candidates.front().tile);
    CHECK(result.landed->tile == Rect{96, 0, 32, 32});
    CHECK(oracle::tile_clearance(busy_road_truth(scene), result.landed->tile, 0.5) >= 20.0);
    CHECK(result.trace.size() == 2);
    CHECK(result.reason == TerminationReason::None);
}

TEST_CASE("pipeline on an all-road scene terminates without candidates") {
    SceneSpec spec;
    spec.height = spec.width = 64;
    spec.road_fraction = 1.0;
    const auto scene = generate_scene(spec, 0);
    NoiseSpec noise;
    const auto result = run_pipeline(sample_scores(scene, noise, 0), PipelineConfig{});
    CHECK(result.outcome == Outcome::Terminated);
    CHECK(result.reason == TerminationReason::NoCandidate);
    CHECK(result.candidates.empty());
    REQUIRE(result.trace.size() == 1);
    CHECK(result.trace[0].action == DmAction::FlightTermination);
}

TEST_CASE("pipeline stops after exactly budget UNSAFE verdicts on an OOD road scene") {
    // the road is invisible to the core model but keeps its score floor
    SceneSpec spec;
    spec.height = spec.width = 128;
    spec.road_fraction = 0.0;
    for (std::uint32_t r = 0; r < 128; r += 32) spec.fixed.push_back({SemanticClass::Road, Rect{r + 14, 0, 4, 128}});
    const auto scene = generate_scene(spec, 4);
    NoiseSpec noise;
    noise.mode = NoiseMode::OutOfDistribution;
    noise.ood_flip_fraction = 1.0;
    const auto stack = sample_scores(scene, noise, 4);
    PipelineConfig cfg;
    const auto result = run_pipeline(stack, cfg);
    CHECK(result.candidates.size() == 16);
    CHECK(result.outcome == Outcome::Terminated);
    CHECK(result.reason == TerminationReason::BudgetExhausted);
    CHECK(result.verdicts.size() == 3);
    for (const auto& v : result.verdicts) CHECK(v.decision == Decision::Unsafe);
    std::size_t requests = 0;
    for (const auto& t : result.trace) requests += t.action == DmAction::RequestMonitor;
    CHECK(requests == result.final_state.trials_used);
    CHECK(result.final_state.phase == DmPhase::Aborted);
}

TEST_CASE("pipeline reports NO_CANDIDATE when candidates run out before the budget") {
    SceneSpec spec;
    spec.height = spec.width = 64;
    spec.road_fraction = 0.0;
    spec.fixed = {{SemanticClass::Road, Rect{30, 0, 4, 64}}};
    const auto scene = generate_scene(spec, 4);
    NoiseSpec noise;
    noise.mode = NoiseMode::OutOfDistribution;
    noise.ood_flip_fraction = 1.0;
    PipelineConfig cfg;
    cfg.budget = 10;
    const auto result = run_pipeline(sample_scores(scene, noise, 4), cfg);
    CHECK(result.candidates.size() == 4);
    CHECK(result.verdicts.size() == 4);
    CHECK(result.reason == TerminationReason::NoCandidate);
}
