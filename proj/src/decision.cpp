#include "elguard/decision.hpp"

#include "elguard/error.hpp"

#include <string>

namespace elguard {

DmState DmState::initial(std::uint32_t budget) {
    ELGUARD_REQUIRE(budget >= 1, ErrorCode::InvalidArgument, "trial budget must be >= 1");
    DmState s;
    s.budget = budget;
    return s;
}

namespace {

[[noreturn]] void illegal(const DmState& state, const DmEvent& event) {
    throw Error(ErrorCode::IllegalEvent,
                std::string(event_name(event)) + " is not accepted in phase " + std::string(to_string(state.phase)));
}

} // namespace

std::pair<DmState, DmAction> dm_step(const DmState& state, const DmEvent& event) {
    DmState next = state;
    switch (state.phase) {
    case DmPhase::Idle:
        if (const auto* propose = std::get_if<dm_event::Propose>(&event)) {
            if (state.trials_used >= state.budget) illegal(state, event);
            next.phase = DmPhase::AwaitVerdict;
            next.trials_used = state.trials_used + 1;
            next.current_candidate = propose->candidate;
            return {next, DmAction::RequestMonitor};
        }
        if (std::holds_alternative<dm_event::NoCandidate>(event)) {
            next.phase = DmPhase::Aborted;
            next.current_candidate.reset();
            return {next, DmAction::FlightTermination};
        }
        break;
    case DmPhase::AwaitVerdict:
        if (const auto* verdict = std::get_if<dm_event::Verdict>(&event)) {
            next.last_verdict = verdict->decision;
            if (verdict->decision == Decision::Safe) {
                next.phase = DmPhase::Landing;
                return {next, DmAction::ExecuteLanding};
            }
            next.current_candidate.reset();
            if (state.trials_used < state.budget) {
                next.phase = DmPhase::Idle;
                return {next, DmAction::Retry};
            }
            next.phase = DmPhase::Aborted;
            return {next, DmAction::FlightTermination};
        }
        break;
    case DmPhase::Landing:
    case DmPhase::Aborted:
        break;
    }
    illegal(state, event);
}

std::string_view to_string(DmPhase phase) noexcept {
    switch (phase) {
    case DmPhase::Idle: return "IDLE";
    case DmPhase::AwaitVerdict: return "AWAIT_VERDICT";
    case DmPhase::Landing: return "LANDING";
    case DmPhase::Aborted: return "ABORTED";
    }
    return "?";
}

std::string_view to_string(DmAction action) noexcept {
    switch (action) {
    case DmAction::RequestMonitor: return "REQUEST_MONITOR";
    case DmAction::ExecuteLanding: return "EXECUTE_LANDING";
    case DmAction::Retry: return "RETRY";
    case DmAction::FlightTermination: return "FLIGHT_TERMINATION";
    }
    return "?";
}

std::string_view event_name(const DmEvent& event) noexcept {
    if (std::holds_alternative<dm_event::Propose>(event)) return "PROPOSE";
    if (const auto* v = std::get_if<dm_event::Verdict>(&event)) {
        return v->decision == Decision::Safe ? "VERDICT(SAFE)" : "VERDICT(UNSAFE)";
    }
    return "NO_CANDIDATE";
}

std::string_view to_string(Outcome outcome) noexcept {
    return outcome == Outcome::Landed ? "LANDED" : "TERMINATED";
}

std::string_view to_string(TerminationReason reason) noexcept {
    switch (reason) {
    case TerminationReason::None: return "NONE";
    case TerminationReason::NoCandidate: return "NO_CANDIDATE";
    case TerminationReason::BudgetExhausted: return "BUDGET_EXHAUSTED";
    }
    return "?";
}

PipelineResult run_pipeline(const ScoreMapStack& stack, const PipelineConfig& config) {
    config.monitor.validate();
    const SegmentationMap seg = argmax_segment(stack, config.core_sample, config.monitor.composite);
    const DistanceMap dist = distance_transform(seg.busy_road, config.gsd);
    const auto excluded =
        config.excluded.empty() ? default_excluded_classes(config.monitor.composite) : config.excluded;

    PipelineResult result;
    result.candidates = select_candidates(seg, dist, config.tile_size, config.buffer_m, excluded);

    DmState state = DmState::initial(config.budget);
    std::size_t next_candidate = 0;
    std::uint32_t step = 0;

    auto apply = [&](const DmEvent& event, TraceEntry entry) {
        entry.step = step++;
        entry.phase_before = state.phase;
        entry.event = event_name(event);
        auto [next, action] = dm_step(state, event);
        entry.action = action;
        entry.phase_after = next.phase;
        state = std::move(next);
        result.trace.push_back(entry);
        return action;
    };

    while (state.phase != DmPhase::Landing && state.phase != DmPhase::Aborted) {
        if (next_candidate == result.candidates.size()) {
            apply(dm_event::NoCandidate{}, {});
            result.reason = TerminationReason::NoCandidate;
            break;
        }
        const LandingCandidate& candidate = result.candidates[next_candidate++];
        TraceEntry proposal;
        proposal.tile = candidate.tile;
        apply(dm_event::Propose{candidate}, proposal);

        MonitorVerdict verdict = verify_tile(stack, candidate.tile, config.monitor);
        TraceEntry answer;
        answer.tile = candidate.tile;
        answer.verdict = verdict.decision;
        answer.unsafe_pixels = verdict.unsafe_pixel_count;
        const Decision decision = verdict.decision;
        result.verdicts.push_back(std::move(verdict));
        const DmAction action = apply(dm_event::Verdict{decision}, answer);
        if (action == DmAction::ExecuteLanding) {
            result.outcome = Outcome::Landed;
            result.landed = candidate;
        } else if (action == DmAction::FlightTermination) {
            result.reason = TerminationReason::BudgetExhausted;
        }
    }
    result.final_state = state;
    return result;
}

} // namespace elguard
