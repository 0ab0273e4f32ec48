#pragma once

#include "elguard/lzs.hpp"
#include "elguard/monitor.hpp"
#include "elguard/segcore.hpp"
#include "elguard/tensors.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace elguard {

enum class DmPhase { Idle, AwaitVerdict, Landing, Aborted };
enum class DmAction { RequestMonitor, ExecuteLanding, Retry, FlightTermination };

struct DmState {
    DmPhase phase = DmPhase::Idle;
    std::uint32_t trials_used = 0;
    std::uint32_t budget = 3;
    std::optional<LandingCandidate> current_candidate;
    std::optional<Decision> last_verdict;

    /// Fresh IDLE state; throws InvalidArgument when budget == 0.
    static DmState initial(std::uint32_t budget);
};

namespace dm_event {
struct Propose {
    LandingCandidate candidate;
};
struct Verdict {
    Decision decision = Decision::Unsafe;
};
struct NoCandidate {};
} // namespace dm_event

using DmEvent = std::variant<dm_event::Propose, dm_event::Verdict, dm_event::NoCandidate>;

/// One transition of the decision module. Throws IllegalEvent when the event
/// is not accepted in the current phase (LANDING and ABORTED accept nothing).
std::pair<DmState, DmAction> dm_step(const DmState& state, const DmEvent& event);

std::string_view to_string(DmPhase phase) noexcept;
std::string_view to_string(DmAction action) noexcept;
std::string_view event_name(const DmEvent& event) noexcept;

struct PipelineConfig {
    MonitorConfig monitor;
    std::uint32_t tile_size = 32;
    double gsd = 0.5;
    double buffer_m = 0.0;
    /// Empty means default_excluded_classes(monitor.composite).
    std::vector<std::uint32_t> excluded;
    std::uint32_t budget = 3;
    std::uint32_t core_sample = 0;
};

enum class Outcome { Landed, Terminated };
enum class TerminationReason { None, NoCandidate, BudgetExhausted };

std::string_view to_string(Outcome outcome) noexcept;
std::string_view to_string(TerminationReason reason) noexcept;

struct TraceEntry {
    std::uint32_t step = 0;
    DmPhase phase_before = DmPhase::Idle;
    std::string_view event;
    DmAction action = DmAction::RequestMonitor;
    DmPhase phase_after = DmPhase::Idle;
    std::optional<Rect> tile;
    std::optional<Decision> verdict;
    std::uint64_t unsafe_pixels = 0;
};

struct PipelineResult {
    Outcome outcome = Outcome::Terminated;
    TerminationReason reason = TerminationReason::None;
    std::optional<LandingCandidate> landed;
    std::vector<LandingCandidate> candidates;
    std::vector<MonitorVerdict> verdicts;  // in request order
    std::vector<TraceEntry> trace;
    DmState final_state;
};

/// Core segmentation on one sample, candidate selection, then candidates in
/// rank order through dm_step with monitor verdicts until LANDING or ABORTED.
PipelineResult run_pipeline(const ScoreMapStack& stack, const PipelineConfig& config);

} // namespace elguard
