#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace elguard::sora {

inline constexpr double kStandardGravity = 9.80665;
inline constexpr int kMinGrc = 1;
inline constexpr int kMaxGrc = 8;

enum class Scenario { VlosSparse, BvlosSparse, VlosPopulated, BvlosPopulated, OverAssembly };
enum class Arc { A, B, C, D };
/// Ordered: None < Low < Medium < High.
enum class Level { None = 0, Low = 1, Medium = 2, High = 3 };
enum class MitigationKind { M1, ActiveM1El, M2, M3 };
/// Ground-risk hazardous outcomes R1..R5.
enum class GroundOutcome { R1, R2, R3, R4, R5 };

std::string_view to_string(Scenario s) noexcept;
std::string_view to_string(Arc a) noexcept;
std::string_view to_string(Level l) noexcept;
std::string_view to_string(MitigationKind k) noexcept;
std::string_view to_string(GroundOutcome o) noexcept;

// Parsers throw Error(ConfigError); parse_kind throws UnknownMitigationKind
// and parse_outcome throws UnknownOutcome.
Scenario parse_scenario(std::string_view s);
Arc parse_arc(std::string_view s);
Level parse_level(std::string_view s);
MitigationKind parse_kind(std::string_view s);
GroundOutcome parse_outcome(std::string_view s);

struct OperationSpec {
    std::string name;
    double span_m = 0.0;
    double mtow_kg = 0.0;
    double flight_height_m = 0.0;
    Scenario scenario = Scenario::BvlosPopulated;
    Arc arc = Arc::C;

    void validate() const;
};

/// The delivery drone of the case study: ~1 m span, 7 kg, 120 m, BVLOS over
/// populated area, ARC-c.
OperationSpec medidelivery_spec();

/// One intrinsic-GRC cell. Bounds are inclusive; nullopt means unbounded.
struct GrcRow {
    std::optional<double> max_span_m;
    std::optional<double> max_energy_j;
    Scenario scenario = Scenario::VlosSparse;
    int grc = 0;
    std::string source;
};

struct SailEntry {
    int grc = 0;
    Arc arc = Arc::A;
    int sail = 0;
    std::string source;
};

struct DeltaEntry {
    MitigationKind kind = MitigationKind::M1;
    Level robustness = Level::Low;
    int delta = 0;
    std::string source;
};

struct RiskTables {
    std::vector<GrcRow> grc_rows;
    std::vector<SailEntry> sail_entries;
    std::vector<DeltaEntry> deltas;
    /// Added when the ledger has no M3 entry of at least medium robustness.
    int m3_absent_penalty = 1;
    double gravity = kStandardGravity;

    /// GRC in 1..8, SAIL in 1..7, no duplicate keys, SAIL monotone in GRC
    /// for every ARC. Throws ConfigError.
    void validate() const;
};

/// Case-study anchored entries plus labeled placeholder rows.
RiskTables default_risk_tables();

struct Mitigation {
    MitigationKind kind = MitigationKind::M1;
    Level integrity = Level::None;
    Level assurance = Level::None;

    Level robustness() const noexcept;
};

using MitigationLedger = std::vector<Mitigation>;

/// Emergency-landing (active M1) assessment answers.
struct ElChecklist {
    // integrity, low
    bool no_high_risk_zones = false;
    bool effective_under_operating_conditions = false;
    // integrity, medium (high uses the same criteria)
    bool selection_accounts_for_adverse_conditions = false;
    // assurance, low
    bool integrity_declared = false;
    // assurance, medium
    bool evidence_from_testing = false;
    bool video_data_verified = false;
    bool runtime_monitoring_in_place = false;
    // assurance, high
    bool third_party_validation = false;
    bool wide_condition_validation = false;
};

struct ElLevels {
    Level integrity = Level::None;
    Level assurance = Level::None;
    Level robustness = Level::None;
};

ElLevels el_robustness(const ElChecklist& checklist) noexcept;

/// sqrt(2 g h). Throws NonPositiveHeight.
double ballistic_speed(double height_m, double g = kStandardGravity);
/// 0.5 m v^2. Throws NonPositiveMass.
double kinetic_energy(double mass_kg, double speed_mps);

struct IntrinsicGrc {
    int grc = 0;
    double impact_speed_mps = 0.0;
    double impact_energy_j = 0.0;
    GrcRow row;
};

/// Tightest matching row for the scenario: smallest max_energy, then
/// smallest max_span, then table order. Throws NoMatchingRow.
IntrinsicGrc intrinsic_grc(const OperationSpec& spec, const RiskTables& tables);

struct TraceStep {
    std::string label;
    int delta = 0;
    int running = 0;  // unclamped running total after this step
};

struct MitigatedGrc {
    int final_grc = 0;
    std::vector<TraceStep> trace;
    std::optional<ElLevels> el;
};

/// Sums per-(kind, robustness) deltas, adds the M3-absent penalty, and
/// clamps to 1..8; a clamp shows up as its own trace step so that intrinsic
/// plus all trace deltas equals final_grc. A checklist sets the robustness
/// of active-M1 entries (and adds one when the ledger has none).
MitigatedGrc apply_mitigations(int intrinsic, const MitigationLedger& ledger, const std::optional<ElChecklist>& el,
                               const RiskTables& tables);

/// Throws NoMatchingRow.
int sail(int final_grc, Arc arc, const RiskTables& tables);

/// Base severity per outcome; an M2 entry of at least medium robustness
/// lowers R2 from 4 to 2.
int severity_lookup(GroundOutcome outcome, const MitigationLedger& active);

struct RiskAssessment {
    OperationSpec spec;
    IntrinsicGrc intrinsic;
    MitigatedGrc mitigated;
    Arc arc = Arc::C;
    int sail = 0;
};

RiskAssessment assess(const OperationSpec& spec, const RiskTables& tables, const MitigationLedger& ledger,
                      const std::optional<ElChecklist>& el = std::nullopt);

} // namespace elguard::sora
