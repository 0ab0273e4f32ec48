#include "elguard/sora.hpp"

#include "elguard/error.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cctype>
#include <cmath>
#include <map>
#include <tuple>

namespace elguard::sora {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

constexpr std::string_view kCaseStudy = "case-study anchor";
constexpr std::string_view kPlaceholder = "placeholder: generic SORA 2.0 value, replace with the applicable edition";

} // namespace

std::string_view to_string(Scenario s) noexcept {
    switch (s) {
    case Scenario::VlosSparse: return "VLOS_sparse";
    case Scenario::BvlosSparse: return "BVLOS_sparse";
    case Scenario::VlosPopulated: return "VLOS_populated";
    case Scenario::BvlosPopulated: return "BVLOS_populated";
    case Scenario::OverAssembly: return "over_assembly";
    }
    return "?";
}

std::string_view to_string(Arc a) noexcept {
    switch (a) {
    case Arc::A: return "a";
    case Arc::B: return "b";
    case Arc::C: return "c";
    case Arc::D: return "d";
    }
    return "?";
}

std::string_view to_string(Level l) noexcept {
    switch (l) {
    case Level::None: return "none";
    case Level::Low: return "low";
    case Level::Medium: return "medium";
    case Level::High: return "high";
    }
    return "?";
}

std::string_view to_string(MitigationKind k) noexcept {
    switch (k) {
    case MitigationKind::M1: return "M1";
    case MitigationKind::ActiveM1El: return "active_M1_EL";
    case MitigationKind::M2: return "M2";
    case MitigationKind::M3: return "M3";
    }
    return "?";
}

std::string_view to_string(GroundOutcome o) noexcept {
    switch (o) {
    case GroundOutcome::R1: return "R1";
    case GroundOutcome::R2: return "R2";
    case GroundOutcome::R3: return "R3";
    case GroundOutcome::R4: return "R4";
    case GroundOutcome::R5: return "R5";
    }
    return "?";
}

Scenario parse_scenario(std::string_view s) {
    const std::string l = lower(s);
    for (auto v : {Scenario::VlosSparse, Scenario::BvlosSparse, Scenario::VlosPopulated, Scenario::BvlosPopulated,
                   Scenario::OverAssembly}) {
        if (lower(to_string(v)) == l) return v;
    }
    throw Error(ErrorCode::ConfigError, "unknown scenario '" + std::string(s) + "'");
}

Arc parse_arc(std::string_view s) {
    std::string l = lower(s);
    if (l.rfind("arc-", 0) == 0) l = l.substr(4);
    if (l.size() == 1 && l[0] >= 'a' && l[0] <= 'd') return static_cast<Arc>(l[0] - 'a');
    throw Error(ErrorCode::ConfigError, "unknown ARC '" + std::string(s) + "'");
}

Level parse_level(std::string_view s) {
    const std::string l = lower(s);
    for (auto v : {Level::None, Level::Low, Level::Medium, Level::High}) {
        if (to_string(v) == l) return v;
    }
    throw Error(ErrorCode::ConfigError, "unknown level '" + std::string(s) + "'");
}

MitigationKind parse_kind(std::string_view s) {
    for (auto v : {MitigationKind::M1, MitigationKind::ActiveM1El, MitigationKind::M2, MitigationKind::M3}) {
        if (to_string(v) == s) return v;
    }
    throw Error(ErrorCode::UnknownMitigationKind, "'" + std::string(s) + "'");
}

GroundOutcome parse_outcome(std::string_view s) {
    for (auto v : {GroundOutcome::R1, GroundOutcome::R2, GroundOutcome::R3, GroundOutcome::R4, GroundOutcome::R5}) {
        if (to_string(v) == s) return v;
    }
    throw Error(ErrorCode::UnknownOutcome, "'" + std::string(s) + "'");
}

void OperationSpec::validate() const {
    ELGUARD_REQUIRE(std::isfinite(span_m) && span_m > 0.0, ErrorCode::InvalidArgument, "span must be > 0");
    ELGUARD_REQUIRE(std::isfinite(mtow_kg) && mtow_kg > 0.0, ErrorCode::NonPositiveMass, "MTOW must be > 0");
    ELGUARD_REQUIRE(std::isfinite(flight_height_m) && flight_height_m > 0.0, ErrorCode::NonPositiveHeight,
                    "flight height must be > 0");
}

OperationSpec medidelivery_spec() {
    return {"MediDelivery", 1.0, 7.0, 120.0, Scenario::BvlosPopulated, Arc::C};
}

void RiskTables::validate() const {
    ELGUARD_REQUIRE(std::isfinite(gravity) && gravity > 0.0, ErrorCode::ConfigError, "gravity must be > 0");
    for (const auto& row : grc_rows) {
        ELGUARD_REQUIRE(row.grc >= kMinGrc && row.grc <= kMaxGrc, ErrorCode::ConfigError, "GRC row outside 1..8");
    }
    std::map<std::pair<int, Arc>, int> sails;
    for (const auto& e : sail_entries) {
        ELGUARD_REQUIRE(e.grc >= kMinGrc && e.grc <= kMaxGrc, ErrorCode::ConfigError, "SAIL entry GRC outside 1..8");
        ELGUARD_REQUIRE(e.sail >= 1 && e.sail <= 7, ErrorCode::ConfigError, "SAIL outside 1..7");
        ELGUARD_REQUIRE(sails.emplace(std::pair{e.grc, e.arc}, e.sail).second, ErrorCode::ConfigError,
                        "duplicate SAIL entry for GRC " + std::to_string(e.grc));
    }
    for (auto arc : {Arc::A, Arc::B, Arc::C, Arc::D}) {
        int previous = 0;
        for (int g = kMinGrc; g <= kMaxGrc; ++g) {
            const auto it = sails.find({g, arc});
            if (it == sails.end()) continue;
            ELGUARD_REQUIRE(it->second >= previous, ErrorCode::ConfigError,
                            "SAIL table must be non-decreasing in GRC (ARC " + std::string(to_string(arc)) + ")");
            previous = it->second;
        }
    }
    std::map<std::pair<MitigationKind, Level>, int> seen;
    for (const auto& d : deltas) {
        ELGUARD_REQUIRE(seen.emplace(std::pair{d.kind, d.robustness}, d.delta).second, ErrorCode::ConfigError,
                        "duplicate delta for " + std::string(to_string(d.kind)) + "/" +
                            std::string(to_string(d.robustness)));
    }
}

RiskTables default_risk_tables() {
    RiskTables t;
    const std::string placeholder(kPlaceholder);
    struct Column {
        std::optional<double> span;
        std::optional<double> energy;
    };
    const std::array<Column, 4> columns = {{{1.0, 700.0}, {3.0, 34e3}, {8.0, 1084e3}, {std::nullopt, std::nullopt}}};
    const auto add_row = [&](Scenario s, std::size_t col, int grc, std::string source) {
        t.grc_rows.push_back({columns[col].span, columns[col].energy, s, grc, std::move(source)});
    };
    add_row(Scenario::VlosSparse, 0, 2, placeholder);
    add_row(Scenario::VlosSparse, 1, 3, placeholder);
    add_row(Scenario::VlosSparse, 2, 4, placeholder);
    add_row(Scenario::VlosSparse, 3, 5, placeholder);
    add_row(Scenario::BvlosSparse, 0, 3, placeholder);
    add_row(Scenario::BvlosSparse, 1, 4, placeholder);
    add_row(Scenario::BvlosSparse, 2, 5, placeholder);
    add_row(Scenario::BvlosSparse, 3, 6, placeholder);
    add_row(Scenario::VlosPopulated, 0, 4, placeholder);
    add_row(Scenario::VlosPopulated, 1, 5, placeholder);
    add_row(Scenario::VlosPopulated, 2, 6, placeholder);
    add_row(Scenario::VlosPopulated, 3, 8, placeholder);
    add_row(Scenario::BvlosPopulated, 0, 5, placeholder);
    add_row(Scenario::BvlosPopulated, 1, 6, std::string(kCaseStudy) + ": MediDelivery (1 m, 8.23 kJ) -> 6");
    add_row(Scenario::BvlosPopulated, 2, 8, placeholder);
    add_row(Scenario::OverAssembly, 0, 8, placeholder);

    // SAIL by (GRC, ARC a..d).
    const std::array<std::array<int, 4>, 7> sail_rows = {{
        {1, 2, 4, 6}, {1, 2, 4, 6}, {2, 2, 4, 6}, {3, 3, 4, 6}, {4, 4, 4, 6}, {5, 5, 5, 6}, {6, 6, 6, 6},
    }};
    for (int g = 1; g <= 7; ++g) {
        for (int a = 0; a < 4; ++a) {
            const auto arc = static_cast<Arc>(a);
            std::string source = placeholder;
            if (arc == Arc::C && g == 6) source = std::string(kCaseStudy) + ": final GRC 6, ARC-c -> SAIL 5";
            if (arc == Arc::C && g == 7) source = std::string(kCaseStudy) + ": final GRC 7, ARC-c -> SAIL 6";
            t.sail_entries.push_back({g, arc, sail_rows[g - 1][a], std::move(source)});
        }
    }

    const std::string el_placeholder = "placeholder: no numeric credit is established for active-M1 emergency landing";
    t.deltas = {
        {MitigationKind::M1, Level::Low, -1, placeholder},
        {MitigationKind::M1, Level::Medium, -2, placeholder},
        {MitigationKind::M1, Level::High, -4, placeholder},
        {MitigationKind::M2, Level::Low, 0, placeholder},
        {MitigationKind::M2, Level::Medium, -1, placeholder},
        {MitigationKind::M2, Level::High, -2, placeholder},
        {MitigationKind::M3, Level::Low, 0, placeholder + " (the +1 comes from m3_absent_penalty)"},
        {MitigationKind::M3, Level::Medium, 0, std::string(kCaseStudy) + ": M3 medium keeps the GRC at 6"},
        {MitigationKind::M3, Level::High, -1, placeholder},
        {MitigationKind::ActiveM1El, Level::Low, -1, el_placeholder},
        {MitigationKind::ActiveM1El, Level::Medium, -2, el_placeholder},
        {MitigationKind::ActiveM1El, Level::High, -2, el_placeholder},
    };
    t.m3_absent_penalty = 1;
    t.gravity = kStandardGravity;
    return t;
}

Level Mitigation::robustness() const noexcept { return std::min(integrity, assurance); }

ElLevels el_robustness(const ElChecklist& c) noexcept {
    ElLevels out;
    if (c.no_high_risk_zones && c.effective_under_operating_conditions) {
        out.integrity = Level::Low;
        // Medium and high share the same criteria.
        if (c.selection_accounts_for_adverse_conditions) out.integrity = Level::High;
    }
    if (c.integrity_declared) {
        out.assurance = Level::Low;
        if (c.evidence_from_testing && c.video_data_verified && c.runtime_monitoring_in_place) {
            out.assurance = Level::Medium;
            if (c.third_party_validation && c.wide_condition_validation) out.assurance = Level::High;
        }
    }
    out.robustness = std::min(out.integrity, out.assurance);
    return out;
}

double ballistic_speed(double height_m, double g) {
    ELGUARD_REQUIRE(std::isfinite(height_m) && height_m > 0.0, ErrorCode::NonPositiveHeight, "height must be > 0");
    ELGUARD_REQUIRE(std::isfinite(g) && g > 0.0, ErrorCode::InvalidArgument, "gravity must be > 0");
    return std::sqrt(2.0 * g * height_m);
}

double kinetic_energy(double mass_kg, double speed_mps) {
    ELGUARD_REQUIRE(std::isfinite(mass_kg) && mass_kg > 0.0, ErrorCode::NonPositiveMass, "mass must be > 0");
    ELGUARD_REQUIRE(std::isfinite(speed_mps) && speed_mps >= 0.0, ErrorCode::InvalidArgument, "speed must be >= 0");
    return 0.5 * mass_kg * speed_mps * speed_mps;
}

IntrinsicGrc intrinsic_grc(const OperationSpec& spec, const RiskTables& tables) {
    spec.validate();
    IntrinsicGrc out;
    out.impact_speed_mps = ballistic_speed(spec.flight_height_m, tables.gravity);
    out.impact_energy_j = kinetic_energy(spec.mtow_kg, out.impact_speed_mps);

    const double kUnbounded = std::numeric_limits<double>::infinity();
    const GrcRow* best = nullptr;
    for (const auto& row : tables.grc_rows) {
        if (row.scenario != spec.scenario) continue;
        if (spec.span_m > row.max_span_m.value_or(kUnbounded)) continue;
        if (out.impact_energy_j > row.max_energy_j.value_or(kUnbounded)) continue;
        const auto key = [kUnbounded](const GrcRow& r) {
            return std::tuple{r.max_energy_j.value_or(kUnbounded), r.max_span_m.value_or(kUnbounded)};
        };
        if (best == nullptr || key(row) < key(*best)) best = &row;
    }
    ELGUARD_REQUIRE(best != nullptr, ErrorCode::NoMatchingRow,
                    "no intrinsic GRC row for scenario " + std::string(to_string(spec.scenario)) + ", span " +
                        std::to_string(spec.span_m) + " m, energy " + std::to_string(out.impact_energy_j) + " J");
    out.grc = best->grc;
    out.row = *best;
    return out;
}

MitigatedGrc apply_mitigations(int intrinsic, const MitigationLedger& ledger, const std::optional<ElChecklist>& el,
                               const RiskTables& tables) {
    ELGUARD_REQUIRE(intrinsic >= kMinGrc && intrinsic <= kMaxGrc, ErrorCode::InvalidArgument,
                    "intrinsic GRC outside 1..8");
    MitigatedGrc out;
    if (el) out.el = el_robustness(*el);

    MitigationLedger entries = ledger;
    const bool has_el = std::any_of(entries.begin(), entries.end(),
                                    [](const Mitigation& m) { return m.kind == MitigationKind::ActiveM1El; });
    if (el && !has_el) entries.push_back({MitigationKind::ActiveM1El, out.el->integrity, out.el->assurance});

    int running = intrinsic;
    bool m3_credited = false;
    for (const auto& m : entries) {
        Level robustness = m.robustness();
        std::string label = std::string(to_string(m.kind));
        if (m.kind == MitigationKind::ActiveM1El && out.el) {
            robustness = out.el->robustness;
            label += " (checklist)";
        }
        label += " robustness " + std::string(to_string(robustness));
        if (m.kind == MitigationKind::M3 && robustness >= Level::Medium) m3_credited = true;

        int delta = 0;
        if (robustness != Level::None) {
            const auto it = std::find_if(tables.deltas.begin(), tables.deltas.end(), [&](const DeltaEntry& d) {
                return d.kind == m.kind && d.robustness == robustness;
            });
            ELGUARD_REQUIRE(it != tables.deltas.end(), ErrorCode::UnknownMitigationKind,
                            "no configured delta for " + label);
            delta = it->delta;
        } else {
            label += " (no credit)";
        }
        running += delta;
        out.trace.push_back({label, delta, running});
    }
    if (!m3_credited) {
        running += tables.m3_absent_penalty;
        out.trace.push_back({"no M3 of medium or higher robustness", tables.m3_absent_penalty, running});
    }
    const int clamped = std::clamp(running, kMinGrc, kMaxGrc);
    if (clamped != running) {
        out.trace.push_back({"clamp to 1..8", clamped - running, clamped});
    }
    out.final_grc = clamped;
    return out;
}

int sail(int final_grc, Arc arc, const RiskTables& tables) {
    for (const auto& e : tables.sail_entries) {
        if (e.grc == final_grc && e.arc == arc) return e.sail;
    }
    throw Error(ErrorCode::NoMatchingRow,
                "no SAIL entry for GRC " + std::to_string(final_grc) + ", ARC-" + std::string(to_string(arc)));
}

int severity_lookup(GroundOutcome outcome, const MitigationLedger& active) {
    switch (outcome) {
    case GroundOutcome::R1: return 5;
    case GroundOutcome::R2: {
        const bool effective_m2 = std::any_of(active.begin(), active.end(), [](const Mitigation& m) {
            return m.kind == MitigationKind::M2 && m.robustness() >= Level::Medium;
        });
        return effective_m2 ? 2 : 4;
    }
    case GroundOutcome::R3: return 3;
    case GroundOutcome::R4: return 3;
    case GroundOutcome::R5: return 2;
    }
    throw Error(ErrorCode::UnknownOutcome, "outcome id out of range");
}

RiskAssessment assess(const OperationSpec& spec, const RiskTables& tables, const MitigationLedger& ledger,
                      const std::optional<ElChecklist>& el) {
    tables.validate();
    RiskAssessment a;
    a.spec = spec;
    a.intrinsic = intrinsic_grc(spec, tables);
    a.mitigated = apply_mitigations(a.intrinsic.grc, ledger, el, tables);
    a.arc = spec.arc;
    a.sail = sail(a.mitigated.final_grc, a.arc, tables);
    return a;
}

} // namespace elguard::sora
