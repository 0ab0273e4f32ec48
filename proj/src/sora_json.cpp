#include "elguard/sora_json.hpp"

#include "elguard/error.hpp"

#include <fstream>

namespace elguard {

nlohmann::json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    ELGUARD_REQUIRE(in, ErrorCode::IoError, "cannot open " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
    }
}

} // namespace elguard

namespace elguard::sora {

namespace {

using nlohmann::json;

// Re-throws JSON library errors (missing key, wrong type) as ConfigError.
template <typename Fn>
auto guarded(std::string_view what, Fn&& fn) {
    try {
        return fn();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ConfigError, std::string(what) + ": " + e.what());
    }
}

std::optional<double> optional_bound(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

json bound_to_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string source_of(const json& j) { return j.value("source", std::string()); }

} // namespace

OperationSpec spec_from_json(const json& j) {
    return guarded("operation spec", [&] {
        OperationSpec s;
        s.name = j.value("name", std::string());
        s.span_m = j.at("span_m").get<double>();
        s.mtow_kg = j.at("mtow_kg").get<double>();
        s.flight_height_m = j.at("flight_height_m").get<double>();
        s.scenario = parse_scenario(j.at("scenario").get<std::string>());
        s.arc = parse_arc(j.at("arc").get<std::string>());
        return s;
    });
}

json to_json(const OperationSpec& s) {
    return {{"name", s.name},
            {"span_m", s.span_m},
            {"mtow_kg", s.mtow_kg},
            {"flight_height_m", s.flight_height_m},
            {"scenario", to_string(s.scenario)},
            {"arc", to_string(s.arc)}};
}

RiskTables tables_from_json(const json& j) {
    RiskTables t = guarded("risk tables", [&] {
        RiskTables t;
        t.gravity = j.value("gravity", kStandardGravity);
        t.m3_absent_penalty = j.value("m3_absent_penalty", 1);
        for (const auto& r : j.at("grc_rows")) {
            t.grc_rows.push_back({optional_bound(r, "max_span_m"), optional_bound(r, "max_energy_j"),
                                  parse_scenario(r.at("scenario").get<std::string>()), r.at("grc").get<int>(),
                                  source_of(r)});
        }
        for (const auto& e : j.at("sail_table")) {
            t.sail_entries.push_back({e.at("grc").get<int>(), parse_arc(e.at("arc").get<std::string>()),
                                      e.at("sail").get<int>(), source_of(e)});
        }
        for (const auto& d : j.at("mitigation_deltas")) {
            t.deltas.push_back({parse_kind(d.at("kind").get<std::string>()),
                                parse_level(d.at("robustness").get<std::string>()), d.at("delta").get<int>(),
                                source_of(d)});
        }
        return t;
    });
    t.validate();
    return t;
}

json to_json(const RiskTables& t) {
    json rows = json::array();
    for (const auto& r : t.grc_rows) {
        rows.push_back({{"max_span_m", bound_to_json(r.max_span_m)},
                        {"max_energy_j", bound_to_json(r.max_energy_j)},
                        {"scenario", to_string(r.scenario)},
                        {"grc", r.grc},
                        {"source", r.source}});
    }
    json sails = json::array();
    for (const auto& e : t.sail_entries) {
        sails.push_back({{"grc", e.grc}, {"arc", to_string(e.arc)}, {"sail", e.sail}, {"source", e.source}});
    }
    json deltas = json::array();
    for (const auto& d : t.deltas) {
        deltas.push_back({{"kind", to_string(d.kind)},
                          {"robustness", to_string(d.robustness)},
                          {"delta", d.delta},
                          {"source", d.source}});
    }
    return {{"gravity", t.gravity},
            {"m3_absent_penalty", t.m3_absent_penalty},
            {"grc_rows", rows},
            {"sail_table", sails},
            {"mitigation_deltas", deltas}};
}

ElChecklist checklist_from_json(const json& j) {
    return guarded("EL checklist", [&] {
        ElChecklist c;
        const json& integrity = j.at("integrity");
        c.no_high_risk_zones = integrity.value("no_high_risk_zones", false);
        c.effective_under_operating_conditions = integrity.value("effective_under_operating_conditions", false);
        c.selection_accounts_for_adverse_conditions =
            integrity.value("selection_accounts_for_adverse_conditions", false);
        const json& assurance = j.at("assurance");
        c.integrity_declared = assurance.value("integrity_declared", false);
        c.evidence_from_testing = assurance.value("evidence_from_testing", false);
        c.video_data_verified = assurance.value("video_data_verified", false);
        c.runtime_monitoring_in_place = assurance.value("runtime_monitoring_in_place", false);
        c.third_party_validation = assurance.value("third_party_validation", false);
        c.wide_condition_validation = assurance.value("wide_condition_validation", false);
        return c;
    });
}

json to_json(const ElChecklist& c) {
    return {{"integrity",
             {{"no_high_risk_zones", c.no_high_risk_zones},
              {"effective_under_operating_conditions", c.effective_under_operating_conditions},
              {"selection_accounts_for_adverse_conditions", c.selection_accounts_for_adverse_conditions}}},
            {"assurance",
             {{"integrity_declared", c.integrity_declared},
              {"evidence_from_testing", c.evidence_from_testing},
              {"video_data_verified", c.video_data_verified},
              {"runtime_monitoring_in_place", c.runtime_monitoring_in_place},
              {"third_party_validation", c.third_party_validation},
              {"wide_condition_validation", c.wide_condition_validation}}}};
}

LedgerFile ledger_from_json(const json& j) {
    LedgerFile out;
    guarded("mitigation ledger", [&] {
        for (const auto& m : j.at("mitigations")) {
            out.mitigations.push_back({parse_kind(m.at("kind").get<std::string>()),
                                       parse_level(m.value("integrity", std::string("none"))),
                                       parse_level(m.value("assurance", std::string("none")))});
        }
        return 0;
    });
    if (j.contains("el_checklist") && !j.at("el_checklist").is_null()) {
        out.el_checklist = checklist_from_json(j.at("el_checklist"));
    }
    return out;
}

json to_json(const LedgerFile& ledger) {
    json mitigations = json::array();
    for (const auto& m : ledger.mitigations) {
        mitigations.push_back({{"kind", to_string(m.kind)},
                               {"integrity", to_string(m.integrity)},
                               {"assurance", to_string(m.assurance)}});
    }
    json j = {{"mitigations", mitigations}};
    j["el_checklist"] = ledger.el_checklist ? to_json(*ledger.el_checklist) : json(nullptr);
    return j;
}

json to_json(const RiskAssessment& a) {
    json trace = json::array();
    for (const auto& step : a.mitigated.trace) {
        trace.push_back({{"step", step.label}, {"delta", step.delta}, {"running_grc", step.running}});
    }
    json j = {
        {"spec", to_json(a.spec)},
        {"impact_speed_mps", a.intrinsic.impact_speed_mps},
        {"impact_energy_j", a.intrinsic.impact_energy_j},
        {"intrinsic_grc", a.intrinsic.grc},
        {"intrinsic_row",
         {{"max_span_m", bound_to_json(a.intrinsic.row.max_span_m)},
          {"max_energy_j", bound_to_json(a.intrinsic.row.max_energy_j)},
          {"scenario", to_string(a.intrinsic.row.scenario)},
          {"source", a.intrinsic.row.source}}},
        {"mitigation_trace", trace},
        {"final_grc", a.mitigated.final_grc},
        {"arc", to_string(a.arc)},
        {"sail", a.sail},
    };
    if (a.mitigated.el) {
        j["el_levels"] = {{"integrity", to_string(a.mitigated.el->integrity)},
                          {"assurance", to_string(a.mitigated.el->assurance)},
                          {"robustness", to_string(a.mitigated.el->robustness)}};
    }
    return j;
}

} // namespace elguard::sora
