#pragma once

#include "elguard/sora.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>

namespace elguard::sora {

// JSON schema (see config/sora_tables.json for a complete example):
//   spec:   {"name", "span_m", "mtow_kg", "flight_height_m", "scenario", "arc"}
//   tables: {"gravity", "m3_absent_penalty",
//            "grc_rows":   [{"max_span_m"|null, "max_energy_j"|null, "scenario", "grc", "source"}],
//            "sail_table": [{"grc", "arc", "sail", "source"}],
//            "mitigation_deltas": [{"kind", "robustness", "delta", "source"}]}
//   ledger: {"mitigations": [{"kind", "integrity", "assurance"}], "el_checklist": {...}?}

OperationSpec spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const OperationSpec& spec);

RiskTables tables_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RiskTables& tables);

struct LedgerFile {
    MitigationLedger mitigations;
    std::optional<ElChecklist> el_checklist;
};

LedgerFile ledger_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LedgerFile& ledger);

ElChecklist checklist_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ElChecklist& checklist);

nlohmann::json to_json(const RiskAssessment& assessment);

} // namespace elguard::sora

namespace elguard {

/// Reads and parses a JSON file; throws Error(IoError / ConfigError).
nlohmann::json load_json(const std::filesystem::path& path);

} // namespace elguard
