#pragma once

#include "acx/auditor.hpp"
#include "acx/manifest.hpp"

namespace acx {

extern const char* const engine_version;

struct RunOptions {
    std::vector<int> truncations;     // empty: the manifest's own truncation
    std::optional<Bidegree> bidegree; // restricts diamond entries to one bidegree
    std::string psi = "fundamental";  // "fundamental" for ω, otherwise a form in form_text syntax
};

struct RunResult {
    nlohmann::json report; // keys: manifest, diamonds, audits, certificates, diagnostics, version
    bool fatal = false;
};

// Commands: validate, diamond, verify, taming, report. Throws std::invalid_argument for other names.
RunResult run(const std::string& command, const ManifoldSpec& spec, const RunOptions& options);

// Report for a manifest that failed to load.
nlohmann::json failure_report(const std::string& kind, const std::string& field, const std::string& message);

std::string render_table(const nlohmann::json& report);

nlohmann::json audit_json(const AuditReport& r);
nlohmann::json certificate_json(const TamingCertificate& c);
nlohmann::json level_json(const DiamondLevel& lv, const std::optional<Bidegree>& only);

} // namespace acx
