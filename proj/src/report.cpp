#include "acx/report.hpp"

#include <iomanip>
#include <set>
#include <sstream>

namespace acx {

using nlohmann::json;

const char* const engine_version = "acx 1.0.0";

namespace {

std::string bd_key(Bidegree bd)
{
    return std::to_string(bd.p) + "," + std::to_string(bd.q);
}

json numbers_json(const std::map<Bidegree, size_t>& m, const std::optional<Bidegree>& only)
{
    json out = json::object();
    for (const auto& [bd, v] : m)
        if (!only || *only == bd)
            out[bd_key(bd)] = v;
    return out;
}

json diagnostic(const std::string& severity, const std::string& kind, const std::string& message, int truncation)
{
    json d = {{"severity", severity}, {"kind", kind}, {"message", message}};
    if (truncation != -2)
        d["truncation"] = truncation;
    return d;
}

AuditReport validation_report(const ManifoldSpec& spec, const GradedComplex& gc)
{
    AuditReport r{"validation", model_scope(gc), {}};
    for (const auto& item : validate(spec.algebra, spec.J).items)
        r.items.push_back({item.check, "manifest invariant " + item.check, item.pass ? Status::Pass : Status::Fail,
                           item.detail, ""});
    for (const auto& check : identity_suite(gc))
        r.items.push_back({"d-relation: " + check.name, check.name, check.pass ? Status::Pass : Status::Fail,
                           check.witness, ""});
    return r;
}

} // namespace

json audit_json(const AuditReport& r)
{
    json items = json::array();
    for (const auto& it : r.items)
        items.push_back({{"id", it.id},
                         {"statement", it.statement},
                         {"status", status_name(it.status)},
                         {"witness", it.witness},
                         {"note", it.note}});
    return {{"name", r.name}, {"scope", r.scope}, {"items", items}};
}

json certificate_json(const TamingCertificate& c)
{
    json samples = json::array();
    for (const auto& s : c.nondegenerate.samples)
        samples.push_back({{"point", s.point}, {"top", s.top.str()}});
    return {{"psi", form_text(c.psi)},
            {"u", form_text(c.u)},
            {"omega_prime", form_text(c.omega_prime)},
            {"hypothesis_h_tilde_10_equals_01", c.hypothesis},
            {"residual_zero", c.residual_zero},
            {"closed", c.closed},
            {"real", c.real},
            {"well_defined", c.well_defined},
            {"nondegenerate",
             {{"constant_coefficients", c.nondegenerate.constant_coefficients},
              {"nonzero_everywhere", c.nondegenerate.nonzero_everywhere},
              {"psi_positive", c.nondegenerate.psi_positive},
              {"samples", samples}}}};
}

json level_json(const DiamondLevel& lv, const std::optional<Bidegree>& only)
{
    json special = {{"h11_dR", lv.special.h11_dR}, {"h11_BC", lv.special.h11_BC}, {"h11_ddc", nullptr}};
    if (lv.special.h11_ddc)
        special["h11_ddc"] = *lv.special.h11_ddc;
    return {{"truncation", lv.truncation},
            {"h", numbers_json(lv.h, only)},
            {"h_tilde", numbers_json(lv.h_tilde, only)},
            {"ell", numbers_json(lv.ell, only)},
            {"b", lv.b},
            {"hat_h01", lv.hat_h01},
            {"hat_h1", lv.hat_h1},
            {"hat_h1_diagonal", lv.hat_h1_diagonal},
            {"special", special}};
}

json failure_report(const std::string& kind, const std::string& field, const std::string& message)
{
    json d = diagnostic("fatal", kind, message, -2);
    if (!field.empty())
        d["field"] = field;
    return {{"version", engine_version},
            {"manifest", nullptr},
            {"diamonds", {{"levels", json::array()}, {"unbounded", json::array()}}},
            {"audits", json::array()},
            {"certificates", json::array()},
            {"diagnostics", json::array({d})}};
}

RunResult run(const std::string& command, const ManifoldSpec& spec, const RunOptions& options)
{
    static const std::set<std::string> commands{"validate", "diamond", "verify", "taming", "report"};
    if (!commands.count(command))
        throw std::invalid_argument("unknown command " + command);
    bool all = command == "report";

    RunResult res;
    json& rep = res.report;
    rep["version"] = engine_version;
    rep["manifest"] = manifest_json(spec);
    rep["diamonds"] = {{"levels", json::array()}, {"unbounded", json::array()}};
    rep["audits"] = json::array();
    rep["certificates"] = json::array();
    rep["diagnostics"] = json::array();

    ComplexFrame frame = build_frame(spec.algebra, spec.J);
    std::vector<int> truncations = options.truncations;
    if (truncations.empty())
        truncations = {spec.coefficients.truncation};
    std::vector<int> levels = spec.coefficients.invariant() ? std::vector<int>{-1} : truncations;
    auto model_at = [&](int N) {
        CoefficientModel m = spec.coefficients;
        if (N >= 0)
            m.truncation = N;
        return m;
    };

    if (command == "diamond" || all) {
        HodgeDiamond d = diamond(frame, spec.coefficients, truncations, spec.metric);
        for (const auto& lv : d.levels)
            rep["diamonds"]["levels"].push_back(level_json(lv, options.bidegree));
        for (const auto& w : d.unbounded)
            rep["diamonds"]["unbounded"].push_back({{"entry", w.entry}, {"values", w.values}});
    }

    for (int N : levels) {
        GradedComplex gc(frame, model_at(N));
        MetricTools mt(gc, spec.metric);
        json reports = json::array();

        if (command == "validate" || all) {
            AuditReport v = validation_report(spec, gc);
            if (v.any_fail()) {
                res.fatal = true;
                rep["diagnostics"].push_back(diagnostic("fatal", "broken complex", "validation or d-relation failure", N));
            }
            reports.push_back(audit_json(v));
        }

        if (command == "verify" || all) {
            auto guarded = [&](const std::string& name, const std::function<AuditReport()>& fn) {
                try {
                    reports.push_back(audit_json(fn()));
                } catch (const std::exception& e) {
                    rep["diagnostics"].push_back(diagnostic("info", name, e.what(), N));
                }
            };
            guarded("identities", [&] { return audit_identities(gc, &mt); });
            guarded("dualities", [&] { return audit_dualities(mt); });
            guarded("cohomology claims", [&] { return audit_cohomology_claims(gc); });
            if (gc.n() == 2) {
                guarded("four-manifold claims", [&] { return audit_4mfld_lemmas(gc, &mt); });
                guarded("ddbar lemma", [&] { return audit_ddbar_lemma(gc); });
                guarded("correction map", [&] { return audit_descent(gc); });
            }
        }
        if (!reports.empty())
            rep["audits"].push_back({{"truncation", N}, {"reports", reports}});

        if (command == "taming" || all) {
            json entry = {{"truncation", N}, {"psi_selector", options.psi}};
            try {
                Form psi = options.psi == "fundamental" ? mt.omega_form() : parse_form(options.psi, gc.n());
                entry["certificate"] = certificate_json(solve_taming(gc, psi));
            } catch (const ParseError& e) {
                res.fatal = true;
                rep["diagnostics"].push_back(diagnostic("fatal", "ParseError", e.what(), N));
                entry["error"] = {{"kind", "ParseError"}, {"message", e.what()}};
            } catch (const NotDdcClosed& e) {
                entry["error"] = {{"kind", "NotDdcClosed"}, {"message", e.what()}};
            } catch (const NoSolution& e) {
                entry["error"] = {{"kind", "NoSolution"}, {"message", e.what()}, {"obstruction", e.obstruction}};
            } catch (const std::exception& e) {
                entry["error"] = {{"kind", "error"}, {"message", e.what()}};
            }
            rep["certificates"].push_back(entry);
        }
    }
    return res;
}

namespace {

std::string level_name(const json& lv)
{
    int N = lv["truncation"].get<int>();
    return N < 0 ? "invariant forms" : "truncation " + std::to_string(N);
}

void grid(std::ostream& os, const std::string& title, const json& m, size_t n)
{
    if (m.empty())
        return;
    os << "  " << title << "\n";
    for (int q = int(n); q >= 0; --q) {
        os << "    q=" << q << " ";
        for (int p = 0; p <= int(n); ++p) {
            std::string key = std::to_string(p) + "," + std::to_string(q);
            os << std::setw(6) << (m.contains(key) ? std::to_string(m[key].get<size_t>()) : ".");
        }
        os << "\n";
    }
    os << "         ";
    for (int p = 0; p <= int(n); ++p)
        os << std::setw(6) << ("p=" + std::to_string(p));
    os << "\n";
}

void entries(std::ostream& os, const std::string& title, const json& m)
{
    for (const auto& [key, v] : m.items())
        os << "  " << title << "[" << key << "] = " << v.get<size_t>() << "\n";
}

} // namespace

std::string render_table(const json& rep)
{
    std::ostringstream os;
    os << rep["version"].get<std::string>();
    if (rep["manifest"].is_object())
        os << "  manifest " << rep["manifest"]["name"].get<std::string>();
    os << "\n";
    size_t n = rep["manifest"].is_object() ? rep["manifest"]["real_dim"].get<size_t>() / 2 : 0;

    for (const auto& d : rep["diagnostics"]) {
        os << d["severity"].get<std::string>() << " " << d["kind"].get<std::string>() << ": "
           << d["message"].get<std::string>();
        if (d.contains("field"))
            os << " [" << d["field"].get<std::string>() << "]";
        if (d.contains("truncation"))
            os << " (truncation " << d["truncation"].get<int>() << ")";
        os << "\n";
    }

    for (const auto& lv : rep["diamonds"]["levels"]) {
        os << "\ndiamond, " << level_name(lv) << "\n";
        bool full = lv["h_tilde"].size() == (n + 1) * (n + 1);
        if (full) {
            grid(os, "refined Dolbeault h_tilde^{p,q}", lv["h_tilde"], n);
            grid(os, "Dolbeault h^{p,q}", lv["h"], n);
            grid(os, "harmonic ell^{p,q}", lv["ell"], n);
        } else {
            entries(os, "h_tilde", lv["h_tilde"]);
            entries(os, "h", lv["h"]);
            entries(os, "ell", lv["ell"]);
        }
        os << "  b =";
        for (const auto& b : lv["b"])
            os << " " << b.get<size_t>();
        os << "\n  hat h^{0,1} = " << lv["hat_h01"].get<size_t>() << ", hat h^1 = " << lv["hat_h1"].get<size_t>()
           << ", diagonal hat h^1 = " << lv["hat_h1_diagonal"].get<size_t>() << "\n";
        const json& sp = lv["special"];
        os << "  h^{1,1}_dR = " << sp["h11_dR"].get<size_t>() << ", h^{1,1}_BC = " << sp["h11_BC"].get<size_t>()
           << ", h^{1,1}_ddc = " << (sp["h11_ddc"].is_null() ? "n/a" : std::to_string(sp["h11_ddc"].get<size_t>()))
           << "\n";
    }
    if (!rep["diamonds"]["unbounded"].empty()) {
        os << "\nunbounded witnesses (strict growth across truncations)\n";
        for (const auto& w : rep["diamonds"]["unbounded"]) {
            os << "  " << std::left << std::setw(16) << w["entry"].get<std::string>() << std::right;
            for (const auto& v : w["values"])
                os << " " << v.get<size_t>();
            os << "\n";
        }
    }

    for (const auto& lv : rep["audits"]) {
        for (const auto& r : lv["reports"]) {
            os << "\n" << r["name"].get<std::string>() << " (" << r["scope"].get<std::string>() << ")\n";
            for (const auto& it : r["items"]) {
                os << "  " << std::left << std::setw(15) << it["status"].get<std::string>() << std::setw(40)
                   << it["id"].get<std::string>() << std::right << " " << it["witness"].get<std::string>();
                if (!it["note"].get<std::string>().empty())
                    os << " [" << it["note"].get<std::string>() << "]";
                os << "\n";
            }
        }
    }

    for (const auto& c : rep["certificates"]) {
        os << "\ntaming, " << level_name(c) << ", psi = " << c["psi_selector"].get<std::string>() << "\n";
        if (c.contains("error")) {
            os << "  " << c["error"]["kind"].get<std::string>() << ": " << c["error"]["message"].get<std::string>() << "\n";
            if (c["error"].contains("obstruction"))
                os << "  obstruction: " << c["error"]["obstruction"].get<std::string>() << "\n";
            continue;
        }
        const json& cert = c["certificate"];
        os << "  psi         = " << cert["psi"].get<std::string>() << "\n";
        os << "  u           = " << cert["u"].get<std::string>() << "\n";
        os << "  omega'      = " << cert["omega_prime"].get<std::string>() << "\n";
        for (const char* flag : {"hypothesis_h_tilde_10_equals_01", "residual_zero", "closed", "real", "well_defined"})
            os << "  " << std::left << std::setw(32) << flag << std::right << (cert[flag].get<bool>() ? "yes" : "no") << "\n";
        const json& nd = cert["nondegenerate"];
        if (!nd["samples"].empty()) {
            os << "  omega' wedge omega' top coefficient:";
            size_t shown = 0;
            for (const auto& s : nd["samples"]) {
                if (shown++ == 4) {
                    os << " ... (" << nd["samples"].size() << " samples)";
                    break;
                }
                os << " " << s["top"].get<std::string>();
            }
            os << "\n  nonzero at every sample: " << (nd["nonzero_everywhere"].get<bool>() ? "yes" : "no")
               << ", psi positive: " << (nd["psi_positive"].get<bool>() ? "yes" : "no") << "\n";
        }
    }
    if (rep.contains("timing"))
        os << "\ntiming: " << rep["timing"]["elapsed_ms"].get<long>() << " ms\n";
    return os.str();
}

} // namespace acx
