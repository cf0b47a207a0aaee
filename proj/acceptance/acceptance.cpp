#include "acx/report.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

using namespace acx;
using nlohmann::json;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string join(const std::vector<size_t>& v)
{
    std::string out;
    for (size_t k = 0; k < v.size(); ++k)
        out += (k ? " " : "") + std::to_string(v[k]);
    return out;
}

ManifoldSpec bundled(const std::string& name)
{
    return parse_manifest(std::string(ACX_MANIFEST_DIR) + "/" + name);
}

GradedComplex model_at(const ManifoldSpec& spec, int truncation)
{
    CoefficientModel m = truncation < 0 ? CoefficientModel{} : spec.coefficients;
    if (truncation >= 0)
        m.truncation = truncation;
    return GradedComplex(build_frame(spec.algebra, spec.J), m);
}

Scalar q(long a, long b = 1)
{
    Rational r(a, b);
    r.canonicalize();
    return Scalar(r);
}

Form monomial(size_t n, Mask m, const Scalar& v, Weight w = {})
{
    Form f;
    f.n = n;
    f.add({w, m}, v);
    return f;
}

const AuditItem* find(const AuditReport& r, const std::string& id)
{
    for (const auto& it : r.items)
        if (it.id == id)
            return &it;
    return nullptr;
}

// First failing item of a report, or empty.
std::string first_fail(const AuditReport& r)
{
    for (const auto& it : r.items)
        if (it.status == Status::Fail)
            return r.name + ": " + it.id + " (" + it.witness + ")";
    return "";
}

constexpr Mask t1 = 1u << 0, t2 = 1u << 1, tb1 = 1u << 2, tb2 = 1u << 3;

// Random 4-dim nilpotent algebras in a random rational basis, with J carried along.
struct RandomManifold {
    std::string base;
    LieAlgebraSpec algebra;
    AlmostComplexStructure J;
};

std::vector<RandomManifold> random_sweep(size_t count)
{
    const std::vector<std::pair<std::string, LieAlgebraSpec>> bases{
        {"abelian", {4, {}}},
        {"h3+R", {4, {{0, 1, 2, Rational(1)}}}},
        {"kt4", {4, {{1, 2, 3, Rational(1)}}}},
        {"filiform", {4, {{0, 1, 2, Rational(1)}, {0, 2, 3, Rational(1)}}}},
    };
    std::vector<std::vector<Rational>> J0(4, std::vector<Rational>(4, 0));
    J0[1][0] = 1;
    J0[0][1] = -1;
    J0[3][2] = 1;
    J0[2][3] = -1;

    std::mt19937 rng(20261016);
    std::uniform_int_distribution<int> entry(-2, 2);
    std::vector<RandomManifold> out;
    while (out.size() < count) {
        ExactMatrix P(4, 4);
        for (size_t r = 0; r < 4; ++r)
            for (size_t c = 0; c < 4; ++c)
                P.set(r, c, Scalar(entry(rng)));
        if (rank(P) < 4)
            continue;
        std::vector<std::vector<Rational>> Pr(4, std::vector<Rational>(4)), Pinv = Pr;
        for (size_t c = 0; c < 4; ++c) {
            Vec e(4, Scalar(0));
            e[c] = Scalar(1);
            Vec col = *solve(P, e);
            for (size_t r = 0; r < 4; ++r) {
                Pinv[r][c] = col[r].re();
                Pr[r][c] = P.get(r, c).re();
            }
        }

        const auto& [name, base] = bases[out.size() % bases.size()];
        auto C = base.structure();
        RandomManifold m{name, {4, {}}, {}};
        // new basis V'_a = Σ_b P[b][a] V_b
        for (size_t a = 0; a < 4; ++a)
            for (size_t b = a + 1; b < 4; ++b)
                for (size_t f = 0; f < 4; ++f) {
                    Rational v = 0;
                    for (size_t c = 0; c < 4; ++c)
                        for (size_t d = 0; d < 4; ++d)
                            for (size_t e = 0; e < 4; ++e)
                                v += Pr[c][a] * Pr[d][b] * C[c][d][e] * Pinv[f][e];
                    v.canonicalize();
                    if (v != 0)
                        m.algebra.brackets.push_back({a, b, f, v});
                }
        m.J.matrix.assign(4, std::vector<Rational>(4, 0));
        for (size_t r = 0; r < 4; ++r)
            for (size_t c = 0; c < 4; ++c) {
                Rational v = 0;
                for (size_t a = 0; a < 4; ++a)
                    for (size_t b = 0; b < 4; ++b)
                        v += Pinv[r][a] * J0[a][b] * Pr[b][c];
                v.canonicalize();
                m.J.matrix[r][c] = v;
            }
        out.push_back(m);
    }
    return out;
}

Outcome structure_equations()
{
    ManifoldSpec kt = bundled("kt4.json");
    ComplexFrame f = build_frame(kt.algebra, kt.J);
    GeneratorDifferentials gd = exterior_d_on_generators(f);
    SplitDifferential sd = split_d(gd, 2);
    bool ok = gd.d[0].empty() && sd.del[1] == MonoForm{{t1 | t2, q(-1, 4)}} &&
              sd.delbar[1] == MonoForm{{t1 | tb2, q(-1, 4)}, {t2 | tb1, q(-1, 4)}} &&
              sd.mubar[1] == MonoForm{{tb1 | tb2, q(1, 4)}};
    return {ok, "d theta1 = 0, del theta2 = -1/4 t1^t2, delbar theta2 = -1/4 (t1^tb2 + t2^tb1), mubar theta2 = 1/4 tb1^tb2"};
}

json kt4_diamond()
{
    RunOptions opts;
    opts.truncations = {0, 1, 2, 3};
    return run("diamond", bundled("kt4.json"), opts).report["diamonds"];
}

Outcome refined_fixed_entries(const json& diamonds)
{
    Outcome o;
    const std::vector<std::pair<std::string, size_t>> fixed{{"0,0", 1}, {"1,0", 1}, {"0,1", 1}, {"2,0", 0},
                                                            {"0,2", 0}, {"1,2", 1}, {"2,2", 1}};
    for (const auto& lv : diamonds["levels"]) {
        for (const auto& [key, v] : fixed)
            if (lv["h_tilde"][key].get<size_t>() != v) {
                o.pass = false;
                o.detail = "h_tilde[" + key + "] at N = " + std::to_string(lv["truncation"].get<int>());
                return o;
            }
        if (!lv["h_tilde"].contains("2,1"))
            o.pass = false;
    }
    o.detail = "N = 0..3: 1/1/1/0/0/1/1 at (0,0) (1,0) (0,1) (2,0) (0,2) (1,2) (2,2)";
    return o;
}

Outcome growth_witnesses(const json& diamonds)
{
    std::vector<size_t> h11, h21;
    for (const auto& lv : diamonds["levels"]) {
        h11.push_back(lv["h_tilde"]["1,1"].get<size_t>());
        h21.push_back(lv["h_tilde"]["2,1"].get<size_t>());
    }
    auto increasing = [](const std::vector<size_t>& v) {
        for (size_t k = 1; k < v.size(); ++k)
            if (v[k] <= v[k - 1])
                return false;
        return v.size() == 4;
    };
    bool baseline = h11 == std::vector<size_t>{3, 11, 27, 51} && h21 == std::vector<size_t>{2, 10, 26, 50};
    return {increasing(h11) && increasing(h21) && baseline, "h_tilde11 = " + join(h11) + ", h_tilde21 = " + join(h21)};
}

Outcome first_betti()
{
    size_t kt = de_rham(model_at(bundled("kt4.json"), -1), 1);
    size_t torus = de_rham(model_at(bundled("torus4.json"), -1), 1);
    return {kt == 3 && torus == 4, "b1(kt4) = " + std::to_string(kt) + ", b1(torus4) = " + std::to_string(torus)};
}

// Every d-relation, the two ddbar formulas and, where omega is closed, every Kahler identity.
std::string identity_failure(const GradedComplex& gc, bool require_kahler)
{
    for (const auto& c : identity_suite(gc))
        if (!c.pass)
            return c.name + " " + c.witness;
    MetricTools mt(gc, HermitianMetric::identity(gc.n()));
    AuditReport ids = audit_identities(gc, &mt);
    if (std::string f = first_fail(ids); !f.empty())
        return f;
    if (std::string f = first_fail(audit_ddbar_formulas(gc)); !f.empty())
        return f;
    if (require_kahler) {
        size_t kahler = 0;
        for (const auto& it : ids.items)
            if (it.id.rfind("kahler-", 0) == 0) {
                if (it.status != Status::Pass)
                    return it.id + " not checked";
                ++kahler;
            }
        if (kahler != 16)
            return "expected 16 Kahler identities, found " + std::to_string(kahler);
    }
    return "";
}

Outcome identity_suites(const std::vector<RandomManifold>& sweep)
{
    ManifoldSpec kt = bundled("kt4.json"), torus = bundled("torus4.json");
    std::vector<std::pair<std::string, std::function<std::string()>>> cases{
        {"torus4", [&] { return identity_failure(model_at(torus, -1), true); }},
        {"kt4 invariant", [&] { return identity_failure(model_at(kt, -1), true); }},
        {"kt4 N=1", [&] { return identity_failure(model_at(kt, 1), true); }},
    };
    for (size_t k = 0; k < sweep.size(); ++k)
        cases.push_back({"random " + std::to_string(k) + " (" + sweep[k].base + ")", [&, k] {
                             ValidationReport v = validate(sweep[k].algebra, sweep[k].J);
                             if (!v.ok())
                                 return std::string("invalid random manifold");
                             return identity_failure(GradedComplex(build_frame(sweep[k].algebra, sweep[k].J), {}), false);
                         }});
    for (const auto& [name, check] : cases)
        if (std::string f = check(); !f.empty())
            return {false, name + ": " + f};
    return {true, "torus4, kt4 invariant and kt4 N=1 with 16 Kahler identities each, plus " +
                      std::to_string(sweep.size()) + " random 4-dim manifests"};
}

Outcome hat_splitting()
{
    std::ostringstream detail;
    bool ok = true;
    auto check = [&](const std::string& name, const GradedComplex& gc) {
        size_t lhs = hat_h1(gc), a = hat_h01(gc), b = refined_dolbeault(gc, {0, 1});
        ok = ok && lhs == a + b;
        detail << name << " " << lhs << " = " << a << "+" << b << "; ";
    };
    check("torus4", model_at(bundled("torus4.json"), -1));
    ManifoldSpec kt = bundled("kt4.json");
    check("kt4 inv", model_at(kt, -1));
    for (int N = 0; N <= 3; ++N)
        check("kt4 N=" + std::to_string(N), model_at(kt, N));
    std::string d = detail.str();
    return {ok, d.substr(0, d.size() - 2)};
}

Outcome ker_delbar_on_10(const std::vector<RandomManifold>& sweep)
{
    std::vector<std::pair<std::string, GradedComplex>> models;
    ManifoldSpec kt = bundled("kt4.json");
    models.emplace_back("torus4", model_at(bundled("torus4.json"), -1));
    models.emplace_back("kt4 invariant", model_at(kt, -1));
    for (int N = 0; N <= 3; ++N)
        models.emplace_back("kt4 N=" + std::to_string(N), model_at(kt, N));
    for (size_t k = 0; k < sweep.size(); ++k)
        models.emplace_back("random " + std::to_string(k), GradedComplex(build_frame(sweep[k].algebra, sweep[k].J), {}));
    for (const auto& [name, gc] : models) {
        AuditReport r = audit_4mfld_lemmas(gc, nullptr);
        const AuditItem* it = find(r, "ker-delbar-equals-ker-d-on-10");
        if (!it || it->status != Status::Pass)
            return {false, name + ": " + (it ? it->witness : "missing")};
    }
    return {true, std::to_string(models.size()) + " models, exact subspace equality"};
}

Outcome almost_kahler_dualities()
{
    ManifoldSpec kt = bundled("kt4.json");
    std::ostringstream detail;
    for (int N : {-1, 1}) {
        GradedComplex gc = model_at(kt, N);
        MetricTools mt(gc, kt.metric);
        size_t n = 2;
        for (int p = 0; p <= 2; ++p)
            for (int qq = 0; qq <= 2; ++qq) {
                size_t a = ell(mt, {p, qq}), b = ell(mt, {qq, p}), c = ell(mt, {int(n) - qq, int(n) - p});
                if (a != b || a != c)
                    return {false, "ell at " + std::to_string(p) + "," + std::to_string(qq)};
            }
        detail << (N < 0 ? "invariant" : "N=1") << ": ell10 = " << ell(mt, {1, 0}) << ", ell01 = " << ell(mt, {0, 1})
               << "; ";
        if (ell(mt, {1, 0}) != ell(mt, {0, 1}))
            return {false, detail.str()};
    }
    std::string d = detail.str();
    return {true, d + "symmetries hold at all bidegrees"};
}

Outcome taming_pipeline()
{
    ManifoldSpec kt = bundled("kt4.json");
    GradedComplex gc = model_at(kt, -1);
    MetricTools mt(gc, kt.metric);
    TamingCertificate c = solve_taming(gc, mt.omega_form());
    bool first = c.closed && c.residual_zero && c.u.is_zero() && c.nondegenerate.nonzero_everywhere &&
                 !c.nondegenerate.samples.empty();

    Form psi = mt.omega_form() + monomial(2, t1 | tb2, Scalar(0, Rational(1, 10))) +
               monomial(2, t2 | tb1, Scalar(0, Rational(1, 10)));
    TamingCertificate p = solve_taming(gc, psi);
    bool second = p.closed && p.residual_zero && p.well_defined && p.real && !p.u.is_zero();

    GradedComplex f1 = model_at(kt, 1);
    TamingCertificate w = solve_taming(f1, MetricTools(f1, kt.metric).omega_form());
    bool fourier = w.closed && w.nondegenerate.nonzero_everywhere;
    return {first && second && fourier, "psi = omega: u = 0, top = " + c.nondegenerate.samples.front().top.str() +
                                            "; perturbed: u = " + form_text(p.u) + ", closed and well-defined"};
}

Outcome ddbar_lemma_at_1()
{
    GradedComplex gc = model_at(bundled("kt4.json"), 1);
    size_t h10 = refined_dolbeault(gc, {1, 0}), h01 = refined_dolbeault(gc, {0, 1});
    AuditReport r = audit_ddbar_lemma(gc);
    const AuditItem* it = find(r, "ddbar-lemma-biconditional");
    if (!it)
        return {false, "missing audit item"};
    size_t tested = 0, bad = 0;
    std::sscanf(it->witness.c_str(), "%zu d-exact (1,1) basis forms tested, %zu not", &tested, &bad);
    bool ok = h10 == 1 && h01 == 1 && it->status == Status::Pass && tested > 0 && bad == 0;
    return {ok, it->witness};
}

std::string run_binary(const std::string& args)
{
    std::string out;
    FILE* pipe = popen((std::string(ACX_BINARY) + " " + args).c_str(), "r");
    if (!pipe)
        return out;
    std::array<char, 4096> buf;
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        out.append(buf.data(), got);
    pclose(pipe);
    return out;
}

Outcome determinism()
{
    std::string args = "report " + std::string(ACX_MANIFEST_DIR) + "/kt4.json --truncations 0,1,2 --format json";
    json a = json::parse(run_binary(args)), b = json::parse(run_binary(args));
    a.erase("timing");
    b.erase("timing");
    std::string da = a.dump(2), db = b.dump(2);
    return {da == db && !a["diamonds"]["levels"].empty(), std::to_string(da.size()) + " bytes, identical"};
}

Outcome property_suite()
{
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> entry(-3, 3), sparse(0, 9);
    for (size_t cols : {9, 70}) {
        for (int trial = 0; trial < 5; ++trial) {
            ExactMatrix m(cols / 2 + 3, cols);
            for (size_t r = 0; r < m.rows(); ++r)
                for (size_t c = 0; c < cols; ++c)
                    if (sparse(rng) < 3)
                        m.set(r, c, Scalar(entry(rng), entry(rng)));
            if (rank(m) + kernel(m).dim() != cols || rank(m) != image(m).dim())
                return {false, "rank-nullity at " + std::to_string(cols) + " columns"};
        }
    }

    GradedComplex gc = model_at(bundled("kt4.json"), 1);
    for (size_t w = 0; w < gc.weights().size(); ++w)
        for (int r = 0; r < 4; ++r) {
            Quotient dr = de_rham_at(gc, w, r);
            if (!dr.num.contains(dr.den) || dr.dim() != dr.num.dim() - dr.den.dim())
                return {false, "de Rham containment at degree " + std::to_string(r)};
            for (int p = 0; p <= r && p <= 2; ++p) {
                if (r - p > 2)
                    continue;
                Quotient rf = refined_dolbeault_at(gc, w, {p, r - p});
                if (!rf.num.contains(rf.den))
                    return {false, "refined containment"};
            }
        }

    size_t pairs = 0;
    for (Mask a = 0; a < 16; ++a)
        for (Mask b = 0; b < 16; ++b) {
            Form ab = wedge(monomial(2, a, Scalar(1)), monomial(2, b, Scalar(1)));
            if (a & b) {
                if (!ab.is_zero())
                    return {false, "wedge of overlapping monomials"};
                continue;
            }
            std::vector<int> cat;
            for (Mask m : {a, b})
                for (int k = 0; k < 4; ++k)
                    if (m & (1u << k))
                        cat.push_back(k);
            int inversions = 0;
            for (size_t i = 0; i < cat.size(); ++i)
                for (size_t j = i + 1; j < cat.size(); ++j)
                    inversions += cat[i] > cat[j];
            Form ba = wedge(monomial(2, b, Scalar(1)), monomial(2, a, Scalar(1)));
            int graded = (mask_degree(a) * mask_degree(b)) % 2 ? -1 : 1;
            if (!(ab == monomial(2, a | b, Scalar(inversions % 2 ? -1 : 1))) || !(ab == scale(ba, Scalar(graded))))
                return {false, "wedge sign"};
            ++pairs;
        }

    for (size_t w = 0; w < gc.weights().size(); ++w)
        for (Mask m : gc.masks()) {
            Rational re(entry(rng) + 5, 3);
            re.canonicalize();
            Form f = monomial(2, m, Scalar(re, Rational(entry(rng))), gc.weights()[w]);
            if (!(conjugate(conjugate(f)) == f))
                return {false, "conjugation is not an involution"};
        }

    for (Op o : {Op::Mu, Op::Del, Op::Delbar, Op::Mubar})
        for (int p = 0; p <= 2; ++p)
            for (int qq = 0; qq <= 2; ++qq) {
                Bidegree s = op_shift(o);
                if (!gc.valid({p + s.p, qq + s.q}))
                    continue;
                size_t per = 0;
                for (size_t w = 0; w < gc.weights().size(); ++w)
                    per += rank(gc.block_op(o, w, {p, qq}));
                if (rank(gc.whole_block(o, {p, qq})) != per)
                    return {false, "block decomposition at " + op_name(o)};
            }
    return {true, "rank-nullity on dense and sparse paths, containments at N=1, " + std::to_string(pairs) +
                      " wedge pairs, conjugation involution, per-weight ranks = whole-matrix ranks"};
}

} // namespace

int main()
{
    auto start = std::chrono::steady_clock::now();
    std::vector<RandomManifold> sweep = random_sweep(20);
    json diamonds = kt4_diamond();

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"KT4 structure equations", structure_equations},
        {"KT4 refined diamond fixed entries", [&] { return refined_fixed_entries(diamonds); }},
        {"KT4 unbounded growth at (1,1) and (2,1)", [&] { return growth_witnesses(diamonds); }},
        {"first Betti numbers", first_betti},
        {"identity suites", [&] { return identity_suites(sweep); }},
        {"hat h1 = hat h01 + h_tilde01", hat_splitting},
        {"ker delbar = ker d on (1,0)-forms", [&] { return ker_delbar_on_10(sweep); }},
        {"almost-Kahler harmonic dualities", almost_kahler_dualities},
        {"taming pipeline", taming_pipeline},
        {"ddbar-lemma audit at N = 1", ddbar_lemma_at_1},
        {"report determinism", determinism},
        {"property suite", property_suite},
    };

    int failed = 0;
    for (size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (k + 1 < 10 ? " " : "") << k + 1 << "  "
                  << criteria[k].first << "  [" << o.detail << "]\n";
    }
    auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed in " << std::fixed
              << std::setprecision(1) << secs << " s\n";
    return failed ? 1 : 0;
}
