#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "acx/auditor.hpp"
#include "fixtures.hpp"

using namespace acx;
using namespace fixtures;

namespace {

Scalar q(long a, long b = 1)
{
    Rational r(a, b);
    r.canonicalize();
    return Scalar(r);
}

GradedComplex nil6()
{
    return GradedComplex(build_frame(nil6_algebra(), standard_j(3)), {});
}

HermitianMetric skew_metric()
{
    return {{{Scalar(2), Scalar(1, 1)}, {Scalar(1, -1), Scalar(3)}}};
}

const AuditItem& find(const AuditReport& r, const std::string& id)
{
    for (const auto& it : r.items)
        if (it.id == id)
            return it;
    FAIL("missing audit item " << id);
    return r.items.front();
}

void require_no_fail(const AuditReport& r)
{
    for (const auto& it : r.items) {
        INFO(r.name << ": " << it.id << " " << it.witness << " " << it.note);
        CHECK(it.status != Status::Fail);
    }
}

size_t count(const AuditReport& r, Status s)
{
    size_t c = 0;
    for (const auto& it : r.items)
        c += it.status == s;
    return c;
}

Vec coords_at(const GradedComplex& gc, const Form& f, size_t w)
{
    Form part;
    part.n = f.n;
    for (const auto& [e, v] : f.terms)
        if (e.weight == gc.weights()[w])
            part.add(e, v);
    return gc.to_coords(part, w);
}

// Operator applied weight by weight, concatenated.
Vec apply_all(const GradedComplex& gc, Op op, const Form& f)
{
    Vec out;
    for (size_t w = 0; w < gc.weights().size(); ++w) {
        Vec v = gc.op(op, w).apply(coords_at(gc, f, w));
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

Vec global_d(const GradedComplex& gc, const Form& f)
{
    return apply_all(gc, Op::D, f);
}

Form form_of(const GradedComplex& gc, const Vec& v)
{
    Form f;
    f.n = gc.n();
    size_t N = gc.algebra_dim();
    for (size_t w = 0; w < gc.weights().size(); ++w) {
        Form part = gc.to_form(Vec(v.begin() + w * N, v.begin() + (w + 1) * N), w);
        f = f + part;
    }
    return f;
}

// i·(θ¹∧θ̄² + θ²∧θ̄¹), a real (1,1)-form
Form mixed_11(const Scalar& eps)
{
    return monomial(2, t1 | tb2, Scalar(0, 1) * eps) + monomial(2, t2 | tb1, Scalar(0, 1) * eps);
}

} // namespace

TEST_CASE("identity audit on almost-Kahler models passes every item")
{
    for (int N : {-1, 1}) {
        GradedComplex gc = kt4(N);
        MetricTools mt(gc, HermitianMetric::identity(2));
        REQUIRE(mt.kahler_predicates().almost_kahler);
        AuditReport r = audit_identities(gc, &mt);
        INFO("truncation " << N);
        CHECK(count(r, Status::Fail) == 0);
        CHECK(count(r, Status::NotApplicable) == 0);
        CHECK(find(r, "kahler-Lambda-delbar").status == Status::Pass);
        CHECK(find(r, "kahler-L-mubar*").status == Status::Pass);
        CHECK(find(r, "ddbar-squared-on-functions").status == Status::Pass);
    }
    GradedComplex torus = torus4();
    MetricTools mt(torus, HermitianMetric::identity(2));
    CHECK(count(audit_identities(torus, &mt), Status::Pass) == audit_identities(torus, &mt).items.size());
}

TEST_CASE("Kahler identities are gated on a closed omega")
{
    GradedComplex gc = kt4();
    MetricTools mt(gc, skew_metric());
    REQUIRE_FALSE(mt.kahler_predicates().almost_kahler);
    AuditReport r = audit_identities(gc, &mt);
    CHECK(count(r, Status::NotApplicable) == 16);
    CHECK(count(r, Status::Fail) == 0);
    CHECK(find(r, "kahler-L-del").note == "omega is not closed");
    CHECK(find(audit_identities(gc, nullptr), "kahler-L-del").note == "no metric supplied");
}

TEST_CASE("a wrong sign in a Kahler identity would be caught")
{
    // [Λ, ∂̄] is nonzero on KT4, so the identity item is not vacuous
    GradedComplex gc = kt4(1);
    MetricTools mt(gc, HermitianMetric::identity(2));
    bool nonzero = false;
    for (size_t w = 0; w < gc.weights().size(); ++w) {
        ExactMatrix c = mt.lambda() * gc.op(Op::Delbar, w) - gc.op(Op::Delbar, w) * mt.lambda();
        nonzero = nonzero || !c.is_zero();
        CHECK(c == mt.adjoint(Op::Del, w).scaled(Scalar(0, -1)));
        CHECK_FALSE(c == mt.adjoint(Op::Del, w).scaled(Scalar(0, 1)));
    }
    CHECK(nonzero);
}

TEST_CASE("ddbar formulas")
{
    for (const auto& gc : {kt4(), kt4(1), torus4()}) {
        AuditReport r = audit_ddbar_formulas(gc);
        CHECK(find(r, "ddbar-of-first-order").status == Status::Pass);
        CHECK(find(r, "ddbar-squared-on-functions").status == Status::Pass);
    }
    CHECK(count(audit_ddbar_formulas(nil6()), Status::NotApplicable) == 2);
}

TEST_CASE("duality audit")
{
    for (int N : {-1, 1}) {
        GradedComplex gc = kt4(N);
        MetricTools mt(gc, HermitianMetric::identity(2));
        AuditReport r = audit_dualities(mt);
        INFO("truncation " << N);
        CHECK(count(r, Status::Pass) == 5);
    }
    GradedComplex gc = kt4();
    MetricTools mt(gc, HermitianMetric::identity(2));
    CHECK(ell(mt, {1, 0}) == ell(mt, {0, 1}));
    CHECK(find(audit_dualities(mt), "star-preserves-harmonic").witness != "0 harmonic basis vectors checked");

    MetricTools skew(gc, skew_metric());
    CHECK(count(audit_dualities(skew), Status::NotApplicable) == 5);
}

TEST_CASE("dimension-free cohomology claims")
{
    for (const auto& gc : {kt4(), kt4(1), torus4(), nil6()})
        require_no_fail(audit_cohomology_claims(gc));

    // nil6 has Nijenhuis rank 3 = n, so both refined spaces vanish
    AuditReport r = audit_cohomology_claims(nil6());
    const AuditItem& mr = find(r, "maximal-nijenhuis-kills-refined");
    CHECK(mr.status == Status::Pass);
    CHECK(mr.witness == "nijenhuis_rank = 3, h_tilde10 = 0, h_tilde01 = 0");
    CHECK(find(audit_cohomology_claims(kt4()), "maximal-nijenhuis-kills-refined").status == Status::NotApplicable);
    CHECK(find(r, "hat-splitting").status == Status::Pass);
}

TEST_CASE("four-manifold claims")
{
    GradedComplex gc = kt4();
    MetricTools mt(gc, HermitianMetric::identity(2));
    AuditReport r = audit_4mfld_lemmas(gc, &mt);
    require_no_fail(r);
    CHECK(find(r, "ker-delbar-equals-ker-d-on-10").witness == "equal subspaces, total dimension 1");
    CHECK(find(r, "betti-bounds").witness == "h_tilde10 = 1, h10 = 1, b1 = 3, hat_h01 = 2, h01 = 2");
    CHECK(find(r, "almost-kahler-harmonic-10-01").status == Status::Pass);

    GradedComplex torus = torus4();
    AuditReport t = audit_4mfld_lemmas(torus, nullptr);
    CHECK(find(t, "betti-bounds").witness == "h_tilde10 = 2, h10 = 2, b1 = 4, hat_h01 = 2, h01 = 2");
    CHECK(find(t, "betti-bounds").status == Status::Pass);
    CHECK(find(t, "harmonic-20-02").status == Status::NotApplicable);

    GradedComplex f = kt4(1);
    MetricTools mf(f, HermitianMetric::identity(2));
    require_no_fail(audit_4mfld_lemmas(f, &mf));

    CHECK_THROWS_AS(audit_4mfld_lemmas(nil6(), nullptr), Not4Manifold);
}

TEST_CASE("ddbar lemma audit")
{
    AuditReport inv = audit_ddbar_lemma(kt4());
    REQUIRE(inv.items.size() == 1);
    CHECK(inv.items[0].status == Status::Pass);
    CHECK(inv.items[0].note == "left side holds vacuously");

    AuditReport f = audit_ddbar_lemma(kt4(1));
    CHECK(f.items[0].status == Status::Pass);
    CHECK(f.items[0].note.empty());
    CHECK(f.items[0].witness.find(" 0 not del-delbar-exact") != std::string::npos);

    CHECK(audit_ddbar_lemma(torus4()).items[0].status == Status::Pass);
    CHECK_THROWS_AS(audit_ddbar_lemma(nil6()), Not4Manifold);
}

TEST_CASE("nondegeneracy check")
{
    GradedComplex gc = kt4();
    MetricTools mt(gc, HermitianMetric::identity(2));
    // ω∧ω = 2 (i/2)² θ¹θ̄¹θ²θ̄² = (1/2) θ¹θ²θ̄¹θ̄²
    NondegeneracyEvidence ev = check_nondegenerate(gc, mt.omega_form());
    CHECK(ev.constant_coefficients);
    REQUIRE(ev.samples.size() == 1);
    CHECK(ev.samples[0].top == q(1, 2));

    Form zero;
    zero.n = 2;
    CHECK_THROWS_AS(check_nondegenerate(gc, zero), DegenerateAtSample);
    CHECK_THROWS_AS(check_nondegenerate(nil6(), zero), Not4Manifold);

    // θ¹θ²e_w + conj vanishes where e_w + e_{-w} does
    GradedComplex f = kt4(1);
    Form wave = monomial(2, t1 | tb1, Scalar(0, 1), {1, 0}) + monomial(2, t1 | tb1, Scalar(0, 1), {-1, 0});
    Form omega = wave + monomial(2, t2 | tb2, Scalar(0, 1));
    try {
        check_nondegenerate(f, omega);
        FAIL("expected a degenerate sample");
    } catch (const DegenerateAtSample& e) {
        CHECK(e.point == std::vector<int>{1, 0});
    }
}

TEST_CASE("taming with psi = omega needs no correction")
{
    GradedComplex gc = kt4();
    MetricTools mt(gc, HermitianMetric::identity(2));
    TamingCertificate c = solve_taming(gc, mt.omega_form());
    CHECK(c.u.is_zero());
    CHECK(c.omega_prime == mt.omega_form());
    CHECK(c.closed);
    CHECK(c.real);
    CHECK(c.residual_zero);
    CHECK(c.well_defined);
    CHECK(c.hypothesis);
    CHECK(c.nondegenerate.psi_positive);
    CHECK(c.nondegenerate.nonzero_everywhere);
    CHECK(c.nondegenerate.samples.at(0).top == q(1, 2));
}

TEST_CASE("taming corrects a non-closed perturbation")
{
    GradedComplex gc = kt4();
    MetricTools mt(gc, HermitianMetric::identity(2));
    Form psi = mt.omega_form() + mixed_11(q(1, 10));
    REQUIRE_FALSE(is_zero(global_d(gc, psi)));
    TamingCertificate c = solve_taming(gc, psi);
    CHECK_FALSE(c.u.is_zero());
    CHECK(c.residual_zero);
    CHECK(c.closed);
    CHECK(is_zero(global_d(gc, c.omega_prime)));
    CHECK(c.real);
    CHECK(c.well_defined);
    CHECK(c.nondegenerate.psi_positive);
    CHECK(c.nondegenerate.nonzero_everywhere);
    // the (1,1)-part of ω′ is ψ
    Form part;
    part.n = 2;
    for (const auto& [e, v] : c.omega_prime.terms)
        if (e.bidegree(2) == Bidegree{1, 1})
            part.add(e, v);
    CHECK(part == psi);
}

TEST_CASE("taming on a Fourier model")
{
    GradedComplex gc = kt4(1);
    MetricTools mt(gc, HermitianMetric::identity(2));
    size_t w = gc.weight_index({1, 0});
    Quotient ddc = h11_ddc_at(gc, w);
    std::optional<Form> bump;
    for (const Vec& v : ddc.num.basis()) {
        Vec full(gc.algebra_dim(), Scalar(0));
        for (size_t k = 0; k < v.size(); ++k)
            full[gc.block({1, 1})[k]] = v[k];
        if (!is_zero(gc.op(Op::D, w).apply(full))) {
            Form f = gc.to_form(full, w);
            bump = scale(f + conjugate(f), q(1, 20));
            break;
        }
    }
    REQUIRE(bump);
    Form psi = mt.omega_form() + *bump;
    TamingCertificate c = solve_taming(gc, psi);
    CHECK(c.residual_zero);
    CHECK(c.closed);
    CHECK(c.real);
    CHECK(c.well_defined);
    CHECK_FALSE(c.nondegenerate.constant_coefficients);
    CHECK(c.nondegenerate.samples.size() == 16);
    CHECK(c.nondegenerate.nonzero_everywhere);
    CHECK_FALSE(c.nondegenerate.psi_positive);
}

TEST_CASE("taming preconditions")
{
    GradedComplex gc = kt4();
    CHECK_THROWS_AS(solve_taming(gc, monomial(2, t1 | t2)), NotDdcClosed);
    CHECK_THROWS_AS(solve_taming(gc, monomial(2, t1 | tb2)), NotDdcClosed);

    GradedComplex f = kt4(1);
    Form wave = monomial(2, t2 | tb2, Scalar(0, 1), {1, 0}) + monomial(2, t2 | tb2, Scalar(0, 1), {-1, 0});
    REQUIRE_FALSE(is_zero(apply_all(f, Op::Del, form_of(f, apply_all(f, Op::Delbar, wave)))));
    CHECK_THROWS_AS(solve_taming(f, wave), NotDdcClosed);
}

TEST_CASE("the correction of del u + delbar conj(u) is d(u + conj(u))")
{
    for (int N : {-1, 1}) {
        GradedComplex gc = kt4(N);
        Form u = monomial(2, tb1, Scalar(1, 2)) + monomial(2, tb2, q(1, 3));
        if (N > 0)
            u = u + monomial(2, tb2, Scalar(0, 1), {1, 1});
        Form real = u + conjugate(u);
        Form psi = form_of(gc, apply_all(gc, Op::Del, u)) + form_of(gc, apply_all(gc, Op::Delbar, conjugate(u)));
        TamingCertificate c = solve_taming(gc, psi);
        INFO("truncation " << N);
        CHECK(c.omega_prime == form_of(gc, global_d(gc, real)));
        CHECK(c.well_defined);
    }
}

TEST_CASE("an unsolvable correction equation reports its obstruction")
{
    // [e1, e2] = e3 with J pairing (e1, e2): h_tilde^{1,0} = 1 < h_tilde^{0,1} = 2
    GradedComplex gc(build_frame({4, {{0, 1, 2, Rational(1)}}}, standard_j(2)), {});
    REQUIRE(refined_dolbeault(gc, {1, 0}) == 1);
    REQUIRE(refined_dolbeault(gc, {0, 1}) == 2);
    try {
        solve_taming(gc, monomial(2, t2 | tb2, Scalar(0, 2)));
        FAIL("expected NoSolution");
    } catch (const NoSolution& e) {
        CHECK(e.obstruction.find("functional (1)*t1*tb1*tb2") == 0);
    }
    AuditReport r = audit_descent(gc);
    CHECK(find(r, "correction-solvable-iff-refined-equal").status == Status::Pass);
    CHECK(find(r, "correction-injective").status == Status::NotApplicable);

    // filiform algebra: equal refined numbers but no invariant solution for θ²θ̄²
    GradedComplex fil(build_frame({4, {{0, 1, 2, Rational(1)}, {0, 2, 3, Rational(1)}}}, standard_j(2)), {});
    REQUIRE(refined_dolbeault(fil, {1, 0}) == refined_dolbeault(fil, {0, 1}));
    CHECK_THROWS_AS(solve_taming(fil, monomial(2, t2 | tb2, Scalar(0, 2))), NoSolution);
    AuditReport fr = audit_descent(fil);
    const AuditItem& item = find(fr, "correction-solvable-iff-refined-equal");
    CHECK(item.status == Status::Fail);
    CHECK(item.note.find("subcomplex artifact") == 0);
}

TEST_CASE("descent of the correction map")
{
    for (int N : {-1, 1}) {
        AuditReport r = audit_descent(kt4(N));
        INFO("truncation " << N);
        CHECK(find(r, "correction-solvable-iff-refined-equal").status == Status::Pass);
        CHECK(find(r, "correction-descends").status == Status::Pass);
        CHECK(find(r, "correction-injective").status == Status::Pass);
    }
    AuditReport t = audit_descent(torus4());
    CHECK(find(t, "correction-injective").witness == "h11_ddc = 4, rank_of_induced_map = 4");
    CHECK_THROWS_AS(audit_descent(nil6()), Not4Manifold);
}

TEST_CASE("form text")
{
    CHECK(form_text(monomial(2, t1 | tb2, q(1, 2))) == "(1/2)*t1*tb2");
    CHECK(form_text(monomial(2, 0, Scalar(0, -1), {1, -1})) == "(-i)*1*e[1,-1]");
}
