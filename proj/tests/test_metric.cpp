#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "acx/metric.hpp"
#include "fixtures.hpp"

#include <random>

using namespace acx;
using namespace fixtures;

namespace {

Scalar q(long a, long b = 1)
{
    Rational r(a, b);
    r.canonicalize();
    return Scalar(r);
}

HermitianMetric diag(long a, long b)
{
    HermitianMetric h = HermitianMetric::identity(2);
    h.g[0][0] = q(a);
    h.g[1][1] = q(b);
    return h;
}

HermitianMetric skew_metric()
{
    HermitianMetric h;
    h.g = {{q(2), Scalar::parse("1+i")}, {Scalar::parse("1-i"), q(3)}};
    return h;
}

Vec random_vec(size_t n, std::mt19937& rng)
{
    std::uniform_int_distribution<int> d(-3, 3);
    Vec v(n);
    for (auto& x : v)
        x = Scalar(Rational(d(rng)), Rational(d(rng)));
    return v;
}

Vec restrict_to(const GradedComplex& gc, Vec v, Bidegree bd)
{
    const auto& pos = gc.block(bd);
    Vec out(v.size(), Scalar(0));
    for (size_t p : pos)
        out[p] = v[p];
    return out;
}

} // namespace

TEST_CASE("fundamental form of diagonal metrics")
{
    GradedComplex gc = kt4();
    MetricTools id(gc, HermitianMetric::identity(2));
    Scalar half_i(0, Rational(1, 2));
    CHECK(id.omega_form() == monomial(2, t1 | tb1, half_i) + monomial(2, t2 | tb2, half_i));
    MetricTools d23(gc, diag(2, 3));
    CHECK(d23.omega_form() == monomial(2, t1 | tb1, Scalar::i()) + monomial(2, t2 | tb2, Scalar(0, Rational(3, 2))));
    CHECK(conjugate(d23.omega_form()) == d23.omega_form());
}

TEST_CASE("metrics that are not Hermitian or not positive are rejected")
{
    GradedComplex gc = kt4();
    HermitianMetric h = HermitianMetric::identity(2);
    h.g[0][1] = q(1);
    CHECK_THROWS_AS(MetricTools(gc, h), NotPositive);
    CHECK_THROWS_AS(MetricTools(gc, diag(1, -1)), NotPositive);
    CHECK_THROWS_AS(MetricTools(gc, diag(0, 1)), NotPositive);
    HermitianMetric big;
    big.g = {{q(1), q(2)}, {q(2), q(1)}};
    CHECK_THROWS_AS(MetricTools(gc, big), NotPositive);
    CHECK_NOTHROW(MetricTools(gc, skew_metric()));
}

TEST_CASE("slot pairing agrees with the real metric omega(X, JY)")
{
    for (HermitianMetric h : {HermitianMetric::identity(2), diag(2, 3), skew_metric()}) {
        ComplexFrame f = build_frame(kt4_algebra(), standard_j(2));
        GradedComplex gc(f, {});
        MetricTools mt(gc, h);
        AlmostComplexStructure J = standard_j(2);
        const ExactMatrix& F = f.coframe;
        // real Gram G_ab = ω(e_a, J e_b)
        ExactMatrix G(4, 4);
        for (size_t a = 0; a < 4; ++a)
            for (size_t b = 0; b < 4; ++b) {
                Scalar v(0);
                for (size_t k = 0; k < 16; ++k) {
                    Scalar c = mt.omega()[k];
                    if (c.is_zero())
                        continue;
                    Mask m = gc.masks()[k];
                    int s = std::countr_zero(m), t = std::countr_zero(m & (m - 1));
                    for (size_t r = 0; r < 4; ++r) {
                        Scalar jb = Scalar(J.matrix[r][b]);
                        v += c * (F.get(s, a) * F.get(t, r) - F.get(s, r) * F.get(t, a)) * jb;
                    }
                }
                CHECK(v.is_real());
                G.set(a, b, v);
            }
        CHECK(G == G.transpose());
        ExactMatrix Ginv(4, 4);
        for (size_t b = 0; b < 4; ++b) {
            Vec e(4, Scalar(0));
            e[b] = Scalar(1);
            auto col = solve(G, e);
            REQUIRE(col);
            for (size_t a = 0; a < 4; ++a)
                Ginv.set(a, b, (*col)[a]);
        }
        CHECK(F * Ginv * F.adjoint() == mt.slot_pairing());
    }
}

TEST_CASE("Hodge star on the standard metric")
{
    GradedComplex gc = kt4();
    MetricTools mt(gc, HermitianMetric::identity(2));
    Vec v = gc.to_coords(monomial(2, t1 | t2), 0);
    CHECK(gc.to_form(mt.star().apply(v), 0) == monomial(2, t1 | t2));
    Vec one = gc.to_coords(monomial(2, 0), 0);
    CHECK(mt.star().apply(one) == mt.volume());
    // dV = e1∧e2∧e3∧e4 has unit length
    CHECK(mt.inner(mt.volume(), mt.volume()) == q(1));
    CHECK(mt.inner(one, one) == q(1));
}

TEST_CASE("star squares to (-1)^k and inverts blockwise")
{
    for (HermitianMetric h : {HermitianMetric::identity(2), skew_metric()}) {
        GradedComplex gc = kt4();
        MetricTools mt(gc, h);
        ExactMatrix sq = mt.star() * mt.star();
        for (int k = 0; k <= 4; ++k)
            for (size_t p : gc.degree(k)) {
                CHECK(sq.row(p).size() == 1);
                CHECK(sq.get(p, p) == q(k % 2 ? -1 : 1));
            }
        CHECK(mt.star() * mt.star_inverse() == ExactMatrix::identity(16));
    }
}

TEST_CASE("star maps (p,q) to (n-q, n-p)")
{
    GradedComplex gc(build_frame(nil6_algebra(), standard_j(3)), {});
    MetricTools mt(gc, HermitianMetric::identity(3));
    for (int p = 0; p <= 3; ++p)
        for (int qq = 0; qq <= 3; ++qq) {
            const auto& target = gc.block({3 - qq, 3 - p});
            for (size_t c : gc.block({p, qq})) {
                Vec col = mt.star().column(c);
                CHECK_FALSE(is_zero(col));
                for (size_t r = 0; r < col.size(); ++r)
                    if (!col[r].is_zero())
                        CHECK(std::find(target.begin(), target.end(), r) != target.end());
            }
        }
}

TEST_CASE("wedge pairing is positive and matches the Gram matrix")
{
    std::mt19937 rng(7);
    GradedComplex gc = kt4(1);
    MetricTools mt(gc, skew_metric());
    for (int trial = 0; trial < 20; ++trial) {
        Vec a = random_vec(16, rng), b = random_vec(16, rng);
        CHECK(mt.inner(a, b) == mt.gram_inner(a, b));
        Scalar aa = mt.inner(a, a);
        CHECK(aa.is_real());
        if (!is_zero(a))
            CHECK(sgn(aa.re()) > 0);
    }
}

TEST_CASE("adjoints satisfy <da, b> = <a, d*b>")
{
    std::mt19937 rng(11);
    for (int N : {-1, 1}) {
        GradedComplex gc = kt4(N);
        for (HermitianMetric h : {HermitianMetric::identity(2), skew_metric()}) {
            MetricTools mt(gc, h);
            for (Op o : {Op::Mu, Op::Del, Op::Delbar, Op::Mubar, Op::D})
                for (size_t w = 0; w < gc.weights().size(); ++w)
                    for (int trial = 0; trial < 3; ++trial) {
                        Vec a = random_vec(16, rng), b = random_vec(16, rng);
                        Scalar lhs = mt.inner(gc.op(o, w).apply(a), b);
                        Scalar rhs = mt.inner(a, mt.adjoint(o, w).apply(b));
                        INFO(op_name(o) << " weight " << w);
                        CHECK(lhs == rhs);
                    }
        }
    }
    GradedComplex torus = torus4();
    MetricTools mt(torus, HermitianMetric::identity(2));
    for (Op o : {Op::Mu, Op::Del, Op::Delbar, Op::Mubar, Op::D})
        CHECK(mt.adjoint(o, 0).is_zero());
}

TEST_CASE("delbar adjoint kills the first antiholomorphic coframe form")
{
    GradedComplex gc = kt4();
    MetricTools mt(gc, HermitianMetric::identity(2));
    CHECK(is_zero(mt.adjoint(Op::Delbar, 0).apply(gc.to_coords(monomial(2, tb1), 0))));
}

TEST_CASE("Lefschetz pair")
{
    GradedComplex gc = torus4();
    MetricTools mt(gc, HermitianMetric::identity(2));
    Vec one = gc.to_coords(monomial(2, 0), 0);
    CHECK(mt.lefschetz().apply(one) == mt.omega());
    CHECK(gc.to_form(mt.lambda().apply(mt.omega()), 0) == monomial(2, 0, q(2)));
    auto pos = gc.block({1, 1});
    CHECK(kernel(mt.lambda().submatrix(gc.block({0, 0}), pos)).dim() == 3);

    for (HermitianMetric h : {HermitianMetric::identity(2), skew_metric()}) {
        GradedComplex k4 = kt4();
        MetricTools m(k4, h);
        ExactMatrix comm = m.lefschetz() * m.lambda() - m.lambda() * m.lefschetz();
        ExactMatrix expected(16, 16);
        for (int k = 0; k <= 4; ++k)
            for (size_t p : k4.degree(k))
                expected.set(p, p, q(k - 2));
        CHECK(comm == expected);
    }
}

TEST_CASE("Laplacians")
{
    GradedComplex torus = torus4();
    MetricTools mt(torus, HermitianMetric::identity(2));
    CHECK(mt.laplacian(Op::Delbar, 0).is_zero());
    CHECK(mt.laplacian(Op::D, 0).is_zero());

    GradedComplex gc = kt4();
    MetricTools m(gc, HermitianMetric::identity(2));
    ExactMatrix lap = m.laplacian(Op::Delbar, 0);
    Subspace k10 = kernel(gc.restrict(lap, {1, 0}, {1, 0}));
    CHECK(k10.dim() == 1);
    CHECK(k10.contains(Vec{q(1), q(0)}));
}

TEST_CASE("ker of a Laplacian is ker d cap ker d* and conjugation pairs the kernels")
{
    for (int N : {-1, 1}) {
        GradedComplex gc = kt4(N);
        MetricTools mt(gc, skew_metric());
        for (Op o : {Op::Mu, Op::Del, Op::Delbar, Op::Mubar, Op::D})
            for (size_t w = 0; w < gc.weights().size(); ++w) {
                ExactMatrix lap = mt.laplacian(o, w);
                Subspace both = intersect({kernel(gc.op(o, w)), kernel(mt.adjoint(o, w))});
                CHECK(kernel(lap) == both);
            }
        for (size_t w = 0; w < gc.weights().size(); ++w) {
            Subspace kb = kernel(mt.laplacian(Op::Delbar, w));
            Subspace kd = kernel(mt.laplacian(Op::Del, gc.negated(w)));
            std::vector<Vec> images;
            for (const Vec& v : kb.basis()) {
                Vec c(v.size());
                for (size_t k = 0; k < v.size(); ++k)
                    c[k] = v[k].conj();
                images.push_back(gc.conj_perm().apply(c));
            }
            CHECK(Subspace::span(16, images) == kd);
        }
    }
}

TEST_CASE("Laplacian blocks are Hermitian positive semidefinite for the wedge pairing")
{
    std::mt19937 rng(3);
    GradedComplex gc = kt4(1);
    MetricTools mt(gc, skew_metric());
    for (Op o : {Op::Delbar, Op::Mubar, Op::D})
        for (size_t w = 0; w < gc.weights().size(); w += 5) {
            ExactMatrix lap = mt.laplacian(o, w);
            for (int trial = 0; trial < 3; ++trial) {
                Vec a = random_vec(16, rng), b = random_vec(16, rng);
                CHECK(mt.inner(lap.apply(a), b) == mt.inner(a, lap.apply(b)));
                Scalar aa = mt.inner(lap.apply(a), a);
                CHECK(aa.is_real());
                CHECK(sgn(aa.re()) >= 0);
            }
        }
}

TEST_CASE("self-dual and anti-self-dual split")
{
    GradedComplex gc = kt4();
    for (HermitianMetric h : {HermitianMetric::identity(2), skew_metric()}) {
        MetricTools mt(gc, h);
        auto [plus, minus] = mt.asd_split();
        CHECK(plus.dim() == 3);
        CHECK(minus.dim() == 3);
        auto pos = gc.degree(2);
        Vec om(pos.size());
        for (size_t k = 0; k < pos.size(); ++k)
            om[k] = mt.omega()[pos[k]];
        CHECK(plus.contains(om));
        // primitive (1,1)-forms are anti-self-dual
        ExactMatrix L11 = mt.lefschetz().submatrix(gc.degree(4), pos);
        Subspace prim = kernel(L11);
        std::vector<Vec> prim11;
        for (const Vec& v : prim.basis()) {
            Vec full(16, Scalar(0));
            for (size_t k = 0; k < pos.size(); ++k)
                full[pos[k]] = v[k];
            if (restrict_to(gc, full, {1, 1}) == full)
                prim11.push_back(v);
        }
        CHECK(prim11.size() == 3);
        for (const Vec& v : prim11)
            CHECK(minus.contains(v));
    }
    GradedComplex nil(build_frame(nil6_algebra(), standard_j(3)), {});
    MetricTools m6(nil, HermitianMetric::identity(3));
    CHECK_THROWS_AS(m6.asd_split(), Not4Manifold);
}

TEST_CASE("Kahler predicates")
{
    GradedComplex gc = kt4();
    MetricTools mt(gc, HermitianMetric::identity(2));
    CHECK(mt.kahler_predicates().almost_kahler);
    CHECK(mt.kahler_predicates().ddc_closed);
    GradedComplex torus = torus4();
    MetricTools mt2(torus, skew_metric());
    CHECK(mt2.kahler_predicates().almost_kahler);
    CHECK(mt2.kahler_predicates().ddc_closed);
    GradedComplex nil(build_frame(nil6_algebra(), standard_j(3)), {});
    MetricTools m6(nil, HermitianMetric::identity(3));
    auto k6 = m6.kahler_predicates();
    if (k6.almost_kahler)
        CHECK(k6.ddc_closed);
    for (HermitianMetric h : {diag(2, 3), skew_metric()}) {
        MetricTools m(gc, h);
        auto k = m.kahler_predicates();
        if (k.almost_kahler)
            CHECK(k.ddc_closed);
    }
}
