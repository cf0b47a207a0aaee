#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

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

} // namespace

TEST_CASE("frame of the standard torus structure")
{
    ComplexFrame f = build_frame(torus4_algebra(), standard_j(2));
    CHECK(f.vectors.column(0) == Vec{q(1, 2), Scalar(0, Rational(-1, 2)), q(0), q(0)});
    CHECK(f.vectors.column(1) == Vec{q(0), q(0), q(1, 2), Scalar(0, Rational(-1, 2))});
    CHECK(f.vectors.column(2) == Vec{q(1, 2), Scalar(0, Rational(1, 2)), q(0), q(0)});
}

TEST_CASE("coframe of the Kodaira-Thurston structure")
{
    ComplexFrame f = build_frame(kt4_algebra(), standard_j(2));
    ExactMatrix cf = f.coframe;
    CHECK(cf.get(0, 0) == q(1));
    CHECK(cf.get(0, 1) == Scalar::i());
    CHECK(cf.get(1, 2) == q(1));
    CHECK(cf.get(1, 3) == Scalar::i());
    CHECK(cf.get(2, 1) == -Scalar::i());
    CHECK(cf * f.vectors == ExactMatrix::identity(4));
}

TEST_CASE("J must square to -1")
{
    AlmostComplexStructure id;
    id.matrix.assign(4, std::vector<Rational>(4, 0));
    for (int k = 0; k < 4; ++k)
        id.matrix[k][k] = 1;
    CHECK_THROWS_AS(build_frame(torus4_algebra(), id), DegenerateJ);
    CHECK_THROWS_AS(build_frame({3, {}}, standard_j(1)), DegenerateJ);
}

TEST_CASE("structure equations of the Kodaira-Thurston structure")
{
    ComplexFrame f = build_frame(kt4_algebra(), standard_j(2));
    GeneratorDifferentials gd = exterior_d_on_generators(f);
    CHECK(gd.d[0].empty());
    MonoForm expected{{t1 | t2, q(-1, 4)}, {t1 | tb2, q(-1, 4)}, {t2 | tb1, q(-1, 4)}, {tb1 | tb2, q(1, 4)}};
    CHECK(gd.d[1] == expected);

    SplitDifferential sd = split_d(gd, 2);
    CHECK(sd.del[1] == MonoForm{{t1 | t2, q(-1, 4)}});
    CHECK(sd.delbar[1] == MonoForm{{t1 | tb2, q(-1, 4)}, {t2 | tb1, q(-1, 4)}});
    CHECK(sd.mubar[1] == MonoForm{{tb1 | tb2, q(1, 4)}});
    CHECK(sd.mu[1].empty());
    // conjugate generator: mu θ̄² = ¼ θ¹∧θ²
    CHECK(sd.mu[3] == MonoForm{{t1 | t2, q(1, 4)}});
}

TEST_CASE("abelian algebra has no differentials")
{
    ComplexFrame f = build_frame(torus4_algebra(), standard_j(2));
    for (const auto& d : exterior_d_on_generators(f).d)
        CHECK(d.empty());
    CHECK(nijenhuis_rank(f) == 0);
}

TEST_CASE("Nijenhuis coefficients")
{
    ComplexFrame f = build_frame(kt4_algebra(), standard_j(2));
    NijenhuisData nd = nijenhuis(f);
    CHECK(nd.N[1][0][1] == q(1, 4));
    CHECK(nd.N[1][1][0] == q(-1, 4));
    CHECK(nd.N[0][0][1] == q(0));
    CHECK(nijenhuis_rank(f) == 1);

    ComplexFrame f6 = build_frame(nil6_algebra(), standard_j(3));
    CHECK(nijenhuis_rank(f6) == 3);
}

TEST_CASE("Nijenhuis coefficients match the mubar action under the half-sum convention")
{
    for (auto alg : {kt4_algebra(), nil6_algebra()}) {
        size_t n = alg.real_dim / 2;
        ComplexFrame f = build_frame(alg, standard_j(n));
        NijenhuisData nd = nijenhuis(f);
        SplitDifferential sd = split_d(exterior_d_on_generators(f), n);
        for (size_t t = 0; t < n; ++t) {
            MonoForm from_n;
            for (size_t j = 0; j < n; ++j)
                for (size_t k = 0; k < n; ++k)
                    if (j != k)
                        accumulate(from_n, wedge({{1u << (n + j), Scalar(1)}}, {{1u << (n + k), Scalar(1)}}),
                                   nd.N[t][j][k] * q(1, 2));
            CHECK(from_n == sd.mubar[t]);
        }
    }
}

TEST_CASE("validation report")
{
    CHECK(validate(kt4_algebra(), standard_j(2)).ok());
    CHECK(validate(nil6_algebra(), standard_j(3)).ok());

    LieAlgebraSpec bad{4, {{0, 1, 0, Rational(1)}, {0, 2, 1, Rational(1)}}};
    auto rep = validate(bad, standard_j(2));
    bool jacobi_failed = false;
    for (const auto& it : rep.items)
        if (it.check == "jacobi")
            jacobi_failed = !it.pass;
    CHECK(jacobi_failed);

    LieAlgebraSpec inconsistent{4, {{1, 2, 3, Rational(1)}, {2, 1, 3, Rational(1)}}};
    CHECK_FALSE(validate(inconsistent, standard_j(2)).ok());

    AlmostComplexStructure shear = standard_j(2);
    shear.matrix[0][0] = 1;
    CHECK_FALSE(validate(kt4_algebra(), shear).ok());
}

TEST_CASE("reconstruction, purity and conjugation symmetry of the split")
{
    for (auto alg : {kt4_algebra(), nil6_algebra(), torus4_algebra()}) {
        size_t n = alg.real_dim / 2;
        ComplexFrame f = build_frame(alg, standard_j(n));
        GeneratorDifferentials gd = exterior_d_on_generators(f);
        SplitDifferential sd = split_d(gd, n);
        for (size_t s = 0; s < 2 * n; ++s) {
            MonoForm sum;
            for (auto* part : {&sd.mu, &sd.del, &sd.delbar, &sd.mubar})
                accumulate(sum, (*part)[s]);
            CHECK(sum == gd.d[s]);
            int p0 = s < n ? 1 : 0;
            for (const auto& [m, v] : sd.mu[s])
                CHECK(holo_degree(m, n) == p0 + 2);
            for (const auto& [m, v] : sd.del[s])
                CHECK(holo_degree(m, n) == p0 + 1);
            for (const auto& [m, v] : sd.delbar[s])
                CHECK(holo_degree(m, n) == p0);
            for (const auto& [m, v] : sd.mubar[s])
                CHECK(holo_degree(m, n) == p0 - 1);
        }
        // conj(mubar θ^s) = mu θ̄^s
        for (size_t s = 0; s < n; ++s) {
            MonoForm c;
            for (const auto& [m, v] : sd.mubar[s]) {
                auto [cm, sign] = conjugate_mask(m, n);
                accumulate(c, {{cm, v.conj()}}, Scalar(sign));
            }
            CHECK(c == sd.mu[n + s]);
        }
        bool integrable = nijenhuis_rank(f) == 0;
        bool mu_zero = true;
        for (const auto& m : sd.mu)
            mu_zero = mu_zero && m.empty();
        CHECK(integrable == mu_zero);
    }
}
