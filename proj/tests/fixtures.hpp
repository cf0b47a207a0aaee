#pragma once

#include "acx/graded.hpp"

namespace fixtures {

using namespace acx;

inline AlmostComplexStructure standard_j(size_t n)
{
    AlmostComplexStructure J;
    J.matrix.assign(2 * n, std::vector<Rational>(2 * n, 0));
    for (size_t a = 0; a < n; ++a) {
        J.matrix[2 * a + 1][2 * a] = 1;
        J.matrix[2 * a][2 * a + 1] = -1;
    }
    return J;
}

inline LieAlgebraSpec kt4_algebra()
{
    return {4, {{1, 2, 3, Rational(1)}}};
}

inline LieAlgebraSpec torus4_algebra()
{
    return {4, {}};
}

inline LieAlgebraSpec nil6_algebra()
{
    return {6, {{0, 2, 4, Rational(1)}, {0, 5, 3, Rational(-1)}, {2, 5, 1, Rational(1)}}};
}

inline CoefficientModel base_torus(int truncation)
{
    CoefficientModel m;
    m.rank = 2;
    m.truncation = truncation;
    m.actions = {{1, 0}, {0, 1}, {0, 0}, {0, 0}};
    return m;
}

inline GradedComplex kt4(int truncation = -1)
{
    ComplexFrame f = build_frame(kt4_algebra(), standard_j(2));
    return GradedComplex(f, truncation < 0 ? CoefficientModel{} : base_torus(truncation));
}

inline GradedComplex torus4()
{
    return GradedComplex(build_frame(torus4_algebra(), standard_j(2)), CoefficientModel{});
}

inline Form monomial(size_t n, Mask m, const Scalar& v = Scalar(1), Weight w = {})
{
    Form f;
    f.n = n;
    f.add({w, m}, v);
    return f;
}

// slot helpers for n = 2
constexpr Mask t1 = 1u << 0, t2 = 1u << 1, tb1 = 1u << 2, tb2 = 1u << 3;

} // namespace fixtures
