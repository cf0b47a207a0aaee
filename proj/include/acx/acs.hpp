#pragma once

#include "acx/exterior.hpp"
#include "acx/linalg.hpp"

#include <string>
#include <vector>

namespace acx {

struct DegenerateJ : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// [e_i, e_j] = Σ_k value e_k, zero-based indices.
struct BracketEntry {
    size_t i, j, k;
    Rational value;
};

struct LieAlgebraSpec {
    size_t real_dim = 0;
    std::vector<BracketEntry> brackets;

    // Dense c[i][j][k] with the antisymmetric partner of every listed entry filled in.
    std::vector<std::vector<std::vector<Rational>>> structure() const;
};

// matrix[r][c] is the coefficient of e_r in J e_c.
struct AlmostComplexStructure {
    std::vector<std::vector<Rational>> matrix;
};

// Complex frame (Z_1..Z_n, Z̄_1..Z̄_n) and its dual coframe (θ^1..θ^n, θ̄^1..θ̄^n).
// Slot s < n of a coframe mask is θ^{s+1}, slot n + s is θ̄^{s+1}.
struct ComplexFrame {
    size_t n = 0;
    ExactMatrix vectors;  // 2n × 2n, column s holds frame vector s in the real basis
    ExactMatrix coframe;  // 2n × 2n, row s holds coframe form s on the real dual basis
    std::vector<std::vector<std::vector<Rational>>> c;
};

struct GeneratorDifferentials {
    std::vector<MonoForm> d; // one per coframe slot
};

struct SplitDifferential {
    std::vector<MonoForm> mu, del, delbar, mubar;
};

// N[t][j][k]: coefficient with μ̄θ^t = Σ_{j<k} N[t][j][k] θ̄^j∧θ̄^k.
struct NijenhuisData {
    std::vector<std::vector<std::vector<Scalar>>> N;
};

struct ValidationItem {
    std::string check;
    bool pass;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationItem> items;
    bool ok() const;
};

ComplexFrame build_frame(const LieAlgebraSpec& spec, const AlmostComplexStructure& J);
GeneratorDifferentials exterior_d_on_generators(const ComplexFrame& frame);
SplitDifferential split_d(const GeneratorDifferentials& gd, size_t n);
NijenhuisData nijenhuis(const ComplexFrame& frame);
size_t nijenhuis_rank(const ComplexFrame& frame);
ValidationReport validate(const LieAlgebraSpec& spec, const AlmostComplexStructure& J);

// Bracket of two complex vectors given in the real basis.
Vec bracket(const ComplexFrame& frame, const Vec& x, const Vec& y);

// Bidegree (p, q) of a coframe monomial.
inline int holo_degree(Mask m, size_t n) { return std::popcount(m & ((1u << n) - 1)); }
inline int anti_degree(Mask m, size_t n) { return std::popcount(m >> n); }

} // namespace acx
