#pragma once

#include "acx/metric.hpp"

#include <optional>

namespace acx {

// Worker threads for per-weight maps; 0 and 1 both run inline.
void set_workers(size_t count);
size_t workers();

// Numerator and denominator subspaces of one weight, in block coordinates.
struct Quotient {
    Subspace num;
    Subspace den;
    size_t dim() const { return quotient_dim(num, den); }
};

// Operator block starting at bidegree `from`; a zero-row matrix when the target bidegree is empty.
ExactMatrix block(const GradedComplex& gc, Op op, size_t w, Bidegree from);
// d from degree r to degree r + 1.
ExactMatrix degree_block(const GradedComplex& gc, size_t w, int r);

Quotient de_rham_at(const GradedComplex& gc, size_t w, int r);
Quotient dolbeault_cw_at(const GradedComplex& gc, size_t w, Bidegree bd);
// ker μ ∩ ker μ̄ ∩ ker ∂̄² ∩ ker μ∂̄ at bidegree bd
Subspace a_dol(const GradedComplex& gc, size_t w, Bidegree bd);
Quotient refined_dolbeault_at(const GradedComplex& gc, size_t w, Bidegree bd);
// u'' ranges over A^{0,1}; numerator is the u''-projection of the paired kernel
Quotient hat_h01_at(const GradedComplex& gc, size_t w);
// Pairs (u', u'') in A^{1,0} ⊕ A^{0,1} with ∂u' + μu'' = 0 = μ̄u' + ∂̄u''.
Subspace paired_kernel(const GradedComplex& gc, size_t w);
// Paired kernel modulo (∂f, ∂̄g); with diagonal set, modulo (∂f, ∂̄f).
Quotient hat_h1_at(const GradedComplex& gc, size_t w, bool diagonal = false);
Subspace harmonic_at(const MetricTools& mt, const std::vector<Op>& ops, size_t w, Bidegree bd);

size_t de_rham(const GradedComplex& gc, int r);
size_t dolbeault_cw(const GradedComplex& gc, Bidegree bd);
size_t refined_dolbeault(const GradedComplex& gc, Bidegree bd);
size_t hat_h01(const GradedComplex& gc);
size_t hat_h1(const GradedComplex& gc, bool diagonal = false);
size_t harmonic_dim(const MetricTools& mt, const std::vector<Op>& ops, Bidegree bd);
// ℓ^{p,q}: harmonic for both ∂̄ and μ
size_t ell(const MetricTools& mt, Bidegree bd);

struct Special11 {
    size_t h11_dR = 0;
    size_t h11_BC = 0;
    // Only defined in real dimension 4, where dd^c on (1,1)-forms is i∂∂̄.
    std::optional<size_t> h11_ddc;
};

Quotient h11_dr_at(const GradedComplex& gc, size_t w);
Quotient h11_bc_at(const GradedComplex& gc, size_t w);
Quotient h11_ddc_at(const GradedComplex& gc, size_t w);
Special11 special_11_quotients(const GradedComplex& gc);

struct DiamondLevel {
    int truncation = -1; // -1 for the invariant model
    std::map<Bidegree, size_t> h;
    std::map<Bidegree, size_t> h_tilde;
    std::map<Bidegree, size_t> ell; // empty without a metric
    std::vector<size_t> b;
    size_t hat_h01 = 0;
    size_t hat_h1 = 0;
    size_t hat_h1_diagonal = 0;
    Special11 special;
};

struct GrowthWitness {
    std::string entry; // e.g. "h_tilde[1,1]"
    std::vector<size_t> values;
};

struct HodgeDiamond {
    std::vector<DiamondLevel> levels;
    std::vector<GrowthWitness> unbounded;
};

DiamondLevel diamond_level(const GradedComplex& gc, const MetricTools* mt);
// One level per truncation (a single invariant level for rank-0 models). An entry is an
// unbounded witness when it grows strictly across at least three sorted truncations.
HodgeDiamond diamond(const ComplexFrame& frame, const CoefficientModel& model, std::vector<int> truncations,
                     const std::optional<HermitianMetric>& metric);

} // namespace acx
