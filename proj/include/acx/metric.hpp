#pragma once

#include "acx/graded.hpp"

namespace acx {

struct NotPositive : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Not4Manifold : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// g[k][j] = g(Z_k, Z̄_j)
struct HermitianMetric {
    std::vector<std::vector<Scalar>> g;

    static HermitianMetric identity(size_t n);
    // Throws NotPositive unless g is conjugate-symmetric with positive leading minors.
    void check() const;
};

Scalar determinant(std::vector<Vec> rows);

struct KahlerPredicates {
    bool almost_kahler = false;
    bool ddc_closed = false;
};

// Hodge star, adjoints, Lefschetz pair and Laplacians for a fixed metric on a graded complex.
// Star and L do not depend on the weight; distinct weights are orthogonal.
class MetricTools {
public:
    MetricTools(const GradedComplex& gc, const HermitianMetric& metric);

    const GradedComplex& complex() const { return gc_; }
    const HermitianMetric& metric() const { return metric_; }

    // ω = (i/2) Σ g_{k j̄} θ^k ∧ θ̄^j at weight zero
    const Vec& omega() const { return omega_; }
    Form omega_form() const;
    // ω^n / n!
    const Vec& volume() const { return volume_; }
    size_t zero_weight() const { return zero_; }

    // Hermitian product of coframe slots, ⟨φ^s, φ^t⟩.
    const ExactMatrix& slot_pairing() const { return slot_pairing_; }
    // Hermitian Gram matrix of coframe monomials.
    const ExactMatrix& gram() const { return gram_; }

    const ExactMatrix& star() const { return star_; }
    const ExactMatrix& star_inverse() const { return star_inv_; }
    const ExactMatrix& lefschetz() const { return L_; }
    const ExactMatrix& lambda() const { return Lambda_; }

    // δ* = -* δ̄ * at weight w
    const ExactMatrix& adjoint(Op op, size_t w) const { return adjoints_[static_cast<int>(op)][w]; }
    ExactMatrix laplacian(Op op, size_t w) const;

    // Coefficient of dV in a ∧ *conj(b), both at weight w.
    Scalar inner(const Vec& a, const Vec& b) const;
    // Same product through the Gram matrix.
    Scalar gram_inner(const Vec& a, const Vec& b) const;

    // ±1 eigenspaces of the star on 2-forms of a real 4-dimensional model.
    std::pair<Subspace, Subspace> asd_split() const;

    KahlerPredicates kahler_predicates() const;

private:
    const GradedComplex& gc_;
    HermitianMetric metric_;
    size_t zero_ = 0;
    Vec omega_;
    Vec volume_;
    Scalar top_coefficient_;
    ExactMatrix slot_pairing_;
    ExactMatrix gram_;
    ExactMatrix star_;
    ExactMatrix star_inv_;
    ExactMatrix L_;
    ExactMatrix Lambda_;
    std::array<std::vector<ExactMatrix>, 5> adjoints_;
};

} // namespace acx
