#pragma once

#include "acx/cohomology.hpp"

namespace acx {

struct NotDdcClosed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoSolution : std::runtime_error {
    NoSolution(const std::string& what, std::string obstruction)
        : std::runtime_error(what), obstruction(std::move(obstruction)) {}
    std::string obstruction; // left-kernel functional that pairs nonzero with the right-hand side
};

struct DegenerateAtSample : std::runtime_error {
    DegenerateAtSample(const std::string& what, std::vector<int> point)
        : std::runtime_error(what), point(std::move(point)) {}
    std::vector<int> point; // quarter-period grid indices, one per torus coordinate
};

enum class Status { Pass, Fail, NotApplicable };
std::string status_name(Status s);

struct AuditItem {
    std::string id;
    std::string statement;
    Status status = Status::NotApplicable;
    std::string witness;
    std::string note;
};

struct AuditReport {
    std::string name;
    std::string scope; // which finite model the verdicts describe
    std::vector<AuditItem> items;

    bool any_fail() const;
};

std::string model_scope(const GradedComplex& gc);
// Terms as "(coefficient)*t1*tb2*e[1,0]"; t is θ, tb is θ̄, e[w] the Fourier mode.
std::string form_text(const Form& f);

// Bidegree relations of d, the ∂∂̄ formulas, and the Kähler identities when dω = 0.
AuditReport audit_identities(const GradedComplex& gc, const MetricTools* mt);
// ∂∂̄(∂u + ∂̄v) = 0 and ∂∂̄∂∂̄f = 0 in real dimension 4; not applicable otherwise.
AuditReport audit_ddbar_formulas(const GradedComplex& gc);
// Harmonic symmetries on almost-Kähler models; not applicable otherwise.
AuditReport audit_dualities(const MetricTools& mt);
// Dimension-free claims: de Rham injects into the hat space, the hat splitting, the complex property,
// and vanishing of refined classes under a maximal-rank Nijenhuis tensor.
AuditReport audit_cohomology_claims(const GradedComplex& gc);
// Throws Not4Manifold outside real dimension 4. Harmonic items need mt.
AuditReport audit_4mfld_lemmas(const GradedComplex& gc, const MetricTools* mt);
// d-exact pure (1,1)-forms versus ∂∂̄-exactness, against h̃^{1,0} = h̃^{0,1}. Throws Not4Manifold.
AuditReport audit_ddbar_lemma(const GradedComplex& gc);
// Solvability of the correction equation against h̃^{1,0} = h̃^{0,1}, and injectivity of the induced
// map from dd^c-closed (1,1)-classes into H². Throws Not4Manifold.
AuditReport audit_descent(const GradedComplex& gc);

struct SampleValue {
    std::vector<int> point;
    Scalar top; // coefficient of ω′∧ω′ on the top monomial
};

struct NondegeneracyEvidence {
    bool constant_coefficients = false;
    bool nonzero_everywhere = false; // every sample has a nonzero top coefficient
    std::vector<SampleValue> samples;
    bool psi_positive = false; // (1,1)-part is a positive form, which forces nondegeneracy
};

struct TamingCertificate {
    Form psi;
    Form u; // solves the equation as written
    Form omega_prime;
    bool hypothesis = false; // h̃^{1,0} = h̃^{0,1} on the model
    bool residual_zero = false;
    bool closed = false;
    bool real = false;
    bool well_defined = false; // two pivot orders give the same ω′
    NondegeneracyEvidence nondegenerate;
};

// Solves ∂̄ψ = ∂∂̄u + μ̄∂ū + ∂μ̄ū + μ̄μu for u in A^{0,1} and builds ω′ = ψ - (∂̄u + ∂ū + μu + μ̄ū),
// which is ψ + ∂̄v + ∂v̄ + μv + μ̄v̄ for v = -u.
TamingCertificate solve_taming(const GradedComplex& gc, const Form& psi);
// ω′∧ω′ at every sample point; Not4Manifold outside real dimension 4.
NondegeneracyEvidence sample_top_degree(const GradedComplex& gc, const Form& omega);
// As above, but throws DegenerateAtSample at the first vanishing sample.
NondegeneracyEvidence check_nondegenerate(const GradedComplex& gc, const Form& omega);

} // namespace acx
