#pragma once

#include "acx/acs.hpp"

#include <array>
#include <string>

namespace acx {

struct InconsistentModel : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Weight = std::vector<int>;

// Constant coefficients (rank 0) or Fourier modes e_w, w in Z^rank, |w_a| <= truncation.
// Real frame vector a acts on e_w as multiplication by i·(actions[a]·w).
struct CoefficientModel {
    size_t rank = 0;
    std::vector<std::vector<Rational>> actions;
    int truncation = 0;

    bool invariant() const { return rank == 0; }
};

struct Bidegree {
    int p = 0, q = 0;
    auto operator<=>(const Bidegree&) const = default;
};

struct BasisElement {
    Weight weight;
    Mask mask = 0;

    std::vector<int> holo_set(size_t n) const;
    std::vector<int> anti_set(size_t n) const;
    Bidegree bidegree(size_t n) const { return {holo_degree(mask, n), anti_degree(mask, n)}; }
};

bool operator<(const BasisElement& a, const BasisElement& b);
bool operator==(const BasisElement& a, const BasisElement& b);

// Sparse form: basis element to coefficient.
struct Form {
    size_t n = 0;
    std::map<BasisElement, Scalar> terms;

    void add(const BasisElement& e, const Scalar& v);
    bool is_zero() const { return terms.empty(); }
    // Set of bidegrees that occur.
    std::vector<Bidegree> bidegrees() const;
    friend bool operator==(const Form& a, const Form& b) { return a.n == b.n && a.terms == b.terms; }
};

Form wedge(const Form& a, const Form& b);
Form conjugate(const Form& a);
Form operator+(const Form& a, const Form& b);
Form scale(const Form& a, const Scalar& s);

// Conjugate of a coframe monomial, with the reordering sign.
std::pair<Mask, int> conjugate_mask(Mask m, size_t n);

std::vector<Weight> enumerate_weights(size_t rank, int truncation);
std::vector<BasisElement> enumerate_basis(size_t n, Bidegree bd, size_t rank, int truncation);

enum class Op { Mu, Del, Delbar, Mubar, D };
std::string op_name(Op op);
// Bidegree shift; D has none and reports {0, 0}.
Bidegree op_shift(Op op);

// Exterior algebra over the complex coframe tensored with the coefficient model.
// Every operator preserves the weight, so each weight carries its own copy of the
// 4^n-dimensional algebra; matrices are indexed by positions in that copy.
class GradedComplex {
public:
    GradedComplex(const ComplexFrame& frame, const CoefficientModel& model);

    size_t n() const { return n_; }
    const ComplexFrame& frame() const { return frame_; }
    const CoefficientModel& model() const { return model_; }
    const SplitDifferential& split() const { return split_; }
    const std::vector<Weight>& weights() const { return weights_; }
    size_t weight_index(const Weight& w) const;
    size_t negated(size_t w) const { return negated_[w]; }

    size_t algebra_dim() const { return masks_.size(); }
    const std::vector<Mask>& masks() const { return masks_; }
    size_t position(Mask m) const { return position_.at(m); }
    const std::vector<size_t>& block(Bidegree bd) const;
    std::vector<size_t> degree(int r) const;
    bool valid(Bidegree bd) const { return bd.p >= 0 && bd.q >= 0 && bd.p <= int(n_) && bd.q <= int(n_); }

    // Whole-algebra matrix of an operator at one weight.
    const ExactMatrix& op(Op op, size_t w) const { return ops_[static_cast<int>(op)][w]; }
    const std::vector<ExactMatrix>& op_all(Op op) const { return ops_[static_cast<int>(op)]; }
    // Restriction to a source bidegree, landing in the shifted bidegree.
    ExactMatrix block_op(Op op, size_t w, Bidegree from) const;
    ExactMatrix restrict(const ExactMatrix& m, Bidegree from, Bidegree to) const;

    // Signed permutation with conj(x) = conj_perm() · (entrywise conjugate of x) for the weight flip w -> -w.
    const ExactMatrix& conj_perm() const { return conj_perm_; }
    // conj ∘ m ∘ conj where m acts on the negated weight.
    ExactMatrix conjugated(const std::vector<ExactMatrix>& per_weight, size_t w) const;

    // Real closed 1-form through which weight w enters d, in coframe slots.
    const MonoForm& weight_form(size_t w) const { return xi_[w]; }

    // Block-diagonal operator over all weights restricted to one source bidegree.
    ExactMatrix whole_block(Op op, Bidegree from) const;

    Form to_form(const Vec& coords, size_t w) const;
    Vec to_coords(const Form& f, size_t w) const;

private:
    ComplexFrame frame_;
    CoefficientModel model_;
    SplitDifferential split_;
    size_t n_;
    std::vector<Weight> weights_;
    std::vector<size_t> negated_;
    std::vector<Mask> masks_;
    std::map<Mask, size_t> position_;
    std::map<Bidegree, std::vector<size_t>> blocks_;
    std::vector<MonoForm> xi_;
    std::array<std::vector<ExactMatrix>, 5> ops_;
    ExactMatrix conj_perm_;
};

struct IdentityCheck {
    std::string name;
    bool pass;
    std::string witness; // first failing weight and bidegree
};

std::vector<IdentityCheck> identity_suite(const GradedComplex& gc);

} // namespace acx
