#include "acx/graded.hpp"

#include <algorithm>
#include <sstream>

namespace acx {

std::vector<int> BasisElement::holo_set(size_t n) const
{
    std::vector<int> s;
    for (size_t k = 0; k < n; ++k)
        if (mask & (1u << k))
            s.push_back(int(k) + 1);
    return s;
}

std::vector<int> BasisElement::anti_set(size_t n) const
{
    std::vector<int> s;
    for (size_t k = 0; k < n; ++k)
        if (mask & (1u << (n + k)))
            s.push_back(int(k) + 1);
    return s;
}


bool operator<(const BasisElement& a, const BasisElement& b)
{
    if (a.weight != b.weight)
        return a.weight < b.weight;
    if (a.mask == b.mask)
        return false;
    // holo slots precede anti slots, so comparing slot lists orders equal bidegrees by (holo_set, anti_set)
    int da = mask_degree(a.mask), db = mask_degree(b.mask);
    if (da != db)
        return da < db;
    std::vector<int> sa, sb;
    for (Mask r = a.mask; r; r &= r - 1)
        sa.push_back(std::countr_zero(r));
    for (Mask r = b.mask; r; r &= r - 1)
        sb.push_back(std::countr_zero(r));
    return sa < sb;
}

bool operator==(const BasisElement& a, const BasisElement& b)
{
    return a.weight == b.weight && a.mask == b.mask;
}

void Form::add(const BasisElement& e, const Scalar& v)
{
    if (v.is_zero())
        return;
    auto it = terms.find(e);
    if (it == terms.end()) {
        terms.emplace(e, v);
        return;
    }
    it->second += v;
    if (it->second.is_zero())
        terms.erase(it);
}

std::vector<Bidegree> Form::bidegrees() const
{
    std::vector<Bidegree> out;
    for (const auto& [e, v] : terms) {
        Bidegree bd = e.bidegree(n);
        if (std::find(out.begin(), out.end(), bd) == out.end())
            out.push_back(bd);
    }
    std::sort(out.begin(), out.end());
    return out;
}

static Weight add_weights(const Weight& a, const Weight& b)
{
    if (a.empty())
        return b;
    if (b.empty())
        return a;
    if (a.size() != b.size())
        throw InconsistentModel("weights of different rank");
    Weight w(a.size());
    for (size_t k = 0; k < a.size(); ++k)
        w[k] = a[k] + b[k];
    return w;
}

Form wedge(const Form& a, const Form& b)
{
    Form out;
    out.n = std::max(a.n, b.n);
    for (const auto& [ea, va] : a.terms)
        for (const auto& [eb, vb] : b.terms) {
            int s = wedge_sign(ea.mask, eb.mask);
            if (s == 0)
                continue;
            Scalar v = va * vb;
            if (s < 0)
                v = -v;
            out.add({add_weights(ea.weight, eb.weight), ea.mask | eb.mask}, v);
        }
    return out;
}

std::pair<Mask, int> conjugate_mask(Mask m, size_t n)
{
    Mask lo = m & ((1u << n) - 1);
    Mask hi = m >> n;
    int sign = (std::popcount(lo) * std::popcount(hi)) % 2 ? -1 : 1;
    return {hi | (lo << n), sign};
}

Form conjugate(const Form& a)
{
    Form out;
    out.n = a.n;
    for (const auto& [e, v] : a.terms) {
        auto [m, s] = conjugate_mask(e.mask, a.n);
        Weight w = e.weight;
        for (auto& x : w)
            x = -x;
        Scalar c = v.conj();
        out.add({w, m}, s < 0 ? -c : c);
    }
    return out;
}

Form operator+(const Form& a, const Form& b)
{
    Form out = a;
    out.n = std::max(a.n, b.n);
    for (const auto& [e, v] : b.terms)
        out.add(e, v);
    return out;
}

Form scale(const Form& a, const Scalar& s)
{
    Form out;
    out.n = a.n;
    for (const auto& [e, v] : a.terms)
        out.add(e, v * s);
    return out;
}

std::vector<Weight> enumerate_weights(size_t rank, int truncation)
{
    std::vector<Weight> out;
    Weight w(rank, -truncation);
    while (true) {
        out.push_back(w);
        size_t k = rank;
        while (k > 0 && w[k - 1] == truncation) {
            w[k - 1] = -truncation;
            --k;
        }
        if (k == 0)
            break;
        ++w[k - 1];
    }
    return out;
}

std::vector<BasisElement> enumerate_basis(size_t n, Bidegree bd, size_t rank, int truncation)
{
    std::vector<BasisElement> out;
    if (bd.p < 0 || bd.q < 0 || bd.p > int(n) || bd.q > int(n))
        return out;
    auto holo = subsets(unsigned(n), unsigned(bd.p));
    auto anti = subsets(unsigned(n), unsigned(bd.q));
    for (const auto& w : enumerate_weights(rank, truncation))
        for (Mask h : holo)
            for (Mask a : anti)
                out.push_back({w, h | (a << n)});
    return out;
}

std::string op_name(Op op)
{
    switch (op) {
    case Op::Mu: return "mu";
    case Op::Del: return "del";
    case Op::Delbar: return "delbar";
    case Op::Mubar: return "mubar";
    case Op::D: return "d";
    }
    return "?";
}

Bidegree op_shift(Op op)
{
    switch (op) {
    case Op::Mu: return {2, -1};
    case Op::Del: return {1, 0};
    case Op::Delbar: return {0, 1};
    case Op::Mubar: return {-1, 2};
    case Op::D: return {0, 0};
    }
    return {0, 0};
}

GradedComplex::GradedComplex(const ComplexFrame& frame, const CoefficientModel& model)
    : frame_(frame), model_(model), n_(frame.n)
{
    const size_t dim = 2 * n_;
    GeneratorDifferentials gd = exterior_d_on_generators(frame_);
    split_ = split_d(gd, n_);

    if (!model_.invariant()) {
        if (model_.actions.size() != dim)
            throw InconsistentModel("need one action row per real frame vector");
        for (const auto& row : model_.actions)
            if (row.size() != model_.rank)
                throw InconsistentModel("action row length differs from the Fourier rank");
        if (model_.truncation < 0)
            throw InconsistentModel("negative truncation");
        // each coordinate must be a closed 1-form: Σ_k c^k_ij row_k = 0
        for (size_t i = 0; i < dim; ++i)
            for (size_t j = i + 1; j < dim; ++j)
                for (size_t b = 0; b < model_.rank; ++b) {
                    Rational s = 0;
                    for (size_t k = 0; k < dim; ++k)
                        s += frame_.c[i][j][k] * model_.actions[k][b];
                    if (sgn(s) != 0) {
                        std::ostringstream os;
                        os << "Fourier coordinate " << b + 1 << " is not closed: [e" << i + 1 << ",e" << j + 1
                           << "] carries a nonzero action";
                        throw InconsistentModel(os.str());
                    }
                }
    }

    weights_ = enumerate_weights(model_.rank, model_.invariant() ? 0 : model_.truncation);
    for (const auto& w : weights_) {
        Weight neg = w;
        for (auto& x : neg)
            x = -x;
        negated_.push_back(weight_index(neg));
    }

    for (int p = 0; p <= int(n_); ++p)
        for (int q = 0; q <= int(n_); ++q) {
            auto& idx = blocks_[{p, q}];
            for (Mask h : subsets(unsigned(n_), unsigned(p)))
                for (Mask a : subsets(unsigned(n_), unsigned(q))) {
                    idx.push_back(masks_.size());
                    position_[h | (a << n_)] = masks_.size();
                    masks_.push_back(h | (a << n_));
                }
        }

    for (const auto& w : weights_) {
        MonoForm xi;
        for (size_t t = 0; t < dim; ++t) {
            Scalar coeff;
            for (size_t a = 0; a < dim; ++a) {
                Rational rw = 0;
                for (size_t b = 0; b < model_.rank; ++b)
                    rw += model_.actions[a][b] * w[b];
                if (sgn(rw) != 0)
                    coeff += Scalar(rw) * frame_.vectors.get(a, t);
            }
            if (!coeff.is_zero())
                xi[1u << t] = coeff;
        }
        xi_.push_back(std::move(xi));
    }

    const size_t N = masks_.size();
    auto build = [&](const std::vector<MonoForm>& gens, const MonoForm& left) {
        ExactMatrix m(N, N);
        for (size_t col = 0; col < N; ++col) {
            MonoForm img = apply_derivation(gens, masks_[col]);
            accumulate(img, wedge(left, {{masks_[col], Scalar(1)}}));
            for (const auto& [mk, v] : img)
                m.set(position_.at(mk), col, v);
        }
        return m;
    };
    for (size_t w = 0; w < weights_.size(); ++w) {
        MonoForm xi10, xi01, xi_all;
        for (const auto& [mk, v] : xi_[w]) {
            Scalar iv = Scalar::i() * v;
            xi_all[mk] = iv;
            if (mk < (1u << n_))
                xi10[mk] = iv;
            else
                xi01[mk] = iv;
        }
        ops_[int(Op::Mu)].push_back(build(split_.mu, {}));
        ops_[int(Op::Del)].push_back(build(split_.del, xi10));
        ops_[int(Op::Delbar)].push_back(build(split_.delbar, xi01));
        ops_[int(Op::Mubar)].push_back(build(split_.mubar, {}));
        ops_[int(Op::D)].push_back(build(gd.d, xi_all));
    }

    conj_perm_ = ExactMatrix(N, N);
    for (size_t col = 0; col < N; ++col) {
        auto [m, s] = conjugate_mask(masks_[col], n_);
        conj_perm_.set(position_.at(m), col, Scalar(s));
    }
}

size_t GradedComplex::weight_index(const Weight& w) const
{
    auto it = std::lower_bound(weights_.begin(), weights_.end(), w);
    if (it == weights_.end() || *it != w)
        throw std::out_of_range("weight outside the truncation");
    return size_t(it - weights_.begin());
}

const std::vector<size_t>& GradedComplex::block(Bidegree bd) const
{
    static const std::vector<size_t> empty;
    auto it = blocks_.find(bd);
    return it == blocks_.end() ? empty : it->second;
}

std::vector<size_t> GradedComplex::degree(int r) const
{
    std::vector<size_t> out;
    for (size_t k = 0; k < masks_.size(); ++k)
        if (mask_degree(masks_[k]) == r)
            out.push_back(k);
    return out;
}

ExactMatrix GradedComplex::restrict(const ExactMatrix& m, Bidegree from, Bidegree to) const
{
    return m.submatrix(block(to), block(from));
}

ExactMatrix GradedComplex::block_op(Op o, size_t w, Bidegree from) const
{
    Bidegree s = op_shift(o);
    return restrict(op(o, w), from, {from.p + s.p, from.q + s.q});
}

ExactMatrix GradedComplex::conjugated(const std::vector<ExactMatrix>& per_weight, size_t w) const
{
    return conj_perm_ * per_weight[negated_[w]].conj() * conj_perm_;
}

ExactMatrix GradedComplex::whole_block(Op o, Bidegree from) const
{
    std::vector<ExactMatrix> parts;
    for (size_t w = 0; w < weights_.size(); ++w)
        parts.push_back(block_op(o, w, from));
    return ExactMatrix::block_diagonal(parts);
}

Form GradedComplex::to_form(const Vec& coords, size_t w) const
{
    Form f;
    f.n = n_;
    for (size_t k = 0; k < coords.size(); ++k)
        f.add({weights_[w], masks_[k]}, coords[k]);
    return f;
}

Vec GradedComplex::to_coords(const Form& f, size_t w) const
{
    Vec v(masks_.size());
    for (const auto& [e, x] : f.terms) {
        if (!(e.weight == weights_[w]) && !(e.weight.empty() && weights_[w].empty()))
            throw std::out_of_range("form has a component outside the requested weight");
        v[position_.at(e.mask)] = x;
    }
    return v;
}

std::vector<IdentityCheck> identity_suite(const GradedComplex& gc)
{
    struct Rel {
        std::string name;
        std::vector<std::pair<Op, Op>> products; // summed compositions, first applied second
    };
    const std::vector<Rel> rels = {
        {"mu^2 = 0", {{Op::Mu, Op::Mu}}},
        {"mu del + del mu = 0", {{Op::Mu, Op::Del}, {Op::Del, Op::Mu}}},
        {"mu delbar + delbar mu + del^2 = 0", {{Op::Mu, Op::Delbar}, {Op::Delbar, Op::Mu}, {Op::Del, Op::Del}}},
        {"mu mubar + del delbar + delbar del + mubar mu = 0",
         {{Op::Mu, Op::Mubar}, {Op::Del, Op::Delbar}, {Op::Delbar, Op::Del}, {Op::Mubar, Op::Mu}}},
        {"mubar del + del mubar + delbar^2 = 0", {{Op::Mubar, Op::Del}, {Op::Del, Op::Mubar}, {Op::Delbar, Op::Delbar}}},
        {"mubar delbar + delbar mubar = 0", {{Op::Mubar, Op::Delbar}, {Op::Delbar, Op::Mubar}}},
        {"mubar^2 = 0", {{Op::Mubar, Op::Mubar}}},
    };

    auto witness = [&](const ExactMatrix& m, size_t w) -> std::string {
        for (size_t r = 0; r < m.rows(); ++r)
            if (!m.row(r).empty()) {
                size_t col = m.row(r).begin()->first;
                Bidegree bd = BasisElement{{}, gc.masks()[col]}.bidegree(gc.n());
                std::ostringstream os;
                os << "weight #" << w << " source bidegree (" << bd.p << "," << bd.q << ")";
                return os.str();
            }
        return "";
    };

    std::vector<IdentityCheck> out;
    for (const auto& rel : rels) {
        IdentityCheck chk{rel.name, true, ""};
        for (size_t w = 0; w < gc.weights().size() && chk.pass; ++w) {
            ExactMatrix sum(gc.algebra_dim(), gc.algebra_dim());
            for (const auto& [a, b] : rel.products)
                sum = sum + gc.op(a, w) * gc.op(b, w);
            if (!sum.is_zero()) {
                chk.pass = false;
                chk.witness = witness(sum, w);
            }
        }
        out.push_back(chk);
    }

    IdentityCheck rec{"d = mu + del + delbar + mubar", true, ""};
    IdentityCheck dd{"d^2 = 0", true, ""};
    for (size_t w = 0; w < gc.weights().size(); ++w) {
        ExactMatrix diff = gc.op(Op::D, w) - (gc.op(Op::Mu, w) + gc.op(Op::Del, w) + gc.op(Op::Delbar, w) + gc.op(Op::Mubar, w));
        if (rec.pass && !diff.is_zero()) {
            rec.pass = false;
            rec.witness = witness(diff, w);
        }
        ExactMatrix sq = gc.op(Op::D, w) * gc.op(Op::D, w);
        if (dd.pass && !sq.is_zero()) {
            dd.pass = false;
            dd.witness = witness(sq, w);
        }
    }
    out.push_back(rec);
    out.push_back(dd);
    return out;
}

} // namespace acx
