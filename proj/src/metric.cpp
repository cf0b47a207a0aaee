#include "acx/metric.hpp"

#include <sstream>

namespace acx {

HermitianMetric HermitianMetric::identity(size_t n)
{
    HermitianMetric h;
    h.g.assign(n, Vec(n, Scalar(0)));
    for (size_t k = 0; k < n; ++k)
        h.g[k][k] = Scalar(1);
    return h;
}

void HermitianMetric::check() const
{
    size_t n = g.size();
    for (size_t k = 0; k < n; ++k) {
        if (g[k].size() != n)
            throw NotPositive("metric is not square");
        for (size_t j = 0; j < n; ++j)
            if (g[k][j] != g[j][k].conj()) {
                std::ostringstream msg;
                msg << "metric is not conjugate-symmetric at (" << k << ", " << j << ")";
                throw NotPositive(msg.str());
            }
    }
    for (size_t m = 1; m <= n; ++m) {
        std::vector<Vec> lead(m);
        for (size_t k = 0; k < m; ++k)
            lead[k].assign(g[k].begin(), g[k].begin() + m);
        Scalar minor = determinant(lead);
        if (!minor.is_real() || sgn(minor.re()) <= 0) {
            std::ostringstream msg;
            msg << "leading minor " << m << " is " << minor << ", not positive";
            throw NotPositive(msg.str());
        }
    }
}

Scalar determinant(std::vector<Vec> rows)
{
    size_t n = rows.size();
    Scalar det(1);
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && rows[p][c].is_zero())
            ++p;
        if (p == n)
            return Scalar(0);
        if (p != c) {
            std::swap(rows[p], rows[c]);
            det = -det;
        }
        det *= rows[c][c];
        Scalar inv = rows[c][c].inverse();
        for (size_t r = c + 1; r < n; ++r) {
            if (rows[r][c].is_zero())
                continue;
            Scalar f = rows[r][c] * inv;
            for (size_t k = c; k < n; ++k)
                rows[r][k] -= f * rows[c][k];
        }
    }
    return det;
}

static std::vector<int> slot_list(Mask m)
{
    std::vector<int> s;
    for (Mask r = m; r; r &= r - 1)
        s.push_back(std::countr_zero(r));
    return s;
}

MetricTools::MetricTools(const GradedComplex& gc, const HermitianMetric& metric) : gc_(gc), metric_(metric)
{
    metric_.check();
    size_t n = gc.n();
    if (metric_.g.size() != n)
        throw NotPositive("metric size does not match the complex dimension");
    zero_ = gc.weight_index(Weight(gc.model().rank, 0));
    size_t N = gc.algebra_dim();
    Mask full = (Mask(1) << (2 * n)) - 1;

    MonoForm om;
    for (size_t k = 0; k < n; ++k)
        for (size_t j = 0; j < n; ++j)
            accumulate(om, wedge({{Mask(1) << k, Scalar(1)}}, {{Mask(1) << (n + j), Scalar(1)}}),
                       Scalar::i() * metric_.g[k][j] / Scalar(2));
    MonoForm top{{0, Scalar(1)}};
    for (size_t k = 1; k <= n; ++k)
        top = scale(wedge(top, om), Scalar(Rational(1, long(k))));
    omega_.assign(N, Scalar(0));
    volume_.assign(N, Scalar(0));
    for (const auto& [m, v] : om)
        omega_[gc.position(m)] = v;
    for (const auto& [m, v] : top)
        volume_[gc.position(m)] = v;
    top_coefficient_ = volume_[gc.position(full)];
    if (top_coefficient_.is_zero())
        throw NotPositive("omega^n vanishes");

    // ⟨θ^k, θ^j⟩ = 2 (g^-1)_{jk}, ⟨θ̄^k, θ̄^j⟩ = 2 (g^-1)_{kj}, mixed pairs orthogonal
    ExactMatrix g(n, n);
    for (size_t k = 0; k < n; ++k)
        for (size_t j = 0; j < n; ++j)
            g.set(k, j, metric_.g[k][j]);
    ExactMatrix ginv(n, n);
    for (size_t j = 0; j < n; ++j) {
        Vec e(n, Scalar(0));
        e[j] = Scalar(1);
        Vec col = *solve(g, e);
        for (size_t k = 0; k < n; ++k)
            ginv.set(k, j, col[k]);
    }
    slot_pairing_ = ExactMatrix(2 * n, 2 * n);
    for (size_t k = 0; k < n; ++k)
        for (size_t j = 0; j < n; ++j) {
            slot_pairing_.set(k, j, Scalar(2) * ginv.get(j, k));
            slot_pairing_.set(n + k, n + j, Scalar(2) * ginv.get(k, j));
        }

    const auto& masks = gc.masks();
    gram_ = ExactMatrix(N, N);
    for (size_t a = 0; a < N; ++a)
        for (size_t b = 0; b < N; ++b) {
            if (mask_degree(masks[a]) != mask_degree(masks[b]))
                continue;
            auto sa = slot_list(masks[a]), sb = slot_list(masks[b]);
            std::vector<Vec> minor(sa.size(), Vec(sb.size()));
            for (size_t r = 0; r < sa.size(); ++r)
                for (size_t c = 0; c < sb.size(); ++c)
                    minor[r][c] = slot_pairing_.get(sa[r], sb[c]);
            gram_.set(a, b, determinant(minor));
        }

    // φ^I ∧ *φ^J = ⟨φ^I, conj φ^J⟩ dV, and only φ^{I^c} pairs with φ^I
    star_ = ExactMatrix(N, N);
    star_inv_ = ExactMatrix(N, N);
    for (size_t b = 0; b < N; ++b) {
        Mask J = masks[b];
        auto [cJ, sJ] = conjugate_mask(J, n);
        size_t cb = gc.position(cJ);
        for (size_t a = 0; a < N; ++a) {
            Mask I = masks[a];
            if (mask_degree(I) != mask_degree(J))
                continue;
            Scalar pair = Scalar(sJ) * gram_.get(a, cb);
            if (pair.is_zero())
                continue;
            Scalar v = pair * top_coefficient_ / Scalar(wedge_sign(I, full ^ I));
            size_t row = gc.position(full ^ I);
            star_.set(row, b, v);
            // ** = (-1)^k on k-forms
            star_inv_.set(row, b, mask_degree(full ^ I) % 2 ? -v : v);
        }
    }

    L_ = ExactMatrix(N, N);
    for (size_t b = 0; b < N; ++b)
        for (const auto& [m, v] : om)
            if (!(m & masks[b]))
                L_.add(gc.position(m | masks[b]), b, v * Scalar(wedge_sign(m, masks[b])));
    Lambda_ = star_inv_ * L_ * star_;

    for (Op o : {Op::Mu, Op::Del, Op::Delbar, Op::Mubar, Op::D}) {
        auto& adj = adjoints_[static_cast<int>(o)];
        for (size_t w = 0; w < gc.weights().size(); ++w)
            adj.push_back((star_ * gc.conjugated(gc.op_all(o), w) * star_).scaled(Scalar(-1)));
    }
}

Form MetricTools::omega_form() const
{
    return gc_.to_form(omega_, zero_);
}

ExactMatrix MetricTools::laplacian(Op op, size_t w) const
{
    const ExactMatrix& a = gc_.op(op, w);
    const ExactMatrix& s = adjoint(op, w);
    return a * s + s * a;
}

Scalar MetricTools::inner(const Vec& a, const Vec& b) const
{
    Vec cb(b.size());
    for (size_t k = 0; k < b.size(); ++k)
        cb[k] = b[k].conj();
    Vec sb = star_.apply(gc_.conj_perm().apply(cb));
    size_t n = gc_.n();
    Mask full = (Mask(1) << (2 * n)) - 1;
    Scalar sum(0);
    const auto& masks = gc_.masks();
    for (size_t k = 0; k < a.size(); ++k) {
        if (a[k].is_zero())
            continue;
        Scalar other = sb[gc_.position(full ^ masks[k])];
        sum += a[k] * other * Scalar(wedge_sign(masks[k], full ^ masks[k]));
    }
    return sum / top_coefficient_;
}

Scalar MetricTools::gram_inner(const Vec& a, const Vec& b) const
{
    Scalar sum(0);
    for (size_t r = 0; r < a.size(); ++r) {
        if (a[r].is_zero())
            continue;
        for (const auto& [c, v] : gram_.row(r))
            sum += a[r] * v * b[c].conj();
    }
    return sum;
}

std::pair<Subspace, Subspace> MetricTools::asd_split() const
{
    if (gc_.n() != 2)
        throw Not4Manifold("self-dual split needs real dimension 4");
    auto pos = gc_.degree(2);
    ExactMatrix s = star_.submatrix(pos, pos);
    ExactMatrix id = ExactMatrix::identity(pos.size());
    return {kernel(s - id), kernel(s + id)};
}

KahlerPredicates MetricTools::kahler_predicates() const
{
    KahlerPredicates k;
    k.almost_kahler = is_zero(gc_.op(Op::D, zero_).apply(omega_));
    k.ddc_closed = is_zero(gc_.op(Op::Del, zero_).apply(gc_.op(Op::Delbar, zero_).apply(omega_)));
    return k;
}

} // namespace acx
