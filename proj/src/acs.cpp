#include "acx/acs.hpp"

#include <map>
#include <sstream>
#include <tuple>

namespace acx {

namespace {

using Tensor = std::vector<std::vector<std::vector<Rational>>>;

bool j_squares_to_minus_one(const AlmostComplexStructure& J, size_t dim)
{
    const auto& m = J.matrix;
    if (m.size() != dim)
        return false;
    for (const auto& row : m)
        if (row.size() != dim)
            return false;
    for (size_t r = 0; r < dim; ++r)
        for (size_t c = 0; c < dim; ++c) {
            Rational s = 0;
            for (size_t k = 0; k < dim; ++k)
                s += m[r][k] * m[k][c];
            if (s != (r == c ? -1 : 0))
                return false;
        }
    return true;
}

// Real structure equations de^k = -Σ_{i<j} c^k_ij e^i∧e^j.
std::vector<MonoForm> real_differentials(const Tensor& c, size_t dim)
{
    std::vector<MonoForm> d(dim);
    for (size_t i = 0; i < dim; ++i)
        for (size_t j = i + 1; j < dim; ++j)
            for (size_t k = 0; k < dim; ++k)
                if (sgn(c[i][j][k]) != 0)
                    accumulate(d[k], {{(1u << i) | (1u << j), Scalar(-c[i][j][k])}});
    return d;
}

} // namespace

bool ValidationReport::ok() const
{
    for (const auto& it : items)
        if (!it.pass)
            return false;
    return true;
}

Tensor LieAlgebraSpec::structure() const
{
    Tensor c(real_dim, std::vector<std::vector<Rational>>(real_dim, std::vector<Rational>(real_dim, 0)));
    for (const auto& b : brackets) {
        if (b.i >= real_dim || b.j >= real_dim || b.k >= real_dim)
            throw std::out_of_range("bracket index outside the algebra");
        if (b.i == b.j)
            continue;
        c[b.i][b.j][b.k] = b.value;
        c[b.j][b.i][b.k] = -b.value;
    }
    return c;
}

Vec bracket(const ComplexFrame& frame, const Vec& x, const Vec& y)
{
    const size_t dim = 2 * frame.n;
    Vec out(dim);
    for (size_t i = 0; i < dim; ++i) {
        if (x[i].is_zero())
            continue;
        for (size_t j = 0; j < dim; ++j) {
            if (y[j].is_zero() || i == j)
                continue;
            Scalar xy = x[i] * y[j];
            for (size_t k = 0; k < dim; ++k)
                if (sgn(frame.c[i][j][k]) != 0)
                    out[k] += xy * Scalar(frame.c[i][j][k]);
        }
    }
    return out;
}

ComplexFrame build_frame(const LieAlgebraSpec& spec, const AlmostComplexStructure& J)
{
    const size_t dim = spec.real_dim;
    if (dim == 0 || dim % 2 != 0)
        throw DegenerateJ("real dimension must be even and positive");
    if (!j_squares_to_minus_one(J, dim))
        throw DegenerateJ("J does not square to -1");
    const size_t n = dim / 2;

    // (1 - iJ)/2 projects onto the +i eigenspace
    ExactMatrix P(dim, dim);
    for (size_t r = 0; r < dim; ++r)
        for (size_t c = 0; c < dim; ++c) {
            Scalar v(Rational(r == c ? 1 : 0) / 2, Rational(-J.matrix[r][c] / 2));
            P.set(r, c, v);
        }
    Echelon e = reduce(P);
    if (e.pivots.size() != n)
        throw DegenerateJ("projector rank differs from half the dimension");

    std::vector<Vec> cols;
    for (size_t p : e.pivots)
        cols.push_back(P.column(p));
    for (size_t r = 0; r < n; ++r) {
        Vec z = cols[r];
        for (auto& s : z)
            s = s.conj();
        cols.push_back(std::move(z));
    }

    ComplexFrame f;
    f.n = n;
    f.c = spec.structure();
    f.vectors = ExactMatrix::from_columns(cols, dim);

    // coframe rows solve coframe · vectors = identity
    ExactMatrix vt = f.vectors.transpose();
    std::vector<Vec> rows;
    for (size_t s = 0; s < dim; ++s) {
        Vec unit(dim);
        unit[s] = Scalar(1);
        auto x = solve(vt, unit);
        if (!x)
            throw DegenerateJ("frame is not invertible");
        rows.push_back(*x);
    }
    f.coframe = ExactMatrix::from_rows(rows, dim);
    return f;
}

GeneratorDifferentials exterior_d_on_generators(const ComplexFrame& frame)
{
    const size_t dim = 2 * frame.n;
    std::vector<Vec> F;
    for (size_t a = 0; a < dim; ++a)
        F.push_back(frame.vectors.column(a));

    GeneratorDifferentials gd;
    gd.d.assign(dim, {});
    for (size_t a = 0; a < dim; ++a)
        for (size_t b = a + 1; b < dim; ++b) {
            Vec br = bracket(frame, F[a], F[b]);
            if (is_zero(br))
                continue;
            Vec coeff = frame.coframe.apply(br);
            // dα(X, Y) = -α([X, Y])
            for (size_t s = 0; s < dim; ++s)
                if (!coeff[s].is_zero())
                    accumulate(gd.d[s], {{(1u << a) | (1u << b), -coeff[s]}});
        }
    return gd;
}

SplitDifferential split_d(const GeneratorDifferentials& gd, size_t n)
{
    const size_t dim = 2 * n;
    SplitDifferential sd;
    sd.mu.assign(dim, {});
    sd.del.assign(dim, {});
    sd.delbar.assign(dim, {});
    sd.mubar.assign(dim, {});
    for (size_t s = 0; s < dim; ++s) {
        const bool holo = s < n;
        for (const auto& [m, v] : gd.d[s]) {
            int p = holo_degree(m, n);
            // shift of the bidegree relative to the generator
            int dp = p - (holo ? 1 : 0);
            MonoForm term{{m, v}};
            if (dp == 2)
                accumulate(sd.mu[s], term);
            else if (dp == 1)
                accumulate(sd.del[s], term);
            else if (dp == 0)
                accumulate(sd.delbar[s], term);
            else
                accumulate(sd.mubar[s], term);
        }
    }
    return sd;
}

NijenhuisData nijenhuis(const ComplexFrame& frame)
{
    const size_t n = frame.n;
    NijenhuisData nd;
    nd.N.assign(n, std::vector<std::vector<Scalar>>(n, std::vector<Scalar>(n)));
    for (size_t j = 0; j < n; ++j)
        for (size_t k = 0; k < n; ++k) {
            if (j == k)
                continue;
            Vec br = bracket(frame, frame.vectors.column(n + j), frame.vectors.column(n + k));
            Vec coeff = frame.coframe.apply(br);
            for (size_t t = 0; t < n; ++t)
                nd.N[t][j][k] = -coeff[t];
        }
    return nd;
}

size_t nijenhuis_rank(const ComplexFrame& frame)
{
    const size_t n = frame.n;
    SplitDifferential sd = split_d(exterior_d_on_generators(frame), n);
    std::vector<Mask> targets;
    for (Mask m : subsets(static_cast<unsigned>(n), 2))
        targets.push_back(m << n);
    ExactMatrix M(targets.size(), n);
    for (size_t s = 0; s < n; ++s)
        for (size_t r = 0; r < targets.size(); ++r) {
            auto it = sd.mubar[s].find(targets[r]);
            if (it != sd.mubar[s].end())
                M.set(r, s, it->second);
        }
    return rank(M);
}

ValidationReport validate(const LieAlgebraSpec& spec, const AlmostComplexStructure& J)
{
    ValidationReport rep;
    const size_t dim = spec.real_dim;

    bool even = dim > 0 && dim % 2 == 0;
    rep.items.push_back({"even_dimension", even, even ? "" : "real dimension must be even"});

    bool anti = true;
    std::string anti_detail;
    std::map<std::tuple<size_t, size_t, size_t>, Rational> seen;
    for (const auto& b : spec.brackets) {
        if (b.i >= dim || b.j >= dim || b.k >= dim) {
            anti = false;
            anti_detail = "index out of range";
            break;
        }
        if (b.i == b.j) {
            if (sgn(b.value) != 0) {
                anti = false;
                anti_detail = "nonzero self-bracket";
            }
            continue;
        }
        auto key = std::make_tuple(std::min(b.i, b.j), std::max(b.i, b.j), b.k);
        Rational v = b.i < b.j ? b.value : Rational(-b.value);
        auto it = seen.find(key);
        if (it != seen.end() && it->second != v) {
            anti = false;
            std::ostringstream os;
            os << "inconsistent values for [e" << b.i + 1 << ",e" << b.j + 1 << "] along e" << b.k + 1;
            anti_detail = os.str();
        }
        seen[key] = v;
    }
    rep.items.push_back({"antisymmetry", anti, anti_detail});

    bool jsq = even && j_squares_to_minus_one(J, dim);
    rep.items.push_back({"j_squared", jsq, jsq ? "" : "J^2 != -1"});

    if (!anti || !even) {
        rep.items.push_back({"jacobi", false, "skipped: malformed brackets"});
        rep.items.push_back({"unimodular", false, "skipped: malformed brackets"});
        return rep;
    }

    auto c = spec.structure();
    auto d = real_differentials(c, dim);
    bool jac = true;
    std::string jac_detail;
    for (size_t k = 0; k < dim; ++k) {
        MonoForm dd = apply_derivation(d, d[k]);
        if (!is_zero(dd)) {
            jac = false;
            jac_detail = "d^2 e^" + std::to_string(k + 1) + " != 0";
            break;
        }
    }
    rep.items.push_back({"jacobi", jac, jac_detail});

    bool uni = true;
    std::string uni_detail;
    for (size_t i = 0; i < dim; ++i) {
        Rational tr = 0;
        for (size_t k = 0; k < dim; ++k)
            tr += c[i][k][k];
        if (sgn(tr) != 0) {
            uni = false;
            uni_detail = "trace of ad(e" + std::to_string(i + 1) + ") = " + tr.get_str();
            break;
        }
    }
    rep.items.push_back({"unimodular", uni, uni_detail});
    return rep;
}

} // namespace acx
