#include "acx/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace acx {

// ---- ExactMatrix ----

ExactMatrix ExactMatrix::identity(size_t n)
{
    ExactMatrix m(n, n);
    for (size_t k = 0; k < n; ++k)
        m.data_[k][k] = Scalar(1);
    return m;
}

ExactMatrix ExactMatrix::from_rows(const std::vector<Vec>& rows, size_t cols)
{
    ExactMatrix m(rows.size(), cols);
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < cols; ++c)
            m.set(r, c, rows[r][c]);
    return m;
}

ExactMatrix ExactMatrix::from_columns(const std::vector<Vec>& cols, size_t rows)
{
    ExactMatrix m(rows, cols.size());
    for (size_t c = 0; c < cols.size(); ++c)
        for (size_t r = 0; r < rows; ++r)
            m.set(r, c, cols[c][r]);
    return m;
}

Scalar ExactMatrix::get(size_t r, size_t c) const
{
    auto it = data_[r].find(c);
    return it == data_[r].end() ? Scalar() : it->second;
}

void ExactMatrix::set(size_t r, size_t c, const Scalar& v)
{
    if (v.is_zero())
        data_[r].erase(c);
    else
        data_[r][c] = v;
}

void ExactMatrix::add(size_t r, size_t c, const Scalar& v)
{
    if (v.is_zero())
        return;
    auto it = data_[r].find(c);
    if (it == data_[r].end()) {
        data_[r][c] = v;
        return;
    }
    it->second += v;
    if (it->second.is_zero())
        data_[r].erase(it);
}

size_t ExactMatrix::nonzeros() const
{
    size_t n = 0;
    for (const auto& r : data_)
        n += r.size();
    return n;
}

bool ExactMatrix::is_zero() const
{
    return nonzeros() == 0;
}

Vec ExactMatrix::apply(const Vec& x) const
{
    if (x.size() != cols_)
        throw AmbientMismatch("matrix-vector size mismatch");
    Vec y(rows_);
    for (size_t r = 0; r < rows_; ++r)
        for (const auto& [c, v] : data_[r])
            if (!x[c].is_zero())
                y[r] += v * x[c];
    return y;
}

ExactMatrix ExactMatrix::transpose() const
{
    ExactMatrix t(cols_, rows_);
    for (size_t r = 0; r < rows_; ++r)
        for (const auto& [c, v] : data_[r])
            t.data_[c][r] = v;
    return t;
}

ExactMatrix ExactMatrix::conj() const
{
    ExactMatrix t(rows_, cols_);
    for (size_t r = 0; r < rows_; ++r)
        for (const auto& [c, v] : data_[r])
            t.data_[r][c] = v.conj();
    return t;
}

ExactMatrix ExactMatrix::scaled(const Scalar& s) const
{
    ExactMatrix t(rows_, cols_);
    if (s.is_zero())
        return t;
    for (size_t r = 0; r < rows_; ++r)
        for (const auto& [c, v] : data_[r])
            t.data_[r][c] = v * s;
    return t;
}

ExactMatrix ExactMatrix::submatrix(const std::vector<size_t>& rows, const std::vector<size_t>& cols) const
{
    std::map<size_t, size_t> where;
    for (size_t k = 0; k < cols.size(); ++k)
        where[cols[k]] = k;
    ExactMatrix s(rows.size(), cols.size());
    for (size_t k = 0; k < rows.size(); ++k)
        for (const auto& [c, v] : data_[rows[k]]) {
            auto it = where.find(c);
            if (it != where.end())
                s.data_[k][it->second] = v;
        }
    return s;
}

Vec ExactMatrix::column(size_t c) const
{
    Vec v(rows_);
    for (size_t r = 0; r < rows_; ++r)
        v[r] = get(r, c);
    return v;
}

ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b)
{
    if (a.cols_ != b.rows_)
        throw AmbientMismatch("matrix product size mismatch");
    ExactMatrix p(a.rows_, b.cols_);
    for (size_t r = 0; r < a.rows_; ++r)
        for (const auto& [k, av] : a.data_[r])
            for (const auto& [c, bv] : b.data_[k])
                p.add(r, c, av * bv);
    return p;
}

ExactMatrix operator+(const ExactMatrix& a, const ExactMatrix& b)
{
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
        throw AmbientMismatch("matrix sum size mismatch");
    ExactMatrix s = a;
    for (size_t r = 0; r < b.rows_; ++r)
        for (const auto& [c, v] : b.data_[r])
            s.add(r, c, v);
    return s;
}

ExactMatrix operator-(const ExactMatrix& a, const ExactMatrix& b)
{
    return a + b.scaled(Scalar(-1));
}

bool operator==(const ExactMatrix& a, const ExactMatrix& b)
{
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

ExactMatrix ExactMatrix::hstack(const std::vector<ExactMatrix>& blocks)
{
    if (blocks.empty())
        return {};
    size_t rows = blocks[0].rows_, cols = 0;
    for (const auto& b : blocks) {
        if (b.rows_ != rows)
            throw AmbientMismatch("hstack row mismatch");
        cols += b.cols_;
    }
    ExactMatrix m(rows, cols);
    size_t off = 0;
    for (const auto& b : blocks) {
        for (size_t r = 0; r < rows; ++r)
            for (const auto& [c, v] : b.data_[r])
                m.data_[r][off + c] = v;
        off += b.cols_;
    }
    return m;
}

ExactMatrix ExactMatrix::vstack(const std::vector<ExactMatrix>& blocks)
{
    if (blocks.empty())
        return {};
    size_t cols = blocks[0].cols_;
    ExactMatrix m(0, cols);
    for (const auto& b : blocks) {
        if (b.cols_ != cols)
            throw AmbientMismatch("vstack column mismatch");
        for (const auto& r : b.data_)
            m.data_.push_back(r);
    }
    m.rows_ = m.data_.size();
    return m;
}

ExactMatrix ExactMatrix::block_diagonal(const std::vector<ExactMatrix>& blocks)
{
    size_t rows = 0, cols = 0;
    for (const auto& b : blocks) {
        rows += b.rows_;
        cols += b.cols_;
    }
    ExactMatrix m(rows, cols);
    size_t ro = 0, co = 0;
    for (const auto& b : blocks) {
        for (size_t r = 0; r < b.rows_; ++r)
            for (const auto& [c, v] : b.data_[r])
                m.data_[ro + r][co + c] = v;
        ro += b.rows_;
        co += b.cols_;
    }
    return m;
}

// ---- elimination ----

namespace {

constexpr size_t kDenseLimit = 64;

mpz_class row_denominator_lcm(const Vec& row)
{
    mpz_class l = 1;
    for (const auto& s : row) {
        if (!s.is_zero()) {
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), s.re().get_den_mpz_t());
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), s.im().get_den_mpz_t());
        }
    }
    return l;
}

// Back substitution turning an echelon list (pivots increasing) into reduced form.
void back_substitute(std::vector<Vec>& rows, const std::vector<size_t>& pivots)
{
    for (size_t k = rows.size(); k-- > 0;) {
        Scalar inv = rows[k][pivots[k]].inverse();
        for (auto& x : rows[k])
            if (!x.is_zero())
                x *= inv;
        for (size_t l = 0; l < k; ++l) {
            Scalar f = rows[l][pivots[k]];
            if (f.is_zero())
                continue;
            for (size_t c = pivots[k]; c < rows[l].size(); ++c)
                if (!rows[k][c].is_zero())
                    rows[l][c] -= f * rows[k][c];
        }
    }
}

// Fraction-free elimination on Gaussian-integer rows. Columns are already permuted.
Echelon dense_bareiss(std::vector<Vec> a, size_t cols)
{
    for (auto& row : a) {
        Scalar l(Rational(row_denominator_lcm(row)));
        for (auto& x : row)
            if (!x.is_zero())
                x *= l;
    }
    std::vector<size_t> origin(a.size());
    std::iota(origin.begin(), origin.end(), 0);

    Echelon e;
    Scalar prev(1);
    size_t r = 0;
    for (size_t c = 0; c < cols && r < a.size(); ++c) {
        size_t best = a.size();
        for (size_t i = r; i < a.size(); ++i)
            if (!a[i][c].is_zero() && (best == a.size() || origin[i] < origin[best]))
                best = i;
        if (best == a.size())
            continue;
        std::swap(a[r], a[best]);
        std::swap(origin[r], origin[best]);
        const Scalar p = a[r][c];
        for (size_t i = r + 1; i < a.size(); ++i) {
            const Scalar f = a[i][c];
            for (size_t j = c + 1; j < cols; ++j) {
                Scalar v = p * a[i][j];
                if (!f.is_zero() && !a[r][j].is_zero())
                    v -= f * a[r][j];
                if (!v.is_zero())
                    v /= prev;
                a[i][j] = v;
            }
            a[i][c] = Scalar();
        }
        prev = p;
        e.pivots.push_back(c);
        e.rows.push_back(a[r]);
        ++r;
    }
    back_substitute(e.rows, e.pivots);
    return e;
}

Echelon sparse_gauss(std::vector<ExactMatrix::Row> rows, size_t cols)
{
    std::vector<size_t> live(rows.size());
    std::iota(live.begin(), live.end(), 0);

    std::vector<ExactMatrix::Row> done;
    std::vector<size_t> pivots;
    while (true) {
        size_t lead = cols, pick = rows.size();
        for (size_t i : live) {
            if (rows[i].empty())
                continue;
            size_t c = rows[i].begin()->first;
            if (c < lead || (c == lead && i < pick)) {
                lead = c;
                pick = i;
            }
        }
        if (pick == rows.size())
            break;
        ExactMatrix::Row prow = rows[pick];
        Scalar inv = prow.begin()->second.inverse();
        for (auto& [c, v] : prow)
            v *= inv;
        std::vector<size_t> next;
        for (size_t i : live) {
            if (i == pick || rows[i].empty())
                continue;
            auto& row = rows[i];
            if (row.begin()->first == lead) {
                Scalar f = row.begin()->second;
                for (const auto& [c, v] : prow) {
                    auto it = row.find(c);
                    Scalar nv = (it == row.end() ? Scalar() : it->second) - f * v;
                    if (nv.is_zero()) {
                        if (it != row.end())
                            row.erase(it);
                    } else {
                        row[c] = nv;
                    }
                }
            }
            if (!row.empty())
                next.push_back(i);
        }
        live = std::move(next);
        done.push_back(std::move(prow));
        pivots.push_back(lead);
    }
    for (size_t k = done.size(); k-- > 0;) {
        for (size_t l = 0; l < k; ++l) {
            auto it = done[l].find(pivots[k]);
            if (it == done[l].end())
                continue;
            Scalar f = it->second;
            for (const auto& [c, v] : done[k]) {
                Scalar nv = done[l][c] - f * v;
                if (nv.is_zero())
                    done[l].erase(c);
                else
                    done[l][c] = nv;
            }
        }
    }
    Echelon e;
    e.pivots = pivots;
    for (const auto& r : done) {
        Vec v(cols);
        for (const auto& [c, x] : r)
            v[c] = x;
        e.rows.push_back(std::move(v));
    }
    return e;
}

// Eliminates with columns visited in the order given by perm; results use original indices.
Echelon reduce_permuted(const ExactMatrix& m, const std::vector<size_t>& perm)
{
    const size_t cols = m.cols();
    std::vector<size_t> slot(cols);
    for (size_t k = 0; k < cols; ++k)
        slot[perm[k]] = k;

    Echelon e;
    if (cols < kDenseLimit) {
        std::vector<Vec> a(m.rows(), Vec(cols));
        for (size_t r = 0; r < m.rows(); ++r)
            for (const auto& [c, v] : m.row(r))
                a[r][slot[c]] = v;
        e = dense_bareiss(std::move(a), cols);
    } else {
        std::vector<ExactMatrix::Row> a(m.rows());
        for (size_t r = 0; r < m.rows(); ++r)
            for (const auto& [c, v] : m.row(r))
                a[r][slot[c]] = v;
        e = sparse_gauss(std::move(a), cols);
    }
    for (auto& row : e.rows) {
        Vec orig(cols);
        for (size_t k = 0; k < cols; ++k)
            orig[perm[k]] = row[k];
        row = std::move(orig);
    }
    for (auto& p : e.pivots)
        p = perm[p];
    return e;
}

std::vector<size_t> column_order(size_t cols, PivotOrder order)
{
    std::vector<size_t> perm(cols);
    std::iota(perm.begin(), perm.end(), 0);
    if (order == PivotOrder::Rightmost)
        std::reverse(perm.begin(), perm.end());
    return perm;
}

} // namespace

Echelon reduce(const ExactMatrix& m, PivotOrder order)
{
    return reduce_permuted(m, column_order(m.cols(), order));
}

size_t rank(const ExactMatrix& m)
{
    return reduce(m).pivots.size();
}

Subspace kernel(const ExactMatrix& m)
{
    Echelon e = reduce(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (size_t p : e.pivots)
        is_pivot[p] = true;
    std::vector<Vec> basis;
    for (size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f])
            continue;
        Vec v(m.cols());
        v[f] = Scalar(1);
        for (size_t k = 0; k < e.rows.size(); ++k)
            v[e.pivots[k]] = -e.rows[k][f];
        basis.push_back(std::move(v));
    }
    return Subspace::span(m.cols(), basis);
}

Subspace image(const ExactMatrix& m)
{
    std::vector<Vec> cols;
    ExactMatrix t = m.transpose();
    for (size_t r = 0; r < t.rows(); ++r) {
        Vec v(m.rows());
        for (const auto& [c, x] : t.row(r))
            v[c] = x;
        cols.push_back(std::move(v));
    }
    return Subspace::span(m.rows(), cols);
}

Subspace intersect(const std::vector<Subspace>& spaces)
{
    if (spaces.empty())
        throw AmbientMismatch("intersection of no spaces");
    const size_t n = spaces[0].ambient_dim();
    std::vector<ExactMatrix> cuts;
    for (const auto& s : spaces) {
        if (s.ambient_dim() != n)
            throw AmbientMismatch("intersecting subspaces of different ambient dimension");
        cuts.push_back(s.annihilator());
    }
    ExactMatrix all = ExactMatrix::vstack(cuts);
    if (all.rows() == 0)
        return Subspace::full(n);
    return kernel(all);
}

size_t quotient_dim(const Subspace& num, const Subspace& den)
{
    if (num.ambient_dim() != den.ambient_dim())
        throw AmbientMismatch("quotient of subspaces of different ambient dimension");
    if (!num.contains(den))
        throw NotContained("denominator is not contained in numerator");
    return num.dim() - den.dim();
}

std::optional<Vec> solve(const ExactMatrix& m, const Vec& b, PivotOrder order)
{
    if (b.size() != m.rows())
        throw AmbientMismatch("right-hand side length differs from row count");
    ExactMatrix aug = ExactMatrix::hstack({m, ExactMatrix::from_columns({b}, m.rows())});
    std::vector<size_t> perm = column_order(m.cols(), order);
    perm.push_back(m.cols());
    Echelon e = reduce_permuted(aug, perm);
    Vec x(m.cols());
    for (size_t k = 0; k < e.rows.size(); ++k) {
        if (e.pivots[k] == m.cols())
            return std::nullopt;
        x[e.pivots[k]] = e.rows[k][m.cols()];
    }
    return x;
}

Subspace preimage(const ExactMatrix& m, const Subspace& target)
{
    if (target.ambient_dim() != m.rows())
        throw AmbientMismatch("preimage target lives in a different space");
    ExactMatrix cut = target.annihilator();
    if (cut.rows() == 0)
        return Subspace::full(m.cols());
    return kernel(cut * m);
}

Subspace image_of(const ExactMatrix& m, const Subspace& source)
{
    if (source.ambient_dim() != m.cols())
        throw AmbientMismatch("image source lives in a different space");
    std::vector<Vec> out;
    for (const auto& v : source.basis())
        out.push_back(m.apply(v));
    return Subspace::span(m.rows(), out);
}

// ---- Subspace ----

Subspace Subspace::full(size_t ambient)
{
    return Subspace::span(ambient, [&] {
        std::vector<Vec> e;
        for (size_t k = 0; k < ambient; ++k) {
            Vec v(ambient);
            v[k] = Scalar(1);
            e.push_back(std::move(v));
        }
        return e;
    }());
}

Subspace Subspace::span(size_t ambient, const std::vector<Vec>& vectors)
{
    Subspace s(ambient);
    if (vectors.empty())
        return s;
    for (const auto& v : vectors)
        if (v.size() != ambient)
            throw AmbientMismatch("vector does not match ambient dimension");
    Echelon e = reduce(ExactMatrix::from_rows(vectors, ambient));
    s.basis_ = std::move(e.rows);
    s.pivots_ = std::move(e.pivots);
    return s;
}

bool Subspace::contains(const Vec& v) const
{
    if (v.size() != ambient_)
        throw AmbientMismatch("vector does not match ambient dimension");
    Vec r = v;
    for (size_t k = 0; k < basis_.size(); ++k) {
        Scalar f = r[pivots_[k]];
        if (f.is_zero())
            continue;
        for (size_t c = 0; c < ambient_; ++c)
            if (!basis_[k][c].is_zero())
                r[c] -= f * basis_[k][c];
    }
    return is_zero(r);
}

bool Subspace::contains(const Subspace& other) const
{
    if (other.ambient_ != ambient_)
        throw AmbientMismatch("subspaces of different ambient dimension");
    for (const auto& v : other.basis_)
        if (!contains(v))
            return false;
    return true;
}

Subspace Subspace::sum(const Subspace& other) const
{
    if (other.ambient_ != ambient_)
        throw AmbientMismatch("subspaces of different ambient dimension");
    std::vector<Vec> all = basis_;
    all.insert(all.end(), other.basis_.begin(), other.basis_.end());
    return span(ambient_, all);
}

ExactMatrix Subspace::annihilator() const
{
    if (basis_.empty())
        return ExactMatrix::identity(ambient_);
    Subspace k = kernel(ExactMatrix::from_rows(basis_, ambient_));
    return ExactMatrix::from_rows(k.basis(), ambient_);
}

// ---- vectors ----

bool is_zero(const Vec& v)
{
    return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_zero(); });
}

Vec operator+(const Vec& a, const Vec& b)
{
    Vec r = a;
    for (size_t k = 0; k < b.size(); ++k)
        r[k] += b[k];
    return r;
}

Vec operator-(const Vec& a, const Vec& b)
{
    Vec r = a;
    for (size_t k = 0; k < b.size(); ++k)
        r[k] -= b[k];
    return r;
}

Vec operator*(const Scalar& s, const Vec& v)
{
    Vec r = v;
    for (auto& x : r)
        x *= s;
    return r;
}

} // namespace acx
