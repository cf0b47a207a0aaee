#pragma once

#include "acx/scalar.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace acx {

using Vec = std::vector<Scalar>;

struct AmbientMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotContained : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Row-wise sparse matrix; absent entries are zero.
class ExactMatrix {
public:
    using Row = std::map<size_t, Scalar>;

    ExactMatrix() = default;
    ExactMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows) {}

    static ExactMatrix identity(size_t n);
    static ExactMatrix from_rows(const std::vector<Vec>& rows, size_t cols);
    static ExactMatrix from_columns(const std::vector<Vec>& cols, size_t rows);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    Scalar get(size_t r, size_t c) const;
    void set(size_t r, size_t c, const Scalar& v);
    void add(size_t r, size_t c, const Scalar& v);
    const Row& row(size_t r) const { return data_[r]; }
    size_t nonzeros() const;
    bool is_zero() const;

    Vec apply(const Vec& x) const;
    ExactMatrix transpose() const;
    ExactMatrix conj() const;
    ExactMatrix adjoint() const { return conj().transpose(); }
    ExactMatrix scaled(const Scalar& s) const;
    ExactMatrix submatrix(const std::vector<size_t>& rows, const std::vector<size_t>& cols) const;
    Vec column(size_t c) const;

    friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b);
    friend ExactMatrix operator+(const ExactMatrix& a, const ExactMatrix& b);
    friend ExactMatrix operator-(const ExactMatrix& a, const ExactMatrix& b);
    friend bool operator==(const ExactMatrix& a, const ExactMatrix& b);

    static ExactMatrix hstack(const std::vector<ExactMatrix>& blocks);
    static ExactMatrix vstack(const std::vector<ExactMatrix>& blocks);
    static ExactMatrix block_diagonal(const std::vector<ExactMatrix>& blocks);

private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    std::vector<Row> data_;
};

// Linear subspace of an ambient coordinate space, kept in reduced row-echelon form.
class Subspace {
public:
    explicit Subspace(size_t ambient = 0) : ambient_(ambient) {}

    static Subspace full(size_t ambient);
    static Subspace span(size_t ambient, const std::vector<Vec>& vectors);

    size_t ambient_dim() const { return ambient_; }
    size_t dim() const { return basis_.size(); }
    const std::vector<Vec>& basis() const { return basis_; }
    const std::vector<size_t>& pivots() const { return pivots_; }

    bool contains(const Vec& v) const;
    bool contains(const Subspace& other) const;
    Subspace sum(const Subspace& other) const;

    // Rows of the returned matrix cut out this subspace as a kernel.
    ExactMatrix annihilator() const;

    friend bool operator==(const Subspace& a, const Subspace& b) { return a.ambient_ == b.ambient_ && a.basis_ == b.basis_; }

private:
    size_t ambient_;
    std::vector<Vec> basis_;
    std::vector<size_t> pivots_;
};

enum class PivotOrder { Leftmost, Rightmost };

struct Echelon {
    std::vector<Vec> rows;      // reduced rows, one per pivot, dense
    std::vector<size_t> pivots; // pivot column of each row
};

// Reduced echelon form under the given column preference.
Echelon reduce(const ExactMatrix& m, PivotOrder order = PivotOrder::Leftmost);

size_t rank(const ExactMatrix& m);
Subspace kernel(const ExactMatrix& m);
Subspace image(const ExactMatrix& m);
Subspace intersect(const std::vector<Subspace>& spaces);
size_t quotient_dim(const Subspace& num, const Subspace& den);
std::optional<Vec> solve(const ExactMatrix& m, const Vec& b, PivotOrder order = PivotOrder::Leftmost);

// {x : m x in target}
Subspace preimage(const ExactMatrix& m, const Subspace& target);
// m applied to every vector of the source
Subspace image_of(const ExactMatrix& m, const Subspace& source);

bool is_zero(const Vec& v);
Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(const Scalar& s, const Vec& v);

} // namespace acx
