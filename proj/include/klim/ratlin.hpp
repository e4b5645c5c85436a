#pragma once

#include <cstddef>
#include <map>
#include <tuple>
#include <vector>

#include "klim/combination.hpp"
#include "klim/error.hpp"

namespace klim {

/// Sparse vector: (index, value) pairs with strictly increasing indices and no zeros.
using SparseVector = std::vector<std::pair<std::size_t, Rational>>;

/// y += a * x
void axpy(SparseVector& y, const Rational& a, const SparseVector& x);
SparseVector unit_vector(std::size_t index);

/// Column-major sparse matrix over Q. A matrix maps column space to row space,
/// so a differential C^D -> C^{D+1} has dim C^{D+1} rows.
class SparseMatrix {
public:
    using Triplet = std::tuple<std::size_t, std::size_t, Rational>;

    SparseMatrix() = default;
    SparseMatrix(std::size_t nrows, std::size_t ncols);
    static SparseMatrix from_rows(const std::vector<std::vector<Rational>>& rows);
    static SparseMatrix from_triplets(std::size_t nrows, std::size_t ncols, const std::vector<Triplet>& t);
    static SparseMatrix identity(std::size_t n);

    std::size_t nrows() const noexcept { return nrows_; }
    std::size_t ncols() const noexcept { return cols_.size(); }
    std::size_t nnz() const noexcept;

    /// Adds `v` to entry (r, c); the entry is dropped if it becomes zero.
    void add(std::size_t r, std::size_t c, const Rational& v);
    /// Replaces column c; `col` must be sorted, zero-free and in range.
    void set_column(std::size_t c, SparseVector col);
    Rational at(std::size_t r, std::size_t c) const;
    const SparseVector& column(std::size_t c) const { return cols_.at(c); }

    SparseMatrix transposed() const;
    bool is_zero() const noexcept;
    /// Row-major sorted (row, col, value) list.
    std::vector<Triplet> triplets() const;

    friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b);
    friend bool operator==(const SparseMatrix& a, const SparseMatrix& b);

private:
    std::size_t nrows_ = 0;
    std::vector<SparseVector> cols_;
};

/// Linearly independent sparse vectors of a common dimension.
class VectorSpaceBasis {
public:
    explicit VectorSpaceBasis(std::size_t dim = 0) : dim_(dim) {}
    /// Throws InvalidInput if the vectors are dependent or out of range.
    VectorSpaceBasis(std::size_t dim, std::vector<SparseVector> vectors);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return vectors_.size(); }
    bool empty() const noexcept { return vectors_.empty(); }
    const std::vector<SparseVector>& vectors() const noexcept { return vectors_; }
    const SparseVector& operator[](std::size_t i) const { return vectors_.at(i); }

private:
    std::size_t dim_;
    std::vector<SparseVector> vectors_;
};

/// Incremental echelon form keyed by each vector's last nonzero index.
class EchelonReducer {
public:
    explicit EchelonReducer(std::size_t dim) : dim_(dim) {}

    /// Reduces v against the stored pivots; returns the remainder.
    SparseVector reduce(SparseVector v) const;
    /// Adds v; returns false (and stores nothing) if v is already in the span.
    bool insert(SparseVector v);
    bool in_span(const SparseVector& v) const { return reduce(v).empty(); }
    std::size_t rank() const noexcept { return pivots_.size(); }
    std::size_t dim() const noexcept { return dim_; }

private:
    std::size_t dim_;
    std::map<std::size_t, SparseVector> pivots_;
};

/// Result of one column reduction of a matrix.
struct ColumnReduction {
    std::size_t rank = 0;
    std::vector<SparseVector> kernel; ///< only filled when requested
    std::vector<SparseVector> image;  ///< reduced nonzero columns
};

ColumnReduction reduce_columns(const SparseMatrix& m, bool want_kernel);

std::size_t rank(const SparseMatrix& m);
VectorSpaceBasis kernel_basis(const SparseMatrix& m);
VectorSpaceBasis image_basis(const SparseMatrix& m);
/// dim ker(d_out) - rank(d_in) for C --d_in--> M --d_out--> C'. Rejects shape
/// mismatches and non-zero composites.
std::size_t homology_dim(const SparseMatrix& d_out, const SparseMatrix& d_in);
bool in_span(const SparseVector& v, const VectorSpaceBasis& b);
/// Vectors from `cycles` completing `boundaries` to a basis of span(cycles).
VectorSpaceBasis quotient_representatives(const VectorSpaceBasis& cycles, const VectorSpaceBasis& boundaries);

} // namespace klim
