#include "klim/ratlin.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

namespace klim {

void axpy(SparseVector& y, const Rational& a, const SparseVector& x)
{
    if (a == 0 || x.empty())
        return;
    SparseVector out;
    out.reserve(y.size() + x.size());
    auto i = y.begin();
    auto j = x.begin();
    while (i != y.end() || j != x.end()) {
        if (j == x.end() || (i != y.end() && i->first < j->first)) {
            out.push_back(std::move(*i));
            ++i;
        } else if (i == y.end() || j->first < i->first) {
            out.emplace_back(j->first, a * j->second);
            ++j;
        } else {
            Rational v = i->second + a * j->second;
            if (v != 0)
                out.emplace_back(i->first, std::move(v));
            ++i;
            ++j;
        }
    }
    y = std::move(out);
}

SparseVector unit_vector(std::size_t index)
{
    return {{index, Rational(1)}};
}

SparseMatrix::SparseMatrix(std::size_t nrows, std::size_t ncols) : nrows_(nrows), cols_(ncols) {}

SparseMatrix SparseMatrix::from_rows(const std::vector<std::vector<Rational>>& rows)
{
    const std::size_t nc = rows.empty() ? 0 : rows.front().size();
    SparseMatrix m(rows.size(), nc);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != nc)
            throw InvalidInput("from_rows: ragged rows");
        for (std::size_t c = 0; c < nc; ++c)
            m.add(r, c, rows[r][c]);
    }
    return m;
}

SparseMatrix SparseMatrix::from_triplets(std::size_t nrows, std::size_t ncols, const std::vector<Triplet>& t)
{
    SparseMatrix m(nrows, ncols);
    for (const auto& [r, c, v] : t)
        m.add(r, c, v);
    return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n)
{
    SparseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.cols_[i] = unit_vector(i);
    return m;
}

std::size_t SparseMatrix::nnz() const noexcept
{
    std::size_t n = 0;
    for (const SparseVector& c : cols_)
        n += c.size();
    return n;
}

void SparseMatrix::add(std::size_t r, std::size_t c, const Rational& v)
{
    if (r >= nrows_ || c >= cols_.size())
        throw InvalidInput("matrix index out of range");
    if (v == 0)
        return;
    SparseVector& col = cols_[c];
    auto it = std::lower_bound(col.begin(), col.end(), r, [](const auto& e, std::size_t key) { return e.first < key; });
    if (it != col.end() && it->first == r) {
        it->second += v;
        if (it->second == 0)
            col.erase(it);
    } else {
        col.emplace(it, r, v);
    }
}

void SparseMatrix::set_column(std::size_t c, SparseVector col)
{
    if (c >= cols_.size() || (!col.empty() && col.back().first >= nrows_))
        throw InvalidInput("set_column: index out of range");
    cols_[c] = std::move(col);
}

Rational SparseMatrix::at(std::size_t r, std::size_t c) const
{
    const SparseVector& col = cols_.at(c);
    auto it = std::lower_bound(col.begin(), col.end(), r, [](const auto& e, std::size_t key) { return e.first < key; });
    return (it != col.end() && it->first == r) ? it->second : Rational(0);
}

SparseMatrix SparseMatrix::transposed() const
{
    SparseMatrix t(ncols(), nrows_);
    for (std::size_t c = 0; c < cols_.size(); ++c)
        for (const auto& [r, v] : cols_[c])
            t.cols_[r].emplace_back(c, v);
    return t;
}

bool SparseMatrix::is_zero() const noexcept
{
    return std::all_of(cols_.begin(), cols_.end(), [](const SparseVector& c) { return c.empty(); });
}

std::vector<SparseMatrix::Triplet> SparseMatrix::triplets() const
{
    std::vector<Triplet> out;
    const SparseMatrix t = transposed();
    for (std::size_t r = 0; r < t.cols_.size(); ++r)
        for (const auto& [c, v] : t.cols_[r])
            out.emplace_back(r, c, v);
    return out;
}

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b)
{
    if (a.ncols() != b.nrows())
        throw InvalidInput("matrix product: shape mismatch");
    SparseMatrix out(a.nrows(), b.ncols());
    for (std::size_t c = 0; c < b.ncols(); ++c) {
        SparseVector acc;
        for (const auto& [k, v] : b.cols_[c])
            axpy(acc, v, a.cols_[k]);
        out.cols_[c] = std::move(acc);
    }
    return out;
}

bool operator==(const SparseMatrix& a, const SparseMatrix& b)
{
    return a.nrows_ == b.nrows_ && a.cols_ == b.cols_;
}

VectorSpaceBasis::VectorSpaceBasis(std::size_t dim, std::vector<SparseVector> vectors)
    : dim_(dim), vectors_(std::move(vectors))
{
    EchelonReducer check(dim_);
    for (const SparseVector& v : vectors_) {
        if (!v.empty() && v.back().first >= dim_)
            throw InvalidInput("basis vector out of range");
        if (!check.insert(v))
            throw InvalidInput("basis vectors are linearly dependent");
    }
}

SparseVector EchelonReducer::reduce(SparseVector v) const
{
    while (!v.empty()) {
        auto it = pivots_.find(v.back().first);
        if (it == pivots_.end())
            break;
        const SparseVector& p = it->second;
        Rational factor = -v.back().second / p.back().second;
        axpy(v, factor, p);
    }
    return v;
}

bool EchelonReducer::insert(SparseVector v)
{
    if (!v.empty() && v.back().first >= dim_)
        throw InvalidInput("vector out of range");
    v = reduce(std::move(v));
    if (v.empty())
        return false;
    const std::size_t pivot = v.back().first;
    pivots_.emplace(pivot, std::move(v));
    return true;
}

ColumnReduction reduce_columns(const SparseMatrix& m, bool want_kernel)
{
    ColumnReduction out;
    // pivot row -> index into `reduced`
    std::unordered_map<std::size_t, std::size_t> owner;
    std::vector<SparseVector> reduced;
    std::vector<SparseVector> ops;
    reduced.reserve(m.ncols());
    for (std::size_t c = 0; c < m.ncols(); ++c) {
        SparseVector col = m.column(c);
        SparseVector op;
        if (want_kernel)
            op = unit_vector(c);
        while (!col.empty()) {
            auto it = owner.find(col.back().first);
            if (it == owner.end())
                break;
            const SparseVector& p = reduced[it->second];
            Rational factor = -col.back().second / p.back().second;
            axpy(col, factor, p);
            if (want_kernel)
                axpy(op, factor, ops[it->second]);
        }
        if (col.empty()) {
            if (want_kernel)
                out.kernel.push_back(std::move(op));
            continue;
        }
        owner.emplace(col.back().first, reduced.size());
        reduced.push_back(std::move(col));
        if (want_kernel)
            ops.push_back(std::move(op));
    }
    out.rank = reduced.size();
    out.image = std::move(reduced);
    return out;
}

std::size_t rank(const SparseMatrix& m)
{
    return reduce_columns(m, false).rank;
}

VectorSpaceBasis kernel_basis(const SparseMatrix& m)
{
    ColumnReduction r = reduce_columns(m, true);
    return VectorSpaceBasis(m.ncols(), std::move(r.kernel));
}

VectorSpaceBasis image_basis(const SparseMatrix& m)
{
    ColumnReduction r = reduce_columns(m, false);
    return VectorSpaceBasis(m.nrows(), std::move(r.image));
}

std::size_t homology_dim(const SparseMatrix& d_out, const SparseMatrix& d_in)
{
    if (d_out.ncols() != d_in.nrows())
        throw InvalidInput("homology_dim: middle dimensions differ (" + std::to_string(d_out.ncols()) + " vs " +
                           std::to_string(d_in.nrows()) + ")");
    if (!(d_out * d_in).is_zero())
        throw VerificationFailure("homology_dim: composite of differentials is non-zero");
    const std::size_t kernel = d_out.ncols() - rank(d_out);
    return kernel - rank(d_in);
}

bool in_span(const SparseVector& v, const VectorSpaceBasis& b)
{
    EchelonReducer e(b.dim());
    for (const SparseVector& x : b.vectors())
        e.insert(x);
    return e.in_span(v);
}

VectorSpaceBasis quotient_representatives(const VectorSpaceBasis& cycles, const VectorSpaceBasis& boundaries)
{
    if (cycles.dim() != boundaries.dim())
        throw InvalidInput("quotient_representatives: dimension mismatch");
    EchelonReducer cyc(cycles.dim());
    for (const SparseVector& v : cycles.vectors())
        cyc.insert(v);
    EchelonReducer e(cycles.dim());
    for (const SparseVector& v : boundaries.vectors()) {
        if (!cyc.in_span(v))
            throw InvalidInput("quotient_representatives: a boundary is not in the span of the cycles");
        e.insert(v);
    }
    std::vector<SparseVector> reps;
    for (const SparseVector& v : cycles.vectors())
        if (e.insert(v))
            reps.push_back(v);
    return VectorSpaceBasis(cycles.dim(), std::move(reps));
}

} // namespace klim
