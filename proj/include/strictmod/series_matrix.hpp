#pragma once

#include <optional>
#include <vector>

#include "strictmod/kmatrix.hpp"
#include "strictmod/series.hpp"

namespace strictmod {

class SeriesMatrix {
public:
    using Code = GaloisField::Code;

    SeriesMatrix() = default;
    SeriesMatrix(FieldPtr f, std::size_t rows, std::size_t cols, int prec)
        : field_(f), rows_(rows), cols_(cols), data_(rows * cols, Series::zero(f, prec)) {}

    static SeriesMatrix identity(FieldPtr f, std::size_t n, int prec)
    {
        SeriesMatrix m(f, n, n, prec);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = Series::one(f, prec);
        return m;
    }

    /// Lift of a residue matrix by constant series.
    static SeriesMatrix lift(const KMatrix& a, int prec)
    {
        SeriesMatrix m(a.field(), a.rows(), a.cols(), prec);
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j)
                m(i, j) = Series::constant(a.field(), a(i, j), prec);
        return m;
    }

    const FieldPtr& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Series& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Series& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    friend SeriesMatrix operator*(const SeriesMatrix& a, const SeriesMatrix& b)
    {
        if (a.cols_ != b.rows_)
            throw Error(ErrorKind::Mismatch, "matrix product shape mismatch");
        SeriesMatrix out(a.field_, a.rows_, b.cols_, 0);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < b.cols_; ++j) {
                Series acc = a(i, 0) * b(0, j);
                for (std::size_t k = 1; k < a.cols_; ++k)
                    acc = acc + a(i, k) * b(k, j);
                out(i, j) = acc;
            }
        return out;
    }

    friend SeriesMatrix operator+(const SeriesMatrix& a, const SeriesMatrix& b) { return zip(a, b, false); }
    friend SeriesMatrix operator-(const SeriesMatrix& a, const SeriesMatrix& b) { return zip(a, b, true); }

    SeriesMatrix operator-() const
    {
        SeriesMatrix out = *this;
        for (auto& s : out.data_)
            s = -s;
        return out;
    }

    SeriesMatrix scaled(const Series& s) const
    {
        SeriesMatrix out = *this;
        for (auto& x : out.data_)
            x = x * s;
        return out;
    }

    SeriesMatrix sigma(std::uint64_t q) const
    {
        SeriesMatrix out = *this;
        for (auto& x : out.data_)
            x = x.sigma(q);
        return out;
    }

    SeriesMatrix transpose() const
    {
        SeriesMatrix t(field_, cols_, rows_, 0);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    SeriesMatrix truncated(int prec) const
    {
        SeriesMatrix out = *this;
        for (auto& x : out.data_)
            x = x.truncated(prec);
        return out;
    }

    SeriesMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const
    {
        SeriesMatrix out(field_, nr, nc, 0);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j)
                out(i, j) = (*this)(r0 + i, c0 + j);
        return out;
    }

    void set_block(std::size_t r0, std::size_t c0, const SeriesMatrix& b)
    {
        for (std::size_t i = 0; i < b.rows_; ++i)
            for (std::size_t j = 0; j < b.cols_; ++j)
                (*this)(r0 + i, c0 + j) = b(i, j);
    }

    bool is_zero() const
    {
        return std::all_of(data_.begin(), data_.end(), [](const Series& s) { return s.is_zero(); });
    }

    bool is_integral() const
    {
        return std::all_of(data_.begin(), data_.end(), [](const Series& s) { return s.is_zero() || s.is_integral(); });
    }

    int min_valuation() const
    {
        int v = INT_MAX;
        for (const auto& s : data_)
            v = std::min(v, s.valuation());
        return v;
    }

    int min_precision() const
    {
        int p = INT_MAX;
        for (const auto& s : data_)
            p = std::min(p, s.precision());
        return p;
    }

    /// Entrywise reduction mod pi; entries must be integral.
    KMatrix residue() const
    {
        KMatrix out(field_, rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                out(i, j) = (*this)(i, j).residue();
        return out;
    }

    friend bool agree(const SeriesMatrix& a, const SeriesMatrix& b)
    {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            return false;
        for (std::size_t i = 0; i < a.data_.size(); ++i)
            if (!agree(a.data_[i], b.data_[i]))
                return false;
        return true;
    }

    friend bool operator==(const SeriesMatrix& a, const SeriesMatrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    static SeriesMatrix block_diag(const SeriesMatrix& a, const SeriesMatrix& b, int prec)
    {
        FieldPtr f = a.field_ ? a.field_ : b.field_;
        SeriesMatrix out(f, a.rows_ + b.rows_, a.cols_ + b.cols_, prec);
        out.set_block(0, 0, a);
        out.set_block(a.rows_, a.cols_, b);
        return out;
    }

    static SeriesMatrix vstack(const SeriesMatrix& a, const SeriesMatrix& b)
    {
        SeriesMatrix out(a.field_ ? a.field_ : b.field_, a.rows_ + b.rows_, std::max(a.cols_, b.cols_), 0);
        out.set_block(0, 0, a);
        out.set_block(a.rows_, 0, b);
        return out;
    }

    static SeriesMatrix hstack(const SeriesMatrix& a, const SeriesMatrix& b)
    {
        SeriesMatrix out(a.field_ ? a.field_ : b.field_, std::max(a.rows_, b.rows_), a.cols_ + b.cols_, 0);
        out.set_block(0, 0, a);
        out.set_block(0, a.cols_, b);
        return out;
    }

    std::string to_string() const
    {
        std::string s = "[";
        for (std::size_t i = 0; i < rows_; ++i) {
            s += i ? ", [" : "[";
            for (std::size_t j = 0; j < cols_; ++j)
                s += (j ? ", " : "") + (*this)(i, j).to_string();
            s += "]";
        }
        return s + "]";
    }

private:
    FieldPtr field_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Series> data_;

    static SeriesMatrix zip(const SeriesMatrix& a, const SeriesMatrix& b, bool subtract)
    {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw Error(ErrorKind::Mismatch, "matrix sum shape mismatch");
        SeriesMatrix out = a;
        for (std::size_t i = 0; i < a.data_.size(); ++i)
            out.data_[i] = subtract ? a.data_[i] - b.data_[i] : a.data_[i] + b.data_[i];
        return out;
    }
};

struct DetResult {
    Series value;
    bool structural_zero = false; // a row or column is entirely zero
};

/// Determinant by elimination with minimal-valuation pivots.
inline DetResult mat_det(const SeriesMatrix& A)
{
    if (!A.is_square())
        throw Error(ErrorKind::Mismatch, "determinant of a non-square matrix");
    std::size_t n = A.rows();
    int prec = A.min_precision();
    DetResult out;
    for (std::size_t i = 0; i < n; ++i) {
        bool row_zero = true, col_zero = true;
        for (std::size_t j = 0; j < n; ++j) {
            row_zero = row_zero && A(i, j).is_zero();
            col_zero = col_zero && A(j, i).is_zero();
        }
        if (row_zero || col_zero) {
            out.structural_zero = true;
            out.value = Series::zero(A.field(), prec);
            return out;
        }
    }
    SeriesMatrix M = A;
    Series det = Series::one(A.field(), INT_MAX / 4);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = n;
        for (std::size_t i = k; i < n; ++i)
            if (!M(i, k).is_zero() && (piv == n || M(i, k).valuation() < M(piv, k).valuation()))
                piv = i;
        if (piv == n) {
            int p = INT_MAX;
            for (std::size_t i = k; i < n; ++i)
                p = std::min(p, M(i, k).precision());
            out.value = Series::zero(A.field(), std::min(p + det.valuation(), det.precision()));
            return out;
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(M(piv, j), M(k, j));
            det = -det;
        }
        det = det * M(k, k);
        Series inv = M(k, k).inverse();
        for (std::size_t i = k + 1; i < n; ++i) {
            if (M(i, k).is_zero())
                continue;
            Series f = M(i, k) * inv;
            for (std::size_t j = k + 1; j < n; ++j)
                M(i, j) = M(i, j) - f * M(k, j);
        }
    }
    out.value = det;
    return out;
}

/// Inverse over K; nullopt when some pivot column is zero to precision.
inline std::optional<SeriesMatrix> mat_inverse(const SeriesMatrix& A)
{
    if (!A.is_square())
        throw Error(ErrorKind::Mismatch, "inverse of a non-square matrix");
    std::size_t n = A.rows();
    int prec = A.min_precision();
    SeriesMatrix M = A;
    SeriesMatrix R = SeriesMatrix::identity(A.field(), n, std::max(prec, 1) * 4 + 64);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = n;
        for (std::size_t i = k; i < n; ++i)
            if (!M(i, k).is_zero() && (piv == n || M(i, k).valuation() < M(piv, k).valuation()))
                piv = i;
        if (piv == n)
            return std::nullopt;
        if (piv != k)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(M(piv, j), M(k, j));
                std::swap(R(piv, j), R(k, j));
            }
        Series inv = M(k, k).inverse();
        for (std::size_t j = 0; j < n; ++j) {
            M(k, j) = M(k, j) * inv;
            R(k, j) = R(k, j) * inv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || M(i, k).is_zero())
                continue;
            Series f = M(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                M(i, j) = M(i, j) - f * M(k, j);
                R(i, j) = R(i, j) - f * R(k, j);
            }
        }
    }
    return R;
}

struct SolveResult {
    SeriesMatrix X;
    bool integral = false;
};

/// Solves X * A = target over K.
inline SolveResult mat_solve_left(const SeriesMatrix& A, const SeriesMatrix& target)
{
    auto inv = mat_inverse(A);
    if (!inv)
        throw Error(ErrorKind::Precision, "matrix is singular to working precision");
    SolveResult r;
    r.X = target * *inv;
    r.integral = r.X.is_integral();
    return r;
}

/// Valuations of the elementary divisors (full-pivot elimination over O).
/// Entries that are zero to precision are reported as their precision.
inline std::vector<int> smith_valuations(const SeriesMatrix& A)
{
    SeriesMatrix M = A;
    std::size_t r = A.rows(), c = A.cols();
    std::vector<int> out;
    for (std::size_t k = 0; k < std::min(r, c); ++k) {
        std::size_t pi = r, pj = c;
        int best = INT_MAX;
        for (std::size_t i = k; i < r; ++i)
            for (std::size_t j = k; j < c; ++j)
                if (!M(i, j).is_zero() && M(i, j).valuation() < best) {
                    best = M(i, j).valuation();
                    pi = i;
                    pj = j;
                }
        if (pi == r) {
            for (; k < std::min(r, c); ++k)
                out.push_back(M(k, k).precision());
            break;
        }
        for (std::size_t j = 0; j < c; ++j)
            std::swap(M(pi, j), M(k, j));
        for (std::size_t i = 0; i < r; ++i)
            std::swap(M(i, pj), M(i, k));
        out.push_back(best);
        Series inv = M(k, k).inverse();
        for (std::size_t i = k + 1; i < r; ++i) {
            if (M(i, k).is_zero())
                continue;
            Series f = M(i, k) * inv;
            for (std::size_t j = k; j < c; ++j)
                M(i, j) = M(i, j) - f * M(k, j);
        }
        for (std::size_t j = k + 1; j < c; ++j)
            M(k, j) = Series::zero(A.field(), M(k, j).precision());
    }
    return out;
}

/// An r x n integral matrix (r <= n) extends to a unimodular one iff its residue has rank r.
inline bool is_pure_embedding_matrix(const SeriesMatrix& A)
{
    if (!A.is_integral() || A.rows() > A.cols())
        return false;
    return A.residue().rank() == A.rows();
}

/// An n x r integral matrix (r <= n) is onto O^r iff its residue has rank r.
inline bool is_surjection_matrix(const SeriesMatrix& A)
{
    if (!A.is_integral() || A.cols() > A.rows())
        return false;
    return A.residue().rank() == A.cols();
}

inline bool is_unimodular(const SeriesMatrix& A)
{
    return A.is_square() && A.is_integral() && A.residue().rank() == A.rows();
}

} // namespace strictmod
