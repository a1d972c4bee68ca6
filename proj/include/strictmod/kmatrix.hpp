#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "strictmod/galois_field.hpp"

namespace strictmod {

/// Dense matrix over a finite field; used for residue matrices over k and for
/// the F_p-linear systems behind the semilinear solvers.
class KMatrix {
public:
    using Code = GaloisField::Code;

    KMatrix() = default;
    KMatrix(FieldPtr f, std::size_t rows, std::size_t cols)
        : field_(std::move(f)), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    static KMatrix identity(FieldPtr f, std::size_t n)
    {
        KMatrix m(std::move(f), n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    const FieldPtr& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Code& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    Code operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<Code> row(std::size_t i) const
    {
        return {data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
    }

    bool is_zero() const
    {
        return std::all_of(data_.begin(), data_.end(), [](Code c) { return c == 0; });
    }

    friend bool operator==(const KMatrix& a, const KMatrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    friend KMatrix operator*(const KMatrix& a, const KMatrix& b)
    {
        if (a.cols_ != b.rows_)
            throw Error(ErrorKind::Mismatch, "matrix product shape mismatch");
        const GaloisField& F = *a.field_;
        KMatrix out(a.field_, a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                Code x = a(i, k);
                if (x == 0)
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    if (b(k, j) != 0)
                        out(i, j) = F.add(out(i, j), F.mul(x, b(k, j)));
            }
        return out;
    }

    friend KMatrix operator+(const KMatrix& a, const KMatrix& b)
    {
        KMatrix out = a;
        for (std::size_t i = 0; i < out.data_.size(); ++i)
            out.data_[i] = a.field_->add(a.data_[i], b.data_[i]);
        return out;
    }

    friend KMatrix operator-(const KMatrix& a, const KMatrix& b)
    {
        KMatrix out = a;
        for (std::size_t i = 0; i < out.data_.size(); ++i)
            out.data_[i] = a.field_->sub(a.data_[i], b.data_[i]);
        return out;
    }

    KMatrix transpose() const
    {
        KMatrix t(field_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    /// Entrywise x -> x^q.
    KMatrix frobenius(std::uint64_t q) const
    {
        KMatrix out = *this;
        for (auto& c : out.data_)
            c = field_->pow(c, q);
        return out;
    }

    /// Entrywise x -> x^{1/q}.
    KMatrix inverse_frobenius(std::uint64_t q) const
    {
        KMatrix out = *this;
        for (auto& c : out.data_)
            c = field_->root(c, q);
        return out;
    }

    /// In-place reduced row echelon form; returns pivot columns.
    std::vector<std::size_t> rref()
    {
        const GaloisField& F = *field_;
        std::vector<std::size_t> pivots;
        std::size_t r = 0;
        for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
            std::size_t sel = rows_;
            for (std::size_t i = r; i < rows_; ++i)
                if ((*this)(i, c) != 0) {
                    sel = i;
                    break;
                }
            if (sel == rows_)
                continue;
            if (sel != r)
                for (std::size_t j = 0; j < cols_; ++j)
                    std::swap((*this)(sel, j), (*this)(r, j));
            Code inv = F.inv((*this)(r, c));
            for (std::size_t j = c; j < cols_; ++j)
                (*this)(r, j) = F.mul((*this)(r, j), inv);
            for (std::size_t i = 0; i < rows_; ++i) {
                if (i == r)
                    continue;
                Code f = (*this)(i, c);
                if (f == 0)
                    continue;
                for (std::size_t j = c; j < cols_; ++j)
                    if ((*this)(r, j) != 0)
                        (*this)(i, j) = F.sub((*this)(i, j), F.mul(f, (*this)(r, j)));
            }
            pivots.push_back(c);
            ++r;
        }
        return pivots;
    }

    std::size_t rank() const
    {
        KMatrix t = *this;
        return t.rref().size();
    }

    /// Basis of {x : A x = 0}, as columns of the returned matrix.
    KMatrix kernel() const
    {
        KMatrix t = *this;
        auto piv = t.rref();
        std::vector<bool> is_piv(cols_, false);
        for (auto c : piv)
            is_piv[c] = true;
        std::vector<std::size_t> free;
        for (std::size_t c = 0; c < cols_; ++c)
            if (!is_piv[c])
                free.push_back(c);
        const GaloisField& F = *field_;
        KMatrix K(field_, cols_, free.size());
        for (std::size_t k = 0; k < free.size(); ++k) {
            K(free[k], k) = 1;
            for (std::size_t r = 0; r < piv.size(); ++r)
                K(piv[r], k) = F.neg(t(r, free[k]));
        }
        return K;
    }

    /// Basis of {x : x A = 0}, as rows.
    KMatrix left_kernel() const { return transpose().kernel().transpose(); }

    /// Some x with A x = b, if one exists.
    std::optional<std::vector<Code>> solve(const std::vector<Code>& b) const
    {
        if (b.size() != rows_)
            throw Error(ErrorKind::Mismatch, "right-hand side length mismatch");
        KMatrix aug(field_, rows_, cols_ + 1);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j)
                aug(i, j) = (*this)(i, j);
            aug(i, cols_) = b[i];
        }
        auto piv = aug.rref();
        std::vector<Code> x(cols_, 0);
        for (std::size_t r = 0; r < piv.size(); ++r) {
            if (piv[r] == cols_)
                return std::nullopt;
            x[piv[r]] = aug(r, cols_);
        }
        return x;
    }

    std::optional<KMatrix> inverse() const
    {
        if (rows_ != cols_)
            throw Error(ErrorKind::Mismatch, "inverse of a non-square matrix");
        std::size_t n = rows_;
        KMatrix aug(field_, n, 2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j)
                aug(i, j) = (*this)(i, j);
            aug(i, n + i) = 1;
        }
        auto piv = aug.rref();
        if (piv.size() < n || piv[n - 1] != n - 1)
            return std::nullopt;
        KMatrix inv(field_, n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                inv(i, j) = aug(i, n + j);
        return inv;
    }

    /// Row-space basis (rows of the rref, zero rows dropped).
    KMatrix row_space() const
    {
        KMatrix t = *this;
        auto piv = t.rref();
        KMatrix out(field_, piv.size(), cols_);
        for (std::size_t i = 0; i < piv.size(); ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                out(i, j) = t(i, j);
        return out;
    }

    static KMatrix vstack(const KMatrix& a, const KMatrix& b)
    {
        if (a.rows_ == 0)
            return b;
        if (b.rows_ == 0)
            return a;
        if (a.cols_ != b.cols_)
            throw Error(ErrorKind::Mismatch, "vstack column mismatch");
        KMatrix out(a.field_, a.rows_ + b.rows_, a.cols_);
        std::copy(a.data_.begin(), a.data_.end(), out.data_.begin());
        std::copy(b.data_.begin(), b.data_.end(), out.data_.begin() + static_cast<std::ptrdiff_t>(a.data_.size()));
        return out;
    }

private:
    FieldPtr field_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Code> data_;
};

} // namespace strictmod
