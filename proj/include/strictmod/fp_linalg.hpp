#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "strictmod/error.hpp"

namespace strictmod {

/// Dense linear algebra over a prime field F_p with plain modular ints.
class FpMatrix {
public:
    FpMatrix() = default;
    FpMatrix(int p, std::size_t rows, std::size_t cols) : p_(p), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

    int p() const { return p_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    int& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    int operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::vector<int> row(std::size_t i) const
    {
        return {a_.begin() + static_cast<std::ptrdiff_t>(i * cols_), a_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
    }

    static FpMatrix from_rows(int p, const std::vector<std::vector<int>>& rows, std::size_t cols)
    {
        FpMatrix m(p, rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < cols && j < rows[i].size(); ++j)
                m(i, j) = rows[i][j];
        return m;
    }

    /// In-place reduced row echelon form over the first `limit` columns; returns pivot columns.
    std::vector<std::size_t> rref(std::size_t limit = SIZE_MAX)
    {
        limit = std::min(limit, cols_);
        std::vector<std::size_t> piv;
        std::size_t r = 0;
        for (std::size_t c = 0; c < limit && r < rows_; ++c) {
            std::size_t sel = rows_;
            for (std::size_t i = r; i < rows_; ++i)
                if ((*this)(i, c)) {
                    sel = i;
                    break;
                }
            if (sel == rows_)
                continue;
            if (sel != r)
                for (std::size_t j = 0; j < cols_; ++j)
                    std::swap((*this)(sel, j), (*this)(r, j));
            int inv = inverse((*this)(r, c));
            if (inv != 1)
                for (std::size_t j = c; j < cols_; ++j)
                    (*this)(r, j) = (*this)(r, j) * inv % p_;
            int* pr = &a_[r * cols_];
            for (std::size_t i = 0; i < rows_; ++i) {
                if (i == r)
                    continue;
                int f = (*this)(i, c);
                if (!f)
                    continue;
                int* pi = &a_[i * cols_];
                int g = p_ - f;
                for (std::size_t j = c; j < cols_; ++j)
                    if (pr[j])
                        pi[j] = (pi[j] + g * pr[j]) % p_;
            }
            piv.push_back(c);
            ++r;
        }
        return piv;
    }

    std::size_t rank() const
    {
        FpMatrix t = *this;
        return t.rref().size();
    }

    /// Basis of the right kernel, one vector per entry.
    std::vector<std::vector<int>> kernel() const
    {
        FpMatrix t = *this;
        auto piv = t.rref();
        std::vector<bool> is_piv(cols_, false);
        for (auto c : piv)
            is_piv[c] = true;
        std::vector<std::vector<int>> out;
        for (std::size_t f = 0; f < cols_; ++f) {
            if (is_piv[f])
                continue;
            std::vector<int> v(cols_, 0);
            v[f] = 1;
            for (std::size_t r = 0; r < piv.size(); ++r)
                v[piv[r]] = (p_ - t(r, f)) % p_;
            out.push_back(std::move(v));
        }
        return out;
    }

    /// A particular solution of A x = b.
    std::optional<std::vector<int>> solve(const std::vector<int>& b) const
    {
        FpMatrix aug(p_, rows_, cols_ + 1);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j)
                aug(i, j) = (*this)(i, j);
            aug(i, cols_) = ((b[i] % p_) + p_) % p_;
        }
        auto piv = aug.rref();
        std::vector<int> x(cols_, 0);
        for (std::size_t r = 0; r < piv.size(); ++r) {
            if (piv[r] == cols_)
                return std::nullopt;
            x[piv[r]] = aug(r, cols_);
        }
        return x;
    }

    int inverse(int a) const
    {
        a %= p_;
        if (a == 0)
            throw Error(ErrorKind::DivisionByZero, "inverse of 0 mod p");
        int r = 1, b = a, e = p_ - 2;
        while (e) {
            if (e & 1)
                r = r * b % p_;
            b = b * b % p_;
            e >>= 1;
        }
        return r;
    }

private:
    int p_ = 2;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<int> a_;
};

/// Rank of the span of a list of F_p vectors.
inline std::size_t fp_span_rank(int p, const std::vector<std::vector<int>>& vecs, std::size_t len)
{
    return FpMatrix::from_rows(p, vecs, len).rank();
}

} // namespace strictmod
