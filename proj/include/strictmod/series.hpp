#pragma once

#include <algorithm>
#include <climits>
#include <string>
#include <vector>

#include "strictmod/galois_field.hpp"

namespace strictmod {

/// Truncated Laurent series over a finite field, known modulo pi^prec.
///
/// A value that is zero to its precision is the tracked-zero: it stores no
/// coefficients and its valuation is reported as prec.
class Series {
public:
    using Code = GaloisField::Code;

    Series() = default;

    static Series zero(FieldPtr f, int prec)
    {
        Series s;
        s.field_ = std::move(f);
        s.val_ = prec;
        s.prec_ = prec;
        return s;
    }

    /// coeffs[i] is the coefficient of pi^{start+i}; anything at or past prec is dropped.
    static Series from_coeffs(FieldPtr f, int start, std::vector<Code> coeffs, int prec)
    {
        Series s;
        s.field_ = std::move(f);
        s.val_ = start;
        s.prec_ = prec;
        s.c_ = std::move(coeffs);
        s.normalize();
        return s;
    }

    static Series monomial(FieldPtr f, Code c, int v, int prec)
    {
        return from_coeffs(std::move(f), v, {c}, prec);
    }

    static Series constant(FieldPtr f, Code c, int prec) { return monomial(std::move(f), c, 0, prec); }
    static Series one(FieldPtr f, int prec) { return constant(std::move(f), 1, prec); }

    const FieldPtr& field() const { return field_; }
    int valuation() const { return val_; }
    int precision() const { return prec_; }
    /// Number of known digits past the valuation.
    int relative_precision() const { return prec_ - val_; }
    bool is_zero() const { return c_.empty(); }
    bool is_integral() const { return val_ >= 0; }
    bool is_unit() const { return !is_zero() && val_ == 0; }

    /// Coefficient of pi^i; asking past the precision is an error.
    Code coeff(int i) const
    {
        if (i >= prec_)
            throw Error(ErrorKind::Precision, "coefficient of pi^" + std::to_string(i) + " beyond precision " + std::to_string(prec_));
        if (i < val_ || static_cast<std::size_t>(i - val_) >= c_.size())
            return 0;
        return c_[static_cast<std::size_t>(i - val_)];
    }

    /// Value mod pi for an integral series.
    Code residue() const
    {
        if (val_ < 0 && !is_zero())
            throw Error(ErrorKind::Domain, "residue of a non-integral series");
        return coeff(0);
    }

    Series truncated(int prec) const
    {
        if (prec >= prec_)
            return *this;
        Series s = *this;
        s.prec_ = prec;
        s.normalize();
        return s;
    }

    /// Multiply by pi^k.
    Series shifted(int k) const
    {
        Series s = *this;
        s.val_ += k;
        s.prec_ += k;
        return s;
    }

    Series scaled(Code a) const
    {
        Series s = *this;
        for (auto& c : s.c_)
            c = field_->mul(c, a);
        s.normalize();
        return s;
    }

    Series operator-() const
    {
        Series s = *this;
        for (auto& c : s.c_)
            c = field_->neg(c);
        return s;
    }

    friend Series operator+(const Series& a, const Series& b) { return add_impl(a, b, false); }
    friend Series operator-(const Series& a, const Series& b) { return add_impl(a, b, true); }

    friend Series operator*(const Series& a, const Series& b)
    {
        require_same_field(a.field_, b.field_);
        int prec = std::min(a.prec_ + b.val_, b.prec_ + a.val_);
        if (a.is_zero() || b.is_zero())
            return zero(a.field_, prec);
        int v = a.val_ + b.val_;
        int len = prec - v;
        if (len <= 0)
            return zero(a.field_, prec);
        const GaloisField& F = *a.field_;
        std::vector<Code> out(static_cast<std::size_t>(len), 0);
        int la = std::min<int>(static_cast<int>(a.c_.size()), len);
        int lb = std::min<int>(static_cast<int>(b.c_.size()), len);
        for (int i = 0; i < la; ++i) {
            Code x = a.c_[i];
            if (x == 0)
                continue;
            int jmax = std::min(lb, len - i);
            for (int j = 0; j < jmax; ++j)
                if (b.c_[j] != 0)
                    out[i + j] = F.add(out[i + j], F.mul(x, b.c_[j]));
        }
        return from_coeffs(a.field_, v, std::move(out), prec);
    }

    /// Inverse in K; valuation -v, precision P - 2v.
    Series inverse() const
    {
        if (is_zero())
            throw Error(ErrorKind::DivisionByZero, "inverse of a series that is zero to precision " + std::to_string(prec_));
        const GaloisField& F = *field_;
        int len = relative_precision();
        std::vector<Code> b(static_cast<std::size_t>(len), 0);
        Code b0 = F.inv(c_[0]);
        b[0] = b0;
        for (int k = 1; k < len; ++k) {
            Code acc = 0;
            for (int i = 1; i <= k && i < static_cast<int>(c_.size()); ++i)
                if (c_[i] != 0 && b[k - i] != 0)
                    acc = F.add(acc, F.mul(c_[i], b[k - i]));
            b[k] = F.neg(F.mul(b0, acc));
        }
        return from_coeffs(field_, -val_, std::move(b), -val_ + len);
    }

    friend Series operator/(const Series& a, const Series& b) { return a * b.inverse(); }

    /// a -> a^q: coefficients to the q-th power, exponents times q.
    Series sigma(std::uint64_t q) const
    {
        int qi = static_cast<int>(q);
        if (is_zero())
            return zero(field_, prec_ * qi);
        std::vector<Code> out((c_.size() - 1) * q + 1, 0);
        for (std::size_t i = 0; i < c_.size(); ++i)
            out[i * q] = field_->pow(c_[i], q);
        return from_coeffs(field_, val_ * qi, std::move(out), prec_ * qi);
    }

    Series pow(std::uint64_t e) const
    {
        Series result = one(field_, INT_MAX / 4);
        Series base = *this;
        while (e) {
            if (e & 1)
                result = result * base;
            e >>= 1;
            if (e)
                base = base * base;
        }
        return result;
    }

    /// Substitute pi = w^E and push coefficients through an embedding table.
    Series inflate(int E, FieldPtr target, const std::vector<Code>& embed) const
    {
        std::vector<Code> out(c_.empty() ? 0 : (c_.size() - 1) * E + 1, 0);
        for (std::size_t i = 0; i < c_.size(); ++i)
            out[i * E] = embed[c_[i]];
        return from_coeffs(std::move(target), val_ * E, std::move(out), prec_ * E);
    }

    /// True when a and b agree on every digit both claim to know.
    friend bool agree(const Series& a, const Series& b) { return (a - b).is_zero(); }

    /// Exact equality of the stored data (same precision and digits).
    friend bool operator==(const Series& a, const Series& b)
    {
        return a.prec_ == b.prec_ && a.val_ == b.val_ && a.c_ == b.c_;
    }

    /// Nonzero terms as (exponent, code) pairs.
    std::vector<std::pair<int, Code>> terms() const
    {
        std::vector<std::pair<int, Code>> out;
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (c_[i] != 0)
                out.emplace_back(val_ + static_cast<int>(i), c_[i]);
        return out;
    }

    std::string to_string(const std::string& var = "pi") const
    {
        std::string s;
        for (auto [e, c] : terms()) {
            if (!s.empty())
                s += " + ";
            std::string cs = code_to_string(*field_, c);
            if (e == 0)
                s += cs;
            else {
                if (cs != "1")
                    s += cs + "*";
                s += var;
                if (e != 1)
                    s += "^" + std::to_string(e);
            }
        }
        if (s.empty())
            s = "0";
        return s + " + O(" + var + "^" + std::to_string(prec_) + ")";
    }

    /// Prime-field elements print as integers, others as powers of the generator.
    static std::string code_to_string(const GaloisField& F, Code c)
    {
        if (c < static_cast<Code>(F.characteristic()))
            return std::to_string(c);
        std::uint32_t l = F.log(c);
        return l == 1 ? std::string("g") : "g^" + std::to_string(l);
    }

private:
    FieldPtr field_;
    int val_ = 0;
    int prec_ = 0;
    std::vector<Code> c_;

    void normalize()
    {
        std::size_t keep = prec_ > val_ ? static_cast<std::size_t>(prec_ - val_) : 0;
        if (c_.size() > keep)
            c_.resize(keep);
        std::size_t lead = 0;
        while (lead < c_.size() && c_[lead] == 0)
            ++lead;
        if (lead == c_.size()) {
            c_.clear();
            val_ = prec_;
            return;
        }
        if (lead) {
            c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead));
            val_ += static_cast<int>(lead);
        }
    }

    static Series add_impl(const Series& a, const Series& b, bool subtract)
    {
        require_same_field(a.field_, b.field_);
        int prec = std::min(a.prec_, b.prec_);
        int start = std::min(a.val_, b.val_);
        if (start >= prec)
            return zero(a.field_, prec);
        const GaloisField& F = *a.field_;
        std::vector<Code> out(static_cast<std::size_t>(prec - start), 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            int e = a.val_ + static_cast<int>(i);
            if (e >= prec)
                break;
            out[e - start] = a.c_[i];
        }
        for (std::size_t i = 0; i < b.c_.size(); ++i) {
            int e = b.val_ + static_cast<int>(i);
            if (e >= prec)
                break;
            Code x = subtract ? F.neg(b.c_[i]) : b.c_[i];
            out[e - start] = F.add(out[e - start], x);
        }
        return from_coeffs(a.field_, start, std::move(out), prec);
    }
};

} // namespace strictmod
