#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <map>
#include <mutex>
#include <vector>

#include "strictmod/error.hpp"

namespace strictmod {

/// Finite field F_{p^d} realised as F_p[x]/(f).
///
/// Elements are encoded as integers whose base-p digits are the coordinates
/// in the power basis 1, x, ..., x^{d-1}.  Multiplication and addition go
/// through log / antilog / Zech tables built once at construction, so the
/// field size is limited to kMaxSize.
class GaloisField {
public:
    using Code = std::uint32_t;
    static constexpr std::uint64_t kMaxSize = 1u << 22;

    /// `modulus` holds f_0..f_{d-1} of the monic f = x^d + ... + f_0.  An empty
    /// modulus selects the smallest primitive polynomial of degree d.
    GaloisField(int p, int d, std::vector<int> modulus = {})
        : p_(p), d_(d)
    {
        if (p < 2 || !is_prime(p))
            throw Error(ErrorKind::Domain, "field characteristic " + std::to_string(p) + " is not prime");
        if (d < 1)
            throw Error(ErrorKind::Domain, "field degree must be positive");
        std::uint64_t size = 1;
        for (int i = 0; i < d; ++i) {
            size *= static_cast<std::uint64_t>(p);
            if (size > kMaxSize)
                throw Error(ErrorKind::Capacity, "field F_" + std::to_string(p) + "^" + std::to_string(d) + " too large");
        }
        size_ = static_cast<Code>(size);
        if (modulus.empty()) {
            modulus_ = smallest_primitive_modulus();
        } else {
            if (static_cast<int>(modulus.size()) != d)
                throw Error(ErrorKind::Domain, "defining polynomial has wrong degree");
            for (int& c : modulus)
                c = ((c % p) + p) % p;
            modulus_ = modulus;
        }
        if (!build_tables())
            throw Error(ErrorKind::Domain, "defining polynomial is not irreducible over F_" + std::to_string(p));
    }

    int characteristic() const { return p_; }
    int degree() const { return d_; }
    Code size() const { return size_; }
    const std::vector<int>& modulus() const { return modulus_; }
    Code generator() const { return exp_[1]; }

    Code zero() const { return 0; }
    Code one() const { return 1; }

    Code from_int(long long v) const
    {
        long long r = v % p_;
        if (r < 0)
            r += p_;
        return static_cast<Code>(r);
    }

    std::vector<int> coords(Code a) const
    {
        std::vector<int> out(d_);
        for (int i = 0; i < d_; ++i) {
            out[i] = static_cast<int>(a % p_);
            a /= p_;
        }
        return out;
    }

    Code from_coords(const std::vector<int>& c) const
    {
        if (static_cast<int>(c.size()) > d_)
            throw Error(ErrorKind::Domain, "too many coordinates for F_" + std::to_string(p_) + "^" + std::to_string(d_));
        Code out = 0;
        for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
            out = out * p_ + static_cast<Code>(((c[i] % p_) + p_) % p_);
        return out;
    }

    Code add(Code a, Code b) const
    {
        if (a == 0)
            return b;
        if (b == 0)
            return a;
        std::uint32_t la = log_[a], lb = log_[b];
        std::uint32_t diff = lb >= la ? lb - la : lb + order() - la;
        std::int64_t z = zech_[diff];
        if (z < 0)
            return 0;
        return exp_[(la + static_cast<std::uint32_t>(z)) % order()];
    }

    Code neg(Code a) const
    {
        if (a == 0 || p_ == 2)
            return a;
        return exp_[(log_[a] + order() / 2) % order()];
    }

    Code sub(Code a, Code b) const { return add(a, neg(b)); }

    Code mul(Code a, Code b) const
    {
        if (a == 0 || b == 0)
            return 0;
        return exp_[(static_cast<std::uint64_t>(log_[a]) + log_[b]) % order()];
    }

    Code inv(Code a) const
    {
        if (a == 0)
            throw Error(ErrorKind::DivisionByZero, "inverse of zero in F_" + std::to_string(size_));
        return exp_[(order() - log_[a]) % order()];
    }

    Code div(Code a, Code b) const { return mul(a, inv(b)); }

    Code pow(Code a, std::uint64_t e) const
    {
        if (e == 0)
            return 1;
        if (a == 0)
            return 0;
        return exp_[static_cast<std::uint32_t>((static_cast<unsigned __int128>(log_[a]) * e) % order())];
    }

    /// a^{-1/q}, the inverse of the q-th power map (the field is perfect).
    Code root(Code a, std::uint64_t q) const
    {
        if (a == 0)
            return 0;
        // q is a power of p, hence invertible modulo |F^x|
        std::uint64_t n = order();
        std::uint64_t qi = mod_inverse(q % n, n);
        return pow(a, qi);
    }

    std::uint32_t log(Code a) const
    {
        if (a == 0)
            throw Error(ErrorKind::DivisionByZero, "logarithm of zero");
        return log_[a];
    }
    Code exp(std::uint64_t i) const { return exp_[i % order()]; }
    std::uint32_t order() const { return size_ - 1; }

    bool same_as(const GaloisField& o) const { return p_ == o.p_ && d_ == o.d_ && modulus_ == o.modulus_; }

    std::string name() const
    {
        return d_ == 1 ? "F_" + std::to_string(p_) : "F_" + std::to_string(p_) + "^" + std::to_string(d_);
    }

    static bool is_prime(int n)
    {
        if (n < 2)
            return false;
        for (int i = 2; i * i <= n; ++i)
            if (n % i == 0)
                return false;
        return true;
    }

private:
    int p_;
    int d_;
    Code size_ = 0;
    std::vector<int> modulus_;
    std::vector<Code> exp_;
    std::vector<std::uint32_t> log_;
    std::vector<std::int64_t> zech_;

    static std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t n)
    {
        if (n == 1)
            return 0;
        __int128 t = 0, nt = 1, r = n, nr = a;
        while (nr != 0) {
            __int128 qq = r / nr;
            __int128 tmp = t - qq * nt;
            t = nt;
            nt = tmp;
            tmp = r - qq * nr;
            r = nr;
            nr = tmp;
        }
        if (r != 1)
            throw Error(ErrorKind::Domain, "power map is not invertible on the field");
        if (t < 0)
            t += n;
        return static_cast<std::uint64_t>(t);
    }

    // Coordinates multiplied by x modulo the defining polynomial.
    void times_x(std::vector<int>& c, const std::vector<int>& f) const
    {
        int top = c[d_ - 1];
        for (int i = d_ - 1; i > 0; --i)
            c[i] = c[i - 1];
        c[0] = 0;
        for (int i = 0; i < d_; ++i)
            c[i] = ((c[i] - top * f[i]) % p_ + p_) % p_;
    }

    Code encode(const std::vector<int>& c) const
    {
        Code out = 0;
        for (int i = d_ - 1; i >= 0; --i)
            out = out * p_ + static_cast<Code>(c[i]);
        return out;
    }

    // Order of x modulo f, or 0 if the powers of x never return to 1 within |F|-1 steps.
    std::uint64_t order_of_x(const std::vector<int>& f) const
    {
        std::vector<int> c(d_, 0);
        c[0] = 1;
        for (std::uint64_t k = 1; k < size_; ++k) {
            times_x(c, f);
            bool is_one = c[0] == 1;
            for (int i = 1; i < d_ && is_one; ++i)
                is_one = c[i] == 0;
            if (is_one)
                return k;
        }
        return 0;
    }

    std::vector<int> smallest_primitive_modulus() const
    {
        std::vector<int> f(d_, 0);
        for (Code code = 0; code < size_; ++code) {
            Code t = code;
            for (int i = 0; i < d_; ++i) {
                f[i] = static_cast<int>(t % p_);
                t /= p_;
            }
            if (f[0] == 0)
                continue;
            if (d_ == 1) {
                // x - a with a a primitive root mod p
                if (order_of_x(f) == size_ - 1u)
                    return f;
                continue;
            }
            if (order_of_x(f) == size_ - 1u)
                return f;
        }
        throw Error(ErrorKind::Domain, "no primitive polynomial found");
    }

    // Multiply two elements given as coordinate vectors, schoolbook then reduce.
    std::vector<int> slow_mul(const std::vector<int>& a, const std::vector<int>& b) const
    {
        std::vector<int> acc(d_, 0), shifted = a;
        for (int j = 0; j < d_; ++j) {
            if (b[j] != 0)
                for (int i = 0; i < d_; ++i)
                    acc[i] = (acc[i] + b[j] * shifted[i]) % p_;
            times_x(shifted, modulus_);
        }
        return acc;
    }

    bool build_tables()
    {
        const std::uint32_t n = size_ - 1;
        exp_.assign(n + 1, 0);
        log_.assign(size_, 0);
        // try x (code p) first, then every other nonzero element
        std::vector<Code> candidates;
        if (d_ > 1)
            candidates.push_back(static_cast<Code>(p_));
        for (Code c = 1; c < size_; ++c)
            if (d_ == 1 || c != static_cast<Code>(p_))
                candidates.push_back(c);
        std::vector<bool> seen(size_);
        for (Code cand : candidates) {
            std::vector<int> g = coords(cand);
            std::vector<int> cur(d_, 0);
            cur[0] = 1;
            std::fill(seen.begin(), seen.end(), false);
            bool ok = true;
            for (std::uint32_t k = 0; k < n; ++k) {
                Code code = encode(cur);
                if (code == 0 || seen[code]) {
                    ok = false;
                    break;
                }
                seen[code] = true;
                exp_[k] = code;
                log_[code] = k;
                cur = slow_mul(cur, g);
            }
            if (ok && encode(cur) == 1) {
                exp_[n] = 1;
                build_zech();
                return true;
            }
            // a zero divisor shows up as a zero product: the modulus is reducible
            if (!ok && encode(cur) == 0)
                return false;
        }
        return false;
    }

    void build_zech()
    {
        const std::uint32_t n = size_ - 1;
        zech_.assign(n, -1);
        // 1 + g^i via coordinates: add 1 to the constant digit
        for (std::uint32_t i = 0; i < n; ++i) {
            Code a = exp_[i];
            Code low = a % p_;
            Code sum = a - low + (low + 1) % p_;
            zech_[i] = sum == 0 ? -1 : static_cast<std::int64_t>(log_[sum]);
        }
    }
};

using FieldPtr = std::shared_ptr<const GaloisField>;

/// Default-modulus fields are cached, so equal descriptors share tables.
inline FieldPtr make_field(int p, int d, std::vector<int> modulus = {})
{
    if (!modulus.empty())
        return std::make_shared<const GaloisField>(p, d, std::move(modulus));
    static std::mutex mu;
    static std::map<std::pair<int, int>, FieldPtr> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{p, d}];
    if (!slot)
        slot = std::make_shared<const GaloisField>(p, d);
    return slot;
}

inline void require_same_field(const FieldPtr& a, const FieldPtr& b)
{
    if (a.get() != b.get() && !a->same_as(*b))
        throw Error(ErrorKind::Mismatch, "mismatched field descriptors: " + a->name() + " vs " + b->name());
}

/// A field element carrying its descriptor; the public face of field arithmetic.
struct FieldElem {
    FieldPtr field;
    GaloisField::Code code = 0;

    std::vector<int> coords() const { return field->coords(code); }
    bool is_zero() const { return code == 0; }
    friend bool operator==(const FieldElem& a, const FieldElem& b)
    {
        return a.field->same_as(*b.field) && a.code == b.code;
    }
};

enum class FieldOp { Add, Mul, Inv, FrobeniusQ };

/// Exact arithmetic on field elements; `q` is only read for FrobeniusQ.
inline FieldElem ff_arith(const FieldElem& a, const FieldElem& b, FieldOp kind, std::uint64_t q = 0)
{
    switch (kind) {
    case FieldOp::Add:
        require_same_field(a.field, b.field);
        return {a.field, a.field->add(a.code, b.code)};
    case FieldOp::Mul:
        require_same_field(a.field, b.field);
        return {a.field, a.field->mul(a.code, b.code)};
    case FieldOp::Inv:
        return {a.field, a.field->inv(a.code)};
    case FieldOp::FrobeniusQ:
        if (q < 2)
            throw Error(ErrorKind::Domain, "frobenius needs q >= 2");
        return {a.field, a.field->pow(a.code, q)};
    }
    throw Error(ErrorKind::Domain, "unknown field operation");
}

/// Embedding small -> large of fields of the same characteristic, as a lookup
/// table indexed by the small field's codes.  The generator of `small` goes to
/// the smallest-code root of its defining polynomial in `large`.
inline std::vector<GaloisField::Code> field_embedding(const GaloisField& small, const GaloisField& large)
{
    if (small.characteristic() != large.characteristic() || large.degree() % small.degree() != 0)
        throw Error(ErrorKind::Mismatch, small.name() + " does not embed in " + large.name());
    using Code = GaloisField::Code;
    const int d = small.degree();
    const auto& f = small.modulus();
    auto eval = [&](Code r) {
        // r^d + sum f_i r^i
        Code acc = large.pow(r, d);
        for (int i = 0; i < d; ++i)
            acc = large.add(acc, large.mul(large.from_int(f[i]), large.pow(r, i)));
        return acc;
    };
    Code root = 0;
    bool found = false;
    for (Code r = 0; r < large.size(); ++r) {
        if (eval(r) == 0) {
            root = r;
            found = true;
            break;
        }
    }
    if (!found)
        throw Error(ErrorKind::Domain, "defining polynomial has no root in " + large.name());
    // the small field's power-basis generator x maps to root
    std::vector<Code> powers(d);
    for (int i = 0; i < d; ++i)
        powers[i] = large.pow(root, i);
    std::vector<Code> table(small.size());
    for (Code a = 0; a < small.size(); ++a) {
        auto c = small.coords(a);
        Code img = 0;
        for (int i = 0; i < d; ++i)
            img = large.add(img, large.mul(large.from_int(c[i]), powers[i]));
        table[a] = img;
    }
    return table;
}

} // namespace strictmod
