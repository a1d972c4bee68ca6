#pragma once

#include <map>
#include <unordered_map>
#include <vector>

#include "strictmod/modcat.hpp"

namespace strictmod {

/// Residue algebra A[M]_k = k[X_1..X_n]/(X_s^q - sum_j Cbar_sj X_j) with
/// monomial basis X^a, 0 <= a_s < q, and Delta(X_s) = X_s (x) 1 + 1 (x) X_s.
class HopfResidueAlgebra {
public:
    using Code = GaloisField::Code;
    using Elem = std::vector<Code>;                 // dense, length dim
    using Tensor = std::map<std::uint64_t, Code>;   // sparse, key a * dim + b

    static constexpr std::size_t kDefaultCap = 4096;

    HopfResidueAlgebra(FieldPtr k, std::uint64_t q, KMatrix Cbar, KMatrix Dbar, std::size_t cap = kDefaultCap)
        : k_(std::move(k)), q_(q), n_(Cbar.rows()), C_(std::move(Cbar)), D_(std::move(Dbar))
    {
        dim_ = 1;
        for (std::size_t i = 0; i < n_; ++i) {
            dim_ *= q_;
            if (dim_ > cap)
                throw Error(ErrorKind::Capacity, "q^n = " + std::to_string(dim_) + "+ exceeds the algebra size cap " + std::to_string(cap));
        }
        p_ = k_->characteristic();
    }

    const FieldPtr& field() const { return k_; }
    std::uint64_t q() const { return q_; }
    std::size_t n() const { return n_; }
    std::size_t dim() const { return dim_; }
    const KMatrix& Cbar() const { return C_; }
    const KMatrix& Dbar() const { return D_; }

    std::vector<int> exponents(std::size_t idx) const
    {
        std::vector<int> a(n_);
        for (std::size_t s = 0; s < n_; ++s) {
            a[s] = static_cast<int>(idx % q_);
            idx /= q_;
        }
        return a;
    }

    std::size_t index(const std::vector<int>& a) const
    {
        std::size_t idx = 0;
        for (std::size_t s = n_; s-- > 0;)
            idx = idx * q_ + static_cast<std::size_t>(a[s]);
        return idx;
    }

    Elem basis(std::size_t idx) const
    {
        Elem e(dim_, 0);
        e[idx] = 1;
        return e;
    }

    Elem generator(std::size_t s) const
    {
        std::vector<int> a(n_, 0);
        a[s] = 1;
        return basis(index(a));
    }

    Elem one() const { return basis(0); }

    /// Reduced form of the monomial with arbitrary exponents.
    const Elem& monomial(const std::vector<int>& c) const
    {
        std::uint64_t key = 0;
        for (std::size_t s = n_; s-- > 0;)
            key = key * (4 * q_) + static_cast<std::uint64_t>(c[s]);
        auto it = memo_.find(key);
        if (it != memo_.end())
            return it->second;
        Elem out(dim_, 0);
        std::size_t s = 0;
        while (s < n_ && c[s] < static_cast<int>(q_))
            ++s;
        if (s == n_) {
            out[index(c)] = 1;
        } else {
            std::vector<int> rest = c;
            rest[s] -= static_cast<int>(q_);
            for (std::size_t j = 0; j < n_; ++j) {
                Code f = C_(s, j);
                if (f == 0)
                    continue;
                std::vector<int> t = rest;
                t[j] += 1;
                const Elem& r = monomial(t);
                for (std::size_t i = 0; i < dim_; ++i)
                    if (r[i])
                        out[i] = k_->add(out[i], k_->mul(f, r[i]));
            }
        }
        return memo_.emplace(key, std::move(out)).first->second;
    }

    const Elem& basis_product(std::size_t a, std::size_t b) const
    {
        auto ea = exponents(a), eb = exponents(b);
        for (std::size_t s = 0; s < n_; ++s)
            ea[s] += eb[s];
        return monomial(ea);
    }

    Elem mul(const Elem& x, const Elem& y) const
    {
        Elem out(dim_, 0);
        for (std::size_t a = 0; a < dim_; ++a) {
            if (!x[a])
                continue;
            for (std::size_t b = 0; b < dim_; ++b) {
                if (!y[b])
                    continue;
                Code f = k_->mul(x[a], y[b]);
                const Elem& r = basis_product(a, b);
                for (std::size_t i = 0; i < dim_; ++i)
                    if (r[i])
                        out[i] = k_->add(out[i], k_->mul(f, r[i]));
            }
        }
        return out;
    }

    Elem power(const Elem& x, std::uint64_t e) const
    {
        Elem r = one(), b = x;
        while (e) {
            if (e & 1)
                r = mul(r, b);
            e >>= 1;
            if (e)
                b = mul(b, b);
        }
        return r;
    }

    /// Delta on a basis monomial: sum over b <= a of prod binom(a_s, b_s) X^b (x) X^{a-b}.
    Tensor delta_basis(std::size_t idx) const
    {
        auto a = exponents(idx);
        Tensor out;
        std::vector<int> b(n_, 0);
        while (true) {
            long long coef = 1;
            std::vector<int> rest(n_);
            for (std::size_t s = 0; s < n_; ++s) {
                coef = coef * binom_mod_p(a[s], b[s]) % p_;
                rest[s] = a[s] - b[s];
            }
            if (coef)
                out[index(b) * dim_ + index(rest)] = k_->from_int(coef);
            std::size_t s = 0;
            while (s < n_ && b[s] == a[s]) {
                b[s] = 0;
                ++s;
            }
            if (s == n_)
                break;
            ++b[s];
        }
        return out;
    }

    Tensor delta(const Elem& x) const
    {
        Tensor out;
        for (std::size_t a = 0; a < dim_; ++a)
            if (x[a])
                add_scaled(out, delta_basis(a), x[a]);
        return out;
    }

    /// delta+(x) = Delta(x) - x (x) 1 - 1 (x) x
    Tensor delta_plus(const Elem& x) const
    {
        Tensor out = delta(x);
        for (std::size_t a = 0; a < dim_; ++a) {
            if (!x[a])
                continue;
            Code m = k_->neg(x[a]);
            add_entry(out, a * dim_, m);
            add_entry(out, a, m);
        }
        return out;
    }

    Code counit(const Elem& x) const { return x[0]; }

    /// Componentwise product in A (x) A.
    Tensor tensor_mul(const Tensor& x, const Tensor& y) const
    {
        Tensor out;
        for (auto [kx, cx] : x)
            for (auto [ky, cy] : y) {
                Code f = k_->mul(cx, cy);
                const Elem& l = basis_product(kx / dim_, ky / dim_);
                const Elem& r = basis_product(kx % dim_, ky % dim_);
                for (std::size_t i = 0; i < dim_; ++i) {
                    if (!l[i])
                        continue;
                    Code fl = k_->mul(f, l[i]);
                    for (std::size_t j = 0; j < dim_; ++j)
                        if (r[j])
                            add_entry(out, i * dim_ + j, k_->mul(fl, r[j]));
                }
            }
        return out;
    }

    /// [alpha] X^a = alpha^{|a|} X^a.
    Elem grading(const Elem& x, Code alpha) const
    {
        Elem out(dim_, 0);
        for (std::size_t a = 0; a < dim_; ++a) {
            if (!x[a])
                continue;
            auto e = exponents(a);
            std::uint64_t deg = 0;
            for (int v : e)
                deg += static_cast<std::uint64_t>(v);
            out[a] = k_->mul(x[a], k_->pow(alpha, deg));
        }
        return out;
    }

    /// Algebra endomorphism X_s -> sum_j Dbar_sj X_j applied to x.
    Elem apply_pi0(const Elem& x) const
    {
        std::vector<Elem> images(n_);
        for (std::size_t s = 0; s < n_; ++s) {
            images[s] = Elem(dim_, 0);
            for (std::size_t j = 0; j < n_; ++j)
                if (D_(s, j))
                    images[s] = add(images[s], scale(generator(j), D_(s, j)));
        }
        Elem out(dim_, 0);
        for (std::size_t a = 0; a < dim_; ++a) {
            if (!x[a])
                continue;
            auto e = exponents(a);
            Elem term = one();
            for (std::size_t s = 0; s < n_; ++s)
                if (e[s])
                    term = mul(term, power(images[s], static_cast<std::uint64_t>(e[s])));
            out = add(out, scale(term, x[a]));
        }
        return out;
    }

    Elem add(const Elem& x, const Elem& y) const
    {
        Elem out(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            out[i] = k_->add(x[i], y[i]);
        return out;
    }

    Elem scale(const Elem& x, Code c) const
    {
        Elem out(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            out[i] = k_->mul(x[i], c);
        return out;
    }

    void add_entry(Tensor& t, std::uint64_t key, Code c) const
    {
        if (!c)
            return;
        auto it = t.find(key);
        if (it == t.end())
            t.emplace(key, c);
        else {
            it->second = k_->add(it->second, c);
            if (!it->second)
                t.erase(it);
        }
    }

    void add_scaled(Tensor& t, const Tensor& u, Code c) const
    {
        for (auto [key, v] : u)
            add_entry(t, key, k_->mul(v, c));
    }

private:
    FieldPtr k_;
    std::uint64_t q_;
    std::size_t n_;
    KMatrix C_, D_;
    std::size_t dim_ = 1;
    int p_ = 2;
    mutable std::unordered_map<std::uint64_t, Elem> memo_;

    long long binom_mod_p(int a, int b) const
    {
        // Lucas
        long long r = 1;
        while (a || b) {
            int ad = a % p_, bd = b % p_;
            if (bd > ad)
                return 0;
            long long c = 1;
            for (int i = 0; i < bd; ++i)
                c = c * (ad - i) / (i + 1);
            r = r * (c % p_) % p_;
            a /= p_;
            b /= p_;
        }
        return r;
    }
};

inline HopfResidueAlgebra build_residue_algebra(const SigmaModule& M, std::size_t cap = HopfResidueAlgebra::kDefaultCap)
{
    M.require_valid("build_residue_algebra");
    return HopfResidueAlgebra(M.base.k, M.base.q, M.C.residue(), M.D.residue(), cap);
}

struct PrimitiveSubspace {
    std::vector<HopfResidueAlgebra::Elem> kernel; // basis of Ker delta+
    std::vector<HopfResidueAlgebra::Elem> eigen;  // basis of Ker delta+ with [alpha] b = alpha b
    bool eigen_is_generator_span = false;
};

/// Ker delta+ by sparse elimination on the columns delta+(X^a), then the [alpha]-eigenpart.
inline PrimitiveSubspace primitive_subspace(const HopfResidueAlgebra& H)
{
    using Code = GaloisField::Code;
    const GaloisField& F = *H.field();
    std::size_t dim = H.dim();
    struct Row {
        HopfResidueAlgebra::Tensor vec;
        HopfResidueAlgebra::Elem combo;
    };
    std::map<std::uint64_t, Row> echelon; // pivot key -> reduced column with leading entry 1
    PrimitiveSubspace out;
    for (std::size_t a = 0; a < dim; ++a) {
        Row r{H.delta_plus(H.basis(a)), H.basis(a)};
        while (!r.vec.empty()) {
            auto [key, c] = *r.vec.begin();
            auto it = echelon.find(key);
            if (it == echelon.end())
                break;
            Code m = F.neg(c);
            H.add_scaled(r.vec, it->second.vec, m);
            for (std::size_t i = 0; i < dim; ++i)
                if (it->second.combo[i])
                    r.combo[i] = F.add(r.combo[i], F.mul(m, it->second.combo[i]));
        }
        if (r.vec.empty()) {
            out.kernel.push_back(r.combo);
            continue;
        }
        Code inv = F.inv(r.vec.begin()->second);
        for (auto& [key, v] : r.vec)
            v = F.mul(v, inv);
        for (auto& c : r.combo)
            c = F.mul(c, inv);
        echelon.emplace(r.vec.begin()->first, std::move(r));
    }

    // eigenpart for a generator alpha of F_q^x: [alpha] acts by alpha^{|a|} on X^a
    Code alpha = fq_generator(F, H.q());
    std::vector<std::size_t> off; // coordinates where [alpha] != alpha
    for (std::size_t a = 0; a < dim; ++a) {
        auto e = H.exponents(a);
        std::uint64_t deg = 0;
        for (int v : e)
            deg += static_cast<std::uint64_t>(v);
        if (F.pow(alpha, deg) != alpha)
            off.push_back(a);
    }
    if (!out.kernel.empty()) {
        KMatrix R(H.field(), out.kernel.size(), off.size());
        for (std::size_t i = 0; i < out.kernel.size(); ++i)
            for (std::size_t j = 0; j < off.size(); ++j)
                R(i, j) = out.kernel[i][off[j]];
        KMatrix combos = off.empty() ? KMatrix::identity(H.field(), out.kernel.size()) : R.left_kernel();
        for (std::size_t r = 0; r < combos.rows(); ++r) {
            HopfResidueAlgebra::Elem v(dim, 0);
            for (std::size_t i = 0; i < out.kernel.size(); ++i)
                if (combos(r, i))
                    v = H.add(v, H.scale(out.kernel[i], combos(r, i)));
            out.eigen.push_back(v);
        }
    }
    // compare with span{X_1..X_n}
    KMatrix G(H.field(), H.n() + out.eigen.size(), dim);
    for (std::size_t s = 0; s < H.n(); ++s)
        G(s, H.index([&] { std::vector<int> a(H.n(), 0); a[s] = 1; return a; }())) = 1;
    for (std::size_t i = 0; i < out.eigen.size(); ++i)
        for (std::size_t j = 0; j < dim; ++j)
            G(H.n() + i, j) = out.eigen[i][j];
    out.eigen_is_generator_span = out.eigen.size() == H.n() && G.rank() == H.n();
    return out;
}

struct RoundTrip {
    bool ok = false;
    std::size_t kernel_dim = 0;
    std::size_t eigen_dim = 0;
    KMatrix W;           // eigen basis b = W X
    KMatrix recovered_C; // b_s^q = sum_j C'_sj b_j
    KMatrix recovered_D; // [pi0] b_s = sum_j D'_sj b_j
    bool matches_C = false; // C' == sigma(W) Cbar W^-1
    bool matches_D = false; // D' == W Dbar W^-1
    bool pi0_respects_relations = false;
    std::vector<std::string> notes;
};

inline RoundTrip functor_L_roundtrip(const SigmaModule& M, std::size_t cap = HopfResidueAlgebra::kDefaultCap)
{
    auto H = build_residue_algebra(M, cap);
    const GaloisField& F = *H.field();
    std::size_t n = H.n(), dim = H.dim();
    RoundTrip rt;
    auto P = primitive_subspace(H);
    rt.kernel_dim = P.kernel.size();
    rt.eigen_dim = P.eigen.size();
    if (rt.kernel_dim != n * static_cast<std::size_t>(M.base.n0))
        rt.notes.push_back("primitive kernel has dimension " + std::to_string(rt.kernel_dim));
    if (!P.eigen_is_generator_span) {
        rt.notes.push_back("eigen sub-basis does not span the image of M");
        return rt;
    }
    if (n == 0) {
        rt.ok = rt.matches_C = rt.matches_D = rt.pi0_respects_relations = true;
        return rt;
    }
    std::vector<std::size_t> gen(n);
    for (std::size_t s = 0; s < n; ++s)
        gen[s] = H.index([&] { std::vector<int> a(n, 0); a[s] = 1; return a; }());
    rt.W = KMatrix(H.field(), n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            rt.W(i, j) = P.eigen[i][gen[j]];

    // express an element of span{b} in the b basis
    KMatrix Bt(H.field(), dim, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            Bt(j, i) = P.eigen[i][j];
    auto coords_in_b = [&](const HopfResidueAlgebra::Elem& x) { return Bt.solve(x); };

    rt.recovered_C = KMatrix(H.field(), n, n);
    rt.recovered_D = KMatrix(H.field(), n, n);
    bool closed = true;
    for (std::size_t s = 0; s < n; ++s) {
        auto c = coords_in_b(H.power(P.eigen[s], H.q()));
        auto d = coords_in_b(H.apply_pi0(P.eigen[s]));
        if (!c || !d) {
            closed = false;
            break;
        }
        for (std::size_t j = 0; j < n; ++j) {
            rt.recovered_C(s, j) = (*c)[j];
            rt.recovered_D(s, j) = (*d)[j];
        }
    }
    if (!closed) {
        rt.notes.push_back("q-th power or [pi0] leaves the primitive eigenspace");
        return rt;
    }
    auto Winv = rt.W.inverse();
    if (!Winv) {
        rt.notes.push_back("eigen basis is not a basis of M_k");
        return rt;
    }
    rt.matches_C = rt.recovered_C == rt.W.frobenius(H.q()) * H.Cbar() * *Winv;
    rt.matches_D = rt.recovered_D == rt.W * H.Dbar() * *Winv;

    // [pi0] must respect X_s^q = sum_j Cbar_sj X_j
    rt.pi0_respects_relations = true;
    for (std::size_t s = 0; s < n; ++s) {
        auto lhs = H.power(H.apply_pi0(H.generator(s)), H.q());
        HopfResidueAlgebra::Elem rhs(dim, 0);
        for (std::size_t j = 0; j < n; ++j)
            if (H.Cbar()(s, j))
                rhs = H.add(rhs, H.scale(H.apply_pi0(H.generator(j)), H.Cbar()(s, j)));
        if (lhs != rhs)
            rt.pi0_respects_relations = false;
    }
    (void)F;
    rt.ok = rt.kernel_dim == n * static_cast<std::size_t>(M.base.n0) && rt.matches_C && rt.matches_D && rt.pi0_respects_relations;
    return rt;
}

struct HopfAxioms {
    bool coassociative = false;
    bool delta_multiplicative = false;
    bool counit = false;
    bool full_pairs = false; // multiplicativity checked on all basis pairs
};

/// Coassociativity, counit and multiplicativity of Delta as exact identities.
inline HopfAxioms check_hopf_axioms(const HopfResidueAlgebra& H, std::size_t full_pair_limit = 32)
{
    std::size_t dim = H.dim();
    HopfAxioms r;
    r.coassociative = true;
    r.counit = true;
    std::vector<HopfResidueAlgebra::Tensor> D(dim);
    for (std::size_t a = 0; a < dim; ++a)
        D[a] = H.delta_basis(a);
    std::uint64_t d2 = static_cast<std::uint64_t>(dim) * dim;
    for (std::size_t a = 0; a < dim && r.coassociative; ++a) {
        std::map<std::uint64_t, GaloisField::Code> left, right;
        for (auto [key, c] : D[a]) {
            std::size_t x = key / dim, y = key % dim;
            for (auto [k2, c2] : D[x]) // (Delta (x) id)
                left[k2 * dim + y] = H.field()->add(left[k2 * dim + y], H.field()->mul(c, c2));
            for (auto [k2, c2] : D[y]) // (id (x) Delta)
                right[x * d2 + k2] = H.field()->add(right[x * d2 + k2], H.field()->mul(c, c2));
        }
        std::erase_if(left, [](const auto& kv) { return kv.second == 0; });
        std::erase_if(right, [](const auto& kv) { return kv.second == 0; });
        r.coassociative = left == right;
        // (counit (x) id) Delta = id = (id (x) counit) Delta
        HopfResidueAlgebra::Elem l(dim, 0), rr(dim, 0);
        for (auto [key, c] : D[a]) {
            if (key / dim == 0)
                l[key % dim] = H.field()->add(l[key % dim], c);
            if (key % dim == 0)
                rr[key / dim] = H.field()->add(rr[key / dim], c);
        }
        if (l != H.basis(a) || rr != H.basis(a))
            r.counit = false;
    }
    r.delta_multiplicative = true;
    r.full_pairs = dim <= full_pair_limit;
    for (std::size_t a = 0; a < dim && r.delta_multiplicative; ++a) {
        if (r.full_pairs) {
            for (std::size_t b = 0; b < dim && r.delta_multiplicative; ++b)
                r.delta_multiplicative = H.delta(H.basis_product(a, b)) == H.tensor_mul(D[a], D[b]);
        } else {
            for (std::size_t s = 0; s < H.n() && r.delta_multiplicative; ++s) {
                auto g = H.generator(s);
                r.delta_multiplicative = H.delta(H.mul(H.basis(a), g)) == H.tensor_mul(D[a], H.delta(g));
            }
        }
    }
    return r;
}

} // namespace strictmod
