#pragma once

#include <cstdint>
#include <string>

#include "strictmod/series_matrix.hpp"

namespace strictmod {

/// q = p^n0, residue field k = F_{q^m}, pi0 in O with v(pi0) = e, working precision.
struct BaseData {
    int p = 2;
    int n0 = 1;
    int m = 1;
    std::uint64_t q = 2;
    FieldPtr k;
    Series pi0;
    int prec = 20;

    int e() const { return pi0.valuation(); }
    int residue_degree_over_fp() const { return n0 * m; }

    Series constant(GaloisField::Code c) const { return Series::constant(k, c, prec); }
    Series zero() const { return Series::zero(k, prec); }
    Series one() const { return Series::one(k, prec); }
    Series pi_power(int v) const { return Series::monomial(k, 1, v, prec); }
    SeriesMatrix identity(std::size_t n) const { return SeriesMatrix::identity(k, n, prec); }
    SeriesMatrix zeros(std::size_t r, std::size_t c) const { return SeriesMatrix(k, r, c, prec); }

    bool same_as(const BaseData& o) const
    {
        return p == o.p && n0 == o.n0 && m == o.m && k->same_as(*o.k) && agree(pi0, o.pi0);
    }

    std::string describe() const
    {
        return "q=" + std::to_string(q) + " k=" + k->name() + " e=" + std::to_string(e()) + " pi0=" + pi0.to_string() +
               " prec=" + std::to_string(prec);
    }
};

/// Builds base data; pi0 is taken to the working precision.
inline BaseData make_base(int p, int n0, int m, const Series& pi0, int prec, FieldPtr k = nullptr)
{
    if (!GaloisField::is_prime(p))
        throw Error(ErrorKind::Domain, "p must be prime");
    if (n0 < 1 || m < 1)
        throw Error(ErrorKind::Domain, "N0 and k_deg must be positive");
    BaseData b;
    b.p = p;
    b.n0 = n0;
    b.m = m;
    b.q = 1;
    for (int i = 0; i < n0; ++i)
        b.q *= static_cast<std::uint64_t>(p);
    b.k = k ? k : make_field(p, n0 * m);
    if (b.k->characteristic() != p || b.k->degree() != n0 * m)
        throw Error(ErrorKind::Mismatch, "residue field does not match p, N0, k_deg");
    b.prec = prec;
    b.pi0 = pi0.truncated(prec);
    if (b.pi0.is_zero() || b.pi0.valuation() < 1)
        throw Error(ErrorKind::Domain, "pi0 must have valuation e >= 1");
    return b;
}

/// Convenience: pi0 = pi^e.
inline BaseData make_base(int p, int n0, int m, int e, int prec)
{
    FieldPtr k = make_field(p, n0 * m);
    return make_base(p, n0, m, Series::monomial(k, 1, e, prec), prec, k);
}

} // namespace strictmod
