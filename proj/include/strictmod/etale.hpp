#pragma once

#include "strictmod/modcat.hpp"

namespace strictmod {

/// Stable image of x -> sigma(x) Cbar on row vectors, as an rref basis.
inline KMatrix stable_frobenius_image(const KMatrix& Cbar, std::uint64_t q)
{
    std::size_t n = Cbar.rows();
    KMatrix V = KMatrix::identity(Cbar.field(), n);
    for (std::size_t t = 0; t <= n; ++t)
        V = (V.frobenius(q) * Cbar).row_space();
    return V;
}

/// True when x -> sigma(x) Cbar is nilpotent (the local case).
inline bool residue_sigma_nilpotent(const KMatrix& Cbar, std::uint64_t q)
{
    return stable_frobenius_image(Cbar, q).rows() == 0;
}

struct EtaleSplit {
    SigmaModule etale;
    SigmaModule local;
    ShortExactSequence ses; // 0 -> M_et -> M -> M_loc -> 0
    SeriesMatrix basis;     // the unimodular U, first rows spanning M_et
    int iterations = 0;
};

inline EtaleSplit conn_etale_split(const SigmaModule& M)
{
    M.require_valid("conn_etale_split");
    const BaseData& b = M.base;
    std::size_t n = M.rank();
    KMatrix V = stable_frobenius_image(M.C.residue(), b.q);
    std::size_t r = V.rows();

    KMatrix Vr = V;
    auto piv = Vr.rref();
    SeriesMatrix X = SeriesMatrix::lift(Vr, b.prec);
    EtaleSplit out;
    if (r > 0 && r < n) {
        int max_iter = static_cast<int>(n + 1) * (b.prec + 2);
        bool converged = false;
        for (int it = 0; it < max_iter; ++it) {
            SeriesMatrix Y = X.sigma(b.q) * M.C;
            SeriesMatrix Yp(b.k, r, r, b.prec);
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < r; ++j)
                    Yp(i, j) = Y(i, piv[j]);
            auto inv = mat_inverse(Yp);
            if (!inv || !is_unimodular(Yp))
                throw Error(ErrorKind::Precision, "etale lift lost its pivot block");
            SeriesMatrix Xn = (*inv * Y).truncated(b.prec);
            ++out.iterations;
            if (agree(Xn, X) && Xn.min_precision() >= X.min_precision()) {
                X = Xn;
                converged = true;
                break;
            }
            X = Xn;
        }
        if (!converged)
            throw Error(ErrorKind::Precision, "etale lift did not converge to working precision");
    }

    SeriesMatrix U = b.zeros(n, n);
    U.set_block(0, 0, X);
    {
        std::vector<bool> is_piv(n, false);
        for (auto c : piv)
            is_piv[c] = true;
        std::size_t row = r;
        for (std::size_t c = 0; c < n; ++c)
            if (!is_piv[c])
                U(row++, c) = b.one();
    }
    auto Uinv = mat_inverse(U);
    if (!Uinv)
        throw Error(ErrorKind::Precision, "splitting basis not invertible");
    SeriesMatrix Cp = U.sigma(b.q) * M.C * *Uinv;
    SeriesMatrix Dp = U * M.D * *Uinv;
    if (r > 0 && r < n && (!Cp.block(0, r, r, n - r).is_zero() || !Dp.block(0, r, r, n - r).is_zero()))
        throw Error(ErrorKind::Precision, "etale part is not stable to working precision");

    out.etale = validate_module(b, Cp.block(0, 0, r, r), Dp.block(0, 0, r, r));
    out.local = validate_module(b, Cp.block(r, r, n - r, n - r), Dp.block(r, r, n - r, n - r));
    out.basis = U;
    out.ses.left = out.etale;
    out.ses.middle = M;
    out.ses.right = out.local;
    out.ses.i = {out.etale, M, X.block(0, 0, r, n)};
    out.ses.j = {M, out.local, Uinv->block(0, r, n, n - r)};
    return out;
}

} // namespace strictmod
