#pragma once

#include <string>
#include <vector>

#include "strictmod/modcat.hpp"

namespace strictmod {

enum class SHFlavor { E1, General, Prime };

inline std::string to_string(SHFlavor f)
{
    switch (f) {
    case SHFlavor::E1: return "sh_e1";
    case SHFlavor::General: return "sh_general";
    case SHFlavor::Prime: return "sh_prime";
    }
    return "?";
}

/// Finite-length data presented inside the k-space pi^low M / pi M, coordinates
/// ordered by layer t = low..0 then basis index.  pi acts by the layer shift.
/// phi0 rows are the images of the basis of M mod pi M; phi1 rows the images of M1's basis.
struct SHObject {
    SHFlavor flavor = SHFlavor::E1;
    FieldPtr k;
    std::uint64_t q = 2;
    std::size_t n = 0;
    int e = 1;
    int low = 0;
    KMatrix pi_action;  // ambient x ambient
    KMatrix Mbar;       // basis of the generated submodule
    KMatrix phi0;       // n x ambient, sigma-semilinear
    KMatrix M1;         // basis of Ker phi0, rows in k^n
    KMatrix phi1;       // M1.rows() x ambient
    bool spans = false;            // images of phi0 (and phi1) generate Mbar over O
    bool kernel_is_layer0 = false; // Ker pi on Mbar is M mod pi M
    bool well_defined = true;      // phi0 independent of lifts
    std::vector<std::string> notes;

    std::size_t ambient_dim() const { return n * static_cast<std::size_t>(1 - low); }
    bool axiom() const { return spans && kernel_is_layer0; }
};

namespace detail {

inline void require_mod1(const SigmaModule& M, const char* what)
{
    M.require_valid(what);
    if (!M.D.is_zero())
        throw Error(ErrorKind::Domain, std::string(what) + " needs [pi0] M = 0");
}

/// Digits of a row of series in layers low..0.
inline std::vector<GaloisField::Code> ambient_digits(const SeriesMatrix& row, int low)
{
    std::size_t n = row.cols();
    std::vector<GaloisField::Code> out(n * static_cast<std::size_t>(1 - low), 0);
    for (std::size_t i = 0; i < n; ++i) {
        const Series& s = row(0, i);
        if (!s.is_zero() && s.valuation() < low)
            throw Error(ErrorKind::Domain, "value leaves the ambient module pi^" + std::to_string(low) + " M");
        for (int t = low; t <= 0; ++t)
            out[static_cast<std::size_t>(t - low) * n + i] = s.coeff(t);
    }
    return out;
}

/// scale * Phi(x) for the constant lift of x in k^n.
inline std::vector<GaloisField::Code> phi_image(const SigmaModule& M, const std::vector<GaloisField::Code>& x, const Series& scale, int low)
{
    const BaseData& b = M.base;
    SeriesMatrix xs = b.zeros(1, M.rank());
    for (std::size_t i = 0; i < x.size(); ++i)
        xs(0, i) = b.constant(b.k->pow(x[i], b.q));
    return ambient_digits((xs * M.C).scaled(scale), low);
}

inline KMatrix rows_to_matrix(FieldPtr k, const std::vector<std::vector<GaloisField::Code>>& rows, std::size_t cols)
{
    KMatrix out(k, rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j)
            out(i, j) = rows[i][j];
    return out;
}

inline KMatrix layer_shift(FieldPtr k, std::size_t n, int low)
{
    std::size_t d = n * static_cast<std::size_t>(1 - low);
    KMatrix P(k, d, d);
    for (std::size_t a = 0; a + n < d; ++a)
        P(a, a + n) = 1;
    return P;
}

/// O-span of generator rows: close under the pi action.
inline KMatrix o_span(const KMatrix& gens, const KMatrix& pi)
{
    KMatrix span = gens.rows() ? gens.row_space() : gens;
    KMatrix frontier = span;
    while (frontier.rows()) {
        KMatrix next = frontier * pi;
        KMatrix grown = KMatrix::vstack(span, next).row_space();
        if (grown.rows() == span.rows())
            break;
        span = grown;
        frontier = next;
    }
    return span;
}

inline bool kernel_is_layer0(const KMatrix& Mbar, const KMatrix& pi, std::size_t n, int low)
{
    std::size_t d = pi.rows();
    KMatrix layer0(pi.field(), n, d);
    for (std::size_t i = 0; i < n; ++i)
        layer0(i, static_cast<std::size_t>(-low) * n + i) = 1;
    if (Mbar.rows() == 0)
        return n == 0;
    KMatrix c = (Mbar * pi).left_kernel();
    KMatrix ker = c.rows() ? c * Mbar : KMatrix(pi.field(), 0, d);
    if (ker.rank() != n)
        return false;
    return KMatrix::vstack(ker, layer0).rank() == n;
}

struct Scales {
    Series phi0, phi1;
    int low = 0;
};

inline Scales scales_for(const BaseData& b, SHFlavor f)
{
    Series inv = b.pi0.inverse();
    switch (f) {
    case SHFlavor::E1: return {b.one(), inv, 0};
    case SHFlavor::General: return {b.pi_power(1) * inv, inv, 1 - b.e()};
    case SHFlavor::Prime: return {inv, inv, -b.e()};
    }
    return {};
}

inline SHObject build_sh(const SigmaModule& M, SHFlavor flavor)
{
    const BaseData& b = M.base;
    Scales sc = scales_for(b, flavor);
    SHObject o;
    o.flavor = flavor;
    o.k = b.k;
    o.q = b.q;
    o.n = M.rank();
    o.e = b.e();
    o.low = sc.low;
    std::size_t d = o.ambient_dim();
    o.pi_action = layer_shift(b.k, o.n, o.low);
    std::vector<std::vector<GaloisField::Code>> r0;
    for (std::size_t i = 0; i < o.n; ++i) {
        std::vector<GaloisField::Code> x(o.n, 0);
        x[i] = 1;
        r0.push_back(phi_image(M, x, sc.phi0, o.low));
    }
    o.phi0 = rows_to_matrix(b.k, r0, d);
    if (flavor == SHFlavor::Prime) {
        o.M1 = KMatrix(b.k, 0, o.n);
        o.phi1 = KMatrix(b.k, 0, d);
    } else {
        KMatrix lk = o.phi0.left_kernel(); // sigma(x) in here
        o.M1 = lk.rows() ? lk.inverse_frobenius(b.q) : KMatrix(b.k, 0, o.n);
        std::vector<std::vector<GaloisField::Code>> r1;
        for (std::size_t j = 0; j < o.M1.rows(); ++j)
            r1.push_back(phi_image(M, o.M1.row(j), sc.phi1, o.low));
        o.phi1 = rows_to_matrix(b.k, r1, d);
    }
    KMatrix gens = KMatrix::vstack(o.phi0, o.phi1);
    if (flavor == SHFlavor::E1) {
        // M0 = M / pi0 M is the whole ambient; the axiom is phi0(M0) + phi1(M1) = M0
        o.Mbar = KMatrix::identity(b.k, d);
        o.spans = gens.rank() == d;
        o.kernel_is_layer0 = true;
    } else {
        o.Mbar = o_span(gens, o.pi_action);
        o.spans = o_span(o.phi0.rows() ? KMatrix::vstack(o.phi0, o.phi1) : o.phi1, o.pi_action).rank() == o.Mbar.rank();
        o.kernel_is_layer0 = kernel_is_layer0(o.Mbar, o.pi_action, o.n, o.low);
    }
    return o;
}

} // namespace detail

/// e = 1: M0 = M / pi0 M, phi0 = Phi mod pi0, M1 = Ker phi0, phi1 from Phi / pi0.
inline SHObject sh_e1(const SigmaModule& M)
{
    detail::require_mod1(M, "sh_e1");
    if (M.base.e() != 1)
        throw Error(ErrorKind::Domain, "sh_e1 needs e = 1, got e = " + std::to_string(M.base.e()));
    return detail::build_sh(M, SHFlavor::E1);
}

/// e <= q-1: Mbar inside pi^{1-e} M / pi M, phi0 from (pi/pi0) Phi, phi1 from Phi / pi0.
/// The generators (1/pi0) Phi(m) "with Phi(m) = 0" are read as m in Ker phi0.
inline SHObject sh_general(const SigmaModule& M)
{
    detail::require_mod1(M, "sh_general");
    if (static_cast<std::uint64_t>(M.base.e()) > M.base.q - 1)
        throw Error(ErrorKind::Domain, "sh_general needs e <= q-1");
    return detail::build_sh(M, SHFlavor::General);
}

/// Mbar inside pi^{-e} M / pi M generated by (1/pi0) Phi(m); phi0 is lift-independent only for e <= q-1.
inline SHObject sh_prime(const SigmaModule& M)
{
    detail::require_mod1(M, "sh_prime");
    SHObject o = detail::build_sh(M, SHFlavor::Prime);
    o.well_defined = static_cast<std::uint64_t>(o.e) <= o.q - 1;
    if (!o.well_defined)
        o.notes.push_back("e > q-1: phi0 depends on the choice of lifts");
    return o;
}

/// For e = 1 with pi0 = u pi: general.phi0 = u0^{-1} e1.phi0, same M1 and phi1, Mbar = M0.
inline bool sh_e1_general_agree(const SigmaModule& M)
{
    SHObject a = sh_e1(M), g = sh_general(M);
    const BaseData& b = M.base;
    auto u0 = (b.pi0 * b.pi_power(1).inverse()).residue();
    auto ui = b.k->inv(u0);
    KMatrix scaled = a.phi0;
    for (std::size_t i = 0; i < scaled.rows(); ++i)
        for (std::size_t j = 0; j < scaled.cols(); ++j)
            scaled(i, j) = b.k->mul(scaled(i, j), ui);
    return g.phi0 == scaled && g.M1 == a.M1 && g.phi1 == a.phi1 && g.Mbar.rank() == a.Mbar.rank();
}

/// Map of ambient spaces induced by f, and the compatibility checks on generators.
struct SHMapCheck {
    KMatrix F;
    bool maps_Mbar = false;
    bool phi0_commutes = false;
    bool phi1_commutes = false;
    bool ok() const { return maps_Mbar && phi0_commutes && phi1_commutes; }
};

inline SHMapCheck sh_functoriality(const ModuleHom& f, SHFlavor flavor)
{
    auto build = [&](const SigmaModule& M) {
        switch (flavor) {
        case SHFlavor::E1: return sh_e1(M);
        case SHFlavor::General: return sh_general(M);
        default: return sh_prime(M);
        }
    };
    SHObject s = build(f.source), t = build(f.target);
    const BaseData& b = f.source.base;
    auto sc = detail::scales_for(b, flavor);
    std::size_t n1 = s.n, n2 = t.n;
    SHMapCheck r;
    r.F = KMatrix(b.k, s.ambient_dim(), t.ambient_dim());
    for (int layer = s.low; layer <= 0; ++layer)
        for (std::size_t i = 0; i < n1; ++i) {
            SeriesMatrix row = f.U.block(i, 0, 1, n2).scaled(b.pi_power(layer));
            auto dg = detail::ambient_digits(row, t.low);
            for (std::size_t j = 0; j < dg.size(); ++j)
                r.F(static_cast<std::size_t>(layer - s.low) * n1 + i, j) = dg[j];
        }
    KMatrix img = s.Mbar * r.F;
    r.maps_Mbar = img.rows() == 0 || KMatrix::vstack(t.Mbar, img).rank() == t.Mbar.rank();
    KMatrix Ubar = f.U.residue();
    r.phi0_commutes = true;
    for (std::size_t i = 0; i < n1; ++i) {
        std::vector<GaloisField::Code> x(n1, 0);
        x[i] = 1;
        KMatrix lhs = KMatrix(b.k, 1, n1);
        lhs(0, i) = 1;
        auto fx = (lhs * Ubar).row(0);
        KMatrix phi_row(b.k, 1, s.ambient_dim());
        for (std::size_t j = 0; j < s.ambient_dim(); ++j)
            phi_row(0, j) = s.phi0(i, j);
        if ((phi_row * r.F).row(0) != detail::phi_image(f.target, fx, sc.phi0, t.low))
            r.phi0_commutes = false;
    }
    r.phi1_commutes = true;
    for (std::size_t j = 0; j < s.M1.rows(); ++j) {
        KMatrix xj(b.k, 1, n1);
        for (std::size_t c = 0; c < n1; ++c)
            xj(0, c) = s.M1(j, c);
        auto fx = (xj * Ubar).row(0);
        KMatrix phi_row(b.k, 1, s.ambient_dim());
        for (std::size_t c = 0; c < s.ambient_dim(); ++c)
            phi_row(0, c) = s.phi1(j, c);
        if ((phi_row * r.F).row(0) != detail::phi_image(f.target, fx, sc.phi1, t.low))
            r.phi1_commutes = false;
    }
    return r;
}

} // namespace strictmod
