#pragma once

#include <string>
#include <vector>

#include "strictmod/base.hpp"
#include "strictmod/semilinear.hpp"

namespace strictmod {

/// Outcome of one matrix identity, with the precision at which it was decided.
struct Check {
    bool ok = false;
    int prec = 0;
};

struct Certificate {
    bool integral = false;          // entries of C and D lie in O
    Check det_nonzero;              // det C != 0
    Series det;
    Check nilpotent;                // D^n == 0
    Check semilinear;               // sigma(D) C == C D
    Check strict;                   // B = (D - pi0 E) C^{-1} integral
    Check remark_b;                 // sigma(D) - pi0 E == C B
    SeriesMatrix B;
    bool has_B = false;
    std::vector<std::string> failures;

    bool module_ok() const { return integral && det_nonzero.ok && nilpotent.ok && semilinear.ok; }
    bool valid() const { return module_ok() && strict.ok && remark_b.ok; }
};

class SigmaModule {
public:
    BaseData base;
    SeriesMatrix C;
    SeriesMatrix D;
    Certificate cert;

    std::size_t rank() const { return C.rows(); }
    bool valid() const { return cert.valid(); }

    void require_valid(const std::string& what) const
    {
        if (!valid()) {
            std::string msg = what + ": module is not a valid strict module";
            for (const auto& f : cert.failures)
                msg += "; " + f;
            throw Error(ErrorKind::Domain, msg);
        }
    }
};

/// Checks the matrix criteria for (C, D) and records a certificate.
inline SigmaModule validate_module(const BaseData& base, const SeriesMatrix& C, const SeriesMatrix& D)
{
    if (!C.is_square() || !D.is_square() || C.rows() != D.rows())
        throw Error(ErrorKind::Mismatch, "C and D must be square of equal size");
    SigmaModule M;
    M.base = base;
    M.C = C;
    M.D = D;
    Certificate& c = M.cert;
    std::size_t n = C.rows();
    if (n == 0) {
        c.integral = true;
        c.det_nonzero = c.nilpotent = c.semilinear = c.strict = c.remark_b = {true, base.prec};
        c.det = base.one();
        c.B = C;
        c.has_B = true;
        return M;
    }
    c.integral = C.is_integral() && D.is_integral();
    if (!c.integral)
        c.failures.push_back("entries of C or D are not integral");

    auto det = mat_det(C);
    c.det = det.value;
    c.det_nonzero = {!det.value.is_zero(), det.value.precision()};
    if (!c.det_nonzero.ok)
        c.failures.push_back(det.structural_zero ? "det C is structurally zero" : "det C is zero to precision " + std::to_string(det.value.precision()));

    SeriesMatrix Dn = base.identity(n);
    for (std::size_t i = 0; i < n; ++i)
        Dn = Dn * D;
    c.nilpotent = {Dn.is_zero(), Dn.min_precision()};
    if (!c.nilpotent.ok)
        c.failures.push_back("D is not nilpotent (D^n != 0 mod pi^" + std::to_string(Dn.min_precision()) + ")");

    SeriesMatrix sD = D.sigma(base.q);
    SeriesMatrix diff = sD * C - C * D;
    c.semilinear = {diff.is_zero(), diff.min_precision()};
    if (!c.semilinear.ok)
        c.failures.push_back("semilinearity fails: sigma(D) C != C D");

    if (c.det_nonzero.ok) {
        SeriesMatrix piE = base.identity(n).scaled(base.pi0);
        auto sol = mat_solve_left(C, D - piE);
        c.B = sol.X;
        c.has_B = true;
        c.strict = {sol.integral, sol.X.min_precision()};
        if (!sol.integral)
            c.failures.push_back("strictness fails: B = (D - pi0 E) C^-1 is not integral");
        SeriesMatrix rb = sD - piE - C * sol.X;
        c.remark_b = {rb.is_zero(), rb.min_precision()};
        if (!c.remark_b.ok)
            c.failures.push_back("sigma(D) - pi0 E != C B");
    }
    return M;
}

/// Rank-one module C = (lambda), D = (0).
inline SigmaModule mu_lambda(const BaseData& base, const Series& lambda)
{
    if (lambda.is_zero())
        throw Error(ErrorKind::Domain, "mu_lambda needs lambda != 0");
    SeriesMatrix C = base.zeros(1, 1), D = base.zeros(1, 1);
    C(0, 0) = lambda.truncated(base.prec);
    return validate_module(base, C, D);
}

inline SigmaModule zero_module(const BaseData& base)
{
    return validate_module(base, base.zeros(0, 0), base.zeros(0, 0));
}

struct ModuleHom {
    SigmaModule source;
    SigmaModule target;
    SeriesMatrix U; // f(m1) = U m2, shape n1 x n2
};

struct HomReport {
    Check phi;  // C1 U == sigma(U) C2
    Check pi0;  // D1 U == U D2
    bool ok() const { return phi.ok && pi0.ok; }
};

inline HomReport hom_check(const ModuleHom& f)
{
    const auto& M1 = f.source;
    const auto& M2 = f.target;
    if (f.U.rows() != M1.rank() || f.U.cols() != M2.rank())
        throw Error(ErrorKind::Mismatch, "hom matrix has the wrong shape");
    if (!M1.base.same_as(M2.base))
        throw Error(ErrorKind::Mismatch, "hom between modules over different bases");
    HomReport r;
    if (f.U.rows() == 0 || f.U.cols() == 0) {
        r.phi = r.pi0 = {true, M1.base.prec};
        return r;
    }
    SeriesMatrix a = M1.C * f.U - f.U.sigma(M1.base.q) * M2.C;
    SeriesMatrix b = M1.D * f.U - f.U * M2.D;
    r.phi = {a.is_zero(), a.min_precision()};
    r.pi0 = {b.is_zero(), b.min_precision()};
    return r;
}

inline ModuleHom identity_hom(const SigmaModule& M)
{
    return {M, M, M.base.identity(M.rank())};
}

inline ModuleHom compose(const ModuleHom& f, const ModuleHom& g)
{
    if (f.target.rank() != g.source.rank())
        throw Error(ErrorKind::Mismatch, "composition of incompatible homs");
    return {f.source, g.target, f.U * g.U};
}

/// The linear system C1 U - sigma(U) C2 = 0, D1 U - U D2 = 0, stacked side by side.
inline SemilinearSystem hom_system(const SigmaModule& M1, const SigmaModule& M2)
{
    const BaseData& b = M1.base;
    std::size_t n1 = M1.rank(), n2 = M2.rank();
    SemilinearSystem sys;
    sys.field = b.k;
    sys.q = b.q;
    sys.rows = n1;
    sys.cols = n2;
    SeriesMatrix I2 = b.identity(n2), Z2 = b.zeros(n2, n2), I1 = b.identity(n1);
    SeriesMatrix left_id = SeriesMatrix::hstack(I2, Z2);
    SeriesMatrix right_id = SeriesMatrix::hstack(Z2, I2);
    sys.terms.push_back({M1.C, left_id, false});
    sys.terms.push_back({-I1, SeriesMatrix::hstack(M2.C, Z2), true});
    sys.terms.push_back({M1.D, right_id, false});
    sys.terms.push_back({-I1, SeriesMatrix::hstack(Z2, M2.D), false});
    return sys;
}

struct HomSpace {
    std::vector<ModuleHom> basis; // an F_q basis
    int dimension = 0;            // over F_q
    int certified_digits = 0;
};

/// All homs M1 -> M2, as an F_q basis certified modulo pi^certified_digits.
inline HomSpace hom_solve(const SigmaModule& M1, const SigmaModule& M2, int t_hi = 0)
{
    if (!M1.base.same_as(M2.base))
        throw Error(ErrorKind::Mismatch, "hom_solve over different bases");
    HomSpace out;
    if (M1.rank() == 0 || M2.rank() == 0) {
        out.certified_digits = M1.base.prec;
        return out;
    }
    auto sys = hom_system(M1, M2);
    auto sol = solve_stable(sys, t_hi > 0 ? t_hi : M1.base.prec);
    out.certified_digits = sol.certified_digits;
    auto fq = fq_basis(*M1.base.k, M1.base.q, sol.basis);
    for (const auto& v : fq)
        out.basis.push_back({M1, M2, vector_to_matrix(M1.base.k, v, M1.rank(), M2.rank(), sol.certified_digits)});
    out.dimension = static_cast<int>(out.basis.size());
    return out;
}

/// Every element of the hom space (q^dim of them), for small spaces.
inline std::vector<ModuleHom> hom_enumerate(const HomSpace& H, const SigmaModule& M1, const SigmaModule& M2, std::size_t cap = 4096)
{
    const BaseData& b = M1.base;
    std::size_t total = 1;
    for (int i = 0; i < H.dimension; ++i) {
        total *= b.q;
        if (total > cap)
            throw Error(ErrorKind::Capacity, "hom space too large to enumerate");
    }
    GaloisField::Code gamma = fq_generator(*b.k, b.q);
    std::vector<GaloisField::Code> fq{0};
    for (std::uint64_t i = 0; i + 1 < b.q; ++i)
        fq.push_back(b.k->exp(static_cast<std::uint64_t>(b.k->log(gamma)) * i));
    std::vector<ModuleHom> out;
    for (std::size_t idx = 0; idx < total; ++idx) {
        SeriesMatrix U(b.k, M1.rank(), M2.rank(), H.certified_digits);
        std::size_t r = idx;
        for (int i = 0; i < H.dimension; ++i) {
            auto c = fq[r % b.q];
            r /= b.q;
            U = U + H.basis[i].U.scaled(Series::constant(b.k, c, H.certified_digits));
        }
        out.push_back({M1, M2, U});
    }
    return out;
}

inline SigmaModule direct_sum(const SigmaModule& M1, const SigmaModule& M2)
{
    if (!M1.base.same_as(M2.base))
        throw Error(ErrorKind::Mismatch, "direct sum over different bases");
    int prec = M1.base.prec;
    return validate_module(M1.base, SeriesMatrix::block_diag(M1.C, M2.C, prec), SeriesMatrix::block_diag(M1.D, M2.D, prec));
}

/// New basis m' = U m: C' = sigma(U) C U^-1, D' = U D U^-1.
inline SigmaModule change_basis(const SigmaModule& M, const SeriesMatrix& U)
{
    if (!is_unimodular(U))
        throw Error(ErrorKind::Domain, "change of basis must be unimodular over O");
    auto inv = mat_inverse(U);
    if (!inv)
        throw Error(ErrorKind::Precision, "change of basis not invertible to precision");
    return validate_module(M.base, U.sigma(M.base.q) * M.C * *inv, U * M.D * *inv);
}

/// The dual module: C = -B^T, D = D^T; homs dualize by transposition.
inline SigmaModule dual(const SigmaModule& M)
{
    M.require_valid("dual");
    return validate_module(M.base, (-M.cert.B).transpose(), M.D.transpose());
}

inline ModuleHom dual_hom(const ModuleHom& f)
{
    return {dual(f.target), dual(f.source), f.U.transpose()};
}

/// 0 -> left --i--> middle --j--> right -> 0
struct ShortExactSequence {
    SigmaModule left, middle, right;
    ModuleHom i, j;
};

struct SesReport {
    HomReport i_hom, j_hom;
    bool i_pure = false;
    bool j_surjective = false;
    Check composite_zero;
    bool ranks_add = false;
    bool ok() const { return i_hom.ok() && j_hom.ok() && i_pure && j_surjective && composite_zero.ok && ranks_add; }
};

inline SesReport check_ses(const ShortExactSequence& s)
{
    SesReport r;
    r.i_hom = hom_check(s.i);
    r.j_hom = hom_check(s.j);
    r.i_pure = s.i.U.rows() == 0 || is_pure_embedding_matrix(s.i.U);
    r.j_surjective = s.j.U.cols() == 0 || is_surjection_matrix(s.j.U);
    r.ranks_add = s.left.rank() + s.right.rank() == s.middle.rank();
    if (s.i.U.rows() == 0 || s.j.U.cols() == 0)
        r.composite_zero = {true, s.middle.base.prec};
    else {
        SeriesMatrix ij = s.i.U * s.j.U;
        r.composite_zero = {ij.is_zero(), ij.min_precision()};
    }
    return r;
}

} // namespace strictmod
