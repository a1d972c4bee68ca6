#pragma once

#include <optional>
#include <string>
#include <vector>

#include "strictmod/modcat.hpp"

namespace strictmod {

/// Row-elimination over O with minimal-valuation pivots: P A has its nonzero
/// rows first; returns the unimodular P and the number of nonzero rows.
inline std::pair<SeriesMatrix, std::size_t> row_reduce_over_O(const SeriesMatrix& A, int prec)
{
    std::size_t r = A.rows(), c = A.cols();
    SeriesMatrix M = A, P = SeriesMatrix::identity(A.field(), r, prec);
    std::size_t rank = 0;
    std::vector<bool> used_col(c, false);
    while (rank < r) {
        std::size_t pi = r, pj = c;
        int best = INT_MAX;
        for (std::size_t i = rank; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j)
                if (!used_col[j] && !M(i, j).is_zero() && M(i, j).valuation() < best) {
                    best = M(i, j).valuation();
                    pi = i;
                    pj = j;
                }
        if (pi == r)
            break;
        for (std::size_t j = 0; j < c; ++j)
            std::swap(M(pi, j), M(rank, j));
        for (std::size_t j = 0; j < r; ++j)
            std::swap(P(pi, j), P(rank, j));
        Series inv = M(rank, pj).inverse();
        for (std::size_t i = 0; i < r; ++i) {
            if (i == rank || M(i, pj).is_zero())
                continue;
            Series f = (M(i, pj) * inv).truncated(prec);
            for (std::size_t j = 0; j < c; ++j)
                M(i, j) = M(i, j) - f * M(rank, j);
            for (std::size_t j = 0; j < r; ++j)
                P(i, j) = (P(i, j) - f * P(rank, j)).truncated(prec);
        }
        used_col[pj] = true;
        ++rank;
    }
    return {P, rank};
}

/// Rank over K (pivots that are nonzero to precision).
inline std::size_t rank_over_K(const SeriesMatrix& A)
{
    return row_reduce_over_O(A, std::max(1, A.min_precision())).second;
}

/// Basis (rows) of the saturated left kernel {x : x A = 0}.
inline SeriesMatrix saturated_left_kernel(const SeriesMatrix& A, int prec)
{
    auto [P, rank] = row_reduce_over_O(A, prec);
    return P.block(rank, 0, A.rows() - rank, A.rows());
}

/// Coordinates of the rows of Vv in the pure sublattice spanned by the rows of S, if they lie in it.
inline std::optional<SeriesMatrix> sub_coordinates(const SeriesMatrix& S, const SeriesMatrix& Vv)
{
    std::size_t a = S.rows(), n = S.cols();
    KMatrix span = S.residue();
    SeriesMatrix full = S;
    for (std::size_t c = 0; c < n && full.rows() < n; ++c) {
        KMatrix e(S.field(), 1, n);
        e(0, c) = 1;
        KMatrix trial = KMatrix::vstack(span, e);
        if (trial.rank() > span.rank()) {
            span = trial;
            SeriesMatrix row = SeriesMatrix(S.field(), 1, n, S.min_precision());
            row(0, c) = Series::one(S.field(), S.min_precision());
            full = SeriesMatrix::vstack(full, row);
        }
    }
    auto inv = mat_inverse(full);
    if (!inv || full.rows() != n)
        return std::nullopt;
    SeriesMatrix x = Vv * *inv;
    if (a < n && !x.block(0, a, x.rows(), n - a).is_zero())
        return std::nullopt;
    return x.block(0, 0, x.rows(), a);
}

/// Levels M^(1..L) with pure inclusions incl[l]: M^(l+1) -> M^(l+2) and
/// surjections proj[l]: M^(l+2) -> M^(l+1) (0-based vectors).
struct DivisibleTower {
    std::vector<SigmaModule> levels;
    std::vector<ModuleHom> incl;
    std::vector<ModuleHom> proj;
    std::string basis_note;

    std::size_t height() const { return levels.empty() ? 0 : levels[0].rank(); }
};

/// The u-adic tower of M: level l has generators m1^(k), m2^(k), 1 <= k <= l, with
///   Phi m1^(k) = -B m1^(k) + m2^(k-1) - D m2^(k),  Phi m2^(k) = C m2^(k) + m1^(k),
///   [pi0] m^(k) = m^(k-1).
/// For D = 0 this is the construction with C~ = -B.
inline SigmaModule tower_level(const SigmaModule& M, std::size_t l)
{
    M.require_valid("tower_level");
    const BaseData& b = M.base;
    std::size_t n = M.rank(), R = 2 * n * l;
    SeriesMatrix C = b.zeros(R, R), D = b.zeros(R, R);
    SeriesMatrix I = b.identity(n);
    for (std::size_t k = 0; k < l; ++k) {
        std::size_t m1 = 2 * n * k, m2 = m1 + n;
        C.set_block(m1, m1, -M.cert.B);
        C.set_block(m1, m2, -M.D);
        if (k > 0)
            C.set_block(m1, m2 - 2 * n, I);
        C.set_block(m2, m2, M.C);
        C.set_block(m2, m1, I);
        if (k > 0) {
            D.set_block(m1, m1 - 2 * n, I);
            D.set_block(m2, m2 - 2 * n, I);
        }
    }
    return validate_module(b, C, D);
}

inline DivisibleTower build_tower(const SigmaModule& M, std::size_t L)
{
    if (L < 1)
        throw Error(ErrorKind::Domain, "a tower needs at least one level");
    const BaseData& b = M.base;
    std::size_t n = M.rank();
    DivisibleTower T;
    for (std::size_t l = 1; l <= L; ++l)
        T.levels.push_back(tower_level(M, l));
    for (std::size_t l = 1; l < L; ++l) {
        std::size_t a = 2 * n * l, c = 2 * n * (l + 1);
        SeriesMatrix inc = b.zeros(a, c);
        inc.set_block(0, 0, b.identity(a));
        SeriesMatrix pr = b.zeros(c, a);
        pr.set_block(2 * n, 0, b.identity(a));
        T.incl.push_back({T.levels[l - 1], T.levels[l], inc});
        T.proj.push_back({T.levels[l], T.levels[l - 1], pr});
    }
    T.basis_note = "level l basis: blocks k = 1..l of (m1^(k), m2^(k)), each of size n";
    return T;
}

/// M^(N) -> M: m2^(k) -> D^{N-k} m, m1^(k) -> 0.  Needs D^N = 0.
inline ModuleHom tower_surjection(const SigmaModule& M, const DivisibleTower& T, std::size_t N)
{
    const BaseData& b = M.base;
    std::size_t n = M.rank();
    SeriesMatrix U = b.zeros(2 * n * N, n);
    SeriesMatrix Dp = b.identity(n);
    for (std::size_t k = N; k-- > 0;) {
        U.set_block(2 * n * k + n, 0, Dp);
        Dp = Dp * M.D;
    }
    return {T.levels.at(N - 1), M, U};
}

struct TowerN1 {
    DivisibleTower tower;
    ModuleHom surjection; // M^(1) -> M
};

/// The construction for [pi0] M = 0 and C dividing pi0 E.
inline TowerN1 build_tower_N1(const SigmaModule& M, std::size_t L)
{
    M.require_valid("build_tower_N1");
    if (!M.D.is_zero())
        throw Error(ErrorKind::Domain, "build_tower_N1 needs [pi0] M = 0");
    auto Ct = mat_solve_left(M.C, M.base.identity(M.rank()).scaled(M.base.pi0)); // C~ C = pi0 E
    if (!Ct.integral)
        throw Error(ErrorKind::Domain, "C~ = pi0 C^-1 is not integral");
    TowerN1 out;
    out.tower = build_tower(M, L);
    out.surjection = tower_surjection(M, out.tower, 1);
    return out;
}

/// The dual tower: levels dualized, inclusions and projections swapped and transposed.
inline DivisibleTower dual_tower(const DivisibleTower& T)
{
    DivisibleTower out;
    for (const auto& L : T.levels)
        out.levels.push_back(dual(L));
    for (std::size_t l = 0; l < T.proj.size(); ++l) {
        out.incl.push_back({out.levels[l], out.levels[l + 1], T.proj[l].U.transpose()});
        out.proj.push_back({out.levels[l + 1], out.levels[l], T.incl[l].U.transpose()});
    }
    out.basis_note = "dual of: " + T.basis_note;
    return out;
}

struct DivisibleReport {
    bool ok = true;
    bool vacuous = false;
    std::vector<std::string> failures;
    std::vector<std::string> warnings;
    int checks = 0;

    void fail(const std::string& s)
    {
        ok = false;
        failures.push_back(s);
    }
};

inline DivisibleReport verify_divisible(const DivisibleTower& T)
{
    DivisibleReport r;
    std::size_t L = T.levels.size();
    for (std::size_t l = 0; l < L; ++l) {
        ++r.checks;
        if (!T.levels[l].valid())
            r.fail("level " + std::to_string(l + 1) + " fails the matrix criteria");
    }
    if (L < 2) {
        r.vacuous = true;
        r.warnings.push_back("single level: divisibility identities are vacuous");
        return r;
    }
    if (T.incl.size() != L - 1 || T.proj.size() != L - 1) {
        r.fail("tower has the wrong number of maps");
        return r;
    }
    for (std::size_t l = 0; l + 1 < L; ++l) {
        std::string lv = " at level " + std::to_string(l + 1);
        r.checks += 4;
        if (!hom_check(T.incl[l]).ok())
            r.fail("i is not a hom" + lv);
        if (!hom_check(T.proj[l]).ok())
            r.fail("j is not a hom" + lv);
        if (!is_pure_embedding_matrix(T.incl[l].U))
            r.fail("i is not pure" + lv);
        if (!is_surjection_matrix(T.proj[l].U))
            r.fail("j is not surjective" + lv);
    }
    // composites n -> m
    for (std::size_t n = 1; n < L; ++n) {
        SeriesMatrix iota = T.incl[n - 1].U; // M^(n) -> M^(n+1)
        SeriesMatrix rho = T.proj[n - 1].U;  // M^(n+1) -> M^(n)
        for (std::size_t m = n + 1; m <= L; ++m) {
            if (m > n + 1) {
                iota = iota * T.incl[m - 2].U;
                rho = T.proj[m - 2].U * rho;
            }
            const SigmaModule& Mm = T.levels[m - 1];
            SeriesMatrix Dk = Mm.base.identity(Mm.rank());
            for (std::size_t t = 0; t < m - n; ++t)
                Dk = Dk * Mm.D;
            std::string lv = " for n=" + std::to_string(n) + ", m=" + std::to_string(m);
            r.checks += 2;
            if (!agree(rho * iota, Dk))
                r.fail("j o i != [pi0^(m-n)]" + lv);
            SeriesMatrix Dn = Mm.base.identity(Mm.rank());
            for (std::size_t t = 0; t < n; ++t)
                Dn = Dn * Mm.D;
            bool in_kernel = (iota * Dn).is_zero();
            bool rank_ok = Mm.rank() - rank_over_K(Dn) == T.levels[n - 1].rank();
            if (!in_kernel || !rank_ok || !is_pure_embedding_matrix(iota))
                r.fail("ker [pi0^n] != image of i" + lv);
        }
    }
    return r;
}

/// Extension 0 -> left -> middle -> right -> 0 in standard form:
/// C = [[C_left, 0], [X, C_right]], D = [[D_left, 0], [Y, D_right]].
struct Extension {
    SigmaModule left, right;
    SeriesMatrix X, Y; // right.rank() x left.rank()
    SigmaModule middle;

    ShortExactSequence ses() const
    {
        const BaseData& b = left.base;
        std::size_t n1 = left.rank(), n2 = right.rank();
        SeriesMatrix ui = b.zeros(n1, n1 + n2), uj = b.zeros(n1 + n2, n2);
        ui.set_block(0, 0, b.identity(n1));
        uj.set_block(n1, 0, b.identity(n2));
        return {left, middle, right, {left, middle, ui}, {middle, right, uj}};
    }
};

inline Extension make_extension(const SigmaModule& left, const SigmaModule& right, const SeriesMatrix& X, const SeriesMatrix& Y)
{
    const BaseData& b = left.base;
    if (!b.same_as(right.base))
        throw Error(ErrorKind::Mismatch, "extension endpoints over different bases");
    std::size_t n1 = left.rank(), n2 = right.rank();
    if (X.rows() != n2 || X.cols() != n1 || Y.rows() != n2 || Y.cols() != n1)
        throw Error(ErrorKind::Mismatch, "extension class has the wrong shape");
    SeriesMatrix C = b.zeros(n1 + n2, n1 + n2), D = C;
    C.set_block(0, 0, left.C);
    C.set_block(n1, 0, X);
    C.set_block(n1, n1, right.C);
    D.set_block(0, 0, left.D);
    D.set_block(n1, 0, Y);
    D.set_block(n1, n1, right.D);
    Extension e{left, right, X, Y, validate_module(b, C, D)};
    return e;
}

inline Extension split_extension(const SigmaModule& left, const SigmaModule& right)
{
    const BaseData& b = left.base;
    return make_extension(left, right, b.zeros(right.rank(), left.rank()), b.zeros(right.rank(), left.rank()));
}

/// Rewrites a short exact sequence in standard form by a basis change of the middle.
inline Extension to_standard_form(const ShortExactSequence& s)
{
    auto rep = check_ses(s);
    if (!rep.ok())
        throw Error(ErrorKind::Domain, "not a short exact sequence");
    const BaseData& b = s.middle.base;
    std::size_t n1 = s.left.rank(), n = s.middle.rank(), n2 = s.right.rank();
    KMatrix span = s.i.U.residue();
    SeriesMatrix W0 = b.zeros(n2, n);
    std::size_t row = 0;
    for (std::size_t c = 0; c < n && row < n2; ++c) {
        KMatrix e(b.k, 1, n);
        e(0, c) = 1;
        KMatrix trial = KMatrix::vstack(span, e);
        if (trial.rank() > span.rank()) {
            span = trial;
            W0(row++, c) = b.one();
        }
    }
    auto inv = mat_inverse(W0 * s.j.U);
    if (!inv)
        throw Error(ErrorKind::Precision, "complement does not map onto the quotient");
    SeriesMatrix W = *inv * W0;
    SeriesMatrix V = SeriesMatrix::vstack(s.i.U, W);
    SigmaModule Mp = change_basis(s.middle, V);
    Extension e = make_extension(s.left, s.right, Mp.C.block(n1, 0, n2, n1), Mp.D.block(n1, 0, n2, n1));
    if (!agree(Mp.C, e.middle.C) || !agree(Mp.D, e.middle.D))
        throw Error(ErrorKind::Precision, "standard form does not reproduce the middle module");
    return e;
}

/// alpha_* e along alpha: left -> T.
inline Extension pushout(const Extension& e, const ModuleHom& alpha)
{
    if (!hom_check(alpha).ok())
        throw Error(ErrorKind::Domain, "pushout: alpha is not a module hom");
    if (alpha.U.rows() != e.left.rank())
        throw Error(ErrorKind::Mismatch, "pushout: alpha does not start at the left end");
    if (!is_pure_embedding_matrix(alpha.U))
        throw Error(ErrorKind::Domain, "pushout: alpha is not pure");
    return make_extension(alpha.target, e.right, e.X * alpha.U, e.Y * alpha.U);
}

/// beta^* e along beta: S -> right.  With pure = false any hom is accepted.
inline Extension pullback(const Extension& e, const ModuleHom& beta, bool require_pure = true)
{
    if (!hom_check(beta).ok())
        throw Error(ErrorKind::Domain, "pullback: beta is not a module hom");
    if (beta.U.cols() != e.right.rank())
        throw Error(ErrorKind::Mismatch, "pullback: beta does not end at the right end");
    if (require_pure && !is_pure_embedding_matrix(beta.U))
        throw Error(ErrorKind::Domain, "pullback: beta is not pure");
    return make_extension(e.left, beta.source, beta.U.sigma(e.left.base.q) * e.X, beta.U * e.Y);
}

inline Extension direct_sum(const Extension& a, const Extension& b)
{
    int prec = a.left.base.prec;
    return make_extension(direct_sum(a.left, b.left), direct_sum(a.right, b.right), SeriesMatrix::block_diag(a.X, b.X, prec),
                          SeriesMatrix::block_diag(a.Y, b.Y, prec));
}

struct BaerResult {
    Extension difference;
    bool matches_formula = false; // agrees with (X1 - X2, Y1 - Y2)
};

/// e1 - e2: pull back e1 (+) e2 along the diagonal, push out along (1, -1).
inline BaerResult baer_difference(const Extension& e1, const Extension& e2)
{
    const BaseData& b = e1.left.base;
    if (!agree(e1.left.C, e2.left.C) || !agree(e1.left.D, e2.left.D) || !agree(e1.right.C, e2.right.C) ||
        !agree(e1.right.D, e2.right.D))
        throw Error(ErrorKind::Mismatch, "Baer difference needs equal endpoints");
    std::size_t n1 = e1.left.rank(), n2 = e1.right.rank();
    Extension sum = direct_sum(e1, e2);
    SeriesMatrix diag = b.zeros(n2, 2 * n2);
    diag.set_block(0, 0, b.identity(n2));
    diag.set_block(0, n2, b.identity(n2));
    SeriesMatrix anti = b.zeros(2 * n1, n1);
    anti.set_block(0, 0, b.identity(n1));
    anti.set_block(n1, 0, -b.identity(n1));
    Extension pb = pullback(sum, {e1.right, sum.right, diag}, false);
    Extension po = make_extension(e1.left, pb.right, pb.X * anti, pb.Y * anti); // the antidiagonal is onto, not pure
    if (!hom_check({pb.left, e1.left, anti}).ok())
        throw Error(ErrorKind::Domain, "antidiagonal is not a hom");
    BaerResult r{po, false};
    r.matches_formula = agree(po.X, e1.X - e2.X) && agree(po.Y, e1.Y - e2.Y);
    return r;
}

struct Equivalence {
    bool equivalent = false;
    SeriesMatrix V;          // middle iso [[E, 0], [V, E]]
    int certified_digits = 0;
};

/// e ~ e' iff X - X' = sigma(V) C_left - C_right V and Y - Y' = V D_left - D_right V for some V over O.
inline Equivalence extensions_equivalent(const Extension& e, const Extension& f, int t_hi = 0)
{
    const BaseData& b = e.left.base;
    std::size_t n1 = e.left.rank(), n2 = e.right.rank();
    Equivalence out;
    if (n1 == 0 || n2 == 0) {
        out.equivalent = true;
        out.V = b.zeros(n2, n1);
        out.certified_digits = b.prec;
        return out;
    }
    SemilinearSystem sys;
    sys.field = b.k;
    sys.q = b.q;
    sys.rows = n2;
    sys.cols = n1;
    SeriesMatrix I1 = b.identity(n1), Z1 = b.zeros(n1, n1), I2 = b.identity(n2);
    sys.terms.push_back({I2, SeriesMatrix::hstack(e.left.C, Z1), true});
    sys.terms.push_back({-e.right.C, SeriesMatrix::hstack(I1, Z1), false});
    sys.terms.push_back({I2, SeriesMatrix::hstack(Z1, e.left.D), false});
    sys.terms.push_back({-e.right.D, SeriesMatrix::hstack(Z1, I1), false});
    sys.rhs = SeriesMatrix::hstack(e.X - f.X, e.Y - f.Y);
    auto sol = solve_stable(sys, t_hi > 0 ? t_hi : b.prec);
    out.certified_digits = sol.certified_digits;
    out.equivalent = sol.consistent;
    if (sol.consistent)
        out.V = vector_to_matrix(b.k, sol.particular, n2, n1, sol.certified_digits);
    return out;
}

inline bool is_split(const Extension& e, int t_hi = 0)
{
    return extensions_equivalent(e, split_extension(e.left, e.right), t_hi).equivalent;
}

/// Steps of the inductive argument for N > 1, recomputed as a cross-check.
struct InductionTrace {
    bool computed = false;
    SigmaModule M1, M2;       // ker [pi0^{N-1}] and the quotient M / M1
    Extension eps;            // 0 -> M1 -> M -> M2 -> 0
    DivisibleTower T;         // tower receiving M1 at level N-1 and M2 at level 1
    ModuleHom alpha, beta;    // M1 -> T^(N-1) pure, M2 -> T^(1) induced by alpha
    bool beta_pure = false;
    Extension alpha_eps;      // alpha_* eps
    Extension beta_eta;       // beta^* eta_N
    Extension difference;     // alpha_* eps - beta^* eta_N
    bool difference_killed = false; // [pi0^{N-1}] kills the difference's middle
    std::vector<std::string> notes;
};

struct Embedding {
    std::size_t N = 1;
    DivisibleTower tower;       // tower whose level N receives M
    ModuleHom embedding;        // M -> tower level N, pure
    DivisibleTower cover_tower; // tower whose level N maps onto M
    ModuleHom surjection;       // cover level N -> M
    bool embedding_pure = false;
    bool embedding_hom = false;
    bool surjection_onto = false;
    bool surjection_hom = false;
    DivisibleReport tower_report;
    InductionTrace trace;

    bool ok() const { return embedding_pure && embedding_hom && surjection_onto && surjection_hom && tower_report.ok; }
};

namespace detail {

/// Pure embedding of P (killed by [pi0^N]) into the level-N of the dual tower of P^dual, plus the tower.
inline std::pair<DivisibleTower, ModuleHom> embed_by_duality(const SigmaModule& P, std::size_t levels, std::size_t N)
{
    SigmaModule Pd = dual(P);
    DivisibleTower H = build_tower(Pd, levels);
    ModuleHom f = tower_surjection(Pd, H, N);
    DivisibleTower T = dual_tower(H);
    return {T, {P, T.levels[N - 1], f.U.transpose()}};
}

inline InductionTrace induction_trace(const SigmaModule& M, std::size_t N)
{
    const BaseData& b = M.base;
    InductionTrace tr;
    std::size_t n = M.rank();
    SeriesMatrix DN1 = b.identity(n);
    for (std::size_t t = 0; t + 1 < N; ++t)
        DN1 = DN1 * M.D;
    SeriesMatrix K = saturated_left_kernel(DN1, b.prec);
    std::size_t n1 = K.rows();
    if (n1 == 0 || n1 == n) {
        tr.notes.push_back("ker [pi0^{N-1}] is trivial or everything; no induction step");
        return tr;
    }
    // complete K to a basis; the quotient block is M / M1
    KMatrix span = K.residue();
    SeriesMatrix V = K;
    for (std::size_t c = 0; c < n && V.rows() < n; ++c) {
        KMatrix e(b.k, 1, n);
        e(0, c) = 1;
        KMatrix trial = KMatrix::vstack(span, e);
        if (trial.rank() > span.rank()) {
            span = trial;
            SeriesMatrix row = b.zeros(1, n);
            row(0, c) = b.one();
            V = SeriesMatrix::vstack(V, row);
        }
    }
    SigmaModule Mp = change_basis(M, V);
    std::size_t n2 = n - n1;
    tr.M1 = validate_module(b, Mp.C.block(0, 0, n1, n1), Mp.D.block(0, 0, n1, n1));
    tr.M2 = validate_module(b, Mp.C.block(n1, n1, n2, n2), Mp.D.block(n1, n1, n2, n2));
    if (!tr.M1.valid() || !tr.M2.valid() || !Mp.C.block(0, n1, n1, n2).is_zero() || !Mp.D.block(0, n1, n1, n2).is_zero()) {
        tr.notes.push_back("ker [pi0^{N-1}] does not split off as a submodule to precision");
        return tr;
    }
    tr.eps = make_extension(tr.M1, tr.M2, Mp.C.block(n1, 0, n2, n1), Mp.D.block(n1, 0, n2, n1));

    // alpha: M1 -> T^(N-1) from the dual tower of M1^dual
    SigmaModule M1d = dual(tr.M1);
    DivisibleTower H = build_tower(M1d, N);
    tr.T = dual_tower(H);
    tr.alpha = {tr.M1, tr.T.levels[N - 2], tower_surjection(M1d, H, N - 1).U.transpose()};
    // beta: M2 = [pi0^{N-1}] M sits inside M1; restrict alpha and factor through T^(1)
    auto Vinv = mat_inverse(V);
    if (!Vinv) {
        tr.notes.push_back("adapted basis is not invertible to precision");
        return tr;
    }
    SeriesMatrix img = V.block(n1, 0, n2, n) * DN1 * *Vinv;
    if (!img.block(0, n1, n2, n2).is_zero()) {
        tr.notes.push_back("[pi0^{N-1}] M is not inside ker [pi0^{N-1}]");
        return tr;
    }
    SeriesMatrix into_top = img.block(0, 0, n2, n1) * tr.alpha.U;
    SeriesMatrix inc = tr.T.levels[0].base.identity(tr.T.levels[0].rank());
    for (std::size_t l = 0; l + 2 < N; ++l)
        inc = inc * tr.T.incl[l].U;
    auto coords = sub_coordinates(inc, into_top);
    if (!coords) {
        tr.notes.push_back("alpha on [pi0^{N-1}] M does not land in T^(1)");
        return tr;
    }
    tr.beta = {tr.M2, tr.T.levels[0], *coords};
    tr.beta_pure = is_pure_embedding_matrix(coords->truncated(b.prec));
    if (!tr.beta_pure)
        tr.notes.push_back("beta (alpha restricted to [pi0^{N-1}] M) is not pure");
    if (!hom_check(tr.alpha).ok() || !hom_check(tr.beta).ok()) {
        tr.notes.push_back("alpha or beta is not a hom");
        return tr;
    }
    tr.alpha_eps = pushout(tr.eps, tr.alpha);
    // eta_N: 0 -> T^(N-1) -> T^(N) -> T^(1) -> 0
    SeriesMatrix iN = tr.T.incl[N - 2].U;
    SeriesMatrix jN = tr.T.proj[N - 2].U;
    for (std::size_t l = N - 2; l-- > 0;)
        jN = jN * tr.T.proj[l].U;
    ShortExactSequence eta{tr.T.levels[N - 2], tr.T.levels[N - 1], tr.T.levels[0], {tr.T.levels[N - 2], tr.T.levels[N - 1], iN},
                           {tr.T.levels[N - 1], tr.T.levels[0], jN}};
    Extension etaN = to_standard_form(eta);
    tr.beta_eta = pullback(etaN, tr.beta, false);
    tr.difference = baer_difference(tr.alpha_eps, tr.beta_eta).difference;
    SeriesMatrix Dk = b.identity(tr.difference.middle.rank());
    for (std::size_t t = 0; t + 1 < N; ++t)
        Dk = Dk * tr.difference.middle.D;
    tr.difference_killed = Dk.is_zero();
    tr.computed = true;
    return tr;
}

} // namespace detail

/// Embeds M (with [pi0^N] M = 0) purely into level N of a pi0-divisible tower, and
/// maps level N of the u-adic tower of M onto M.
inline Embedding embed_into_divisible(const SigmaModule& M, std::size_t N, std::size_t max_depth = 8)
{
    M.require_valid("embed_into_divisible");
    if (N < 1 || N > max_depth)
        throw Error(ErrorKind::Capacity, "embedding depth outside 1.." + std::to_string(max_depth));
    const BaseData& b = M.base;
    SeriesMatrix DN = b.identity(M.rank());
    for (std::size_t t = 0; t < N; ++t)
        DN = DN * M.D;
    if (!DN.is_zero())
        throw Error(ErrorKind::Domain, "[pi0^N] M != 0");
    Embedding out;
    out.N = N;
    std::size_t levels = std::max<std::size_t>(N, 2);
    auto [T, emb] = detail::embed_by_duality(M, levels, N);
    out.tower = T;
    out.embedding = emb;
    out.embedding_pure = is_pure_embedding_matrix(emb.U);
    out.embedding_hom = hom_check(emb).ok();
    out.cover_tower = build_tower(M, levels);
    out.surjection = tower_surjection(M, out.cover_tower, N);
    out.surjection_onto = is_surjection_matrix(out.surjection.U);
    out.surjection_hom = hom_check(out.surjection).ok();
    out.tower_report = verify_divisible(out.tower);
    if (N > 1)
        out.trace = detail::induction_trace(M, N);
    return out;
}

} // namespace strictmod
