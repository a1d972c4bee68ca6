#pragma once

#include <map>
#include <string>
#include <vector>

#include "strictmod/modcat.hpp"
#include "strictmod/ramif.hpp"

namespace strictmod {

/// sum_{i<=s} C_i X_{s+1-i}^q = pi0 X_s - X_{s-1}, 1 <= s <= N, X_0 = 0.
struct EquationSystem {
    BaseData base;
    std::size_t h = 0;
    std::size_t N = 0;
    std::vector<SeriesMatrix> C; // C[0] = C_1, ...
    SeriesMatrix basis;          // rows: the basis used, block s = [pi0]^{N-s} of the generators
};

/// Finds a basis m_j, [pi0] m_j, ... and reads off C_1..C_N from B = (D - pi0 E) C^-1.
inline EquationSystem build_equations(const SigmaModule& M)
{
    M.require_valid("build_equations");
    const BaseData& b = M.base;
    std::size_t n = M.rank();
    if (n == 0)
        throw Error(ErrorKind::Domain, "build_equations on the zero module");
    std::size_t N = 0;
    SeriesMatrix Dp = b.identity(n);
    for (std::size_t t = 1; t <= n; ++t) {
        Dp = Dp * M.D;
        if (Dp.is_zero()) {
            N = t;
            break;
        }
    }
    if (N == 0)
        throw Error(ErrorKind::Precision, "D is not nilpotent to working precision");
    if (n % N != 0)
        throw Error(ErrorKind::NotSupported, "rank " + std::to_string(n) + " is not a multiple of the pi0-length " + std::to_string(N));
    std::size_t h = n / N;

    KMatrix span = M.D.residue().row_space();
    std::vector<std::size_t> gens;
    for (std::size_t j = 0; j < n && gens.size() < h + 1; ++j) {
        KMatrix e(b.k, 1, n);
        e(0, j) = 1;
        KMatrix trial = KMatrix::vstack(span, e);
        if (trial.rank() > span.rows()) {
            span = trial.row_space();
            gens.push_back(j);
        }
    }
    if (gens.size() != h)
        throw Error(ErrorKind::NotSupported, "M / [pi0] M does not have rank h = " + std::to_string(h) + "; no basis of the required shape");

    SeriesMatrix S = b.zeros(n, n);
    for (std::size_t s = 0; s < N; ++s) {
        // block s holds [pi0]^{N-1-s} of the generators
        for (std::size_t j = 0; j < h; ++j) {
            SeriesMatrix x = b.zeros(1, n);
            x(0, gens[j]) = b.one();
            for (std::size_t t = 0; t + 1 + s < N; ++t)
                x = x * M.D;
            S.set_block(s * h + j, 0, x);
        }
    }
    if (!is_unimodular(S))
        throw Error(ErrorKind::NotSupported, "generators and their [pi0]-images do not form a basis; embed the module first");

    SigmaModule Mp = change_basis(M, S);
    Mp.require_valid("build_equations (new basis)");
    SeriesMatrix Bneg = -Mp.cert.B;
    EquationSystem sys;
    sys.base = b;
    sys.h = h;
    sys.N = N;
    sys.basis = S;
    for (std::size_t i = 0; i < N; ++i)
        sys.C.push_back(Bneg.block(i * h, 0, h, h));
    for (std::size_t s = 0; s < N; ++s)
        for (std::size_t t = 0; t < N; ++t) {
            SeriesMatrix blk = Bneg.block(s * h, t * h, h, h);
            bool ok = t <= s ? agree(blk, sys.C[s - t]) : blk.is_zero();
            SeriesMatrix dblk = Mp.D.block(s * h, t * h, h, h);
            bool dok = (t + 1 == s) ? agree(dblk, b.identity(h)) : dblk.is_zero();
            if (!ok || !dok)
                throw Error(ErrorKind::Precision, "presentation is not block Toeplitz to working precision");
        }
    if (mat_det(sys.C[0]).value.is_zero())
        throw Error(ErrorKind::Domain, "det C_1 vanishes to precision");
    return sys;
}

/// k' ((w)) with w^E = pi and k' of degree f over k, for tame towers.
struct TowerField {
    ExtensionTower tower;
    long long E = 1;
    long long f = 1;
    FieldPtr kp;
    std::vector<GaloisField::Code> embed;
    std::uint64_t q = 2;

    Series lift(const Series& s) const { return s.inflate(static_cast<int>(E), kp, embed); }

    SeriesMatrix lift(const SeriesMatrix& A) const
    {
        SeriesMatrix out(kp, A.rows(), A.cols(), 0);
        for (std::size_t i = 0; i < A.rows(); ++i)
            for (std::size_t j = 0; j < A.cols(); ++j)
                out(i, j) = lift(A(i, j));
        return out;
    }
};

inline TowerField make_tower_field(const BaseData& b, const ExtensionTower& t)
{
    t.validate();
    if (!t.is_tame())
        throw Error(ErrorKind::NotSupported, "the point solver handles unramified and tame steps only");
    TowerField tf;
    tf.tower = t;
    tf.E = t.ramification_index();
    tf.f = t.residue_degree();
    tf.q = b.q;
    long long deg = static_cast<long long>(b.k->degree()) * tf.f;
    if (deg > 22)
        throw Error(ErrorKind::Capacity, "tower residue field too large");
    tf.kp = tf.f == 1 ? b.k : make_field(b.p, static_cast<int>(deg));
    if (tf.f == 1) {
        tf.embed.resize(b.k->size());
        for (GaloisField::Code c = 0; c < b.k->size(); ++c)
            tf.embed[c] = c;
    } else {
        tf.embed = field_embedding(*b.k, *tf.kp);
    }
    return tf;
}

/// Tame(q^N - 1) + Unramified(N (q - 1)): the unramified part also takes (q-1)-th roots of F_q^x.
inline ExtensionTower suggest_tower(const BaseData& b, int N)
{
    long long qN = 1;
    for (int i = 0; i < N; ++i)
        qN *= static_cast<long long>(b.q);
    return ExtensionTower{b.p, {Tame{static_cast<int>(qN - 1)}, Unramified{N * static_cast<int>(b.q - 1)}}};
}

struct LocalPoint {
    std::vector<Series> coords; // X_1 (h entries), ..., X_N
    int precision = 0;          // in units of v_w
};

struct PointSet {
    TowerField field;
    std::vector<LocalPoint> points;
    std::uint64_t expected = 0;
    int digits = 0;  // T: distinct points differ below w^T
    int window = 0;
};

namespace detail {

inline SeriesMatrix column(const std::vector<Series>& v, std::size_t from, std::size_t h, const FieldPtr& f)
{
    SeriesMatrix out(f, h, 1, 0);
    for (std::size_t j = 0; j < h; ++j)
        out(j, 0) = v[from + j];
    return out;
}

inline SeriesMatrix level_rhs(const EquationSystem& sys, const TowerField& tf, const std::vector<SeriesMatrix>& CL,
                              const std::vector<SeriesMatrix>& X, std::size_t s, int prec)
{
    // r = X_{s-1} + sum_{i>=2} C_i X_{s+1-i}^q, levels 1-indexed
    SeriesMatrix r(tf.kp, sys.h, 1, prec);
    if (s >= 2)
        r = r + X[s - 2];
    for (std::size_t i = 2; i <= s; ++i)
        r = r + CL[i - 1] * X[s - i].sigma(tf.q);
    return r;
}

/// Newton iteration Y <- Y + F(Y)/pi0 for F(Y) = C1 sigma(Y) - pi0 Y + r.
inline SeriesMatrix newton_lift(const SeriesMatrix& C1, const Series& pi0, const SeriesMatrix& r, SeriesMatrix Y, int target, long long eE,
                                std::uint64_t q)
{
    Series inv = pi0.inverse();
    for (int it = 0; it < 64; ++it) {
        SeriesMatrix F = C1 * Y.sigma(q) - Y.scaled(pi0) + r;
        if (F.is_zero()) {
            int cert = F.min_precision() - static_cast<int>(eE);
            return Y.truncated(std::min(cert, target));
        }
        SeriesMatrix delta = F.scaled(inv);
        for (std::size_t i = 0; i < Y.rows(); ++i) {
            // keep the approximant as an explicit polynomial
            Series d = delta(i, 0);
            Series y = Y(i, 0);
            std::vector<GaloisField::Code> c;
            int prec = target + static_cast<int>(eE) + 8;
            for (int e = 0; e < prec; ++e) {
                GaloisField::Code a = e < y.precision() ? y.coeff(e) : 0;
                GaloisField::Code bcoef = e < d.precision() ? d.coeff(e) : 0;
                c.push_back(Y.field()->add(a, bcoef));
            }
            Y(i, 0) = Series::from_coeffs(Y.field(), 0, std::move(c), prec);
        }
    }
    throw Error(ErrorKind::Precision, "Newton lift did not converge");
}

inline std::string obstruction_report(const EquationSystem& sys)
{
    std::string s = "Newton slopes v(x) = (e - v(C_1,jj))/(q-1):";
    for (std::size_t j = 0; j < sys.h; ++j) {
        int v = sys.C[0](j, j).is_zero() ? -1 : sys.C[0](j, j).valuation();
        if (v < 0)
            s += " ?";
        else
            s += " " + to_string(Rational(sys.base.e() - v, static_cast<long long>(sys.base.q) - 1));
    }
    return s;
}

} // namespace detail

/// All points of the system with coordinates in the tower; the count must be q^{hN}.
inline PointSet solve_points(const EquationSystem& sys, const ExtensionTower& tower, int prec = 0)
{
    const BaseData& b = sys.base;
    TowerField tf = make_tower_field(b, tower);
    int in_prec = prec > 0 ? prec : b.prec;
    long long E = tf.E;
    long long e = b.e();
    long long eE = e * E;
    int T = static_cast<int>(eE / (static_cast<long long>(b.q) - 1)) + 1;
    int W = static_cast<int>(std::min<long long>(static_cast<long long>(b.q) * T, T + eE));
    int Pc = static_cast<int>(E * in_prec);
    int target = Pc - static_cast<int>(eE) * static_cast<int>(sys.N + 1);
    if (target < W + 1)
        throw Error(ErrorKind::Precision, "working precision too small for the point solver");

    std::vector<SeriesMatrix> CL;
    for (const auto& c : sys.C)
        CL.push_back(tf.lift(c.truncated(in_prec)));
    Series pi0L = tf.lift(b.pi0.truncated(in_prec));
    std::size_t h = sys.h;

    std::uint64_t per_level = 1;
    for (std::size_t j = 0; j < h; ++j)
        per_level *= b.q;

    PointSet out;
    out.field = tf;
    out.digits = T;
    out.window = W;
    out.expected = 1;
    for (std::size_t s = 0; s < sys.N; ++s)
        out.expected *= per_level;

    struct Branch {
        std::vector<SeriesMatrix> X;
    };
    std::vector<Branch> branches{Branch{}};
    for (std::size_t s = 1; s <= sys.N; ++s) {
        std::vector<Branch> next;
        for (const auto& br : branches) {
            SeriesMatrix r = detail::level_rhs(sys, tf, CL, br.X, s, Pc);
            SemilinearSystem ls;
            ls.field = tf.kp;
            ls.q = b.q;
            ls.rows = h;
            ls.cols = 1;
            SeriesMatrix one(tf.kp, 1, 1, Pc);
            one(0, 0) = Series::one(tf.kp, Pc);
            SeriesMatrix I = SeriesMatrix::identity(tf.kp, h, Pc);
            ls.terms.push_back({CL[0], one, true});
            ls.terms.push_back({I.scaled(-pi0L), one, false});
            ls.rhs = -r;
            auto sol = solve_truncated(ls, T, W);
            std::uint64_t count = 0;
            if (sol.particular) {
                count = 1;
                for (std::size_t i = 0; i < sol.kernel.size(); ++i)
                    count *= static_cast<std::uint64_t>(b.p);
            }
            if (count != per_level)
                throw Error(ErrorKind::Tower, "tower " + tower.describe() + " holds " + std::to_string(count) + " of " +
                                                  std::to_string(per_level) + " solutions at level " + std::to_string(s) + "; " +
                                                  detail::obstruction_report(sys));
            int p = b.p;
            for (std::uint64_t idx = 0; idx < count; ++idx) {
                std::vector<int> v = *sol.particular;
                std::uint64_t rem = idx;
                for (const auto& kv : sol.kernel) {
                    int c = static_cast<int>(rem % static_cast<std::uint64_t>(p));
                    rem /= static_cast<std::uint64_t>(p);
                    for (std::size_t i = 0; i < v.size(); ++i)
                        v[i] = (v[i] + c * kv[i]) % p;
                }
                SeriesMatrix Y0 = vector_to_matrix(tf.kp, v, h, 1, T);
                for (std::size_t j = 0; j < h; ++j) {
                    auto terms = Y0(j, 0).terms();
                    std::vector<GaloisField::Code> c(static_cast<std::size_t>(T), 0);
                    for (auto [ex, co] : terms)
                        c[ex] = co;
                    Y0(j, 0) = Series::from_coeffs(tf.kp, 0, std::move(c), target + static_cast<int>(eE) + 8);
                }
                Branch nb = br;
                nb.X.push_back(detail::newton_lift(CL[0], pi0L, r, Y0, target, eE, b.q));
                next.push_back(std::move(nb));
            }
        }
        branches = std::move(next);
    }
    for (const auto& br : branches) {
        LocalPoint pt;
        pt.precision = INT_MAX;
        for (const auto& X : br.X)
            for (std::size_t j = 0; j < h; ++j) {
                pt.coords.push_back(X(j, 0));
                pt.precision = std::min(pt.precision, X(j, 0).precision());
            }
        out.points.push_back(std::move(pt));
    }
    return out;
}

/// Residual check of every equation of the system at a point.
inline bool verify_point(const EquationSystem& sys, const TowerField& tf, const LocalPoint& pt)
{
    std::vector<SeriesMatrix> X;
    for (std::size_t s = 0; s < sys.N; ++s)
        X.push_back(detail::column(pt.coords, s * sys.h, sys.h, tf.kp));
    Series pi0L = tf.lift(sys.base.pi0);
    for (std::size_t s = 1; s <= sys.N; ++s) {
        SeriesMatrix lhs = tf.lift(sys.C[0]) * X[s - 1].sigma(tf.q);
        for (std::size_t i = 2; i <= s; ++i)
            lhs = lhs + tf.lift(sys.C[i - 1]) * X[s - i].sigma(tf.q);
        SeriesMatrix rhs = X[s - 1].scaled(pi0L);
        if (s >= 2)
            rhs = rhs - X[s - 2];
        if (!(lhs - rhs).is_zero())
            return false;
    }
    return true;
}

/// Key of a point: its digits below w^T.
inline std::vector<GaloisField::Code> point_key(const LocalPoint& pt, int T)
{
    std::vector<GaloisField::Code> k;
    for (const auto& c : pt.coords)
        for (int d = 0; d < T; ++d)
            k.push_back(c.coeff(d));
    return k;
}

/// Minimal v_K of coordinatewise differences over distinct pairs.
inline Rational min_pairwise_gap(const PointSet& ps)
{
    if (ps.points.size() < 2)
        throw Error(ErrorKind::Domain, "min_pairwise_gap needs at least two points");
    int best = INT_MAX;
    for (std::size_t a = 0; a < ps.points.size(); ++a)
        for (std::size_t b = a + 1; b < ps.points.size(); ++b) {
            int v = INT_MAX;
            for (std::size_t i = 0; i < ps.points[a].coords.size(); ++i) {
                Series d = ps.points[a].coords[i] - ps.points[b].coords[i];
                if (!d.is_zero())
                    v = std::min(v, d.valuation());
            }
            if (v == INT_MAX)
                throw Error(ErrorKind::Precision, "two points agree to working precision");
            best = std::min(best, v);
        }
    return Rational(best, ps.field.E);
}

/// Separation of distinct points: gap <= e/(q-1).
inline bool gap_within_bound(const PointSet& ps, const BaseData& b)
{
    return min_pairwise_gap(ps) <= Rational(b.e(), static_cast<long long>(b.q) - 1);
}

namespace detail {
inline bool contains(const PointSet& ps, const std::map<std::vector<GaloisField::Code>, std::size_t>& index, const LocalPoint& cand)
{
    auto it = index.find(point_key(cand, ps.digits));
    if (it == index.end())
        return false;
    const auto& pt = ps.points[it->second];
    for (std::size_t i = 0; i < pt.coords.size(); ++i)
        if (!agree(pt.coords[i], cand.coords[i]))
            return false;
    return true;
}

inline std::map<std::vector<GaloisField::Code>, std::size_t> index_points(const PointSet& ps)
{
    std::map<std::vector<GaloisField::Code>, std::size_t> idx;
    for (std::size_t i = 0; i < ps.points.size(); ++i)
        idx[point_key(ps.points[i], ps.digits)] = i;
    return idx;
}
} // namespace detail

/// Closure of the point set under addition and F_q-scalars.
inline bool fq_closed(const PointSet& ps)
{
    auto idx = detail::index_points(ps);
    if (idx.size() != ps.points.size())
        return false;
    const auto& F = *ps.field.kp;
    GaloisField::Code gamma = fq_generator(F, ps.field.q);
    for (const auto& a : ps.points) {
        LocalPoint s = a;
        for (auto& c : s.coords)
            c = c.scaled(gamma);
        if (!detail::contains(ps, idx, s))
            return false;
        for (const auto& b : ps.points) {
            LocalPoint t = a;
            for (std::size_t i = 0; i < t.coords.size(); ++i)
                t.coords[i] = a.coords[i] + b.coords[i];
            if (!detail::contains(ps, idx, t))
                return false;
        }
    }
    return true;
}

/// The automorphism w -> zeta w (zeta a primitive E-th root of unity) permutes the points.
inline bool galois_permutes(const PointSet& ps)
{
    const auto& F = *ps.field.kp;
    long long E = ps.field.E;
    if (E == 1)
        return true;
    if (F.order() % static_cast<std::uint64_t>(E) != 0)
        throw Error(ErrorKind::NotSupported, "tower residue field has no primitive E-th root of unity");
    GaloisField::Code zeta = F.exp(F.order() / static_cast<std::uint64_t>(E));
    auto idx = detail::index_points(ps);
    std::vector<bool> hit(ps.points.size(), false);
    for (const auto& a : ps.points) {
        LocalPoint img = a;
        for (auto& c : img.coords) {
            std::vector<GaloisField::Code> co;
            int v = c.is_zero() ? c.precision() : c.valuation();
            for (int d = v; d < c.precision(); ++d)
                co.push_back(F.mul(c.coeff(d), F.pow(zeta, static_cast<std::uint64_t>(((d % E) + E) % E))));
            c = Series::from_coeffs(ps.field.kp, v, std::move(co), c.precision());
        }
        auto it = idx.find(point_key(img, ps.digits));
        if (it == idx.end() || !detail::contains(ps, idx, img))
            return false;
        hit[it->second] = true;
    }
    return std::all_of(hit.begin(), hit.end(), [](bool x) { return x; });
}

struct TameCharacter {
    std::size_t N = 1;
    std::uint64_t a = 0;     // a_0 + a_1 q + ... + a_{N-1} q^{N-1}
    std::uint64_t a_mod = 0; // a modulo q^N - 1
    std::vector<int> digits; // a_0 .. a_{N-1}
    bool trivial = false;    // etale case
    bool digits_in_range = false;
    bool agrees_with_strictness = false;
};

/// Character chi_N^a of a monomial-cyclic module (D = 0, C a cycle of monomials).
inline TameCharacter tame_character(const SigmaModule& M)
{
    std::size_t n = M.rank();
    if (n == 0)
        throw Error(ErrorKind::Domain, "tame_character on the zero module");
    if (!M.D.is_zero())
        throw Error(ErrorKind::NotSupported, "tame_character needs D = 0");
    std::vector<std::size_t> next(n, n);
    std::vector<int> val(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Series& c = M.C(i, j);
            if (c.is_zero())
                continue;
            if (next[i] != n)
                throw Error(ErrorKind::NotSupported, "C has two nonzero entries in a row; not monomial-cyclic");
            next[i] = j;
            val[i] = c.valuation();
        }
    TameCharacter tc;
    tc.N = n;
    std::vector<bool> seen(n, false);
    std::size_t cur = 0;
    for (std::size_t step = 0; step < n; ++step) {
        if (next[cur] == n || seen[cur])
            throw Error(ErrorKind::NotSupported, "C is not a single cycle of monomials");
        seen[cur] = true;
        tc.digits.push_back(val[cur]);
        cur = next[cur];
    }
    if (cur != 0)
        throw Error(ErrorKind::NotSupported, "C is not a single cycle of monomials");
    std::uint64_t qN = 1, qi = 1;
    for (std::size_t i = 0; i < n; ++i)
        qN *= M.base.q;
    std::uint64_t a = 0;
    for (std::size_t i = 0; i < n; ++i) {
        a += static_cast<std::uint64_t>(tc.digits[i]) * qi;
        qi *= M.base.q;
    }
    tc.a = a;
    tc.a_mod = qN > 1 ? a % (qN - 1) : 0;
    tc.trivial = a == 0;
    int e = M.base.e();
    tc.digits_in_range = std::all_of(tc.digits.begin(), tc.digits.end(), [e](int d) { return d >= 0 && d <= e; });
    tc.agrees_with_strictness = tc.digits_in_range == M.valid();
    return tc;
}

} // namespace strictmod
