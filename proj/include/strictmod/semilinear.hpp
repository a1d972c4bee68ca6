#pragma once

#include <optional>
#include <vector>

#include "strictmod/fp_linalg.hpp"
#include "strictmod/series_matrix.hpp"

namespace strictmod {

/// One summand left * U * right, or left * sigma(U) * right.
struct SemilinearTerm {
    SeriesMatrix left;
    SeriesMatrix right;
    bool sigma = false;
};

/// Sum of terms = rhs (rhs absent means homogeneous), unknown U of shape rows x cols over O.
struct SemilinearSystem {
    FieldPtr field;
    std::uint64_t q = 0;
    std::size_t rows = 0, cols = 0;
    std::vector<SemilinearTerm> terms;
    std::optional<SeriesMatrix> rhs;

    std::size_t out_rows() const { return terms.at(0).left.rows(); }
    std::size_t out_cols() const { return terms.at(0).right.cols(); }

    /// Largest equation window the coefficient precision supports.
    int max_window() const
    {
        int w = INT_MAX;
        for (const auto& t : terms)
            w = std::min(w, std::min(t.left.min_precision() + std::max(0, t.right.min_valuation()),
                                     t.right.min_precision() + std::max(0, t.left.min_valuation())));
        if (rhs)
            w = std::min(w, rhs->min_precision());
        return w;
    }
};

/// F_p-affine solution set of the system restricted to digits < digits, degrees < window.
/// Vectors list F_p coordinates, digit-major: ((d * rows + i) * cols + j) * deg + t.
struct TruncatedSolution {
    int digits = 0;
    std::optional<std::vector<int>> particular;
    std::vector<std::vector<int>> kernel;
};

inline TruncatedSolution solve_truncated(const SemilinearSystem& sys, int digits, int window)
{
    const GaloisField& F = *sys.field;
    int p = F.characteristic();
    std::size_t deg = static_cast<std::size_t>(F.degree());
    std::size_t R = sys.rows, Cc = sys.cols, orr = sys.out_rows(), occ = sys.out_cols();
    std::size_t nU = static_cast<std::size_t>(digits) * R * Cc * deg;
    std::size_t nE = static_cast<std::size_t>(window) * orr * occ * deg;
    if (nU > 20000 || nE > 40000)
        throw Error(ErrorKind::Capacity, "semilinear system too large for the desk-scale solver");
    FpMatrix A(p, nE, nU);
    auto eq = [&](int w, std::size_t a, std::size_t b) { return ((static_cast<std::size_t>(w) * orr + a) * occ + b) * deg; };

    for (const auto& term : sys.terms) {
        for (std::size_t i = 0; i < R; ++i)
            for (std::size_t j = 0; j < Cc; ++j) {
                for (std::size_t a = 0; a < orr; ++a)
                    for (std::size_t b = 0; b < occ; ++b) {
                        Series P = term.left(a, i) * term.right(j, b);
                        if (P.is_zero() && P.precision() >= window)
                            continue;
                        if (!P.is_zero() && P.valuation() < 0)
                            throw Error(ErrorKind::Domain, "semilinear coefficients must be integral");
                        if (P.precision() < window)
                            throw Error(ErrorKind::Precision, "coefficients known only to pi^" + std::to_string(P.precision()) +
                                                                  ", window needs pi^" + std::to_string(window));
                        auto terms = P.terms();
                        for (int d = 0; d < digits; ++d) {
                            int shift = term.sigma ? d * static_cast<int>(sys.q) : d;
                            if (shift >= window)
                                break;
                            for (std::size_t t = 0; t < deg; ++t) {
                                // the element whose t-th coordinate is 1
                                GaloisField::Code x = 1;
                                for (std::size_t s = 0; s < t; ++s)
                                    x *= static_cast<GaloisField::Code>(p);
                                if (term.sigma)
                                    x = F.pow(x, sys.q);
                                std::size_t col = ((static_cast<std::size_t>(d) * R + i) * Cc + j) * deg + t;
                                for (auto [e, c] : terms) {
                                    int w = e + shift;
                                    if (w >= window)
                                        break;
                                    auto y = F.coords(F.mul(c, x));
                                    std::size_t r0 = eq(w, a, b);
                                    for (std::size_t u = 0; u < deg; ++u)
                                        if (y[u])
                                            A(r0 + u, col) = (A(r0 + u, col) + y[u]) % p;
                                }
                            }
                        }
                    }
            }
    }

    std::vector<int> rhs(nE, 0);
    if (sys.rhs) {
        for (std::size_t a = 0; a < orr; ++a)
            for (std::size_t b = 0; b < occ; ++b)
                for (auto [e, c] : (*sys.rhs)(a, b).terms()) {
                    if (e < 0)
                        throw Error(ErrorKind::Domain, "semilinear right-hand side must be integral");
                    if (e >= window)
                        break;
                    auto y = F.coords(c);
                    for (std::size_t u = 0; u < deg; ++u)
                        rhs[eq(e, a, b) + u] = y[u];
                }
    }
    TruncatedSolution out;
    out.digits = digits;
    out.kernel = A.kernel();
    out.particular = A.solve(rhs);
    return out;
}

struct StableSolution {
    int certified_digits = 0;  // digits < this are certified
    int window = 0;            // largest window used
    bool consistent = false;
    std::vector<int> particular;
    std::vector<std::vector<int>> basis; // F_p basis of the linear part, projected
};

/// Solves at windows T_mid and T_hi, projects both onto digits < T_lo and
/// certifies that the projections coincide.
inline StableSolution solve_stable(const SemilinearSystem& sys, int t_hi)
{
    int maxw = sys.max_window();
    t_hi = std::min(t_hi, maxw);
    if (t_hi < 2)
        throw Error(ErrorKind::Precision, "working precision too small for the semilinear solver");
    int t_lo = std::max(1, t_hi / 2);
    int t_mid = std::max(t_lo + 1, (t_lo + t_hi) / 2);
    if (t_mid > t_hi)
        t_mid = t_hi;
    std::size_t block = sys.rows * sys.cols * static_cast<std::size_t>(sys.field->degree());
    std::size_t L = static_cast<std::size_t>(t_lo) * block;
    int p = sys.field->characteristic();

    auto hi = solve_truncated(sys, t_hi, t_hi);
    StableSolution out;
    out.certified_digits = t_lo;
    out.window = t_hi;
    if (!hi.particular)
        return out;
    auto mid = t_mid == t_hi ? hi : solve_truncated(sys, t_mid, t_mid);
    if (!mid.particular)
        throw Error(ErrorKind::Precision, "solvable at the larger window but not the smaller one");

    auto project = [&](const std::vector<std::vector<int>>& vs) {
        std::vector<std::vector<int>> out;
        for (const auto& v : vs)
            out.emplace_back(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(L));
        return out;
    };
    auto ph = project(hi.kernel), pm = project(mid.kernel);
    std::vector<int> dpart(L);
    for (std::size_t i = 0; i < L; ++i)
        dpart[i] = ((*hi.particular)[i] - (*mid.particular)[i] + p) % p;
    auto both = ph;
    both.insert(both.end(), pm.begin(), pm.end());
    std::size_t rh = fp_span_rank(p, ph, L), rm = fp_span_rank(p, pm, L), rb = fp_span_rank(p, both, L);
    both.push_back(dpart);
    std::size_t rp = fp_span_rank(p, both, L);
    if (rh != rm || rb != rh || rp != rb)
        throw Error(ErrorKind::Precision, "solution space not stable between windows " + std::to_string(t_mid) + " and " +
                                              std::to_string(t_hi) + "; raise the precision");
    out.consistent = true;
    out.particular.assign(hi.particular->begin(), hi.particular->begin() + static_cast<std::ptrdiff_t>(L));
    FpMatrix M = FpMatrix::from_rows(p, ph, L);
    auto piv = M.rref();
    for (std::size_t r = 0; r < piv.size(); ++r)
        out.basis.push_back(M.row(r));
    return out;
}

/// Coordinate vector (digit-major) to a matrix over O known to pi^digits.
inline SeriesMatrix vector_to_matrix(const FieldPtr& field, const std::vector<int>& v, std::size_t rows, std::size_t cols, int digits)
{
    std::size_t deg = static_cast<std::size_t>(field->degree());
    SeriesMatrix U(field, rows, cols, digits);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            std::vector<GaloisField::Code> c(static_cast<std::size_t>(digits));
            for (int d = 0; d < digits; ++d) {
                std::size_t base = ((static_cast<std::size_t>(d) * rows + i) * cols + j) * deg;
                std::vector<int> co(v.begin() + static_cast<std::ptrdiff_t>(base), v.begin() + static_cast<std::ptrdiff_t>(base + deg));
                c[d] = field->from_coords(co);
            }
            U(i, j) = Series::from_coeffs(field, 0, std::move(c), digits);
        }
    return U;
}

/// Multiplies every k-entry of a coordinate vector by the scalar a.
inline std::vector<int> scale_vector(const GaloisField& F, const std::vector<int>& v, GaloisField::Code a)
{
    std::size_t deg = static_cast<std::size_t>(F.degree());
    std::vector<int> out(v.size());
    for (std::size_t b = 0; b + deg <= v.size(); b += deg) {
        std::vector<int> co(v.begin() + static_cast<std::ptrdiff_t>(b), v.begin() + static_cast<std::ptrdiff_t>(b + deg));
        auto y = F.coords(F.mul(F.from_coords(co), a));
        std::copy(y.begin(), y.end(), out.begin() + static_cast<std::ptrdiff_t>(b));
    }
    return out;
}

/// Generator of F_q inside k (q = p^n0 must divide into |k|).
inline GaloisField::Code fq_generator(const GaloisField& F, std::uint64_t q)
{
    std::uint64_t order = F.order();
    if ((order % (q - 1)) != 0)
        throw Error(ErrorKind::Mismatch, "F_q is not contained in the residue field");
    return F.exp(order / (q - 1));
}

/// Picks an F_q basis out of an F_p basis of an F_q-stable space.
inline std::vector<std::vector<int>> fq_basis(const GaloisField& F, std::uint64_t q, const std::vector<std::vector<int>>& fp_basis)
{
    if (fp_basis.empty())
        return {};
    int p = F.characteristic();
    int n0 = 0;
    for (std::uint64_t t = 1; t < q; t *= static_cast<std::uint64_t>(p))
        ++n0;
    std::size_t len = fp_basis[0].size();
    GaloisField::Code gamma = fq_generator(F, q);
    std::vector<std::vector<int>> span, chosen;
    for (const auto& v : fp_basis) {
        auto trial = span;
        trial.push_back(v);
        if (fp_span_rank(p, trial, len) == span.size())
            continue;
        chosen.push_back(v);
        GaloisField::Code g = 1;
        for (int i = 0; i < n0; ++i) {
            span.push_back(scale_vector(F, v, g));
            g = F.mul(g, gamma);
        }
    }
    return chosen;
}

} // namespace strictmod
