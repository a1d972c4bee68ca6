#pragma once

#include <algorithm>
#include <boost/rational.hpp>
#include <string>
#include <variant>
#include <vector>

#include "strictmod/error.hpp"

namespace strictmod {

using Rational = boost::rational<long long>;

inline std::string to_string(const Rational& r)
{
    if (r.denominator() == 1)
        return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// Continuous piecewise-linear function on [0, inf) with phi(0) = 0.
/// slopes[i] applies on [breaks[i-1], breaks[i]] (breaks[-1] = 0).
class PLFunction {
public:
    PLFunction() : slopes_{Rational(1)} {}
    PLFunction(std::vector<Rational> breaks, std::vector<Rational> slopes) : breaks_(std::move(breaks)), slopes_(std::move(slopes))
    {
        if (slopes_.size() != breaks_.size() + 1)
            throw Error(ErrorKind::Domain, "PL function needs one more slope than breakpoints");
        for (std::size_t i = 0; i < breaks_.size(); ++i)
            if (breaks_[i] <= (i ? breaks_[i - 1] : Rational(0)))
                throw Error(ErrorKind::Domain, "PL breakpoints must be positive and increasing");
        for (const auto& s : slopes_)
            if (s <= 0)
                throw Error(ErrorKind::Domain, "PL slopes must be positive");
        simplify();
    }

    static PLFunction identity() { return {}; }
    static PLFunction linear(Rational slope) { return PLFunction({}, {slope}); }

    const std::vector<Rational>& breaks() const { return breaks_; }
    const std::vector<Rational>& slopes() const { return slopes_; }

    Rational operator()(const Rational& x) const
    {
        if (x < 0)
            throw Error(ErrorKind::Domain, "PL functions are defined on x >= 0");
        Rational y = 0, left = 0;
        for (std::size_t i = 0; i < breaks_.size(); ++i) {
            if (x <= breaks_[i])
                return y + slopes_[i] * (x - left);
            y += slopes_[i] * (breaks_[i] - left);
            left = breaks_[i];
        }
        return y + slopes_.back() * (x - left);
    }

    Rational slope_at(const Rational& x) const // right slope
    {
        for (std::size_t i = 0; i < breaks_.size(); ++i)
            if (x < breaks_[i])
                return slopes_[i];
        return slopes_.back();
    }

    PLFunction inverse() const
    {
        std::vector<Rational> b, s;
        for (const auto& x : breaks_)
            b.push_back((*this)(x));
        for (const auto& sl : slopes_)
            s.push_back(1 / sl);
        return {b, s};
    }

    bool is_concave() const
    {
        for (std::size_t i = 1; i < slopes_.size(); ++i)
            if (slopes_[i] > slopes_[i - 1])
                return false;
        return true;
    }

    bool unit_fraction_slopes() const
    {
        for (const auto& s : slopes_)
            if (s.numerator() != 1)
                return false;
        return true;
    }

    friend bool operator==(const PLFunction& a, const PLFunction& b) { return a.breaks_ == b.breaks_ && a.slopes_ == b.slopes_; }

    std::string to_string() const
    {
        std::string s = "slopes";
        for (std::size_t i = 0; i < slopes_.size(); ++i) {
            s += " " + strictmod::to_string(slopes_[i]);
            if (i < breaks_.size())
                s += " |" + strictmod::to_string(breaks_[i]) + "|";
        }
        return s;
    }

private:
    std::vector<Rational> breaks_;
    std::vector<Rational> slopes_;

    void simplify()
    {
        std::vector<Rational> b, s{slopes_[0]};
        for (std::size_t i = 0; i < breaks_.size(); ++i) {
            if (slopes_[i + 1] == s.back())
                continue;
            b.push_back(breaks_[i]);
            s.push_back(slopes_[i + 1]);
        }
        breaks_ = b;
        slopes_ = s;
    }
};

/// outer o inner, exactly.
inline PLFunction pl_compose(const PLFunction& outer, const PLFunction& inner)
{
    std::vector<Rational> pts = inner.breaks();
    PLFunction inv = inner.inverse();
    for (const auto& y : outer.breaks())
        pts.push_back(inv(y));
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<Rational> slopes;
    for (std::size_t i = 0; i <= pts.size(); ++i) {
        // right slope at the left end of the interval
        Rational left = i == 0 ? Rational(0) : pts[i - 1];
        slopes.push_back(outer.slope_at(inner(left)) * inner.slope_at(left));
    }
    return {pts, slopes};
}

struct Unramified { int degree = 1; };
struct Tame { int degree = 1; };           // new uniformizer w with w^degree = old one
struct ArtinSchreier { long long degree = 1; int m = 1; }; // T^degree - T = r, v(r) = -m

using TowerStep = std::variant<Unramified, Tame, ArtinSchreier>;

inline std::string step_name(const TowerStep& s)
{
    if (auto u = std::get_if<Unramified>(&s))
        return "Unramified(" + std::to_string(u->degree) + ")";
    if (auto t = std::get_if<Tame>(&s))
        return "Tame(" + std::to_string(t->degree) + ")";
    auto a = std::get<ArtinSchreier>(s);
    return "ArtinSchreier(" + std::to_string(a.degree) + ", " + std::to_string(a.m) + ")";
}

inline void check_step(const TowerStep& s, int p)
{
    if (auto u = std::get_if<Unramified>(&s)) {
        if (u->degree < 1)
            throw Error(ErrorKind::Domain, "unramified degree must be positive");
    } else if (auto t = std::get_if<Tame>(&s)) {
        if (t->degree < 1 || t->degree % p == 0)
            throw Error(ErrorKind::Domain, "tame degree must be positive and prime to p");
    } else {
        auto a = std::get<ArtinSchreier>(s);
        long long d = a.degree;
        while (d % p == 0)
            d /= p;
        if (a.degree < p || d != 1)
            throw Error(ErrorKind::Domain, "Artin-Schreier degree must be a power of p");
        if (a.m < 1 || a.m % p == 0)
            throw Error(ErrorKind::Domain, "Artin-Schreier break must be positive and prime to p");
    }
}

/// Herbrand function of a single step.
inline PLFunction pl_from_step(const TowerStep& s, int p)
{
    check_step(s, p);
    if (std::holds_alternative<Unramified>(s))
        return PLFunction::identity();
    if (auto t = std::get_if<Tame>(&s))
        return PLFunction::linear(Rational(1, t->degree));
    auto a = std::get<ArtinSchreier>(s);
    return PLFunction({Rational(a.m)}, {Rational(1), Rational(1, a.degree)});
}

struct ExtensionTower {
    int p = 2;
    std::vector<TowerStep> steps;

    void validate() const
    {
        for (const auto& s : steps)
            check_step(s, p);
    }

    long long ramification_index() const
    {
        long long e = 1;
        for (const auto& s : steps) {
            if (auto t = std::get_if<Tame>(&s))
                e *= t->degree;
            else if (auto a = std::get_if<ArtinSchreier>(&s))
                e *= a->degree;
        }
        return e;
    }

    long long residue_degree() const
    {
        long long f = 1;
        for (const auto& s : steps)
            if (auto u = std::get_if<Unramified>(&s))
                f *= u->degree;
        return f;
    }

    bool is_tame() const
    {
        for (const auto& s : steps)
            if (std::holds_alternative<ArtinSchreier>(s))
                return false;
        return true;
    }

    /// phi_{L/K} = phi_{L1/K} o phi_{L2/L1} o ...
    PLFunction herbrand() const
    {
        PLFunction phi;
        for (const auto& s : steps)
            phi = pl_compose(phi, pl_from_step(s, p));
        return phi;
    }

    std::string describe() const
    {
        std::string out;
        for (const auto& s : steps)
            out += (out.empty() ? "" : " + ") + step_name(s);
        return out.empty() ? "trivial" : out;
    }
};

/// Largest upper-numbering break: the image of the last breakpoint (0 if none).
inline Rational max_break(const PLFunction& phi)
{
    if (phi.breaks().empty())
        return 0;
    return phi(phi.breaks().back());
}

/// Herbrand function of K_alpha, alpha = m/(q^M - 1): the degree-q^M piece of
/// K(pi_M)(T), pi_M^{q^M-1} = pi, T^{q^M} - T = pi_M^{-m}.
inline PLFunction kalpha_herbrand(long long qM, int m, int p)
{
    ExtensionTower L{p, {Tame{static_cast<int>(qM - 1)}, ArtinSchreier{qM, m}}};
    // phi_{L/K} = phi_{K_alpha/K} o phi_{L/K_alpha}, with L/K_alpha tame of degree q^M - 1
    return pl_compose(L.herbrand(), PLFunction::linear(Rational(qM - 1)));
}

struct BreakBoundResult {
    Rational bound;
    bool pass = false;
};

/// bound = e (N + 1/(q-1)) - 1; passes when the measured break does not exceed it.
inline BreakBoundResult theorem5_check(long long e, long long N, long long q, const Rational& measured)
{
    if (e < 1 || N < 1 || q < 2)
        throw Error(ErrorKind::Domain, "theorem5_check needs e, N >= 1 and q >= 2");
    BreakBoundResult r;
    r.bound = Rational(e) * (Rational(N) + Rational(1, q - 1)) - 1;
    r.pass = measured <= r.bound;
    return r;
}

/// max{alpha, (v - alpha)/q_power + alpha}; alpha must have numerator and denominator prime to p.
inline Rational prop7_step(const Rational& v, const Rational& alpha, long long q_power, int p)
{
    if (alpha <= 0 || alpha.numerator() % p == 0 || alpha.denominator() % p == 0)
        throw Error(ErrorKind::Domain, "alpha must be positive with numerator and denominator prime to p");
    if (q_power < 2)
        throw Error(ErrorKind::Domain, "q_power must be at least 2");
    return std::max(alpha, (v - alpha) / q_power + alpha);
}

} // namespace strictmod
