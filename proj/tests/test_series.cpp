#include <gtest/gtest.h>

#include <random>

#include "strictmod/io.hpp"
#include "strictmod/series.hpp"

using namespace strictmod;

namespace {

// Oracle: dense digit vectors mod p, exponent window [0, P).
std::vector<int> naive_mul(const std::vector<int>& a, const std::vector<int>& b, int p, int P)
{
    std::vector<int> c(P, 0);
    for (int i = 0; i < P; ++i)
        for (int j = 0; i + j < P; ++j)
            c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    return c;
}

Series from_digits(FieldPtr k, const std::vector<int>& d, int P)
{
    std::vector<GaloisField::Code> c(d.begin(), d.end());
    return Series::from_coeffs(k, 0, c, P);
}

} // namespace

TEST(Field, AxiomsByExhaustion)
{
    for (auto [p, d] : {std::pair{2, 2}, {3, 2}, {2, 3}, {5, 1}}) {
        auto F = make_field(p, d);
        for (GaloisField::Code a = 0; a < F->size(); ++a) {
            EXPECT_EQ(F->add(a, F->neg(a)), 0u);
            if (a) {
                EXPECT_EQ(F->mul(a, F->inv(a)), 1u);
                EXPECT_EQ(F->pow(a, F->size() - 1), 1u);
            }
            for (GaloisField::Code b = 0; b < F->size(); ++b) {
                EXPECT_EQ(F->mul(a, b), F->mul(b, a));
                for (GaloisField::Code c = 0; c < F->size(); c += 3)
                    EXPECT_EQ(F->mul(a, F->add(b, c)), F->add(F->mul(a, b), F->mul(a, c)));
            }
        }
    }
}

TEST(Series, PrecisionOfProductFollowsValuations)
{
    auto k = make_field(2, 1);
    Series a = Series::monomial(k, 1, 1, 3);  // pi + O(pi^3)
    Series b = Series::monomial(k, 1, -1, 1); // pi^-1 + O(pi)
    Series c = a * b;
    EXPECT_EQ(c.precision(), 2);
    EXPECT_EQ(c.valuation(), 0);
    EXPECT_EQ(c.to_string(), "1 + O(pi^2)");
}

TEST(Series, GeometricInverse)
{
    auto k = make_field(3, 1);
    Series x = parse_series_literal("1 + pi", k, 10);
    Series inv = x.inverse();
    for (int i = 0; i < 10; ++i)
        EXPECT_EQ(inv.coeff(i), (i % 2 == 0) ? 1u : 2u);
    EXPECT_TRUE(agree(x * inv, Series::one(k, 10)));
}

TEST(Series, InverseShiftsPrecision)
{
    auto k = make_field(2, 1);
    Series x = parse_series_literal("pi^2 + pi^3", k, 8);
    Series inv = x.inverse();
    EXPECT_EQ(inv.valuation(), -2);
    EXPECT_EQ(inv.precision(), 8 - 4);
}

TEST(Series, SigmaRaisesExponentsAndPrecision)
{
    auto k = make_field(3, 1);
    Series s = parse_series_literal("pi + 2*pi^2", k, 10);
    Series t = s.sigma(3);
    EXPECT_EQ(t.to_string(), "pi^3 + 2*pi^6 + O(pi^30)");
}

TEST(Series, SigmaActsOnCoefficients)
{
    auto k = make_field(2, 2);
    Series s = parse_series_literal("g + g*pi", k, 5);
    Series t = s.sigma(2);
    EXPECT_EQ(t.coeff(0), k->mul(k->generator(), k->generator()));
    EXPECT_EQ(t.coeff(2), t.coeff(0));
}

TEST(Series, CoefficientPastPrecisionThrows)
{
    auto k = make_field(2, 1);
    Series s = Series::one(k, 4);
    EXPECT_EQ(s.coeff(3), 0u);
    try {
        s.coeff(4);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Precision);
    }
}

TEST(Series, TrackedZero)
{
    auto k = make_field(2, 1);
    Series a = parse_series_literal("1 + pi", k, 6), b = parse_series_literal("1 + pi + pi^7", k, 6);
    Series z = a - b;
    EXPECT_TRUE(z.is_zero());
    EXPECT_EQ(z.valuation(), 6);
    EXPECT_THROW(z.inverse(), Error);
}

TEST(Series, MultiplicationMatchesDenseOracle)
{
    std::mt19937 rng(20261016);
    for (int p : {2, 3, 5}) {
        auto k = make_field(p, 1);
        for (int trial = 0; trial < 40; ++trial) {
            int P = 3 + static_cast<int>(rng() % 10);
            std::vector<int> a(P), b(P);
            for (auto& x : a)
                x = static_cast<int>(rng() % p);
            for (auto& x : b)
                x = static_cast<int>(rng() % p);
            auto c = naive_mul(a, b, p, P);
            Series s = from_digits(k, a, P) * from_digits(k, b, P);
            for (int i = 0; i < P; ++i)
                if (i < s.precision())
                    EXPECT_EQ(s.coeff(i), static_cast<GaloisField::Code>(c[i])) << "p=" << p << " i=" << i;
            // units: the inverse is certified to the full precision
            a[0] = 1;
            Series u = from_digits(k, a, P);
            EXPECT_TRUE(agree(u * u.inverse(), Series::one(k, P)));
        }
    }
}

TEST(Series, AdditionKeepsMinimumPrecision)
{
    auto k = make_field(3, 1);
    Series a = Series::one(k, 5), b = Series::monomial(k, 1, 1, 3);
    EXPECT_EQ((a + b).precision(), 3);
    EXPECT_EQ((a + b).to_string(), "1 + pi + O(pi^3)");
}

TEST(Literal, Forms)
{
    auto k = make_field(2, 2);
    EXPECT_EQ(parse_series_literal("1+2*pi^3", make_field(3, 1), 6).to_string(), "1 + 2*pi^3 + O(pi^6)");
    EXPECT_EQ(parse_series_literal("g*pi", k, 4).to_string(), "g*pi + O(pi^4)");
    EXPECT_EQ(parse_series_literal("pi^-1 + O(pi^2)", k, 10).precision(), 2);
    EXPECT_EQ(parse_series_literal("pi^(-2)", k, 4).valuation(), -2);
    EXPECT_EQ(parse_series_literal("0", k, 4).valuation(), 4);
    EXPECT_THROW(parse_series_literal("1 + + pi", k, 4), Error);
    EXPECT_THROW(parse_series_literal("", k, 4), Error);
    EXPECT_THROW(parse_series_literal("x", k, 4), Error);
}

TEST(Literal, JsonPairs)
{
    auto k = make_field(3, 2);
    Json j = Json::parse(R"([[0, 1], [2, [0, 1]], [3, "g^2"]])");
    Series s = series_from_json(j, k, 8, "test");
    EXPECT_EQ(s.coeff(0), 1u);
    EXPECT_EQ(s.coeff(2), k->from_coords({0, 1}));
    EXPECT_EQ(s.coeff(3), k->exp(2));
}
