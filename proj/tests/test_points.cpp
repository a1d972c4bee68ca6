#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "strictmod/io.hpp"
#include "strictmod/modcat.hpp"
#include "strictmod/points.hpp"

using namespace strictmod;

namespace {

SeriesMatrix mat(const BaseData& b, std::vector<std::vector<std::string>> rows)
{
    SeriesMatrix M = b.zeros(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            M(i, j) = parse_series_literal(rows[i][j], b.k, b.prec);
    return M;
}

ExtensionTower tame(int p, int E, int f = 1)
{
    return ExtensionTower{p, {Tame{E}, Unramified{f}}};
}

// Oracle: rank one, D = 0. Substitute X into X^q = lambda X after writing pi = w^E by hand.
bool satisfies_rank_one(const Series& lambda, const BaseData& b, const TowerField& tf, const Series& X)
{
    Series lhs = X.sigma(b.q);
    Series rhs = tf.lift(lambda) * X;
    Series d = lhs - rhs;
    return d.is_zero() || d.valuation() >= std::min(lhs.precision(), rhs.precision());
}

// Oracle: the gap as a plain double loop over pairs, in units of v_K.
Rational pairwise_gap(const PointSet& ps)
{
    long long best = -1;
    for (const auto& a : ps.points)
        for (const auto& c : ps.points) {
            if (&a == &c)
                continue;
            long long v = -1;
            for (std::size_t i = 0; i < a.coords.size(); ++i) {
                Series d = a.coords[i] - c.coords[i];
                if (!d.is_zero() && (v < 0 || d.valuation() < v))
                    v = d.valuation();
            }
            if (best < 0 || v < best)
                best = v;
        }
    return Rational(best, ps.field.E);
}

} // namespace

TEST(Points, MuPiOverF3)
{
    auto b = make_base(3, 1, 1, 1, 14);
    auto M = mu_lambda(b, b.pi_power(1));
    auto sys = build_equations(M);
    auto ps = solve_points(sys, tame(3, 2));
    ASSERT_EQ(ps.points.size(), 3u);
    std::set<std::string> got;
    for (const auto& pt : ps.points)
        got.insert(pt.coords[0].truncated(10).to_string("w"));
    EXPECT_EQ(got, (std::set<std::string>{"0 + O(w^10)", "w + O(w^10)", "2*w + O(w^10)"}));
    for (const auto& pt : ps.points) {
        EXPECT_TRUE(verify_point(sys, ps.field, pt));
        EXPECT_TRUE(satisfies_rank_one(b.pi_power(1), b, ps.field, pt.coords[0]));
    }
}

TEST(Points, RankOneAgainstSubstitution)
{
    for (auto [p, n0, e] : {std::tuple{2, 1, 1}, {3, 1, 1}, {2, 2, 1}, {2, 1, 2}, {3, 1, 2}, {2, 1, 3}}) {
        auto b = make_base(p, n0, 1, e, 16);
        for (int v = 0; v <= e; ++v) {
            Series lam = b.pi_power(v);
            auto M = mu_lambda(b, lam);
            ASSERT_TRUE(M.valid());
            auto sys = build_equations(M);
            // X^q = lambda X: nonzero roots have v(X) = v/(q - 1)
            int E = static_cast<int>(b.q - 1);
            auto ps = solve_points(sys, ExtensionTower{b.p, {Tame{E}, Unramified{E}}});
            EXPECT_EQ(ps.points.size(), b.q) << "q=" << b.q << " e=" << e << " v=" << v;
            for (const auto& pt : ps.points) {
                EXPECT_TRUE(satisfies_rank_one(lam, b, ps.field, pt.coords[0]));
                if (!pt.coords[0].is_zero())
                    EXPECT_EQ(Rational(pt.coords[0].valuation(), ps.field.E), Rational(v, static_cast<long long>(b.q) - 1));
            }
        }
    }
}

TEST(Points, CountsMatchRank)
{
    auto b = make_base(2, 1, 1, 1, 16);
    std::vector<SigmaModule> mods{
        validate_module(b, mat(b, {{"1", "1 + pi"}, {"0", "1"}}), mat(b, {{"0", "1"}, {"0", "0"}})),
        validate_module(b, mat(b, {{"0", "pi"}, {"pi", "0"}}), b.zeros(2, 2)),
        validate_module(b, mat(b, {{"pi", "0"}, {"1", "1"}}), b.zeros(2, 2)),
        validate_module(b, mat(b, {{"1", "0"}, {"0", "pi"}}), b.zeros(2, 2)),
    };
    for (const auto& M : mods) {
        ASSERT_TRUE(M.valid());
        auto sys = build_equations(M);
        EXPECT_EQ(sys.h * sys.N, M.rank());
        auto ps = solve_points(sys, suggest_tower(b, static_cast<int>(M.rank())));
        EXPECT_EQ(ps.points.size(), 4u);
        EXPECT_EQ(ps.expected, 4u);
        for (const auto& pt : ps.points)
            EXPECT_TRUE(verify_point(sys, ps.field, pt));
        EXPECT_TRUE(fq_closed(ps));
        EXPECT_TRUE(galois_permutes(ps));
    }
}

TEST(Points, JordanHasTwoLevels)
{
    auto b = make_base(2, 1, 1, 1, 16);
    auto M = validate_module(b, mat(b, {{"1", "1 + pi"}, {"0", "1"}}), mat(b, {{"0", "1"}, {"0", "0"}}));
    auto sys = build_equations(M);
    EXPECT_EQ(sys.N, 2u);
    EXPECT_EQ(sys.h, 1u);
}

TEST(Points, GapAgreesWithPairwiseOracle)
{
    auto b = make_base(3, 1, 1, 1, 14);
    auto ps = solve_points(build_equations(mu_lambda(b, b.pi_power(1))), tame(3, 2));
    EXPECT_EQ(min_pairwise_gap(ps), Rational(1, 2));
    EXPECT_EQ(pairwise_gap(ps), Rational(1, 2));
    EXPECT_TRUE(gap_within_bound(ps, b));

    auto b2 = make_base(2, 1, 1, 2, 16);
    auto ps2 = solve_points(build_equations(mu_lambda(b2, b2.pi_power(2))), tame(2, 1));
    EXPECT_EQ(min_pairwise_gap(ps2), pairwise_gap(ps2));
    EXPECT_EQ(min_pairwise_gap(ps2), Rational(2, 1)); // e/(q-1): the bound is attained
    EXPECT_TRUE(gap_within_bound(ps2, b2));
}

TEST(Points, InsufficientTowerIsReported)
{
    auto b = make_base(3, 1, 1, 1, 14);
    auto sys = build_equations(mu_lambda(b, b.pi_power(1)));
    try {
        solve_points(sys, ExtensionTower{3, {Unramified{1}}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Tower);
    }
    try {
        solve_points(sys, ExtensionTower{3, {ArtinSchreier{3, 1}}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotSupported);
    }
    EXPECT_THROW(solve_points(sys, tame(3, 2), 3), Error);
}

TEST(Points, NonStrictModuleIsRejected)
{
    auto b = make_base(2, 1, 1, 1, 12);
    EXPECT_THROW(build_equations(mu_lambda(b, b.pi_power(3))), Error);
}

TEST(Character, MonomialCyclic)
{
    auto b = make_base(2, 1, 1, 1, 12);
    auto tc = tame_character(validate_module(b, mat(b, {{"0", "pi"}, {"pi", "0"}}), b.zeros(2, 2)));
    EXPECT_EQ(tc.N, 2u);
    EXPECT_EQ(tc.digits, (std::vector<int>{1, 1}));
    EXPECT_EQ(tc.a, 3u);
    EXPECT_EQ(tc.a_mod, 0u);
    EXPECT_FALSE(tc.trivial);
    EXPECT_TRUE(tc.digits_in_range && tc.agrees_with_strictness);

    auto b3 = make_base(3, 1, 1, 2, 12);
    auto tc3 = tame_character(validate_module(b3, mat(b3, {{"0", "pi^2", "0"}, {"0", "0", "1"}, {"pi", "0", "0"}}), b3.zeros(3, 3)));
    EXPECT_EQ(tc3.digits, (std::vector<int>{2, 0, 1}));
    EXPECT_EQ(tc3.a, 2u + 0u * 3u + 1u * 9u);
    EXPECT_EQ(tc3.a_mod, 11u % 26u);
}

TEST(Character, EtaleAndOutOfRange)
{
    auto b = make_base(2, 1, 1, 1, 12);
    EXPECT_TRUE(tame_character(mu_lambda(b, b.one())).trivial);
    auto bad = tame_character(mu_lambda(b, b.pi_power(3)));
    EXPECT_FALSE(bad.digits_in_range);
    EXPECT_TRUE(bad.agrees_with_strictness);
    EXPECT_THROW(tame_character(validate_module(b, mat(b, {{"pi", "1"}, {"0", "pi"}}), b.zeros(2, 2))), Error);
}
