#include <gtest/gtest.h>

#include "strictmod/divisible.hpp"
#include "strictmod/io.hpp"

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

SigmaModule jordan(const BaseData& b)
{
    return validate_module(b, mat(b, {{"1", "1 + pi"}, {"0", "1"}}), mat(b, {{"0", "1"}, {"0", "0"}}));
}

// Oracle: split iff some hom right -> middle is a section of the projection. Enumerates Hom over F_q.
bool split_by_section_search(const Extension& e)
{
    auto s = e.ses();
    auto H = hom_solve(e.right, e.middle);
    SeriesMatrix id = e.right.base.identity(e.right.rank());
    for (const auto& f : hom_enumerate(H, e.right, e.middle))
        if (agree(f.U * s.j.U, id))
            return true;
    return false;
}

} // namespace

TEST(Tower, N1LevelsAreDivisible)
{
    for (auto [p, n0, e] : {std::tuple{2, 1, 1}, {3, 1, 1}, {2, 2, 1}, {2, 1, 2}}) {
        auto b = make_base(p, n0, 1, e, 14);
        for (int v = 0; v <= e; ++v) {
            auto M = mu_lambda(b, b.pi_power(v));
            auto t = build_tower_N1(M, 3);
            ASSERT_EQ(t.tower.levels.size(), 3u);
            for (std::size_t l = 0; l < 3; ++l)
                EXPECT_EQ(t.tower.levels[l].rank(), 2 * (l + 1));
            auto rep = verify_divisible(t.tower);
            EXPECT_TRUE(rep.ok) << "q=" << b.q << " e=" << e << " v=" << v << " " << (rep.failures.empty() ? "" : rep.failures[0]);
            EXPECT_FALSE(rep.vacuous);
            EXPECT_TRUE(hom_check(t.surjection).ok());
            EXPECT_TRUE(is_surjection_matrix(t.surjection.U));
        }
    }
}

TEST(Tower, SabotagedTowerFails)
{
    auto b = make_base(2, 1, 1, 1, 14);
    auto t = build_tower_N1(mu_lambda(b, b.pi_power(1)), 3);
    auto bad = t.tower;
    bad.incl[0].U = bad.incl[0].U.scaled(b.pi_power(1));
    EXPECT_FALSE(verify_divisible(bad).ok);
    auto bad2 = t.tower;
    bad2.proj[1].U = b.zeros(bad2.proj[1].U.rows(), bad2.proj[1].U.cols());
    EXPECT_FALSE(verify_divisible(bad2).ok);
    auto one = t.tower;
    one.levels.resize(1);
    one.incl.clear();
    one.proj.clear();
    auto r = verify_divisible(one);
    EXPECT_TRUE(r.vacuous);
    EXPECT_FALSE(r.warnings.empty());
}

TEST(Tower, N1NeedsZeroD)
{
    auto b = make_base(2, 1, 1, 1, 14);
    try {
        build_tower_N1(jordan(b), 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Domain);
    }
}

TEST(Tower, DualTowerIsDivisible)
{
    auto b = make_base(3, 1, 1, 1, 14);
    auto T = build_tower(jordan(make_base(2, 1, 1, 1, 14)), 3);
    EXPECT_TRUE(verify_divisible(T).ok);
    EXPECT_TRUE(verify_divisible(dual_tower(T)).ok);
    auto U = build_tower(mu_lambda(b, b.pi_power(1)), 2);
    EXPECT_TRUE(verify_divisible(dual_tower(U)).ok);
}

TEST(Embed, JordanIntoDivisible)
{
    auto b = make_base(2, 1, 1, 1, 16);
    auto E = embed_into_divisible(jordan(b), 2);
    EXPECT_TRUE(E.ok());
    EXPECT_TRUE(E.trace.computed);
    EXPECT_TRUE(E.trace.difference_killed);
    EXPECT_EQ(E.embedding.source.rank(), 2u);
    EXPECT_EQ(E.embedding.target.rank(), E.tower.levels[1].rank());
    EXPECT_THROW(embed_into_divisible(jordan(b), 1), Error);
    EXPECT_THROW(embed_into_divisible(jordan(b), 9), Error);
}

TEST(Embed, RankOneAndSums)
{
    auto b = make_base(3, 1, 1, 2, 14);
    auto M = direct_sum(mu_lambda(b, b.pi_power(1)), mu_lambda(b, b.pi_power(2)));
    auto E = embed_into_divisible(M, 1);
    EXPECT_TRUE(E.ok());
    EXPECT_FALSE(E.trace.computed);
}

TEST(Ext, NonSplitOverF2)
{
    auto b = make_base(2, 1, 1, 1, 14);
    auto mu = mu_lambda(b, b.pi_power(1));
    auto e = make_extension(mu, mu, mat(b, {{"pi"}}), b.zeros(1, 1));
    ASSERT_TRUE(e.middle.valid());
    EXPECT_FALSE(is_split(e));
    EXPECT_FALSE(split_by_section_search(e));
    // X = pi^2 = pi (sigma(V) - V) with V = pi + pi^2 + pi^4 + ...
    auto f = make_extension(mu, mu, mat(b, {{"pi^2"}}), b.zeros(1, 1));
    EXPECT_TRUE(is_split(f));
    EXPECT_TRUE(split_by_section_search(f));
    EXPECT_TRUE(is_split(split_extension(mu, mu)));
}

TEST(Ext, SplitMatchesSectionSearch)
{
    auto b = make_base(2, 1, 1, 1, 12);
    auto mu = mu_lambda(b, b.pi_power(1)), et = mu_lambda(b, b.one());
    int tested = 0, split = 0;
    for (const auto& [L, R] : {std::pair{mu, mu}, {mu, et}, {et, mu}, {et, et}})
        for (const char* x : {"0", "1", "pi", "1 + pi", "pi^2"}) {
            auto e = make_extension(L, R, mat(b, {{x}}), b.zeros(1, 1));
            if (!e.middle.valid())
                continue;
            bool s = split_by_section_search(e);
            EXPECT_EQ(is_split(e), s) << x;
            ++tested;
            split += s;
        }
    EXPECT_GE(tested, 10);
    EXPECT_GT(split, 0);
    EXPECT_LT(split, tested);
}

TEST(Ext, BaerDifference)
{
    auto b = make_base(2, 1, 1, 1, 14);
    auto mu = mu_lambda(b, b.pi_power(1));
    auto e = make_extension(mu, mu, mat(b, {{"pi"}}), b.zeros(1, 1));
    auto d = baer_difference(e, e);
    EXPECT_TRUE(d.matches_formula);
    EXPECT_TRUE(is_split(d.difference));
    auto s = split_extension(mu, mu);
    auto d2 = baer_difference(e, s);
    EXPECT_TRUE(d2.matches_formula);
    EXPECT_TRUE(extensions_equivalent(d2.difference, e).equivalent);
    EXPECT_THROW(baer_difference(e, split_extension(mu_lambda(b, b.one()), mu)), Error);
}

TEST(Ext, StandardFormRoundTrip)
{
    auto b = make_base(2, 1, 1, 1, 14);
    auto mu = mu_lambda(b, b.pi_power(1));
    auto e = make_extension(mu, mu, mat(b, {{"pi"}}), b.zeros(1, 1));
    auto f = to_standard_form(e.ses());
    EXPECT_TRUE(agree(f.X, e.X));
    EXPECT_TRUE(extensions_equivalent(e, f).equivalent);
}

TEST(Ext, PushoutAndPullbackNeedPureMaps)
{
    auto b = make_base(2, 1, 1, 1, 14);
    auto mu = mu_lambda(b, b.pi_power(1)), et = mu_lambda(b, b.one());
    ModuleHom u{mu, et, mat(b, {{"pi"}})}; // pi * pi = sigma(pi) * 1
    ASSERT_TRUE(hom_check(u).ok());
    auto e = make_extension(mu, mu, mat(b, {{"pi"}}), b.zeros(1, 1));
    try {
        pushout(e, u);
        FAIL();
    } catch (const Error& err) {
        EXPECT_EQ(err.kind(), ErrorKind::Domain);
    }
    auto g = make_extension(et, et, mat(b, {{"1"}}), b.zeros(1, 1));
    EXPECT_THROW(pullback(g, u), Error);
    EXPECT_NO_THROW(pullback(g, u, false));
    auto id = identity_hom(mu);
    auto po = pushout(e, id);
    EXPECT_TRUE(extensions_equivalent(po, e).equivalent);
}
