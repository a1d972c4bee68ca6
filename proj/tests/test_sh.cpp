#include <gtest/gtest.h>

#include "strictmod/io.hpp"
#include "strictmod/sh.hpp"

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

KMatrix kmat(FieldPtr k, std::vector<std::vector<GaloisField::Code>> rows)
{
    KMatrix A(k, rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            A(i, j) = rows[i][j];
    return A;
}

// pi0 = u pi with u = g: exercises the e = 1 normalization dictionary
BaseData twisted_base(int p, int n0)
{
    FieldPtr k = make_field(p, n0);
    return make_base(p, n0, 1, Series::monomial(k, k->generator(), 1, 14), 14, k);
}

} // namespace

TEST(SHe1, MuPi)
{
    auto b = make_base(2, 1, 1, 1, 12);
    auto o = sh_e1(mu_lambda(b, b.pi_power(1)));
    EXPECT_EQ(o.phi0, kmat(b.k, {{0}}));
    EXPECT_EQ(o.M1, kmat(b.k, {{1}}));
    EXPECT_EQ(o.phi1, kmat(b.k, {{1}}));
    EXPECT_TRUE(o.axiom());
}

TEST(SHe1, Etale)
{
    auto b = make_base(3, 1, 1, 1, 12);
    auto o = sh_e1(mu_lambda(b, b.one()));
    EXPECT_EQ(o.phi0, kmat(b.k, {{1}}));
    EXPECT_EQ(o.M1.rows(), 0u);
    EXPECT_TRUE(o.axiom());
}

TEST(SHe1, DiagonalOneAndPi)
{
    auto b = make_base(2, 1, 1, 1, 12);
    auto o = sh_e1(validate_module(b, mat(b, {{"1", "0"}, {"0", "pi"}}), b.zeros(2, 2)));
    EXPECT_EQ(o.phi0, kmat(b.k, {{1, 0}, {0, 0}}));
    EXPECT_EQ(o.M1, kmat(b.k, {{0, 1}}));
    EXPECT_EQ(o.phi1, kmat(b.k, {{0, 1}}));
    EXPECT_TRUE(o.axiom());
}

TEST(SHe1, Preconditions)
{
    auto b2 = make_base(3, 1, 1, 2, 12);
    EXPECT_THROW(sh_e1(mu_lambda(b2, b2.pi_power(1))), Error);
    auto b = make_base(2, 1, 1, 1, 12);
    auto J = validate_module(b, mat(b, {{"1", "1 + pi"}, {"0", "1"}}), mat(b, {{"0", "1"}, {"0", "0"}}));
    EXPECT_THROW(sh_e1(J), Error);
    EXPECT_THROW(sh_general(J), Error);
    EXPECT_THROW(sh_prime(J), Error);
}

TEST(SHGeneral, MuPiEVanishingPhi0)
{
    for (auto [p, n0, e] : {std::tuple{3, 1, 2}, {2, 2, 2}, {2, 2, 3}, {5, 1, 4}}) {
        auto b = make_base(p, n0, 1, e, 14);
        auto o = sh_general(mu_lambda(b, b.pi_power(e)));
        EXPECT_TRUE(o.phi0.is_zero()) << "q=" << b.q << " e=" << e;
        ASSERT_EQ(o.M1.rows(), 1u);
        EXPECT_FALSE(o.phi1.is_zero());
        EXPECT_TRUE(o.axiom());
        EXPECT_EQ(o.ambient_dim(), static_cast<std::size_t>(e));
    }
}

TEST(SHGeneral, EtaleHasNoM1)
{
    auto b = make_base(3, 1, 1, 2, 14);
    auto o = sh_general(mu_lambda(b, b.one()));
    EXPECT_EQ(o.M1.rows(), 0u);
    EXPECT_TRUE(o.axiom());
}

TEST(SHGeneral, AxiomAcrossFixtures)
{
    for (auto [p, n0, e] : {std::tuple{2, 1, 1}, {3, 1, 1}, {3, 1, 2}, {2, 2, 1}, {2, 2, 2}, {2, 2, 3}}) {
        auto b = make_base(p, n0, 1, e, 14);
        for (int v = 0; v <= e; ++v)
            EXPECT_TRUE(sh_general(mu_lambda(b, b.pi_power(v))).axiom()) << "q=" << b.q << " e=" << e << " v=" << v;
        auto M = validate_module(b, SeriesMatrix::block_diag(b.identity(1), b.identity(1).scaled(b.pi_power(e)), b.prec), b.zeros(2, 2));
        EXPECT_TRUE(sh_general(M).axiom());
    }
}

TEST(SHGeneral, RejectsLargeE)
{
    auto b = make_base(2, 1, 1, 2, 12);
    try {
        sh_general(mu_lambda(b, b.pi_power(1)));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Domain);
    }
}

TEST(SHGeneral, AgreesWithE1)
{
    for (auto [p, n0] : {std::pair{2, 1}, {3, 1}, {2, 2}}) {
        for (const auto& b : {make_base(p, n0, 1, 1, 14), twisted_base(p, n0)}) {
            std::vector<SigmaModule> mods{mu_lambda(b, b.pi_power(1)), mu_lambda(b, b.one()),
                                          validate_module(b, mat(b, {{"1", "0"}, {"0", "pi"}}), b.zeros(2, 2)),
                                          validate_module(b, mat(b, {{"pi", "0"}, {"1", "1"}}), b.zeros(2, 2))};
            for (const auto& M : mods) {
                ASSERT_TRUE(M.valid());
                EXPECT_TRUE(sh_e1_general_agree(M)) << "q=" << b.q << " pi0=" << b.pi0.to_string();
            }
        }
    }
}

TEST(SHPrime, Examples)
{
    auto b = make_base(3, 1, 1, 2, 14);
    auto o = sh_prime(mu_lambda(b, b.pi0));
    EXPECT_TRUE(o.axiom());
    EXPECT_TRUE(o.well_defined);
    EXPECT_FALSE(o.phi0.is_zero());
    auto et = sh_prime(mu_lambda(b, b.one()));
    EXPECT_TRUE(et.axiom());
}

TEST(SHPrime, CommutesWithDirectSum)
{
    auto b = make_base(2, 2, 1, 2, 14);
    auto A = mu_lambda(b, b.pi_power(1)), B = mu_lambda(b, b.one());
    auto sa = sh_prime(A), sb = sh_prime(B), ss = sh_prime(direct_sum(A, B));
    EXPECT_EQ(ss.Mbar.rank(), sa.Mbar.rank() + sb.Mbar.rank());
    EXPECT_EQ(ss.phi0.rank(), sa.phi0.rank() + sb.phi0.rank());
    EXPECT_TRUE(ss.axiom());
}

TEST(SHPrime, FlagsLiftDependence)
{
    auto b = make_base(2, 1, 1, 2, 14);
    auto o = sh_prime(mu_lambda(b, b.pi_power(1)));
    EXPECT_FALSE(o.well_defined);
    EXPECT_FALSE(o.notes.empty());
}

TEST(SHMaps, HomsInduceCompatibleMaps)
{
    auto b = make_base(2, 1, 1, 1, 14);
    auto mu = mu_lambda(b, b.pi_power(1)), et = mu_lambda(b, b.one());
    auto M = direct_sum(mu, et);
    for (auto fl : {SHFlavor::E1, SHFlavor::General, SHFlavor::Prime}) {
        for (const auto& f : hom_solve(M, M).basis)
            EXPECT_TRUE(sh_functoriality(f, fl).ok()) << to_string(fl);
        ModuleHom u{mu, et, mat(b, {{"pi"}})};
        EXPECT_TRUE(sh_functoriality(u, fl).ok()) << to_string(fl);
    }
    auto b4 = make_base(2, 2, 1, 2, 14);
    auto N = direct_sum(mu_lambda(b4, b4.pi_power(2)), mu_lambda(b4, b4.pi_power(1)));
    for (const auto& f : hom_solve(N, N).basis)
        EXPECT_TRUE(sh_functoriality(f, SHFlavor::General).ok());
}
