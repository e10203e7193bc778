#include <gtest/gtest.h>

#include <boost/math/special_functions/zeta.hpp>

#include <klf/eisenstein.hpp>

#include "support.hpp"

using namespace klf;
using klf::test::cd;

namespace {

constexpr double catalan = 0.915965594177219015054603514932384110774;

double zeta_oracle(double s) { return boost::math::zeta(s); }

/** @brief sigma_a(m) = sum of d^a over divisors d of m. */
double divisor_sigma(long m, double a)
{
    double s = 0;
    for (long d = 1; d <= m; ++d)
        if (m % d == 0) s += std::pow(static_cast<double>(d), a);
    return s;
}

TruncationSpec spec(long c_max, int m_max = 10)
{
    TruncationSpec t;
    t.c_max = c_max;
    t.m_max = m_max;
    return t;
}

/** @brief Sum over cusps of one Gamma(2) family, rescaled to the Gamma(2) normalization. */
cd family_sum(const GroupId& g, const std::vector<DirectValue>& v, Base b, double s)
{
    cd acc = 0;
    const auto cusps = group_cusps(g);
    for (std::size_t j = 0; j < cusps.size(); ++j)
        if (cusps[j].base == b) acc += v[j].value;
    return acc * std::pow(static_cast<double>(g.n), s);
}

} // namespace

TEST(EisensteinDirect, LevelOneAtI)
{
    // sum' (m^2 + n^2)^-s = 4 zeta(s) beta(s), so E(i, 2) = 30 G / pi^2
    const auto v = eisenstein_direct(GroupId::gamma1(), 0, cd(0, 1), 2.0, spec(1000));
    EXPECT_NEAR(v.value.real(), 30 * catalan / (pi * pi), 3 * v.tail_estimate);
    EXPECT_NEAR(v.value.imag(), 0, 1e-15);
    EXPECT_LT(v.tail_estimate, 1e-5);
}

TEST(EisensteinDirect, Gamma2DominantTerm)
{
    const auto v = eisenstein_direct(GroupId::gamma2(), 2, cd(0, 10), 2.0, spec(50));
    EXPECT_NEAR(v.value.real() / 25.0, 1.0, 1e-2);
    const auto w = eisenstein_direct(GroupId::gamma2(), 0, cd(0, 10), 2.0, spec(50));
    EXPECT_LT(w.value.real(), 0.05);
}

TEST(EisensteinDirect, CuspSumGivesLevelOne)
{
    for (const cd& z : klf::test::probe_points()) {
        const auto all = eisenstein_direct_all(GroupId::gamma2(), z, 2.0, spec(400));
        const auto one = eisenstein_direct(GroupId::gamma1(), 0, z, 2.0, spec(400));
        const cd sum = (all[0].value + all[1].value + all[2].value) * 4.0;
        EXPECT_NEAR(std::abs(sum - one.value), 0, 1e-12 * std::abs(one.value));
    }
}

TEST(EisensteinDirect, FamilySumGivesGamma2)
{
    for (int n : {2, 3}) {
        const cd z(0.3, 1.5);
        const auto fn = eisenstein_direct_all(GroupId::gamma_n(n), z, 2.0, spec(300));
        const auto g2 = eisenstein_direct_all(GroupId::gamma2(), z, 2.0, spec(300));
        for (Base b : {Base::Zero, Base::One, Base::Inf}) {
            const cd lhs = family_sum(GroupId::gamma_n(n), fn, b, 2.0);
            EXPECT_NEAR(std::abs(lhs - g2[static_cast<int>(b)].value), 0, 1e-12);
        }
    }
}

TEST(EisensteinDirect, LevelOneFermatEqualsGamma2)
{
    const cd z(1, 2);
    const auto a = eisenstein_direct_all(GroupId::gamma_n(1), z, cd(2, 0.5), spec(200));
    const auto b = eisenstein_direct_all(GroupId::gamma2(), z, cd(2, 0.5), spec(200));
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t j = 0; j < a.size(); ++j) EXPECT_NEAR(std::abs(a[j].value - b[j].value), 0, 1e-14);
}

TEST(EisensteinDirect, Positivity)
{
    for (int n : {2, 3})
        for (const cd& z : klf::test::probe_points())
            for (const auto& v : eisenstein_direct_all(GroupId::gamma_n(n), z, 1.5, spec(100))) EXPECT_GT(v.value.real(), 0);
}

TEST(EisensteinDirect, ModularInvariance)
{
    const cd z(0.3, 1.5);
    for (int n : {2, 3}) {
        const GroupId g = GroupId::gamma_n(n);
        const Mat2i gam = gamma1<i64>() * gamma2<i64>() * inverse(gamma1<i64>()) * inverse(gamma2<i64>());
        ASSERT_TRUE(g.contains(gam));
        const auto a = eisenstein_direct_all(g, z, 2.0, spec(800));
        const auto b = eisenstein_direct_all(g, mobius_point(gam, z), 2.0, spec(800));
        for (std::size_t j = 0; j < a.size(); ++j) EXPECT_NEAR(std::abs(a[j].value - b[j].value), 0, 1e-4) << n << " " << j;
    }
}

TEST(EisensteinDirect, ChartMatchesTransformedPoint)
{
    const cd z(0.3, 1.5);
    const Mat2i m = inversion<i64>() * translation<i64>(1);
    const auto a = eisenstein_direct_all(GroupId::gamma_n(2), z, 2.0, spec(800), m);
    const auto b = eisenstein_direct_all(GroupId::gamma_n(2), mobius_point(m, z), 2.0, spec(800));
    for (std::size_t j = 0; j < a.size(); ++j) EXPECT_NEAR(std::abs(a[j].value - b[j].value), 0, 1e-4);
}

TEST(EisensteinDirect, Errors)
{
    EXPECT_THROW(eisenstein_direct(GroupId::gamma2(), 0, cd(0, 1), 1.0, spec(10)), DivergentRegion);
    EXPECT_THROW(eisenstein_direct(GroupId::gamma2(), 0, cd(0, 1), 0.5, spec(10)), DivergentRegion);
    EXPECT_THROW(eisenstein_direct(GroupId::gamma2(), 3, cd(0, 1), 2.0, spec(10)), InvalidArgument);
    EXPECT_THROW(eisenstein_direct(GroupId::gamma2(), 0, cd(0, -1), 2.0, spec(10)), InvalidArgument);
    EXPECT_THROW(eisenstein_direct(GroupId::gamma2(), 0, cd(0, 1), 2.0, spec(0)), InvalidArgument);
    TruncationSpec t = spec(10);
    t.tol = 1e-12;
    EXPECT_THROW(eisenstein_direct(GroupId::gamma2(), 0, cd(0, 1), 2.0, t), TruncationUnsound);
}

TEST(DoubleCoset, MatchesCuspClassification)
{
    for (const GroupId& g : {GroupId::gamma2(), GroupId::gamma_n(2), GroupId::gamma_n(3)}) {
        const auto cusps = group_cusps(g);
        for (std::size_t j = 0; j < cusps.size(); ++j)
            for (std::size_t k = 0; k < cusps.size(); ++k)
                for (i64 c = 1; c <= 7; ++c) {
                    std::vector<i64> expect;
                    for (i64 d = 0; d < g.width() * c; ++d) {
                        if (detail::gcd<i64>(c, d) != 1) continue;
                        const Cuspi cu = mobius_apply(cusps[k].scaling, make_cusp<i64>(-d, c));
                        if (cusp_class(g, cu) == static_cast<int>(j)) expect.push_back(d);
                    }
                    EXPECT_EQ(double_coset_residues(g, static_cast<int>(j), static_cast<int>(k), c), expect)
                        << g.name() << " " << j << " " << k << " " << c;
                }
    }
}

TEST(DoubleCoset, ResiduesPartitionCoprimeClasses)
{
    const GroupId g = GroupId::gamma_n(3);
    const int ncusp = 9;
    for (i64 c = 1; c <= 6; ++c)
        for (int k = 0; k < ncusp; ++k) {
            std::size_t total = 0;
            for (int j = 0; j < ncusp; ++j) total += double_coset_residues(g, j, k, c).size();
            std::size_t coprime = 0;
            for (i64 d = 0; d < g.width() * c; ++d) coprime += detail::gcd<i64>(c, d) == 1;
            EXPECT_EQ(total, coprime);
        }
}

TEST(PhiSeries, LevelOneRamanujanSums)
{
    // sum_c c_c(m) c^-2s = sigma_{1-2s}(m) / zeta(2s)
    const double s = 2;
    const auto ph = phi_series(GroupId::gamma1(), 0, 0, s, spec(2000, 4));
    EXPECT_NEAR(ph.at(0).partial_sum.real(), zeta_oracle(2 * s - 1) / zeta_oracle(2 * s), 2 * ph.at(0).tail_estimate);
    for (long m = 1; m <= 4; ++m) {
        const double ref = divisor_sigma(m, 1 - 2 * s) / zeta_oracle(2 * s);
        EXPECT_NEAR(ph.at(m).partial_sum.real(), ref, 2 * ph.at(m).tail_estimate);
        EXPECT_NEAR(ph.at(m).partial_sum.imag(), 0, 1e-12);
        EXPECT_EQ(ph.at(-m).partial_sum, std::conj(ph.at(m).partial_sum));
    }
}

TEST(PhiSeries, ZeroModeCounts)
{
    const GroupId g = GroupId::gamma_n(2);
    const long C = 40;
    const auto ph = phi_series(g, 0, 3, 2.0, spec(C, 1));
    double ref = 0;
    for (i64 c = 1; c <= C; ++c) ref += static_cast<double>(double_coset_residues(g, 0, 3, c).size()) / std::pow(double(c), 4);
    EXPECT_NEAR(ph.at(0).partial_sum.real(), ref, 1e-14);
    EXPECT_EQ(ph.at(0).c_reached, C);
    EXPECT_FALSE(ph.at(0).conditional);
}

TEST(PhiSeries, Symmetry)
{
    const GroupId g = GroupId::gamma_n(2);
    for (int j = 0; j < 6; ++j)
        for (int k = j + 1; k < 6; ++k) {
            const auto a = phi_coefficient(g, j, k, 0, 2.0, spec(300));
            const auto b = phi_coefficient(g, k, j, 0, 2.0, spec(300));
            EXPECT_NEAR(a.partial_sum.real(), b.partial_sum.real(), 1e-12) << j << " " << k;
        }
}

TEST(PhiSeries, Gamma2ClosedForm)
{
    // at infinity c is even and d runs mod 2c, so each c contributes 2 phi(c)
    const auto d = phi_coefficient(GroupId::gamma2(), 2, 2, 0, 2.0, spec(2000));
    double ref = 0;
    for (long c = 2; c <= 200000; c += 2) {
        long phi = c, r = c;
        for (long p = 2; p * p <= r; ++p)
            if (r % p == 0) {
                while (r % p == 0) r /= p;
                phi -= phi / p;
            }
        if (r > 1) phi -= phi / r;
        ref += 2.0 * static_cast<double>(phi) / std::pow(static_cast<double>(c), 4);
    }
    EXPECT_NEAR(d.partial_sum.real(), ref, 2 * d.tail_estimate);
}

TEST(PhiSeries, DiagonalModesReal)
{
    const auto ph = phi_series(GroupId::gamma2(), 2, 2, 2.0, spec(200, 5));
    for (const auto& t : ph.terms) EXPECT_NEAR(t.partial_sum.imag(), 0, 1e-13);
}

TEST(PhiSeries, Errors)
{
    EXPECT_THROW(phi_series(GroupId::gamma2(), 0, 0, 1.0, spec(10)), DivergentRegion);
    EXPECT_THROW(phi_series(GroupId::gamma2(), 0, 0, 0.8, spec(10), false), DivergentRegion);
    EXPECT_NO_THROW(phi_series(GroupId::gamma2(), 0, 0, 1.0, spec(10), false));
    EXPECT_THROW(phi_series(GroupId::gamma_n(2), 0, 6, 2.0, spec(10)), InvalidArgument);
    TruncationSpec t = spec(10);
    t.tol = 1e-8;
    EXPECT_THROW(phi_series(GroupId::gamma2(), 0, 0, 2.0, t), TruncationUnsound);
}

TEST(PhiSeries, ConditionalTail)
{
    const auto ph = phi_series(GroupId::gamma2(), 0, 2, 1.0, spec(400, 3), false);
    for (const auto& t : ph.terms) {
        EXPECT_NE(t.m, 0);
        EXPECT_TRUE(t.conditional);
        EXPECT_GE(t.tail_estimate, 0);
        EXPECT_LT(t.tail_estimate, 1e-2);
    }
}

TEST(Fourier, MatchesDirectGamma2)
{
    const GroupId g = GroupId::gamma2();
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
            const cd z(0.3, 1.5);
            const cd f = fourier_eval(g, j, k, z, 2.0, spec(500));
            const cd d = eisenstein_direct(g, j, z, 2.0, spec(500), group_cusps(g)[k].scaling).value;
            EXPECT_NEAR(std::abs(f - d), 0, 1e-4) << j << " " << k;
        }
}

TEST(Fourier, MatchesDirectFermat)
{
    const GroupId g = GroupId::gamma_n(2);
    const cd z(1, 2);
    for (auto [j, k] : {std::pair{0, 0}, std::pair{0, 3}, std::pair{4, 5}}) {
        const cd f = fourier_eval(g, j, k, z, cd(2, 0.3), spec(500));
        const cd d = eisenstein_direct(g, j, z, cd(2, 0.3), spec(500), group_cusps(g)[k].scaling).value;
        EXPECT_NEAR(std::abs(f - d), 0, 1e-4) << j << " " << k;
    }
}

TEST(Fourier, LargeHeight)
{
    const GroupId g = GroupId::gamma2();
    const cd z(0.25, 30);
    const cd diag = fourier_eval(g, 2, 2, z, 2.0, spec(300));
    EXPECT_NEAR(std::abs(diag / std::pow(15.0, 2.0) - 1.0), 0, 1e-3);
    const cd off = fourier_eval(g, 0, 2, z, 2.0, spec(300));
    EXPECT_LT(std::abs(off), 1e-2);
    const cd d = eisenstein_direct(g, 2, z, 2.0, spec(20)).value;
    EXPECT_NEAR(std::abs(diag - d), 0, 1e-6 * std::abs(d));
}

TEST(Fourier, DivergentRegion)
{
    EXPECT_THROW(fourier_eval(GroupId::gamma2(), 0, 0, cd(0, 1), 1.0, spec(10)), DivergentRegion);
}

TEST(FourierLimit, Periodicity)
{
    const GroupId g = GroupId::gamma_n(2);
    const auto ph = phi_series(g, 1, 4, 1.0, spec(300, 12), false);
    for (const cd& z : klf::test::probe_points())
        EXPECT_NEAR(fourier_limit_eval(ph, z), fourier_limit_eval(ph, z + cd(4, 0)), 1e-10);
}

TEST(FourierLimit, LargeHeightAsymptotic)
{
    const GroupId g = GroupId::gamma2();
    const double y = 10;
    const double v = fourier_limit_eval(g, 2, 2, cd(0.4, y), spec(200, 4));
    const double ref = 4 * pi * (y / 2 + natural_constant(g, 2, 2) - 1 / (2 * pi) * std::log(y));
    EXPECT_NEAR(v, ref, 1e-9);
}

TEST(FourierLimit, RequiresUnitS)
{
    const auto ph = phi_series(GroupId::gamma2(), 0, 0, 2.0, spec(20));
    EXPECT_THROW(fourier_limit_eval(ph, cd(0, 1)), InvalidArgument);
}

TEST(Parallel, WorkerCountDoesNotChangeResults)
{
    const GroupId g = GroupId::gamma_n(3);
    set_workers(1);
    const auto a = phi_series(g, 0, 4, 1.0, spec(300, 5), false);
    const auto da = eisenstein_direct_all(g, cd(0.3, 1.5), 2.0, spec(200));
    set_workers(5);
    const auto b = phi_series(g, 0, 4, 1.0, spec(300, 5), false);
    const auto db = eisenstein_direct_all(g, cd(0.3, 1.5), 2.0, spec(200));
    set_workers(0);
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        EXPECT_EQ(a.terms[i].partial_sum, b.terms[i].partial_sum);
        EXPECT_EQ(a.terms[i].tail_estimate, b.terms[i].tail_estimate);
    }
    for (std::size_t j = 0; j < da.size(); ++j) EXPECT_EQ(da[j].value, db[j].value);
}
