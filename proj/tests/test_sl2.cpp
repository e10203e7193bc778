#include <gtest/gtest.h>

#include <klf/sl2.hpp>

#include "support.hpp"

using namespace klf;
using klf::test::random_word;

namespace {
const Mat2Z g1 = gamma1<BigInt>();
const Mat2Z g2 = gamma2<BigInt>();
const CuspZ inf = infinity_cusp<BigInt>();
CuspZ cz(long p, long q) { return make_cusp<BigInt>(p, q); }
} // namespace

TEST(MobiusApply, Examples)
{
    EXPECT_EQ(mobius_apply(g1, inf), inf);
    EXPECT_EQ(mobius_apply(g2, inf), cz(1, 2));
    EXPECT_EQ(mobius_apply(Mat2Z{0, 1, -1, 0}, cz(0, 1)), inf);
}

TEST(MobiusApply, GroupAction)
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        auto m1 = klf::test::random_sl2<BigInt>(rng, 4);
        auto m2 = klf::test::random_sl2<BigInt>(rng, 4);
        for (long p = -5; p <= 5; ++p) {
            auto c = cz(p, 3);
            EXPECT_EQ(mobius_apply(m1 * m2, c), mobius_apply(m1, mobius_apply(m2, c)));
        }
    }
}

TEST(MobiusPoint, Examples)
{
    using cd = std::complex<double>;
    const cd i(0, 1);
    EXPECT_NEAR(std::abs(mobius_point(identity<BigInt>(), i) - i), 0, 1e-15);
    EXPECT_NEAR(std::abs(mobius_point(Mat2Z{0, 1, -1, 0}, i) - i), 0, 1e-15);
    EXPECT_NEAR(std::abs(mobius_point(g1, i) - cd(2, 1)), 0, 1e-15);
    auto w = mobius_point(g2 * g1 * g2, cd(0.3, 0.7));
    EXPECT_GT(w.imag(), 0);
}

TEST(Canonical, SignConvention)
{
    Mat2Z m{-1, -2, 0, -1};
    EXPECT_EQ(canonical(m), g1);
    EXPECT_TRUE(psl_equal(-g2, g2));
    EXPECT_EQ(canonical(Mat2Z{1, 0, -2, 1}), (Mat2Z{-1, 0, 2, -1}));
}

TEST(ScalingMatrix, Examples)
{
    EXPECT_EQ(cusp_scaling_matrix(inf), identity<BigInt>());
    EXPECT_TRUE(psl_equal(cusp_scaling_matrix(cz(0, 1)), Mat2Z{0, -1, 1, 0}));
    EXPECT_EQ(cusp_scaling_matrix(cz(1, 2)), g2);
    for (long q = 1; q < 30; ++q)
        for (long p = -40; p <= 40; ++p) {
            if (detail::gcd(p, q) != 1) continue;
            auto m = cusp_scaling_matrix(cz(p, q));
            EXPECT_EQ(m.det(), 1);
            EXPECT_EQ(mobius_apply(m, inf), cz(p, q));
            EXPECT_TRUE(m.d >= 0 && m.d < std::max<long>(q, 1) + (q == 1 ? 1 : 0));
        }
}

TEST(Gamma2, Membership)
{
    EXPECT_TRUE(is_in_gamma2(identity<BigInt>()));
    EXPECT_TRUE(is_in_gamma2(g2));
    EXPECT_FALSE(is_in_gamma2(Mat2Z{1, 1, 0, 1}));
    EXPECT_TRUE(is_in_gamma2(-g1));
}

TEST(Decompose, Examples)
{
    auto w = decompose_gamma2(g1);
    ASSERT_EQ(w.syllables.size(), 1u);
    EXPECT_EQ(w.syllables[0].gen, 1);
    EXPECT_EQ(w.syllables[0].exp, 1);
    EXPECT_TRUE(decompose_gamma2(identity<BigInt>()).syllables.empty());
    auto word = make_word<BigInt>({{1, 2}, {2, -3}});
    EXPECT_EQ(decompose_gamma2(eval(word)), word);
    EXPECT_THROW(decompose_gamma2(Mat2Z{1, 1, 0, 1}), NotInGamma2);
}

TEST(Decompose, NegatedMatrixGivesSameWord)
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
        auto w = random_word<BigInt>(rng, 1 + i % 12, 6);
        EXPECT_EQ(decompose_gamma2(-eval(w)), w);
    }
}

TEST(Decompose, RoundTripRandomWords)
{
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 3000; ++i) {
        auto w = random_word<BigInt>(rng, i % 13, 9);
        auto m = eval(w);
        auto back = decompose_gamma2(m);
        ASSERT_EQ(back, w) << to_string(w) << " vs " << to_string(back);
        EXPECT_TRUE(psl_equal(eval(back), m));
    }
}

TEST(Decompose, LongWordsNeedBigIntegers)
{
    std::mt19937_64 rng(5);
    auto w = random_word<BigInt>(rng, 40, 50);
    auto m = eval(w);
    EXPECT_GT(boost::multiprecision::abs(m.a), BigInt(std::numeric_limits<long long>::max()));
    EXPECT_EQ(decompose_gamma2(m), w);
}

TEST(Decompose, FixedWidthAgreesWithBigInt)
{
    std::mt19937_64 rng(3);
    for (int i = 0; i < 500; ++i) {
        auto w = random_word<BigInt>(rng, 1 + i % 6, 4);
        auto m = eval(w);
        auto mi = m.cast<i64>();
        auto [r1, r2] = gamma2_class(mi);
        EXPECT_EQ(BigInt(r1), w.r1);
        EXPECT_EQ(BigInt(r2), w.r2);
    }
}

TEST(ExponentSums, Examples)
{
    GammaWord<BigInt> empty;
    EXPECT_EQ(exponent_sums(empty), std::make_pair(BigInt(0), BigInt(0)));
    auto w = make_word<BigInt>({{1, 2}, {2, -3}});
    EXPECT_EQ(exponent_sums(w), std::make_pair(BigInt(2), BigInt(-3)));
    auto conj = decompose_gamma2(g1 * g2 * inverse(g1));
    EXPECT_EQ(exponent_sums(conj), std::make_pair(BigInt(0), BigInt(1)));
}

TEST(ExponentSums, Homomorphism)
{
    std::mt19937_64 rng(99);
    for (int i = 0; i < 500; ++i) {
        auto x = random_word<BigInt>(rng, 1 + i % 7, 5);
        auto y = random_word<BigInt>(rng, 1 + (i / 7) % 7, 5);
        auto xy = decompose_gamma2(eval(x) * eval(y));
        EXPECT_EQ(xy.r1, x.r1 + y.r1);
        EXPECT_EQ(xy.r2, x.r2 + y.r2);
        EXPECT_EQ(xy, concat(x, y));
    }
}

TEST(GammaN, Membership)
{
    for (int n = 1; n <= 6; ++n) EXPECT_TRUE(is_in_gamma_n(power(g2, n), n));
    EXPECT_FALSE(is_in_gamma_n(g1, 2));
    EXPECT_FALSE(is_in_gamma_n(Mat2Z{1, 1, 0, 1}, 1));
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) EXPECT_TRUE(is_in_gamma_n(eval(random_word<BigInt>(rng, 5, 7)), 1));
}

TEST(GammaN, NormalInModularGroup)
{
    std::mt19937_64 rng(17);
    for (int n = 2; n <= 5; ++n) {
        for (int i = 0; i < 100; ++i) {
            auto w = random_word<BigInt>(rng, 4, 6);
            GammaWord<BigInt> fix;
            fix.push(1, -w.r1 + n * (i % 3));
            fix.push(2, -w.r2 - n);
            auto m = eval(concat(w, fix));
            ASSERT_TRUE(is_in_gamma_n(m, n));
            auto rho = klf::test::random_sl2<BigInt>(rng, 5);
            EXPECT_TRUE(is_in_gamma_n(rho * m * inverse(rho), n));
        }
    }
}
