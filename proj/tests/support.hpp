#pragma once

#include <complex>
#include <random>
#include <vector>

#include <klf/sl2.hpp>

namespace klf::test {

using cd = std::complex<double>;

inline const std::vector<cd>& probe_points()
{
    static const std::vector<cd> z{{0, 1}, {0, 2}, {1, 2}, {0.3, 1.5}};
    return z;
}

/** @brief Random reduced word with the given number of syllables and exponents in [-max_exp, max_exp] \ {0}. */
template <class Int>
GammaWord<Int> random_word(std::mt19937_64& rng, int syllables, int max_exp)
{
    std::uniform_int_distribution<int> e(1, max_exp), sgn(0, 1), first(1, 2);
    GammaWord<Int> w;
    int gen = first(rng);
    for (int i = 0; i < syllables; ++i) {
        int k = e(rng) * (sgn(rng) ? 1 : -1);
        w.push(gen, Int(k));
        gen = 3 - gen;
    }
    return w;
}

/** @brief Random element of SL2(Z) as a product of T^k and S. */
template <class Int>
Mat2<Int> random_sl2(std::mt19937_64& rng, int steps)
{
    std::uniform_int_distribution<int> e(-3, 3);
    Mat2<Int> m = identity<Int>();
    for (int i = 0; i < steps; ++i) m = m * translation<Int>(Int(e(rng))) * inversion<Int>();
    return m;
}

} // namespace klf::test
