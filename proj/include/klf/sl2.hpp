#pragma once

#include <complex>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace klf {

using BigInt = boost::multiprecision::cpp_int;
using i64 = std::int64_t;

namespace detail {

template <class Int>
Int iabs(const Int& x) { return x < 0 ? Int(-x) : x; }

template <class Int>
int isign(const Int& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

/** @brief floor(x / y) for y != 0. */
template <class Int>
Int floor_div(const Int& x, const Int& y)
{
    Int q = x / y;
    Int r = x % y;
    if (r != 0 && ((r < 0) != (y < 0))) q -= 1;
    return q;
}

/** @brief x mod m in [0, |m|). */
template <class Int>
Int mod_floor(const Int& x, const Int& m)
{
    Int r = x % m;
    if (r < 0) r += iabs(m);
    return r;
}

/** @brief Nearest integer to x / y, ties toward smaller magnitude. */
template <class Int>
Int round_div(Int x, Int y)
{
    if (y < 0) {
        x = -x;
        y = -y;
    }
    Int q = floor_div(x, y);
    Int r = x - q * y;
    Int twice = 2 * r;
    if (twice > y) return q + 1;
    if (twice == y) return q < 0 ? Int(q + 1) : q;
    return q;
}

/** @brief Extended Euclid: returns (g, x, y) with a x + b y = g >= 0. */
template <class Int>
std::tuple<Int, Int, Int> egcd(Int a, Int b)
{
    Int x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        Int q = a / b;
        Int t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
        t = y0 - q * y1;
        y0 = y1;
        y1 = t;
    }
    if (a < 0) return {Int(-a), Int(-x0), Int(-y0)};
    return {a, x0, y0};
}

template <class Int>
Int gcd(Int a, Int b)
{
    a = iabs(a);
    b = iabs(b);
    while (b != 0) {
        Int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

template <class Int>
double to_double(const Int& x) { return static_cast<double>(x); }

} // namespace detail

/** @brief Element of PSL2(Z) stored as a determinant-one integer matrix (a b; c d). */
template <class Int>
struct Mat2 {
    Int a{1}, b{0}, c{0}, d{1};

    bool operator==(const Mat2& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
    bool operator!=(const Mat2& o) const { return !(*this == o); }

    Mat2 operator*(const Mat2& m) const
    {
        return {Int(a * m.a + b * m.c), Int(a * m.b + b * m.d), Int(c * m.a + d * m.c), Int(c * m.b + d * m.d)};
    }

    Mat2 operator-() const { return {Int(-a), Int(-b), Int(-c), Int(-d)}; }

    Int det() const { return a * d - b * c; }

    template <class J>
    Mat2<J> cast() const { return {J(a), J(b), J(c), J(d)}; }
};

using Mat2Z = Mat2<BigInt>;
using Mat2i = Mat2<i64>;

template <class Int>
std::ostream& operator<<(std::ostream& os, const Mat2<Int>& m)
{
    return os << "(" << m.a << " " << m.b << "; " << m.c << " " << m.d << ")";
}

/** @brief Sign normalization: the first nonzero entry of (c, a) is positive. */
template <class Int>
Mat2<Int> canonical(const Mat2<Int>& m)
{
    if (m.c < 0 || (m.c == 0 && m.a < 0)) return -m;
    return m;
}

template <class Int>
bool psl_equal(const Mat2<Int>& x, const Mat2<Int>& y) { return canonical(x) == canonical(y); }

template <class Int>
Mat2<Int> inverse(const Mat2<Int>& m) { return {m.d, Int(-m.b), Int(-m.c), m.a}; }

template <class Int>
Mat2<Int> identity() { return {Int(1), Int(0), Int(0), Int(1)}; }

template <class Int>
Mat2<Int> gamma1() { return {Int(1), Int(2), Int(0), Int(1)}; }

template <class Int>
Mat2<Int> gamma2() { return {Int(1), Int(0), Int(2), Int(1)}; }

/** @brief T = (1 1; 0 1). */
template <class Int>
Mat2<Int> translation(const Int& n) { return {Int(1), n, Int(0), Int(1)}; }

/** @brief S = (0 -1; 1 0). */
template <class Int>
Mat2<Int> inversion() { return {Int(0), Int(-1), Int(1), Int(0)}; }

template <class Int>
Mat2<Int> power(Mat2<Int> m, long long k)
{
    if (k < 0) {
        m = inverse(m);
        k = -k;
    }
    Mat2<Int> r = identity<Int>();
    while (k > 0) {
        if (k & 1) r = r * m;
        m = m * m;
        k >>= 1;
    }
    return r;
}

/** @brief Point (p:q) of P^1(Q), normalized with q > 0 or (p:q) = (1:0). */
template <class Int>
struct Cusp {
    Int p{1}, q{0};

    bool operator==(const Cusp& o) const { return p == o.p && q == o.q; }
    bool operator!=(const Cusp& o) const { return !(*this == o); }
    bool operator<(const Cusp& o) const { return std::tie(q, p) < std::tie(o.q, o.p); }

    bool is_infinity() const { return q == 0; }

    template <class J>
    Cusp<J> cast() const { return {J(p), J(q)}; }
};

using CuspZ = Cusp<BigInt>;
using Cuspi = Cusp<i64>;

template <class Int>
Cusp<Int> make_cusp(Int p, Int q)
{
    if (p == 0 && q == 0) throw InvalidArgument("cusp (0:0)");
    Int g = detail::gcd(p, q);
    p /= g;
    q /= g;
    if (q < 0 || (q == 0 && p < 0)) {
        p = -p;
        q = -q;
    }
    return {p, q};
}

template <class Int>
Cusp<Int> infinity_cusp() { return {Int(1), Int(0)}; }

template <class Int>
std::string to_string(const Cusp<Int>& c)
{
    std::ostringstream os;
    if (c.q == 0) return "inf";
    if (c.q == 1) {
        os << c.p;
    } else {
        os << c.p << "/" << c.q;
    }
    return os.str();
}

template <class Int>
std::ostream& operator<<(std::ostream& os, const Cusp<Int>& c) { return os << to_string(c); }

template <class Int>
Cusp<Int> mobius_apply(const Mat2<Int>& m, const Cusp<Int>& c)
{
    return make_cusp<Int>(m.a * c.p + m.b * c.q, m.c * c.p + m.d * c.q);
}

/** @brief (a z + b) / (c z + d) for z in the upper half plane. */
template <class Int>
std::complex<double> mobius_point(const Mat2<Int>& m, std::complex<double> z)
{
    using detail::to_double;
    const std::complex<double> num = to_double(m.a) * z + to_double(m.b);
    const std::complex<double> den = to_double(m.c) * z + to_double(m.d);
    return num / den;
}

/**
 * @brief Matrix (p b; q d) of determinant one sending infinity to (p:q).
 *
 * d is the least nonnegative inverse of p modulo q (d = 0 when q = 1).
 */
template <class Int>
Mat2<Int> cusp_scaling_matrix(const Cusp<Int>& c)
{
    if (c.q == 0) return identity<Int>();
    Int d;
    if (c.q == 1) {
        d = 0;
    } else {
        auto [g, x, y] = detail::egcd(detail::mod_floor(c.p, c.q), c.q);
        (void)g;
        (void)y;
        d = detail::mod_floor(x, c.q);
    }
    Int b = (c.p * d - 1) / c.q;
    return {c.p, b, c.q, d};
}

/** @brief a, d odd and b, c even. */
template <class Int>
bool is_in_gamma2(const Mat2<Int>& m)
{
    auto odd = [](const Int& x) { return (x % 2) != 0; };
    return odd(m.a) && odd(m.d) && !odd(m.b) && !odd(m.c);
}

/** @brief Reduced word in the free generators gamma1, gamma2 of Gamma(2). */
template <class Int>
struct GammaWord {
    struct Syllable {
        int gen;
        Int exp;
        bool operator==(const Syllable& o) const { return gen == o.gen && exp == o.exp; }
    };
    std::vector<Syllable> syllables;
    Int r1{0}, r2{0};

    bool operator==(const GammaWord& o) const { return syllables == o.syllables; }

    /** @brief Appends gen^exp, merging with the last syllable when the generator repeats. */
    void push(int gen, const Int& exp)
    {
        if (exp == 0) return;
        (gen == 1 ? r1 : r2) += exp;
        if (!syllables.empty() && syllables.back().gen == gen) {
            syllables.back().exp += exp;
            if (syllables.back().exp == 0) syllables.pop_back();
            return;
        }
        syllables.push_back({gen, exp});
    }
};

template <class Int>
GammaWord<Int> make_word(std::initializer_list<std::pair<int, long long>> syl)
{
    GammaWord<Int> w;
    for (auto& [g, e] : syl) w.push(g, Int(e));
    return w;
}

template <class Int>
GammaWord<Int> concat(const GammaWord<Int>& x, const GammaWord<Int>& y)
{
    GammaWord<Int> w = x;
    for (auto& s : y.syllables) w.push(s.gen, s.exp);
    return w;
}

template <class Int>
GammaWord<Int> inverse(const GammaWord<Int>& x)
{
    GammaWord<Int> w;
    for (auto it = x.syllables.rbegin(); it != x.syllables.rend(); ++it) w.push(it->gen, Int(-it->exp));
    return w;
}

template <class Int>
Mat2<Int> power_big(Mat2<Int> m, Int k)
{
    if (k < 0) {
        m = inverse(m);
        k = -k;
    }
    Mat2<Int> r = identity<Int>();
    while (k > 0) {
        if (k % 2 != 0) r = r * m;
        m = m * m;
        k /= 2;
    }
    return r;
}

template <class Int>
Mat2<Int> eval(const GammaWord<Int>& w)
{
    Mat2<Int> r = identity<Int>();
    for (auto& s : w.syllables) r = r * power_big(s.gen == 1 ? gamma1<Int>() : gamma2<Int>(), s.exp);
    return r;
}

template <class Int>
std::pair<Int, Int> exponent_sums(const GammaWord<Int>& w) { return {w.r1, w.r2}; }

template <class Int>
std::string to_string(const GammaWord<Int>& w)
{
    if (w.syllables.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (auto& s : w.syllables) {
        if (!first) os << " ";
        first = false;
        os << "g" << s.gen << "^" << s.exp;
    }
    return os.str();
}

namespace detail {

/**
 * @brief Euclid-type reduction of the first column of m in Gamma(2).
 *
 * Each step left-multiplies by gamma1^-k or gamma2^-k so that |a| < |c| or
 * |c| < |a| afterwards; parity rules out ties, so |a| + |c| strictly drops.
 * The visitor receives (generator, k) in word order.
 */
template <class Int, class Visit>
void reduce_gamma2(Mat2<Int> m, Visit&& visit)
{
    Int a = m.a, b = m.b, c = m.c, d = m.d;
    while (true) {
        if (c == 0) {
            Int t = (b * a) / 2;
            if (t != 0) visit(1, t);
            return;
        }
        if (iabs(a) > iabs(c)) {
            Int k = round_div(a, Int(2 * c));
            a -= 2 * k * c;
            b -= 2 * k * d;
            visit(1, k);
        } else {
            Int k = round_div(c, Int(2 * a));
            c -= 2 * k * a;
            d -= 2 * k * b;
            visit(2, k);
        }
    }
}

} // namespace detail

/** @brief Unique reduced word for m in Gamma(2) (up to sign). */
template <class Int>
GammaWord<Int> decompose_gamma2(const Mat2<Int>& m)
{
    if (m.det() != 1) throw NotInGamma2("determinant is not 1");
    if (!is_in_gamma2(m)) throw NotInGamma2("matrix is not congruent to the identity mod 2");
    GammaWord<Int> w;
    detail::reduce_gamma2(m, [&](int gen, const Int& k) { w.push(gen, k); });
    return w;
}

/** @brief Exponent sums (R1, R2) of m in Gamma(2) without building the word. */
template <class Int>
std::pair<Int, Int> gamma2_class(const Mat2<Int>& m)
{
    if (!is_in_gamma2(m)) throw NotInGamma2("matrix is not congruent to the identity mod 2");
    Int r1 = 0, r2 = 0;
    detail::reduce_gamma2(m, [&](int gen, const Int& k) { (gen == 1 ? r1 : r2) += k; });
    return {r1, r2};
}

template <class Int>
bool is_in_gamma_n(const Mat2<Int>& m, long long n)
{
    if (n < 1) throw InvalidArgument("level must be positive");
    if (!is_in_gamma2(m)) return false;
    auto [r1, r2] = gamma2_class(m);
    return r1 % Int(n) == 0 && r2 % Int(n) == 0;
}

} // namespace klf
