#pragma once

#include <charconv>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_complex.hpp>

#include "fermat.hpp"
#include "special.hpp"

namespace klf {

/** @brief Quad-precision complex scalar for series identities checked to absolute 1e-12. */
using cplx_hp = boost::multiprecision::cpp_complex_quad;

namespace detail {

inline double magnitude(const cplx& c) { return std::abs(c); }
inline double magnitude(const cplx_hp& c) { return static_cast<double>(abs(c)); }

inline cplx to_cplx(const cplx& c) { return c; }
inline cplx to_cplx(const cplx_hp& c) { return {static_cast<double>(c.real()), static_cast<double>(c.imag())}; }

/** @brief exp(2 pi i k / n) in the scalar type C. */
template <class C>
C root_of_unity(int n, long k)
{
    if constexpr (std::is_same_v<C, cplx>) {
        return std::polar(1.0, 2 * pi * static_cast<double>(k) / n);
    } else {
        using R = boost::multiprecision::cpp_bin_float_quad;
        const R t = 2 * boost::math::constants::pi<R>() * R(k) / R(n);
        return C(cos(t), sin(t));
    }
}

/** @brief Principal n-th root of c times exp(2 pi i branch / n). */
template <class C>
C principal_root(const C& c, int n, int branch)
{
    using std::exp;
    using std::log;
    return exp(log(c) / static_cast<double>(n)) * root_of_unity<C>(n, branch);
}

} // namespace detail

/**
 * @brief Truncated expansion sum_k c_k q^{k/D} with q = exp(2 pi i z).
 *
 * Coefficients are stored densely for numerators lo..hi; everything above
 * hi / D is unknown.
 */
template <class C>
struct BasicQExpansion {
    int D = 1;
    long lo = 0;
    long hi = 0;
    std::vector<C> coeffs;

    long length() const { return hi - lo + 1; }
    double order() const { return static_cast<double>(hi) / D; }

    /** @brief Coefficient of q^{num/D}; zero below lo, throws above hi. */
    C at(long num) const
    {
        if (num > hi) throw OrderTooSmall("coefficient beyond truncation order");
        return num < lo ? C(0) : coeffs[static_cast<std::size_t>(num - lo)];
    }

    static BasicQExpansion constant(const C& c, int D, long hi)
    {
        BasicQExpansion f;
        f.D = D;
        f.lo = 0;
        f.hi = hi;
        f.coeffs.assign(static_cast<std::size_t>(hi + 1), C(0));
        f.coeffs[0] = c;
        return f;
    }
};

using QExpansion = BasicQExpansion<cplx>;
using QExpansionHP = BasicQExpansion<cplx_hp>;

/** @brief Rounds a quad-precision series to double. */
inline QExpansion to_double(const QExpansionHP& f)
{
    QExpansion g;
    g.D = f.D;
    g.lo = f.lo;
    g.hi = f.hi;
    g.coeffs.reserve(f.coeffs.size());
    for (const auto& c : f.coeffs) g.coeffs.push_back(detail::to_cplx(c));
    return g;
}

/** @brief Largest coefficient modulus. */
template <class C>
double max_abs(const BasicQExpansion<C>& f)
{
    double m = 0;
    for (const auto& c : f.coeffs) m = std::max(m, detail::magnitude(c));
    return m;
}

/** @brief Same series over the finer denominator D2 (a multiple of D). */
template <class C>
BasicQExpansion<C> rescale(const BasicQExpansion<C>& f, int D2)
{
    if (D2 % f.D != 0) throw InvalidArgument("denominator must be a multiple");
    const int m = D2 / f.D;
    if (m == 1) return f;
    BasicQExpansion<C> g;
    g.D = D2;
    g.lo = f.lo * m;
    g.hi = f.hi * m + (m - 1);
    g.coeffs.assign(static_cast<std::size_t>(g.hi - g.lo + 1), C(0));
    for (long k = 0; k < f.length(); ++k) g.coeffs[static_cast<std::size_t>(k * m)] = f.coeffs[static_cast<std::size_t>(k)];
    return g;
}

/** @brief Drops leading coefficients with modulus <= eps. */
template <class C>
BasicQExpansion<C> trim(BasicQExpansion<C> f, double eps = 0)
{
    std::size_t k = 0;
    while (k < f.coeffs.size() && detail::magnitude(f.coeffs[k]) <= eps) ++k;
    if (k == f.coeffs.size()) {
        f.lo = f.hi;
        f.coeffs.assign(1, C(0));
        return f;
    }
    f.coeffs.erase(f.coeffs.begin(), f.coeffs.begin() + static_cast<long>(k));
    f.lo += static_cast<long>(k);
    return f;
}

/** @brief Truncates to exponents <= hi_num / D. */
template <class C>
BasicQExpansion<C> truncate(BasicQExpansion<C> f, long hi_num)
{
    if (hi_num > f.hi) throw OrderTooSmall("cannot extend a truncated series");
    if (hi_num < f.lo) throw OrderTooSmall("truncation below the leading term");
    f.coeffs.resize(static_cast<std::size_t>(hi_num - f.lo + 1));
    f.hi = hi_num;
    return f;
}

namespace detail {
template <class C>
void common_denominator(BasicQExpansion<C>& f, BasicQExpansion<C>& g)
{
    const int D = std::lcm(f.D, g.D);
    f = rescale(f, D);
    g = rescale(g, D);
}

/** @brief (1 + sum_{k>=1} a_k u^k)^alpha by the Miller recurrence. */
template <class C>
std::vector<C> unit_power(const std::vector<C>& a, const C& alpha)
{
    const std::size_t n = a.size();
    std::vector<C> h(n, C(0));
    if (n == 0) return h;
    h[0] = C(1);
    const C a1 = alpha + C(1);
    for (std::size_t k = 1; k < n; ++k) {
        C acc(0);
        for (std::size_t i = 1; i <= k; ++i) acc += (a1 * static_cast<double>(i) - C(static_cast<double>(k))) * a[i] * h[k - i];
        h[k] = acc / static_cast<double>(k);
    }
    return h;
}
} // namespace detail

template <class C>
BasicQExpansion<C> operator*(const C& c, BasicQExpansion<C> f)
{
    for (auto& x : f.coeffs) x *= c;
    return f;
}

template <class C>
BasicQExpansion<C> operator+(BasicQExpansion<C> f, BasicQExpansion<C> g)
{
    detail::common_denominator(f, g);
    BasicQExpansion<C> r;
    r.D = f.D;
    r.lo = std::min(f.lo, g.lo);
    r.hi = std::min(f.hi, g.hi);
    if (r.hi < r.lo) throw OrderTooSmall("no overlapping known terms");
    r.coeffs.assign(static_cast<std::size_t>(r.hi - r.lo + 1), C(0));
    for (long k = r.lo; k <= r.hi; ++k) {
        C v(0);
        if (k >= f.lo) v += f.coeffs[static_cast<std::size_t>(k - f.lo)];
        if (k >= g.lo) v += g.coeffs[static_cast<std::size_t>(k - g.lo)];
        r.coeffs[static_cast<std::size_t>(k - r.lo)] = v;
    }
    return r;
}

template <class C>
BasicQExpansion<C> operator-(const BasicQExpansion<C>& f, const BasicQExpansion<C>& g) { return f + C(-1) * g; }

template <class C>
BasicQExpansion<C> operator*(BasicQExpansion<C> f, BasicQExpansion<C> g)
{
    detail::common_denominator(f, g);
    BasicQExpansion<C> r;
    r.D = f.D;
    r.lo = f.lo + g.lo;
    const long len = std::min(f.length(), g.length());
    r.hi = r.lo + len - 1;
    r.coeffs.assign(static_cast<std::size_t>(len), C(0));
    for (long i = 0; i < len; ++i) {
        const C fi = f.coeffs[static_cast<std::size_t>(i)];
        if (fi == C(0)) continue;
        for (long j = 0; i + j < len; ++j) r.coeffs[static_cast<std::size_t>(i + j)] += fi * g.coeffs[static_cast<std::size_t>(j)];
    }
    return r;
}

/** @brief lead q^{lo_num/D} (f / (c q^{f.lo/D}))^alpha where c is the leading coefficient of f. */
template <class C>
BasicQExpansion<C> unit_power(const BasicQExpansion<C>& f0, const C& alpha, const C& lead, long lo_num)
{
    BasicQExpansion<C> f = trim(f0);
    const C c = f.coeffs[0];
    if (c == C(0)) throw ZeroSeries("series vanishes to its truncation order");
    std::vector<C> a(f.coeffs.size());
    for (std::size_t k = 0; k < a.size(); ++k) a[k] = f.coeffs[k] / c;
    auto h = detail::unit_power(a, alpha);
    BasicQExpansion<C> r;
    r.D = f.D;
    r.lo = lo_num;
    r.hi = lo_num + f.length() - 1;
    r.coeffs = std::move(h);
    for (auto& x : r.coeffs) x *= lead;
    return r;
}

template <class C>
BasicQExpansion<C> inverse(const BasicQExpansion<C>& f0)
{
    BasicQExpansion<C> f = trim(f0);
    if (f.coeffs[0] == C(0)) throw ZeroSeries("cannot invert a zero series");
    return unit_power(f, C(-1), C(1) / f.coeffs[0], -f.lo);
}

template <class C>
BasicQExpansion<C> pow(const BasicQExpansion<C>& f, int k)
{
    if (k < 0) return pow(inverse(f), -k);
    auto r = BasicQExpansion<C>::constant(C(1), f.D, f.hi - f.lo);
    BasicQExpansion<C> b = f;
    while (k) {
        if (k & 1) r = r * b;
        k >>= 1;
        if (k) b = b * b;
    }
    return r;
}

/**
 * @brief n-th root with the principal root of the leading coefficient times exp(2 pi i branch / n).
 *
 * The denominator is multiplied by n when the leading exponent is not
 * divisible by n, unless allow_rescale is false.
 */
template <class C>
BasicQExpansion<C> nth_root(const BasicQExpansion<C>& f0, int n, int branch = 0, bool allow_rescale = true)
{
    if (n < 1) throw InvalidArgument("root order must be positive");
    BasicQExpansion<C> f = trim(f0);
    if (f.coeffs[0] == C(0)) throw ZeroSeries("cannot take the root of a zero series");
    if (f.lo % n != 0) {
        if (!allow_rescale) throw NonDivisibleLeadingExponent("leading exponent not divisible by n");
        f = rescale(f, f.D * n);
    }
    const C lead = detail::principal_root(f.coeffs[0], n, branch);
    return unit_power(f, C(1) / C(n), lead, f.lo / n);
}

/** @brief Pointwise value with a geometric tail bound. */
struct SeriesValue {
    cplx value;
    double tail_bound;
};

/**
 * @brief Evaluates the series at z.
 *
 * The tail bound fits |c_k| <= C rho^{k - lo} to the upper half of the
 * retained coefficients and sums the geometric remainder.
 */
inline SeriesValue evaluate(const QExpansion& f, cplx z, double y_min = 0.05)
{
    if (!(z.imag() >= y_min)) throw ConvergenceRegion("Im z below the evaluation threshold");
    const double r = std::exp(-2 * pi * z.imag() / f.D);
    const cplx w = std::exp(cplx(0, 2 * pi) * z / static_cast<double>(f.D));
    cplx p = std::exp(cplx(0, 2 * pi) * z * (static_cast<double>(f.lo) / f.D));
    cplx v = 0;
    for (const auto& c : f.coeffs) {
        v += c * p;
        p *= w;
    }
    const long len = f.length();
    double rho = 1;
    const double a0 = std::abs(f.coeffs[0]);
    if (a0 > 0)
        for (long k = std::max(1L, len / 2); k < len; ++k) {
            const double ak = std::abs(f.coeffs[static_cast<std::size_t>(k)]);
            if (ak > 0) rho = std::max(rho, std::pow(ak / a0, 1.0 / k));
        }
    double C = 0;
    for (long k = len / 2; k < len; ++k) C = std::max(C, std::abs(f.coeffs[static_cast<std::size_t>(k)]) / std::pow(rho, k));
    const double ratio = rho * r;
    if (ratio >= 0.9) throw ConvergenceRegion("coefficient growth too fast for a tail bound at this Im z");
    const double tail = 2 * C * std::pow(rho, len) * std::exp(-2 * pi * z.imag() * (static_cast<double>(f.hi + 1) / f.D)) / (1 - ratio);
    return {v, tail};
}

/** @brief Text dump: one line "num/D<TAB>re<TAB>im" per coefficient, shortest round-trip decimals. */
inline std::string dump(const QExpansion& f)
{
    std::string out;
    char buf[64];
    auto num = [&](double x) {
        auto res = std::to_chars(buf, buf + sizeof buf, x);
        out.append(buf, res.ptr);
    };
    for (long k = f.lo; k <= f.hi; ++k) {
        const cplx c = f.coeffs[static_cast<std::size_t>(k - f.lo)];
        out += std::to_string(k) + "/" + std::to_string(f.D) + "\t";
        num(c.real() == 0 ? 0.0 : c.real());
        out += "\t";
        num(c.imag() == 0 ? 0.0 : c.imag());
        out += "\n";
    }
    return out;
}

/** @brief Modular functions and forms addressed by the library. */
struct FormLabel {
    enum class Type { Theta2, Lambda, OneMinusLambda, X, Y, G0, G1, GInf, F };
    Type type = Type::Theta2;
    int n = 1;
    Kind kind = Kind::A;
    int j = 0;

    static FormLabel theta2() { return {Type::Theta2}; }
    static FormLabel lambda() { return {Type::Lambda}; }
    static FormLabel one_minus_lambda() { return {Type::OneMinusLambda}; }
    static FormLabel x(int n) { return checked({Type::X, n}); }
    static FormLabel y(int n) { return checked({Type::Y, n}); }
    static FormLabel g(Base b) { return {b == Base::Zero ? Type::G0 : (b == Base::One ? Type::G1 : Type::GInf)}; }
    static FormLabel f(Kind k, int j, int n) { return checked({Type::F, n, k, j}); }
    static FormLabel f(const FermatCusp& fc) { return f(fc.kind, fc.index, fc.n); }

    static FormLabel checked(FormLabel l)
    {
        if (l.n < 1) throw InvalidArgument("form level must be positive");
        if (l.type == Type::F && (l.j < 0 || l.j >= l.n)) throw InvalidArgument("root index out of range");
        return l;
    }

    int weight() const
    {
        switch (type) {
        case Type::Lambda:
        case Type::OneMinusLambda:
        case Type::X:
        case Type::Y: return 0;
        default: return 2;
        }
    }

    /** @brief Denominator of the exponent lattice at infinity. */
    int denominator() const { return (type == Type::X || type == Type::Y || type == Type::F) ? 2 * n : 2; }

    std::string name() const
    {
        switch (type) {
        case Type::Theta2: return "theta2";
        case Type::Lambda: return "lambda";
        case Type::OneMinusLambda: return "1-lambda";
        case Type::X: return "x:" + std::to_string(n);
        case Type::Y: return "y:" + std::to_string(n);
        case Type::G0: return "G0";
        case Type::G1: return "G1";
        case Type::GInf: return "Ginf";
        default: return std::string("f:") + to_string(kind) + ":" + std::to_string(j) + ":" + std::to_string(n);
        }
    }

    /** @brief Inverse of name(). */
    static FormLabel parse(const std::string& s)
    {
        if (s == "theta2") return theta2();
        if (s == "lambda") return lambda();
        if (s == "1-lambda") return one_minus_lambda();
        if (s == "G0") return {Type::G0};
        if (s == "G1") return {Type::G1};
        if (s == "Ginf") return {Type::GInf};
        auto num = [&](const std::string& t) {
            std::size_t pos = 0;
            int v = std::stoi(t, &pos);
            if (pos != t.size()) throw InvalidArgument("bad label " + s);
            return v;
        };
        try {
            if (s.rfind("x:", 0) == 0) return x(num(s.substr(2)));
            if (s.rfind("y:", 0) == 0) return y(num(s.substr(2)));
            if (s.rfind("f:", 0) == 0 && s.size() > 4 && s[3] == ':') {
                const char k = s[2];
                if (k != 'A' && k != 'B' && k != 'C') throw InvalidArgument("bad label " + s);
                const auto rest = s.substr(4);
                const auto colon = rest.find(':');
                if (colon == std::string::npos) throw InvalidArgument("bad label " + s);
                return f(k == 'A' ? Kind::A : (k == 'B' ? Kind::B : Kind::C), num(rest.substr(0, colon)), num(rest.substr(colon + 1)));
            }
        } catch (const std::logic_error&) {
            throw InvalidArgument("bad label " + s);
        }
        throw InvalidArgument("bad label " + s);
    }
};

namespace detail {

template <class C>
void mul_binomial(std::vector<C>& p, long k, double sign, int times)
{
    const std::size_t n = p.size(), kk = static_cast<std::size_t>(k);
    std::vector<C> old;
    for (int t = 0; t < times; ++t) {
        old = p;
        for (std::size_t i = kk; i < n; ++i) p[i] = old[i] + old[i - kk] * sign;
    }
}

template <class C>
void div_binomial(std::vector<C>& p, long k, double sign, int times)
{
    const std::size_t n = p.size(), kk = static_cast<std::size_t>(k);
    for (int t = 0; t < times; ++t)
        for (std::size_t i = kk; i < n; ++i) p[i] -= p[i - kk] * sign;
}

/** @brief theta^2 = prod (1 - q^n)^4 (1 + q^{n-1/2})^8 through u^m, u = q^{1/2}. */
template <class C>
BasicQExpansion<C> theta2_series(long m)
{
    auto f = BasicQExpansion<C>::constant(C(1), 2, m);
    for (long n = 1; 2 * n - 1 <= m; ++n) {
        mul_binomial(f.coeffs, 2 * n, -1, 4);
        mul_binomial(f.coeffs, 2 * n - 1, 1, 8);
    }
    return f;
}

/** @brief lambda = -(1/16) q^{-1/2} prod ((1 - q^{n-1/2})/(1 + q^n))^8, known through u^{m-1}. */
template <class C>
BasicQExpansion<C> lambda_series(long m)
{
    auto f = BasicQExpansion<C>::constant(C(1), 2, m);
    for (long n = 1; 2 * n - 1 <= m; ++n) {
        mul_binomial(f.coeffs, 2 * n - 1, -1, 8);
        div_binomial(f.coeffs, 2 * n, 1, 8);
    }
    f = C(-1.0 / 16) * f;
    f.lo -= 1;
    f.hi -= 1;
    return f;
}

/** @brief 1 - lambda = (1/16) q^{-1/2} prod ((1 + q^{n-1/2})/(1 + q^n))^8. */
template <class C>
BasicQExpansion<C> one_minus_lambda_series(long m)
{
    auto f = BasicQExpansion<C>::constant(C(1), 2, m);
    for (long n = 1; 2 * n - 1 <= m; ++n) {
        mul_binomial(f.coeffs, 2 * n - 1, 1, 8);
        div_binomial(f.coeffs, 2 * n, 1, 8);
    }
    f = C(1.0 / 16) * f;
    f.lo -= 1;
    f.hi -= 1;
    return f;
}

template <class C>
BasicQExpansion<C> build(const FormLabel& l, long m)
{
    using T = FormLabel::Type;
    switch (l.type) {
    case T::Theta2: return theta2_series<C>(m);
    case T::Lambda: return lambda_series<C>(m);
    case T::OneMinusLambda: return one_minus_lambda_series<C>(m);
    case T::X: return nth_root(lambda_series<C>(m), l.n);
    case T::Y: return nth_root(one_minus_lambda_series<C>(m), l.n);
    case T::G0: return lambda_series<C>(m) * inverse(one_minus_lambda_series<C>(m)) * theta2_series<C>(m);
    case T::G1: return theta2_series<C>(m);
    case T::GInf: return inverse(one_minus_lambda_series<C>(m)) * theta2_series<C>(m);
    default: break;
    }
    const int n = l.n;
    const auto x = nth_root(lambda_series<C>(m), n), y = nth_root(one_minus_lambda_series<C>(m), n);
    const auto th = theta2_series<C>(m);
    const int D = 2 * n;
    const long hi = x.hi;
    const C zj = root_of_unity<C>(n, l.j);
    const auto one = BasicQExpansion<C>::constant(C(1), D, hi);
    BasicQExpansion<C> num;
    switch (l.kind) {
    case Kind::A: num = y + C(-zj) * one; break;
    case Kind::B: num = x + C(-zj) * one; break;
    default: num = x + C(-(zj * root_of_unity<C>(2 * n, 1))) * y; break;
    }
    return pow(trim(num, 1e-15), n) * pow(y, -n) * th;
}

} // namespace detail

/**
 * @brief q-expansion at infinity known through q^order.
 *
 * Builds with a working margin that grows until the requested order is
 * covered, then truncates.
 */
template <class C = cplx>
BasicQExpansion<C> expansion(const FormLabel& label, double order)
{
    if (!(order > 0)) throw OrderTooSmall("order must be positive");
    const int D = label.denominator();
    const long want = static_cast<long>(std::floor(order * D + 1e-9));
    for (long margin = 4;; margin *= 2) {
        const long m = static_cast<long>(std::ceil(2 * order)) + margin + 2L * label.n;
        auto f = detail::build<C>(label, m);
        if (f.D != D) f = rescale(f, D);
        if (f.hi >= want) {
            if (want < trim(f).lo) throw OrderTooSmall("order below the leading term");
            return truncate(f, want);
        }
        if (margin > 4096) throw OrderTooSmall("could not reach the requested order");
    }
}

/** @brief log theta^2, log lambda and log(1 - lambda) from the product formulas. */
struct Level2Logs {
    cplx log_theta2;
    cplx log_lambda;
    cplx log_one_minus_lambda;
    /** log(lambda/(1 - lambda)) - i pi, small near infinity */
    cplx log_ratio_shift;
};

inline Level2Logs level2_logs(cplx z)
{
    if (!(z.imag() > 0)) throw InvalidArgument("z must lie in the upper half plane");
    const cplx t = std::exp(cplx(0, pi) * z);
    const double at = std::abs(t);
    cplx s_theta = 0, s_lam = 0, s_oml = 0, s_ratio = 0;
    cplx todd = t, teven = t * t;
    const cplx t2 = t * t;
    for (long n = 1; n < 10000000; ++n) {
        const cplx lo_m = std::log(1.0 - todd), lo_p = std::log(1.0 + todd);
        const cplx le_m = std::log(1.0 - teven), le_p = std::log(1.0 + teven);
        s_theta += 4.0 * le_m + 8.0 * lo_p;
        s_lam += 8.0 * (lo_m - le_p);
        s_oml += 8.0 * (lo_p - le_p);
        s_ratio += 8.0 * (lo_m - lo_p);
        if (std::pow(at, 2 * n - 1) < 1e-18) break;
        todd *= t2;
        teven *= t2;
    }
    const double l16 = std::log(16.0);
    const cplx ipiz = cplx(0, pi) * z;
    return {s_theta, -l16 + cplx(0, pi) - ipiz + s_lam, -l16 - ipiz + s_oml, s_ratio};
}

namespace detail {
inline cplx expm1(cplx w)
{
    if (std::abs(w) > 0.5) return std::exp(w) - 1.0;
    return 2.0 * std::sinh(w / 2.0) * std::exp(w / 2.0);
}
} // namespace detail

/** @brief Value at z from the product formulas, stable for small Im z. */
inline cplx form_value(const FormLabel& l, cplx z)
{
    using T = FormLabel::Type;
    const Level2Logs L = level2_logs(z);
    const cplx th = std::exp(L.log_theta2);
    switch (l.type) {
    case T::Theta2:
    case T::G1: return th;
    case T::Lambda: return std::exp(L.log_lambda);
    case T::OneMinusLambda: return std::exp(L.log_one_minus_lambda);
    case T::X: return std::exp(L.log_lambda / static_cast<double>(l.n));
    case T::Y: return std::exp(L.log_one_minus_lambda / static_cast<double>(l.n));
    case T::G0: return std::exp(L.log_lambda - L.log_one_minus_lambda + L.log_theta2);
    case T::GInf: return std::exp(L.log_theta2 - L.log_one_minus_lambda);
    default: break;
    }
    const double n = l.n;
    const cplx zj = detail::root_of_unity<cplx>(l.n, l.j);
    const cplx inv_y = std::exp(-L.log_one_minus_lambda / n);
    const cplx x = std::exp(L.log_lambda / n);
    cplx base;
    switch (l.kind) {
    case Kind::A: base = 1.0 - zj * inv_y; break;
    case Kind::B: base = (x - zj) * inv_y; break;
    default: {
        // x/y - eps zeta^j with x/y = eps exp(shift / n)
        const cplx eps = std::polar(1.0, pi / n);
        const cplx w = L.log_ratio_shift / n;
        base = l.j == 0 ? eps * detail::expm1(w) : eps * (std::exp(w) - zj);
        break;
    }
    }
    return std::pow(base, l.n) * th;
}

/** @brief How slash2_value obtains f(gamma z). */
enum class SlashPath { Direct, Table };

/**
 * @brief (f|gamma)(z): (cz+d)^{-k} f(gamma z) for weight k.
 *
 * The table path uses theta^2, lambda in M(Gamma(2)) and
 * x|gamma = zeta^{-(R1+R2)} x, y|gamma = zeta^{-R1} y where (R1, R2) are
 * the exponent sums of gamma.
 */
template <class Int>
cplx slash2_value(const FormLabel& l, const Mat2<Int>& g, cplx z, SlashPath path = SlashPath::Direct)
{
    if (path == SlashPath::Direct) {
        const cplx w = mobius_point(g, z);
        cplx v = form_value(l, w);
        if (l.weight() == 2) {
            const cplx j = detail::to_double(g.c) * z + detail::to_double(g.d);
            v /= j * j;
        }
        return v;
    }
    using T = FormLabel::Type;
    const auto [r1, r2] = gamma2_class(g);
    if (l.type != T::X && l.type != T::Y && l.type != T::F) return form_value(l, z);
    const Int N(l.n);
    const long ex = static_cast<long>(detail::mod_floor(Int(r1 + r2), N));
    const long ey = static_cast<long>(detail::mod_floor(Int(r1), N));
    const cplx sx = detail::root_of_unity<cplx>(l.n, -ex), sy = detail::root_of_unity<cplx>(l.n, -ey);
    const Level2Logs L = level2_logs(z);
    const double n = l.n;
    const cplx x = sx * std::exp(L.log_lambda / n), y = sy * std::exp(L.log_one_minus_lambda / n);
    if (l.type == T::X) return x;
    if (l.type == T::Y) return y;
    const cplx zj = detail::root_of_unity<cplx>(l.n, l.j);
    cplx base;
    switch (l.kind) {
    case Kind::A: base = (y - zj) / y; break;
    case Kind::B: base = (x - zj) / y; break;
    default: {
        const cplx eps = std::polar(1.0, pi / n);
        // x/y - eps zeta^j = eps (sx/sy) exp(shift/n) - eps zeta^j
        const cplx w = L.log_ratio_shift / n;
        const cplx s = sx / sy;
        base = (std::abs(s - zj) < 1e-12) ? eps * zj * detail::expm1(w) : eps * (s * std::exp(w) - zj);
        break;
    }
    }
    return std::pow(base, l.n) * std::exp(L.log_theta2);
}

/** @brief |value|^2 (Im z)^k. */
inline double petersson_norm_sq(cplx value, cplx z, int k)
{
    return std::norm(value) * std::pow(z.imag(), k);
}

/** @brief Product of f_{kind,j}|gamma over the coset representatives, in their fixed order. */
inline cplx coset_product_value(Kind kind, int j, int n, cplx z, SlashPath path = SlashPath::Table)
{
    const FormLabel l = FormLabel::f(kind, j, n);
    cplx p = 1;
    for (const auto& g : coset_reps<BigInt>(n)) p *= slash2_value(l, g, z, path);
    return p;
}

/** @brief Sum of log ||f|gamma||^2 over the coset representatives. */
inline double coset_log_norm_sum(Kind kind, int j, int n, cplx z, SlashPath path = SlashPath::Table)
{
    const FormLabel l = FormLabel::f(kind, j, n);
    double s = 0;
    for (const auto& g : coset_reps<BigInt>(n)) s += std::log(petersson_norm_sq(slash2_value(l, g, z, path), z, 2));
    return s;
}

} // namespace klf
