#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include "errors.hpp"

namespace klf {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double euler_gamma = 0.57721566490153286061;

/** @brief Truncation knobs for the special functions. */
struct PrecisionConfig {
    double target_abs_tol = 1e-12;
    int euler_maclaurin_terms = 64;
    int bessel_quadrature_nodes = 200;

    void validate() const
    {
        if (!(target_abs_tol > 0)) throw InvalidArgument("target_abs_tol must be positive");
        if (euler_maclaurin_terms < 8 || bessel_quadrature_nodes < 8) throw InvalidArgument("term counts must be at least 8");
    }
};

namespace detail {

inline constexpr std::array<double, 15> bernoulli_even = {
    1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6, -3617.0 / 510, 43867.0 / 798,
    -174611.0 / 330, 854513.0 / 138, -236364091.0 / 2730, 8553103.0 / 6, -23749461029.0 / 870,
    8615841276005.0 / 14322};

/** @brief Euler-Maclaurin value and s-derivative of zeta for real s != 1. */
inline std::pair<double, double> zeta_em(double s, const PrecisionConfig& cfg)
{
    const int n = cfg.euler_maclaurin_terms;
    double v = 0, dv = 0;
    for (int k = n - 1; k >= 1; --k) {
        const double lk = std::log(static_cast<double>(k));
        const double t = std::pow(static_cast<double>(k), -s);
        v += t;
        dv -= lk * t;
    }
    const double N = n, lN = std::log(N);
    const double pw = std::pow(N, 1 - s);
    v += pw / (s - 1);
    dv += -lN * pw / (s - 1) - pw / ((s - 1) * (s - 1));
    const double half = 0.5 * std::pow(N, -s);
    v += half;
    dv -= lN * half;

    // rising factorial s (s+1) ... (s+2k-2) with its derivative
    double p = s, dp = 1, fact = 2;
    double npow = std::pow(N, -s - 1);
    for (std::size_t k = 1; k <= bernoulli_even.size(); ++k) {
        const double c = bernoulli_even[k - 1] / fact;
        const double term = c * p * npow;
        v += term;
        dv += c * npow * (dp - p * lN);
        if (std::abs(term) < cfg.target_abs_tol * 1e-4 && std::abs(c * npow * dp) < cfg.target_abs_tol * 1e-4) break;
        const double a = s + 2 * k - 1, b = s + 2 * k;
        dp = dp * a * b + p * (a + b);
        p *= a * b;
        fact *= (2 * k + 1) * (2 * k + 2);
        npow /= N * N;
    }
    return {v, dv};
}

inline constexpr std::array<double, 9> lanczos = {
    0.99999999999980993, 676.5203681218851, -1259.1392167224028, 771.32342877765313, -176.61502916214059,
    12.507343278686905, -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

} // namespace detail

/** @brief Gamma function on the complex plane away from the poles. */
inline cplx gamma_fn(cplx s)
{
    if (s.real() < 0.5) return pi / (std::sin(pi * s) * gamma_fn(1.0 - s));
    s -= 1.0;
    cplx x = detail::lanczos[0];
    for (int i = 1; i < 9; ++i) x += detail::lanczos[i] / (s + static_cast<double>(i));
    const cplx t = s + 7.5;
    return std::sqrt(2 * pi) * std::pow(t, s + 0.5) * std::exp(-t) * x;
}

inline double gamma_fn(double s, const PrecisionConfig& = {})
{
    if (!(s > 0)) throw NonPositiveArgument("gamma_fn requires s > 0");
    return gamma_fn(cplx(s, 0)).real();
}

/** @brief Digamma for s > 0 by upward recurrence and the asymptotic series. */
inline double digamma(double s, const PrecisionConfig& = {})
{
    if (!(s > 0)) throw NonPositiveArgument("digamma requires s > 0");
    double acc = 0;
    while (s < 12) {
        acc -= 1 / s;
        s += 1;
    }
    const double r = 1 / (s * s);
    double series = 0, rp = r;
    for (std::size_t k = 1; k <= 8; ++k) {
        series += detail::bernoulli_even[k - 1] / (2.0 * k) * rp;
        rp *= r;
    }
    return acc + std::log(s) - 0.5 / s - series;
}

/** @brief Riemann zeta for real s > -2, s != 1. */
inline double zeta(double s, const PrecisionConfig& cfg = {})
{
    cfg.validate();
    if (s == 1) throw PoleAtOne("zeta has a pole at s = 1");
    if (!(s > -2)) throw InvalidArgument("zeta requires s > -2");
    if (s < 0) {
        const double g = gamma_fn(cplx(1 - s, 0)).real();
        return std::pow(2.0, s) * std::pow(pi, s - 1) * std::sin(pi * s / 2) * g * zeta(1 - s, cfg);
    }
    return detail::zeta_em(s, cfg).first;
}

/** @brief zeta'(s) for real s >= 0, s != 1. */
inline double zeta_prime(double s, const PrecisionConfig& cfg = {})
{
    cfg.validate();
    if (s == 1) throw PoleAtOne("zeta has a pole at s = 1");
    if (s < 0) throw InvalidArgument("zeta_prime requires s >= 0");
    return detail::zeta_em(s, cfg).second;
}

/** @brief zeta'(-1)/zeta(-1) = log(2 pi) - psi(2) - zeta'(2)/zeta(2). */
inline double zeta_prime_ratio_at_minus1(const PrecisionConfig& cfg = {})
{
    const auto [z2, dz2] = detail::zeta_em(2.0, cfg);
    return std::log(2 * pi) - digamma(2.0, cfg) - dz2 / z2;
}

/** @brief K_nu(x) for complex order by trapezoidal quadrature of exp(-x cosh t) cosh(nu t). */
inline cplx bessel_k(cplx nu, double x, const PrecisionConfig& cfg = {})
{
    cfg.validate();
    if (!(x > 0)) throw NonPositiveArgument("bessel_k requires x > 0");
    const double a = std::abs(nu.real());
    const double budget = std::max(40.0, -std::log(cfg.target_abs_tol) + 12);
    // smallest T with x (cosh T - 1) - a T >= budget
    double lo = 0, hi = 1;
    auto excess = [&](double t) { return x * (std::cosh(t) - 1) - a * t; };
    while (excess(hi) < budget) hi *= 2;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) < budget ? lo : hi) = mid;
    }
    const int nodes = cfg.bessel_quadrature_nodes;
    const double h = hi / nodes;
    cplx sum = 0.5;
    for (int k = 1; k <= nodes; ++k) {
        const double t = k * h;
        sum += std::exp(-x * (std::cosh(t) - 1)) * std::cosh(nu * t);
    }
    return sum * h * std::exp(-x);
}

inline double bessel_k(double nu, double x, const PrecisionConfig& cfg = {})
{
    return bessel_k(cplx(nu, 0), x, cfg).real();
}

} // namespace klf
