#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "cusps.hpp"
#include "group.hpp"
#include "parallel.hpp"
#include "scattering.hpp"
#include "special.hpp"

namespace klf {

/** @brief Truncation of lattice sums, Fourier modes and q-series. */
struct TruncationSpec {
    long c_max = 500;
    int m_max = 10;
    int order = 20;
    /** @brief Upper bound accepted for tail estimates at Re s > 1 (0 disables the test). */
    double tol = 0;

    void validate() const
    {
        if (c_max < 1 || m_max < 1 || order < 1) throw InvalidArgument("truncation parameters must be at least 1");
        if (tol < 0) throw InvalidArgument("tolerance must be nonnegative");
    }
};

/** @brief Partial sum of a Fourier coefficient phi_{jk,m}(s). */
struct PhiTerm {
    GroupId group;
    int cusp_j = 0;
    int cusp_k = 0;
    long m = 0;
    cplx s;
    cplx partial_sum;
    long c_reached = 0;
    double tail_estimate = 0;
    bool conditional = false;
};

/** @brief Lattice sum with its integral tail estimate. */
struct DirectValue {
    cplx value;
    double tail_estimate = 0;
    long long pairs = 0;
};

/** @brief Coefficients phi_{jk,m}(s) for |m| <= m_max (m = 0 omitted at s = 1). */
struct PhiSeries {
    GroupId group;
    int j = 0;
    int k = 0;
    cplx s;
    long width_j = 1;
    long width_k = 1;
    int m_max = 0;
    std::vector<PhiTerm> terms;

    /** @brief Term for mode m. */
    const PhiTerm& at(long m) const
    {
        for (const auto& t : terms)
            if (t.m == m) return t;
        throw InvalidArgument("mode not computed");
    }
};

namespace detail {

inline void check_cusp(const GroupId& g, int j)
{
    const long long count = g.kind == GroupId::Kind::Gamma1 ? 1 : (g.kind == GroupId::Kind::Gamma2 ? 3 : 3LL * g.n);
    if (j < 0 || j >= count) throw InvalidArgument("cusp position out of range for " + g.name());
}

/** @brief y^s / |w|^{2s} for real or complex s. */
inline cplx lattice_term(double y, double w2, cplx s)
{
    if (s.imag() == 0) return std::pow(y / w2, s.real());
    return std::exp(s * std::log(y / w2));
}

/**
 * @brief Core lattice sum: for each chart matrix M, values of b^s E_j(M z, s) for all cusps j.
 *
 * A coprime pair (c, d), c > 0 or (c, d) = (0, 1), contributes Im(z)^s / |cz + d|^{2s}
 * to the class of the cusp M(-d : c). Pairs with |cz + d| > c_max Im z are dropped.
 */
inline std::vector<std::vector<cplx>> direct_engine(const GroupId& g, const std::vector<Mat2i>& charts, cplx z,
                                                    cplx s, long c_max, long long* pair_count = nullptr)
{
    const double x = z.real(), y = z.imag();
    if (!(y > 0)) throw InvalidArgument("z must lie in the upper half plane");
    const std::size_t nc = charts.size();
    const int ncusp = static_cast<int>(group_cusps(g).size());
    const double R = static_cast<double>(c_max) * y;
    std::vector<std::vector<std::vector<cplx>>> per_c(static_cast<std::size_t>(c_max) + 1);
    std::vector<long long> counts(static_cast<std::size_t>(c_max) + 1, 0);
    parallel_for(static_cast<std::size_t>(c_max) + 1, [&](std::size_t ci) {
        const i64 c = static_cast<i64>(ci);
        std::vector<std::vector<cplx>> acc(nc, std::vector<cplx>(ncusp));
        auto add = [&](i64 cc, i64 d, cplx term) {
            for (std::size_t h = 0; h < nc; ++h) {
                const Mat2i& M = charts[h];
                const Cuspi cu = make_cusp<i64>(-M.a * d + M.b * cc, -M.c * d + M.d * cc);
                acc[h][cusp_class(g, cu)] += term;
            }
        };
        if (c == 0) {
            add(0, 1, lattice_term(y, 1.0, s));
            counts[ci] = 1;
        } else {
            const double cy = static_cast<double>(c) * y;
            const double w = std::sqrt(std::max(0.0, R * R - cy * cy));
            const double center = -static_cast<double>(c) * x;
            const i64 lo = static_cast<i64>(std::ceil(center - w)), hi = static_cast<i64>(std::floor(center + w));
            for (i64 d = lo; d <= hi; ++d) {
                if (gcd<i64>(c, d) != 1) continue;
                const double re = static_cast<double>(c) * x + static_cast<double>(d);
                const double w2 = re * re + cy * cy;
                if (w2 > R * R) continue;
                add(c, d, lattice_term(y, w2, s));
                ++counts[ci];
            }
        }
        per_c[ci] = std::move(acc);
    });
    std::vector<std::vector<cplx>> out(nc, std::vector<cplx>(ncusp));
    long long total = 0;
    for (std::size_t ci = 0; ci < per_c.size(); ++ci) {
        for (std::size_t h = 0; h < nc; ++h)
            for (int j = 0; j < ncusp; ++j) out[h][j] += per_c[ci][h][j];
        total += counts[ci];
    }
    if (pair_count) *pair_count = total;
    return out;
}

/** @brief Integral estimate b^{-sigma} (3/pi) y^{sigma-1} R^{2-2 sigma} / (sigma - 1) for the dropped pairs. */
inline double direct_tail(double b, double y, double sigma, long c_max)
{
    const double R = static_cast<double>(c_max) * y;
    return std::pow(b, -sigma) * (3 / pi) * std::pow(y, sigma - 1) * std::pow(R, 2 - 2 * sigma) / (sigma - 1);
}

} // namespace detail

/** @brief E_j(M z, s) for all cusps j and each chart matrix M. */
inline std::vector<std::vector<DirectValue>> eisenstein_direct_charts(const GroupId& g, const std::vector<Mat2i>& charts,
                                                                      cplx z, cplx s, const TruncationSpec& t)
{
    t.validate();
    if (!(s.real() > 1)) throw DivergentRegion("lattice sums need Re s > 1");
    long long pairs = 0;
    const auto raw = detail::direct_engine(g, charts, z, s, t.c_max, &pairs);
    const double b = static_cast<double>(g.width());
    const cplx scale = std::exp(-s * std::log(b));
    const double tail = detail::direct_tail(b, z.imag(), s.real(), t.c_max);
    if (t.tol > 0 && tail > t.tol) throw TruncationUnsound("lattice tail estimate exceeds tolerance");
    std::vector<std::vector<DirectValue>> out(raw.size());
    for (std::size_t h = 0; h < raw.size(); ++h)
        for (const cplx& v : raw[h]) out[h].push_back({v * scale, tail, pairs});
    return out;
}

/** @brief E_j(chart z, s) for all cusps j of g. */
inline std::vector<DirectValue> eisenstein_direct_all(const GroupId& g, cplx z, cplx s, const TruncationSpec& t,
                                                      const Mat2i& chart = identity<i64>())
{
    return eisenstein_direct_charts(g, {chart}, z, s, t).front();
}

/** @brief E_j(chart z, s) by summation over coprime pairs. */
inline DirectValue eisenstein_direct(const GroupId& g, int j, cplx z, cplx s, const TruncationSpec& t,
                                     const Mat2i& chart = identity<i64>())
{
    detail::check_cusp(g, j);
    return eisenstein_direct_all(g, z, s, t, chart)[j];
}

namespace detail {

/** @brief Membership test for (* *; c d) in gamma_j^{-1} G gamma_k, up to right translation by T^{b_k}. */
class DoubleCosetFilter {
public:
    DoubleCosetFilter(const GroupId& g, int j, int k) : g_(g)
    {
        const auto cusps = group_cusps(g);
        gj_ = cusps[j].scaling;
        gk_inv_ = inverse(cusps[k].scaling);
        if (g.kind == GroupId::Kind::GammaN) {
            const int n = g.n;
            const auto [r1, r2] = gamma2_class(gj_ * gamma1<i64>() * inverse(gj_));
            reachable_.assign(static_cast<std::size_t>(n) * n, false);
            for (int t = 0; t < n; ++t) {
                const i64 a = mod_floor<i64>(t * r1, n), b = mod_floor<i64>(t * r2, n);
                reachable_[static_cast<std::size_t>(a * n + b)] = true;
            }
        }
    }

    /** @brief True when some matrix with bottom row (c, d) lies in gamma_j^{-1} G gamma_k. */
    bool operator()(i64 c, i64 d) const
    {
        if (g_.kind == GroupId::Kind::Gamma1) return true;
        i64 a0 = 0;
        if (c > 1) {
            const auto [gg, u, v] = egcd<i64>(mod_floor<i64>(d, c), c);
            (void)gg;
            (void)v;
            a0 = mod_floor<i64>(u, c);
        }
        const Mat2i m0{a0, (a0 * d - 1) / c, c, d};
        for (i64 n0 = 0; n0 < 2; ++n0) {
            const Mat2i h = gj_ * translation<i64>(n0) * m0 * gk_inv_;
            if (!is_in_gamma2(h)) continue;
            if (g_.kind == GroupId::Kind::Gamma2) return true;
            const int n = g_.n;
            const auto [r1, r2] = gamma2_class(h);
            const i64 a = mod_floor<i64>(-r1, n), b = mod_floor<i64>(-r2, n);
            return reachable_[static_cast<std::size_t>(a * n + b)];
        }
        return false;
    }

private:
    GroupId g_;
    Mat2i gj_, gk_inv_;
    std::vector<bool> reachable_;
};

} // namespace detail

/** @brief Residues d mod b_k c with gcd(c, d) = 1 for which (* *; c d) lies in gamma_j^{-1} G gamma_k. */
inline std::vector<i64> double_coset_residues(const GroupId& g, int j, int k, i64 c)
{
    detail::check_cusp(g, j);
    detail::check_cusp(g, k);
    if (c < 1) throw InvalidArgument("c must be positive");
    const detail::DoubleCosetFilter filter(g, j, k);
    const i64 L = g.width() * c;
    std::vector<i64> out;
    for (i64 d = 0; d < L; ++d)
        if (detail::gcd<i64>(c, d) == 1 && filter(c, d)) out.push_back(d);
    return out;
}

/**
 * @brief phi_{jk,m}(s) for m in [-m_max, m_max] by enumeration of c <= c_max.
 *
 * At Re s = 1 only m != 0 is summed; the tail estimate is then the largest
 * deviation of the partial sums over c in [c_max/2, c_max] from the final value.
 */
inline PhiSeries phi_series(const GroupId& g, int j, int k, cplx s, const TruncationSpec& t, bool include_zero = true)
{
    t.validate();
    detail::check_cusp(g, j);
    detail::check_cusp(g, k);
    const double sigma = s.real();
    const bool at_one = std::abs(sigma - 1) < 1e-15;
    if (sigma < 1 || (at_one && include_zero)) throw DivergentRegion("phi needs Re s > 1, or Re s = 1 with m != 0");
    const int M = t.m_max;
    const long C = t.c_max;
    const i64 bk = g.width();
    const detail::DoubleCosetFilter filter(g, j, k);

    // S_c(m) for m = 0..M; negative modes are conjugates
    std::vector<std::vector<cplx>> sums(static_cast<std::size_t>(C) + 1);
    parallel_for(static_cast<std::size_t>(C), [&](std::size_t idx) {
        const i64 c = static_cast<i64>(idx) + 1;
        const i64 L = bk * c;
        std::vector<cplx> acc(static_cast<std::size_t>(M) + 1);
        for (i64 d = 0; d < L; ++d) {
            if (detail::gcd<i64>(c, d) != 1 || !filter(c, d)) continue;
            acc[0] += 1.0;
            const double ang = 2 * pi * static_cast<double>(d) / static_cast<double>(L);
            const cplx w(std::cos(ang), std::sin(ang));
            cplx p = 1.0;
            for (int m = 1; m <= M; ++m) {
                p *= w;
                acc[m] += p;
            }
        }
        sums[static_cast<std::size_t>(c)] = std::move(acc);
    });

    PhiSeries out;
    out.group = g;
    out.j = j;
    out.k = k;
    out.s = s;
    out.width_j = g.width();
    out.width_k = bk;
    out.m_max = M;
    std::vector<cplx> pos(static_cast<std::size_t>(M) + 1), neg(static_cast<std::size_t>(M) + 1);
    std::vector<double> dev_pos(static_cast<std::size_t>(M) + 1), dev_neg(static_cast<std::size_t>(M) + 1);
    std::vector<std::vector<cplx>> history_pos, history_neg;
    const long half = C / 2;
    for (long c = 1; c <= C; ++c) {
        const cplx w = at_one && s.imag() == 0 ? cplx(1.0 / (static_cast<double>(c) * static_cast<double>(c)))
                                               : std::exp(-2.0 * s * std::log(static_cast<double>(c)));
        for (int m = 0; m <= M; ++m) {
            pos[m] += w * sums[c][m];
            neg[m] += w * std::conj(sums[c][m]);
        }
        if (at_one && c >= half) {
            history_pos.push_back(pos);
            history_neg.push_back(neg);
        }
    }
    if (at_one)
        for (std::size_t h = 0; h < history_pos.size(); ++h)
            for (int m = 0; m <= M; ++m) {
                dev_pos[m] = std::max(dev_pos[m], std::abs(history_pos[h][m] - pos[m]));
                dev_neg[m] = std::max(dev_neg[m], std::abs(history_neg[h][m] - neg[m]));
            }
    const double bound = at_one ? 0 : static_cast<double>(bk) * std::pow(static_cast<double>(C), 2 - 2 * sigma) / (2 * sigma - 2);
    if (!at_one && t.tol > 0 && bound > t.tol) throw TruncationUnsound("phi tail estimate exceeds tolerance");
    for (long m = -M; m <= M; ++m) {
        if (m == 0 && !include_zero) continue;
        PhiTerm term;
        term.group = g;
        term.cusp_j = j;
        term.cusp_k = k;
        term.m = m;
        term.s = s;
        term.c_reached = C;
        term.conditional = at_one;
        const std::size_t a = static_cast<std::size_t>(std::labs(m));
        term.partial_sum = m >= 0 ? pos[a] : neg[a];
        term.tail_estimate = at_one ? (m >= 0 ? dev_pos[a] : dev_neg[a]) : bound;
        out.terms.push_back(term);
    }
    return out;
}

/** @brief Single coefficient phi_{jk,m}(s). */
inline PhiTerm phi_coefficient(const GroupId& g, int j, int k, long m, cplx s, const TruncationSpec& t)
{
    TruncationSpec tt = t;
    tt.m_max = static_cast<int>(std::max(1L, std::labs(m)));
    return phi_series(g, j, k, s, tt, m == 0).at(m);
}

/** @brief Normalized scattering entry sqrt(pi) Gamma(s-1/2)/Gamma(s) phi_{jk,0}(s) / (b_j b_k)^s. */
inline cplx normalized_scattering(const PhiTerm& phi0)
{
    const double b = static_cast<double>(phi0.group.width());
    const cplx s = phi0.s;
    return std::sqrt(pi) * gamma_fn(s - 0.5) / gamma_fn(s) * phi0.partial_sum * std::exp(-2.0 * s * std::log(b));
}

/** @brief Fourier expansion of E_j(gamma_k z, s) assembled from precomputed coefficients. */
inline cplx fourier_eval(const PhiSeries& ph, cplx z, const PrecisionConfig& cfg = {})
{
    const cplx s = ph.s;
    const double x = z.real(), y = z.imag();
    if (!(y > 0)) throw InvalidArgument("z must lie in the upper half plane");
    const double bj = static_cast<double>(ph.width_j), bk = static_cast<double>(ph.width_k);
    const cplx pre = std::exp(-s * std::log(bj)) / bk;
    const cplx gs = gamma_fn(s);
    cplx v = 0;
    if (ph.j == ph.k) v += std::exp(s * std::log(y / bj));
    v += std::sqrt(pi) * gamma_fn(s - 0.5) / gs * pre * ph.at(0).partial_sum * std::exp((1.0 - s) * std::log(y));
    for (long m = -ph.m_max; m <= ph.m_max; ++m) {
        if (m == 0) continue;
        const double am = std::abs(static_cast<double>(m));
        const double arg = 2 * pi * am * y / bk;
        const cplx kb = bessel_k(s - 0.5, arg, cfg);
        const cplx coef = 2.0 * std::exp(s * std::log(pi)) * std::exp((s - 0.5) * std::log(am / bk)) / gs * std::sqrt(y);
        const double ang = 2 * pi * static_cast<double>(m) * x / bk;
        v += pre * ph.at(m).partial_sum * coef * kb * cplx(std::cos(ang), std::sin(ang));
    }
    return v;
}

/** @brief E_j(gamma_k z, s) from its Fourier expansion. */
inline cplx fourier_eval(const GroupId& g, int j, int k, cplx z, cplx s, const TruncationSpec& t,
                         const PrecisionConfig& cfg = {})
{
    if (!(s.real() > 1)) throw DivergentRegion("fourier_eval needs Re s > 1");
    return fourier_eval(phi_series(g, j, k, s, t), z, cfg);
}

/**
 * @brief 4 pi lim_{s->1} (E_j(gamma_k z, s) - 1/(vol (s-1))) from the s = 1 coefficients.
 *
 * ph must hold phi_{jk,m}(1) for m != 0.
 */
inline double fourier_limit_eval(const PhiSeries& ph, cplx z, const PrecisionConfig& cfg = {})
{
    const double x = z.real(), y = z.imag();
    if (!(y > 0)) throw InvalidArgument("z must lie in the upper half plane");
    if (std::abs(ph.s - 1.0) > 1e-15) throw InvalidArgument("coefficients must be taken at s = 1");
    const GroupId& g = ph.group;
    const double bj = static_cast<double>(ph.width_j), bk = static_cast<double>(ph.width_k);
    double v = 0;
    if (ph.j == ph.k) v += y / bj;
    v += natural_constant(g, ph.j, ph.k, cfg);
    v -= 3 / (pi * static_cast<double>(g.index())) * std::log(y);
    cplx osc = 0;
    for (long m = -ph.m_max; m <= ph.m_max; ++m) {
        if (m == 0) continue;
        const double am = std::abs(static_cast<double>(m));
        const double ang = 2 * pi * static_cast<double>(m) * x / bk;
        osc += ph.at(m).partial_sum * std::exp(-2 * pi * am * y / bk) * cplx(std::cos(ang), std::sin(ang));
    }
    v += (pi / (bj * bk) * osc).real();
    return 4 * pi * v;
}

/** @brief Regularized s = 1 value on the 4 pi scale, in the k-chart. */
inline double fourier_limit_eval(const GroupId& g, int j, int k, cplx z, const TruncationSpec& t,
                                 const PrecisionConfig& cfg = {})
{
    return fourier_limit_eval(phi_series(g, j, k, cplx(1, 0), t, false), z, cfg);
}

} // namespace klf
