#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "eisenstein.hpp"
#include "qseries.hpp"
#include "scattering.hpp"

namespace klf {

using ojson = nlohmann::ordered_json;

/** @brief Outcome of one numerical or exact check. */
struct CheckReport {
    std::string check_id;
    ojson parameters = ojson::object();
    double residual = 0;
    double tolerance = 0;
    bool passed = false;
    std::int64_t runtime_ms = 0;
    std::string error;
};

inline ojson to_json(const CheckReport& r)
{
    ojson j;
    j["check_id"] = r.check_id;
    j["parameters"] = r.parameters;
    j["residual"] = r.residual;
    j["tolerance"] = r.tolerance;
    j["passed"] = r.passed;
    j["runtime_ms"] = r.runtime_ms;
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

inline CheckReport report_from_json(const ojson& j)
{
    CheckReport r;
    r.check_id = j.at("check_id").get<std::string>();
    r.parameters = j.at("parameters");
    // non-finite residuals serialize as null
    r.residual = j.at("residual").is_null() ? std::numeric_limits<double>::infinity() : j.at("residual").get<double>();
    r.tolerance = j.at("tolerance").get<double>();
    r.passed = j.at("passed").get<bool>();
    r.runtime_ms = j.at("runtime_ms").get<std::int64_t>();
    if (j.contains("error")) r.error = j.at("error").get<std::string>();
    return r;
}

inline std::string format_complex(cplx z)
{
    ojson j = ojson::array({z.real(), z.imag()});
    return j.dump();
}

/** @brief Memo of Fourier coefficient series keyed by group, cusps, s and truncation. */
class PhiCache {
public:
    const PhiSeries& get(const GroupId& g, int j, int k, cplx s, const TruncationSpec& t, bool include_zero)
    {
        const Key key{static_cast<int>(g.kind), g.n, j, k, s.real(), s.imag(), t.c_max, t.m_max, include_zero};
        auto it = memo_.find(key);
        if (it == memo_.end()) it = memo_.emplace(key, phi_series(g, j, k, s, t, include_zero)).first;
        return it->second;
    }

private:
    using Key = std::tuple<int, int, int, int, double, double, long, int, bool>;
    std::map<Key, PhiSeries> memo_;
};

namespace detail {

inline CheckReport make_report(std::string id, ojson params, double residual, double tol)
{
    CheckReport r;
    r.check_id = std::move(id);
    r.parameters = std::move(params);
    r.residual = residual;
    r.tolerance = tol;
    r.passed = std::isfinite(residual) && residual <= tol;
    return r;
}

inline ojson trunc_json(const TruncationSpec& t)
{
    return ojson{{"c_max", t.c_max}, {"m_max", t.m_max}, {"order", t.order}};
}

inline double neg_log_norm(cplx value, cplx z) { return -std::log(petersson_norm_sq(value, z, 2)); }

/** @brief Gamma_N cusp l and shift t with gamma = w gamma_l T^t, w in Gamma_N. */
inline std::pair<int, i64> chart_of(const GroupId& g, const Mat2i& gamma)
{
    const Cuspi c = make_cusp<i64>(gamma.a, gamma.c);
    const int l = cusp_class(g, c);
    const Mat2i scal = group_cusps(g)[l].scaling;
    Mat2i w = identity<i64>();
    if (g.kind == GroupId::Kind::GammaN) w = classify_cusp(c, g.n).witness;
    if (g.kind == GroupId::Kind::Gamma2) throw InvalidArgument("chart_of expects Gamma_N");
    const Mat2i rest = inverse(w * scal) * gamma;
    if (rest.c != 0 || detail::iabs(rest.a) != 1) throw Error("coset representative does not fix the chart cusp");
    return {l, rest.a * rest.b};
}

} // namespace detail

/** @brief KLF for Gamma(2) at cusp j in {0, 1, 2} (0, 1, inf), expansion at infinity. */
inline CheckReport check_klf_gamma2(int j, cplx z, const TruncationSpec& t, PhiCache* cache = nullptr,
                                    double tol = 1e-6, const PrecisionConfig& cfg = {})
{
    const GroupId g = GroupId::gamma2();
    PhiCache local;
    PhiCache& pc = cache ? *cache : local;
    const PhiSeries& ph = pc.get(g, j, 2, cplx(1, 0), t, false);
    const double lhs = fourier_limit_eval(ph, z, cfg);
    const double rhs = detail::neg_log_norm(form_value(FormLabel::g(static_cast<Base>(j)), z), z) + klf_constant(g, cfg);
    return detail::make_report("klf_gamma2",
                               ojson{{"cusp", to_string(static_cast<Base>(j))}, {"z", format_complex(z)},
                                     {"truncation", detail::trunc_json(t)}, {"lhs", lhs}, {"rhs", rhs}},
                               std::abs(lhs - rhs), tol);
}

/** @brief KLF for Gamma_N at the cusp fc, expansion at infinity. */
inline CheckReport check_klf_fermat(int n, const FermatCusp& fc, cplx z, const TruncationSpec& t,
                                    PhiCache* cache = nullptr, double tol = 1e-4, const PrecisionConfig& cfg = {})
{
    if (fc.n != n) throw LevelMismatch("cusp level differs from n");
    const GroupId g = GroupId::gamma_n(n);
    PhiCache local;
    PhiCache& pc = cache ? *cache : local;
    const PhiSeries& ph = pc.get(g, cusp_position(fc), infinity_position(g), cplx(1, 0), t, false);
    const double lhs = fourier_limit_eval(ph, z, cfg);
    const double rhs = detail::neg_log_norm(form_value(FormLabel::f(fc), z), z) / (n * n) + klf_constant(g, cfg);
    return detail::make_report("klf_fermat",
                               ojson{{"n", n}, {"cusp", to_string(fc.rep)}, {"kind", to_string(fc.kind)},
                                     {"z", format_complex(z)}, {"truncation", detail::trunc_json(t)}, {"lhs", lhs},
                                     {"rhs", rhs}},
                               std::abs(lhs - rhs), tol);
}

/**
 * @brief Summed KLF over Gamma_N \ Gamma(2).
 *
 * The left side is the Gamma(2) limit minus 2 log N, the right side uses
 * the product of f|gamma over the coset representatives.
 */
inline CheckReport check_limitsum(int n, const FermatCusp& fc, cplx z, const TruncationSpec& t,
                                  PhiCache* cache = nullptr, double tol = 1e-5, const PrecisionConfig& cfg = {})
{
    if (fc.n != n) throw LevelMismatch("cusp level differs from n");
    PhiCache local;
    PhiCache& pc = cache ? *cache : local;
    const PhiSeries& ph = pc.get(GroupId::gamma2(), static_cast<int>(fc.base()), 2, cplx(1, 0), t, false);
    const double N = n;
    const double lhs = fourier_limit_eval(ph, z, cfg) - 2 * std::log(N);
    const double rhs = -coset_log_norm_sum(fc.kind, fc.index, n, z) / (N * N) +
                       4 * (klf_z(cfg) + std::log(2.0) / 6 - 0.5 * std::log(N));
    return detail::make_report("limitsum",
                               ojson{{"n", n}, {"cusp", to_string(fc.rep)}, {"kind", to_string(fc.kind)},
                                     {"z", format_complex(z)}, {"truncation", detail::trunc_json(t)}, {"lhs", lhs},
                                     {"rhs", rhs}},
                               std::abs(lhs - rhs), tol);
}

/**
 * @brief Sum of Gamma_N limits over the coset translates against the Gamma(2) limit.
 *
 * Each translate gamma z is expanded at the Gamma_N cusp gamma(infinity).
 */
inline CheckReport check_limit_average(int n, const FermatCusp& fc, cplx z, const TruncationSpec& t,
                                       PhiCache* cache = nullptr, double tol = 1e-4, const PrecisionConfig& cfg = {})
{
    if (fc.n != n) throw LevelMismatch("cusp level differs from n");
    const GroupId g = GroupId::gamma_n(n);
    PhiCache local;
    PhiCache& pc = cache ? *cache : local;
    const int j = cusp_position(fc);
    double lhs = 0;
    for (const auto& gamma : coset_reps<i64>(n)) {
        const auto [l, shift] = detail::chart_of(g, gamma);
        lhs += fourier_limit_eval(pc.get(g, j, l, cplx(1, 0), t, false), z + static_cast<double>(shift), cfg);
    }
    const double rhs = fourier_limit_eval(pc.get(GroupId::gamma2(), static_cast<int>(fc.base()), 2, cplx(1, 0), t, false),
                                          z, cfg) -
                       2 * std::log(static_cast<double>(n));
    return detail::make_report("limit_average",
                               ojson{{"n", n}, {"cusp", to_string(fc.rep)}, {"z", format_complex(z)},
                                     {"truncation", detail::trunc_json(t)}, {"lhs", lhs}, {"rhs", rhs}},
                               std::abs(lhs - rhs), tol);
}

/** @brief Relative residual of sum_{j over k} b^s E_j^{Gamma_N} = w^s E_k^{Gamma(2)} with a shared truncation. */
inline CheckReport check_sum_relation(int n, Base k, cplx z, cplx s, const TruncationSpec& t, double tol = 1e-5)
{
    const GroupId gn = GroupId::gamma_n(n), g2 = GroupId::gamma2();
    const auto en = eisenstein_direct_all(gn, z, s, t);
    const auto e2 = eisenstein_direct_all(g2, z, s, t);
    const auto cusps = group_cusps(gn);
    cplx lhs = 0;
    const cplx bs = std::exp(s * std::log(static_cast<double>(gn.width())));
    for (const auto& c : cusps)
        if (c.base == k) lhs += bs * en[c.position].value;
    const cplx rhs = std::exp(s * std::log(2.0)) * e2[static_cast<int>(k)].value;
    return detail::make_report("sum_relation",
                               ojson{{"n", n}, {"k", to_string(k)}, {"z", format_complex(z)}, {"s", format_complex(s)},
                                     {"truncation", detail::trunc_json(t)}, {"lhs", lhs.real()}, {"rhs", rhs.real()},
                                     {"tail_estimate", en.front().tail_estimate}},
                               std::abs(lhs - rhs) / std::abs(rhs), tol);
}

/** @brief Exact comparison of the finite exponential sums at level c and mode m. */
inline CheckReport check_sumrs(int n, long c, long m, int j, Base k, double tol = 1e-10)
{
    const GroupId gn = GroupId::gamma_n(n), g2 = GroupId::gamma2();
    const auto cusps = group_cusps(gn);
    if (j < 0 || j >= static_cast<int>(cusps.size())) throw InvalidArgument("cusp position out of range");
    const int jb = static_cast<int>(cusps[j].base), kb = static_cast<int>(k);
    auto phase = [&](i64 d, i64 L) {
        const i64 r = detail::mod_floor<i64>(m * d, L);
        const double a = 2 * pi * static_cast<double>(r) / static_cast<double>(L);
        return cplx(std::cos(a), std::sin(a));
    };
    cplx lhs = 0;
    for (const auto& l : cusps) {
        if (l.base != k) continue;
        // e(m (b_l / w_k) d / (b_l c)) = e(m d / (w_k c))
        for (i64 d : double_coset_residues(gn, j, l.position, c)) lhs += phase(d, 2 * c);
    }
    lhs /= static_cast<double>(gn.width());
    cplx rhs = 0;
    for (i64 d : double_coset_residues(g2, jb, kb, c)) rhs += phase(d, 2 * c);
    rhs /= 2.0;
    return detail::make_report("sumrs",
                               ojson{{"n", n}, {"c", c}, {"m", m}, {"j", cusps[j].label}, {"k", to_string(k)},
                                     {"lhs", format_complex(lhs)}, {"rhs", format_complex(rhs)}},
                               std::abs(lhs - rhs), tol);
}

/** @brief Linear relations between the Gamma_N and Gamma(2) natural constants. */
inline CheckReport check_scattering_consistency(int n, double tol = 1e-10, const PrecisionConfig& cfg = {})
{
    if (n < 1 || n > 5) throw InvalidArgument("consistency check covers 1 <= n <= 5");
    return detail::make_report("scattering_consistency", ojson{{"n", n}}, scattering_consistency_residual(n, cfg), tol);
}

/** @brief scattering_matrix(1) against gamma2_constants(). */
inline CheckReport check_scattering_level_one(double tol = 1e-12, const PrecisionConfig& cfg = {})
{
    const auto m1 = scattering_matrix(1, cfg);
    const auto g2 = gamma2_constants(cfg);
    double worst = 0;
    const auto reps = cusp_reps(1);
    for (std::size_t a = 0; a < reps.size(); ++a)
        for (std::size_t b = 0; b < reps.size(); ++b) {
            const auto& ref = g2[static_cast<int>(reps[a].base())][static_cast<int>(reps[b].base())];
            worst = std::max({worst, std::abs(m1[a][b].normalized - ref.normalized), std::abs(m1[a][b].natural - ref.natural)});
        }
    return detail::make_report("scattering_level_one", ojson::object(), worst, tol);
}

/** @brief Normalized Gamma(2) scattering entry at s = 2 from enumeration against its closed form. */
inline CheckReport check_gamma2_scattering(int j, int k, const TruncationSpec& t, PhiCache* cache = nullptr,
                                           double tol = 1e-6)
{
    PhiCache local;
    PhiCache& pc = cache ? *cache : local;
    const cplx s(2, 0);
    const double num = normalized_scattering(pc.get(GroupId::gamma2(), j, k, s, t, true).at(0)).real();
    const double ratio = zeta(3) / zeta(4);
    const double g = std::sqrt(pi) * gamma_fn(1.5) / gamma_fn(2.0);
    // natural entries times b^{1-s} = 1/2
    const double natural = j == k ? g / 4 * ratio / 15 : g / 8 * 14 / 15 * ratio;
    const double closed = natural / 2;
    return detail::make_report("gamma2_scattering",
                               ojson{{"j", to_string(static_cast<Base>(j))}, {"k", to_string(static_cast<Base>(k))},
                                     {"s", 2}, {"c_max", t.c_max}, {"numeric", num}, {"closed_form", closed}},
                               std::abs(num - closed), tol);
}

/** @brief |fourier_eval - eisenstein_direct| in the k-chart. */
inline CheckReport check_fourier_direct(const GroupId& g, int j, int k, cplx z, cplx s, const TruncationSpec& t,
                                        PhiCache* cache = nullptr, double tol = 1e-4, const PrecisionConfig& cfg = {})
{
    PhiCache local;
    PhiCache& pc = cache ? *cache : local;
    const auto cusps = group_cusps(g);
    const cplx f = fourier_eval(pc.get(g, j, k, s, t, true), z, cfg);
    const DirectValue d = eisenstein_direct(g, j, z, s, t, cusps[k].scaling);
    return detail::make_report("fourier_direct",
                               ojson{{"group", g.name()}, {"j", cusps[j].label}, {"k", cusps[k].label},
                                     {"z", format_complex(z)}, {"s", format_complex(s)},
                                     {"truncation", detail::trunc_json(t)}, {"fourier", f.real()},
                                     {"direct", d.value.real()}, {"tail_estimate", d.tail_estimate}},
                               std::abs(f - d.value), tol);
}

/** @brief Averaged translates of E_j^{Gamma_N} over Gamma_N \ Gamma(2) against E^{Gamma(2)}, relative. */
inline CheckReport check_averaged_translate(int n, int j, Base k, cplx z, cplx s, const TruncationSpec& t,
                                            double tol = 1e-4)
{
    const GroupId gn = GroupId::gamma_n(n);
    const auto cusps = group_cusps(gn);
    const Mat2i gk = base_scaling<i64>(k);
    std::vector<Mat2i> charts;
    for (const auto& c : coset_reps<i64>(n)) charts.push_back(c * gk);
    const auto vals = eisenstein_direct_charts(gn, charts, z, s, t);
    cplx lhs = 0;
    for (const auto& v : vals) lhs += v[j].value;
    lhs *= std::exp((s - 1.0) * std::log(static_cast<double>(gn.width())));
    const auto e2 = eisenstein_direct_all(GroupId::gamma2(), z, s, t, gk);
    const cplx rhs = std::exp((s - 1.0) * std::log(2.0)) * e2[static_cast<int>(cusps[j].base)].value;
    return detail::make_report("averaged_translate",
                               ojson{{"n", n}, {"j", cusps[j].label}, {"k", to_string(k)}, {"z", format_complex(z)},
                                     {"s", format_complex(s)}, {"truncation", detail::trunc_json(t)},
                                     {"lhs", lhs.real()}, {"rhs", rhs.real()}},
                               std::abs(lhs - rhs) / std::abs(rhs), tol);
}

/**
 * @brief Spread of the KLF constant extracted in the charts of several cusps.
 *
 * For each chart cusp l the difference between the limit and
 * -(1/N^2) log ||f_j|gamma_l (z)||^2 is formed; the residual is max - min.
 */
inline CheckReport check_cusp_independence(const GroupId& g, int j, const std::vector<int>& charts, cplx z,
                                           const TruncationSpec& t, PhiCache* cache = nullptr, double tol = 1e-5,
                                           const PrecisionConfig& cfg = {})
{
    if (g.kind == GroupId::Kind::Gamma1) throw InvalidArgument("cusp independence needs Gamma(2) or Gamma_N");
    PhiCache local;
    PhiCache& pc = cache ? *cache : local;
    const auto cusps = group_cusps(g);
    const FormLabel label = g.kind == GroupId::Kind::Gamma2 ? FormLabel::g(cusps[j].base) : FormLabel::f(cusps[j].fermat);
    const double scale = g.kind == GroupId::Kind::Gamma2 ? 1.0 : 1.0 / (g.n * g.n);
    double lo = 1e300, hi = -1e300;
    ojson constants = ojson::array();
    for (int l : charts) {
        const double lhs = fourier_limit_eval(pc.get(g, j, l, cplx(1, 0), t, false), z, cfg);
        const double rhs = scale * detail::neg_log_norm(slash2_value(label, cusps[l].scaling, z, SlashPath::Direct), z);
        const double a = lhs - rhs;
        constants.push_back(ojson{{"chart", cusps[l].label}, {"constant", a}});
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    return detail::make_report("cusp_independence",
                               ojson{{"group", g.name()}, {"j", cusps[j].label}, {"z", format_complex(z)},
                                     {"truncation", detail::trunc_json(t)}, {"constants", constants},
                                     {"klf_constant", klf_constant(g, cfg)}},
                               hi - lo, tol);
}

/**
 * @brief Theorem constant C_{jk} of Gamma_N against the difference series
 * C_{JK}/N^2 - log N/(pi N^2) + pi/(4 N^2) sum_c (A_N(c) - A_2(c)) / c^2.
 */
inline CheckReport check_scattering_numeric(int n, int j, int k, long c_max, double tol = 1e-4,
                                            const PrecisionConfig& cfg = {})
{
    const GroupId gn = GroupId::gamma_n(n);
    const auto cusps = group_cusps(gn);
    const int jb = static_cast<int>(cusps[j].base), kb = static_cast<int>(cusps[k].base);
    const detail::DoubleCosetFilter fn(gn, j, k), f2(GroupId::gamma2(), jb, kb);
    std::vector<double> terms(static_cast<std::size_t>(c_max));
    parallel_for(static_cast<std::size_t>(c_max), [&](std::size_t idx) {
        const i64 c = static_cast<i64>(idx) + 1;
        long long an = 0, a2 = 0;
        for (i64 d = 0; d < 2LL * n * c; ++d)
            if (detail::gcd<i64>(c, d) == 1 && fn(c, d)) ++an;
        for (i64 d = 0; d < 2 * c; ++d)
            if (detail::gcd<i64>(c, d) == 1 && f2(c, d)) ++a2;
        terms[idx] = static_cast<double>(an - a2) / (static_cast<double>(c) * static_cast<double>(c));
    });
    double sum = 0;
    for (double v : terms) sum += v;
    const double N = n;
    const double num = gamma2_constants(cfg)[jb][kb].normalized / (N * N) - std::log(N) / (pi * N * N) + pi / (4 * N * N) * sum;
    const double th = fermat_constant(n, cusps[j].fermat, cusps[k].fermat, cfg).normalized;
    return detail::make_report("scattering_numeric",
                               ojson{{"n", n}, {"j", cusps[j].label}, {"k", cusps[k].label}, {"c_max", c_max},
                                     {"numeric", num}, {"theorem", th}},
                               std::abs(num - th), tol);
}

/** @brief Word round trip decompose(eval(w)) = w on random reduced words. */
inline CheckReport check_word_roundtrip(int count, int max_syllables, std::uint64_t seed = 20240611)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> len(0, max_syllables), ex(1, 6), sign(0, 1), first(1, 2);
    int failures = 0;
    for (int i = 0; i < count; ++i) {
        GammaWord<BigInt> w;
        const int L = len(rng);
        int gen = first(rng);
        for (int s = 0; s < L; ++s) {
            const long long e = sign(rng) ? ex(rng) : -ex(rng);
            w.push(gen, BigInt(e));
            gen = 3 - gen;
        }
        if (decompose_gamma2(eval(w)) != w) ++failures;
    }
    return detail::make_report("word_roundtrip", ojson{{"words", count}, {"max_syllables", max_syllables}, {"seed", seed}},
                               failures, 0);
}

/**
 * @brief classify_cusp on all (p:q) with |p|, |q| <= bound.
 *
 * Counts failures: wrong number of classes, witness outside Gamma_N or
 * not mapping the representative to the cusp, representative not fixed,
 * class outside the parity family.
 */
inline CheckReport check_cusp_partition(int n, long bound = 50)
{
    int failures = 0;
    std::set<int> seen;
    for (long q = 0; q <= bound; ++q)
        for (long p = -bound; p <= bound; ++p) {
            if (detail::gcd<i64>(p, q) != 1) continue;
            if (q == 0 && p != 1) continue;
            const Cuspi c = make_cusp<i64>(p, q);
            const auto cl = classify_cusp(c, n);
            seen.insert(cusp_position(cl.cusp));
            if (!is_in_gamma_n(cl.witness, n)) ++failures;
            if (mobius_apply(cl.witness, cl.cusp.rep) != c) ++failures;
            if (cl.cusp.base() != gamma2_base(c)) ++failures;
            if (cusp_class(GroupId::gamma_n(n), c) != cusp_position(cl.cusp)) ++failures;
        }
    for (const auto& r : cusp_reps(n))
        if (classify_cusp(r.rep, n).cusp != r) ++failures;
    if (static_cast<int>(seen.size()) != 3 * n) ++failures;
    return detail::make_report("cusp_partition", ojson{{"n", n}, {"bound", bound}, {"classes", seen.size()}}, failures, 0);
}

/** @brief Largest coefficient of x^N + y^N - 1 up to the given order, in quad precision. */
inline CheckReport check_fermat_relation(int n, int order = 20, double tol = 1e-12)
{
    auto x = expansion<cplx_hp>(FormLabel::x(n), order + 1), y = expansion<cplx_hp>(FormLabel::y(n), order + 1);
    const long D = 2L * n;
    auto r = truncate(pow(x, n) + pow(y, n) - QExpansionHP::constant(cplx_hp(1), D, D * (order + 1)), D * order);
    return detail::make_report("fermat_relation", ojson{{"n", n}, {"order", order}}, max_abs(r), tol);
}

/** @brief Coset product of f|gamma against its closed form in theta^2 and lambda. */
inline CheckReport check_coset_product(int n, Kind kind, cplx z, double tol = 1e-8)
{
    const double N2 = static_cast<double>(n) * n;
    const Level2Logs L = level2_logs(z);
    const double sgn = (n * n) % 2 ? -1.0 : 1.0;
    cplx closed;
    switch (kind) {
    case Kind::A: closed = sgn * std::exp(N2 * (L.log_theta2 + L.log_lambda - L.log_one_minus_lambda)); break;
    case Kind::B: closed = sgn * std::exp(N2 * L.log_theta2); break;
    default: closed = std::exp(N2 * (L.log_theta2 - L.log_one_minus_lambda)); break;
    }
    double worst = 0;
    for (int j = 0; j < n; ++j) {
        worst = std::max(worst, std::abs(coset_product_value(kind, j, n, z, SlashPath::Table) - closed));
        worst = std::max(worst, std::abs(coset_product_value(kind, j, n, z, SlashPath::Direct) - closed));
    }
    return detail::make_report("coset_product",
                               ojson{{"n", n}, {"kind", to_string(kind)}, {"z", format_complex(z)},
                                     {"closed_form", format_complex(closed)}},
                               worst, tol);
}

/** @brief Suite selection and overrides. */
struct SuiteOptions {
    std::vector<int> ns{1, 2, 3};
    /** @brief Overrides the per-check c_max and m_max when positive. */
    long c_max = 0;
    int m_max = 0;
    /** @brief Overrides the per-check tolerance when positive. */
    double tol = 0;
    /** @brief Keep only checks whose id equals one of these (all when empty). */
    std::vector<std::string> only;
    bool record_runtime = true;
    PrecisionConfig precision{};
};

/** @brief Probe points i, 2i, 1 + 2i, 0.3 + 1.5i. */
inline std::vector<cplx> probe_grid() { return {cplx(0, 1), cplx(0, 2), cplx(1, 2), cplx(0.3, 1.5)}; }

enum class SuiteLevel { Fast, Full };

/**
 * @brief Runs the checks of the given level in a fixed order.
 *
 * Exceptions inside a check become a failed report carrying the message.
 */
inline std::vector<CheckReport> run_suite(SuiteLevel level, const SuiteOptions& opt = {})
{
    std::vector<CheckReport> out;
    PhiCache cache;
    const PrecisionConfig& cfg = opt.precision;
    auto wanted = [&](const std::string& id) {
        return opt.only.empty() || std::find(opt.only.begin(), opt.only.end(), id) != opt.only.end();
    };
    auto trunc = [&](long c, int m) {
        TruncationSpec t;
        t.c_max = opt.c_max > 0 ? opt.c_max : c;
        t.m_max = opt.m_max > 0 ? opt.m_max : m;
        return t;
    };
    auto tol = [&](double d) { return opt.tol > 0 ? opt.tol : d; };
    auto run = [&](const std::string& id, ojson params, const std::function<CheckReport()>& f) {
        if (!wanted(id)) return;
        const auto t0 = std::chrono::steady_clock::now();
        CheckReport r;
        try {
            r = f();
        } catch (const std::exception& e) {
            r.check_id = id;
            r.parameters = std::move(params);
            r.residual = std::numeric_limits<double>::infinity();
            r.passed = false;
            r.error = e.what();
        }
        const auto dt = std::chrono::steady_clock::now() - t0;
        r.runtime_ms = opt.record_runtime ? std::chrono::duration_cast<std::chrono::milliseconds>(dt).count() : 0;
        out.push_back(std::move(r));
    };
    auto has = [&](int n) { return std::find(opt.ns.begin(), opt.ns.end(), n) != opt.ns.end(); };

    // exact and algebraic checks
    run("word_roundtrip", ojson::object(), [&] { return check_word_roundtrip(10000, 12); });
    for (int n : opt.ns) run("cusp_partition", ojson{{"n", n}}, [&] { return check_cusp_partition(n, 50); });
    for (int n : opt.ns)
        if (n <= 5) run("scattering_consistency", ojson{{"n", n}}, [&] { return check_scattering_consistency(n, tol(1e-10), cfg); });
    run("scattering_level_one", ojson::object(), [&] { return check_scattering_level_one(tol(1e-12), cfg); });
    for (int n : opt.ns) {
        if (n < 2) continue;
        const int ncusp = 3 * n;
        for (long c = 1; c <= 4; ++c)
            for (long m = 0; m <= 2; ++m)
                for (int j = 0; j < ncusp; ++j)
                    for (Base k : {Base::Zero, Base::One, Base::Inf})
                        run("sumrs", ojson{{"n", n}, {"c", c}, {"m", m}}, [&] { return check_sumrs(n, c, m, j, k, tol(1e-10)); });
    }
    for (int n : opt.ns) run("fermat_relation", ojson{{"n", n}}, [&] { return check_fermat_relation(n, 20, tol(1e-12)); });
    for (int n : opt.ns)
        if (n <= 2)
            for (Kind kind : {Kind::A, Kind::B, Kind::C})
                for (cplx z : {cplx(0, 1), cplx(1, 2)})
                    run("coset_product", ojson{{"n", n}}, [&] { return check_coset_product(n, kind, z, tol(1e-8)); });
    if (level == SuiteLevel::Fast) return out;

    // numeric cross-path checks
    {
        const TruncationSpec t = trunc(2000, 1);
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                run("gamma2_scattering", ojson{{"j", j}, {"k", k}}, [&] { return check_gamma2_scattering(j, k, t, &cache, tol(1e-6)); });
    }
    {
        const TruncationSpec t = trunc(500, 10);
        std::vector<std::tuple<GroupId, int, int>> pairs;
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) pairs.emplace_back(GroupId::gamma2(), j, k);
        for (int n : opt.ns) {
            if (n < 2) continue;
            const GroupId g = GroupId::gamma_n(n);
            const int inf = infinity_position(g);
            for (int j : {0, n, 2 * n, inf}) pairs.emplace_back(g, j, 0);
            for (int k : {1, n + 1, 2 * n, inf}) pairs.emplace_back(g, 0, k);
        }
        for (const auto& [g, j, k] : pairs)
            for (cplx z : probe_grid())
                run("fourier_direct", ojson{{"group", g.name()}}, [&] { return check_fourier_direct(g, j, k, z, 2.0, t, &cache, tol(1e-4), cfg); });
    }
    {
        const TruncationSpec t = trunc(500, 10);
        for (int n : opt.ns) {
            if (n < 2) continue;
            for (Base k : {Base::Zero, Base::One, Base::Inf})
                for (cplx z : {cplx(0, 1), cplx(1, 2)})
                    run("sum_relation", ojson{{"n", n}}, [&] { return check_sum_relation(n, k, z, 2.0, t, tol(1e-5)); });
        }
        if (has(2))
            for (int j : {0, 3, 4})
                for (Base k : {Base::Zero, Base::Inf})
                    run("averaged_translate", ojson{{"n", 2}}, [&] { return check_averaged_translate(2, j, k, cplx(0, 1), 2.0, t, tol(1e-4)); });
    }
    {
        const TruncationSpec t = trunc(4000, 16);
        for (int j = 0; j < 3; ++j)
            for (cplx z : probe_grid())
                run("klf_gamma2", ojson{{"j", j}}, [&] { return check_klf_gamma2(j, z, t, &cache, tol(1e-6), cfg); });
    }
    {
        const TruncationSpec t = trunc(2000, 30);
        for (int n : opt.ns) {
            if (n < 2) continue;
            for (Base b : {Base::Zero, Base::One, Base::Inf})
                for (cplx z : {cplx(0, 2), cplx(1, 2)}) {
                    const FermatCusp fc = fermat_cusp(n, b, n > 1 ? 1 : 0);
                    run("klf_fermat", ojson{{"n", n}}, [&] { return check_klf_fermat(n, fc, z, t, &cache, tol(1e-4), cfg); });
                }
        }
        for (int n : opt.ns)
            for (Base b : {Base::Zero, Base::One, Base::Inf}) {
                const FermatCusp fc = fermat_cusp(n, b, 0);
                run("limitsum", ojson{{"n", n}}, [&] { return check_limitsum(n, fc, cplx(0, 2), trunc(4000, 16), &cache, tol(1e-5), cfg); });
            }
        if (has(2))
            for (Base b : {Base::Zero, Base::One, Base::Inf}) {
                const FermatCusp fc = fermat_cusp(2, b, 1);
                run("limit_average", ojson{{"n", 2}}, [&] { return check_limit_average(2, fc, cplx(0, 2), t, &cache, tol(1e-4), cfg); });
            }
        run("cusp_independence", ojson{{"group", "Gamma2"}},
            [&] { return check_cusp_independence(GroupId::gamma2(), 0, {0, 1, 2}, cplx(0, 2), t, &cache, tol(1e-5), cfg); });
        if (has(2))
            run("cusp_independence", ojson{{"group", "GammaN(2)"}}, [&] {
                return check_cusp_independence(GroupId::gamma_n(2), 3, {0, 1, 2, 3, 4, 5}, cplx(0, 2), t, &cache, tol(1e-5), cfg);
            });
    }
    for (int n : opt.ns) {
        if (n < 2 || n > 3) continue;
        const long c = opt.c_max > 0 ? opt.c_max : 1000;
        for (auto [j, k] : {std::pair{0, 0}, std::pair{0, 1}, std::pair{0, n}})
            run("scattering_numeric", ojson{{"n", n}}, [&] { return check_scattering_numeric(n, j, k, c, tol(1e-4), cfg); });
    }
    return out;
}

/** @brief True when every report passed. */
inline bool all_passed(const std::vector<CheckReport>& rs)
{
    return std::all_of(rs.begin(), rs.end(), [](const CheckReport& r) { return r.passed; });
}

} // namespace klf
