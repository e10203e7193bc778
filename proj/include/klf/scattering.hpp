#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cusps.hpp"
#include "group.hpp"
#include "special.hpp"

namespace klf {

/** @brief Z = zeta'(-1)/zeta(-1) - log(4 pi) + 1. */
inline double klf_z(const PrecisionConfig& cfg = {})
{
    return zeta_prime_ratio_at_minus1(cfg) - std::log(4 * pi) + 1;
}

/** @brief Scattering constant at s = 1 in both expansion conventions. */
struct ScatteringEntry {
    GroupId group;
    int j = 0;
    int k = 0;
    std::string j_label;
    std::string k_label;
    double normalized = 0;
    double natural = 0;
    std::string case_tag;
};

/** @brief The constant C^{Gamma(1)} = 6 Z / pi. */
inline double gamma1_constant(const PrecisionConfig& cfg = {}) { return 6 * klf_z(cfg) / pi; }

/** @brief 3x3 Gamma(2) constants over the cusps 0, 1, inf. */
inline std::vector<std::vector<ScatteringEntry>> gamma2_constants(const PrecisionConfig& cfg = {})
{
    const double z = klf_z(cfg), l2 = std::log(2.0);
    const double off = (z + l2 / 6) / pi, diag = (z - 11 * l2 / 6) / pi;
    const double shift = l2 / (2 * pi);
    const auto cusps = group_cusps(GroupId::gamma2());
    std::vector<std::vector<ScatteringEntry>> m(3, std::vector<ScatteringEntry>(3));
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
            auto& e = m[j][k];
            e.group = GroupId::gamma2();
            e.j = j;
            e.k = k;
            e.j_label = cusps[j].label;
            e.k_label = cusps[k].label;
            e.natural = j == k ? diag : off;
            e.normalized = e.natural - shift;
            e.case_tag = j == k ? "diag" : "cross_fiber";
        }
    return m;
}

/** @brief Normalized and natural Gamma_N constant for the cusp pair (j, k). */
inline ScatteringEntry fermat_constant(int n, const FermatCusp& j, const FermatCusp& k, const PrecisionConfig& cfg = {})
{
    if (n < 1) throw InvalidArgument("level must be positive");
    if (j.n != n || k.n != n) throw LevelMismatch("cusp level differs from n");
    const double N = n, l2 = std::log(2.0), ln = std::log(N);
    const double c1 = gamma1_constant(cfg), pre = 1 / (6 * N * N);
    ScatteringEntry e;
    e.group = GroupId::gamma_n(n);
    e.j = cusp_position(j);
    e.k = cusp_position(k);
    e.j_label = to_string(j.rep);
    e.k_label = to_string(k.rep);
    if (j.kind == k.kind && j.index == k.index) {
        e.normalized = pre * (c1 - ((12 * N + 2) * l2 + (6 - 3 * N) * ln) / pi);
        e.case_tag = "diag";
    } else {
        e.normalized = pre * (c1 - (2 * l2 + 6 * ln) / pi);
        e.case_tag = "cross_fiber";
        if (j.kind == k.kind) {
            const int d = ((k.index - j.index) % n + n) % n;
            const double chord = 2 * std::sin(pi * std::min(d, n - d) / N);
            e.normalized -= pre * (3 * N / pi) * std::log(chord);
            e.case_tag = "same_fiber(" + std::to_string(d) + ")";
        }
    }
    e.natural = e.normalized + std::log(2 * N) / (2 * pi * N * N);
    return e;
}

/** @brief Full 3N x 3N matrix in cusp_reps order. */
inline std::vector<std::vector<ScatteringEntry>> scattering_matrix(int n, const PrecisionConfig& cfg = {})
{
    const auto reps = cusp_reps(n);
    std::vector<std::vector<ScatteringEntry>> m(reps.size(), std::vector<ScatteringEntry>(reps.size()));
    for (std::size_t a = 0; a < reps.size(); ++a)
        for (std::size_t b = 0; b < reps.size(); ++b) m[a][b] = fermat_constant(n, reps[a], reps[b], cfg);
    return m;
}

/** @brief Natural constant of g for cusp positions (j, k) of group_cusps(g). */
inline double natural_constant(const GroupId& g, int j, int k, const PrecisionConfig& cfg = {})
{
    switch (g.kind) {
    case GroupId::Kind::Gamma1:
        if (j != 0 || k != 0) throw InvalidArgument("Gamma1 has a single cusp");
        return gamma1_constant(cfg);
    case GroupId::Kind::Gamma2:
        if (j < 0 || j > 2 || k < 0 || k > 2) throw InvalidArgument("cusp position out of range");
        return gamma2_constants(cfg)[j][k].natural;
    default: {
        const auto reps = cusp_reps(g.n);
        const int size = static_cast<int>(reps.size());
        if (j < 0 || j >= size || k < 0 || k >= size) throw InvalidArgument("cusp position out of range");
        return fermat_constant(g.n, reps[j], reps[k], cfg).natural;
    }
    }
}

/** @brief Additive constant of the Kronecker limit formula on the 4 pi scale. */
inline double klf_constant(const GroupId& g, const PrecisionConfig& cfg = {})
{
    const double z = klf_z(cfg), l2 = std::log(2.0);
    switch (g.kind) {
    case GroupId::Kind::Gamma1: return 24 * z;
    case GroupId::Kind::Gamma2: return 4 * (z + l2 / 6);
    default: {
        const double N = g.n;
        return 4 / (N * N) * (z + l2 / 6 - 0.5 * std::log(N));
    }
    }
}

/**
 * @brief Largest violation of N sum_{l over K} C~_{jl} = C~^{Gamma(2)}_{JK} - log N / (2 pi).
 *
 * j runs over all Gamma_N cusps, K over the Gamma(2) cusps.
 */
inline double scattering_consistency_residual(int n, const PrecisionConfig& cfg = {})
{
    const auto reps = cusp_reps(n);
    const auto g2 = gamma2_constants(cfg);
    const double shift = std::log(static_cast<double>(n)) / (2 * pi);
    double worst = 0;
    for (const auto& j : reps)
        for (int kb = 0; kb < 3; ++kb) {
            double sum = 0;
            for (const auto& l : reps)
                if (static_cast<int>(l.base()) == kb) sum += fermat_constant(n, j, l, cfg).natural;
            const double lhs = n * sum, rhs = g2[static_cast<int>(j.base())][kb].natural - shift;
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    return worst;
}

} // namespace klf
