#pragma once

#include <string>
#include <vector>

#include "fermat.hpp"

namespace klf {

/** @brief A cusp of Gamma(1), Gamma(2) or Gamma_N with its scaling matrix and width. */
struct CuspInfo {
    int position = 0;
    std::string label;
    Cuspi rep{1, 0};
    Mat2i scaling = identity<i64>();
    long width = 1;
    Base base = Base::Inf;
    FermatCusp fermat{};
};

/** @brief Cusp system of g: {inf}, {0, 1, inf} or cusp_reps(n). */
inline std::vector<CuspInfo> group_cusps(const GroupId& g)
{
    std::vector<CuspInfo> out;
    switch (g.kind) {
    case GroupId::Kind::Gamma1: out.push_back({0, "inf", {1, 0}, identity<i64>(), 1, Base::Inf, {}}); break;
    case GroupId::Kind::Gamma2: {
        int pos = 0;
        for (Base b : {Base::Zero, Base::One, Base::Inf}) {
            CuspInfo c;
            c.position = pos++;
            c.label = to_string(b);
            c.rep = base_cusp<i64>(b);
            c.scaling = base_scaling<i64>(b);
            c.width = 2;
            c.base = b;
            c.fermat = fermat_cusp(1, b, 0);
            out.push_back(c);
        }
        break;
    }
    default: {
        for (const auto& fc : cusp_reps(g.n)) {
            CuspInfo c;
            c.position = cusp_position(fc);
            c.label = to_string(fc.rep);
            c.rep = fc.rep;
            c.scaling = cusp_scaling_matrix(fc.rep);
            c.width = 2L * g.n;
            c.base = fc.base();
            c.fermat = fc;
            out.push_back(c);
        }
        break;
    }
    }
    return out;
}

namespace detail {
/** @brief Slot of c in its Gamma(2) family, as in classify_cusp but without the witness. */
inline int gamma_n_slot(const Cuspi& c, Base b, int n)
{
    const Mat2i g = cusp_scaling_matrix(c);
    const Mat2i binv = inverse(base_scaling<i64>(b));
    Mat2i rho = g * binv;
    if (!is_in_gamma2(rho)) rho = g * translation<i64>(1) * binv;
    const auto [r1, r2] = gamma2_class(rho);
    switch (b) {
    case Base::Zero: return static_cast<int>(mod_floor<i64>(r1, n));
    case Base::One: return static_cast<int>(mod_floor<i64>(r1 + r2, n));
    default: return static_cast<int>(mod_floor<i64>(r2, n));
    }
}
} // namespace detail

/** @brief Position of the class of (p:q) in group_cusps(g). */
inline int cusp_class(const GroupId& g, const Cuspi& c)
{
    switch (g.kind) {
    case GroupId::Kind::Gamma1: return 0;
    case GroupId::Kind::Gamma2: return static_cast<int>(gamma2_base(c));
    default: {
        const Base b = gamma2_base(c);
        const int r = detail::gamma_n_slot(c, b, g.n);
        const int n = g.n;
        switch (b) {
        case Base::Zero: return r;
        case Base::One: return n + r;
        default: return 2 * n + (r == 0 ? n - 1 : r - 1);
        }
    }
    }
}

/** @brief Position of the cusp given as "p/q", "p", "inf" or a label. */
inline int find_cusp(const GroupId& g, const std::string& text)
{
    Cuspi c{1, 0};
    if (text != "inf" && text != "oo") {
        try {
            const auto slash = text.find('/');
            std::size_t pos = 0;
            if (slash == std::string::npos) {
                c = make_cusp<i64>(std::stoll(text, &pos), 1);
                if (pos != text.size()) throw InvalidArgument("bad cusp " + text);
            } else {
                const auto num = text.substr(0, slash), den = text.substr(slash + 1);
                std::size_t p1 = 0, p2 = 0;
                const long long p = std::stoll(num, &p1), q = std::stoll(den, &p2);
                if (p1 != num.size() || p2 != den.size()) throw InvalidArgument("bad cusp " + text);
                if (detail::gcd<i64>(p, q) != 1) throw InvalidArgument("cusp entries must be coprime: " + text);
                c = make_cusp<i64>(p, q);
            }
        } catch (const std::logic_error&) {
            throw InvalidArgument("bad cusp " + text);
        }
    }
    return cusp_class(g, c);
}

/** @brief Position of the Gamma_N cusp lying over the chart cusp infinity. */
inline int infinity_position(const GroupId& g) { return cusp_class(g, Cuspi{1, 0}); }

} // namespace klf
