#pragma once

#include <string>

#include "sl2.hpp"

namespace klf {

/** @brief One of Gamma(1), Gamma(2) or the Fermat group Gamma_N. */
struct GroupId {
    enum class Kind { Gamma1, Gamma2, GammaN };
    Kind kind = Kind::Gamma2;
    int n = 1;

    static GroupId gamma1() { return {Kind::Gamma1, 1}; }
    static GroupId gamma2() { return {Kind::Gamma2, 1}; }
    static GroupId gamma_n(int n)
    {
        if (n < 1) throw InvalidArgument("level must be positive");
        return {Kind::GammaN, n};
    }

    bool operator==(const GroupId& o) const { return kind == o.kind && n == o.n; }
    bool operator!=(const GroupId& o) const { return !(*this == o); }

    /** @brief [Gamma(1) : group]. */
    long long index() const
    {
        switch (kind) {
        case Kind::Gamma1: return 1;
        case Kind::Gamma2: return 6;
        default: return 6LL * n * n;
        }
    }

    /** @brief Common width of all cusps. */
    long long width() const
    {
        switch (kind) {
        case Kind::Gamma1: return 1;
        case Kind::Gamma2: return 2;
        default: return 2LL * n;
        }
    }

    double volume() const;

    template <class Int>
    bool contains(const Mat2<Int>& m) const
    {
        switch (kind) {
        case Kind::Gamma1: return m.det() == 1;
        case Kind::Gamma2: return is_in_gamma2(m);
        default: return is_in_gamma_n(m, n);
        }
    }

    std::string name() const
    {
        switch (kind) {
        case Kind::Gamma1: return "Gamma1";
        case Kind::Gamma2: return "Gamma2";
        default: return "GammaN(" + std::to_string(n) + ")";
        }
    }
};

/** @brief Hyperbolic volume pi [Gamma(1):G] / 3. */
inline double GroupId::volume() const { return 3.14159265358979323846 * static_cast<double>(index()) / 3.0; }

/** @brief Index, volume and residue 1/vol of the Eisenstein pole at s = 1. */
struct VolumeData {
    long long index;
    double vol;
    double residue;
};

inline VolumeData volume_data(const GroupId& g)
{
    const double v = g.volume();
    return {g.index(), v, 1.0 / v};
}

template <class Int>
long long cusp_width(const GroupId& g, const Cusp<Int>&) { return g.width(); }

} // namespace klf
