#pragma once

#include <array>
#include <string>
#include <vector>

#include "group.hpp"
#include "sl2.hpp"

namespace klf {

/** @brief Gamma(2)-class of a cusp: the classes of 0, 1 and infinity. */
enum class Base { Zero, One, Inf };

/** @brief Ramification family a_j, b_j, c_j of the Belyi map; A lies over 0, B over 1, C over infinity. */
enum class Kind { A, B, C };

inline Base base_of(Kind k) { return k == Kind::A ? Base::Zero : (k == Kind::B ? Base::One : Base::Inf); }
inline Kind kind_of(Base b) { return b == Base::Zero ? Kind::A : (b == Base::One ? Kind::B : Kind::C); }

inline const char* to_string(Kind k) { return k == Kind::A ? "A" : (k == Kind::B ? "B" : "C"); }
inline const char* to_string(Base b) { return b == Base::Zero ? "0" : (b == Base::One ? "1" : "inf"); }

/** @brief Parity classification: q even -> infinity, p even -> 0, both odd -> 1. */
template <class Int>
Base gamma2_base(const Cusp<Int>& c)
{
    if (c.q % 2 == 0) return Base::Inf;
    if (c.p % 2 == 0) return Base::Zero;
    return Base::One;
}

template <class Int>
Cusp<Int> base_cusp(Base b)
{
    switch (b) {
    case Base::Zero: return {Int(0), Int(1)};
    case Base::One: return {Int(1), Int(1)};
    default: return {Int(1), Int(0)};
    }
}

/** @brief Scaling matrix of the base cusp: S, TS or the identity. */
template <class Int>
Mat2<Int> base_scaling(Base b) { return cusp_scaling_matrix(base_cusp<Int>(b)); }

/** @brief Monomial eps^e zeta^z (or 0) with eps = exp(i pi / N), zeta = eps^2. */
struct RootMonomial {
    bool zero = false;
    int eps = 0;
    int zeta = 0;
};

/** @brief Ramification point of the Belyi map with symbolic coordinates. */
struct RamPoint {
    int n = 1;
    Kind kind = Kind::A;
    int index = 0;
    std::array<RootMonomial, 3> coords{};

    Base beta_image() const { return base_of(kind); }

    std::string to_string() const
    {
        std::string s = "(";
        for (int i = 0; i < 3; ++i) {
            const auto& m = coords[i];
            if (i) s += ":";
            if (m.zero) {
                s += "0";
            } else if (m.eps == 0 && m.zeta == 0) {
                s += "1";
            } else {
                std::string t;
                if (m.eps) t += "eps";
                if (m.zeta) t += (t.empty() ? "" : "*") + std::string("zeta^") + std::to_string(m.zeta);
                s += t;
            }
        }
        return s + ")";
    }
};

/** @brief Cusp of Gamma_N: representative, slot in its family and ramification label. */
struct FermatCusp {
    int n = 1;
    Kind kind = Kind::A;
    int index = 0;
    Cuspi rep{};
    int slot = 0;

    Base base() const { return base_of(kind); }

    bool operator==(const FermatCusp& o) const { return n == o.n && kind == o.kind && index == o.index && rep == o.rep; }
    bool operator!=(const FermatCusp& o) const { return !(*this == o); }
};

/**
 * @brief Cusp of Gamma_N in the family of base b at slot r in [0, N).
 *
 * Representatives are 2r, 2r + 1 and 1/(2r) (infinity for r = 0). The
 * ramification index is (N - r) mod N in all three families.
 */
inline FermatCusp fermat_cusp(int n, Base b, int r)
{
    if (n < 1 || r < 0 || r >= n) throw InvalidArgument("slot out of range");
    FermatCusp fc;
    fc.n = n;
    fc.kind = kind_of(b);
    fc.slot = r;
    fc.index = (n - r) % n;
    switch (b) {
    case Base::Zero: fc.rep = {2LL * r, 1}; break;
    case Base::One: fc.rep = {2LL * r + 1, 1}; break;
    default: fc.rep = r == 0 ? Cuspi{1, 0} : Cuspi{1, 2LL * r}; break;
    }
    return fc;
}

/** @brief Representatives S_0, S_1, S_inf in the order 0..2N-2, 1..2N-1, 1/2..1/(2N-2), infinity. */
inline std::vector<FermatCusp> cusp_reps(int n)
{
    if (n < 1) throw InvalidArgument("level must be positive");
    std::vector<FermatCusp> out;
    out.reserve(3 * n);
    for (int r = 0; r < n; ++r) out.push_back(fermat_cusp(n, Base::Zero, r));
    for (int r = 0; r < n; ++r) out.push_back(fermat_cusp(n, Base::One, r));
    for (int r = 1; r <= n; ++r) out.push_back(fermat_cusp(n, Base::Inf, r % n));
    return out;
}

/** @brief Position of fc in cusp_reps(fc.n). */
inline int cusp_position(const FermatCusp& fc)
{
    switch (fc.base()) {
    case Base::Zero: return fc.slot;
    case Base::One: return fc.n + fc.slot;
    default: return 2 * fc.n + (fc.slot == 0 ? fc.n - 1 : fc.slot - 1);
    }
}

/** @brief Cusp of level n from its ramification label. */
inline FermatCusp fermat_cusp_from_label(int n, Kind k, int index)
{
    if (index < 0 || index >= n) throw InvalidArgument("ramification index out of range");
    return fermat_cusp(n, base_of(k), (n - index) % n);
}

inline RamPoint ramification_point(const FermatCusp& fc)
{
    RamPoint rp;
    rp.n = fc.n;
    rp.kind = fc.kind;
    rp.index = fc.index;
    RootMonomial zero{true, 0, 0}, one{false, 0, 0}, root{false, 0, fc.index};
    switch (fc.kind) {
    case Kind::A: rp.coords = {zero, root, one}; break;
    case Kind::B: rp.coords = {root, zero, one}; break;
    default: rp.coords = {RootMonomial{false, 1, fc.index}, one, zero}; break;
    }
    return rp;
}

template <class Int>
struct Classification {
    FermatCusp cusp;
    Mat2<Int> witness;
};

/**
 * @brief Gamma_N-class of c with a witness in Gamma_N mapping the representative to c.
 *
 * A matrix rho in Gamma(2) with rho(base) = c is built from the scaling
 * matrix of c; the class is read off from its exponent sums modulo the
 * stabilizer of the base cusp (gamma2 at 0, gamma2 gamma1^-1 at 1, gamma1 at infinity).
 */
template <class Int>
Classification<Int> classify_cusp(const Cusp<Int>& c, int n)
{
    if (n < 1) throw InvalidArgument("level must be positive");
    const Base b = gamma2_base(c);
    const Mat2<Int> g = cusp_scaling_matrix(c);
    const Mat2<Int> binv = inverse(base_scaling<Int>(b));
    Mat2<Int> rho = g * binv;
    if (!is_in_gamma2(rho)) rho = g * translation<Int>(Int(1)) * binv;
    auto [r1, r2] = gamma2_class(rho);
    const Int N(n);
    const Mat2<Int> g1 = gamma1<Int>(), g2 = gamma2<Int>();
    Classification<Int> out;
    int r = 0;
    switch (b) {
    case Base::Zero:
        r = static_cast<int>(detail::mod_floor(r1, N));
        out.witness = rho * power_big(g2, Int(-r2)) * power(g1, -r);
        break;
    case Base::One:
        r = static_cast<int>(detail::mod_floor(Int(r1 + r2), N));
        out.witness = rho * power_big(g2 * inverse(g1), Int(-r2)) * power(g1, -r);
        break;
    default:
        r = static_cast<int>(detail::mod_floor(r2, N));
        out.witness = rho * power_big(g1, Int(-r1)) * power(g2, -r);
        break;
    }
    out.cusp = fermat_cusp(n, b, r);
    out.witness = canonical(out.witness);
    return out;
}

/** @brief Coset representatives gamma1^a gamma2^b of Gamma_N in Gamma(2), lexicographic in (a, b). */
template <class Int = BigInt>
std::vector<Mat2<Int>> coset_reps(int n)
{
    if (n < 1) throw InvalidArgument("level must be positive");
    std::vector<Mat2<Int>> out;
    out.reserve(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) out.push_back(power(gamma1<Int>(), a) * power(gamma2<Int>(), b));
    return out;
}

/** @brief Explicit Gamma_N element identifying two cusps. */
struct WitnessWord {
    std::string label;
    CuspZ from;
    CuspZ to;
    GammaWord<BigInt> word;
};

namespace detail {
inline void push_power(GammaWord<BigInt>& w, std::initializer_list<std::pair<int, int>> base, long long k)
{
    if (k >= 0) {
        for (long long i = 0; i < k; ++i)
            for (auto& [g, e] : base) w.push(g, BigInt(e));
    } else {
        for (long long i = 0; i < -k; ++i)
            for (auto it = std::rbegin(base); it != std::rend(base); ++it) w.push(it->first, BigInt(-it->second));
    }
}
} // namespace detail

/**
 * @brief The five families of cusp identifications used to move scattering constants between cusps.
 *
 * Families: -l ~ 2N-l, -1/j ~ 1/(2N-j), -1/k ~ 2N-k, (j-1)/j ~ 1/j,
 * (k-1)/k ~ 2N-k+1 with j, l even in [2, 2N] and k odd in [1, 2N-1].
 */
inline std::vector<WitnessWord> proof_witnesses(int n)
{
    std::vector<WitnessWord> out;
    const long long N = n;
    auto cz = [](long long p, long long q) { return make_cusp<BigInt>(BigInt(p), BigInt(q)); };
    for (long long l = 2; l <= 2 * N; l += 2) {
        WitnessWord w{"-l~2N-l", cz(-l, 1), cz(2 * N - l, 1), {}};
        w.word.push(1, BigInt(N));
        out.push_back(w);
    }
    for (long long j = 2; j <= 2 * N; j += 2) {
        WitnessWord w{"-1/j~1/(2N-j)", cz(-1, j), cz(1, 2 * N - j), {}};
        w.word.push(2, BigInt(N));
        out.push_back(w);
    }
    for (long long k = 1; k < 2 * N; k += 2) {
        WitnessWord w{"-1/k~2N-k", cz(-1, k), cz(2 * N - k, 1), {}};
        const long long h = (k + 1) / 2;
        w.word.push(1, BigInt(N - h));
        detail::push_power(w.word, {{2, 1}, {1, -1}}, -h);
        w.word.push(2, BigInt(h));
        out.push_back(w);
    }
    for (long long j = 2; j <= 2 * N; j += 2) {
        WitnessWord w{"(j-1)/j~1/j", cz(j - 1, j), cz(1, j), {}};
        w.word.push(2, BigInt(j / 2));
        w.word.push(1, BigInt((2 * N - j) / 2));
        detail::push_power(w.word, {{1, 1}, {2, -1}}, j / 2);
        out.push_back(w);
    }
    for (long long k = 1; k < 2 * N; k += 2) {
        WitnessWord w{"(k-1)/k~2N-k+1", cz(k - 1, k), cz(2 * N - k + 1, 1), {}};
        w.word.push(1, BigInt((2 * N - k + 1) / 2));
        w.word.push(2, BigInt((k - 1) / 2));
        detail::push_power(w.word, {{2, 1}, {1, -1}}, (1 - k) / 2);
        out.push_back(w);
    }
    return out;
}

} // namespace klf
