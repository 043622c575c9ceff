#pragma once

#include "collatzlab/flow.hpp"

namespace collatzlab {

/// Distribution over the two chain states; entries sum to 1.
struct DistVec2 {
    Rat m0;
    Rat m1;
    bool operator==(const DistVec2&) const = default;
};

/// 2x2 rational matrix with row-major entries.
struct Mat2 {
    Rat a00, a01, a10, a11;

    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        return Mat2{x.a00 * y.a00 + x.a01 * y.a10, x.a00 * y.a01 + x.a01 * y.a11,
                    x.a10 * y.a00 + x.a11 * y.a10, x.a10 * y.a01 + x.a11 * y.a11};
    }
    friend DistVec2 operator*(const DistVec2& v, const Mat2& m) {
        return DistVec2{v.m0 * m.a00 + v.m1 * m.a10, v.m0 * m.a01 + v.m1 * m.a11};
    }
    static Mat2 identity() { return Mat2{Rat(1), Rat(0), Rat(0), Rat(1)}; }
    bool operator==(const Mat2&) const = default;
};

/// Two-state homogeneous chain: row-stochastic transition matrix plus
/// initial distribution, all exact rationals. Validated on construction.
class Chain2 {
public:
    Chain2(Rat p00, Rat p01, Rat p10, Rat p11, Rat init0, Rat init1)
        : p00_(std::move(p00)), p01_(std::move(p01)), p10_(std::move(p10)),
          p11_(std::move(p11)), init0_(std::move(init0)), init1_(std::move(init1)) {
        auto in_unit = [](const Rat& r) { return Rat(0) <= r && r <= Rat(1); };
        if (!in_unit(p00_) || !in_unit(p01_) || !in_unit(p10_) || !in_unit(p11_) ||
            !in_unit(init0_) || !in_unit(init1_))
            throw std::invalid_argument("Chain2: entries must lie in [0, 1]");
        if (p00_ + p01_ != Rat(1) || p10_ + p11_ != Rat(1))
            throw std::invalid_argument("Chain2: rows must sum to 1");
        if (init0_ + init1_ != Rat(1))
            throw std::invalid_argument("Chain2: initial distribution must sum to 1");
    }

    const Rat& p00() const { return p00_; }
    const Rat& p01() const { return p01_; }
    const Rat& p10() const { return p10_; }
    const Rat& p11() const { return p11_; }
    DistVec2 init() const { return DistVec2{init0_, init1_}; }
    Mat2 matrix() const { return Mat2{p00_, p01_, p10_, p11_}; }

    bool operator==(const Chain2&) const = default;

private:
    Rat p00_, p01_, p10_, p11_;
    Rat init0_, init1_;
};

/// n-th matrix power by repeated multiplication (the oracle route).
inline Mat2 power_iterated(const Chain2& c, unsigned n) {
    Mat2 acc = Mat2::identity();
    for (unsigned i = 0; i < n; ++i) acc = acc * c.matrix();
    return acc;
}

/// n-th matrix power in closed form:
///   P^n = 1/(2-p00-p11) * [[1-p11, 1-p00], [1-p11, 1-p00]]
///       + (p00+p11-1)^n/(2-p00-p11) * [[1-p00, -(1-p00)], [-(1-p11), 1-p11]]
/// Falls back to iterated multiplication when the denominator vanishes
/// (p00 = p11 = 1, the identity chain).
inline Mat2 power_closed_form(const Chain2& c, unsigned n) {
    Rat denom = Rat(2) - c.p00() - c.p11();
    if (denom.is_zero()) return power_iterated(c, n);
    Rat q0 = (Rat(1) - c.p11()) / denom;
    Rat q1 = (Rat(1) - c.p00()) / denom;
    Rat s = (c.p00() + c.p11() - Rat(1)).pow(static_cast<long long>(n)) / denom;
    return Mat2{q0 + s * (Rat(1) - c.p00()), q1 - s * (Rat(1) - c.p00()),
                q0 - s * (Rat(1) - c.p11()), q1 + s * (Rat(1) - c.p11())};
}

/// Distribution after n steps: init row vector times the n-th power.
inline DistVec2 distribution_after(const Chain2& c, unsigned n) {
    return c.init() * power_closed_form(c, n);
}

/// The mixing limit ((1-p11)/(2-p00-p11), (1-p00)/(2-p00-p11)), which
/// exists exactly when |p00 + p11 - 1| < 1.
inline DistVec2 limit_distribution(const Chain2& c) {
    Rat s = c.p00() + c.p11() - Rat(1);
    if (!(s.abs() < Rat(1))) throw NoMixingLimit();
    Rat denom = Rat(2) - c.p00() - c.p11();
    return DistVec2{(Rat(1) - c.p11()) / denom, (Rat(1) - c.p00()) / denom};
}

/// The even/odd chain: states (value even, value odd).
inline Chain2 parity_chain() {
    return Chain2(Rat(1, 2), Rat(1, 2), Rat(1), Rat(0), Rat(1, 2), Rat(1, 2));
}

/// The mod-3 chain: states (value = 1 mod 3, value != 1 mod 3).
inline Chain2 mod3_chain() {
    return Chain2(Rat(1, 2), Rat(1, 2), Rat(3, 4), Rat(1, 4), Rat(1, 3), Rat(2, 3));
}

/// Closed form for the parity-chain distribution after n steps:
///   (2/3 + (-1)^(n+1)/(3*2^(n+1)), 1/3 + (-1)^n/(3*2^(n+1))).
inline DistVec2 parity_closed_form(unsigned n) {
    Rat term = Rat(1, 6) * Rat(-1, 2).pow(static_cast<long long>(n));
    return DistVec2{Rat(2, 3) - term, Rat(1, 3) + term};
}

/// Closed form for the mod-3 chain distribution after n >= 1 steps:
///   (3/5 + (-1)^(n+1)/(15*2^(2(n-1))), 2/5 + (-1)^n/(15*2^(2(n-1)))).
/// The n = 0 distribution is served by distribution_after.
inline DistVec2 mod3_closed_form(unsigned n) {
    if (n < 1) throw std::invalid_argument("mod3_closed_form: n must be >= 1");
    Rat term = Rat(4, 15) * Rat(-1, 4).pow(static_cast<long long>(n));
    return DistVec2{Rat(3, 5) - term, Rat(2, 5) + term};
}

struct DerivedChains {
    Chain2 parity;
    Chain2 mod3;
};

/// Construct both reference chains from first principles: transition
/// entries by exact one-step conditional densities on the defining
/// events, initial vectors by densities of the defining classes. Throws
/// DerivationMismatch if the result differs from the expected constants.
inline DerivedChains derived_chains() {
    const ClassUnion even = ClassUnion::single(ArithClass(BigNat(0), BigNat(2)));
    const ClassUnion odd = ClassUnion::single(ArithClass(BigNat(1), BigNat(2)));
    Chain2 parity(one_step_conditional(even, even), one_step_conditional(even, odd),
                  one_step_conditional(odd, even), one_step_conditional(odd, odd),
                  density(even), density(odd));

    const ClassUnion one_mod3 = ClassUnion::single(ArithClass(BigNat(1), BigNat(3)));
    const ClassUnion rest_mod3 = unite(ClassUnion::single(ArithClass(BigNat(0), BigNat(3))),
                                       ClassUnion::single(ArithClass(BigNat(2), BigNat(3))));
    Chain2 mod3(one_step_conditional(one_mod3, one_mod3),
                one_step_conditional(one_mod3, rest_mod3),
                one_step_conditional(rest_mod3, one_mod3),
                one_step_conditional(rest_mod3, rest_mod3),
                density(one_mod3), density(rest_mod3));

    if (parity != parity_chain())
        throw DerivationMismatch("derived parity chain differs from the reference matrix");
    if (mod3 != mod3_chain())
        throw DerivationMismatch("derived mod-3 chain differs from the reference matrix");
    return DerivedChains{parity, mod3};
}

} // namespace collatzlab
