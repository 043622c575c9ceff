#pragma once

#include <array>
#include <string>
#include <utility>

#include "collatzlab/chain.hpp"
#include "collatzlab/trajectory.hpp"

namespace collatzlab {

inline const std::string kConjectureAssumption = "Collatz conjecture";
inline const std::string kMixingAssumption = "asymptotic mixing property mod 3";

/// Which variable of f(step_index, start_point) the inner integral runs
/// over when the repeated integral is evaluated.
enum class Inner {
    StepIndex,   // inner integral over the orbit step index, outer over starts
    StartPoint,  // inner integral over starting points, outer over the index
};

struct RepeatedIntegralReport {
    std::string function_tag;  // "even" or "mod3_one"
    Inner inner;
    Rat value;
    std::vector<std::string> assumptions;
};

namespace detail {

// 0/1 pattern of a residue predicate over the cycle reached from 1,
// starting the period at the block's canonical rotation.
inline std::vector<bool> cycle_pattern(const ResiduePredicate& pred) {
    std::vector<bool> pattern;
    for (const BigNat& v : detect_cycle(BigNat(1)).block) pattern.push_back(pred.matches(v));
    return pattern;
}

inline RepeatedIntegralReport repeated_integral(const std::string& tag,
                                                const ConvergentSeq& per_step_density,
                                                const ResiduePredicate& pred, Inner inner,
                                                bool assume_conjecture) {
    RepeatedIntegralReport report;
    report.function_tag = tag;
    report.inner = inner;
    if (inner == Inner::StartPoint) {
        // For a fixed step index n the inner integral is the density of
        // starts whose n-th iterate satisfies the predicate; the outer
        // integral of that convergent sequence is its limit. No orbit
        // assumption is involved in this order.
        (void)assume_conjecture;
        report.value = integral_of_convergent(per_step_density);
        return report;
    }
    // Inner integral over the step index needs every orbit to reach the
    // cycle, so that the per-start value is the eventually periodic cycle
    // frequency, constant across starts.
    if (!assume_conjecture)
        throw AssumptionRequired("inner integral over the step index requires the "
                                 "every-orbit-reaches-the-cycle assumption");
    Rat per_start = eventually_periodic_density({}, cycle_pattern(pred));
    report.value = integral_of_convergent(ConvergentSeq::constant(per_start));
    report.assumptions.push_back(kConjectureAssumption);
    return report;
}

} // namespace detail

/// Repeated integral of the indicator of "the step-index-th iterate of the
/// start is even". Both orders yield 2/3: the closed-form per-step density
/// converges to 2/3, and every orbit's parity pattern on the cycle is
/// even, even, odd.
inline RepeatedIntegralReport repeated_integral_even(Inner inner, bool assume_conjecture) {
    // per-step even density: 2/3 - (1/6)(-1/2)^n
    return detail::repeated_integral(
        "even", ConvergentSeq::geometric(Rat(2, 3), Rat(-1, 6), Rat(-1, 2)),
        ResiduePredicate::even(), inner, assume_conjecture);
}

/// Repeated integral of the indicator of "the iterate is 1 mod 3". The two
/// orders disagree: 3/5 with the inner integral over starts versus 2/3
/// with the inner integral over the step index.
inline RepeatedIntegralReport repeated_integral_mod3(Inner inner, bool assume_conjecture) {
    // per-step model density: 3/5 - (4/15)(-1/4)^n
    return detail::repeated_integral(
        "mod3_one", ConvergentSeq::geometric(Rat(3, 5), Rat(-4, 15), Rat(-1, 4)),
        ResiduePredicate::one_mod3(), inner, assume_conjecture);
}

/// Orbit re-grouped into consecutive triples
/// (value at 3m, value at 3m+1, value at 3m+2) for m = 0..blocks-1.
inline std::vector<std::array<BigNat, 3>> triple_block_encoding(const BigNat& start,
                                                                std::size_t blocks,
                                                                TrajectoryBudget budget = {}) {
    Orbit orbit(start, budget);
    std::vector<std::array<BigNat, 3>> out;
    out.reserve(blocks);
    for (std::size_t m = 0; m < blocks; ++m)
        out.push_back({orbit.at(3 * m), orbit.at(3 * m + 1), orbit.at(3 * m + 2)});
    return out;
}

namespace detail {

// Rational bracket [lo, hi] around sqrt(q) with hi - lo <= 2^-precision.
inline std::pair<Rat, Rat> sqrt_bracket(const Rat& q, unsigned precision) {
    if (q.sign() < 0) throw std::invalid_argument("sqrt_bracket: negative argument");
    if (q.is_zero()) return {Rat(0), Rat(0)};
    // sqrt(a/b) = sqrt(a*b)/b; scale by 4^precision before the integer root.
    BigNat a(q.num());
    BigNat b(q.den());
    BigNat scaled = isqrt(a * b * pow2(2 * precision));
    BigNat denom = b * pow2(precision);
    Rat lo(scaled, denom);
    Rat hi(scaled + BigNat(1), denom);
    return {lo, hi};
}

} // namespace detail

/// Bounds on the product-metric distance
///   sum_n ||x_n - y_n|| / (2^(n+1) (1 + ||x_n - y_n||))
/// between two sequences of rational triples: the partial sum over
/// n < terms gives the lower bound, the upper bound adds the exact tail
/// estimate 2^-terms. Euclidean norms are bracketed by rationals tight
/// enough (width 2^-(terms+n+32)) that the reported gap stays within
/// 2^-terms + 2^-(terms+30).
inline std::pair<Rat, Rat> tychonoff_distance(const std::vector<std::array<Rat, 3>>& x,
                                              const std::vector<std::array<Rat, 3>>& y,
                                              unsigned terms) {
    if (terms < 1) throw std::invalid_argument("tychonoff_distance: terms must be >= 1");
    if (x.size() < terms || y.size() < terms)
        throw std::invalid_argument("tychonoff_distance: need at least `terms` triples");
    Rat lower(0), upper(0);
    for (unsigned n = 0; n < terms; ++n) {
        Rat sq(0);
        for (int i = 0; i < 3; ++i) {
            Rat d = x[n][i] - y[n][i];
            sq += d * d;
        }
        auto [lo, hi] = detail::sqrt_bracket(sq, terms + n + 32);
        Rat w(BigNat(1), pow2(n + 1));
        // s/(1+s) is increasing in s, so the brackets transfer directly.
        lower += w * (lo / (Rat(1) + lo));
        upper += w * (hi / (Rat(1) + hi));
    }
    upper += Rat(BigNat(1), pow2(terms));
    return {lower, upper};
}

inline std::vector<std::array<Rat, 3>> to_rational_triples(
    const std::vector<std::array<BigNat, 3>>& xs) {
    std::vector<std::array<Rat, 3>> out;
    out.reserve(xs.size());
    for (const auto& t : xs) out.push_back({Rat(t[0]), Rat(t[1]), Rat(t[2])});
    return out;
}

/// Empirical table of phase-limit frequencies: for each index class
/// i in {0,1,2} and cycle value v in {1,2,4}, the fraction of starts
/// k <= sample_size whose phase limit along i is v. Starts that blow the
/// budget are excluded and counted.
struct NuTable {
    std::array<std::map<std::uint64_t, std::uint64_t>, 3> counts;
    std::uint64_t sample_size = 0;
    std::uint64_t excluded = 0;

    std::uint64_t included() const { return sample_size - excluded; }

    Rat nu(unsigned i, std::uint64_t v) const {
        if (i > 2) throw std::invalid_argument("NuTable::nu: index class must be 0..2");
        if (included() == 0) throw std::invalid_argument("NuTable::nu: empty sample");
        auto it = counts[i].find(v);
        std::uint64_t c = it == counts[i].end() ? 0 : it->second;
        return Rat(BigNat(c), BigNat(included()));
    }
};

inline NuTable empirical_nu_table(std::uint64_t max_k, TrajectoryBudget budget = {}) {
    if (max_k < 1) throw std::invalid_argument("empirical_nu_table: need max_k >= 1");
    NuTable table;
    table.sample_size = max_k;
    for (std::uint64_t k = 1; k <= max_k; ++k) {
        try {
            std::array<BigNat, 3> limits = phase_limits(BigNat(k), budget);
            for (unsigned i = 0; i < 3; ++i) ++table.counts[i][limits[i].to_u64()];
        } catch (const TrajectoryBudgetExceeded&) {
            ++table.excluded;
        }
    }
    return table;
}

inline Rat empirical_nu(unsigned i, std::uint64_t v, std::uint64_t max_k,
                        TrajectoryBudget budget = {}) {
    return empirical_nu_table(max_k, budget).nu(i, v);
}

/// The three cyclic identities nu_0(4)=nu_1(2)=nu_2(1), nu_0(2)=nu_1(1)=
/// nu_2(4), nu_0(1)=nu_1(4)=nu_2(2), which hold tautologically because
/// each orbit's phase-limit triple is a rotation of (4,2,1).
inline bool rotation_relation_holds(const NuTable& t) {
    const std::array<std::array<std::uint64_t, 3>, 3> chains = {{{4, 2, 1}, {2, 1, 4}, {1, 4, 2}}};
    for (const auto& c : chains) {
        Rat v = t.nu(0, c[0]);
        if (t.nu(1, c[1]) != v || t.nu(2, c[2]) != v) return false;
    }
    return true;
}

/// The symbolic impossibility argument plus an empirical table.
struct MixingReport {
    NuTable empirical;
    bool rotation_relation_holds = false;
    // forced by the limit odd-frequency 1/3 under the mixing hypotheses:
    // every nu_i(v) equals forced_uniform_value
    Rat forced_uniform_value;
    std::array<std::array<Rat, 3>, 3> forced_table;  // [i][v-index over 4,2,1]
    // forced by the limit mod-3 frequency: nu_i({1,4}) = 3/5
    Rat mass_one_and_four;
    std::pair<Rat, Rat> contradiction_gap;  // (3/5, 2/3)
    std::vector<std::string> assumptions;
    std::string conclusion;
};

/// Reproduces the impossibility computation: under the mixing hypotheses
/// (and the every-orbit-reaches-the-cycle assumption) the limit odd
/// frequency 1/3 forces every phase-limit frequency to 1/3, while the
/// limit mod-3 frequency forces the mass of {1,4} to 3/5. But 3/5 differs
/// from 1/3 + 1/3 = 2/3, so the hypotheses are inconsistent.
inline MixingReport contradiction_report(std::uint64_t max_k = 1000,
                                         TrajectoryBudget budget = {}) {
    MixingReport report;
    report.empirical = empirical_nu_table(max_k, budget);
    report.rotation_relation_holds = rotation_relation_holds(report.empirical);

    // 1 is the only odd value on the cycle, so each nu_i(1) must equal the
    // limit odd frequency; the rotation identities spread it everywhere.
    report.forced_uniform_value = limit_distribution(parity_chain()).m1;
    for (auto& row : report.forced_table) row.fill(report.forced_uniform_value);

    // 1 and 4 are the cycle values that are 1 mod 3.
    report.mass_one_and_four = limit_distribution(mod3_chain()).m0;

    report.contradiction_gap = {report.mass_one_and_four,
                                report.forced_uniform_value + report.forced_uniform_value};
    report.assumptions = {kConjectureAssumption, kMixingAssumption};
    report.conclusion =
        "the hypotheses force every phase-limit frequency to 1/3 yet give the values "
        "{1,4} joint frequency 3/5 != 2/3; hence, if every orbit reaches the cycle, the "
        "map cannot have the asymptotic mixing property mod 3 - equivalently, if the "
        "repeated integrals of the mod-3 indicator agreed, some orbit would avoid the cycle";
    return report;
}

} // namespace collatzlab
