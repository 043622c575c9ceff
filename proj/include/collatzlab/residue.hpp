#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "collatzlab/numeric.hpp"

namespace collatzlab {

/// Arithmetic progression {offset + modulus*t : t in N0}. modulus >= 1.
/// A raw class may carry offset >= modulus (e.g. after a shift); inside a
/// normalized ClassUnion offsets are always reduced below the modulus.
class ArithClass {
public:
    ArithClass(BigNat offset, BigNat modulus)
        : offset_(std::move(offset)), modulus_(std::move(modulus)) {
        if (modulus_ < BigNat(1)) throw std::invalid_argument("ArithClass: modulus must be >= 1");
    }

    const BigNat& offset() const { return offset_; }
    const BigNat& modulus() const { return modulus_; }

    bool contains(const BigNat& k) const {
        return k >= offset_ && ((k - offset_) % modulus_).is_zero();
    }

    /// #([1, m] intersect this), by counting formula (no enumeration).
    BigNat count_in_window(const BigNat& m) const {
        // first element >= 1 is offset itself, or modulus when offset = 0
        BigNat first = offset_.is_zero() ? modulus_ : offset_;
        if (first > m) return BigNat(0);
        return (m - first) / modulus_ + BigNat(1);
    }

    bool operator==(const ArithClass&) const = default;

private:
    BigNat offset_;
    BigNat modulus_;
};

/// Finite union of arithmetic progressions in canonical form: every member
/// class is refined to one common modulus, offsets are reduced below it,
/// sorted, and complete residue coverings are merged back to the minimal
/// period. Structural equality is then set equality (as residue classes;
/// offsets below a raw class's first element differ by finitely many
/// points, which never affect densities or [1,m] counting windows).
class ClassUnion {
public:
    ClassUnion() : modulus_(1) {}

    static ClassUnion empty_set() { return ClassUnion(); }

    static ClassUnion all_naturals() {
        return ClassUnion(BigNat(1), {BigNat(0)});
    }

    static ClassUnion single(const ArithClass& c) {
        return of_classes({c});
    }

    /// Union of the given classes, normalized. Overlaps are merged.
    static ClassUnion of_classes(const std::vector<ArithClass>& classes) {
        if (classes.empty()) return ClassUnion();
        BigNat L(1);
        for (const auto& c : classes) L = lcm(L, c.modulus());
        BigNat total_lifts(0);
        for (const auto& c : classes) total_lifts += L / c.modulus();
        check_refinement_budget(L, total_lifts);
        std::set<BigNat> offs;
        for (const auto& c : classes) {
            BigNat base = c.offset() % c.modulus();
            BigNat lifts = L / c.modulus();
            for (BigNat j(0); j < lifts; ++j)
                offs.insert(base + c.modulus() * j);
        }
        ClassUnion u(L, std::vector<BigNat>(offs.begin(), offs.end()));
        u.coarsen();
        return u;
    }

    const BigNat& common_modulus() const { return modulus_; }
    const std::vector<BigNat>& offsets() const { return offsets_; }
    std::size_t class_count() const { return offsets_.size(); }
    bool is_empty() const { return offsets_.empty(); }

    std::vector<ArithClass> classes() const {
        std::vector<ArithClass> out;
        out.reserve(offsets_.size());
        for (const auto& o : offsets_) out.emplace_back(o, modulus_);
        return out;
    }

    /// Residue-class membership for k >= 1.
    bool contains(const BigNat& k) const {
        BigNat r = k % modulus_;
        return std::binary_search(offsets_.begin(), offsets_.end(), r);
    }

    bool operator==(const ClassUnion&) const = default;

private:
    friend ClassUnion intersect(const ClassUnion&, const ClassUnion&);
    friend ClassUnion unite(const ClassUnion&, const ClassUnion&);
    friend ClassUnion shift(const ClassUnion&, const BigInt&);

    ClassUnion(BigNat modulus, std::vector<BigNat> offsets)
        : modulus_(std::move(modulus)), offsets_(std::move(offsets)) {}

    static void check_refinement_budget(const BigNat& L, const BigNat& total_lifts) {
        static const BigNat kMaxModulus = pow2(40);
        static const BigNat kMaxLifts = pow2(22);
        if (L > kMaxModulus || total_lifts > kMaxLifts)
            throw BudgetExceeded("class union refinement too large (modulus " + L.str() +
                                 ", " + total_lifts.str() + " refined classes)");
    }

    // Minimal-period reduction: find the smallest divisor r of the modulus
    // such that the offset set is invariant under +r, then fold onto r.
    void coarsen() {
        if (offsets_.empty()) { modulus_ = BigNat(1); return; }
        bool changed = true;
        while (changed) {
            changed = false;
            for (const BigNat& p : prime_factors(modulus_)) {
                BigNat candidate = modulus_ / p;
                if (candidate.is_zero() || !(modulus_ % p).is_zero()) continue;
                if (is_invariant_under(candidate)) {
                    fold_to(candidate);
                    changed = true;
                    break;
                }
            }
        }
    }

    bool is_invariant_under(const BigNat& r) const {
        for (const auto& o : offsets_) {
            BigNat moved = (o + r) % modulus_;
            if (!std::binary_search(offsets_.begin(), offsets_.end(), moved))
                return false;
        }
        return true;
    }

    void fold_to(const BigNat& r) {
        std::vector<BigNat> folded;
        for (const auto& o : offsets_) {
            if (o < r) folded.push_back(o);
        }
        offsets_ = std::move(folded);
        modulus_ = r;
    }

    // Distinct prime factors by trial division; a large leftover cofactor is
    // kept as a single unit (its inner structure only costs merge chances).
    static std::vector<BigNat> prime_factors(BigNat n) {
        std::vector<BigNat> out;
        static const BigNat kTrialCap(1u << 20);
        for (BigNat p(2); p * p <= n && p <= kTrialCap; ++p) {
            if ((n % p).is_zero()) {
                out.push_back(p);
                while ((n % p).is_zero()) n = n / p;
            }
        }
        if (n > BigNat(1)) out.push_back(n);
        return out;
    }

    BigNat modulus_;              // common modulus L >= 1
    std::vector<BigNat> offsets_; // sorted, distinct, each < L
};

/// Exact density: (number of classes) / (common modulus). This equals the
/// asymptotic density and, on this algebra, any shift-invariant probability.
inline Rat density(const ClassUnion& u) {
    if (u.is_empty()) return Rat(0);
    return Rat(BigNat(u.class_count()), u.common_modulus());
}

/// Exact intersection via CRT on each pair of member classes.
inline ClassUnion intersect(const ClassUnion& a, const ClassUnion& b) {
    if (a.is_empty() || b.is_empty()) return ClassUnion::empty_set();
    const BigNat& m1 = a.common_modulus();
    const BigNat& m2 = b.common_modulus();
    BigNat g = gcd(m1, m2);
    BigNat L = lcm(m1, m2);
    std::set<BigNat> offs;
    for (const auto& o1 : a.offsets()) {
        for (const auto& o2 : b.offsets()) {
            // solvable iff o1 = o2 (mod g); then unique residue mod L
            BigInt diff = o2.as_int() - o1.as_int();
            if (!(mod_floor(diff, g)).is_zero()) continue;
            // x = o1 + m1 * t,  t = ((o2-o1)/g) * inv(m1/g) (mod m2/g)
            BigNat m2g = m2 / g;
            BigNat t = mod_floor((diff / g.as_int()) * mod_inverse(m1 / g, m2g).as_int(), m2g);
            offs.insert((o1 + m1 * t) % L);
        }
    }
    ClassUnion u = ClassUnion::of_classes([&] {
        std::vector<ArithClass> cs;
        cs.reserve(offs.size());
        for (const auto& o : offs) cs.emplace_back(o, L);
        return cs;
    }());
    return u;
}

inline ClassUnion unite(const ClassUnion& a, const ClassUnion& b) {
    std::vector<ArithClass> cs = a.classes();
    const auto bc = b.classes();
    cs.insert(cs.end(), bc.begin(), bc.end());
    return ClassUnion::of_classes(cs);
}

/// Translate by k (possibly negative). Offsets rotate modulo the common
/// modulus; elements that a negative shift would push below zero are
/// dropped, which cannot change any density.
inline ClassUnion shift(const ClassUnion& u, const BigInt& k) {
    if (u.is_empty()) return u;
    std::vector<ArithClass> cs;
    cs.reserve(u.class_count());
    for (const auto& o : u.offsets())
        cs.emplace_back(mod_floor(o.as_int() + k, u.common_modulus()), u.common_modulus());
    return ClassUnion::of_classes(cs);
}

/// #([1, m] intersect u) / m, exact, by per-class counting formula.
inline Rat empirical_density(const ClassUnion& u, const BigNat& m) {
    if (m < BigNat(1)) throw std::invalid_argument("empirical_density: window must be >= 1");
    BigNat count(0);
    for (const auto& c : u.classes()) count += c.count_in_window(m);
    return Rat(count, m);
}

/// Descriptor of a rational sequence with a declared, certified limit.
/// Limits are never detected numerically: the caller certifies the family
/// (eventually constant, or geometric a + c*r^n with |r| < 1) and the
/// integral against any shift-invariant probability is the declared limit.
class ConvergentSeq {
public:
    static ConvergentSeq constant(Rat value) {
        ConvergentSeq s;
        s.limit_ = value;
        s.eval_ = [value](unsigned) { return value; };
        return s;
    }

    static ConvergentSeq eventually_constant(std::vector<Rat> prefix, Rat tail) {
        ConvergentSeq s;
        s.limit_ = tail;
        s.eval_ = [prefix = std::move(prefix), tail](unsigned n) {
            return n < prefix.size() ? prefix[n] : tail;
        };
        return s;
    }

    /// f(n) = limit + coefficient * ratio^n, requires |ratio| < 1.
    static ConvergentSeq geometric(Rat limit, Rat coefficient, Rat ratio) {
        if (!(ratio.abs() < Rat(1)))
            throw std::invalid_argument("ConvergentSeq::geometric: |ratio| must be < 1");
        ConvergentSeq s;
        s.limit_ = limit;
        s.eval_ = [limit, coefficient, ratio](unsigned n) {
            return limit + coefficient * ratio.pow(static_cast<long long>(n));
        };
        return s;
    }

    /// A descriptor with no declared limit; integrating it is an error.
    static ConvergentSeq undeclared(std::function<Rat(unsigned)> eval = {}) {
        ConvergentSeq s;
        s.eval_ = std::move(eval);
        return s;
    }

    bool has_declared_limit() const { return limit_.has_value(); }
    const Rat& declared_limit() const {
        if (!limit_) throw NotConvergent();
        return *limit_;
    }

    Rat eval(unsigned n) const {
        if (!eval_) throw std::invalid_argument("ConvergentSeq: no evaluator attached");
        return eval_(n);
    }

private:
    ConvergentSeq() = default;
    std::optional<Rat> limit_;
    std::function<Rat(unsigned)> eval_;
};

/// Integral of a convergent sequence against a shift-invariant probability
/// on N: finitely many indices are null, so the integral is the limit.
inline Rat integral_of_convergent(const ConvergentSeq& f) {
    if (!f.has_declared_limit()) throw NotConvergent();
    return f.declared_limit();
}

/// Density of {n : pattern(n)} for an eventually periodic 0/1 pattern:
/// the preperiod is finite hence null; the answer is ones/period-length.
inline Rat eventually_periodic_density(const std::vector<bool>& preperiod,
                                       const std::vector<bool>& period) {
    (void)preperiod;
    if (period.empty()) throw std::invalid_argument("eventually_periodic_density: empty period");
    std::size_t ones = 0;
    for (bool b : period) ones += b ? 1 : 0;
    return Rat(BigNat(ones), BigNat(period.size()));
}

} // namespace collatzlab
