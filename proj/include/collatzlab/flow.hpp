#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "collatzlab/residue.hpp"

namespace collatzlab {

/// One application of the map: w/2 for even w, 3w+1 for odd w. w >= 1.
inline BigNat collatz_step_value(const BigNat& w) {
    if (w < BigNat(1)) throw std::invalid_argument("collatz_step_value: w must be >= 1");
    if (w.is_even()) return w / BigNat(2);
    return BigNat(3) * w + BigNat(1);
}

/// The n-fold iterate restricted to one residue class: the domain is
/// {dom_offset + dom_modulus*t : t in N0} and the value there is
/// val_c + val_d*t. The value map is injective (val_d >= 1) and strictly
/// increasing in the class parameter t.
struct AffineBranch {
    BigNat dom_offset;
    BigNat dom_modulus;
    BigNat val_c;
    BigNat val_d;

    BigNat domain_element(const BigNat& t) const { return dom_offset + dom_modulus * t; }
    BigNat value_at(const BigNat& t) const { return val_c + val_d * t; }

    /// Value parity is constant in t exactly when val_d is even.
    bool parity_constant() const { return val_d.is_even(); }

    bool operator==(const AffineBranch&) const = default;
};

inline constexpr unsigned kDefaultStepBudget = 24;

/// Complete description of the n-fold iterate as affine branches whose
/// domains partition {1, 2, 3, ...}. Immutable; step() returns a new system.
class BranchSystem {
public:
    static BranchSystem initial() {
        BranchSystem s;
        s.step_index_ = 0;
        s.branches_ = {AffineBranch{BigNat(1), BigNat(1), BigNat(1), BigNat(1)}};
        return s;
    }

    static BranchSystem advanced_to(unsigned n, unsigned step_budget = kDefaultStepBudget) {
        BranchSystem s = initial();
        for (unsigned i = 0; i < n; ++i) s = s.step(step_budget);
        return s;
    }

    unsigned step_index() const { return step_index_; }
    const std::vector<AffineBranch>& branches() const { return branches_; }

    /// Apply the map symbolically once. Branches with t-dependent value
    /// parity (val_d odd) are first split into t = 2s and t = 2s + 1
    /// children (domain modulus doubles), then every branch applies the
    /// even rule (c + d*t)/2 or the odd rule 3c+1 + 3d*t. The domain
    /// partition and its density sum are preserved exactly.
    BranchSystem step(unsigned step_budget = kDefaultStepBudget) const {
        if (step_index_ + 1 > step_budget)
            throw BranchBudgetExceeded("branch system step budget (" +
                                       std::to_string(step_budget) + ") exceeded");
        BranchSystem next;
        next.step_index_ = step_index_ + 1;
        next.branches_.reserve(branches_.size() * 2);
        for (const AffineBranch& b : branches_) {
            if (b.parity_constant()) {
                next.branches_.push_back(apply_rule(b));
            } else {
                BigNat m2 = b.dom_modulus * BigNat(2);
                BigNat d2 = b.val_d * BigNat(2);
                next.branches_.push_back(apply_rule(
                    AffineBranch{b.dom_offset, m2, b.val_c, d2}));
                next.branches_.push_back(apply_rule(
                    AffineBranch{b.dom_offset + b.dom_modulus, m2, b.val_c + b.val_d, d2}));
            }
        }
        std::sort(next.branches_.begin(), next.branches_.end(),
                  [](const AffineBranch& x, const AffineBranch& y) {
                      return x.dom_offset < y.dom_offset;
                  });
        return next;
    }

    ClassUnion domain_union() const {
        std::vector<ArithClass> cs;
        cs.reserve(branches_.size());
        for (const auto& b : branches_) cs.emplace_back(b.dom_offset, b.dom_modulus);
        return ClassUnion::of_classes(cs);
    }

private:
    // Precondition: b has constant value parity.
    static AffineBranch apply_rule(const AffineBranch& b) {
        if (b.val_c.is_even())
            return AffineBranch{b.dom_offset, b.dom_modulus,
                                b.val_c / BigNat(2), b.val_d / BigNat(2)};
        return AffineBranch{b.dom_offset, b.dom_modulus,
                            BigNat(3) * b.val_c + BigNat(1), BigNat(3) * b.val_d};
    }

    unsigned step_index_ = 0;
    std::vector<AffineBranch> branches_;
};

/// Exact density of {k : n-th iterate of k is j (mod q)} for each j.
/// Per branch, c + d*t mod q cycles with period q/gcd(d, q); residues are
/// counted over one period and weighted by the branch's domain density.
/// The returned masses cover every residue 0..q-1 and sum to exactly 1.
inline std::map<BigNat, Rat> residue_distribution(const BranchSystem& s, const BigNat& q) {
    if (q < BigNat(2)) throw std::invalid_argument("residue_distribution: q must be >= 2");
    std::map<BigNat, Rat> dist;
    for (BigNat j(0); j < q; ++j) dist.emplace(j, Rat(0));
    for (const AffineBranch& b : s.branches()) {
        BigNat g = gcd(b.val_d % q, q);
        BigNat period = q / g;
        Rat weight(BigNat(1), period * b.dom_modulus);
        BigNat r = b.val_c % q;
        BigNat step = b.val_d % q;
        for (BigNat t(0); t < period; ++t) {
            dist.at(r) += weight;
            r = (r + step) % q;
        }
    }
    return dist;
}

/// Exact preimage {k : n-th iterate of k lies in target}, as a normalized
/// union. For a branch (p, m, c, d) and a target class a (mod B), the
/// parameters t with c + d*t = a (mod B) form a progression of modulus
/// B/gcd(d, B) when gcd(d, B) divides a - c, else are empty.
inline ClassUnion preimage_union(const BranchSystem& s, const ClassUnion& target) {
    if (target.is_empty()) return ClassUnion::empty_set();
    const BigNat& B = target.common_modulus();
    std::vector<ArithClass> parts;
    for (const AffineBranch& b : s.branches()) {
        BigNat g = gcd(b.val_d % B, B);
        BigNat beta = B / g;
        for (const BigNat& a : target.offsets()) {
            BigInt diff = a.as_int() - b.val_c.as_int();
            if (!mod_floor(diff, g).is_zero()) continue;
            BigNat t0 = mod_floor((diff / g.as_int()) *
                                  mod_inverse((b.val_d / g) % beta, beta).as_int(), beta);
            parts.emplace_back(b.dom_offset + b.dom_modulus * t0, b.dom_modulus * beta);
        }
    }
    return ClassUnion::of_classes(parts);
}

/// density(one-step preimage of post intersected with pre) / density(pre).
inline Rat one_step_conditional(const ClassUnion& pre, const ClassUnion& post) {
    Rat pre_density = density(pre);
    if (pre_density.is_zero()) throw ConditionOnNull();
    BranchSystem one = BranchSystem::initial().step();
    ClassUnion hit = intersect(preimage_union(one, post), pre);
    return density(hit) / pre_density;
}

/// Image of one application of the map on a class of even modulus (so the
/// parity is constant on the class): {a + r*t} maps to {a/2 + (r/2)*t} or
/// {3a+1 + 3r*t}.
inline ArithClass image_of_class(const ArithClass& c) {
    if (c.modulus().is_odd())
        throw std::invalid_argument("image_of_class: modulus must be even (constant parity)");
    if (c.offset().is_even())
        return ArithClass(c.offset() / BigNat(2), c.modulus() / BigNat(2));
    return ArithClass(BigNat(3) * c.offset() + BigNat(1), BigNat(3) * c.modulus());
}

struct ImageIdentity {
    ArithClass input;                  // a class mod 3
    std::vector<ArithClass> computed;  // images of its even/odd halves mod 6
    std::vector<ArithClass> expected;
    bool pass = false;
};

struct ImageIdentityReport {
    std::vector<ImageIdentity> identities;
    bool all_pass = false;
};

/// Verifies, by symbolic application of the map to each class mod 6, how
/// the three classes mod 3 map forward:
///   image(3N)   = 3N      u  18N+10
///   image(3N+1) = 3N+2    u  18N+4
///   image(3N+2) = 3N+1    u  18N+16
inline ImageIdentityReport image_identity_check() {
    ImageIdentityReport report;
    report.all_pass = true;
    const std::array<std::vector<ArithClass>, 3> expected = {{
        {ArithClass(BigNat(0), BigNat(3)), ArithClass(BigNat(10), BigNat(18))},
        {ArithClass(BigNat(2), BigNat(3)), ArithClass(BigNat(4), BigNat(18))},
        {ArithClass(BigNat(1), BigNat(3)), ArithClass(BigNat(16), BigNat(18))},
    }};
    for (unsigned j = 0; j < 3; ++j) {
        ImageIdentity id{ArithClass(BigNat(j), BigNat(3)), {}, expected[j], false};
        id.computed.push_back(image_of_class(ArithClass(BigNat(j), BigNat(6))));
        id.computed.push_back(image_of_class(ArithClass(BigNat(j + 3), BigNat(6))));
        id.pass = ClassUnion::of_classes(id.computed) == ClassUnion::of_classes(id.expected);
        report.all_pass = report.all_pass && id.pass;
        report.identities.push_back(std::move(id));
    }
    return report;
}

/// Index over a system's branches for O(#moduli) point lookups: for each
/// modulus m present, branch offsets lie in [1, m] so the covering branch
/// of k has offset ((k-1) mod m) + 1.
class BranchLocator {
public:
    explicit BranchLocator(const BranchSystem& s) : system_(&s) {
        for (std::size_t i = 0; i < s.branches().size(); ++i) {
            const AffineBranch& b = s.branches()[i];
            by_modulus_[b.dom_modulus][b.dom_offset] = i;
        }
    }

    struct Hit {
        std::size_t branch_index;
        BigNat t;
    };

    /// The unique branch whose domain contains k (k >= 1).
    std::optional<Hit> locate(const BigNat& k) const {
        for (const auto& [m, table] : by_modulus_) {
            BigNat off = (k - BigNat(1)) % m + BigNat(1);
            auto it = table.find(off);
            if (it == table.end()) continue;
            const AffineBranch& b = system_->branches()[it->second];
            if (k < b.dom_offset) continue;
            return Hit{it->second, (k - b.dom_offset) / m};
        }
        return std::nullopt;
    }

private:
    const BranchSystem* system_;
    std::map<BigNat, std::map<BigNat, std::size_t>> by_modulus_;
};

/// Brute-force counts of {k <= max_k : n-th iterate of k is j (mod q)},
/// by direct iteration. The finite-window cross-check for the exact
/// branch-engine densities.
inline std::map<BigNat, std::uint64_t> empirical_residue_counts(unsigned n, const BigNat& q,
                                                                std::uint64_t max_k) {
    if (q < BigNat(2)) throw std::invalid_argument("empirical_residue_counts: q must be >= 2");
    std::map<BigNat, std::uint64_t> counts;
    for (BigNat j(0); j < q; ++j) counts.emplace(j, 0);
    for (std::uint64_t k = 1; k <= max_k; ++k) {
        BigNat v(k);
        for (unsigned i = 0; i < n; ++i) v = collatz_step_value(v);
        ++counts.at(v % q);
    }
    return counts;
}

} // namespace collatzlab
