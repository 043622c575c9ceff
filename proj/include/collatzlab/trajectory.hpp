#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "collatzlab/flow.hpp"

namespace collatzlab {

/// Per-orbit resource limits. Exhaustion throws TrajectoryBudgetExceeded,
/// a distinct non-fatal status: the tool reports "undecided", never
/// "divergent".
struct TrajectoryBudget {
    std::uint64_t max_steps = 100000;
    std::uint64_t max_bits = 1000000;
};

/// Simple residue predicate on orbit values: v = residue (mod modulus).
struct ResiduePredicate {
    BigNat modulus;
    BigNat residue;

    bool matches(const BigNat& v) const { return v % modulus == residue; }

    static ResiduePredicate even() { return {BigNat(2), BigNat(0)}; }
    static ResiduePredicate one_mod3() { return {BigNat(3), BigNat(1)}; }
};

struct CycleInfo {
    std::size_t entry = 0;       // first orbit index where block[0] occurs
    std::vector<BigNat> block;   // minimal repeating block, rotated to start
                                 // at its largest element
};

/// Lazily extended orbit of the map from a given start. The step function
/// defaults to the standard rule and can be replaced in tests. Once the
/// first repeated value is found the cycle is known and further indexing
/// costs no storage.
class Orbit {
public:
    using StepFn = std::function<BigNat(const BigNat&)>;

    explicit Orbit(BigNat start, TrajectoryBudget budget = {}, StepFn step = {})
        : budget_(budget), step_(step ? std::move(step) : StepFn(&collatz_step_value)) {
        if (start < BigNat(1)) throw std::invalid_argument("Orbit: start must be >= 1");
        values_.push_back(std::move(start));
        seen_.emplace(values_.front(), 0);
    }

    const BigNat& start() const { return values_.front(); }

    const BigNat& at(std::size_t i) {
        while (true) {
            if (cycle_ && i >= cycle_->entry)
                return cycle_->block[(i - cycle_->entry) % cycle_->block.size()];
            if (i < values_.size()) return values_[i];
            extend();
        }
    }

    /// Detects the cycle if not yet found, extending the orbit as needed.
    const CycleInfo& cycle() {
        while (!cycle_) extend();
        return *cycle_;
    }

    bool cycle_found() const { return cycle_.has_value(); }

    /// First index where the orbit equals target; nullopt when the orbit
    /// provably never reaches it (target not on the detected cycle).
    std::optional<std::uint64_t> first_index_of(const BigNat& target) {
        for (std::size_t i = 0;; ++i) {
            if (cycle_ && i >= cycle_->entry + cycle_->block.size()) return std::nullopt;
            if (at(i) == target) return i;
        }
    }

private:
    void extend() {
        if (cycle_) return;
        if (values_.size() >= budget_.max_steps)
            throw TrajectoryBudgetExceeded("orbit of " + values_.front().str() +
                                           " exceeded the step budget");
        BigNat next = step_(values_.back());
        if (bit_length(next) > budget_.max_bits)
            throw TrajectoryBudgetExceeded("orbit of " + values_.front().str() +
                                           " exceeded the bit-size budget");
        auto [it, inserted] = seen_.emplace(next, values_.size());
        if (!inserted) {
            found_cycle(it->second);
            return;
        }
        values_.push_back(std::move(next));
    }

    // The first repeated value marks the cycle: values_[first..end) is the
    // minimal repeating block. Canonicalize by rotating it to start at its
    // largest element.
    void found_cycle(std::size_t first) {
        std::vector<BigNat> block(values_.begin() + static_cast<std::ptrdiff_t>(first),
                                  values_.end());
        std::size_t top = 0;
        for (std::size_t i = 1; i < block.size(); ++i)
            if (block[i] > block[top]) top = i;
        std::rotate(block.begin(), block.begin() + static_cast<std::ptrdiff_t>(top),
                    block.end());
        cycle_ = CycleInfo{first + top, std::move(block)};
        seen_.clear();
    }

    TrajectoryBudget budget_;
    StepFn step_;
    std::vector<BigNat> values_;
    std::map<BigNat, std::size_t> seen_;
    std::optional<CycleInfo> cycle_;
};

/// Per-orbit counting statistics over an index window.
struct TrajectoryStats {
    std::uint64_t window = 0;
    std::uint64_t even_count = 0;
    std::uint64_t mod3_1_count = 0;
};

/// Counts of even values and of values = 1 (mod 3) among the first
/// `window` orbit entries, in one pass.
inline TrajectoryStats window_stats(const BigNat& start, std::uint64_t window,
                                    TrajectoryBudget budget = {}) {
    if (window == 0) throw std::invalid_argument("window_stats: window must be >= 1");
    Orbit orbit(start, budget);
    TrajectoryStats stats{window, 0, 0};
    for (std::uint64_t i = 0; i < window; ++i) {
        const BigNat& v = orbit.at(i);
        if (v.is_even()) ++stats.even_count;
        if (v % BigNat(3) == BigNat(1)) ++stats.mod3_1_count;
    }
    return stats;
}

/// n-th iterate of the map from start.
inline BigNat iterate(const BigNat& start, std::uint64_t n, TrajectoryBudget budget = {}) {
    if (n > budget.max_steps)
        throw TrajectoryBudgetExceeded("requested iterate index exceeds the step budget");
    BigNat v = start;
    if (v < BigNat(1)) throw std::invalid_argument("iterate: start must be >= 1");
    for (std::uint64_t i = 0; i < n; ++i) {
        v = collatz_step_value(v);
        if (bit_length(v) > budget.max_bits)
            throw TrajectoryBudgetExceeded("iterate exceeded the bit-size budget");
    }
    return v;
}

inline CycleInfo detect_cycle(const BigNat& start, TrajectoryBudget budget = {}) {
    Orbit orbit(start, budget);
    return orbit.cycle();
}

/// Number of steps until the orbit first reaches 1; nullopt when the orbit
/// enters a cycle not containing 1.
inline std::optional<std::uint64_t> steps_to_one(const BigNat& start,
                                                 TrajectoryBudget budget = {}) {
    Orbit orbit(start, budget);
    return orbit.first_index_of(BigNat(1));
}

/// Fraction of indices below the window where the predicate holds.
inline Rat cesaro_frequency(const BigNat& start, const ResiduePredicate& predicate,
                            std::uint64_t window, TrajectoryBudget budget = {}) {
    if (window == 0) throw std::invalid_argument("cesaro_frequency: window must be >= 1");
    Orbit orbit(start, budget);
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < window; ++i)
        if (predicate.matches(orbit.at(i))) ++hits;
    return Rat(BigNat(hits), BigNat(window));
}

inline Rat frequency_over_cycle(const std::vector<BigNat>& block,
                                const ResiduePredicate& predicate) {
    if (block.empty()) throw std::invalid_argument("frequency_over_cycle: empty block");
    std::uint64_t hits = 0;
    for (const auto& v : block)
        if (predicate.matches(v)) ++hits;
    return Rat(BigNat(hits), BigNat(block.size()));
}

/// The limit of the Cesaro frequencies: the predicate's exact frequency
/// over the detected cycle block.
inline Rat asymptotic_frequency(const BigNat& start, const ResiduePredicate& predicate,
                                TrajectoryBudget budget = {}) {
    return frequency_over_cycle(detect_cycle(start, budget).block, predicate);
}

namespace detail {

inline BigNat phase_limit_from(Orbit& orbit, unsigned i) {
    if (i > 2) throw std::invalid_argument("phase_limit: index class must be 0, 1 or 2");
    const CycleInfo& c = orbit.cycle();
    // The subsequence along indices = i (mod 3) is eventually constant
    // exactly when stepping by 3 through the cycle stands still, i.e. the
    // cycle length divides 3.
    if (3 % c.block.size() != 0) throw NotEventuallyConstant();
    std::size_t j = c.entry;
    while (j % 3 != i) ++j;
    return orbit.at(j);
}

} // namespace detail

/// Eventual constant of the orbit subsequence along indices = i (mod 3);
/// an element of the reached cycle.
inline BigNat phase_limit(const BigNat& start, unsigned i, TrajectoryBudget budget = {}) {
    Orbit orbit(start, budget);
    return detail::phase_limit_from(orbit, i);
}

/// All three phase limits of one orbit, sharing a single cycle detection.
inline std::array<BigNat, 3> phase_limits(const BigNat& start, TrajectoryBudget budget = {}) {
    Orbit orbit(start, budget);
    return {detail::phase_limit_from(orbit, 0), detail::phase_limit_from(orbit, 1),
            detail::phase_limit_from(orbit, 2)};
}

} // namespace collatzlab
