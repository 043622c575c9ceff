#pragma once

// Shared test oracles and random generators. Every oracle here is an
// independent route: plain loops and counting, no reuse of the library
// code paths they are checking.

#include <cstdint>
#include <random>
#include <vector>

#include "collatzlab/residue.hpp"

namespace testsupport {

using collatzlab::ArithClass;
using collatzlab::BigInt;
using collatzlab::BigNat;
using collatzlab::ClassUnion;
using collatzlab::Rat;

// Reference rule, written out flat for oracle duty.
inline std::uint64_t naive_step_u64(std::uint64_t w) {
    return (w % 2 == 0) ? w / 2 : 3 * w + 1;
}

inline std::uint64_t naive_iterate_u64(std::uint64_t k, unsigned n) {
    for (unsigned i = 0; i < n; ++i) k = naive_step_u64(k);
    return k;
}

// Enumeration-based window count: scans [1, m] one by one.
inline std::uint64_t enumerated_count(const ClassUnion& u, std::uint64_t m) {
    std::uint64_t count = 0;
    for (std::uint64_t k = 1; k <= m; ++k)
        if (u.contains(BigNat(k))) ++count;
    return count;
}

struct Rng {
    std::mt19937_64 engine{0xC0117A7Bu};

    std::uint64_t below(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine);
    }

    BigInt big_int(unsigned bits) {
        BigInt v = 0;
        for (unsigned i = 0; i < bits; i += 32)
            v = (v << 32) | static_cast<std::uint32_t>(engine());
        if (bits % 32) v >>= (32 - bits % 32);
        return engine() & 1 ? v : -v;
    }

    Rat rat(std::uint64_t span = 1000) {
        BigInt num = static_cast<std::int64_t>(below(2 * span + 1)) - static_cast<std::int64_t>(span);
        BigInt den = static_cast<std::int64_t>(below(span) + 1);
        return Rat(num, den);
    }

    Rat big_rat(unsigned bits) {
        BigInt den = boost::multiprecision::abs(big_int(bits));
        if (den == 0) den = 1;
        return Rat(big_int(bits), den);
    }

    // A normalized union with small modulus: random subset of residues.
    ClassUnion class_union(std::uint64_t max_modulus = 24) {
        std::uint64_t m = below(max_modulus - 1) + 2;
        std::vector<ArithClass> cs;
        for (std::uint64_t r = 0; r < m; ++r)
            if (engine() & 1) cs.emplace_back(BigNat(r), BigNat(m));
        if (cs.empty()) cs.emplace_back(BigNat(below(m)), BigNat(m));
        return ClassUnion::of_classes(cs);
    }
};

} // namespace testsupport
