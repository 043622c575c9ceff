#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>

#include "collatzlab/errors.hpp"

namespace collatzlab {

using BigInt = boost::multiprecision::cpp_int;

/// Arbitrary-precision natural number (>= 0). Arithmetic that would leave
/// the naturals throws instead of wrapping; construction rejects negatives.
class BigNat {
public:
    BigNat() : v_(0) {}
    template <std::integral T>
    BigNat(T n) : v_(check(BigInt(n))) {}
    explicit BigNat(BigInt v) : v_(check(std::move(v))) {}
    explicit BigNat(const std::string& s) : v_(check(BigInt(s))) {}

    const BigInt& as_int() const { return v_; }
    std::string str() const { return v_.str(); }
    bool is_zero() const { return v_.is_zero(); }
    bool is_odd() const { return boost::multiprecision::bit_test(v_, 0); }
    bool is_even() const { return !is_odd(); }

    std::uint64_t to_u64() const {
        if (v_ > BigInt(UINT64_MAX))
            throw std::domain_error("BigNat does not fit in 64 bits");
        return v_.convert_to<std::uint64_t>();
    }

    friend BigNat operator+(const BigNat& a, const BigNat& b) { return raw(a.v_ + b.v_); }
    friend BigNat operator*(const BigNat& a, const BigNat& b) { return raw(a.v_ * b.v_); }
    friend BigNat operator-(const BigNat& a, const BigNat& b) {
        if (b.v_ > a.v_) throw std::domain_error("BigNat subtraction underflow");
        return raw(a.v_ - b.v_);
    }
    friend BigNat operator/(const BigNat& a, const BigNat& b) {
        if (b.is_zero()) throw DivisionByZero();
        return raw(a.v_ / b.v_);
    }
    friend BigNat operator%(const BigNat& a, const BigNat& b) {
        if (b.is_zero()) throw DivisionByZero();
        return raw(a.v_ % b.v_);
    }

    BigNat& operator+=(const BigNat& o) { v_ += o.v_; return *this; }
    BigNat& operator*=(const BigNat& o) { v_ *= o.v_; return *this; }
    BigNat& operator-=(const BigNat& o) { *this = *this - o; return *this; }
    BigNat& operator++() { ++v_; return *this; }

    friend bool operator==(const BigNat& a, const BigNat& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const BigNat& a, const BigNat& b) {
        if (a.v_ < b.v_) return std::strong_ordering::less;
        if (a.v_ > b.v_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const BigNat& n) { return os << n.v_; }

private:
    static BigInt check(BigInt v) {
        if (v < 0) throw std::domain_error("BigNat cannot hold a negative value");
        return v;
    }
    static BigNat raw(BigInt v) {
        BigNat n;
        n.v_ = std::move(v);
        return n;
    }

    BigInt v_;
};

inline BigNat gcd(const BigNat& a, const BigNat& b) {
    return BigNat(boost::multiprecision::gcd(a.as_int(), b.as_int()));
}

inline BigNat lcm(const BigNat& a, const BigNat& b) {
    return BigNat(boost::multiprecision::lcm(a.as_int(), b.as_int()));
}

inline BigNat pow(const BigNat& base, unsigned exponent) {
    return BigNat(boost::multiprecision::pow(base.as_int(), exponent));
}

inline BigNat pow2(unsigned exponent) { return pow(BigNat(2), exponent); }

/// Floor square root.
inline BigNat isqrt(const BigNat& n) {
    return BigNat(boost::multiprecision::sqrt(n.as_int()));
}

/// Index of the most significant bit; n must be nonzero.
inline unsigned bit_length(const BigNat& n) {
    if (n.is_zero()) return 0;
    return boost::multiprecision::msb(n.as_int()) + 1;
}

/// x mod m with result in [0, m); m >= 1.
inline BigNat mod_floor(const BigInt& x, const BigNat& m) {
    BigInt r = x % m.as_int();
    if (r < 0) r += m.as_int();
    return BigNat(r);
}

/// Extended gcd: returns (g, s, t) with a*s + b*t = g = gcd(a, b), g >= 0.
inline std::tuple<BigInt, BigInt, BigInt> extended_gcd(BigInt a, BigInt b) {
    BigInt s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (b != 0) {
        BigInt q = a / b;
        BigInt r = a - q * b;
        a = b; b = r;
        BigInt s2 = s0 - q * s1; s0 = s1; s1 = s2;
        BigInt t2 = t0 - q * t1; t0 = t1; t1 = t2;
    }
    if (a < 0) { a = -a; s0 = -s0; t0 = -t0; }
    return {a, s0, t0};
}

/// Inverse of x modulo m (m >= 1, gcd(x, m) = 1). mod 1 everything is 0.
inline BigNat mod_inverse(const BigNat& x, const BigNat& m) {
    if (m == BigNat(1)) return BigNat(0);
    auto [g, s, t] = extended_gcd(x.as_int(), m.as_int());
    if (g != 1) throw std::domain_error("mod_inverse: arguments are not coprime");
    return mod_floor(s, m);
}

/// Exact rational number. Always reduced: gcd(|num|, den) = 1, den > 0.
/// Immutable value type; equality is structural and therefore semantic.
class Rat {
public:
    Rat() : num_(0), den_(1) {}
    Rat(long long n) : num_(n), den_(1) {}
    Rat(BigInt n) : num_(std::move(n)), den_(1) {}
    Rat(const BigNat& n) : num_(n.as_int()), den_(1) {}
    Rat(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) { reduce(); }
    Rat(long long num, long long den) : num_(num), den_(den) { reduce(); }
    Rat(const BigNat& num, const BigNat& den) : num_(num.as_int()), den_(den.as_int()) { reduce(); }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return num_ < 0 ? -1 : (num_ > 0 ? 1 : 0); }

    friend Rat operator+(const Rat& a, const Rat& b) {
        return Rat(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        return Rat(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return Rat(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.is_zero()) throw DivisionByZero();
        return Rat(a.num_ * b.den_, a.den_ * b.num_);
    }
    Rat operator-() const { return Rat(-num_, den_); }

    Rat& operator+=(const Rat& o) { *this = *this + o; return *this; }
    Rat& operator-=(const Rat& o) { *this = *this - o; return *this; }
    Rat& operator*=(const Rat& o) { *this = *this * o; return *this; }
    Rat& operator/=(const Rat& o) { *this = *this / o; return *this; }

    Rat abs() const { return num_ < 0 ? -*this : *this; }

    /// Exact integer power; negative exponents invert (zero base throws).
    Rat pow(long long e) const {
        if (e < 0) {
            if (is_zero()) throw DivisionByZero();
            return Rat(1) / pow(-e);
        }
        Rat result(1);
        Rat base = *this;
        unsigned long long k = static_cast<unsigned long long>(e);
        while (k != 0) {
            if (k & 1) result *= base;
            base *= base;
            k >>= 1;
        }
        return result;
    }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
        BigInt lhs = a.num_ * b.den_;
        BigInt rhs = b.num_ * a.den_;
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    std::string str() const { return num_.str() + "/" + den_.str(); }
    double approx() const { return num_.convert_to<double>() / den_.convert_to<double>(); }

    friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

private:
    void reduce() {
        if (den_.is_zero()) throw DivisionByZero();
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        BigInt g = boost::multiprecision::gcd(num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
        if (num_.is_zero()) den_ = 1;
    }

    BigInt num_;
    BigInt den_;
};

inline Rat rat_add(const Rat& a, const Rat& b) { return a + b; }
inline Rat rat_mul(const Rat& a, const Rat& b) { return a * b; }
inline Rat rat_div(const Rat& a, const Rat& b) { return a / b; }

} // namespace collatzlab
