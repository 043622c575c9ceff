#pragma once

#include <boost/multiprecision/miller_rabin.hpp>

#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "collatzlab/numeric.hpp"

namespace collatzlab {

/// Exponent in N+ u {infinity}. Exponent 0 is represented by absence from
/// the factor map, so a stored exponent is never zero.
class SnExp {
public:
    static SnExp infinity() { return SnExp(std::nullopt); }
    static SnExp finite(BigNat v) {
        if (v < BigNat(1)) throw std::invalid_argument("SnExp: finite exponent must be >= 1");
        return SnExp(std::move(v));
    }

    bool is_infinite() const { return !v_.has_value(); }
    const BigNat& value() const {
        if (is_infinite()) throw std::domain_error("SnExp: infinite exponent has no value");
        return *v_;
    }

    /// Sum with infinity absorbing: inf + e = inf.
    friend SnExp operator+(const SnExp& a, const SnExp& b) {
        if (a.is_infinite() || b.is_infinite()) return infinity();
        return finite(a.value() + b.value());
    }

    friend bool operator==(const SnExp& a, const SnExp& b) { return a.v_ == b.v_; }

    /// Order with every finite exponent below infinity.
    bool leq(const SnExp& o) const {
        if (o.is_infinite()) return true;
        if (is_infinite()) return false;
        return value() <= o.value();
    }

private:
    explicit SnExp(std::optional<BigNat> v) : v_(std::move(v)) {}
    std::optional<BigNat> v_;
};

namespace detail {

inline bool is_prime(const BigNat& n) {
    if (n < BigNat(2)) return false;
    for (unsigned p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u}) {
        if (n == BigNat(p)) return true;
        if ((n % BigNat(p)).is_zero()) return false;
    }
    return boost::multiprecision::miller_rabin_test(n.as_int(), 25);
}

inline BigInt pollard_rho(const BigInt& n) {
    // Brent's variant; n must be odd, composite, > 1.
    for (BigInt c = 1;; ++c) {
        BigInt x = 2, y = 2, d = 1;
        while (d == 1) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            d = boost::multiprecision::gcd(x >= y ? x - y : y - x, n);
        }
        if (d != n) return d;
    }
}

inline void factorize_into(BigNat n, std::map<BigNat, BigNat>& out) {
    for (BigNat p(2); p * p <= n && p < BigNat(1u << 20); p = (p == BigNat(2)) ? BigNat(3) : p + BigNat(2)) {
        while ((n % p).is_zero()) {
            out[p] += BigNat(1);
            n = n / p;
        }
    }
    if (n == BigNat(1)) return;
    if (is_prime(n)) {
        out[n] += BigNat(1);
        return;
    }
    BigNat d(pollard_rho(n.as_int()));
    factorize_into(d, out);
    factorize_into(n / d, out);
}

} // namespace detail

/// Supernatural (Steinitz) number with finitely many nonzero exponents:
/// a formal product of p^e over primes p with e in N+ u {infinity}.
/// Multiplication absorbs: p^inf * p^e = p^inf. Immutable value type.
class Supernatural {
public:
    using FactorMap = std::map<BigNat, SnExp>;

    Supernatural() = default;  // the number 1 (empty factor map)

    static Supernatural one() { return Supernatural(); }

    static Supernatural from_factors(const std::vector<std::pair<BigNat, SnExp>>& factors) {
        Supernatural s;
        for (const auto& [p, e] : factors) {
            if (!detail::is_prime(p))
                throw std::invalid_argument("Supernatural: factor key " + p.str() +
                                            " is not prime");
            auto [it, inserted] = s.factors_.emplace(p, e);
            if (!inserted) it->second = it->second + e;
        }
        return s;
    }

    static Supernatural from_natural(const BigNat& n) {
        if (n < BigNat(1)) throw std::invalid_argument("Supernatural: natural must be >= 1");
        std::map<BigNat, BigNat> exps;
        detail::factorize_into(n, exps);
        Supernatural s;
        for (const auto& [p, e] : exps) s.factors_.emplace(p, SnExp::finite(e));
        return s;
    }

    const FactorMap& factors() const { return factors_; }

    std::optional<SnExp> exponent_of(const BigNat& p) const {
        auto it = factors_.find(p);
        if (it == factors_.end()) return std::nullopt;  // exponent 0
        return it->second;
    }

    bool has_prime(const BigNat& p) const { return factors_.contains(p); }

    bool is_natural() const {
        for (const auto& [p, e] : factors_)
            if (e.is_infinite()) return false;
        return true;
    }

    /// The natural value when every exponent is finite; nullopt otherwise.
    std::optional<BigNat> to_natural() const {
        BigNat v(1);
        for (const auto& [p, e] : factors_) {
            if (e.is_infinite()) return std::nullopt;
            BigNat k = e.value();
            for (BigNat i(0); i < k; ++i) v *= p;
        }
        return v;
    }

    bool is_even() const { return factors_.contains(BigNat(2)); }
    bool is_odd() const { return !is_even(); }
    bool is_one() const { return factors_.empty(); }

    /// Canonical rendering, e.g. "2^inf*3^2*5"; "1" for the empty product.
    std::string str() const {
        if (factors_.empty()) return "1";
        std::ostringstream os;
        bool first = true;
        for (const auto& [p, e] : factors_) {
            if (!first) os << "*";
            first = false;
            os << p;
            if (e.is_infinite()) os << "^inf";
            else if (e.value() != BigNat(1)) os << "^" << e.value();
        }
        return os.str();
    }

    /// Inverse of str(); also accepts a bare composite natural ("12"),
    /// which is factorized.
    static Supernatural parse(const std::string& text);

    bool operator==(const Supernatural& o) const {
        if (factors_.size() != o.factors_.size()) return false;
        auto it = o.factors_.begin();
        for (const auto& [p, e] : factors_) {
            if (!(p == it->first) || !(e == it->second)) return false;
            ++it;
        }
        return true;
    }

private:
    FactorMap factors_;
};

/// Exponent-wise sum with infinity absorbing.
inline Supernatural mul(const Supernatural& a, const Supernatural& b) {
    std::vector<std::pair<BigNat, SnExp>> fs;
    fs.reserve(a.factors().size() + b.factors().size());
    for (const auto& [p, e] : a.factors()) fs.emplace_back(p, e);
    for (const auto& [p, e] : b.factors()) fs.emplace_back(p, e);
    return Supernatural::from_factors(fs);
}

inline Supernatural operator*(const Supernatural& a, const Supernatural& b) { return mul(a, b); }

/// Divisibility: every exponent of a is <= the matching exponent of b.
inline bool divides(const Supernatural& a, const Supernatural& b) {
    for (const auto& [p, e] : a.factors()) {
        auto it = b.factors().find(p);
        if (it == b.factors().end()) return false;
        if (!e.leq(it->second)) return false;
    }
    return true;
}

struct SnPartition {
    std::vector<BigNat> infinite_primes;                  // exponent infinity
    std::vector<std::pair<BigNat, BigNat>> finite_primes; // 0 < exponent < infinity
};

/// Splits the support into primes with infinite and with finite positive
/// exponent; all remaining primes implicitly have exponent 0.
inline SnPartition partition(const Supernatural& n) {
    SnPartition out;
    for (const auto& [p, e] : n.factors()) {
        if (e.is_infinite()) out.infinite_primes.push_back(p);
        else out.finite_primes.emplace_back(p, e.value());
    }
    return out;
}

/// Divide by 2: decrement the exponent of 2; infinity stays infinity.
inline Supernatural halve(const Supernatural& n) {
    if (!n.is_even()) throw NotEven();
    std::vector<std::pair<BigNat, SnExp>> fs;
    for (const auto& [p, e] : n.factors()) {
        if (p == BigNat(2)) {
            if (e.is_infinite()) fs.emplace_back(p, e);
            else if (e.value() > BigNat(1)) fs.emplace_back(p, SnExp::finite(e.value() - BigNat(1)));
            // exponent 1 drops out entirely
        } else {
            fs.emplace_back(p, e);
        }
    }
    return Supernatural::from_factors(fs);
}

inline Supernatural Supernatural::parse(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("Supernatural::parse: empty literal");
    if (text.find('^') == std::string::npos && text.find('*') == std::string::npos)
        return from_natural(BigNat(text));
    std::vector<std::pair<BigNat, SnExp>> fs;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t star = text.find('*', pos);
        std::string term = text.substr(pos, star == std::string::npos ? std::string::npos
                                                                      : star - pos);
        std::size_t caret = term.find('^');
        std::string base = term.substr(0, caret);
        if (base.empty()) throw std::invalid_argument("Supernatural::parse: bad term '" + term + "'");
        SnExp e = SnExp::finite(BigNat(1));
        if (caret != std::string::npos) {
            std::string exp = term.substr(caret + 1);
            if (exp == "inf") e = SnExp::infinity();
            else e = SnExp::finite(BigNat(exp));
        }
        fs.emplace_back(BigNat(base), e);
        if (star == std::string::npos) break;
        pos = star + 1;
    }
    return from_factors(fs);
}

/// Finitely supported vector with rational coordinates, indexed from 1.
/// The codomain fragment actually used by the transported addition.
class VecDescriptor {
public:
    VecDescriptor() = default;

    void set(const BigNat& index, Rat value) {
        if (index < BigNat(1)) throw std::invalid_argument("VecDescriptor: index must be >= 1");
        if (value.is_zero()) coords_.erase(index);
        else coords_[index] = std::move(value);
    }

    Rat get(const BigNat& index) const {
        auto it = coords_.find(index);
        return it == coords_.end() ? Rat(0) : it->second;
    }

    const std::map<BigNat, Rat>& coords() const { return coords_; }

    friend VecDescriptor operator+(const VecDescriptor& a, const VecDescriptor& b) {
        VecDescriptor out = a;
        for (const auto& [i, v] : b.coords_) {
            Rat sum = out.get(i) + v;
            out.set(i, sum);
        }
        return out;
    }

    bool operator==(const VecDescriptor&) const = default;

private:
    std::map<BigNat, Rat> coords_;
};

/// Injection of the representable supernaturals into the vector space:
/// a natural n maps to n*e1; every other representable supernatural maps
/// to the unit vector at coordinate code(x) + 2, where code(x) reads the
/// canonical rendering as a base-256 integer. Decoding inverts exactly
/// these two shapes and nothing else, so the transported addition is an
/// explicitly partial operation.
class Injection {
public:
    virtual ~Injection() = default;

    virtual VecDescriptor encode(const Supernatural& x) const {
        VecDescriptor v;
        if (auto n = x.to_natural()) {
            v.set(BigNat(1), Rat(*n));
            return v;
        }
        v.set(code(x) + BigNat(2), Rat(1));
        return v;
    }

    virtual std::optional<Supernatural> decode(const VecDescriptor& v) const {
        if (v.coords().size() != 1) return std::nullopt;
        const auto& [index, value] = *v.coords().begin();
        if (index == BigNat(1)) {
            if (!value.is_integer() || value.num() < 1) return std::nullopt;
            return Supernatural::from_natural(BigNat(value.num()));
        }
        if (value != Rat(1) || index < BigNat(2)) return std::nullopt;
        std::optional<Supernatural> parsed = try_decode_code(index - BigNat(2));
        if (!parsed || parsed->is_natural()) return std::nullopt;
        if (!(code(*parsed) + BigNat(2) == index)) return std::nullopt;  // non-canonical code
        return parsed;
    }

    static BigNat code(const Supernatural& x) {
        BigNat acc(0);
        for (unsigned char ch : x.str()) acc = acc * BigNat(256) + BigNat(ch);
        return acc;
    }

private:
    static std::optional<Supernatural> try_decode_code(BigNat c) {
        std::string text;
        while (!c.is_zero()) {
            text.insert(text.begin(), static_cast<char>((c % BigNat(256)).to_u64()));
            c = c / BigNat(256);
        }
        try {
            return Supernatural::parse(text);
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }
};

inline const Injection& default_injection() {
    static const Injection instance;
    return instance;
}

/// Addition transported through the injection: decode(encode(a)+encode(b)).
/// Total on the naturals (where it is ordinary addition); elsewhere the sum
/// usually leaves the injection's image and PlusUndefined is thrown.
inline Supernatural oplus(const Supernatural& a, const Supernatural& b,
                          const Injection& inj = default_injection()) {
    std::optional<Supernatural> out = inj.decode(inj.encode(a) + inj.encode(b));
    if (!out) throw PlusUndefined();
    return *out;
}

/// One step of the map on supernaturals: halve when even, else 3n (+) 1
/// through the injection. Coincides with the standard rule on naturals.
inline Supernatural collatz_step(const Supernatural& n,
                                 const Injection& inj = default_injection()) {
    if (n.is_even()) return halve(n);
    return oplus(mul(Supernatural::from_natural(BigNat(3)), n), Supernatural::one(), inj);
}

struct FixedPointCheck {
    Supernatural witness;
    std::uint64_t steps_checked = 0;
    bool stationary = false;
    bool reaches_one = false;
};

/// For n with 2^inf dividing n: iterates the step and verifies the orbit
/// is the stationary sequence n, n, ... with n != 1, so 1 is never reached.
inline FixedPointCheck fixed_point_check(const Supernatural& n, std::uint64_t steps,
                                         const Injection& inj = default_injection()) {
    Supernatural two_inf = Supernatural::from_factors({{BigNat(2), SnExp::infinity()}});
    if (!divides(two_inf, n))
        throw PreconditionFailed("fixed_point_check: 2^inf must divide the witness");
    FixedPointCheck out{n, steps, true, false};
    Supernatural v = n;
    for (std::uint64_t i = 0; i < steps; ++i) {
        v = collatz_step(v, inj);
        if (v.is_one()) out.reaches_one = true;
        if (!(v == n)) out.stationary = false;
    }
    return out;
}

struct AbsorptionCheck {
    bool two_times_two_inf_absorbed = false;    // 2 * 2^inf == 2^inf
    bool three_times_two_inf_absorbed = false;  // 3 * 2^inf == 2^inf (must be false)
    bool three_exponent_is_one = false;         // exponent of 3 in 3 * 2^inf is 1
    std::string conclusion;
};

/// The two multiplicative facts behind the impossibility of an addition
/// with n-fold-sum = multiplication: doubling is absorbed by 2^inf while
/// tripling is not.
inline AbsorptionCheck absorption_check() {
    Supernatural two_inf = Supernatural::from_factors({{BigNat(2), SnExp::infinity()}});
    Supernatural twice = mul(Supernatural::from_natural(BigNat(2)), two_inf);
    Supernatural thrice = mul(Supernatural::from_natural(BigNat(3)), two_inf);
    AbsorptionCheck out;
    out.two_times_two_inf_absorbed = (twice == two_inf);
    out.three_times_two_inf_absorbed = (thrice == two_inf);
    out.three_exponent_is_one =
        thrice.has_prime(BigNat(3)) && thrice.factors().at(BigNat(3)) == SnExp::finite(BigNat(1));
    out.conclusion = "no transported addition can satisfy n-fold-sum(m) = n*m: "
                     "iterating it on 2^inf doubles (absorbed) yet 3*2^inf != 2^inf";
    return out;
}

} // namespace collatzlab
