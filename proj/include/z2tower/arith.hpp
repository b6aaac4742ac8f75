#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace z2tower {

/* Refusals that stem from configured resource ceilings rather than bad
 * mathematical input; the CLI maps these to the usage/resource exit code. */
class ResourceError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/*
 * Value of a residue symbol: -1, 0 or +1. Converts to int so symbols can be
 * multiplied and compared directly; construction rejects anything else.
 */
class SymbolValue {
public:
    SymbolValue(int v) : v_(v) {
        if (v < -1 || v > 1)
            throw std::invalid_argument("symbol value must be -1, 0 or +1");
    }
    operator int() const { return v_; }

private:
    int v_;
};

inline SymbolValue operator*(SymbolValue a, SymbolValue b) {
    return SymbolValue(int(a) * int(b));
}

namespace detail {

/* Largest n for which the fixed Miller-Rabin witness set below is proven
 * deterministic (Sorenson-Webster): 3317044064679887385961980. */
inline const mpz_class &miller_rabin_proven_bound() {
    static const mpz_class bound("3317044064679887385961981");
    return bound;
}

inline bool miller_rabin_witness(const mpz_class &n, const mpz_class &n_minus_1,
                                 const mpz_class &d, unsigned long s,
                                 unsigned long a) {
    mpz_class base(a);
    if (mpz_divisible_p(base.get_mpz_t(), n.get_mpz_t()))
        return true; // witness collapses mod n, no information
    mpz_class x;
    mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n_minus_1)
        return true;
    for (unsigned long i = 1; i < s; ++i) {
        x = (x * x) % n;
        if (x == n_minus_1)
            return true;
    }
    return false;
}

} // namespace detail

/*
 * Deterministic Miller-Rabin. The witness set {2,...,37} decides primality
 * for every n below ~3.3e24; larger inputs are rejected outright rather than
 * answered probabilistically.
 */
inline bool is_prime(const mpz_class &n) {
    if (n >= detail::miller_rabin_proven_bound())
        throw std::domain_error("is_prime: input above deterministic witness bound");
    if (n < 2)
        return false;
    static const unsigned long small_primes[] = {2,  3,  5,  7,  11, 13,
                                                 17, 19, 23, 29, 31, 37};
    for (unsigned long p : small_primes) {
        if (n == p)
            return true;
        if (mpz_divisible_ui_p(n.get_mpz_t(), p))
            return false;
    }
    mpz_class n_minus_1 = n - 1;
    unsigned long s = mpz_scan1(n_minus_1.get_mpz_t(), 0);
    mpz_class d = n_minus_1 >> s;
    for (unsigned long a : small_primes)
        if (!detail::miller_rabin_witness(n, n_minus_1, d, s, a))
            return false;
    return true;
}

inline bool is_prime(unsigned long n) { return is_prime(mpz_class(n)); }

/* An odd prime, validated on construction. */
class OddPrime {
public:
    explicit OddPrime(mpz_class p) : p_(std::move(p)) {
        if (p_ < 3 || !is_prime(p_))
            throw std::invalid_argument("OddPrime: " + p_.get_str() +
                                        " is not an odd prime");
    }
    explicit OddPrime(unsigned long p) : OddPrime(mpz_class(p)) {}

    const mpz_class &value() const { return p_; }
    unsigned long residue(unsigned long m) const {
        return mpz_fdiv_ui(p_.get_mpz_t(), m);
    }

private:
    mpz_class p_;
};

/*
 * Legendre symbol (a/p) by Euler's criterion: a^((p-1)/2) mod p. Composite p
 * is rejected; symbols are never chained through reciprocity here.
 */
inline SymbolValue legendre(const mpz_class &a, const OddPrime &p) {
    mpz_class e = (p.value() - 1) / 2;
    mpz_class r;
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.value().get_mpz_t());
    if (r == 0)
        return 0;
    if (r == 1)
        return 1;
    if (r == p.value() - 1)
        return -1;
    throw std::logic_error("legendre: Euler criterion failed on a validated prime");
}

inline SymbolValue legendre(const mpz_class &a, const mpz_class &p) {
    return legendre(a, OddPrime(p));
}

/*
 * Quartic residue character of 2: chi(p) = 2^((p-1)/4) mod p, defined for
 * primes p = 1 (mod 8), where it lands in {+1,-1} because (2/p) = +1.
 * chi(p) = +1 exactly when 2 is a fourth power mod p.
 */
inline SymbolValue quartic_symbol_of_two(const OddPrime &p) {
    if (p.residue(8) != 1)
        throw std::invalid_argument("quartic_symbol_of_two: need p = 1 (mod 8)");
    mpz_class e = (p.value() - 1) / 4;
    mpz_class r;
    mpz_powm(r.get_mpz_t(), mpz_class(2).get_mpz_t(), e.get_mpz_t(),
             p.value().get_mpz_t());
    if (r == 1)
        return 1;
    if (r == p.value() - 1)
        return -1;
    throw std::logic_error("quartic_symbol_of_two: value not a square root of 1");
}

inline SymbolValue quartic_symbol_of_two(const mpz_class &p) {
    return quartic_symbol_of_two(OddPrime(p));
}

/*
 * Clause-by-clause record of the entry condition on a triple (p, q, r):
 *   p = 9 (mod 16), q = r = 3 (mod 8), (qr/p) = -1, and 2 is a quartic
 *   non-residue mod p. quartic_two_p is 0 when p != 1 (mod 8), i.e. when the
 *   character is not even defined.
 */
struct ConditionReport {
    bool p_is_9_mod_16 = false;
    bool q_is_3_mod_8 = false;
    bool r_is_3_mod_8 = false;
    SymbolValue legendre_qr_p = 0;
    SymbolValue quartic_two_p = 0;

    bool passes() const {
        return p_is_9_mod_16 && q_is_3_mod_8 && r_is_3_mod_8 &&
               int(legendre_qr_p) == -1 && int(quartic_two_p) == -1;
    }
};

inline ConditionReport check_condition1(const OddPrime &p, const OddPrime &q,
                                        const OddPrime &r) {
    if (p.value() == q.value() || p.value() == r.value() ||
        q.value() == r.value())
        throw std::invalid_argument("check_condition1: primes must be distinct");
    ConditionReport rep;
    rep.p_is_9_mod_16 = (p.residue(16) == 9);
    rep.q_is_3_mod_8 = (q.residue(8) == 3);
    rep.r_is_3_mod_8 = (r.residue(8) == 3);
    rep.legendre_qr_p = legendre(q.value() * r.value(), p);
    rep.quartic_two_p =
        (p.residue(8) == 1) ? quartic_symbol_of_two(p) : SymbolValue(0);
    return rep;
}

inline ConditionReport check_condition1(unsigned long p, unsigned long q,
                                        unsigned long r) {
    return check_condition1(OddPrime(p), OddPrime(q), OddPrime(r));
}

/* Sieve of Eratosthenes; used for scanning and trial-division factoring. */
inline std::vector<std::uint64_t> primes_below(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    if (n <= 2)
        return out;
    std::vector<bool> composite(n, false);
    for (std::uint64_t i = 2; i < n; ++i) {
        if (composite[i])
            continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j < n; j += i)
            composite[j] = true;
    }
    return out;
}

/* Trial-division factorization, smallest prime first. Fine at desk scale. */
inline std::vector<std::pair<std::uint64_t, unsigned>> factor(std::uint64_t n) {
    if (n == 0)
        throw std::invalid_argument("factor: zero has no factorization");
    std::vector<std::pair<std::uint64_t, unsigned>> out;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2) ? 1 : 2) {
        if (n % p)
            continue;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1)
        out.emplace_back(n, 1);
    return out;
}

} // namespace z2tower
