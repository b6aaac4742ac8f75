#pragma once

#include <z2tower/arith.hpp>

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace z2tower {

/*
 * Element a + b*sqrt(2) of Z[sqrt2], the ring of integers of Q(sqrt2).
 * The ring is norm-Euclidean, which keeps gcd and exact division honest.
 */
struct Zsqrt2Elem {
    mpz_class a, b;

    Zsqrt2Elem() : a(0), b(0) {}
    Zsqrt2Elem(mpz_class a, mpz_class b) : a(std::move(a)), b(std::move(b)) {}
    explicit Zsqrt2Elem(long n) : a(n), b(0) {}

    bool is_zero() const { return a == 0 && b == 0; }
    Zsqrt2Elem conjugate() const { return {a, -b}; }
    mpz_class norm() const { return a * a - 2 * b * b; }

    Zsqrt2Elem operator-() const { return {-a, -b}; }
    Zsqrt2Elem operator+(const Zsqrt2Elem &w) const { return {a + w.a, b + w.b}; }
    Zsqrt2Elem operator-(const Zsqrt2Elem &w) const { return {a - w.a, b - w.b}; }
    Zsqrt2Elem operator*(const Zsqrt2Elem &w) const {
        return {a * w.a + 2 * b * w.b, a * w.b + b * w.a};
    }
    bool operator==(const Zsqrt2Elem &w) const { return a == w.a && b == w.b; }
    bool operator!=(const Zsqrt2Elem &w) const { return !(*this == w); }

    std::string str() const {
        if (b == 0)
            return a.get_str();
        std::string s;
        if (a != 0)
            s = a.get_str();
        if (b > 0 && !s.empty())
            s += "+";
        if (b == -1)
            s += "-";
        else if (b != 1)
            s += b.get_str();
        s += "sqrt2";
        return s;
    }
};

/* The fundamental unit 1 + sqrt2 of Z[sqrt2]; norm -1. */
inline Zsqrt2Elem fundamental_unit_Q1() { return {1, 1}; }

namespace detail {

/* Round n/d to the nearest integer (ties away from zero are fine: any
 * rounding with |error| <= 1/2 keeps the Euclidean bound below). */
inline mpz_class round_div(const mpz_class &n_in, const mpz_class &d_in) {
    mpz_class n = n_in, d = d_in;
    if (d < 0) {
        n = -n;
        d = -d;
    }
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    if (2 * r >= d)
        ++q;
    return q;
}

} // namespace detail

/*
 * Euclidean division: x = q*y + r with |N(r)| < |N(y)|. Rounding both
 * coordinates of x*conj(y)/N(y) to nearest gives |N(r/y)| <= 1/2.
 */
inline std::pair<Zsqrt2Elem, Zsqrt2Elem> euclidean_divmod(const Zsqrt2Elem &x,
                                                          const Zsqrt2Elem &y) {
    if (y.is_zero())
        throw std::invalid_argument("euclidean_divmod: division by zero");
    Zsqrt2Elem t = x * y.conjugate();
    mpz_class n = y.norm();
    Zsqrt2Elem q{detail::round_div(t.a, n), detail::round_div(t.b, n)};
    return {q, x - q * y};
}

inline Zsqrt2Elem gcd(Zsqrt2Elem x, Zsqrt2Elem y) {
    while (!y.is_zero()) {
        Zsqrt2Elem r = euclidean_divmod(x, y).second;
        x = y;
        y = r;
    }
    return x; // determined up to a unit
}

/* Exact divisibility test; quotient returned when it exists. */
inline std::optional<Zsqrt2Elem> divide_exact(const Zsqrt2Elem &x,
                                              const Zsqrt2Elem &d) {
    if (d.is_zero())
        throw std::invalid_argument("divide_exact: division by zero");
    Zsqrt2Elem t = x * d.conjugate();
    mpz_class n = d.norm();
    if (!mpz_divisible_p(t.a.get_mpz_t(), n.get_mpz_t()) ||
        !mpz_divisible_p(t.b.get_mpz_t(), n.get_mpz_t()))
        return std::nullopt;
    return Zsqrt2Elem{t.a / n, t.b / n};
}

/* Sign of the real embedding a + b*sqrt2 (conj = false) or a - b*sqrt2
 * (conj = true), computed exactly by comparing a^2 against 2b^2. */
inline int embedding_sign(const Zsqrt2Elem &x, bool conj) {
    mpz_class b = conj ? mpz_class(-x.b) : x.b;
    if (x.a == 0 && b == 0)
        return 0;
    if (x.a >= 0 && b >= 0)
        return 1;
    if (x.a <= 0 && b <= 0)
        return -1;
    int cmp = (x.a * x.a > 2 * b * b) ? 1 : -1; // |a| vs |b*sqrt2|; never equal
    return x.a > 0 ? cmp : -cmp;
}

inline bool is_totally_positive(const Zsqrt2Elem &x) {
    return embedding_sign(x, false) > 0 && embedding_sign(x, true) > 0;
}

/*
 * Canonical totally positive associate of x (requires N(x) > 0): flip the
 * global sign if needed, then slide along multiples of (1+sqrt2)^2 = 3+2sqrt2
 * until the rational coordinate a = (sigma1 + sigma2)/2 is minimal. a is a
 * positive integer and strictly convex along the unit orbit, so the walk
 * terminates at a unique minimum.
 */
inline Zsqrt2Elem totally_positive_associate(const Zsqrt2Elem &x) {
    if (x.is_zero() || x.norm() <= 0)
        throw std::invalid_argument(
            "totally_positive_associate: need a nonzero element of positive norm");
    Zsqrt2Elem y = (embedding_sign(x, false) > 0) ? x : -x;
    const Zsqrt2Elem eps2{3, 2}, eps2inv{3, -2};
    for (;;) {
        Zsqrt2Elem z = y * eps2inv;
        if (z.a < y.a)
            y = z;
        else
            break;
    }
    for (;;) {
        Zsqrt2Elem z = y * eps2;
        if (z.a < y.a)
            y = z;
        else
            break;
    }
    // a is strictly convex along the orbit, so at most one neighbor can tie;
    // break such a tie toward the smaller sqrt2 coordinate.
    for (const Zsqrt2Elem &u : {eps2, eps2inv}) {
        Zsqrt2Elem z = y * u;
        if (z.a == y.a && z.b < y.b)
            y = z;
    }
    return y;
}

/* Residues modulo the ideal (4sqrt2) = {8u + 4v*sqrt2}: the class of
 * a + b*sqrt2 is (a mod 8, b mod 4). */
inline std::pair<unsigned long, unsigned long>
residue_class_mod_4sqrt2(const Zsqrt2Elem &x) {
    return {mpz_fdiv_ui(x.a.get_mpz_t(), 8), mpz_fdiv_ui(x.b.get_mpz_t(), 4)};
}

/* Residues modulo (4): (a mod 4, b mod 4). */
inline std::pair<unsigned long, unsigned long>
residue_class_mod_4(const Zsqrt2Elem &x) {
    return {mpz_fdiv_ui(x.a.get_mpz_t(), 4), mpz_fdiv_ui(x.b.get_mpz_t(), 4)};
}

enum class SplittingType { split, inert, ramified };

inline const char *to_string(SplittingType t) {
    switch (t) {
    case SplittingType::split:
        return "split";
    case SplittingType::inert:
        return "inert";
    default:
        return "ramified";
    }
}

struct PrimeFactorizationQ1 {
    SplittingType type;
    // Split: two non-associate primes (pi and its conjugate). Ramified (p=2):
    // the single prime sqrt2. Inert: empty, p itself stays prime.
    std::vector<Zsqrt2Elem> factors;
};

/*
 * Splitting of a rational prime in Z[sqrt2]: 2 ramifies, p = +-1 (mod 8)
 * splits, p = +-3 (mod 8) is inert. For split p, return the generator
 * a + b*sqrt2 with a, b >= 0 and b minimal solving a^2 - 2b^2 = +-p; an
 * associate-balanced solution always has b <= sqrt(p), so the scan is bounded.
 */
inline PrimeFactorizationQ1 factor_rational_prime(const mpz_class &p) {
    if (!is_prime(p))
        throw std::invalid_argument("factor_rational_prime: input not prime");
    if (p == 2)
        return {SplittingType::ramified, {Zsqrt2Elem{0, 1}}};
    unsigned long m8 = mpz_fdiv_ui(p.get_mpz_t(), 8);
    if (m8 == 3 || m8 == 5)
        return {SplittingType::inert, {}};
    mpz_class bound;
    mpz_sqrt(bound.get_mpz_t(), p.get_mpz_t());
    for (mpz_class b = 0; b <= bound + 1; ++b) {
        for (int sign : {1, -1}) {
            mpz_class t = 2 * b * b + sign * p;
            if (t < 0)
                continue;
            if (mpz_perfect_square_p(t.get_mpz_t())) {
                mpz_class a;
                mpz_sqrt(a.get_mpz_t(), t.get_mpz_t());
                Zsqrt2Elem pi{a, b};
                return {SplittingType::split, {pi, pi.conjugate()}};
            }
        }
    }
    throw std::logic_error("factor_rational_prime: no representation found");
}

/*
 * Behavior of the prime (sqrt2) of Q(sqrt2) in the quadratic extension
 * Q(sqrt2, sqrt(alpha)) for odd alpha:
 *   unramified  iff alpha = 1 or 3+2sqrt2 (mod 4),
 *   split       iff alpha = 1 or 3+2sqrt2 (mod 4sqrt2),
 *   inert       iff unramified but not split.
 * alpha must be odd (coprime to sqrt2) and not a square in Z[sqrt2].
 */
inline SplittingType classify_sqrt2_behavior(const Zsqrt2Elem &alpha) {
    if (mpz_even_p(alpha.a.get_mpz_t()))
        throw std::invalid_argument("classify_sqrt2_behavior: alpha must be odd");
    auto m4 = residue_class_mod_4(alpha);
    bool unramified = (m4 == std::pair<unsigned long, unsigned long>{1, 0}) ||
                      (m4 == std::pair<unsigned long, unsigned long>{3, 2});
    if (!unramified)
        return SplittingType::ramified;
    auto m4s2 = residue_class_mod_4sqrt2(alpha);
    bool split = (m4s2 == std::pair<unsigned long, unsigned long>{1, 0}) ||
                 (m4s2 == std::pair<unsigned long, unsigned long>{3, 2});
    return split ? SplittingType::split : SplittingType::inert;
}

} // namespace z2tower
