#pragma once

#include <z2tower/zsqrt2.hpp>

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace z2tower {

/*
 * Rational Hilbert symbol (a, b)_infinity: -1 exactly when both arguments
 * are negative, where the conic ax^2 + by^2 = z^2 has no real point.
 */
inline SymbolValue hilbert_symbol_q_real(const mpz_class &a, const mpz_class &b) {
    if (a == 0 || b == 0)
        throw std::invalid_argument("hilbert symbol arguments must be nonzero");
    return SymbolValue(a < 0 && b < 0 ? -1 : 1);
}

namespace detail {

inline std::pair<unsigned, mpz_class> strip_prime(mpz_class n, const mpz_class &p) {
    unsigned v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return {v, n};
}

} // namespace detail

/*
 * Rational Hilbert symbol at a finite prime p, by the closed formulas: with
 * a = p^alpha u and b = p^beta w (u, w units),
 *   odd p:  (-1|p)^(alpha beta) (u|p)^beta (w|p)^alpha,
 *   p = 2:  (-1)^( eps(u) eps(w) + alpha omega(w) + beta omega(u) ),
 * where eps flags u = 3 (mod 4) and omega flags u = 3, 5 (mod 8).
 */
inline SymbolValue hilbert_symbol_q(const mpz_class &a, const mpz_class &b,
                                    const mpz_class &p) {
    if (a == 0 || b == 0)
        throw std::invalid_argument("hilbert symbol arguments must be nonzero");
    if (!is_prime(p))
        throw std::invalid_argument("hilbert_symbol_q: place must be prime");
    auto [alpha, u] = detail::strip_prime(a, p);
    auto [beta, w] = detail::strip_prime(b, p);
    if (p == 2) {
        auto eps = [](const mpz_class &x) {
            return mpz_class(x % 4 + 4) % 4 == 3;
        };
        auto omega = [](const mpz_class &x) {
            unsigned long r = mpz_class((x % 8 + 8) % 8).get_ui();
            return r == 3 || r == 5;
        };
        unsigned e = (unsigned(eps(u)) & unsigned(eps(w))) ^
                     ((alpha & 1u) & unsigned(omega(w))) ^
                     ((beta & 1u) & unsigned(omega(u)));
        return SymbolValue(e ? -1 : 1);
    }
    OddPrime op(p);
    SymbolValue s(1);
    if ((alpha & 1u) && (beta & 1u))
        s = s * legendre(mpz_class(-1), op);
    if (beta & 1u)
        s = s * legendre(u, op);
    if (alpha & 1u)
        s = s * legendre(w, op);
    return s;
}

/*
 * A place of Q(sqrt 2): one of the two real embeddings (labelled by the sign
 * given to sqrt 2), the ramified dyadic place with uniformizer sqrt 2, or a
 * finite place over an odd rational prime, carrying its uniformizer (a split
 * prime element, or the inert rational prime itself).
 */
struct PlaceQ1 {
    enum class Kind { real_pos = 0, real_neg = 1, dyadic = 2, finite = 3 };

    Kind kind = Kind::finite;
    std::uint64_t p = 0;           // residue characteristic, 0 for real places
    int index = 0;                 // 0 or 1, distinguishing conjugate split places
    bool inert = false;
    Zsqrt2Elem uniformizer{0, 0};

    static PlaceQ1 real(bool conj) {
        PlaceQ1 v;
        v.kind = conj ? Kind::real_neg : Kind::real_pos;
        return v;
    }
    static PlaceQ1 dyadic() {
        PlaceQ1 v;
        v.kind = Kind::dyadic;
        v.p = 2;
        v.uniformizer = Zsqrt2Elem{0, 1};
        return v;
    }

    bool is_real() const { return kind == Kind::real_pos || kind == Kind::real_neg; }

    std::string str() const {
        switch (kind) {
        case Kind::real_pos:
            return "real(sqrt2>0)";
        case Kind::real_neg:
            return "real(sqrt2<0)";
        case Kind::dyadic:
            return "(sqrt2)";
        case Kind::finite:
            return "(" + uniformizer.str() + ")";
        }
        return "?";
    }

    friend bool operator==(const PlaceQ1 &x, const PlaceQ1 &y) {
        return x.kind == y.kind && x.p == y.p && x.index == y.index;
    }
    friend bool operator<(const PlaceQ1 &x, const PlaceQ1 &y) {
        return std::make_tuple(int(x.kind), x.p, x.index) <
               std::make_tuple(int(y.kind), y.p, y.index);
    }
};

/* Both real places, in canonical order. */
inline std::vector<PlaceQ1> real_places_q1() {
    return {PlaceQ1::real(false), PlaceQ1::real(true)};
}

/* The places of Q(sqrt 2) over a rational prime: one dyadic, one inert, or a
 * conjugate pair of split places ordered as produced by the factorization. */
inline std::vector<PlaceQ1> places_over(std::uint64_t p) {
    if (p == 2)
        return {PlaceQ1::dyadic()};
    auto f = factor_rational_prime(mpz_class(static_cast<unsigned long>(p)));
    if (f.type == SplittingType::inert) {
        PlaceQ1 v;
        v.p = p;
        v.inert = true;
        v.uniformizer = Zsqrt2Elem{mpz_class(static_cast<unsigned long>(p)), 0};
        return {v};
    }
    std::vector<PlaceQ1> out;
    for (int i = 0; i < 2; ++i) {
        PlaceQ1 v;
        v.p = p;
        v.index = i;
        v.uniformizer = f.factors[std::size_t(i)];
        out.push_back(v);
    }
    return out;
}

/* Exact valuation at a finite place, together with the cofactor alpha / pi^v.
 * Inputs are ring elements, so the valuation is never negative. */
inline std::pair<unsigned, Zsqrt2Elem> valuation_with_unit(const Zsqrt2Elem &alpha,
                                                           const PlaceQ1 &P) {
    if (P.is_real())
        throw std::invalid_argument("valuation: real place has no valuation");
    if (alpha == Zsqrt2Elem{0, 0})
        throw std::invalid_argument("valuation of zero");
    unsigned v = 0;
    Zsqrt2Elem x = alpha;
    for (;;) {
        auto q = divide_exact(x, P.uniformizer);
        if (!q)
            return {v, x};
        x = *q;
        ++v;
    }
}

inline unsigned valuation_at(const Zsqrt2Elem &alpha, const PlaceQ1 &P) {
    return valuation_with_unit(alpha, P).first;
}

/*
 * Quadratic residue character of the reduction of alpha in the residue field
 * at an odd finite place. Split place over p: the field is F_p under
 * sqrt 2 -> -a/b for uniformizer a + b sqrt 2 (b is a unit mod p since
 * p divides a^2 - 2b^2). Inert place over q: the field is F_{q^2} and the
 * character is the power map to the exponent (q^2 - 1)/2.
 */
inline SymbolValue residue_character(const Zsqrt2Elem &alpha, const PlaceQ1 &P) {
    if (P.kind != PlaceQ1::Kind::finite)
        throw std::invalid_argument("residue_character: need an odd finite place");
    mpz_class q(static_cast<unsigned long>(P.p));
    if (P.inert) {
        mpz_class x = alpha.a % q, y = alpha.b % q;
        if (x < 0)
            x += q;
        if (y < 0)
            y += q;
        if (x == 0 && y == 0)
            throw std::invalid_argument("residue_character: not a unit at the place");
        // alpha ^ ((q^2 - 1)/2) in F_q[sqrt 2] by square and multiply
        mpz_class e = (q * q - 1) / 2;
        mpz_class rx = 1, ry = 0;
        mpz_class bx = x, by = y;
        for (std::size_t bit = 0, nb = mpz_sizeinbase(e.get_mpz_t(), 2); bit < nb; ++bit) {
            if (mpz_tstbit(e.get_mpz_t(), bit)) {
                mpz_class nrx = (rx * bx + 2 * ry * by) % q;
                mpz_class nry = (rx * by + ry * bx) % q;
                rx = nrx;
                ry = nry;
            }
            mpz_class nbx = (bx * bx + 2 * by * by) % q;
            mpz_class nby = (2 * bx * by) % q;
            bx = nbx;
            by = nby;
        }
        if (ry != 0 || (rx != 1 && rx != q - 1))
            throw std::logic_error("residue_character: power map left {-1, +1}");
        return SymbolValue(rx == 1 ? 1 : -1);
    }
    mpz_class bmod = P.uniformizer.b % q;
    mpz_class binv;
    if (mpz_invert(binv.get_mpz_t(), bmod.get_mpz_t(), q.get_mpz_t()) == 0)
        throw std::logic_error("residue_character: uniformizer has non-unit b");
    mpz_class t = (-P.uniformizer.a * binv) % q;
    mpz_class img = (alpha.a + alpha.b * t) % q;
    if (img < 0)
        img += q;
    if (img == 0)
        throw std::invalid_argument("residue_character: not a unit at the place");
    return legendre(img, OddPrime(q));
}

namespace detail {

/* Odd rational primes below either argument's norm support; every place where
 * a tame symbol could be nontrivial lies over one of them. */
inline std::vector<std::uint64_t> odd_support_primes(const Zsqrt2Elem &alpha,
                                                     const Zsqrt2Elem &beta) {
    mpz_class n = abs(alpha.norm() * beta.norm());
    if (mpz_sizeinbase(n.get_mpz_t(), 2) > 63)
        throw ResourceError("hilbert symbol support: norm product too large to factor");
    std::vector<std::uint64_t> out;
    for (auto [p, e] : factor(n.get_ui()))
        if (p != 2)
            out.push_back(p);
    return out;
}

} // namespace detail

/*
 * Hilbert symbol of Q(sqrt 2) at one place.
 *
 * Real places compare exact embedding signs. Odd finite places use the tame
 * formula chi(-1)^(uw) chi(alpha0)^w chi(beta0)^u with u, w the valuations
 * and alpha0, beta0 the cofactors; the value does not depend on the choice of
 * uniformizer. The dyadic symbol is recovered from the product formula as the
 * product over every other place, which is exact because all those symbols
 * are computed exactly.
 */
inline SymbolValue hilbert_symbol_q1(const Zsqrt2Elem &alpha, const Zsqrt2Elem &beta,
                                     const PlaceQ1 &P) {
    if (alpha == Zsqrt2Elem{0, 0} || beta == Zsqrt2Elem{0, 0})
        throw std::invalid_argument("hilbert symbol arguments must be nonzero");
    switch (P.kind) {
    case PlaceQ1::Kind::real_pos:
    case PlaceQ1::Kind::real_neg: {
        bool conj = P.kind == PlaceQ1::Kind::real_neg;
        return SymbolValue(
            embedding_sign(alpha, conj) < 0 && embedding_sign(beta, conj) < 0 ? -1
                                                                              : 1);
    }
    case PlaceQ1::Kind::finite: {
        auto [u, alpha0] = valuation_with_unit(alpha, P);
        auto [w, beta0] = valuation_with_unit(beta, P);
        SymbolValue s(1);
        if ((u & 1u) && (w & 1u))
            s = s * residue_character(Zsqrt2Elem{-1, 0}, P);
        if (w & 1u)
            s = s * residue_character(alpha0, P);
        if (u & 1u)
            s = s * residue_character(beta0, P);
        return s;
    }
    case PlaceQ1::Kind::dyadic: {
        SymbolValue s(1);
        for (const auto &R : real_places_q1())
            s = s * hilbert_symbol_q1(alpha, beta, R);
        for (auto p : detail::odd_support_primes(alpha, beta))
            for (const auto &Q : places_over(p))
                s = s * hilbert_symbol_q1(alpha, beta, Q);
        return s;
    }
    }
    throw std::logic_error("hilbert_symbol_q1: unknown place kind");
}

/*
 * Symbols of one pair at every place that can matter: both real places, the
 * dyadic place, and all places over odd primes in the norm support. The
 * product over the table is +1 by construction of the dyadic entry; the
 * mathematical content of the table is tested through the square invariance,
 * norm-equation and solvability oracles.
 */
struct SymbolTable {
    Zsqrt2Elem alpha{0, 0}, beta{0, 0};
    std::vector<std::pair<PlaceQ1, SymbolValue>> entries;

    SymbolValue product() const {
        SymbolValue s(1);
        for (const auto &e : entries)
            s = s * e.second;
        return s;
    }
};

inline SymbolTable symbol_table(const Zsqrt2Elem &alpha, const Zsqrt2Elem &beta) {
    if (alpha == Zsqrt2Elem{0, 0} || beta == Zsqrt2Elem{0, 0})
        throw std::invalid_argument("hilbert symbol arguments must be nonzero");
    SymbolTable t;
    t.alpha = alpha;
    t.beta = beta;
    std::vector<PlaceQ1> places = real_places_q1();
    places.push_back(PlaceQ1::dyadic());
    for (auto p : detail::odd_support_primes(alpha, beta))
        for (const auto &Q : places_over(p))
            places.push_back(Q);
    std::sort(places.begin(), places.end());
    for (const auto &P : places)
        t.entries.emplace_back(P, hilbert_symbol_q1(alpha, beta, P));
    return t;
}

/*
 * Whether alpha is a norm from Q(sqrt 2, sqrt d) down to Q(sqrt 2), for a
 * rational integer d. By the Hasse norm theorem this is a conjunction of
 * local conditions, and the product formula makes the dyadic condition
 * redundant once every other place passes, so only real and odd finite
 * places are consulted.
 */
inline bool is_global_norm(const Zsqrt2Elem &alpha, const mpz_class &d) {
    if (d == 0)
        throw std::invalid_argument("is_global_norm: d must be nonzero");
    if (alpha == Zsqrt2Elem{0, 0})
        throw std::invalid_argument("is_global_norm: alpha must be nonzero");
    Zsqrt2Elem beta{d, 0};
    for (const auto &R : real_places_q1())
        if (hilbert_symbol_q1(alpha, beta, R) == -1)
            return false;
    for (auto p : detail::odd_support_primes(alpha, beta))
        for (const auto &Q : places_over(p))
            if (hilbert_symbol_q1(alpha, beta, Q) == -1)
                return false;
    return true;
}

} // namespace z2tower
