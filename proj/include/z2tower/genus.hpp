#pragma once

#include <z2tower/hilbert.hpp>
#include <z2tower/quadform.hpp>

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace z2tower {

/*
 * Splitting data of an odd prime in the n-th layer of the cyclotomic
 * Z_2-extension of Q. The layer is the real subfield of the 2^(n+2)-th
 * cyclotomic field, so the residue degree f is the least f with
 * p^f = +-1 (mod 2^(n+2)), and g = 2^n / f primes lie over p (no
 * ramification for odd p).
 */
struct SplittingInQn {
    std::uint64_t g = 1;
    std::uint64_t f = 1;
};

inline SplittingInQn splitting_in_qn(const OddPrime &p, unsigned n) {
    if (n > 40)
        throw ResourceError("splitting_in_qn: tower level too deep");
    mpz_class m = mpz_class(1) << (n + 2);
    std::uint64_t layer_degree = std::uint64_t(1) << n;
    mpz_class r = p.value() % m;
    mpz_class x = 1;
    for (std::uint64_t f = 1; f <= layer_degree; ++f) {
        x = (x * r) % m;
        if (x == 1 || x == m - 1)
            return {layer_degree / f, f};
    }
    throw std::logic_error("splitting_in_qn: no residue order found");
}

/*
 * Genus field data for the real quadratic field of squarefree radicand d:
 * the discriminant factors uniquely into prime discriminants (p for
 * p = 1 (mod 4), -p for p = 3 (mod 4), and one of -4, 8, -8 at 2), and the
 * genus field is generated by their square roots. Its maximal real subfield
 * is generated by the positive factors together with products of pairs of
 * negative ones, recorded here by squarefree radicand.
 */
struct GenusField {
    std::uint64_t radicand = 0;
    std::vector<mpz_class> prime_discriminants; // ordered by absolute value
    std::vector<std::uint64_t> real_radicands;  // squarefree, ascending

    unsigned narrow_rank() const {
        return unsigned(prime_discriminants.size()) - 1;
    }
    unsigned real_rank_over_base() const {
        return unsigned(real_radicands.size()) - 1;
    }
};

namespace detail {

inline std::uint64_t squarefree_kernel(std::uint64_t n) {
    std::uint64_t k = 1;
    for (auto [p, e] : factor(n))
        if (e % 2)
            k *= p;
    return k;
}

} // namespace detail

inline GenusField genus_field(std::uint64_t d,
                              std::uint64_t bound = default_discriminant_bound) {
    std::uint64_t D = (d % 4 == 1) ? d : 4 * d;
    QuadDiscriminant disc(mpz_class(static_cast<unsigned long>(D)), bound);

    GenusField g;
    g.radicand = d;
    mpz_class odd_product = 1;
    for (auto [p, e] : factor(d)) {
        if (p == 2)
            continue;
        mpz_class star = (p % 4 == 1) ? mpz_class(static_cast<unsigned long>(p))
                                      : -mpz_class(static_cast<unsigned long>(p));
        g.prime_discriminants.push_back(star);
        odd_product *= star;
    }
    if (D % 2 == 0) {
        mpz_class two_part = disc.value_mpz() / odd_product;
        if (two_part != -4 && two_part != 8 && two_part != -8)
            throw std::logic_error("genus_field: bad two-part of the discriminant");
        g.prime_discriminants.push_back(two_part);
    }
    std::sort(g.prime_discriminants.begin(), g.prime_discriminants.end(),
              [](const mpz_class &x, const mpz_class &y) { return abs(x) < abs(y); });

    std::vector<std::uint64_t> negatives;
    for (const auto &star : g.prime_discriminants) {
        if (star > 0)
            g.real_radicands.push_back(
                detail::squarefree_kernel(mpz_class(star).get_ui()));
        else
            negatives.push_back(mpz_class(-star).get_ui());
    }
    for (std::size_t j = 1; j < negatives.size(); ++j)
        g.real_radicands.push_back(
            detail::squarefree_kernel(negatives[0] * negatives[j]));
    std::sort(g.real_radicands.begin(), g.real_radicands.end());
    return g;
}

/*
 * Ambiguous class number for a quadratic extension: base * 2^(t-1) / 2^e,
 * with t ramified places and 2^e the index of norms inside the base units.
 */
inline std::uint64_t ambiguous_class_order(unsigned t, unsigned e,
                                           std::uint64_t base_order) {
    if (t == 0)
        throw std::invalid_argument("ambiguous_class_order: need a ramified place count");
    if (base_order == 0)
        throw std::invalid_argument("ambiguous_class_order: base order must be positive");
    if (e > t - 1)
        throw std::invalid_argument("ambiguous_class_order: unit index exceeds 2^(t-1)");
    return base_order << (t - 1 - e);
}

/*
 * Exponent e of the unit norm index [ {+-1} : {+-1} cap N K* ] for
 * K = Q(sqrt d) over Q: zero exactly when -1 is a local norm everywhere.
 */
inline unsigned norm_index_over_q(const mpz_class &d) {
    if (d == 0)
        throw std::invalid_argument("norm_index_over_q: d must be nonzero");
    if (hilbert_symbol_q_real(-1, d) == -1)
        return 1;
    if (hilbert_symbol_q(-1, d, 2) == -1)
        return 1;
    mpz_class n = abs(d);
    if (mpz_sizeinbase(n.get_mpz_t(), 2) > 63)
        throw ResourceError("norm_index_over_q: d too large to factor");
    for (auto [p, e] : factor(n.get_ui()))
        if (p != 2 &&
            hilbert_symbol_q(-1, d, mpz_class(static_cast<unsigned long>(p))) == -1)
            return 1;
    return 0;
}

/*
 * Exponent e of the unit norm index for Q(sqrt 2, sqrt d) over Q(sqrt 2),
 * whose units modulo squares are generated by -1 and 1 + sqrt 2. The norms
 * among the three nontrivial classes form a subgroup of the four-group, so
 * the count of norms is 3, 1 or 0, giving e = 0, 1 or 2.
 */
inline unsigned norm_index_over_q1(const mpz_class &d) {
    Zsqrt2Elem eps = fundamental_unit_Q1();
    int norms = int(is_global_norm(Zsqrt2Elem{-1, 0}, d)) +
                int(is_global_norm(eps, d)) + int(is_global_norm(-eps, d));
    switch (norms) {
    case 3:
        return 0;
    case 1:
        return 1;
    case 0:
        return 2;
    default:
        throw std::logic_error("norm_index_over_q1: norm classes are not a subgroup");
    }
}

/*
 * Number of places of the n-th cyclotomic layer Q_n that ramify in
 * Q_n(sqrt d), for squarefree d = 1 (mod 4): exactly the places over the odd
 * primes dividing d (the dyadic place stays unramified), counted via the
 * splitting of each prime in Q_n.
 */
inline std::uint64_t ramified_places_in_tower(std::uint64_t d, unsigned n) {
    if (d <= 1 || d % 4 != 1)
        throw std::invalid_argument(
            "ramified_places_in_tower: need squarefree d = 1 (mod 4), d > 1");
    std::uint64_t total = 0;
    for (auto [p, e] : factor(d)) {
        if (e > 1)
            throw std::invalid_argument("ramified_places_in_tower: d must be squarefree");
        total += splitting_in_qn(OddPrime(p), n).g;
    }
    return total;
}

/* Whether 2 splits completely in the compositum Q(sqrt p, sqrt qr), the real
 * genus field of Q(sqrt pqr) for p = 1 (mod 4) and q, r = 3 (mod 4). */
inline bool two_splits_completely(const OddPrime &p, const OddPrime &q,
                                  const OddPrime &r) {
    return p.residue(8) == 1 && (q.residue(8) * r.residue(8)) % 8 == 1;
}

} // namespace z2tower
