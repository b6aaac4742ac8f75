#pragma once

#include <z2tower/quadform.hpp>

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace z2tower {

/*
 * Exact arithmetic in the totally real biquadratic field Q(sqrt m, sqrt n)
 * on the basis {1, sqrt m, sqrt n, sqrt L}, where L is the squarefree kernel
 * of mn and g = gcd(m, n), so that sqrt m sqrt n = g sqrt L. Coordinates are
 * rationals; the three nontrivial automorphisms flip the signs of the two
 * radicals they move.
 */
class QuarticField {
public:
    struct Elem {
        mpq_class c0, c1, c2, c3;

        bool operator==(const Elem &o) const {
            return c0 == o.c0 && c1 == o.c1 && c2 == o.c2 && c3 == o.c3;
        }
        Elem operator-() const { return {-c0, -c1, -c2, -c3}; }
    };

    QuarticField(std::uint64_t m, std::uint64_t n) : m_(m), n_(n) {
        if (m < 2 || n < 2 || m == n)
            throw std::invalid_argument("QuarticField: radicands must be distinct and > 1");
        for (auto v : {m, n})
            for (auto [p, e] : factor(v))
                if (e > 1)
                    throw std::invalid_argument("QuarticField: radicands must be squarefree");
        g_ = std::gcd(m, n);
        L_ = (m / g_) * (n / g_);
    }

    std::uint64_t m() const { return m_; }
    std::uint64_t n() const { return n_; }
    std::uint64_t l() const { return L_; }
    std::uint64_t radical_product_coeff() const { return g_; }

    Elem zero() const { return {0, 0, 0, 0}; }
    Elem one() const { return {1, 0, 0, 0}; }
    Elem from_rational(const mpq_class &x) const { return {x, 0, 0, 0}; }

    Elem add(const Elem &a, const Elem &b) const {
        return {a.c0 + b.c0, a.c1 + b.c1, a.c2 + b.c2, a.c3 + b.c3};
    }
    Elem sub(const Elem &a, const Elem &b) const {
        return {a.c0 - b.c0, a.c1 - b.c1, a.c2 - b.c2, a.c3 - b.c3};
    }

    Elem mul(const Elem &a, const Elem &b) const {
        mpq_class mg(static_cast<unsigned long>(m_ / g_));
        mpq_class ng(static_cast<unsigned long>(n_ / g_));
        mpq_class gq(static_cast<unsigned long>(g_));
        mpq_class mq(static_cast<unsigned long>(m_));
        mpq_class nq(static_cast<unsigned long>(n_));
        mpq_class Lq(static_cast<unsigned long>(L_));
        return {a.c0 * b.c0 + mq * a.c1 * b.c1 + nq * a.c2 * b.c2 + Lq * a.c3 * b.c3,
                a.c0 * b.c1 + a.c1 * b.c0 + ng * (a.c2 * b.c3 + a.c3 * b.c2),
                a.c0 * b.c2 + a.c2 * b.c0 + mg * (a.c1 * b.c3 + a.c3 * b.c1),
                a.c0 * b.c3 + a.c3 * b.c0 + gq * (a.c1 * b.c2 + a.c2 * b.c1)};
    }

    /* Automorphism sending sqrt m to (-1)^flip_m sqrt m and likewise for n;
     * sqrt L moves with the product of the two flips. */
    Elem conj(const Elem &a, bool flip_m, bool flip_n) const {
        Elem r = a;
        if (flip_m)
            r.c1 = -r.c1;
        if (flip_n)
            r.c2 = -r.c2;
        if (flip_m != flip_n)
            r.c3 = -r.c3;
        return r;
    }

    std::array<Elem, 4> conjugates(const Elem &a) const {
        return {a, conj(a, true, false), conj(a, false, true), conj(a, true, true)};
    }

    /* Monic characteristic polynomial t^4 + p3 t^3 + p2 t^2 + p1 t + p0 from
     * the elementary symmetric functions of the four conjugates, all of which
     * must come out rational. */
    std::array<mpq_class, 4> char_poly(const Elem &a) const {
        auto z = conjugates(a);
        Elem e1 = add(add(z[0], z[1]), add(z[2], z[3]));
        Elem e2 = zero();
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                e2 = add(e2, mul(z[std::size_t(i)], z[std::size_t(j)]));
        Elem e3 = zero();
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                for (int k = j + 1; k < 4; ++k)
                    e3 = add(e3, mul(mul(z[std::size_t(i)], z[std::size_t(j)]),
                                     z[std::size_t(k)]));
        Elem e4 = mul(mul(z[0], z[1]), mul(z[2], z[3]));
        for (const Elem *e : {&e1, &e2, &e3, &e4})
            if (e->c1 != 0 || e->c2 != 0 || e->c3 != 0)
                throw std::logic_error("char_poly: symmetric function is not rational");
        return {e4.c0, -e3.c0, e2.c0, -e1.c0}; // p0, p1, p2, p3
    }

    mpq_class norm(const Elem &a) const { return char_poly(a)[0]; }

    bool is_integral(const Elem &a) const {
        for (const auto &p : char_poly(a))
            if (p.get_den() != 1)
                return false;
        return true;
    }

    std::optional<Elem> inverse(const Elem &a) const {
        auto z = conjugates(a);
        mpq_class nr = norm(a);
        if (nr == 0)
            return std::nullopt;
        Elem adj = mul(mul(z[1], z[2]), z[3]);
        mpq_class inv = 1 / nr;
        return Elem{adj.c0 * inv, adj.c1 * inv, adj.c2 * inv, adj.c3 * inv};
    }

    /* x and y generate the same ideal exactly when both quotients are
     * algebraic integers. */
    bool associates(const Elem &x, const Elem &y) const {
        auto yi = inverse(y), xi = inverse(x);
        if (!yi || !xi)
            return false;
        return is_integral(mul(x, *yi)) && is_integral(mul(y, *xi));
    }

private:
    std::uint64_t m_, n_, g_, L_;
};

namespace detail {

/* Embedding values of an element at precision prec, for the sign choices
 * (s, t) of (sqrt m, sqrt n) in order (+,+), (+,-), (-,+), (-,-). Plain
 * assignment into a preallocated mpf_class would keep the old precision, so
 * the values are pushed through the copy constructor instead. */
inline std::vector<mpf_class> embed_all(const QuarticField &F,
                                        const QuarticField::Elem &a,
                                        mp_bitcnt_t prec) {
    mpf_class sm(0, prec), sn(0, prec), sl(0, prec);
    mpf_sqrt_ui(sm.get_mpf_t(), F.m());
    mpf_sqrt_ui(sn.get_mpf_t(), F.n());
    mpf_sqrt_ui(sl.get_mpf_t(), F.l());
    std::vector<mpf_class> out;
    out.reserve(4);
    for (int s : {1, -1})
        for (int t : {1, -1}) {
            mpf_class acc(a.c0, prec);
            acc += mpf_class(a.c1, prec) * sm * s;
            acc += mpf_class(a.c2, prec) * sn * t;
            acc += mpf_class(a.c3, prec) * sl * (s * t);
            out.push_back(acc);
        }
    return out;
}

inline std::size_t coord_bits(const QuarticField::Elem &a) {
    std::size_t b = 1;
    for (const mpq_class *c : {&a.c0, &a.c1, &a.c2, &a.c3}) {
        b = std::max(b, mpz_sizeinbase(c->get_num().get_mpz_t(), 2));
        b = std::max(b, mpz_sizeinbase(c->get_den().get_mpz_t(), 2));
    }
    return b;
}

inline mpz_class round_to_int(const mpf_class &x) {
    mpf_class t = x + mpf_class(0.5, x.get_prec());
    mpf_floor(t.get_mpf_t(), t.get_mpf_t());
    mpz_class r;
    mpz_set_f(r.get_mpz_t(), t.get_mpf_t());
    return r;
}

} // namespace detail

/*
 * Exact square root in the field, for a totally positive element. Floating
 * square roots of the four embeddings are assembled into candidate
 * coordinates (the ring of integers lies in the quarter-lattice over the
 * radical basis, so 4 times each coordinate is rounded to an integer), and a
 * candidate only counts once its exact square equals the input. Failures are
 * only declared after the rounded candidates of every sign choice repeat
 * across two precision rungs, so a true square cannot be missed.
 */
inline std::optional<QuarticField::Elem> sqrt_in_field(const QuarticField &F,
                                                       const QuarticField::Elem &u) {
    const mp_bitcnt_t cap = mp_bitcnt_t(1) << 20;
    mp_bitcnt_t prec = mp_bitcnt_t(128 + 2 * detail::coord_bits(u));
    std::array<std::array<mpz_class, 4>, 8> last;
    std::array<int, 8> stable{};
    bool have_last = false;
    for (; prec <= cap; prec *= 2) {
        auto x = detail::embed_all(F, u, prec);
        bool positive = true;
        for (const auto &v : x)
            if (v <= 0)
                positive = false;
        if (!positive)
            continue; // too coarse to separate a tiny embedding from zero
        for (auto &v : x)
            mpf_sqrt(v.get_mpf_t(), v.get_mpf_t());

        mpf_class sm(0, prec), sn(0, prec), sl(0, prec);
        mpf_sqrt_ui(sm.get_mpf_t(), F.m());
        mpf_sqrt_ui(sn.get_mpf_t(), F.n());
        mpf_sqrt_ui(sl.get_mpf_t(), F.l());

        bool all_stable = have_last;
        for (int mask = 0; mask < 8; ++mask) {
            int s2 = (mask & 1) ? -1 : 1;
            int s3 = (mask & 2) ? -1 : 1;
            int s4 = (mask & 4) ? -1 : 1;
            mpf_class a4 = x[0] + s2 * x[1] + s3 * x[2] + s4 * x[3];
            mpf_class b4 = (x[0] + s2 * x[1] - s3 * x[2] - s4 * x[3]) / sm;
            mpf_class c4 = (x[0] - s2 * x[1] + s3 * x[2] - s4 * x[3]) / sn;
            mpf_class d4 = (x[0] - s2 * x[1] - s3 * x[2] + s4 * x[3]) / sl;
            std::array<mpz_class, 4> r{detail::round_to_int(a4),
                                       detail::round_to_int(b4),
                                       detail::round_to_int(c4),
                                       detail::round_to_int(d4)};
            const mpz_class four(4);
            QuarticField::Elem cand{mpq_class(r[0], four), mpq_class(r[1], four),
                                    mpq_class(r[2], four), mpq_class(r[3], four)};
            cand.c0.canonicalize();
            cand.c1.canonicalize();
            cand.c2.canonicalize();
            cand.c3.canonicalize();
            if (F.mul(cand, cand) == u)
                return cand;
            if (have_last && r == last[std::size_t(mask)])
                ++stable[std::size_t(mask)];
            else
                stable[std::size_t(mask)] = 0;
            if (stable[std::size_t(mask)] < 1)
                all_stable = false;
            last[std::size_t(mask)] = r;
        }
        have_last = true;
        if (all_stable)
            return std::nullopt;
    }
    throw ResourceError("sqrt_in_field: precision cap exhausted");
}

namespace detail {

inline std::uint64_t quad_disc_of(std::uint64_t m) { return m % 4 == 1 ? m : 4 * m; }

/* Fundamental unit of Q(sqrt m) as a field element, with its norm. */
inline std::pair<QuarticField::Elem, int>
subfield_unit(std::uint64_t m, int which, const QuarticField &F) {
    QuadDiscriminant D(mpz_class(static_cast<unsigned long>(quad_disc_of(m))));
    FundamentalUnit u = fundamental_unit(D);
    const mpz_class two(2);
    mpq_class a(u.x, two), b = (m % 4 == 1) ? mpq_class(u.y, two) : mpq_class(u.y);
    a.canonicalize();
    b.canonicalize();
    QuarticField::Elem e = F.zero();
    e.c0 = a;
    if (which == 1)
        e.c1 = b;
    else if (which == 2)
        e.c2 = b;
    else
        e.c3 = b;
    return {e, u.norm};
}

} // namespace detail

/*
 * Index Q = [E_K : <-1, eps_m, eps_n, eps_L>] of the subfield units inside
 * the full unit group, following the element-wise square test: Q equals the
 * number of exponent vectors (a, b, c) for which eps_m^a eps_n^b eps_L^c is
 * a square in K. A product whose exact embedding signs are mixed is never a
 * square; sign patterns come from the unit norms alone, since each subfield
 * unit is positive at the identity embedding and its conjugate has the sign
 * of its norm. The successful exponent vectors must form a subgroup of the
 * two-elementary group of order 8, so Q is 1, 2, 4 or 8.
 */
inline unsigned unit_index(std::uint64_t m, std::uint64_t n) {
    QuarticField F(m, n);
    auto [e1, n1] = detail::subfield_unit(m, 1, F);
    auto [e2, n2] = detail::subfield_unit(n, 2, F);
    auto [e3, n3] = detail::subfield_unit(F.l(), 3, F);
    const std::array<QuarticField::Elem, 3> eps{e1, e2, e3};
    const std::array<int, 3> nrm{n1, n2, n3};

    std::vector<unsigned> squares{0};
    for (unsigned mask = 1; mask < 8; ++mask) {
        // sign at embedding (s, t): each factor contributes its norm sign
        // whenever the embedding conjugates it (s for m, t for n, st for L)
        bool mixed = false;
        for (int s : {1, -1})
            for (int t : {1, -1}) {
                int sign = 1;
                const std::array<int, 3> flips{s, t, s * t};
                for (int i = 0; i < 3; ++i)
                    if ((mask >> i) & 1u)
                        sign *= (flips[std::size_t(i)] < 0) ? nrm[std::size_t(i)] : 1;
                if (sign < 0)
                    mixed = true;
            }
        if (mixed)
            continue; // the identity embedding is always positive
        QuarticField::Elem u = F.one();
        for (int i = 0; i < 3; ++i)
            if ((mask >> i) & 1u)
                u = F.mul(u, eps[std::size_t(i)]);
        if (sqrt_in_field(F, u))
            squares.push_back(mask);
    }

    for (unsigned a : squares)
        for (unsigned b : squares)
            if (std::find(squares.begin(), squares.end(), a ^ b) == squares.end())
                throw std::logic_error("unit_index: square classes are not a subgroup");
    auto q = unsigned(squares.size());
    if (q != 1 && q != 2 && q != 4 && q != 8)
        throw std::logic_error("unit_index: index is not a power of two");
    return q;
}

/*
 * Class number of the totally real biquadratic field Q(sqrt m, sqrt n) by
 * the class number formula for a four-group extension of Q:
 * h = Q * h_m * h_n * h_L / 4 with Q the unit index above.
 */
struct BiquadClassData {
    std::uint64_t unit_index_q = 1;
    std::uint64_t h_m = 1, h_n = 1, h_l = 1;
    std::uint64_t class_number = 1;

    std::uint64_t two_part() const {
        std::uint64_t h = class_number, t = 1;
        while (h % 2 == 0) {
            t *= 2;
            h /= 2;
        }
        return t;
    }
};

inline BiquadClassData kuroda_class_number(std::uint64_t m, std::uint64_t n) {
    QuarticField F(m, n);
    BiquadClassData out;
    out.unit_index_q = unit_index(m, n);
    out.h_m = wide_class_number(
        QuadDiscriminant(mpz_class(static_cast<unsigned long>(detail::quad_disc_of(m)))));
    out.h_n = wide_class_number(
        QuadDiscriminant(mpz_class(static_cast<unsigned long>(detail::quad_disc_of(n)))));
    out.h_l = wide_class_number(QuadDiscriminant(
        mpz_class(static_cast<unsigned long>(detail::quad_disc_of(F.l())))));
    std::uint64_t prod = out.unit_index_q * out.h_m * out.h_n * out.h_l;
    if (prod % 4 != 0)
        throw std::logic_error("kuroda_class_number: formula product not divisible by 4");
    out.class_number = prod / 4;
    return out;
}

namespace detail {

/* Kronecker symbol of a fundamental discriminant at a prime. */
inline int chi_disc(std::uint64_t d, std::uint64_t l) {
    if (l == 2) {
        if (d % 2 == 0)
            return 0;
        return d % 8 == 1 ? 1 : -1;
    }
    if (d % l == 0)
        return 0;
    return legendre(mpz_class(static_cast<unsigned long>(d % l)), OddPrime(l));
}

struct SplittingInBiquad {
    unsigned e = 1, f = 1, g = 1;
};

/* Decomposition type of a rational prime in the four-group field from the
 * Kronecker symbols of its three quadratic subfield discriminants: the number
 * of zeros fixes the inertia subgroup, the surviving symbol the Frobenius. */
inline SplittingInBiquad splitting_in_biquad(std::uint64_t l,
                                             const std::array<std::uint64_t, 3> &discs) {
    std::array<int, 3> chi;
    int zeros = 0, plus = 0;
    for (int i = 0; i < 3; ++i) {
        chi[std::size_t(i)] = chi_disc(discs[std::size_t(i)], l);
        zeros += chi[std::size_t(i)] == 0;
        plus += chi[std::size_t(i)] == 1;
    }
    if (zeros == 0) {
        if (plus == 3)
            return {1, 1, 4};
        if (plus == 1)
            return {1, 2, 2};
        throw std::logic_error("splitting_in_biquad: impossible symbol pattern");
    }
    if (zeros == 2) {
        int live = chi[0] + chi[1] + chi[2]; // the single nonzero value
        return live == 1 ? SplittingInBiquad{2, 1, 2} : SplittingInBiquad{2, 2, 1};
    }
    if (zeros == 3)
        return {4, 1, 1};
    throw std::logic_error("splitting_in_biquad: prime ramifies in exactly one subfield");
}

} // namespace detail

/*
 * Certified class number one via the Minkowski bound: every ideal class
 * contains an integral ideal of norm at most (3/32) sqrt(d_K), and in a
 * Galois quartic field any element of norm +-l^f generates a prime over l,
 * so exhibiting g pairwise non-associate such elements (searched over the
 * half-integral coordinate lattice) certifies that every prime below the
 * bound is principal. The function refuses, rather than guesses, whenever
 * the bound is out of range or a required generator is not found.
 */
inline std::uint64_t minkowski_class_number(std::uint64_t m, std::uint64_t n,
                                            long search_box = 12) {
    QuarticField F(m, n);
    std::array<std::uint64_t, 3> discs{detail::quad_disc_of(m), detail::quad_disc_of(n),
                                       detail::quad_disc_of(F.l())};
    mpz_class dk = mpz_class(static_cast<unsigned long>(discs[0])) *
                   static_cast<unsigned long>(discs[1]) *
                   static_cast<unsigned long>(discs[2]);
    // Minkowski bound at most 50, i.e. 9 d_K <= 2560000 since the bound is
    // (3/32) sqrt(d_K)
    if (9 * dk > 2560000)
        throw ResourceError("minkowski_class_number: discriminant too large to certify");

    for (std::uint64_t l : primes_below(51)) {
        if (1024 * l * l > 9 * dk)
            break;
        auto split = detail::splitting_in_biquad(l, discs);
        mpz_class lf = 1;
        for (unsigned i = 0; i < split.f; ++i)
            lf *= static_cast<unsigned long>(l);
        if (1024 * lf * lf > 9 * dk)
            continue; // primes over l lie above the bound

        // collect pairwise non-associate integral elements of norm +-l^f
        std::vector<QuarticField::Elem> gens;
        mpz_class mq(static_cast<unsigned long>(m)), nq(static_cast<unsigned long>(n)),
            Lq(static_cast<unsigned long>(F.l()));
        mpz_class ng(static_cast<unsigned long>(n / F.radical_product_coeff()));
        for (long a = 0; a <= search_box && gens.size() < split.g; ++a)
            for (long b = -search_box; b <= search_box && gens.size() < split.g; ++b)
                for (long c = -search_box; c <= search_box && gens.size() < split.g; ++c)
                    for (long d = -search_box; d <= search_box && gens.size() < split.g;
                         ++d) {
                        mpz_class U = mpz_class(a) * a + mq * b * b - nq * c * c -
                                      Lq * mpz_class(d) * d;
                        mpz_class V = 2 * (mpz_class(a) * b - ng * mpz_class(c) * d);
                        mpz_class nrm16 = U * U - mq * V * V;
                        if (nrm16 != 16 * lf && nrm16 != -16 * lf)
                            continue;
                        QuarticField::Elem z{mpq_class(a, 2), mpq_class(b, 2),
                                             mpq_class(c, 2), mpq_class(d, 2)};
                        z.c0.canonicalize();
                        z.c1.canonicalize();
                        z.c2.canonicalize();
                        z.c3.canonicalize();
                        if (!F.is_integral(z))
                            continue;
                        bool fresh = true;
                        for (const auto &gexist : gens)
                            if (F.associates(z, gexist))
                                fresh = false;
                        if (fresh)
                            gens.push_back(z);
                    }
        if (gens.size() < split.g)
            throw ResourceError("minkowski_class_number: no generator found for a prime over " +
                                std::to_string(l) + " within the search box");
    }
    return 1;
}

} // namespace z2tower
