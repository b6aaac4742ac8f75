#pragma once

#include <z2tower/arith.hpp>

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace z2tower {

inline constexpr std::uint64_t default_discriminant_bound = 1000000000;

/*
 * A positive non-square fundamental discriminant, i.e. the discriminant of a
 * real quadratic field: D = 1 (mod 4) squarefree, or D = 4m with m = 2, 3
 * (mod 4) squarefree. Anything above the configured bound is refused so the
 * desk-scale enumeration below stays honest about its cost.
 */
class QuadDiscriminant {
public:
    explicit QuadDiscriminant(const mpz_class &d,
                              std::uint64_t bound = default_discriminant_bound) {
        if (d <= 0)
            throw std::invalid_argument("discriminant must be positive");
        if (d > mpz_class(bound))
            throw ResourceError("discriminant " + d.get_str() +
                                " exceeds configured bound " +
                                std::to_string(bound));
        d_ = d.get_ui();
        unsigned long m4 = d_ % 4;
        if (m4 == 2 || m4 == 3)
            throw std::invalid_argument("discriminant must be 0 or 1 (mod 4)");
        if (mpz_perfect_square_p(d.get_mpz_t()))
            throw std::invalid_argument("discriminant must not be a square");
        std::uint64_t m = (m4 == 0) ? d_ / 4 : d_;
        if (m4 == 0 && m % 4 == 1)
            throw std::invalid_argument("non-fundamental discriminant: D/4 = 1 (mod 4)");
        for (auto [p, e] : factor(m)) {
            if (e > 1)
                throw std::invalid_argument("non-fundamental discriminant: " +
                                            std::to_string(p) + "^2 divides it");
            ramified_.push_back(p);
        }
        if (m4 == 0 && m % 2 != 0)
            ramified_.insert(ramified_.begin(), 2);
        std::sort(ramified_.begin(), ramified_.end());
    }
    explicit QuadDiscriminant(std::uint64_t d,
                              std::uint64_t bound = default_discriminant_bound)
        : QuadDiscriminant(mpz_class(static_cast<unsigned long>(d)), bound) {}

    std::uint64_t value() const { return d_; }
    mpz_class value_mpz() const { return mpz_class(static_cast<unsigned long>(d_)); }
    bool even() const { return d_ % 2 == 0; }
    /* D for odd D, D/4 otherwise: the radicand-like part whose prime
     * divisors index the finite ramified places. */
    std::uint64_t m() const { return even() ? d_ / 4 : d_; }
    const std::vector<std::uint64_t> &ramified_primes() const { return ramified_; }

private:
    std::uint64_t d_ = 0;
    std::vector<std::uint64_t> ramified_; // always includes 2 when D is even
};

struct BinaryQuadForm {
    mpz_class a, b, c;

    mpz_class disc() const { return b * b - 4 * a * c; }
    bool operator==(const BinaryQuadForm &g) const {
        return a == g.a && b == g.b && c == g.c;
    }
    std::string str() const {
        return "(" + a.get_str() + "," + b.get_str() + "," + c.get_str() + ")";
    }
};

namespace detail {

inline mpz_class isqrt(const mpz_class &n) {
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

/* Reduced indefinite form: 0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b,
 * tested exactly against s = floor(sqrt D) (D is never a square here). */
inline bool is_reduced_internal(const mpz_class &a, const mpz_class &b,
                                const mpz_class &s) {
    if (b <= 0 || b > s)
        return false;
    mpz_class two_abs_a = 2 * abs(a);
    return two_abs_a > s - b && two_abs_a <= s + b;
}

/* Normalization: shift b by multiples of 2|a| into (-|a|, |a|] when |a| is
 * above sqrt(D), into (sqrt(D) - 2|a|, sqrt(D)) otherwise. */
inline void normalize_internal(mpz_class &a, mpz_class &b, mpz_class &c,
                               const mpz_class &D, const mpz_class &s) {
    mpz_class two_a = 2 * abs(a);
    mpz_class target = (abs(a) > s) ? abs(a) : s;
    // b' is the unique rep of b mod 2|a| in (target - 2|a|, target]
    mpz_class shift;
    mpz_fdiv_r(shift.get_mpz_t(), mpz_class(target - b).get_mpz_t(),
               two_a.get_mpz_t());
    b = target - shift;
    c = (b * b - D) / (4 * a);
}

inline void rho_internal(mpz_class &a, mpz_class &b, mpz_class &c,
                         const mpz_class &D, const mpz_class &s) {
    std::swap(a, c);
    b = -b;
    normalize_internal(a, b, c, D, s);
}

} // namespace detail

inline bool is_reduced(const BinaryQuadForm &f) {
    mpz_class D = f.disc();
    if (D <= 0 || mpz_perfect_square_p(D.get_mpz_t()))
        throw std::invalid_argument("is_reduced: need a positive non-square discriminant");
    return detail::is_reduced_internal(f.a, f.b, detail::isqrt(D));
}

/* Reduction by repeated rho steps; terminates in O(log) steps classically,
 * with a hard cap as a tripwire. */
inline BinaryQuadForm reduce(const BinaryQuadForm &f) {
    mpz_class D = f.disc();
    if (D <= 0 || mpz_perfect_square_p(D.get_mpz_t()))
        throw std::invalid_argument("reduce: need a positive non-square discriminant");
    if (f.a == 0)
        throw std::invalid_argument("reduce: degenerate form with a = 0");
    mpz_class s = detail::isqrt(D);
    mpz_class a = f.a, b = f.b, c = f.c;
    detail::normalize_internal(a, b, c, D, s);
    for (int guard = 0; guard < 100000; ++guard) {
        if (detail::is_reduced_internal(a, b, s))
            return {a, b, c};
        detail::rho_internal(a, b, c, D, s);
    }
    throw std::logic_error("reduce: rho walk failed to terminate");
}

/*
 * Dirichlet/Gauss composition of primitive forms of equal discriminant
 * followed by reduction. The two extended-gcd steps compute
 * d1 = gcd(a1, a2, (b1+b2)/2) together with the Bezout data that pins the
 * composite's middle coefficient mod 2*a1*a2/d1^2.
 */
inline BinaryQuadForm compose(const BinaryQuadForm &f1, const BinaryQuadForm &f2) {
    mpz_class D = f1.disc();
    if (f2.disc() != D)
        throw std::invalid_argument("compose: discriminants differ");
    if (::gcd(::gcd(f1.a, f1.b), f1.c) != 1 || ::gcd(::gcd(f2.a, f2.b), f2.c) != 1)
        throw std::invalid_argument("compose: forms must be primitive");
    mpz_class s = (f1.b + f2.b) / 2;
    mpz_class n = f2.b - s; // (b2 - b1)/2

    mpz_class d, y1, v;
    mpz_gcdext(d.get_mpz_t(), y1.get_mpz_t(), v.get_mpz_t(), f2.a.get_mpz_t(),
               f1.a.get_mpz_t());

    mpz_class d1, x2, v2c;
    mpz_gcdext(d1.get_mpz_t(), x2.get_mpz_t(), v2c.get_mpz_t(), s.get_mpz_t(),
               d.get_mpz_t());
    mpz_class y2 = -v2c;

    mpz_class u1 = f1.a / d1;
    mpz_class u2 = f2.a / d1;
    mpz_class r = (y1 * y2 * n - x2 * f2.c) % u1;

    mpz_class a3 = u1 * u2;
    mpz_class b3 = f2.b + 2 * u2 * r;
    mpz_class num = b3 * b3 - D;
    if (num % (4 * a3) != 0)
        throw std::logic_error("compose: non-integral result");
    return reduce({a3, b3, num / (4 * a3)});
}

/*
 * A form (l, b, c) of discriminant D with prime leading coefficient,
 * representing a prime ideal over l. Exists exactly when l is not inert:
 * b scans the residues mod 2l for b^2 = D (mod 4l).
 */
inline BinaryQuadForm prime_form(std::uint64_t l, const QuadDiscriminant &D) {
    mpz_class lz(static_cast<unsigned long>(l)), Dz = D.value_mpz();
    for (mpz_class b = 0; b < 2 * lz; ++b) {
        mpz_class num = b * b - Dz;
        if (num % (4 * lz) == 0)
            return {lz, b, num / (4 * lz)};
    }
    throw std::invalid_argument("prime_form: " + std::to_string(l) +
                                " is inert for discriminant " +
                                std::to_string(D.value()));
}

/*
 * Fundamental unit (x + y*sqrt D)/2, x = Dy (mod 2), of the real quadratic
 * order of discriminant D, from the purely periodic continued fraction of
 * (b0 + sqrt D)/2 with b0 the parity-matched floor of sqrt D. The denominator
 * convergents across one period assemble the smallest unit > 1; its norm is
 * (-1)^(period length). The Pell identity x^2 - D y^2 = +-4 is re-checked
 * exactly before returning.
 */
struct FundamentalUnit {
    mpz_class x, y;
    int norm = 1;
    double regulator_estimate = 0.0;
};

inline FundamentalUnit fundamental_unit(const QuadDiscriminant &D) {
    mpz_class Dz = D.value_mpz();
    mpz_class s = detail::isqrt(Dz);
    mpz_class b0 = s;
    if ((b0 - Dz) % 2 != 0)
        b0 -= 1;
    mpz_class P = b0, Q = 2;
    mpz_class Bprev = 1, Bcur = 0; // B_{-2}, B_{-1}
    long period = 0;
    for (;;) {
        mpz_class a = (P + s) / Q;
        mpz_class Pn = a * Q - P;
        mpz_class Qn = (Dz - Pn * Pn) / Q;
        mpz_class Bnew = a * Bcur + Bprev;
        Bprev = Bcur;
        Bcur = Bnew;
        ++period;
        P = Pn;
        Q = Qn;
        if (P == b0 && Q == 2)
            break;
        if (period > 50000000)
            throw std::logic_error("fundamental_unit: period overflow");
    }
    FundamentalUnit u;
    u.x = Bcur * b0 + 2 * Bprev;
    u.y = Bcur;
    u.norm = (period % 2) ? -1 : 1;
    mpz_class pell = u.x * u.x - Dz * u.y * u.y;
    if (pell != 4 * u.norm)
        throw std::logic_error("fundamental_unit: Pell identity failed");
    // log((x + y sqrt D)/2) via exponent-split logs; fine as an estimate.
    long ex, ey;
    double mx = mpz_get_d_2exp(&ex, u.x.get_mpz_t());
    double my = mpz_get_d_2exp(&ey, u.y.get_mpz_t());
    double lx = std::log(mx) + double(ex) * std::log(2.0);
    double ly = std::log(my) + double(ey) * std::log(2.0) +
                0.5 * std::log(double(D.value()));
    double m = std::max(lx, ly);
    u.regulator_estimate =
        m + std::log(std::exp(lx - m) + std::exp(ly - m)) - std::log(2.0);
    return u;
}

/*
 * Invariant-factor shape of a finite abelian group: factors form an
 * ascending divisibility chain, each at least 2; empty means trivial.
 */
struct AbelianGroupStructure {
    std::vector<std::uint64_t> invariant_factors;

    std::uint64_t order() const {
        std::uint64_t o = 1;
        for (auto d : invariant_factors)
            o *= d;
        return o;
    }
    unsigned rank() const { return unsigned(invariant_factors.size()); }

    AbelianGroupStructure two_sylow() const {
        AbelianGroupStructure s;
        for (auto d : invariant_factors) {
            std::uint64_t t = 1;
            while (d % 2 == 0) {
                t *= 2;
                d /= 2;
            }
            if (t > 1)
                s.invariant_factors.push_back(t);
        }
        return s;
    }

    bool operator==(const AbelianGroupStructure &o) const {
        return invariant_factors == o.invariant_factors;
    }

    std::string str() const {
        if (invariant_factors.empty())
            return "1";
        std::string s;
        for (std::size_t i = 0; i < invariant_factors.size(); ++i) {
            if (i)
                s += " x ";
            s += "Z/" + std::to_string(invariant_factors[i]);
        }
        return s;
    }
};

namespace detail {

/* Abstract finite abelian group on ids 0..n-1; structure extraction works on
 * this view so the narrow group and its quotients share one implementation. */
struct GroupView {
    std::size_t n;
    int identity;
    std::function<int(int, int)> op;
};

inline int group_pow(const GroupView &G, int g, std::uint64_t k) {
    int acc = G.identity, base = g;
    while (k) {
        if (k & 1)
            acc = G.op(acc, base);
        base = G.op(base, base);
        k >>= 1;
    }
    return acc;
}

/*
 * Invariant factors by element-order analysis, one Sylow subgroup at a time:
 * the image of x -> x^(n/l^e) is the l-Sylow; inside it, greedily pick the
 * element of maximal order in the current quotient (membership tested against
 * an explicit closure set), which yields the type l^{lam1} >= l^{lam2} >= ...
 * Cross-prime factors are then merged index-wise. Generators, when requested,
 * are products of the per-Sylow generators (coprime orders).
 */
inline AbelianGroupStructure group_structure(const GroupView &G,
                                             std::vector<int> *generators = nullptr) {
    std::uint64_t h = G.n;
    std::vector<std::vector<std::pair<std::uint64_t, int>>> per_prime;
    for (auto [l, e] : factor(h)) {
        std::uint64_t le = 1;
        for (unsigned i = 0; i < e; ++i)
            le *= l;
        std::set<int> sylow;
        for (std::size_t x = 0; x < G.n; ++x)
            sylow.insert(group_pow(G, int(x), h / le));
        if (sylow.size() != le)
            throw std::logic_error("group_structure: Sylow image has wrong size");

        std::set<int> H{G.identity};
        std::vector<std::pair<std::uint64_t, int>> gens; // (order, element)
        while (H.size() < sylow.size()) {
            std::uint64_t best_order = 0;
            int best = -1;
            for (int g : sylow) {
                if (H.count(g))
                    continue;
                std::uint64_t ord = 1;
                int x = g;
                while (!H.count(x)) {
                    x = group_pow(G, x, l);
                    ord *= l;
                }
                if (ord > best_order) {
                    best_order = ord;
                    best = g;
                }
            }
            gens.emplace_back(best_order, best);
            std::set<int> closure;
            for (int hh : H) {
                int x = hh;
                for (std::uint64_t j = 0; j < best_order; ++j) {
                    closure.insert(x);
                    x = G.op(x, best);
                }
            }
            H = std::move(closure);
        }
        per_prime.push_back(std::move(gens));
    }

    std::size_t width = 0;
    for (auto &g : per_prime)
        width = std::max(width, g.size());
    AbelianGroupStructure out;
    std::vector<int> gen_ids;
    for (std::size_t i = 0; i < width; ++i) {
        std::uint64_t d = 1;
        int g = G.identity;
        for (auto &list : per_prime)
            if (i < list.size()) {
                d *= list[i].first;
                g = G.op(g, list[i].second);
            }
        out.invariant_factors.push_back(d);
        gen_ids.push_back(g);
    }
    // per-Sylow lists are descending, so the merged chain is too; flip it.
    std::reverse(out.invariant_factors.begin(), out.invariant_factors.end());
    std::reverse(gen_ids.begin(), gen_ids.end());
    if (out.order() != h)
        throw std::logic_error("group_structure: invariant factors do not multiply to the order");
    if (generators)
        *generators = gen_ids;
    return out;
}

} // namespace detail

/*
 * The full set of reduced forms of discriminant D, partitioned into rho
 * cycles; one cycle per narrow ideal class. Composition acts on cycle ids via
 * class representatives, which is all the group structure work needs.
 *
 * Enumeration: for every b of the right parity in (0, sqrt D), each divisor
 * a of (D - b^2)/4 inside the reduction window gives the two reduced forms
 * (a, b, -c) and (-a, b, c). Trial division keeps this exact at desk scale.
 */
class FormClassGroup {
public:
    explicit FormClassGroup(QuadDiscriminant D) : D_(D) {
        const std::uint64_t d = D_.value();
        s64_ = static_cast<std::int64_t>(detail::isqrt(D_.value_mpz()).get_ui());
        enumerate_forms(d);
        partition_cycles();
        identity_ = lookup_reduced(reduce(principal_form()));
    }

    const QuadDiscriminant &disc() const { return D_; }
    std::uint64_t narrow_order() const { return cycle_reps_.size(); }
    int identity_class() const { return identity_; }
    std::size_t reduced_form_count() const { return forms_.size(); }

    BinaryQuadForm principal_form() const {
        mpz_class b0(s64_);
        if ((b0 - D_.value_mpz()) % 2 != 0)
            b0 -= 1;
        return {1, b0, (b0 * b0 - D_.value_mpz()) / 4};
    }

    /* Lexicographically smallest form in the cycle; canonical per class. */
    BinaryQuadForm representative(int cls) const {
        const auto &f = forms_[std::size_t(cycle_reps_.at(std::size_t(cls)))];
        return {mpz_class(long(f[0])), mpz_class(long(f[1])), mpz_class(long(f[2]))};
    }

    int class_of(const BinaryQuadForm &f) const {
        if (f.disc() != D_.value_mpz())
            throw std::invalid_argument("class_of: wrong discriminant");
        return lookup_reduced(reduce(f));
    }

    int compose_classes(int i, int j) const {
        return lookup_reduced(compose(representative(i), representative(j)));
    }

    int power(int cls, std::uint64_t k) const {
        return detail::group_pow(view(), cls, k);
    }

    /* Narrow class of the principal ideal (sqrt D): product of the ramified
     * prime classes over the primes dividing m = D (odd) or D/4 (even).
     * Nontrivial exactly when the fundamental unit has norm +1. */
    int sqrt_disc_class() const {
        int acc = identity_;
        for (auto l : D_.ramified_primes()) {
            if (D_.even() && D_.m() % 2 != 0 && l == 2)
                continue; // (sqrt m) has even valuation at the dyadic prime
            acc = compose_classes(acc, class_of(prime_form(l, D_)));
        }
        return acc;
    }

    int unit_norm() const {
        if (!unit_norm_)
            unit_norm_ = fundamental_unit(D_).norm;
        return *unit_norm_;
    }

    std::uint64_t wide_order() const {
        return unit_norm() == -1 ? narrow_order() : narrow_order() / 2;
    }

    AbelianGroupStructure narrow_structure(std::vector<BinaryQuadForm> *gens = nullptr) const {
        std::vector<int> ids;
        auto st = detail::group_structure(view(), gens ? &ids : nullptr);
        if (gens) {
            gens->clear();
            for (int id : ids)
                gens->push_back(representative(id));
        }
        return st;
    }

    /* Structure of the wide class group: the narrow group modulo the order-2
     * subgroup generated by the class of (sqrt D). */
    AbelianGroupStructure wide_structure() const {
        int s = sqrt_disc_class();
        if ((s == identity_) != (unit_norm() == -1))
            throw std::logic_error("wide_structure: (sqrt D) class contradicts the unit norm");
        if (s == identity_)
            return narrow_structure();

        std::vector<int> coset_of(narrow_order(), -1);
        std::vector<int> coset_rep;
        for (std::size_t c = 0; c < narrow_order(); ++c) {
            if (coset_of[c] >= 0)
                continue;
            int id = int(coset_rep.size());
            coset_of[c] = id;
            coset_of[std::size_t(compose_classes(int(c), s))] = id;
            coset_rep.push_back(int(c));
        }
        detail::GroupView q;
        q.n = coset_rep.size();
        q.identity = coset_of[std::size_t(identity_)];
        q.op = [this, &coset_of, &coset_rep](int i, int j) {
            return coset_of[std::size_t(
                compose_classes(coset_rep[std::size_t(i)], coset_rep[std::size_t(j)]))];
        };
        return detail::group_structure(q);
    }

    /* Order of the class of the prime over l in the wide class group. */
    std::uint64_t wide_class_order(std::uint64_t l) const {
        int g = class_of(prime_form(l, D_));
        int s = sqrt_disc_class();
        std::uint64_t k = 1;
        int x = g;
        while (x != identity_ && x != s) {
            x = compose_classes(x, g);
            if (++k > narrow_order())
                throw std::logic_error("wide_class_order: ran past the group order");
        }
        return k;
    }

private:
    detail::GroupView view() const {
        detail::GroupView v;
        v.n = narrow_order();
        v.identity = identity_;
        v.op = [this](int i, int j) { return compose_classes(i, j); };
        return v;
    }

    static std::uint64_t key(std::int64_t a, std::int64_t b) {
        return (std::uint64_t(std::uint32_t(std::int32_t(a))) << 32) |
               std::uint64_t(std::uint32_t(std::int32_t(b)));
    }

    int lookup_reduced(const BinaryQuadForm &f) const {
        auto it = index_.find(key(f.a.get_si(), f.b.get_si()));
        if (it == index_.end())
            throw std::logic_error("FormClassGroup: reduced form missing from table");
        return cycle_of_[std::size_t(it->second)];
    }

    void enumerate_forms(std::uint64_t d) {
        auto sieve = primes_below(std::uint64_t(std::sqrt(double(d) / 4.0)) + 2);
        for (std::int64_t b = (d % 2) ? 1 : 2; b <= s64_; b += 2) {
            std::uint64_t N = (d - std::uint64_t(b) * std::uint64_t(b)) / 4;
            // divisors of N from its factorization
            std::vector<std::uint64_t> divs{1};
            std::uint64_t rest = N;
            for (auto p : sieve) {
                if (p * p > rest)
                    break;
                if (rest % p)
                    continue;
                unsigned e = 0;
                while (rest % p == 0) {
                    rest /= p;
                    ++e;
                }
                std::size_t base = divs.size();
                std::uint64_t pk = 1;
                for (unsigned k = 1; k <= e; ++k) {
                    pk *= p;
                    for (std::size_t i = 0; i < base; ++i)
                        divs.push_back(divs[i] * pk);
                }
            }
            if (rest > 1) {
                std::size_t base = divs.size();
                for (std::size_t i = 0; i < base; ++i)
                    divs.push_back(divs[i] * rest);
            }
            for (auto a : divs) {
                std::int64_t twoa = 2 * std::int64_t(a);
                if (twoa <= s64_ - b || twoa > s64_ + b)
                    continue;
                std::int64_t c = std::int64_t(N / a);
                if (std::gcd(std::gcd(std::int64_t(a), b), c) != 1)
                    continue;
                forms_.push_back({std::int64_t(a), b, -c});
                forms_.push_back({-std::int64_t(a), b, c});
            }
        }
        index_.reserve(forms_.size() * 2);
        for (std::size_t i = 0; i < forms_.size(); ++i)
            index_.emplace(key(forms_[i][0], forms_[i][1]), int(i));
        if (index_.size() != forms_.size())
            throw std::logic_error("FormClassGroup: duplicate reduced forms");
    }

    /* rho on an already-reduced form stays reduced; walking it partitions the
     * reduced forms into cycles, one per narrow class. */
    std::array<std::int64_t, 3> rho_reduced(const std::array<std::int64_t, 3> &f) const {
        std::int64_t a = f[2];
        std::int64_t twoa = 2 * std::llabs(a);
        std::int64_t shift = (s64_ + f[1]) % twoa; // (s - (-b)) mod 2|a|
        std::int64_t b = s64_ - shift;
        std::int64_t c = (b * b - std::int64_t(D_.value())) / (4 * a);
        return {a, b, c};
    }

    void partition_cycles() {
        cycle_of_.assign(forms_.size(), -1);
        for (std::size_t i = 0; i < forms_.size(); ++i) {
            if (cycle_of_[i] >= 0)
                continue;
            int id = int(cycle_reps_.size());
            std::size_t best = i;
            std::array<std::int64_t, 3> f = forms_[i];
            for (;;) {
                auto it = index_.find(key(f[0], f[1]));
                if (it == index_.end())
                    throw std::logic_error("FormClassGroup: rho left the reduced set");
                std::size_t j = std::size_t(it->second);
                if (cycle_of_[j] >= 0)
                    break;
                cycle_of_[j] = id;
                if (forms_[j] < forms_[best])
                    best = j;
                f = rho_reduced(forms_[j]);
            }
            cycle_reps_.push_back(int(best));
        }
    }

    QuadDiscriminant D_;
    std::int64_t s64_ = 0;
    std::vector<std::array<std::int64_t, 3>> forms_;
    std::unordered_map<std::uint64_t, int> index_;
    std::vector<int> cycle_of_;
    std::vector<int> cycle_reps_;
    int identity_ = 0;
    mutable std::optional<int> unit_norm_;
};

struct NarrowClassGroup {
    AbelianGroupStructure group;
    std::vector<BinaryQuadForm> generators;
};

inline NarrowClassGroup narrow_class_group(const QuadDiscriminant &D) {
    FormClassGroup G(D);
    NarrowClassGroup out;
    out.group = G.narrow_structure(&out.generators);
    return out;
}

/* 2-Sylow subgroup of the wide (ordinary) class group. */
inline AbelianGroupStructure wide_class_group_2part(const QuadDiscriminant &D) {
    return FormClassGroup(D).wide_structure().two_sylow();
}

inline std::uint64_t wide_class_number(const QuadDiscriminant &D) {
    return FormClassGroup(D).wide_order();
}

/* Order of the ideal class of the prime over l in the wide class group. */
inline std::uint64_t ideal_class_order(std::uint64_t l, const QuadDiscriminant &D) {
    return FormClassGroup(D).wide_class_order(l);
}

} // namespace z2tower
