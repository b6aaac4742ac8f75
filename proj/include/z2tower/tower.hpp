#pragma once

#include <z2tower/arith.hpp>
#include <z2tower/biquad.hpp>
#include <z2tower/genus.hpp>
#include <z2tower/hilbert.hpp>
#include <z2tower/quadform.hpp>
#include <z2tower/zsqrt2.hpp>

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace z2tower {

struct Triple {
    std::uint64_t p = 0, q = 0, r = 0;

    friend bool operator==(const Triple &x, const Triple &y) {
        return x.p == y.p && x.q == y.q && x.r == y.r;
    }
    friend bool operator<(const Triple &x, const Triple &y) {
        return std::tie(x.p, x.q, x.r) < std::tie(y.p, y.q, y.r);
    }
    std::string str() const {
        return std::to_string(p) + "," + std::to_string(q) + "," + std::to_string(r);
    }
};

/*
 * All triples (p, q, r) with p <= p_max, q < r, q <= q_max, r <= r_max that
 * satisfy the entry condition: p = 9 (mod 16), q = r = 3 (mod 8),
 * (qr/p) = -1 and 2 a quartic non-residue mod p. Deterministic order:
 * ascending p, then q, then r.
 */
inline std::vector<Triple> scan(std::uint64_t p_max, std::uint64_t q_max,
                                std::uint64_t r_max) {
    std::vector<Triple> out;
    auto small = primes_below(std::max(q_max, r_max) + 1);
    for (std::uint64_t p : primes_below(p_max + 1)) {
        if (p % 16 != 9)
            continue;
        for (std::uint64_t q : small) {
            if (q > q_max || q % 8 != 3)
                continue;
            for (std::uint64_t r : small) {
                if (r <= q || r > r_max || r % 8 != 3)
                    continue;
                if (check_condition1(p, q, r).passes())
                    out.push_back({p, q, r});
            }
        }
    }
    return out;
}

/* One verified claim: what was asserted, what came out, and the data that
 * settles it. Keys follow the fixed report schema. */
struct CheckResult {
    std::string key;
    std::string claimed;
    std::string computed;
    bool pass = false;
    std::string evidence;
};

/* Global norm facts over Q(sqrt2) feeding the level-1 rank computation. */
struct NormFacts {
    SymbolTable unit_table;      // (1 + sqrt2, pqr)
    SymbolTable minus_one_table; // (-1, pqr)
    bool unit_is_norm = true;
    bool minus_one_is_norm = false;
};

struct TripleReport {
    Triple triple;
    ConditionReport condition1;
    AbelianGroupStructure a_k; // 2-part of the class group of Q(sqrt(pqr))
    AbelianGroupStructure a_f; // 2-part for Q(sqrt(2pqr))
    NormFacts norm_facts;
    unsigned rank_a_k1 = 0;
    std::uint64_t order_a_k1 = 0;
    bool kuroda_checked = false;       // false when the bound-only route ran
    std::uint64_t kuroda_two_part = 0; // 0 when skipped
    unsigned rank_a_k2_bound = 0;
    std::uint64_t aprime_k0 = 0;
    std::uint64_t aprime_k1 = 0;
    std::uint64_t d_k0_order = 0;
    std::uint64_t d_k1_order = 0;
    unsigned a1 = 0;
    std::string x_prime_structure;
    std::string x_structure;
    std::vector<std::string> stability_notes;
    std::vector<CheckResult> checks;
    bool overall = false;

    const CheckResult *find(const std::string &key) const {
        for (const auto &c : checks)
            if (c.key == key)
                return &c;
        return nullptr;
    }
};

namespace detail {

inline std::string sv_str(SymbolValue v) {
    int i = int(v);
    return i > 0 ? "+1" : (i < 0 ? "-1" : "0");
}

inline std::string yesno(bool b) { return b ? "yes" : "no"; }

/* Order of the image of a class in the 2-Sylow subgroup: the claims live in
 * 2-class groups, so odd cofactors of an ideal class order are irrelevant. */
inline std::uint64_t two_part_of(std::uint64_t n) {
    std::uint64_t t = 1;
    while (n % 2 == 0) {
        t *= 2;
        n /= 2;
    }
    return t;
}

inline std::string symbol_table_str(const SymbolTable &t) {
    std::ostringstream os;
    os << "(" << t.alpha.str() << ", " << t.beta.str() << "):";
    for (const auto &[place, value] : t.entries)
        os << " " << place.str() << "=" << sv_str(value);
    return os.str();
}

inline std::string group_str(const AbelianGroupStructure &g) {
    return g.invariant_factors.empty() ? std::string("trivial") : g.str();
}

/* Totally positive canonical generator of a split prime: fix the norm sign
 * with the fundamental unit, then take the canonical associate. */
inline Zsqrt2Elem totally_positive_prime_generator(const Zsqrt2Elem &pi) {
    Zsqrt2Elem x = pi;
    if (x.norm() < 0)
        x = x * fundamental_unit_Q1();
    return totally_positive_associate(x);
}

/* The residue classes mod 4sqrt2 available to totally positive generators of
 * primes over p = 1 (mod 8): +-3 and +-(1+2sqrt2). */
inline bool residue_in_generator_set(const Zsqrt2Elem &x) {
    auto rc = residue_class_mod_4sqrt2(x);
    return rc == std::pair<unsigned long, unsigned long>{3, 0} ||
           rc == std::pair<unsigned long, unsigned long>{5, 0} ||
           rc == std::pair<unsigned long, unsigned long>{1, 2} ||
           rc == std::pair<unsigned long, unsigned long>{7, 2};
}

} // namespace detail

/*
 * Level 0: the base field k = Q(sqrt(pqr)) and its genus data.
 *   - A(k) = Z/2, tied to the symbol criterion -1 in {(q/p), (r/p)}
 *   - A(F) = Z/2 x Z/2 for F = Q(sqrt(2pqr)), with the ramified prime
 *     classes of order 2
 *   - 2 splits completely in the genus field k(sqrt p), so #A'(k) = 2
 *   - the dyadic prime class of k is trivial (D(k_0) = 1)
 */
inline void verify_level0(TripleReport &R,
                          std::uint64_t disc_bound = default_discriminant_bound) {
    const OddPrime p(R.triple.p), q(R.triple.q), r(R.triple.r);
    const mpz_class d = p.value() * q.value() * r.value();
    const QuadDiscriminant Dk(d, disc_bound), Df(8 * d, disc_bound);

    {
        R.a_k = wide_class_group_2part(Dk);
        SymbolValue qp = legendre(q.value(), p), rp = legendre(r.value(), p);
        bool hyp = int(qp) == -1 || int(rp) == -1;
        GenusField gk = genus_field(d.get_ui(), disc_bound);
        auto has_radicand = [&gk](std::uint64_t m) {
            return std::find(gk.real_radicands.begin(), gk.real_radicands.end(), m) !=
                   gk.real_radicands.end();
        };
        unsigned e0 = norm_index_over_q(d);
        std::uint64_t amb = ambiguous_class_order(3, e0, 1);
        bool pass = R.a_k.invariant_factors == std::vector<std::uint64_t>{2} && hyp &&
                    e0 == 1 && amb == 2 && has_radicand(R.triple.p) &&
                    has_radicand(R.triple.q * R.triple.r);
        std::ostringstream ev;
        ev << "(q/p)=" << detail::sv_str(qp) << " (r/p)=" << detail::sv_str(rp)
           << "; wide 2-Sylow " << detail::group_str(R.a_k)
           << "; genus field adds sqrt(" << gk.real_radicands.front() << "), sqrt("
           << gk.real_radicands.back() << "), so k_G = k(sqrt " << R.triple.p
           << "); t=3, unit norm index 2^" << e0 << ", ambiguous order " << amb;
        R.checks.push_back({"lemma31", "#A(k) = 2 precisely when -1 is among (q/p), (r/p)",
                            "#A(k) = " + std::to_string(R.a_k.order()), pass, ev.str()});
    }

    {
        R.a_f = wide_class_group_2part(Df);
        std::uint64_t op = detail::two_part_of(ideal_class_order(R.triple.p, Df)),
                      oq = detail::two_part_of(ideal_class_order(R.triple.q, Df)),
                      orr = detail::two_part_of(ideal_class_order(R.triple.r, Df));
        bool pass = R.a_f.invariant_factors == std::vector<std::uint64_t>{2, 2} &&
                    op == 2 && oq == 2 && orr == 2;
        std::ostringstream ev;
        ev << "wide 2-Sylow " << detail::group_str(R.a_f)
           << "; ramified classes in it: [p]=ord " << op << ", [q]=ord " << oq
           << ", [r]=ord " << orr;
        R.checks.push_back({"lemma32", "A(F) = Z/2 x Z/2 for F = Q(sqrt(2pqr))",
                            detail::group_str(R.a_f), pass, ev.str()});
    }

    std::uint64_t dyadic_full_order = ideal_class_order(2, Dk);
    R.d_k0_order = detail::two_part_of(dyadic_full_order);

    {
        bool sp = two_splits_completely(p, q, r);
        R.aprime_k0 = R.a_k.order() / R.d_k0_order;
        bool pass = sp && R.aprime_k0 == 2;
        std::ostringstream ev;
        ev << "p mod 8 = " << p.residue(8) << ", qr mod 8 = "
           << (q.residue(8) * r.residue(8)) % 8
           << "; 2 splits completely in the genus field: " << detail::yesno(sp)
           << "; #A(k)/#D(k_0) = " << R.a_k.order() << "/" << R.d_k0_order;
        R.checks.push_back({"prop41", "#A'(k_0) = 2",
                            std::to_string(R.aprime_k0), pass, ev.str()});
    }

    {
        bool pass = R.d_k0_order == 1;
        std::ostringstream ev;
        ev << "class over 2 in disc " << d.get_str() << ": full order "
           << dyadic_full_order << ", order " << R.d_k0_order
           << " in the 2-class group";
        R.checks.push_back({"remark42", "the dyadic prime class of k is trivial",
                            "order " + std::to_string(R.d_k0_order), pass, ev.str()});
    }
}

/*
 * Level 1: k_1 = Q(sqrt2, sqrt(pqr)).
 *   - 1+sqrt2 is not a norm from Q_1(sqrt(pqr)), -1 is
 *   - genus formula over Q_1: t = 4 ramified places, unit index 2, so
 *     rank_2 A(k_1) = 2
 *   - #A(k_1) <= #A(k_0) #A(k_0') / 2 = 4; with rank 2 this pins order 4
 *   - independent class number formula route confirms the 2-part is 4
 *   - the unramified elementary quadratics over k_1: dyadic primes split
 *     only in k_1(sqrt p), stay inert over sqrt(p_1) and sqrt(p_2 qr), so
 *     #A'(k_1) = 2, D(k_1) = Z/2 and a_1 = 1
 */
inline void verify_level1(TripleReport &R, bool skip_kuroda = false) {
    const OddPrime p(R.triple.p), q(R.triple.q), r(R.triple.r);
    const mpz_class d = p.value() * q.value() * r.value();
    const Zsqrt2Elem eps = fundamental_unit_Q1();
    const Zsqrt2Elem minus_one{-1, 0};

    {
        R.norm_facts.unit_table = symbol_table(eps, Zsqrt2Elem{d, 0});
        R.norm_facts.unit_is_norm = is_global_norm(eps, d);
        bool pass = !R.norm_facts.unit_is_norm;
        R.checks.push_back({"prop33", "1+sqrt2 is not a norm from Q_1(sqrt(pqr))",
                            std::string("is a norm: ") +
                                detail::yesno(R.norm_facts.unit_is_norm),
                            pass, detail::symbol_table_str(R.norm_facts.unit_table)});
    }

    {
        R.norm_facts.minus_one_table = symbol_table(minus_one, Zsqrt2Elem{d, 0});
        R.norm_facts.minus_one_is_norm = is_global_norm(minus_one, d);
        unsigned e1 = norm_index_over_q1(d);
        std::uint64_t t1 = ramified_places_in_tower(d.get_ui(), 1);
        std::uint64_t amb = (t1 >= 1 && e1 <= t1 - 1)
                                ? ambiguous_class_order(unsigned(t1), e1, 1)
                                : 0;
        bool pass = R.norm_facts.minus_one_is_norm && e1 == 1 && t1 == 4 && amb == 4;
        if (pass)
            R.rank_a_k1 = 2;
        std::ostringstream ev;
        ev << detail::symbol_table_str(R.norm_facts.minus_one_table)
           << "; unit norm index 2^" << e1 << "; ramified places in k_1/Q_1: " << t1
           << "; ambiguous order " << amb << " = 2^rank";
        R.checks.push_back({"lemma34", "-1 is a norm and rank_2 A(k_1) = 2",
                            "rank " + std::to_string(R.rank_a_k1), pass, ev.str()});
    }

    std::uint64_t bound = 0;
    {
        bound = R.a_k.order() * R.a_f.order() / 2;
        bool pass = bound == 4 && R.rank_a_k1 == 2;
        if (pass)
            R.order_a_k1 = 4; // squeezed: 2^rank <= #A(k_1) <= bound
        std::ostringstream ev;
        ev << "#A(k_0) = " << R.a_k.order() << ", #A(k_0') = " << R.a_f.order()
           << ", bound " << bound << "; 2^rank = " << (1u << R.rank_a_k1)
           << " squeezes #A(k_1) = 4";
        R.checks.push_back({"prop35", "#A(k_1) <= #A(k_0) #A(k_0') / 2 = 4",
                            "bound " + std::to_string(bound), pass, ev.str()});
    }

    {
        bool pass = false;
        std::string computed;
        std::ostringstream ev;
        if (skip_kuroda) {
            R.kuroda_checked = false;
            pass = R.order_a_k1 == 4 && R.rank_a_k1 == 2;
            computed = "bound-only";
            ev << "independent class-number route skipped; order 4 rests on the "
                  "rank-2 squeeze against the level-0 bound";
        } else {
            R.kuroda_checked = true;
            BiquadClassData kd = kuroda_class_number(2, d.get_ui());
            R.kuroda_two_part = kd.two_part();
            // Two routes to #A(k_1): the squeeze above and the class number
            // formula. Any disagreement is a hard failure; neither side wins.
            pass = R.kuroda_two_part == 4 && R.order_a_k1 == 4;
            computed = "2-part " + std::to_string(R.kuroda_two_part);
            ev << "h(k_1) = Q h1 h2 h3 / 4 with Q = " << kd.unit_index_q << ", h("
               << "sqrt2) = " << kd.h_m << ", h(sqrt(pqr)) = " << kd.h_n
               << ", h(sqrt(2pqr)) = " << kd.h_l << ": h = " << kd.class_number
               << ", 2-part " << R.kuroda_two_part;
            if (R.kuroda_two_part != (R.order_a_k1 ? R.order_a_k1 : bound))
                ev << "; DISAGREES with the bound route (" << R.order_a_k1 << ")";
        }
        if (pass)
            R.order_a_k1 = 4;
        bool structure_pins = R.order_a_k1 == 4 && R.rank_a_k1 == 2;
        std::ostringstream cv;
        cv << computed << "; order " << R.order_a_k1 << ", rank " << R.rank_a_k1
           << (structure_pins ? " => Z/2 x Z/2" : " => structure not pinned");
        R.checks.push_back({"cor36", "A(k_1) = Z/2 x Z/2", cv.str(),
                            pass && structure_pins, ev.str()});
    }

    {
        auto fact = factor_rational_prime(p.value());
        bool split_over_p = fact.type == SplittingType::split;
        std::ostringstream ev;
        bool pass = split_over_p;
        Zsqrt2Elem p1{0, 0}, p2{0, 0};
        SplittingType c1 = SplittingType::ramified, c2 = SplittingType::ramified;
        bool in_set = false, dyadic_split = false;
        if (split_over_p) {
            p1 = detail::totally_positive_prime_generator(fact.factors[0]);
            p2 = detail::totally_positive_prime_generator(fact.factors[1]);
            Zsqrt2Elem p2qr{p2.a * q.value() * r.value(),
                            p2.b * q.value() * r.value()};
            c1 = classify_sqrt2_behavior(p1);
            c2 = classify_sqrt2_behavior(p2qr);
            in_set = detail::residue_in_generator_set(p1) &&
                     detail::residue_in_generator_set(p2);
            dyadic_split = two_splits_completely(p, q, r);
            auto rc1 = residue_class_mod_4sqrt2(p1), rc2 = residue_class_mod_4sqrt2(p2);
            ev << "p = (" << p1.str() << ")(" << p2.str() << "), residues mod 4sqrt2: ("
               << rc1.first << "," << rc1.second << "), (" << rc2.first << ","
               << rc2.second << "); sqrt2 in Q_1(sqrt(" << p1.str()
               << "))/Q_1: " << to_string(c1) << "; in Q_1(sqrt(" << p2qr.str()
               << "))/Q_1: " << to_string(c2)
               << "; dyadic primes split in k_1(sqrt p): " << detail::yesno(dyadic_split)
               << "; unramified 2-elementary extension: k_1(sqrt p_1, sqrt p)";
            pass = c1 == SplittingType::inert && c2 == SplittingType::inert && in_set &&
                   dyadic_split && R.order_a_k1 == 4;
        } else {
            ev << "p unexpectedly non-split over Q_1";
        }
        if (pass) {
            R.aprime_k1 = 2;
            R.d_k1_order = R.order_a_k1 / R.aprime_k1;
            R.a1 = 0;
            for (std::uint64_t v = R.d_k1_order; v > 1; v /= 2)
                ++R.a1;
        }
        bool inv = pass && R.order_a_k1 == R.d_k1_order * R.aprime_k1 && R.a1 <= 1;
        std::ostringstream cv;
        cv << "#A'(k_1) = " << R.aprime_k1 << ", #D(k_1) = " << R.d_k1_order
           << ", a_1 = " << R.a1;
        R.checks.push_back(
            {"thm11", "#A'(k_1) = 2, D(k_1) = Z/2, a_1 = 1", cv.str(), inv, ev.str()});
    }
}

/*
 * Level 2 rank: four ramified places survive at level 2 (the two places over
 * p stay inert in Q_2/Q_1 because p = 9 mod 16, and q, r have a single place
 * each), the level-1 norm obstruction lifts along the tower, so the genus
 * bound caps the rank at 2; the norm surjection down the totally ramified
 * tower forces at least the level-1 rank. Hence rank_2 A(k_2) = 2.
 */
inline void verify_level2(TripleReport &R) {
    const OddPrime p(R.triple.p), q(R.triple.q), r(R.triple.r);
    const std::uint64_t d = R.triple.p * R.triple.q * R.triple.r;

    auto sp = splitting_in_qn(p, 2);
    auto sp1 = splitting_in_qn(p, 1);
    auto sq = splitting_in_qn(q, 2);
    auto sr = splitting_in_qn(r, 2);
    std::uint64_t t2 = ramified_places_in_tower(d, 2);
    const CheckResult *obstruction = R.find("prop33");
    bool pass = sp1.g == 2 && sp1.f == 1 && sp.g == 2 && sp.f == 2 && sq.g == 1 &&
                sr.g == 1 && t2 == 4 && obstruction && obstruction->pass &&
                R.rank_a_k1 == 2;
    if (pass)
        R.rank_a_k2_bound = 2;
    std::ostringstream ev;
    ev << "places over p in Q_1: " << sp1.g << " (split), in Q_2: " << sp.g
       << " with residue degree " << sp.f << " (inert step); over q: " << sq.g
       << ", over r: " << sr.g << "; total ramified in k_2/Q_2: " << t2
       << "; unit-norm obstruction lifts by norm compatibility, so the index "
          "term stays >= 2 and the genus bound gives rank <= 2; the norm "
          "surjection onto A(k_1) gives rank >= 2";
    R.checks.push_back({"lemma37", "rank_2 A(k_2) = 2",
                        "rank " + std::to_string(R.rank_a_k2_bound), pass, ev.str()});
}

/*
 * Final structure claims. Gated on every earlier check: a failed pipeline
 * leaves the structure fields empty.
 */
inline void assemble_structure(TripleReport &R) {
    bool all = true;
    for (const auto &c : R.checks)
        all = all && c.pass;

    bool rank_monotone = R.a_k.rank() == 1 && R.rank_a_k1 == 2 && R.rank_a_k2_bound == 2;
    bool exact_sequence = R.order_a_k1 == R.d_k1_order * R.aprime_k1;
    bool aprime_stable = R.aprime_k0 == 2 && R.aprime_k1 == 2;
    bool pass = all && rank_monotone && exact_sequence && aprime_stable;

    std::ostringstream ev;
    ev << "rank chain 1 -> 2 -> 2: " << detail::yesno(rank_monotone)
       << "; #A(k_1) = #D(k_1) #A'(k_1): " << detail::yesno(exact_sequence)
       << "; #A'(k_0) = #A'(k_1) = 2: " << detail::yesno(aprime_stable);

    if (pass) {
        R.stability_notes = {
            "order stability: #A'(k_0) = #A'(k_1) = 2 at consecutive layers of "
            "the totally ramified 2-tower forces #A'(k_n) = 2 for every n >= 0",
            "rank stability: rank_2 A(k_1) = 2 together with the level-2 rank "
            "computation forces rank_2 A(k_n) = 2 for every n >= 1",
            "a_n growth: D(k_n) is cyclic, generated by a dyadic prime class, "
            "so #A(k_n) = 2^(1 + a_n) with a_1 = 1 and a_n <= n",
        };
        R.x_prime_structure = "Z/2Z";
        R.x_structure =
            "Z/2Z x Z/2^a Z (a = a_{n0} >= 1; a_1 = 1 machine-checked; the "
            "eventual value a_{n0} and lambda = 0 are paper-derived, not "
            "machine-checked)";
        ev << "; limit claims labeled: the value of a_{n0} and lambda = 0 are "
              "paper-derived, not machine-checked";
    } else {
        R.stability_notes.clear();
        R.x_prime_structure.clear();
        R.x_structure.clear();
    }

    R.checks.push_back({"structure",
                        "X'(tower limit) = Z/2Z and X = Z/2Z x Z/2^{a_{n0}} Z "
                        "(a_{n0} paper-derived, not machine-checked)",
                        pass ? R.x_prime_structure + "; " + R.x_structure
                             : std::string("not assembled"),
                        pass, ev.str()});
    R.overall = pass;
}

/*
 * Full pipeline for one triple. The entry condition is a precondition, not a
 * verification target: a triple that fails it is rejected up front.
 */
inline TripleReport verify_triple(std::uint64_t p, std::uint64_t q, std::uint64_t r,
                                  bool skip_kuroda = false,
                                  std::uint64_t disc_bound = default_discriminant_bound) {
    if (q > r)
        std::swap(q, r); // the condition is symmetric in q and r
    TripleReport R;
    R.triple = {p, q, r};
    R.condition1 = check_condition1(p, q, r);
    if (!R.condition1.passes()) {
        std::ostringstream os;
        os << "triple " << R.triple.str() << " fails the entry condition: "
           << "p=9 mod 16: " << detail::yesno(R.condition1.p_is_9_mod_16)
           << ", q=3 mod 8: " << detail::yesno(R.condition1.q_is_3_mod_8)
           << ", r=3 mod 8: " << detail::yesno(R.condition1.r_is_3_mod_8)
           << ", (qr/p)=" << detail::sv_str(R.condition1.legendre_qr_p)
           << ", quartic(2|p)=" << detail::sv_str(R.condition1.quartic_two_p);
        throw std::invalid_argument(os.str());
    }
    {
        std::ostringstream ev;
        ev << "p mod 16 = 9: " << detail::yesno(R.condition1.p_is_9_mod_16)
           << "; q mod 8 = 3: " << detail::yesno(R.condition1.q_is_3_mod_8)
           << "; r mod 8 = 3: " << detail::yesno(R.condition1.r_is_3_mod_8)
           << "; (qr/p) = " << detail::sv_str(R.condition1.legendre_qr_p)
           << "; 2^((p-1)/4) mod p = " << detail::sv_str(R.condition1.quartic_two_p);
        R.checks.push_back({"condition1",
                            "p = 9 (16), q = r = 3 (8), (qr/p) = -1, (2/p)_4 = -1",
                            "all clauses hold", true, ev.str()});
    }
    verify_level0(R, disc_bound);
    verify_level1(R, skip_kuroda);
    verify_level2(R);
    assemble_structure(R);
    return R;
}

} // namespace z2tower
