#include <catch2/catch_amalgamated.hpp>

#include <z2tower/zsqrt2.hpp>

#include <random>

using namespace z2tower;

namespace {

Zsqrt2Elem random_elem(std::mt19937_64 &rng, long box) {
    auto pick = [&](long lo, long hi) {
        return long(rng() % std::uint64_t(hi - lo + 1)) + lo;
    };
    return {mpz_class(pick(-box, box)), mpz_class(pick(-box, box))};
}

} // namespace

TEST_CASE("ring arithmetic basics", "[zsqrt2]") {
    Zsqrt2Elem x{7, 2};
    REQUIRE(x.norm() == 41);
    REQUIRE((x * x.conjugate()).a == 41);
    REQUIRE((x * x.conjugate()).b == 0);
    REQUIRE(x.str() == "7+2sqrt2");
    REQUIRE(x.conjugate().str() == "7-2sqrt2");
    REQUIRE(Zsqrt2Elem(0, 1).str() == "sqrt2");
    REQUIRE(Zsqrt2Elem(-3).str() == "-3");
    // norm is multiplicative
    Zsqrt2Elem y{3, -5};
    REQUIRE((x * y).norm() == x.norm() * y.norm());
}

TEST_CASE("euclidean division: remainder norm strictly shrinks", "[zsqrt2]") {
    std::mt19937_64 rng(0x5eed0101);
    int nontrivial = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        Zsqrt2Elem x = random_elem(rng, 1000000);
        Zsqrt2Elem y = random_elem(rng, 10000);
        if (y.is_zero())
            continue;
        auto [q, r] = euclidean_divmod(x, y);
        REQUIRE(q * y + r == x);
        REQUIRE(abs(r.norm()) < abs(y.norm()));
        if (!r.is_zero())
            ++nontrivial;
    }
    REQUIRE(nontrivial > 9000); // the property is not passing vacuously
}

TEST_CASE("gcd divides both arguments and is hit by common divisors", "[zsqrt2]") {
    std::mt19937_64 rng(0x5eed0102);
    for (int trial = 0; trial < 2000; ++trial) {
        Zsqrt2Elem d = random_elem(rng, 50);
        Zsqrt2Elem x = random_elem(rng, 200) * d;
        Zsqrt2Elem y = random_elem(rng, 200) * d;
        if (x.is_zero() && y.is_zero())
            continue;
        Zsqrt2Elem g = gcd(x, y);
        REQUIRE_FALSE(g.is_zero());
        REQUIRE(divide_exact(x, g).has_value());
        REQUIRE(divide_exact(y, g).has_value());
        if (!d.is_zero())
            REQUIRE(divide_exact(g, d).has_value());
    }
}

TEST_CASE("prime splitting: frozen examples", "[zsqrt2]") {
    auto f41 = factor_rational_prime(41);
    REQUIRE(f41.type == SplittingType::split);
    REQUIRE(f41.factors.size() == 2);
    REQUIRE(f41.factors[0] == Zsqrt2Elem{7, 2});
    REQUIRE(f41.factors[1] == Zsqrt2Elem{7, -2});
    // the two factors are non-associate: their ratio is not in the ring
    REQUIRE_FALSE(divide_exact(f41.factors[0], f41.factors[1]).has_value());

    REQUIRE(factor_rational_prime(3).type == SplittingType::inert);
    REQUIRE(factor_rational_prime(3).factors.empty());

    auto f2 = factor_rational_prime(2);
    REQUIRE(f2.type == SplittingType::ramified);
    REQUIRE(f2.factors == std::vector<Zsqrt2Elem>{Zsqrt2Elem{0, 1}});

    REQUIRE_THROWS_AS(factor_rational_prime(15), std::invalid_argument);
}

TEST_CASE("prime splitting matches the mod-8 law below 10000", "[zsqrt2]") {
    for (auto p : primes_below(10000)) {
        auto f = factor_rational_prime(p);
        unsigned long m8 = p % 8;
        if (p == 2) {
            REQUIRE(f.type == SplittingType::ramified);
        } else if (m8 == 1 || m8 == 7) {
            REQUIRE(f.type == SplittingType::split);
            REQUIRE(f.factors.size() == 2);
            mpz_class n = f.factors[0].norm();
            REQUIRE(abs(n) == p);
            REQUIRE(f.factors[1] == f.factors[0].conjugate());
            REQUIRE_FALSE(divide_exact(f.factors[0], f.factors[1]).has_value());
        } else {
            REQUIRE(f.type == SplittingType::inert);
        }
    }
}

TEST_CASE("totally positive associate: frozen examples", "[zsqrt2]") {
    // 7 + 2sqrt2 is already the canonical representative over 41.
    REQUIRE(totally_positive_associate({7, 2}) == Zsqrt2Elem{7, 2});
    REQUIRE(totally_positive_associate({7, -2}) == Zsqrt2Elem{7, -2});
    // A unit multiple walks back to the same representative.
    Zsqrt2Elem eps2{3, 2};
    REQUIRE(totally_positive_associate(Zsqrt2Elem{7, 2} * eps2 * eps2) ==
            Zsqrt2Elem{7, 2});
    REQUIRE(totally_positive_associate(-(Zsqrt2Elem{7, -2} * eps2)) ==
            Zsqrt2Elem{7, -2});
    // Negative norm is rejected.
    REQUIRE_THROWS_AS(totally_positive_associate({1, 1}), std::invalid_argument);
}

TEST_CASE("totally positive associate is canonical on unit orbits", "[zsqrt2]") {
    std::mt19937_64 rng(0x5eed0103);
    const Zsqrt2Elem eps2{3, 2};
    for (int trial = 0; trial < 2000; ++trial) {
        Zsqrt2Elem x = random_elem(rng, 300);
        if (x.is_zero() || x.norm() <= 0)
            continue;
        Zsqrt2Elem c = totally_positive_associate(x);
        REQUIRE(is_totally_positive(c));
        REQUIRE(abs(c.norm()) == abs(x.norm()));
        // every unit translate of the input lands on the same representative
        Zsqrt2Elem y = x;
        for (int k = 0; k < 3; ++k) {
            y = y * eps2;
            REQUIRE(totally_positive_associate(y) == c);
            REQUIRE(totally_positive_associate(-y) == c);
        }
        // and c really is the a-minimal totally positive associate
        REQUIRE((c * eps2).a >= c.a);
        REQUIRE((c * Zsqrt2Elem{3, -2}).a >= c.a);
    }
}

TEST_CASE("residue classes: frozen examples", "[zsqrt2]") {
    using P = std::pair<unsigned long, unsigned long>;
    REQUIRE(residue_class_mod_4sqrt2({7, 2}) == P{7, 2});
    REQUIRE(residue_class_mod_4sqrt2({3, 0}) == P{3, 0});
    REQUIRE(residue_class_mod_4sqrt2({3, 2}) == P{3, 2});
    // -(1+2sqrt2) = (-1, -2) lies in class (7, 2): same as the prime over 41
    REQUIRE(residue_class_mod_4sqrt2({-1, -2}) == P{7, 2});
    REQUIRE(residue_class_mod_4({7, 2}) == P{3, 2});
}

TEST_CASE("residue classes respect the ideal lattices", "[zsqrt2]") {
    std::mt19937_64 rng(0x5eed0104);
    const Zsqrt2Elem four_sqrt2{0, 4}, four{4, 0};
    for (int trial = 0; trial < 2000; ++trial) {
        Zsqrt2Elem x = random_elem(rng, 1000);
        Zsqrt2Elem t = random_elem(rng, 1000);
        REQUIRE(residue_class_mod_4sqrt2(x + t * four_sqrt2) ==
                residue_class_mod_4sqrt2(x));
        REQUIRE(residue_class_mod_4(x + t * four) == residue_class_mod_4(x));
    }
}

TEST_CASE("behavior of (sqrt2) in quadratic extensions: frozen examples",
          "[zsqrt2]") {
    REQUIRE(classify_sqrt2_behavior({7, 2}) == SplittingType::inert);
    REQUIRE(classify_sqrt2_behavior({3, 2}) == SplittingType::split);
    REQUIRE(classify_sqrt2_behavior({3, 0}) == SplittingType::ramified);
    REQUIRE(classify_sqrt2_behavior({1, 0}) == SplittingType::split);
    REQUIRE_THROWS_AS(classify_sqrt2_behavior({2, 1}), std::invalid_argument);
}

TEST_CASE("classification is invariant under multiplication by squares of odd elements",
          "[zsqrt2]") {
    // The extension Q1(sqrt(alpha)) only depends on alpha up to squares; an
    // odd square is 1 or 3+2sqrt2 mod 4sqrt2, so the residue criterion must
    // give the same answer on alpha * s^2 whenever s^2 = 1 (mod 4sqrt2).
    std::mt19937_64 rng(0x5eed0105);
    int checked = 0;
    for (int trial = 0; trial < 4000; ++trial) {
        Zsqrt2Elem alpha = random_elem(rng, 500);
        Zsqrt2Elem s = random_elem(rng, 50);
        if (mpz_even_p(alpha.a.get_mpz_t()) || mpz_even_p(s.a.get_mpz_t()))
            continue;
        using P = std::pair<unsigned long, unsigned long>;
        if (residue_class_mod_4sqrt2(s * s) != P{1, 0})
            continue;
        REQUIRE(classify_sqrt2_behavior(alpha * s * s) ==
                classify_sqrt2_behavior(alpha));
        ++checked;
    }
    REQUIRE(checked > 300);
}

TEST_CASE("fundamental unit of Q(sqrt2)", "[zsqrt2]") {
    Zsqrt2Elem eps = fundamental_unit_Q1();
    REQUIRE(eps == Zsqrt2Elem{1, 1});
    REQUIRE(eps.norm() == -1);
    REQUIRE(eps * eps == Zsqrt2Elem{3, 2});
}
