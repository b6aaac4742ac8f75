#include <catch2/catch_amalgamated.hpp>

#include <z2tower/quadform.hpp>

#include <random>
#include <set>
#include <vector>

using namespace z2tower;

namespace {

std::vector<std::uint64_t> fundamental_discs(std::uint64_t below) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 5; d < below; ++d) {
        if (d % 4 == 2 || d % 4 == 3)
            continue;
        try {
            QuadDiscriminant D(d);
            out.push_back(d);
        } catch (const std::invalid_argument &) {
        }
    }
    return out;
}

} // namespace

TEST_CASE("discriminant validation") {
    CHECK(QuadDiscriminant(5).value() == 5);
    CHECK(QuadDiscriminant(8).m() == 2);
    CHECK(QuadDiscriminant(12).m() == 3);
    CHECK(QuadDiscriminant(5289).ramified_primes() ==
          std::vector<std::uint64_t>{3, 41, 43});
    CHECK(QuadDiscriminant(42312).ramified_primes() ==
          std::vector<std::uint64_t>{2, 3, 41, 43});

    CHECK_THROWS_AS(QuadDiscriminant(0), std::invalid_argument);
    CHECK_THROWS_AS(QuadDiscriminant(mpz_class(-4)), std::invalid_argument);
    CHECK_THROWS_AS(QuadDiscriminant(7), std::invalid_argument);   // 3 mod 4
    CHECK_THROWS_AS(QuadDiscriminant(6), std::invalid_argument);   // 2 mod 4
    CHECK_THROWS_AS(QuadDiscriminant(9), std::invalid_argument);   // square
    CHECK_THROWS_AS(QuadDiscriminant(45), std::invalid_argument);  // 9 | 45
    CHECK_THROWS_AS(QuadDiscriminant(20), std::invalid_argument);  // D/4 = 1 mod 4
    CHECK_THROWS_AS(QuadDiscriminant(48), std::invalid_argument);  // D/4 not squarefree

    CHECK_THROWS_AS(QuadDiscriminant(mpz_class("1000000016")), ResourceError);
    CHECK_THROWS_AS(QuadDiscriminant(5289, 1000), ResourceError);
}

TEST_CASE("reduction of indefinite forms") {
    BinaryQuadForm f{1, 2, -1}; // disc 8
    CHECK(is_reduced(f));
    CHECK(reduce(f) == f);

    BinaryQuadForm g{1, 71, -62}; // disc 5289
    CHECK(is_reduced(g));
    CHECK(reduce(g) == g);

    BinaryQuadForm h{1, 9, 19}; // disc 5, far from reduced
    CHECK_FALSE(is_reduced(h));
    BinaryQuadForm hr = reduce(h);
    CHECK(hr.disc() == 5);
    CHECK(is_reduced(hr));
    CHECK(hr == BinaryQuadForm{1, 1, -1});

    CHECK_THROWS_AS(reduce(BinaryQuadForm{1, 2, 1}), std::invalid_argument);  // disc 0
    CHECK_THROWS_AS(reduce(BinaryQuadForm{1, 3, 0}), std::invalid_argument);  // disc 9
    CHECK_THROWS_AS(reduce(BinaryQuadForm{1, 0, 1}), std::invalid_argument);  // negative
}

TEST_CASE("reduction respects classes under translation") {
    std::mt19937_64 rng(20260814);
    for (std::uint64_t d : {std::uint64_t(40), std::uint64_t(229),
                            std::uint64_t(5289), std::uint64_t(42312)}) {
        FormClassGroup G{QuadDiscriminant(d)};
        for (int trial = 0; trial < 40; ++trial) {
            int cls = int(rng() % G.narrow_order());
            BinaryQuadForm f = G.representative(cls);
            long k = long(rng() % 7) - 3;
            if (k == 0)
                k = 4;
            BinaryQuadForm t{f.a, f.b + 2 * k * f.a, 0};
            t.c = (t.b * t.b - G.disc().value_mpz()) / (4 * t.a);
            REQUIRE(t.disc() == G.disc().value_mpz());
            CHECK(G.class_of(t) == cls);
        }
    }
}

TEST_CASE("fundamental units for small discriminants") {
    auto u5 = fundamental_unit(QuadDiscriminant(5));
    CHECK(u5.x == 1);
    CHECK(u5.y == 1);
    CHECK(u5.norm == -1);

    auto u8 = fundamental_unit(QuadDiscriminant(8)); // 1 + sqrt(2)
    CHECK(u8.x == 2);
    CHECK(u8.y == 1);
    CHECK(u8.norm == -1);

    auto u12 = fundamental_unit(QuadDiscriminant(12)); // 2 + sqrt(3)
    CHECK(u12.x == 4);
    CHECK(u12.y == 1);
    CHECK(u12.norm == 1);

    auto u24 = fundamental_unit(QuadDiscriminant(24)); // 5 + 2 sqrt(6)
    CHECK(u24.x == 10);
    CHECK(u24.y == 2);
    CHECK(u24.norm == 1);

    auto u40 = fundamental_unit(QuadDiscriminant(40)); // 3 + sqrt(10)
    CHECK(u40.x == 6);
    CHECK(u40.y == 1);
    CHECK(u40.norm == -1);

    CHECK(fundamental_unit(QuadDiscriminant(5289)).norm == 1); // 3 | 5289, 3 = 3 mod 4
}

TEST_CASE("Pell identity holds exactly across a sweep") {
    for (std::uint64_t d : fundamental_discs(20000)) {
        QuadDiscriminant D(d);
        auto u = fundamental_unit(D);
        REQUIRE(u.x > 0);
        REQUIRE(u.y > 0);
        REQUIRE(u.x * u.x - D.value_mpz() * u.y * u.y == 4 * u.norm);
        REQUIRE((u.x - D.value_mpz() * u.y) % 2 == 0);
        REQUIRE(u.regulator_estimate > 0.0);
    }
}

TEST_CASE("reduced form counts and cycle counts for tiny discriminants") {
    FormClassGroup g5{QuadDiscriminant(5)};
    CHECK(g5.reduced_form_count() == 2);
    CHECK(g5.narrow_order() == 1);

    FormClassGroup g8{QuadDiscriminant(8)};
    CHECK(g8.reduced_form_count() == 2);
    CHECK(g8.narrow_order() == 1);

    FormClassGroup g12{QuadDiscriminant(12)};
    CHECK(g12.narrow_order() == 2);
    CHECK(g12.wide_order() == 1);

    FormClassGroup g24{QuadDiscriminant(24)};
    CHECK(g24.reduced_form_count() == 4);
    CHECK(g24.narrow_order() == 2);
    CHECK(g24.wide_order() == 1);

    FormClassGroup g40{QuadDiscriminant(40)};
    CHECK(g40.reduced_form_count() == 8);
    CHECK(g40.narrow_order() == 2);
    CHECK(g40.wide_order() == 2); // unit norm -1 keeps the narrow group intact

    FormClassGroup g229{QuadDiscriminant(229)};
    CHECK(g229.narrow_order() == 3);
    CHECK(g229.narrow_structure() ==
          AbelianGroupStructure{std::vector<std::uint64_t>{3}});

    FormClassGroup g136{QuadDiscriminant(136)};
    CHECK(g136.narrow_order() == 4);
    CHECK(g136.narrow_structure() ==
          AbelianGroupStructure{std::vector<std::uint64_t>{4}});
    CHECK(g136.wide_order() == 2);
}

TEST_CASE("composition is a group law on classes") {
    FormClassGroup G{QuadDiscriminant(5289)};
    const int h = int(G.narrow_order());
    const int e = G.identity_class();

    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        int i = int(rng() % std::uint64_t(h));
        int j = int(rng() % std::uint64_t(h));
        int k = int(rng() % std::uint64_t(h));
        CHECK(G.compose_classes(i, e) == i);
        CHECK(G.compose_classes(i, j) == G.compose_classes(j, i));
        CHECK(G.compose_classes(G.compose_classes(i, j), k) ==
              G.compose_classes(i, G.compose_classes(j, k)));
        CHECK(G.power(i, std::uint64_t(h)) == e);
    }

    // composing translated (non-reduced) members of two cycles lands in the
    // composed class, so the law is well defined on classes
    for (int trial = 0; trial < 30; ++trial) {
        int i = int(rng() % std::uint64_t(h));
        int j = int(rng() % std::uint64_t(h));
        BinaryQuadForm f = G.representative(i), g = G.representative(j);
        f.b += 4 * f.a;
        f.c = (f.b * f.b - G.disc().value_mpz()) / (4 * f.a);
        g.b -= 2 * g.a;
        g.c = (g.b * g.b - G.disc().value_mpz()) / (4 * g.a);
        CHECK(G.class_of(compose(f, g)) == G.compose_classes(i, j));
    }

    CHECK_THROWS_AS(compose(BinaryQuadForm{1, 2, -1}, BinaryQuadForm{1, 1, -1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(compose(BinaryQuadForm{2, 0, -6}, BinaryQuadForm{2, 0, -6}),
                    std::invalid_argument);
}

TEST_CASE("structure order equals cycle count across a sweep") {
    for (std::uint64_t d : fundamental_discs(5000)) {
        QuadDiscriminant D(d);
        FormClassGroup G{D};
        auto narrow = G.narrow_structure();
        REQUIRE(narrow.order() == G.narrow_order());

        // genus theory: narrow 2-rank is one less than the ramified count
        REQUIRE(narrow.two_sylow().rank() == D.ramified_primes().size() - 1);

        // the kernel class of narrow -> wide is trivial iff the unit has norm -1
        bool s_trivial = G.sqrt_disc_class() == G.identity_class();
        REQUIRE(s_trivial == (G.unit_norm() == -1));

        auto wide = G.wide_structure();
        REQUIRE(wide.order() == G.wide_order());
        REQUIRE(G.wide_order() * (s_trivial ? 1 : 2) == G.narrow_order());
    }
}

TEST_CASE("frozen class group structures") {
    FormClassGroup G1{QuadDiscriminant(5289)}; // 3 * 41 * 43
    CHECK(G1.narrow_structure().two_sylow() ==
          AbelianGroupStructure{std::vector<std::uint64_t>{2, 2}});
    CHECK(wide_class_group_2part(QuadDiscriminant(5289)) ==
          AbelianGroupStructure{std::vector<std::uint64_t>{2}});

    FormClassGroup G2{QuadDiscriminant(42312)}; // 8 * 5289
    CHECK(G2.narrow_structure().two_sylow() ==
          AbelianGroupStructure{std::vector<std::uint64_t>{2, 2, 2}});
    CHECK(wide_class_group_2part(QuadDiscriminant(42312)) ==
          AbelianGroupStructure{std::vector<std::uint64_t>{2, 2}});

    auto nc = narrow_class_group(QuadDiscriminant(5289));
    CHECK(nc.group.order() == G1.narrow_order());
    std::uint64_t prod = 1;
    REQUIRE(nc.generators.size() == nc.group.invariant_factors.size());
    for (std::size_t i = 0; i < nc.generators.size(); ++i) {
        int cls = G1.class_of(nc.generators[i]);
        // generator order matches its invariant factor
        std::uint64_t ord = 1;
        int x = cls;
        while (x != G1.identity_class()) {
            x = G1.compose_classes(x, cls);
            ++ord;
        }
        CHECK(ord == nc.group.invariant_factors[i]);
        prod *= ord;
    }
    CHECK(prod == nc.group.order());
}

TEST_CASE("prime forms and the splitting oracle") {
    QuadDiscriminant D(5289);
    CHECK(prime_form(2, D) == BinaryQuadForm{2, 1, -661});
    CHECK(prime_form(3, D) == BinaryQuadForm{3, 3, -440});
    CHECK_THROWS_AS(prime_form(13, D), std::invalid_argument); // (5289/13) = -1

    // existence of a prime form over odd l agrees with the Legendre symbol
    for (std::uint64_t d : {std::uint64_t(5289), std::uint64_t(42312),
                            std::uint64_t(229), std::uint64_t(40)}) {
        QuadDiscriminant Dd(d);
        for (std::uint64_t l : primes_below(60)) {
            if (l == 2 || d % l == 0)
                continue;
            bool has_form = true;
            try {
                auto f = prime_form(l, Dd);
                REQUIRE(f.disc() == Dd.value_mpz());
                REQUIRE(f.a == long(l));
            } catch (const std::invalid_argument &) {
                has_form = false;
            }
            bool splits = legendre(mpz_class(static_cast<unsigned long>(d)),
                                   OddPrime(l)) == 1;
            REQUIRE(has_form == splits);
        }
    }
}

TEST_CASE("ideal class orders in the wide group") {
    CHECK(ideal_class_order(2, QuadDiscriminant(5289)) == 1);
    CHECK(ideal_class_order(3, QuadDiscriminant(42312)) == 2);
    CHECK(ideal_class_order(41, QuadDiscriminant(42312)) == 2);

    // ramified classes square to the identity in the wide group
    for (std::uint64_t d : {std::uint64_t(5289), std::uint64_t(42312)}) {
        QuadDiscriminant Dd(d);
        for (auto l : Dd.ramified_primes()) {
            auto ord = ideal_class_order(l, Dd);
            CHECK((ord == 1 || ord == 2));
        }
    }
}
