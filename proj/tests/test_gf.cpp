#include <doctest.h>

#include "pirsq/gf.hpp"
#include "pirsq/rng.hpp"

using namespace pirsq;

TEST_CASE("field arithmetic basics") {
    FieldElement three(3, 7);
    CHECK(three.inv().value() == 5);  // 3 * 5 = 15 = 1 mod 7
    CHECK((FieldElement(4, 7) + FieldElement(5, 7)).value() == 2);
    CHECK((FieldElement(2, 7) - FieldElement(5, 7)).value() == 4);
    CHECK((FieldElement(3, 7) * FieldElement(4, 7)).value() == 5);
    CHECK((FieldElement(1, 7) / FieldElement(3, 7)).value() == 5);
    CHECK((-FieldElement(2, 7)).value() == 5);
    CHECK((-FieldElement(0, 7)).value() == 0);
}

TEST_CASE("pow matches the repeated-multiplication oracle") {
    // oracle: multiply step by step
    FieldElement two(2, 11);
    FieldElement acc(1, 11);
    for (int i = 0; i < 5; ++i) acc = acc * two;
    CHECK(acc.value() == 10);
    CHECK(two.pow(5).value() == 10);

    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        std::uint32_t q = 13;
        FieldElement b(rng.field_value(q), q);
        std::uint64_t e = rng.below(40);
        FieldElement slow(1, q);
        for (std::uint64_t i = 0; i < e; ++i) slow = slow * b;
        CHECK(b.pow(e) == slow);
    }
}

TEST_CASE("smallest prime at or above a bound") {
    CHECK(smallest_prime_geq(2) == 2);
    CHECK(smallest_prime_geq(6) == 7);
    CHECK(smallest_prime_geq(4) == 5);  // primes only, 4 is skipped
    CHECK(smallest_prime_geq(13) == 13);
    CHECK(smallest_prime_geq(65536) == 65537);
    // the (5, 2) setting downloads 4 symbols per server and lands on F_5
    CHECK(smallest_prime_geq(4) == 5);
}

TEST_CASE("field axioms on random triples") {
    for (std::uint32_t q : {3u, 5u, 7u, 11u, 13u}) {
        Rng rng(1000 + q);
        for (int trial = 0; trial < 100; ++trial) {
            FieldElement a(rng.field_value(q), q), b(rng.field_value(q), q), c(rng.field_value(q), q);
            CHECK((a + b) + c == a + (b + c));
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK(a + b == b + a);
            CHECK(a * b == b * a);
            if (!a.is_zero()) CHECK((a * a.inv()).value() == 1);
        }
    }
}

TEST_CASE("error paths") {
    CHECK_THROWS_AS(FieldElement(1, 6), Error);                                    // not prime
    CHECK_THROWS_AS(FieldElement(1, 7) + FieldElement(1, 5), Error);               // modulus mismatch
    CHECK_THROWS_AS(FieldElement(1, 7) / FieldElement(0, 7), Error);               // division by zero
    CHECK_THROWS_AS(FieldElement(0, 7).inv(), Error);
}

TEST_CASE("seeded rng is reproducible and fork streams differ") {
    Rng a(42), b(42);
    for (int i = 0; i < 10; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng base(42);
    CHECK(base.fork(1).next_u64() != base.fork(2).next_u64());
    CHECK(base.fork(1).next_u64() == base.fork(1).next_u64());
    auto p = Rng(7).permutation(6);
    CHECK(p == Rng(7).permutation(6));
}
