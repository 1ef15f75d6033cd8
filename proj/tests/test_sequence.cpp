#include "doctest.h"

#include <vector>

#include "klp/sequence.hpp"

using klp::AlgebraicContext;
using klp::KLucasSequence;
using klp::Precision;

namespace {

// independent oracle: plain k-sum recurrence, no sliding window
mpz_class naive_term(long k, long n) {
    std::vector<mpz_class> t;
    for (long i = 2 - k; i <= -1; ++i) t.emplace_back(0);
    t.emplace_back(2);
    t.emplace_back(1);
    for (long i = 2; i <= n; ++i) {
        mpz_class s = 0;
        long len = static_cast<long>(t.size());
        for (long j = 1; j <= k; ++j) s += t[static_cast<size_t>(len - j)];
        t.push_back(s);
    }
    return t[static_cast<size_t>(n - (2 - k))];
}

}  // namespace

TEST_CASE("classical case prefix and the frozen examples") {
    KLucasSequence lucas(2);
    const long expected[] = {2, 1, 3, 4, 7, 11, 18, 29, 47, 76, 123, 199, 322};
    for (long n = 0; n <= 12; ++n) CHECK(lucas.term(n) == expected[n]);
    CHECK(lucas.term(6) == 18);

    KLucasSequence k3(3);
    CHECK(k3.term(1) == 1);

    KLucasSequence k5(5);
    CHECK(k5.term(5) == 24);                 // 3 * 2^3
    CHECK(k5.term(5) == naive_term(5, 5));   // recurrence oracle agrees
}

TEST_CASE("window extension matches the naive recurrence") {
    for (long k : {2L, 3L, 7L, 17L, 38L, 60L}) {
        KLucasSequence seq(k);
        seq.extend(120);
        for (long n : {2L, 5L, 17L, 59L, 120L}) CHECK(seq.term(n) == naive_term(k, n));
        // recurrence consistency on the memo table itself
        for (long n = 2; n <= 120; ++n) {
            mpz_class s = 0;
            for (long j = 1; j <= k; ++j) s += seq.term(n - j);
            CHECK(seq.term(n) == s);
        }
    }
}

TEST_CASE("index below 2-k is a domain error, seeds are exact") {
    KLucasSequence seq(6);
    CHECK(seq.term(-4) == 0);  // 2-k = -4
    CHECK(seq.term(0) == 2);
    CHECK(seq.term(1) == 1);
    CHECK_THROWS_AS(seq.term(-5), std::domain_error);
}

TEST_CASE("power identity inside 2 <= n <= k") {
    KLucasSequence k10(10);
    CHECK(k10.power_identity_holds(7));  // 96
    CHECK(k10.term(7) == 96);
    KLucasSequence k3(3);
    CHECK(k3.power_identity_holds(2));  // 3
    KLucasSequence k4(4);
    CHECK(k4.power_identity_holds(4));  // 12
    CHECK_THROWS_AS(k4.power_identity_holds(5), std::domain_error);
    CHECK_THROWS_AS(k4.power_identity_holds(1), std::domain_error);
}

TEST_CASE("power identity exact across larger orders") {
    for (long k : {25L, 100L, 200L}) {
        KLucasSequence seq(k);
        for (long n = 2; n <= k; n += (k > 50 ? 13 : 1)) CHECK(seq.power_identity_holds(n));
    }
}

TEST_CASE("growth envelope with certified root enclosures") {
    for (long k : {2L, 5L, 23L, 60L}) {
        AlgebraicContext alg(k, Precision::with_bits(512));
        KLucasSequence seq(k);
        seq.extend(300);
        for (long n = 1; n <= 300; n += 7) {
            klp::Interval lower = alg.alpha().pow_int(n - 1);
            klp::Interval upper = alg.alpha().pow_int(n).mul(2);
            klp::Interval ln(seq.term(n), 512);
            // alpha^(n-1) <= L_n <= 2 alpha^n, certified outward
            CHECK_FALSE(lower.certainly_greater(ln));
            CHECK_FALSE(upper.certainly_less(ln));
        }
    }
}

TEST_CASE("binet residual is small and matches the conjugate-power oracle at k=2") {
    AlgebraicContext alg(2, Precision::with_bits(512));
    KLucasSequence seq(2);
    // f_2(a)(2a-1) = golden ratio, so e_2(n) = L_n - phi^n = psi^n with
    // psi = (1 - sqrt 5)/2; at n = 10 that is psi^10 = (161*...)
    klp::Interval e = seq.binet_residual(alg, 10);
    CHECK(e.abs().certainly_less(mpq_class(3, 2)));
    // psi^10 = (123 - 55*sqrt5)/2 + ... : numerically 0.0081306187557833487...
    CHECK(e.certainly_greater(mpq_class("8130618755/1000000000000")));
    CHECK(e.certainly_less(mpq_class("8130618757/1000000000000")));
}

TEST_CASE("binet residual bound across sampled orders and indices") {
    for (long k : {3L, 20L, 60L}) {
        AlgebraicContext alg(k, Precision::with_bits(512));
        KLucasSequence seq(k);
        seq.extend(300);
        for (long n = 2 - k; n <= 300; n += 11)
            CHECK(seq.binet_residual(alg, n).abs().certainly_less(mpq_class(3, 2)));
    }
    // the n = 0 example: L_0 = 2
    AlgebraicContext alg3(3, Precision::with_bits(512));
    KLucasSequence k3(3);
    CHECK(k3.binet_residual(alg3, 0).abs().certainly_less(mpq_class(3, 2)));
}

TEST_CASE("sharp estimate in the n < 2^(k/2) regime") {
    AlgebraicContext alg20(20, Precision::with_bits(512));
    KLucasSequence k20(20);
    CHECK(k20.sharp_estimate_holds(alg20, 15));

    AlgebraicContext alg30(30, Precision::with_bits(512));
    KLucasSequence k30(30);
    CHECK(k30.sharp_estimate_holds(alg30, 20));

    AlgebraicContext alg40(40, Precision::with_bits(1024));
    KLucasSequence k40(40);
    CHECK(k40.sharp_estimate_holds(alg40, 100));

    // precondition gate: 40 >= 2^5
    AlgebraicContext alg10(10, Precision::with_bits(512));
    KLucasSequence k10(10);
    CHECK_THROWS_AS(k10.sharp_estimate_holds(alg10, 40), std::domain_error);
}
