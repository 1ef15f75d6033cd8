#include "doctest.h"

#include <cmath>
#include <map>
#include <memory>
#include <random>

#include "klp/baker.hpp"

using klp::AlgebraicContext;
using klp::build_linear_form;
using klp::Case2Branch;
using klp::FormKind;
using klp::FormParams;
using klp::LinearFormSpec;
using klp::matveev_lower_bound;
using klp::Precision;

namespace {

const AlgebraicContext& context_for(long k) {
    static std::map<long, std::unique_ptr<AlgebraicContext>> cache;
    auto it = cache.find(k);
    if (it == cache.end())
        it = cache.emplace(k, std::make_unique<AlgebraicContext>(k, Precision::with_bits(256)))
                 .first;
    return *it->second;
}

FormParams params(long k, int d1, int d2, long ell, long m, long n) {
    FormParams p;
    p.k = k;
    p.d1 = d1;
    p.d2 = d2;
    p.ell = ell;
    p.m = m;
    p.n = n;
    return p;
}

}  // namespace

TEST_CASE("the rational-form lower bound at its floor parameters") {
    LinearFormSpec spec;
    spec.kind = FormKind::G3;
    spec.degree = 1;
    spec.b_max = 2;
    for (auto& g : spec.gammas) {
        g.value = klp::Interval(1L, 128);
        g.log_value = klp::Interval(mpq_class(1, 10), 128);  // below 0.16
        g.a_bound = 0.16;
    }
    double expected =
        -1.4 * std::pow(30.0, 6) * std::pow(3.0, 4.5) * (1 + std::log(2.0)) * std::pow(0.16, 3);
    CHECK(matveev_lower_bound(spec) == doctest::Approx(expected).epsilon(1e-12));

    spec.b_max = 1;
    CHECK_THROWS_AS(matveev_lower_bound(spec), std::domain_error);
    spec.b_max = 2;
    spec.gammas[1].a_bound = 0.0;
    CHECK_THROWS_AS(matveev_lower_bound(spec), std::domain_error);
}

TEST_CASE("G3 bound at n = 8 matches the closed form and the envelope") {
    auto spec = build_linear_form(FormKind::G3, params(0, 5, 0, 1, 1, 8), nullptr);
    double got = matveev_lower_bound(spec);
    double expected = -1.4 * std::pow(30.0, 6) * std::pow(3.0, 4.5) * (1 + std::log(8.0)) *
                      std::log(243.0) * std::log(2.0) * std::log(10.0);
    CHECK(got == doctest::Approx(expected).epsilon(1e-10));
    CHECK(got >= -1.9e12 * std::log(8.0));
}

TEST_CASE("G1 bound sits just above its published envelope") {
    const AlgebraicContext& alg = context_for(3);
    auto spec = build_linear_form(FormKind::G1, params(3, 1, 0, 1, 1, 8), &alg);
    double got = matveev_lower_bound(spec);
    double lk = std::log(3.0), ln = std::log(8.0);
    double envelope = -6.02e12 * 81 * lk * lk * ln;
    CHECK(got >= envelope);
    CHECK(got <= envelope * 0.99);  // the envelope is tight at k=3, n=8
}

TEST_CASE("envelope containment over random admissible G1 parameters") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> kd(3, 60);  // contexts stay cheap
    std::uniform_int_distribution<int> dd(1, 9);
    std::uniform_int_distribution<long> nd(8, 1000000);
    auto check_one = [&](long k, long n, int d1) {
        auto spec = build_linear_form(FormKind::G1, params(k, d1, 0, 2, 3, n), &context_for(k));
        double lk = std::log(static_cast<double>(k));
        double ln = std::log(static_cast<double>(n));
        CHECK(matveev_lower_bound(spec) >= -6.02e12 * std::pow(k, 4) * lk * lk * ln);
    };
    for (int it = 0; it < 50; ++it) {
        long k = kd(rng);
        check_one(k, std::max(nd(rng), k + 1), dd(rng));
    }
    // a few cells at the top of the admissible order range
    check_one(500, 1000000, 1);
    check_one(1500, 1000000, 9);
}

TEST_CASE("more negative with growing A_i or B") {
    auto spec = build_linear_form(FormKind::G3, params(0, 5, 0, 1, 1, 100), nullptr);
    double base = matveev_lower_bound(spec);
    auto bigger_b = spec;
    bigger_b.b_max = 10000;
    CHECK(matveev_lower_bound(bigger_b) < base);
    auto bigger_a = spec;
    bigger_a.gammas[0].a_bound *= 2;
    CHECK(matveev_lower_bound(bigger_a) < base);
}

TEST_CASE("coefficients and gamma values of the built forms") {
    const AlgebraicContext& alg = context_for(3);
    auto g1 = build_linear_form(FormKind::G1, params(3, 1, 0, 1, 1, 10), &alg);
    CHECK(g1.coeffs[0] == 1);
    CHECK(g1.coeffs[1] == 9);  // n - 1
    CHECK(g1.coeffs[2] == -3); // -(2*ell + m)
    CHECK(g1.degree == 3);
    CHECK(g1.b_max == 10);

    auto g3 = build_linear_form(FormKind::G3, params(0, 5, 0, 1, 1, 8), nullptr);
    CHECK(g3.degree == 1);
    CHECK(g3.gammas[0].value.contains(mpq_class(5, 27)));

    auto g4 = build_linear_form(FormKind::G4, params(0, 2, 1, 1, 1, 8), nullptr);
    CHECK(g4.gammas[0].value.contains(mpq_class(19, 27)));
    CHECK(g4.gammas[0].a_bound == doctest::Approx(1.9e12 * std::log(8.0)));

    auto g2 = build_linear_form(FormKind::G2, params(3, 1, 0, 2, 1, 10), &alg);
    CHECK(g2.coeffs[2] == -3);  // -(ell + m)
}

TEST_CASE("nonvanishing: exact divisibility for the rational forms") {
    for (int d1 = 1; d1 <= 9; ++d1)
        for (int d2 = 0; d2 <= 9; ++d2) {
            if (d1 == d2) continue;
            CHECK(klp::nonvanishing_check(FormKind::G3, params(0, d1, d2, 2, 3, 50), nullptr));
            CHECK(klp::nonvanishing_check(FormKind::G4, params(0, d1, d2, 2, 3, 50), nullptr));
        }
}

TEST_CASE("nonvanishing: interval exclusion for the algebraic forms") {
    const AlgebraicContext& alg = context_for(3);
    CHECK(klp::nonvanishing_check(FormKind::G1, params(3, 1, 0, 1, 1, 8), &alg));
    CHECK(klp::nonvanishing_check(FormKind::G2, params(3, 2, 7, 1, 1, 8), &alg));
}

TEST_CASE("closed-form exponent caps") {
    CHECK(klp::bound_n(1500) < 8.8e58);
    CHECK(klp::bound_n(1500) > 8.0e58);
    double lk = std::log(3.0), ln = std::log(8.0);
    CHECK(klp::bound_ell(3, 8.0) == doctest::Approx(2.62e12 * 81 * lk * lk * ln).epsilon(1e-12));
    CHECK(klp::bound_m(3, 8.0) > klp::bound_ell(3, 8.0));
    CHECK_THROWS_AS(klp::bound_ell(2, 8.0), std::domain_error);
    CHECK_THROWS_AS(klp::bound_n(2), std::domain_error);
}

TEST_CASE("combining the two envelope bounds reproduces the ell cap") {
    for (long k : {3L, 10L, 100L, 1500L})
        for (double n : {8.0, 1e6, 8.8e58}) {
            double lk = std::log(static_cast<double>(k));
            double derived =
                (6.02e12 * std::pow(k, 4) * lk * lk * std::log(n) + std::log(11.0)) /
                std::log(10.0);
            double cap = klp::bound_ell(k, n);
            CHECK(derived <= cap * 1.0001);
            CHECK(derived >= cap * 0.99);
        }
}

TEST_CASE("large-order branch bounds and their closures") {
    CHECK(klp::case2_k_bound(Case2Branch::b, std::exp(100.0)) ==
          doctest::Approx(1.9e24 * 100.0 * 100.0).epsilon(1e-9));
    CHECK(klp::case2_k_bound(Case2Branch::a, std::exp(50.0)) ==
          doctest::Approx(5.5e12 * 50.0).epsilon(1e-9));
    auto a = klp::case2_closure(Case2Branch::a);
    CHECK(a.k_bound == doctest::Approx(8.3e15));
    auto b = klp::case2_closure(Case2Branch::b);
    CHECK(b.k_bound == doctest::Approx(1.8e31));
    CHECK(b.n_bound == doctest::Approx(3.5e288));
}
