#include "doctest.h"

#include <random>

#include "klp/lattice.hpp"
#include "klp/util.hpp"

using klp::build_approx_lattice;
using klp::certificate;
using klp::Interval;
using klp::Lattice;
using klp::lll_reduce;
using klp::ReducedBasis;

namespace {

mpz_class det3(const std::vector<klp::IntVec>& c) {
    return c[0][0] * (c[1][1] * c[2][2] - c[1][2] * c[2][1]) -
           c[1][0] * (c[0][1] * c[2][2] - c[0][2] * c[2][1]) +
           c[2][0] * (c[0][1] * c[1][2] - c[0][2] * c[1][1]);
}

mpz_class norm2(const klp::IntVec& v) {
    mpz_class s = 0;
    for (const auto& x : v) s += x * x;
    return s;
}

Lattice random_lattice(std::mt19937& rng, long magnitude) {
    std::uniform_int_distribution<long> d(-magnitude, magnitude);
    for (;;) {
        Lattice lat;
        for (int j = 0; j < 3; ++j)
            lat.cols.push_back({mpz_class(d(rng)), mpz_class(d(rng)), mpz_class(d(rng))});
        if (det3(lat.cols) != 0) return lat;
    }
}

// exhaustive box enumeration over a basis: min nonzero norm^2
mpz_class box_min_norm2(const std::vector<klp::IntVec>& cols, long radius) {
    mpz_class best = -1;
    for (long a = -radius; a <= radius; ++a)
        for (long b = -radius; b <= radius; ++b)
            for (long c = -radius; c <= radius; ++c) {
                if (a == 0 && b == 0 && c == 0) continue;
                klp::IntVec v(3);
                for (int t = 0; t < 3; ++t)
                    v[static_cast<size_t>(t)] =
                        a * cols[0][static_cast<size_t>(t)] + b * cols[1][static_cast<size_t>(t)] +
                        c * cols[2][static_cast<size_t>(t)];
                mpz_class n = norm2(v);
                if (best < 0 || n < best) best = n;
            }
    return best;
}

void check_reduced_postconditions(const Lattice& in, const ReducedBasis& red) {
    const int n = red.dim();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) {
            mpq_class mu = red.mu[static_cast<size_t>(i)][static_cast<size_t>(j)];
            CHECK(abs(mu) <= mpq_class(1, 2));
        }
    for (int i = 1; i < n; ++i) {
        mpq_class mu = red.mu[static_cast<size_t>(i)][static_cast<size_t>(i - 1)];
        mpq_class lhs =
            red.gso_norm2[static_cast<size_t>(i)] + mu * mu * red.gso_norm2[static_cast<size_t>(i - 1)];
        CHECK(lhs >= mpq_class(3, 4) * red.gso_norm2[static_cast<size_t>(i - 1)]);
    }
    CHECK(abs(det3(in.cols)) == abs(det3(red.cols)));
    // unimodular transform reproduces the output from the input
    CHECK(abs(det3(red.transform)) == 1);
    for (int j = 0; j < n; ++j)
        for (int r = 0; r < n; ++r) {
            mpz_class s = 0;
            for (int t = 0; t < n; ++t)
                s += in.cols[static_cast<size_t>(t)][static_cast<size_t>(r)] *
                     red.transform[static_cast<size_t>(j)][static_cast<size_t>(t)];
            CHECK(s == red.cols[static_cast<size_t>(j)][static_cast<size_t>(r)]);
        }
}

}  // namespace

TEST_CASE("identity basis is already reduced") {
    Lattice id;
    id.cols = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    auto red = lll_reduce(id);
    CHECK(red.cols == id.cols);
    auto cert = certificate(red);
    CHECK(cert.c1_sq == 1);
    CHECK(cert.delta_sq == 1);
}

TEST_CASE("two-dimensional example finds a short first vector") {
    Lattice lat;
    lat.cols = {{1, 1}, {2, 1}};
    auto red = lll_reduce(lat);
    CHECK(norm2(red.cols[0]) <= 2);
    // brute-force check: lambda_1^2 = 1 here ((2,1)-(1,1) = (1,0))
    CHECK(klp::shortest_vector_norm2(red) == 1);
}

TEST_CASE("dependent columns are rejected") {
    Lattice bad;
    bad.cols = {{1, 2, 3}, {2, 4, 6}, {0, 0, 1}};
    CHECK_THROWS_AS(lll_reduce(bad), std::domain_error);
}

TEST_CASE("postconditions hold on random bases") {
    std::mt19937 rng(2024);
    for (int it = 0; it < 150; ++it) {
        Lattice lat = random_lattice(rng, 1000000);
        auto red = lll_reduce(lat);
        check_reduced_postconditions(lat, red);
    }
}

TEST_CASE("shortest-vector sandwich against exhaustive enumeration") {
    std::mt19937 rng(99);
    for (int it = 0; it < 40; ++it) {
        Lattice lat = random_lattice(rng, 1000000);
        auto red = lll_reduce(lat);
        mpq_class lam1 = klp::shortest_vector_norm2(red);
        // independent box oracle over the reduced basis
        mpz_class brute = box_min_norm2(red.cols, 6);
        CHECK(mpq_class(brute) == lam1);
        // ||b1||^2 <= (2^((dim-1)/2))^2 * lambda_1^2 = 4 lambda_1^2
        CHECK(mpq_class(norm2(red.cols[0])) <= 4 * lam1);
    }
}

TEST_CASE("distance certificate is a sound lower bound (homogeneous case)") {
    std::mt19937 rng(5);
    for (int it = 0; it < 15; ++it) {
        Lattice lat = random_lattice(rng, 500);
        auto red = lll_reduce(lat);
        auto cert = certificate(red);
        CHECK(cert.delta_sq <= mpq_class(norm2(red.cols[0])));  // delta <= ||b1||
        mpz_class brute = box_min_norm2(lat.cols, 20);
        CHECK(mpq_class(brute) >= cert.delta_sq);
    }
}

TEST_CASE("inhomogeneous lambda rule") {
    Lattice lat;
    lat.cols = {{2, 0}, {0, 2}};
    auto red = lll_reduce(lat);
    // y = (1, 0): z = (1/2, 0), largest nonzero index has fraction 1/2
    auto cert = certificate(red, {mpq_class(1), mpq_class(0)});
    CHECK(cert.delta_sq == 1);  // (1/2)^2 * min ||b*||^2 = 4/4
    // y inside the lattice: lambda = 1
    auto cert2 = certificate(red, {mpq_class(2), mpq_class(4)});
    CHECK(cert2.delta_sq == 4);
}

TEST_CASE("approximation lattice floors are certified") {
    std::vector<Interval> etas{Interval(1L, 256), Interval(1L, 256), Interval(1L, 256)};
    auto lat = build_approx_lattice(etas, 10);
    CHECK(lat.cols[0][2] == 10);
    CHECK(lat.cols[1][2] == 10);
    CHECK(lat.cols[2][2] == 10);
    CHECK(lat.cols[0][0] == 1);
    CHECK(lat.cols[2][0] == 0);

    // the published scaled-log example: floors computed independently at
    // high precision must match
    mpfr_prec_t prec = 256;
    Interval golden = (Interval(mpz_class(5), prec).sqrt() + Interval(1L, prec)) / Interval(2L, prec);
    std::vector<Interval> logs{golden.log(), -Interval(10L, prec).log(),
                               (golden * Interval(9L, prec)).log()};
    mpz_class C = klp::pow10_z(20);
    auto approx = build_approx_lattice(logs, C);
    // ln(phi) = 0.48121182505960344749775..., so the floor ends in ...749
    CHECK(approx.cols[0][2] == mpz_class("48121182505960344749"));
    // ln(1/10) = -2.30258509299404568401...; floor is -230258509299404568402
    CHECK(approx.cols[1][2] == mpz_class("-230258509299404568402"));

    // precision gate: C needs log2(C) + 16 bits
    std::vector<Interval> coarse{Interval(1L, 32), Interval(1L, 32)};
    CHECK_THROWS_AS(build_approx_lattice(coarse, klp::mpz_from_sci("1e30")),
                    klp::precision_error);

    // straddling floor cannot be certified
    std::vector<Interval> wide{
        Interval::from_endpoints_exact(mpq_class(999, 1000), mpq_class(1001, 1000), 256),
        Interval(1L, 256)};
    CHECK_THROWS_AS(build_approx_lattice(wide, 1000), klp::precision_error);
}

TEST_CASE("paper-shaped lattice: reduced vector within factor two of optimal") {
    mpfr_prec_t prec = 320;
    Interval golden = (Interval(mpz_class(5), prec).sqrt() + Interval(1L, prec)) / Interval(2L, prec);
    // f_2(alpha)(2 alpha - 1) = alpha for k = 2, so the third log is ln(9 alpha)
    std::vector<Interval> logs{golden.log(), -Interval(10L, prec).log(),
                               (golden * Interval(9L, prec)).log()};
    auto lat = build_approx_lattice(logs, klp::pow10_z(12));
    auto red = lll_reduce(lat);
    mpz_class brute = box_min_norm2(lat.cols, 50);
    mpq_class lam1 = klp::shortest_vector_norm2(red);
    CHECK(lam1 <= mpq_class(brute));  // enumeration confirms the exact shortest
    CHECK(mpq_class(norm2(red.cols[0])) <= 4 * lam1);
}

TEST_CASE("bound extraction arithmetic and its failure branch") {
    // delta too small: certificate fails, empty result
    auto none = klp::reduce_bound(1000, mpq_class(4), {mpz_class(10), mpz_class(10)}, 1.0, 1.0);
    CHECK_FALSE(none.has_value());

    // a hand-checked configuration: delta^2 = 10^6, X = (10, 10),
    // S = 100, T = 21/2, C = 10^6, c3 = 1, c4 = 1:
    // H <= log(10^6) - log(sqrt(10^6 - 100) - 10.5)
    auto h = klp::reduce_bound(klp::pow10_z(6), mpq_class(1000000),
                               {mpz_class(10), mpz_class(10)}, 1.0, 1.0);
    REQUIRE(h.has_value());
    double expected = std::log(1e6) - std::log(std::sqrt(1e6 - 100.0) - 10.5);
    CHECK(*h == doctest::Approx(expected).epsilon(1e-9));

    // growing delta never grows H
    auto h2 = klp::reduce_bound(klp::pow10_z(6), mpq_class(4000000),
                                {mpz_class(10), mpz_class(10)}, 1.0, 1.0);
    REQUIRE(h2.has_value());
    CHECK(*h2 <= *h);
}

TEST_CASE("degenerate bounds are rejected") {
    CHECK_THROWS_AS(klp::reduce_bound(1000, mpq_class(100), {}, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(
        klp::reduce_bound(1000, mpq_class(100), {mpz_class(0), mpz_class(5)}, 1.0, 1.0),
        std::domain_error);
    CHECK_THROWS_AS(klp::reduce_bound_with(1000, mpq_class(100), mpq_class(1), mpq_class(1),
                                           -1.0, 1.0),
                    std::domain_error);
}
