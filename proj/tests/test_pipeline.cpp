#include "doctest.h"

#include "klp/palindrome.hpp"
#include "klp/pipeline.hpp"
#include "klp/sequence.hpp"

using klp::RunConfig;

TEST_CASE("digit-count window") {
    CHECK(klp::digit_bound_check(3, 10, 2, 1));   // 2 < 10 < 26
    CHECK_FALSE(klp::digit_bound_check(3, 8, 10, 10));
    // strict at the upper boundary: n = 5(2l+m)+1
    CHECK_FALSE(klp::digit_bound_check(3, 16, 1, 1));
    CHECK(klp::digit_bound_check(3, 15, 1, 1));
    CHECK_THROWS_AS(klp::digit_bound_check(3, 7, 1, 1), std::domain_error);
}

TEST_CASE("config validation") {
    RunConfig bad = RunConfig::desk();
    bad.k_min = 2;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    RunConfig bad2 = RunConfig::desk();
    bad2.n_cap = 7;
    CHECK_THROWS_AS(bad2.validate(), std::domain_error);
    CHECK_NOTHROW(RunConfig::desk().validate());
    CHECK_NOTHROW(RunConfig::full_scale().validate());
}

TEST_CASE("small-case stage finds nothing") {
    auto rep = klp::run_small_case();
    CHECK(rep.screens_ok);
    CHECK(rep.searched == 2916);
    CHECK(rep.widened_searched == 9 * 9 * 4 * 13);
    CHECK(rep.hits.empty());
    CHECK(rep.widened_hits.empty());
    CHECK(rep.passed());
}

TEST_CASE("digit-bound property stage") {
    RunConfig cfg = RunConfig::desk();
    cfg.k_max = 20;
    auto rep = klp::run_digit_bounds(cfg);
    CHECK(rep.ok);
    CHECK(rep.checked > 0);
}

TEST_CASE("classical-order control: no decomposable terms up to n = 30") {
    klp::KLucasSequence lucas(2);
    for (long n = 7; n <= 30; ++n) CHECK_FALSE(klp::decompose(lucas.term(n)).has_value());
}

TEST_CASE("case 1 at reduced scale resolves with zero hits") {
    RunConfig cfg = RunConfig::desk();
    cfg.k_min = 3;
    cfg.k_max = 20;
    cfg.n_cap = 200;
    cfg.red_k_max = 10;
    cfg.parallelism = 1;
    auto rep = klp::run_case1(cfg);
    CHECK(rep.resolved);
    CHECK(rep.hits.empty());
    CHECK(rep.round_ell.all_resolved());
    CHECK(rep.round_m.all_resolved());
    // caps land near the published values
    CHECK(rep.ell_cap >= 116);
    CHECK(rep.ell_cap <= 126);
    CHECK(rep.m_cap >= 117);
    CHECK(rep.m_cap <= 127);
    CHECK(rep.n_search == 200);  // clamped by the config here
    CHECK(rep.terms_checked == (20 - 3 + 1) * (200 - 7 + 1));
    CHECK(rep.passed());
}

TEST_CASE("stage reports serialize deterministically") {
    RunConfig cfg = RunConfig::desk();
    cfg.k_min = 3;
    cfg.k_max = 12;
    cfg.n_cap = 100;
    cfg.red_k_max = 5;
    cfg.parallelism = 1;

    klp::ProofReport a, b;
    a.digit_bounds = klp::run_digit_bounds(cfg);
    a.small_case = klp::run_small_case();
    a.case1 = klp::run_case1(cfg);
    b.digit_bounds = klp::run_digit_bounds(cfg);
    b.small_case = klp::run_small_case();
    b.case1 = klp::run_case1(cfg);
    a.verdict = b.verdict = "partial";
    CHECK(klp::report_to_json(a, cfg, true) == klp::report_to_json(b, cfg, true));
}
