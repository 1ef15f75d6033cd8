#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "klp/lattice.hpp"
#include "klp/palindrome.hpp"

namespace klp {

// Sweep configuration. The desk preset exercises every stage in CI-scale
// minutes; the full preset runs the complete ranges (hours for case 1).
struct RunConfig {
    long k_min = 3;
    long k_max = 60;
    long n_cap = 400;          // sequence search ceiling
    long red_k_max = 60;       // case-1 reduction sweep ceiling
    bool full_grids = false;   // full (ell, digit-pair) grids in the reductions
    long precision_bits = 0;   // 0: derived per stage
    int parallelism = 0;       // 0: hardware concurrency
    std::string output_path;

    static RunConfig desk();
    static RunConfig full_scale();
    void validate() const;  // k_min >= 3, n_cap >= 8
    int threads() const;
};

// n must lie strictly between 2l + m - 3 and 5(2l + m) + 1 for a solution
// with 2l + m digits. k is part of the cell identity but does not enter.
bool digit_bound_check(long k, long n, long ell, long m);

struct DigitBoundReport {
    long checked = 0;
    bool ok = false;
};

struct SmallCaseReport {
    bool screens_ok = false;
    long searched = 0;
    long widened_searched = 0;
    std::vector<PowerCaseHit> hits;
    std::vector<PowerCaseHit> widened_hits;

    bool passed() const { return screens_ok && hits.empty() && widened_hits.empty(); }
};

struct SearchHit {
    long k = 0;
    long n = 0;
    mpz_class value;
    PalindromeDecomposition dec;
};

struct Case1Report {
    ReductionSummary round_ell;  // G1
    ReductionSummary round_m;    // G2
    long ell_cap = 0;
    long m_cap = 0;
    long n_search = 0;
    long terms_checked = 0;
    std::vector<SearchHit> hits;
    bool resolved = false;

    bool passed() const { return resolved && hits.empty(); }
};

struct Case2Round {
    ReductionSummary g3;
    ReductionSummary g4;
    double min_bound = 0.0;  // cap on min(k/2, ell*log2(10)) from the G3 cells
    long ell_cap = 0;
    double k_cap = 0.0;  // max over both branches
};

struct Case2Report {
    double symbolic_k_bound = 0.0;  // closure of the symbolic bounds
    double symbolic_n_bound = 0.0;
    Case2Round round1;
    mpz_class n_bound2;
    Case2Round round2;
    bool contradiction = false;  // round-2 k cap falls below 1500
    bool resolved = false;

    bool passed() const { return resolved && contradiction; }
};

struct ProofReport {
    DigitBoundReport digit_bounds;
    SmallCaseReport small_case;
    Case1Report case1;
    Case2Report case2;
    std::string verdict;  // "no solutions", "no solutions (desk scale)", "inconclusive"
};

DigitBoundReport run_digit_bounds(const RunConfig& cfg);
SmallCaseReport run_small_case();
Case1Report run_case1(const RunConfig& cfg);
Case2Report run_case2(const RunConfig& cfg);

// Full orchestration; writes the JSON report when cfg.output_path is set.
ProofReport run_all(const RunConfig& cfg);

// Stable JSON rendering of the report (the "timestamp" field is the only
// run-to-run variant; omitted when deterministic is true).
std::string report_to_json(const ProofReport& report, const RunConfig& cfg,
                           bool deterministic = false);

}  // namespace klp
