#pragma once

#include <gmpxx.h>

#include <optional>
#include <vector>

namespace klp {

// Witness that an integer's decimal expansion reads d1^ell d2^m d1^ell:
// a palindrome built from two distinct repdigit blocks.
struct PalindromeDecomposition {
    int d1 = 0;   // outer digit, 1..9
    int d2 = 0;   // inner digit, 0..9, != d1
    long ell = 0; // outer block length, >= 1
    long m = 0;   // inner block length, >= 1

    bool operator==(const PalindromeDecomposition&) const = default;
};

// Exact value of the digit string d1^ell d2^m d1^ell:
//   d1 (10^ell - 1)/9 * 10^(ell+m) + d2 (10^m - 1)/9 * 10^ell + d1 (10^ell - 1)/9.
// Invariant violations (digit ranges, d1 == d2, block lengths) are domain errors.
mpz_class compose(const PalindromeDecomposition& dec);

// Inverse of compose on the image; empty when the decimal string of v does
// not have the two-block palindromic shape. Smallest ell wins when several
// splits match.
std::optional<PalindromeDecomposition> decompose(const mpz_class& v);

// Divisibility screens for the n <= k regime (values 3 * 2^(n-2)): a cell
// (ell, m) is pruned when ell >= 4, or when n >= 16 and ell + m >= 14.
// Returns true when the cell survives and must be searched.
bool small_case_filter(long n, long ell, long m);

struct PowerCaseHit {
    PalindromeDecomposition dec;
    long n = 0;  // exponent index: value == 3 * 2^(n-2)
    mpz_class value;
};

struct PowerCaseResult {
    long searched = 0;
    std::vector<PowerCaseHit> hits;
};

// Enumerates all decompositions with ell <= ell_max, m <= m_max and reports
// those whose value equals 3 * 2^t for some t >= 0. Expected empty.
PowerCaseResult power_case_search(long ell_max = 3, long m_max = 12);

}  // namespace klp
