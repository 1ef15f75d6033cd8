#pragma once

#include <gmpxx.h>

#include <vector>

#include "klp/algebraic.hpp"
#include "klp/interval.hpp"

namespace klp {

// Exact k-generalized Lucas sequence: order-k recurrence with seeds
// ..., 0, 0, 2, 1 starting at index 2-k. Terms are memoized in one
// contiguous table; extension uses a sliding window sum so each new term
// costs O(1) big-integer work. After extend() the table is immutable and
// safe to share across threads.
class KLucasSequence {
public:
    explicit KLucasSequence(long k);

    long k() const { return k_; }
    long min_index() const { return 2 - k_; }
    long max_cached() const { return max_n_; }

    // L_n^{(k)}; grows the table as needed. n below 2-k is a domain error.
    const mpz_class& term(long n);

    // Pre-extend so later term() calls on a shared instance stay read-only.
    void extend(long n_max);

    // Exact check of L_n = 3 * 2^(n-2), valid for 2 <= n <= k.
    bool power_identity_holds(long n);

    // e_k(n) = L_n - f_k(a)(2a-1) a^(n-1). Raises precision_error when the
    // enclosure cannot decide |e| < 1.5 either way.
    Interval binet_residual(const AlgebraicContext& alg, long n);

    // |f_k(a)(2a-1) a^(n-1) - 3*2^(n-2)| < 3*2^(n-2) * 36 / 2^(k/2),
    // certified with outward rounding. Requires n^2 < 2^k.
    bool sharp_estimate_holds(const AlgebraicContext& alg, long n);

private:
    long k_;
    std::vector<mpz_class> terms_;  // slot i holds index n = i + (2-k)
    mpz_class window_;              // sum of the k most recent cached terms
    long max_n_;

    size_t slot(long n) const { return static_cast<size_t>(n - (2 - k_)); }
};

}  // namespace klp
