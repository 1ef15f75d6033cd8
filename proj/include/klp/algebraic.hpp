#pragma once

#include <gmpxx.h>

#include "klp/interval.hpp"

namespace klp {

// Working mantissa precision for certified arithmetic. Enclosures that
// cannot certify a required inequality at this width raise precision_error.
struct Precision {
    long bits = 256;

    static Precision with_bits(long b) { return Precision{b < 128 ? 128 : b}; }

    // Enough headroom to certify floor(C * eta) entries for a given scaling
    // constant: ceil(log2 C) + 64 guard bits.
    static Precision for_scaling(const mpz_class& C);
};

// Certified constants attached to the dominant root of
// x^k - x^(k-1) - ... - 1: the root enclosure itself, f_k(alpha),
// 2*alpha - 1, their product (the Binet coefficient), and log(alpha).
// Immutable after construction; safe to share across threads.
class AlgebraicContext {
public:
    // Isolates the unique root in (1, 2) by bisection plus interval Newton.
    // Effective precision is raised to at least k + 64 bits so the enclosure
    // separates strictly from both 2(1 - 2^-k) and 2.
    AlgebraicContext(long k, Precision prec);

    long k() const { return k_; }
    long bits() const { return bits_; }
    const Interval& alpha() const { return alpha_; }
    const Interval& f_alpha() const { return f_alpha_; }
    const Interval& two_alpha_minus_one() const { return two_alpha_minus_one_; }
    const Interval& binet_coeff() const { return binet_coeff_; }  // f_k(a)(2a-1)
    const Interval& log_alpha() const { return log_alpha_; }

    // Sign-change certificate for the defining polynomial on an interval,
    // evaluated through the stable form x^k (2 - x) - 1 (same sign on (1,2)).
    static Interval char_poly_signed(long k, const Interval& x);

private:
    long k_;
    long bits_;
    Interval alpha_, f_alpha_, two_alpha_minus_one_, binet_coeff_, log_alpha_;
};

// log max(|p|, q) for p/q in lowest terms (reduces the fraction itself).
double log_height_rational(const mpz_class& p, const mpz_class& q);

enum class FormKind { G1, G2, G3, G4 };

// The A1 height-bound parameter used for each linear form, from the
// closed-form estimates the downstream bounds are calibrated against.
// log_n_bound is the natural log of the current bound on n (used by G2/G4).
double height_bound_gamma1_case(FormKind kind, long k, long ell, int d1, int d2,
                                double log_n_bound);

}  // namespace klp
