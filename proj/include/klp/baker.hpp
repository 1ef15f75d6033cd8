#pragma once

#include <gmpxx.h>

#include <array>
#include <optional>

#include "klp/algebraic.hpp"
#include "klp/interval.hpp"

namespace klp {

// One algebraic number entering a linear form in logarithms, with the data
// the lower-bound theorem consumes: a value enclosure, its log, and the
// height parameter A_i.
struct GammaDescriptor {
    Interval value{128};
    Interval log_value{128};
    double a_bound = 0.0;
};

// A linear form in three logarithms b1 log g1 + b2 log g2 + b3 log g3
// together with the parameters (t, D, B, A_i) of the lower-bound theorem.
struct LinearFormSpec {
    FormKind kind = FormKind::G1;
    std::array<GammaDescriptor, 3> gammas;
    std::array<mpz_class, 3> coeffs;
    int t = 3;
    long degree = 1;  // field degree D
    mpz_class b_max;  // B >= max |b_i|
};

struct FormParams {
    long k = 0;
    int d1 = 0;
    int d2 = 0;
    long ell = 0;
    long m = 0;
    mpz_class n;  // current value or bound for n; also used as B
};

// -1.4 * 30^(t+3) * t^4.5 * D^2 (1 + log D)(1 + log B) A1 A2 A3,
// a lower bound for log |Gamma| when Gamma != 0. Plain double arithmetic;
// these are coarse envelopes, not certificates.
double matveev_lower_bound(const LinearFormSpec& spec);

// Populate the descriptor for one of the four forms, using the fixed A_i
// choices each form is calibrated with. params.n serves as both B and the
// n-bound entering the G2/G4 height formulas. alg may be null for G3/G4.
LinearFormSpec build_linear_form(FormKind kind, const FormParams& params,
                                 const AlgebraicContext* alg);

// Gamma != 0: exact 5-divisibility argument for G3/G4; certified interval
// exclusion of zero for G1/G2 (precision_error when the enclosure straddles).
bool nonvanishing_check(FormKind kind, const FormParams& params, const AlgebraicContext* alg);

// Closed-form caps on the exponents, evaluated at the given n bound.
double bound_ell(long k, double n_bound);
double bound_m(long k, double n_bound);
double bound_n(long k);

// Large-k regime: per-branch k bound at a fixed n bound.
enum class Case2Branch { a, b };
double case2_k_bound(Case2Branch branch, double n_bound);

// Closing the circular dependence log n < c log k by fixed-point iteration;
// returns the published closure constants after verifying the iteration
// lands below them. Branch b also yields the companion n bound.
struct Case2Closure {
    double k_bound;
    double n_bound;  // only meaningful for branch b
};
Case2Closure case2_closure(Case2Branch branch);

}  // namespace klp
