#pragma once

#include <gmpxx.h>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "klp/algebraic.hpp"
#include "klp/interval.hpp"

namespace klp {

using IntVec = std::vector<mpz_class>;

// Full-rank integer lattice given by basis column vectors.
struct Lattice {
    std::vector<IntVec> cols;

    int dim() const { return static_cast<int>(cols.size()); }
};

// LLL output: the reduced basis together with its exact Gram-Schmidt data
// and the unimodular transform back to the input basis.
struct ReducedBasis {
    std::vector<IntVec> cols;
    std::vector<std::vector<mpq_class>> mu;  // strictly lower triangular
    std::vector<mpq_class> gso_norm2;        // ||b*_i||^2, exact
    std::vector<IntVec> transform;           // input * transform == cols

    int dim() const { return static_cast<int>(cols.size()); }
};

// Exact integer LLL with the 3/4 Lovasz constant: size-reduced and
// Lovasz-conditioned output, no floating point anywhere. Dependent input
// columns raise a domain error.
ReducedBasis lll_reduce(const Lattice& lat, const mpq_class& lovasz = mpq_class(3, 4));

// Approximation lattice: identity block above a bottom row of certified
// floor(C * eta_i). Raises precision_error when a floor cannot be certified
// or the etas carry fewer than log2(C) + 16 bits.
Lattice build_approx_lattice(const std::vector<Interval>& etas, const mpz_class& C);

// Homogeneous-case distance certificate. For y = 0 (the only case the
// pipeline uses) delta = lambda ||b1|| / c1 with lambda = 1, which equals
// min_j ||b*_j||. For y != 0, lambda is the fractional part of the last
// nonzero coordinate of z = B^(-1) y.
struct Certificate {
    mpq_class c1_sq;     // c1^2 = ||b1||^2 / min_j ||b*_j||^2
    mpq_class delta_sq;  // delta^2
};
Certificate certificate(const ReducedBasis& red, const std::vector<mpq_class>& y = {});

// Exact lambda_1^2 by Fincke-Pohst enumeration over the reduced basis.
mpq_class shortest_vector_norm2(const ReducedBasis& red);

// Bound extraction: S = sum of X_i^2 over all but the last coordinate,
// T = (1 + sum X_i)/2; requires delta^2 >= T^2 + S, in which case
//   H <= (log(C c3) - log(sqrt(delta^2 - S) - T)) / c4,
// returned rounded up. Empty when the certificate condition fails.
std::optional<double> reduce_bound(const mpz_class& C, const mpq_class& delta_sq,
                                   const std::vector<mpz_class>& X, double c3, double c4);

// Same arithmetic with S and T supplied directly (replaying recorded runs).
std::optional<double> reduce_bound_with(const mpz_class& C, const mpq_class& delta_sq,
                                        const mpq_class& S, const mpq_class& T, double c3,
                                        double c4);

struct CellRecord {
    long k = 0;
    int d1 = 0;
    int d2 = 0;
    long ell = 0;
    mpz_class C_used;
    mpq_class delta_sq;
    mpq_class S;
    mpq_class T;
    double H = 0.0;
    bool resolved = false;
    int escalations = 0;
};

struct ReductionSummary {
    FormKind form = FormKind::G1;
    std::vector<CellRecord> cells;  // empty when the plan drops per-cell records
    size_t cell_count = 0;
    double max_H = 0.0;
    std::vector<CellRecord> unresolved;

    bool all_resolved() const { return unresolved.empty(); }
};

// One reduction sweep: for every cell in the plan, build the approximation
// lattice for the form, LLL-reduce, certify the shortest distance (exact
// lambda_1 in the homogeneous case), and extract the H bound. Cells whose
// certificate fails retry with C multiplied by 10^3, up to max_escalations.
struct ReductionPlan {
    FormKind form = FormKind::G1;
    long k_min = 3, k_max = 3;       // G1/G2
    long ell_min = 1, ell_max = 1;   // G2/G4
    long k_stride = 1, ell_stride = 1;
    std::vector<std::pair<int, int>> digit_pairs;  // (d1, d2); d2 ignored by G1/G3
    mpz_class C;
    mpz_class n_bound;
    double c3 = 1.0;
    double c4 = 1.0;
    int max_escalations = 5;
    int parallelism = 1;
    long precision_bits = 0;       // 0: derive from C
    bool keep_cell_records = true; // false: aggregates only (large sweeps)
    std::function<std::shared_ptr<const AlgebraicContext>(long)> alg_provider;  // G1/G2
};
ReductionSummary reduction_round(const ReductionPlan& plan);

}  // namespace klp
