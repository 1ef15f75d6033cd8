#include "klp/sequence.hpp"

#include <stdexcept>

namespace klp {

KLucasSequence::KLucasSequence(long k) : k_(k), max_n_(1) {
    if (k < 2) throw std::domain_error("KLucasSequence: k must be >= 2");
    terms_.reserve(static_cast<size_t>(k) + 64);
    for (long n = 2 - k; n <= -1; ++n) terms_.emplace_back(0);
    terms_.emplace_back(2);  // n = 0
    terms_.emplace_back(1);  // n = 1
    window_ = 3;             // sum over the k seed terms
}

void KLucasSequence::extend(long n_max) {
    while (max_n_ < n_max) {
        mpz_class next = window_;
        window_ += next;
        window_ -= terms_[slot(max_n_ + 1 - k_)];
        terms_.push_back(std::move(next));
        ++max_n_;
    }
}

const mpz_class& KLucasSequence::term(long n) {
    if (n < 2 - k_) throw std::domain_error("KLucasSequence: index below 2-k");
    if (n > max_n_) extend(n);
    return terms_[slot(n)];
}

bool KLucasSequence::power_identity_holds(long n) {
    if (n < 2 || n > k_) throw std::domain_error("power_identity_holds: need 2 <= n <= k");
    mpz_class expected = mpz_class(3) << static_cast<unsigned long>(n - 2);
    return term(n) == expected;
}

Interval KLucasSequence::binet_residual(const AlgebraicContext& alg, long n) {
    if (n < 2 - k_) throw std::domain_error("binet_residual: index below 2-k");
    if (alg.k() != k_) throw std::domain_error("binet_residual: context built for different k");
    const mpfr_prec_t prec = static_cast<mpfr_prec_t>(alg.bits());
    Interval ln(term(n), prec);
    Interval e = ln - alg.binet_coeff() * alg.alpha().pow_int(n - 1);
    mpq_class bound(3, 2);
    bool inside = e.abs().certainly_less(bound);
    bool outside = e.abs().certainly_greater(bound);
    if (!inside && !outside)
        throw precision_error("binet_residual: cannot certify |e| against 1.5");
    return e;
}

bool KLucasSequence::sharp_estimate_holds(const AlgebraicContext& alg, long n) {
    if (alg.k() != k_) throw std::domain_error("sharp_estimate_holds: context for different k");
    if (n < 1) throw std::domain_error("sharp_estimate_holds: n must be >= 1");
    mpz_class n2 = mpz_class(n) * n;
    mpz_class two_k = mpz_class(1) << static_cast<unsigned long>(k_);
    if (n2 >= two_k) throw std::domain_error("sharp_estimate_holds: requires n < 2^(k/2)");

    const mpfr_prec_t prec = static_cast<mpfr_prec_t>(alg.bits());
    Interval two(2L, prec);
    Interval pow_main = alg.binet_coeff() * alg.alpha().pow_int(n - 1);
    Interval ref = Interval(3L, prec) * two.pow_int(n - 2);
    Interval lhs = (pow_main - ref).abs();
    Interval rhs = ref * Interval(36L, prec) / Interval(two_k, prec).sqrt();
    if (lhs.certainly_less(rhs)) return true;
    if (lhs.certainly_greater(rhs)) return false;
    throw precision_error("sharp_estimate_holds: enclosures overlap at this precision");
}

}  // namespace klp
