#include "klp/algebraic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace klp {

Precision Precision::for_scaling(const mpz_class& C) {
    if (C <= 0) throw std::domain_error("scaling constant must be positive");
    long b = static_cast<long>(mpz_sizeinbase(C.get_mpz_t(), 2));
    return with_bits(std::max<long>(256, b + 64));
}

Interval AlgebraicContext::char_poly_signed(long k, const Interval& x) {
    // x^k (2 - x) - 1 = -(x - 1) * Psi_k(x); vanishes exactly where the
    // characteristic polynomial does on (1, 2), numerically stable for
    // large k, positive left of the root and negative right of it.
    Interval two_minus_x = Interval(2L, x.precision()) - x;
    return x.pow_int(k) * two_minus_x - Interval(1L, x.precision());
}

namespace {

// g'(x) = x^(k-1) (2k - (k+1) x); certainly negative on the bracket.
Interval char_poly_deriv(long k, const Interval& x) {
    Interval lin = Interval(2 * k, x.precision()) - Interval(k + 1, x.precision()) * x;
    return x.pow_int(k - 1) * lin;
}

}  // namespace

AlgebraicContext::AlgebraicContext(long k, Precision prec)
    : k_(k),
      bits_(std::max(prec.bits, k + 64)),
      alpha_(static_cast<mpfr_prec_t>(bits_)),
      f_alpha_(static_cast<mpfr_prec_t>(bits_)),
      two_alpha_minus_one_(static_cast<mpfr_prec_t>(bits_)),
      binet_coeff_(static_cast<mpfr_prec_t>(bits_)),
      log_alpha_(static_cast<mpfr_prec_t>(bits_)) {
    if (k < 2) throw std::domain_error("AlgebraicContext: k must be >= 2");
    const mpfr_prec_t wp = static_cast<mpfr_prec_t>(bits_ + 32);

    // Bracket [2(1 - 2^-k), 2]: exact dyadic endpoints at working precision.
    mpq_class half_pow(mpz_class(2), mpz_class(1) << k);
    half_pow.canonicalize();
    mpq_class lo0 = 2 - half_pow;
    mpq_class hi0(2);
    {
        Interval glo = char_poly_signed(k, Interval::from_endpoints_exact(lo0, lo0, wp));
        Interval ghi = char_poly_signed(k, Interval::from_endpoints_exact(hi0, hi0, wp));
        if (!glo.certainly_positive() || !ghi.certainly_negative())
            throw precision_error("root bracket signs not certified");
    }

    mpq_class lo = lo0, hi = hi0;
    // Bisection to width 1e-3 (midpoints stay exact rationals).
    while (hi - lo > mpq_class(1, 1000)) {
        mpq_class mid = (lo + hi) / 2;
        Interval gm = char_poly_signed(k, Interval::from_endpoints_exact(mid, mid, wp));
        if (gm.certainly_positive())
            lo = mid;
        else if (gm.certainly_negative())
            hi = mid;
        else
            break;  // cannot certify the midpoint sign; Newton takes over
    }

    // Interval Newton: X <- (m - g(m)/g'(X)) intersected with X. Target one
    // bit below the promised width so the sign-check padding stays inside it.
    Interval X = Interval::from_endpoints_exact(lo, hi, wp);
    for (int it = 0; it < 300 && !X.width_below_2exp(-(bits_ - 7)); ++it) {
        Interval m = X.midpoint_interval();
        Interval gp = char_poly_deriv(k, X);
        if (!gp.certainly_negative()) throw precision_error("derivative sign not certified");
        X = (m - char_poly_signed(k, m) / gp).intersect(X);
    }
    if (!X.width_below_2exp(-(bits_ - 7)))
        throw precision_error("root enclosure did not reach target width");

    // Certify the sign change just outside the final enclosure: Newton can
    // overshoot so far that the polynomial sign is undecidable exactly at
    // the endpoints. The pad is far above evaluation error and far below
    // the target width.
    {
        mpq_class padq(mpz_class(1), mpz_class(1) << static_cast<unsigned long>(bits_ + 8));
        Interval pad(padq, wp);
        Interval left = X.lo_point() - pad;
        Interval right = X.hi_point() + pad;
        if (!char_poly_signed(k, left).certainly_positive() ||
            !char_poly_signed(k, right).certainly_negative())
            throw precision_error("final enclosure sign change not certified");
        X = Interval::hull(left, right);
    }
    if (!(X.certainly_greater(lo0) && X.certainly_less(hi0)))
        throw precision_error("root bounds not strict at this precision");

    alpha_ = X;
    two_alpha_minus_one_ = X.mul(2).sub(1);
    Interval denom = Interval(2L, wp) + Interval(k + 1, wp) * (X - Interval(2L, wp));
    if (!denom.certainly_positive()) throw precision_error("f_k denominator sign not certified");
    f_alpha_ = (X - Interval(1L, wp)) / denom;
    if (!(f_alpha_.certainly_greater(mpq_class(1, 2)) && f_alpha_.certainly_less(mpq_class(3, 4))))
        throw precision_error("f_k(alpha) not certified inside (1/2, 3/4)");
    binet_coeff_ = f_alpha_ * two_alpha_minus_one_;
    log_alpha_ = X.log();
}

double log_height_rational(const mpz_class& p, const mpz_class& q) {
    if (q == 0) throw std::domain_error("log_height_rational: zero denominator");
    mpq_class r(p, q);
    r.canonicalize();  // reduces and makes the denominator positive
    mpz_class num = abs(r.get_num());
    mpz_class den = r.get_den();
    const mpz_class& m = num > den ? num : den;
    if (m <= 1) return 0.0;
    return Interval(m, 128).log().mid_double();
}

double height_bound_gamma1_case(FormKind kind, long k, long ell, int d1, int d2,
                                double log_n_bound) {
    auto check_digits = [&] {
        if (d1 < 1 || d1 > 9 || d2 < 0 || d2 > 9 || d1 == d2)
            throw std::domain_error("height_bound: bad digit pair");
    };
    switch (kind) {
        case FormKind::G1:
            if (k < 3) throw std::domain_error("height_bound: k must be >= 3");
            return 9.0 * static_cast<double>(k) * std::log(static_cast<double>(k)) + 0.7;
        case FormKind::G2: {
            if (k < 3) throw std::domain_error("height_bound: k must be >= 3");
            if (ell < 1) throw std::domain_error("height_bound: ell must be >= 1");
            double lk = std::log(static_cast<double>(k));
            return 6.04e12 * std::pow(static_cast<double>(k), 5) * lk * lk * log_n_bound;
        }
        case FormKind::G3:
            check_digits();
            return std::log(243.0);
        case FormKind::G4:
            check_digits();
            if (ell < 1) throw std::domain_error("height_bound: ell must be >= 1");
            return 1.9e12 * log_n_bound;
    }
    throw std::domain_error("height_bound: unknown kind");
}

}  // namespace klp
