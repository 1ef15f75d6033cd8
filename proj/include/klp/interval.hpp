#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <optional>
#include <string>

#include "klp/errors.hpp"

namespace klp {

// Certified real: closed interval [lo, hi] with endpoints rounded outward
// (lo toward -inf, hi toward +inf) at a fixed mantissa precision. Every
// operation encloses the exact result.
class Interval {
public:
    explicit Interval(mpfr_prec_t prec = 128);
    Interval(long v, mpfr_prec_t prec);
    Interval(const mpz_class& v, mpfr_prec_t prec);
    Interval(const mpq_class& v, mpfr_prec_t prec);

    Interval(const Interval& o);
    Interval(Interval&& o) noexcept;
    Interval& operator=(Interval o) noexcept;
    ~Interval();

    static Interval from_endpoints_exact(const mpq_class& lo, const mpq_class& hi, mpfr_prec_t prec);
    static Interval point_from(const mpfr_t& v, mpfr_prec_t prec);

    Interval midpoint_interval() const;           // degenerate interval at the midpoint
    Interval lo_point() const;                    // degenerate interval at lo
    Interval hi_point() const;                    // degenerate interval at hi
    Interval intersect(const Interval& o) const;  // throws precision_error when empty
    static Interval hull(const Interval& a, const Interval& b);
    bool width_below_2exp(long e) const;          // hi - lo <= 2^e

    mpfr_prec_t precision() const { return prec_; }
    const mpfr_t& lo() const { return lo_; }
    const mpfr_t& hi() const { return hi_; }

    Interval operator-() const;
    Interval operator+(const Interval& o) const;
    Interval operator-(const Interval& o) const;
    Interval operator*(const Interval& o) const;
    Interval operator/(const Interval& o) const;  // divisor must exclude 0

    Interval add(long v) const { return *this + Interval(v, prec_); }
    Interval sub(long v) const { return *this - Interval(v, prec_); }
    Interval mul(long v) const { return *this * Interval(v, prec_); }
    Interval div(long v) const { return *this / Interval(v, prec_); }

    Interval log() const;   // requires certainly positive
    Interval sqrt() const;  // requires lo >= 0
    Interval abs() const;
    Interval pow_int(long e) const;  // requires certainly positive base

    double width() const;
    double mid_double() const;
    bool contains_zero() const;
    bool certainly_positive() const;
    bool certainly_negative() const;
    bool certainly_less(const Interval& o) const;     // hi < o.lo
    bool certainly_greater(const Interval& o) const;  // lo > o.hi
    bool certainly_less(const mpq_class& v) const;
    bool certainly_greater(const mpq_class& v) const;
    bool contains(const Interval& o) const;  // o subset of *this
    bool contains(const mpq_class& v) const;

    // Floor of the enclosed value; empty when the enclosure straddles an
    // integer boundary (caller must raise precision).
    std::optional<mpz_class> floor_certified() const;

    // Decimal rendering of an endpoint, rounded outward, `digits` significant.
    std::string lo_string(int digits) const;
    std::string hi_string(int digits) const;

private:
    mpfr_prec_t prec_;
    mpfr_t lo_, hi_;
    void check_valid(const char* op) const;
};

}  // namespace klp
