#include "klp/interval.hpp"

#include <algorithm>
#include <cstring>
#include <utility>

namespace klp {

Interval::Interval(mpfr_prec_t prec) : prec_(std::max<mpfr_prec_t>(prec, MPFR_PREC_MIN)) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
}

Interval::Interval(long v, mpfr_prec_t prec) : Interval(prec) {
    mpfr_set_si(lo_, v, MPFR_RNDD);
    mpfr_set_si(hi_, v, MPFR_RNDU);
}

Interval::Interval(const mpz_class& v, mpfr_prec_t prec) : Interval(prec) {
    mpfr_set_z(lo_, v.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(hi_, v.get_mpz_t(), MPFR_RNDU);
}

Interval::Interval(const mpq_class& v, mpfr_prec_t prec) : Interval(prec) {
    mpfr_set_q(lo_, v.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi_, v.get_mpq_t(), MPFR_RNDU);
}

Interval::Interval(const Interval& o) : prec_(o.prec_) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& o) noexcept : prec_(o.prec_) {
    lo_[0] = o.lo_[0];
    hi_[0] = o.hi_[0];
    // leave the source valid for its destructor
    mpfr_init2(o.lo_, MPFR_PREC_MIN);
    mpfr_init2(o.hi_, MPFR_PREC_MIN);
}

Interval& Interval::operator=(Interval o) noexcept {
    std::swap(prec_, o.prec_);
    std::swap(lo_[0], o.lo_[0]);
    std::swap(hi_[0], o.hi_[0]);
    return *this;
}

Interval::~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

Interval Interval::from_endpoints_exact(const mpq_class& lo, const mpq_class& hi, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_q(r.lo_, lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, hi.get_mpq_t(), MPFR_RNDU);
    return r;
}

Interval Interval::point_from(const mpfr_t& v, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set(r.lo_, v, MPFR_RNDD);
    mpfr_set(r.hi_, v, MPFR_RNDU);
    return r;
}

Interval Interval::midpoint_interval() const {
    mpfr_t m;
    mpfr_init2(m, prec_);
    mpfr_add(m, lo_, hi_, MPFR_RNDN);
    mpfr_div_ui(m, m, 2, MPFR_RNDN);
    Interval r = point_from(m, prec_);
    mpfr_clear(m);
    return r;
}

Interval Interval::lo_point() const { return point_from(lo_, prec_); }
Interval Interval::hi_point() const { return point_from(hi_, prec_); }

Interval Interval::intersect(const Interval& o) const {
    Interval r(std::max(prec_, o.prec_));
    mpfr_set(r.lo_, mpfr_cmp(lo_, o.lo_) > 0 ? lo_ : o.lo_, MPFR_RNDD);
    mpfr_set(r.hi_, mpfr_cmp(hi_, o.hi_) < 0 ? hi_ : o.hi_, MPFR_RNDU);
    if (mpfr_cmp(r.lo_, r.hi_) > 0) throw precision_error("empty interval intersection");
    return r;
}

Interval Interval::hull(const Interval& a, const Interval& b) {
    Interval r(std::max(a.prec_, b.prec_));
    mpfr_set(r.lo_, mpfr_cmp(a.lo_, b.lo_) < 0 ? a.lo_ : b.lo_, MPFR_RNDD);
    mpfr_set(r.hi_, mpfr_cmp(a.hi_, b.hi_) > 0 ? a.hi_ : b.hi_, MPFR_RNDU);
    return r;
}

bool Interval::width_below_2exp(long e) const {
    mpfr_t w, t;
    mpfr_init2(w, 64);
    mpfr_init2(t, 64);
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    mpfr_set_ui_2exp(t, 1, e, MPFR_RNDN);
    bool ok = mpfr_cmp(w, t) <= 0;
    mpfr_clear(w);
    mpfr_clear(t);
    return ok;
}

void Interval::check_valid(const char* op) const {
    if (mpfr_nan_p(lo_) || mpfr_nan_p(hi_) || mpfr_cmp(lo_, hi_) > 0)
        throw precision_error(std::string("interval invalid after ") + op);
}

Interval Interval::operator-() const {
    Interval r(prec_);
    mpfr_neg(r.lo_, hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    return r;
}

Interval Interval::operator+(const Interval& o) const {
    Interval r(std::max(prec_, o.prec_));
    mpfr_add(r.lo_, lo_, o.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, hi_, o.hi_, MPFR_RNDU);
    r.check_valid("+");
    return r;
}

Interval Interval::operator-(const Interval& o) const {
    Interval r(std::max(prec_, o.prec_));
    mpfr_sub(r.lo_, lo_, o.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, hi_, o.lo_, MPFR_RNDU);
    r.check_valid("-");
    return r;
}

Interval Interval::operator*(const Interval& o) const {
    Interval r(std::max(prec_, o.prec_));
    mpfr_t t;
    mpfr_init2(t, r.prec_);
    // min over four products rounded down, max rounded up
    const mpfr_srcptr a[2] = {lo_, hi_};
    const mpfr_srcptr b[2] = {o.lo_, o.hi_};
    bool first = true;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            mpfr_mul(t, a[i], b[j], MPFR_RNDD);
            if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
            mpfr_mul(t, a[i], b[j], MPFR_RNDU);
            if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
            first = false;
        }
    mpfr_clear(t);
    r.check_valid("*");
    return r;
}

Interval Interval::operator/(const Interval& o) const {
    if (o.contains_zero()) throw std::domain_error("interval division by interval containing 0");
    Interval r(std::max(prec_, o.prec_));
    mpfr_t t;
    mpfr_init2(t, r.prec_);
    const mpfr_srcptr a[2] = {lo_, hi_};
    const mpfr_srcptr b[2] = {o.lo_, o.hi_};
    bool first = true;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            mpfr_div(t, a[i], b[j], MPFR_RNDD);
            if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
            mpfr_div(t, a[i], b[j], MPFR_RNDU);
            if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
            first = false;
        }
    mpfr_clear(t);
    r.check_valid("/");
    return r;
}

Interval Interval::log() const {
    if (!certainly_positive()) throw std::domain_error("interval log needs positive argument");
    Interval r(prec_);
    mpfr_log(r.lo_, lo_, MPFR_RNDD);
    mpfr_log(r.hi_, hi_, MPFR_RNDU);
    r.check_valid("log");
    return r;
}

Interval Interval::sqrt() const {
    if (mpfr_sgn(lo_) < 0) throw std::domain_error("interval sqrt needs nonnegative argument");
    Interval r(prec_);
    mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
    r.check_valid("sqrt");
    return r;
}

Interval Interval::abs() const {
    if (certainly_positive()) return *this;
    if (certainly_negative()) return -*this;
    Interval r(prec_);
    mpfr_set_zero(r.lo_, 1);
    mpfr_t t;
    mpfr_init2(t, prec_);
    mpfr_neg(t, lo_, MPFR_RNDU);
    if (mpfr_cmp(t, hi_) > 0)
        mpfr_set(r.hi_, t, MPFR_RNDU);
    else
        mpfr_set(r.hi_, hi_, MPFR_RNDU);
    mpfr_clear(t);
    return r;
}

Interval Interval::pow_int(long e) const {
    if (!certainly_positive()) throw std::domain_error("interval pow_int needs positive base");
    if (e < 0) {
        Interval one(1L, prec_);
        return one / pow_int(-e);
    }
    Interval r(prec_);
    // monotone in the base for positive base
    mpfr_pow_ui(r.lo_, lo_, static_cast<unsigned long>(e), MPFR_RNDD);
    mpfr_pow_ui(r.hi_, hi_, static_cast<unsigned long>(e), MPFR_RNDU);
    r.check_valid("pow_int");
    return r;
}

double Interval::width() const {
    mpfr_t t;
    mpfr_init2(t, 64);
    mpfr_sub(t, hi_, lo_, MPFR_RNDU);
    double w = mpfr_get_d(t, MPFR_RNDU);
    mpfr_clear(t);
    return w;
}

double Interval::mid_double() const {
    mpfr_t t;
    mpfr_init2(t, 64);
    mpfr_add(t, lo_, hi_, MPFR_RNDN);
    mpfr_div_ui(t, t, 2, MPFR_RNDN);
    double m = mpfr_get_d(t, MPFR_RNDN);
    mpfr_clear(t);
    return m;
}

bool Interval::contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
bool Interval::certainly_positive() const { return mpfr_sgn(lo_) > 0; }
bool Interval::certainly_negative() const { return mpfr_sgn(hi_) < 0; }
bool Interval::certainly_less(const Interval& o) const { return mpfr_cmp(hi_, o.lo_) < 0; }
bool Interval::certainly_greater(const Interval& o) const { return mpfr_cmp(lo_, o.hi_) > 0; }

bool Interval::certainly_less(const mpq_class& v) const {
    return mpfr_cmp_q(hi_, v.get_mpq_t()) < 0;
}

bool Interval::certainly_greater(const mpq_class& v) const {
    return mpfr_cmp_q(lo_, v.get_mpq_t()) > 0;
}

bool Interval::contains(const Interval& o) const {
    return mpfr_cmp(lo_, o.lo_) <= 0 && mpfr_cmp(hi_, o.hi_) >= 0;
}

bool Interval::contains(const mpq_class& v) const {
    return mpfr_cmp_q(lo_, v.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, v.get_mpq_t()) >= 0;
}

std::optional<mpz_class> Interval::floor_certified() const {
    mpz_class flo, fhi;
    mpfr_t t;
    mpfr_init2(t, mpfr_get_prec(lo_));
    mpfr_floor(t, lo_);
    mpfr_get_z(flo.get_mpz_t(), t, MPFR_RNDN);
    mpfr_set_prec(t, mpfr_get_prec(hi_));
    mpfr_floor(t, hi_);
    mpfr_get_z(fhi.get_mpz_t(), t, MPFR_RNDN);
    mpfr_clear(t);
    if (flo != fhi) return std::nullopt;
    return flo;
}

static std::string endpoint_string(const mpfr_t& v, int digits, mpfr_rnd_t rnd) {
    char* s = nullptr;
    mpfr_exp_t e;
    s = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), v, rnd);
    std::string body(s);
    mpfr_free_str(s);
    bool neg = !body.empty() && body[0] == '-';
    std::string dig = neg ? body.substr(1) : body;
    std::string out = (neg ? "-" : "") + dig.substr(0, 1);
    if (dig.size() > 1) out += "." + dig.substr(1);
    out += "e" + std::to_string(static_cast<long>(e) - 1);
    return out;
}

std::string Interval::lo_string(int digits) const { return endpoint_string(lo_, digits, MPFR_RNDD); }
std::string Interval::hi_string(int digits) const { return endpoint_string(hi_, digits, MPFR_RNDU); }

}  // namespace klp
