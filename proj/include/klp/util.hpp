#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace klp {

// Exact integer from a decimal scientific literal, e.g. ("2.1", 178) -> 21 * 10^177.
// The mantissa may carry a fractional part; the result must come out integral.
mpz_class mpz_from_sci(const std::string& mantissa, long exp10);

// Parse strings like "2.1e178", "8.8E58", "1300" into an exact integer.
mpz_class mpz_from_sci(const std::string& literal);

mpz_class pow10_z(unsigned long e);

// Short scientific rendering of huge exact values for reports ("1.3e867").
std::string sci_string(const mpz_class& v, int digits = 6);
std::string sci_string(const mpq_class& v, int digits = 6);

// FNV-1a, stable across platforms (reports embed digests of huge decimals).
std::uint64_t fnv1a64(const std::string& s);

}  // namespace klp
