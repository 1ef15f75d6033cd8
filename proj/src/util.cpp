#include "klp/util.hpp"

#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace klp {

mpz_class mpz_from_sci(const std::string& mantissa, long exp10) {
    std::string digits;
    digits.reserve(mantissa.size());
    long frac_digits = 0;
    bool seen_point = false;
    bool neg = false;
    for (char c : mantissa) {
        if (c == '-') {
            neg = true;
        } else if (c == '+') {
            continue;
        } else if (c == '.') {
            seen_point = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            if (seen_point) ++frac_digits;
        } else {
            throw std::invalid_argument("mpz_from_sci: bad mantissa '" + mantissa + "'");
        }
    }
    if (digits.empty()) throw std::invalid_argument("mpz_from_sci: empty mantissa");
    long shift = exp10 - frac_digits;
    if (shift < 0) throw std::invalid_argument("mpz_from_sci: value not integral");
    mpz_class v(digits);
    v *= pow10_z(static_cast<unsigned long>(shift));
    return neg ? mpz_class(-v) : v;
}

mpz_class mpz_from_sci(const std::string& literal) {
    auto epos = literal.find_first_of("eE");
    if (epos == std::string::npos) return mpz_from_sci(literal, 0);
    long e = std::stol(literal.substr(epos + 1));
    return mpz_from_sci(literal.substr(0, epos), e);
}

mpz_class pow10_z(unsigned long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return r;
}

std::string sci_string(const mpz_class& v, int digits) {
    if (v == 0) return "0";
    std::string dec = v.get_str();
    bool neg = dec[0] == '-';
    if (neg) dec.erase(0, 1);
    long exp = static_cast<long>(dec.size()) - 1;
    std::string mant = dec.substr(0, static_cast<size_t>(digits) + 1);
    // round-to-nearest on the last kept digit
    if (mant.size() == static_cast<size_t>(digits) + 1) {
        bool up = mant.back() >= '5';
        mant.pop_back();
        if (up) {
            int i = static_cast<int>(mant.size()) - 1;
            while (i >= 0) {
                if (mant[i] != '9') {
                    ++mant[i];
                    break;
                }
                mant[i] = '0';
                --i;
            }
            if (i < 0) {
                mant.insert(mant.begin(), '1');
                mant.pop_back();
                ++exp;
            }
        }
    }
    while (mant.size() > 1 && mant.back() == '0') mant.pop_back();
    std::string out = neg ? "-" : "";
    out += mant.substr(0, 1);
    if (mant.size() > 1) out += "." + mant.substr(1);
    out += "e" + std::to_string(exp);
    return out;
}

std::string sci_string(const mpq_class& v, int digits) {
    if (v == 0) return "0";
    // scale numerator so the integer quotient keeps enough digits
    mpz_class num = v.get_num(), den = v.get_den();
    bool neg = num < 0;
    if (neg) num = -num;
    long scale = 0;
    mpz_class scaled = num;
    while (scaled < den * pow10_z(static_cast<unsigned long>(digits + 2))) {
        scaled *= 10;
        ++scale;
    }
    mpz_class q = scaled / den;
    std::string s = sci_string(neg ? mpz_class(-q) : q, digits);
    // adjust exponent by -scale
    auto epos = s.find('e');
    long e = std::stol(s.substr(epos + 1)) - scale;
    return s.substr(0, epos) + "e" + std::to_string(e);
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace klp
