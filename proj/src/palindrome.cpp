#include "klp/palindrome.hpp"

#include <stdexcept>
#include <string>

#include "klp/util.hpp"

namespace klp {

static void validate(const PalindromeDecomposition& dec) {
    if (dec.d1 < 1 || dec.d1 > 9) throw std::domain_error("compose: d1 must be 1..9");
    if (dec.d2 < 0 || dec.d2 > 9) throw std::domain_error("compose: d2 must be 0..9");
    if (dec.d1 == dec.d2) throw std::domain_error("compose: digits must differ");
    if (dec.ell < 1 || dec.m < 1) throw std::domain_error("compose: block lengths must be >= 1");
}

mpz_class compose(const PalindromeDecomposition& dec) {
    validate(dec);
    mpz_class rep_ell = (pow10_z(static_cast<unsigned long>(dec.ell)) - 1) / 9;
    mpz_class rep_m = (pow10_z(static_cast<unsigned long>(dec.m)) - 1) / 9;
    mpz_class v = dec.d1 * rep_ell;
    v *= pow10_z(static_cast<unsigned long>(dec.ell + dec.m));
    v += dec.d2 * rep_m * pow10_z(static_cast<unsigned long>(dec.ell));
    v += dec.d1 * rep_ell;
    return v;
}

std::optional<PalindromeDecomposition> decompose(const mpz_class& v) {
    if (v <= 0) return std::nullopt;
    const std::string s = v.get_str();
    const long len = static_cast<long>(s.size());
    if (len < 3) return std::nullopt;
    for (long ell = 1; 2 * ell < len; ++ell) {
        const long m = len - 2 * ell;
        const char a = s[0];
        bool ok = true;
        for (long i = 0; i < ell && ok; ++i)
            ok = s[static_cast<size_t>(i)] == a && s[static_cast<size_t>(len - 1 - i)] == a;
        if (!ok) continue;
        const char b = s[static_cast<size_t>(ell)];
        if (b == a) continue;
        for (long i = ell; i < ell + m && ok; ++i) ok = s[static_cast<size_t>(i)] == b;
        if (!ok) continue;
        return PalindromeDecomposition{a - '0', b - '0', ell, m};
    }
    return std::nullopt;
}

bool small_case_filter(long n, long ell, long m) {
    // 16 | 27*2^(n-2) and 16 | 10^ell for ell >= 4, but never 16 | d1(10^ell - 1)
    if (ell >= 4) return false;
    // for n >= 16, 2^14 | 27*2^(n-2) and 2^14 | 10^(ell+m) when ell+m >= 14,
    // while (d1-d2)*10^ell - d1 is nonzero with |.| < 2^14
    if (n >= 16 && ell + m >= 14) return false;
    return true;
}

PowerCaseResult power_case_search(long ell_max, long m_max) {
    PowerCaseResult result;
    for (int d1 = 1; d1 <= 9; ++d1)
        for (int d2 = 0; d2 <= 9; ++d2) {
            if (d2 == d1) continue;
            for (long ell = 1; ell <= ell_max; ++ell)
                for (long m = 1; m <= m_max; ++m) {
                    ++result.searched;
                    PalindromeDecomposition dec{d1, d2, ell, m};
                    mpz_class v = compose(dec);
                    if (v % 3 != 0) continue;
                    mpz_class q = v / 3;
                    // q must be a power of two: a single set bit
                    if (mpz_popcount(q.get_mpz_t()) != 1) continue;
                    long t = static_cast<long>(mpz_sizeinbase(q.get_mpz_t(), 2)) - 1;
                    result.hits.push_back(PowerCaseHit{dec, t + 2, v});
                }
        }
    return result;
}

}  // namespace klp
