#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gdh {

// Exact rational scalar. GMP keeps the canonical form (gcd 1, positive
// denominator) for all arithmetic results.
using Q = mpq_class;

inline bool is_zero(const Q& q) { return sgn(q) == 0; }
inline bool is_one(const Q& q) { return q == 1; }

inline Q make_q(long num, long den = 1) {
    Q q(num, den);
    q.canonicalize();
    return q;
}

inline Q q_parse(const std::string& num, const std::string& den) {
    Q q{mpz_class(num), mpz_class(den)};
    if (sgn(q.get_den()) == 0) throw std::invalid_argument("rational: zero denominator");
    q.canonicalize();
    return q;
}

inline Q factorial_q(long n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return Q(f);
}

// k(k-1)...(k-l+1)/l! for any integer k and l >= 0. This is the coefficient
// appearing in the Leibniz-type composition rule; always an integer, but we
// keep it rational for uniformity.
inline Q falling_binom(long k, long l) {
    Q num(1);
    for (long i = 0; i < l; ++i) num *= Q(k - i);
    return num / factorial_q(l);
}

// Generalized binomial coefficient (c choose l) for rational c.
inline Q frac_binom(const Q& c, long l) {
    Q num(1);
    for (long i = 0; i < l; ++i) num *= c - Q(i);
    return num / factorial_q(l);
}

inline Q q_pow(const Q& base, long e) {
    if (e < 0) {
        if (is_zero(base)) throw std::domain_error("rational: inverse of zero");
        return Q(1) / q_pow(base, -e);
    }
    Q r(1), b(base);
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

}  // namespace gdh
