#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace mcsymp {

// Exact rational scalar. mpq_class keeps gcd(num,den)=1 and den>0 after
// canonicalize(); every constructor here canonicalizes.
using Rational = mpq_class;

inline Rational rational(long num, long den = 1) {
    if (den == 0) throw std::domain_error("rational: zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

inline std::string to_string(const Rational& q) { return q.get_str(); }

// Accepts "p", "-p", "p/q" with arbitrary-precision digits.
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("parse_rational: empty string");
    Rational q;
    if (q.set_str(text, 10) != 0)
        throw std::invalid_argument("parse_rational: bad rational '" + text + "'");
    if (q.get_den() == 0) throw std::domain_error("parse_rational: zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
}

// gcd of |a|,|b| over Q: gcd of numerators over lcm of denominators.
// Used for polynomial content.
inline Rational rational_gcd(const Rational& a, const Rational& b) {
    if (is_zero(a)) return abs(b);
    if (is_zero(b)) return abs(a);
    mpz_class gn, lcd;
    mpz_gcd(gn.get_mpz_t(), a.get_num().get_mpz_t(), b.get_num().get_mpz_t());
    mpz_lcm(lcd.get_mpz_t(), a.get_den().get_mpz_t(), b.get_den().get_mpz_t());
    Rational g(gn, lcd);
    g.canonicalize();
    return g;
}

}  // namespace mcsymp
