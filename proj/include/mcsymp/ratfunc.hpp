#pragma once

#include "polynomial.hpp"

namespace mcsymp {

// Reduced rational function num/den over Q[indeterminates]. The denominator
// is primitive with positive leading coefficient; its rational content is
// folded into the numerator, so den==1 for polynomial values.
class RatFunc {
public:
    Poly num, den;

    RatFunc() : num(), den(Rational(1)) {}
    RatFunc(const Poly& n) : num(n), den(Rational(1)) {}
    RatFunc(const Rational& c) : num(Poly(c)), den(Rational(1)) {}
    RatFunc(long c) : num(Poly(c)), den(Rational(1)) {}
    RatFunc(const Poly& n, const Poly& d) : num(n), den(d) { reduce(); }

    bool is_zero() const { return num.is_zero(); }
    bool is_constant() const { return num.is_constant() && den.is_constant(); }
    bool is_polynomial() const { return den.is_constant(); }

    Rational constant_value() const { return num.constant_value() / den.constant_value(); }

    Poly as_poly() const {
        if (!is_polynomial()) throw std::logic_error("RatFunc: not polynomial");
        return num / den.constant_value();
    }

    RatFunc operator-() const {
        RatFunc r = *this;
        r.num = -r.num;
        return r;
    }

    RatFunc operator+(const RatFunc& o) const { return RatFunc(num * o.den + o.num * den, den * o.den); }
    RatFunc operator-(const RatFunc& o) const { return RatFunc(num * o.den - o.num * den, den * o.den); }
    RatFunc operator*(const RatFunc& o) const { return RatFunc(num * o.num, den * o.den); }

    RatFunc operator/(const RatFunc& o) const {
        if (o.is_zero()) throw std::domain_error("RatFunc: division by zero");
        return RatFunc(num * o.den, den * o.num);
    }

    bool operator==(const RatFunc& o) const { return num == o.num && den == o.den; }

    // Full or partial evaluation. Throws if the denominator vanishes at a
    // fully-bound point.
    RatFunc evaluate(const std::map<int, Rational>& bindings) const {
        Poly n = num.evaluate(bindings), d = den.evaluate(bindings);
        if (d.is_zero()) throw std::domain_error("RatFunc: denominator vanishes at binding");
        return RatFunc(n, d);
    }

    RatFunc substitute(const std::map<int, Poly>& bindings) const {
        Poly n = num.substitute(bindings), d = den.substitute(bindings);
        if (d.is_zero()) throw std::domain_error("RatFunc: denominator vanishes under substitution");
        return RatFunc(n, d);
    }

    static int cmp(const RatFunc& x, const RatFunc& y) {
        int c = Poly::cmp(x.num, y.num);
        return c != 0 ? c : Poly::cmp(x.den, y.den);
    }

private:
    void reduce() {
        if (den.is_zero()) throw std::domain_error("RatFunc: zero denominator");
        if (num.is_zero()) {
            den = Poly(Rational(1));
            return;
        }
        if (!den.is_constant()) {
            Poly g = poly_gcd(num, den);
            if (!g.is_constant()) {
                num = *exact_divide(num, g);
                den = *exact_divide(den, g);
            }
        }
        Rational dc = den.content();
        if (sgn(den.leading_coefficient()) < 0) dc = -dc;
        den = den / dc;
        num = num / dc;
    }
};

inline RatFunc operator*(const Rational& c, const RatFunc& f) { return RatFunc(Poly(c)) * f; }

inline std::string to_string(const RatFunc& f) {
    if (f.is_polynomial()) return to_string(f.as_poly());
    std::string n = to_string(f.num), d = to_string(f.den);
    if (f.num.terms.size() > 1) n = "(" + n + ")";
    if (f.den.terms.size() > 1) d = "(" + d + ")";
    return n + "/" + d;
}

}  // namespace mcsymp
