#pragma once

#include <algorithm>
#include <cassert>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

#include "indeterminate.hpp"
#include "rational.hpp"

namespace mcsymp {

// Power product over interned indeterminates: sorted (var id, exponent>0).
class Monomial {
public:
    std::vector<std::pair<int, int>> factors;

    Monomial() = default;
    explicit Monomial(int var, int exp = 1) {
        if (exp < 0) throw std::invalid_argument("Monomial: negative exponent");
        if (exp > 0) factors.push_back({var, exp});
    }

    bool is_unit() const { return factors.empty(); }

    int total_degree() const {
        int d = 0;
        for (auto& [v, e] : factors) d += e;
        return d;
    }

    int degree_in(int var) const {
        for (auto& [v, e] : factors)
            if (v == var) return e;
        return 0;
    }

    Monomial operator*(const Monomial& o) const {
        Monomial r;
        auto a = factors.begin(), b = o.factors.begin();
        while (a != factors.end() || b != o.factors.end()) {
            if (b == o.factors.end() || (a != factors.end() && a->first < b->first))
                r.factors.push_back(*a++);
            else if (a == factors.end() || b->first < a->first)
                r.factors.push_back(*b++);
            else {
                r.factors.push_back({a->first, a->second + b->second});
                ++a, ++b;
            }
        }
        return r;
    }

    // Exact quotient this / o, or nullopt if some exponent would go negative.
    std::optional<Monomial> divide(const Monomial& o) const {
        Monomial r;
        auto a = factors.begin(), b = o.factors.begin();
        while (b != o.factors.end()) {
            if (a == factors.end() || a->first > b->first) return std::nullopt;
            if (a->first < b->first) {
                r.factors.push_back(*a++);
                continue;
            }
            if (a->second < b->second) return std::nullopt;
            if (a->second > b->second) r.factors.push_back({a->first, a->second - b->second});
            ++a, ++b;
        }
        while (a != factors.end()) r.factors.push_back(*a++);
        return r;
    }

    bool operator==(const Monomial& o) const { return factors == o.factors; }

    // Graded lexicographic storage order; earlier-declared indeterminates are
    // more significant. Returns <0, 0, >0 with "larger" meaning leading.
    static int cmp(const Monomial& x, const Monomial& y) {
        int dx = x.total_degree(), dy = y.total_degree();
        if (dx != dy) return dx < dy ? -1 : 1;
        auto a = x.factors.begin(), b = y.factors.begin();
        while (a != x.factors.end() && b != y.factors.end()) {
            if (a->first != b->first) return a->first < b->first ? 1 : -1;
            if (a->second != b->second) return a->second > b->second ? 1 : -1;
            ++a, ++b;
        }
        if (a != x.factors.end()) return 1;
        if (b != y.factors.end()) return -1;
        return 0;
    }

    // Dictionary order on the id-with-multiplicity word; used by the pivot
    // order, where the earliest-declared variable should win ties.
    static int dict_cmp(const Monomial& x, const Monomial& y) {
        auto a = x.factors.begin(), b = y.factors.begin();
        int ra = a == x.factors.end() ? 0 : a->second;
        int rb = b == y.factors.end() ? 0 : b->second;
        while (a != x.factors.end() && b != y.factors.end()) {
            if (a->first != b->first) return a->first < b->first ? -1 : 1;
            int step = std::min(ra, rb);
            ra -= step, rb -= step;
            if (ra == 0) {
                ++a;
                ra = a == x.factors.end() ? 0 : a->second;
            }
            if (rb == 0) {
                ++b;
                rb = b == y.factors.end() ? 0 : b->second;
            }
        }
        if (a != x.factors.end()) return 1;
        if (b != y.factors.end()) return -1;
        return 0;
    }
};

// Sparse multivariate polynomial over Q; terms kept sorted leading-first,
// no zero coefficients stored.
class Poly {
public:
    std::vector<std::pair<Monomial, Rational>> terms;

    Poly() = default;
    Poly(const Rational& c) {
        if (!mcsymp::is_zero(c)) terms.push_back({Monomial(), c});
    }
    Poly(long c) : Poly(Rational(c)) {}
    explicit Poly(Indeterminate v) { terms.push_back({Monomial(v.id), Rational(1)}); }

    static Poly variable(Indeterminate v) { return Poly(v); }

    bool is_zero() const { return terms.empty(); }
    bool is_constant() const { return terms.empty() || (terms.size() == 1 && terms[0].first.is_unit()); }

    Rational constant_value() const {
        if (terms.empty()) return Rational(0);
        if (!is_constant()) throw std::logic_error("Poly: not a constant");
        return terms[0].second;
    }

    int total_degree() const {
        int d = 0;
        for (auto& [m, c] : terms) d = std::max(d, m.total_degree());
        return d;
    }

    int degree_in(int var) const {
        int d = 0;
        for (auto& [m, c] : terms) d = std::max(d, m.degree_in(var));
        return d;
    }

    std::set<int> vars() const {
        std::set<int> s;
        for (auto& [m, c] : terms)
            for (auto& [v, e] : m.factors) s.insert(v);
        return s;
    }

    const Monomial& leading_monomial() const {
        if (terms.empty()) throw std::logic_error("Poly: leading term of zero");
        return terms[0].first;
    }
    const Rational& leading_coefficient() const {
        if (terms.empty()) throw std::logic_error("Poly: leading term of zero");
        return terms[0].second;
    }

    Poly operator-() const {
        Poly r = *this;
        for (auto& [m, c] : r.terms) c = -c;
        return r;
    }

    Poly operator+(const Poly& o) const {
        Poly r;
        auto a = terms.begin(), b = o.terms.begin();
        while (a != terms.end() || b != o.terms.end()) {
            if (b == o.terms.end()) {
                r.terms.push_back(*a++);
            } else if (a == terms.end()) {
                r.terms.push_back(*b++);
            } else {
                int c = Monomial::cmp(a->first, b->first);
                if (c > 0)
                    r.terms.push_back(*a++);
                else if (c < 0)
                    r.terms.push_back(*b++);
                else {
                    Rational s = a->second + b->second;
                    if (!mcsymp::is_zero(s)) r.terms.push_back({a->first, s});
                    ++a, ++b;
                }
            }
        }
        return r;
    }

    Poly operator-(const Poly& o) const { return *this + (-o); }

    Poly operator*(const Poly& o) const {
        std::map<Monomial, Rational, decltype([](const Monomial& x, const Monomial& y) {
                     return Monomial::cmp(x, y) > 0;
                 })>
            acc;
        for (auto& [ma, ca] : terms)
            for (auto& [mb, cb] : o.terms) {
                Monomial m = ma * mb;
                Rational p = ca * cb;
                auto it = acc.find(m);
                if (it == acc.end())
                    acc.emplace(m, p);
                else
                    it->second += p;
            }
        Poly r;
        for (auto& [m, c] : acc)
            if (!mcsymp::is_zero(c)) r.terms.push_back({m, c});
        return r;
    }

    Poly operator*(const Rational& c) const {
        if (mcsymp::is_zero(c)) return Poly();
        Poly r = *this;
        for (auto& [m, v] : r.terms) v = Rational(v * c);
        return r;
    }

    Poly operator/(const Rational& c) const {
        if (mcsymp::is_zero(c)) throw std::domain_error("Poly: division by zero rational");
        Rational inv = Rational(1) / c;
        return *this * inv;
    }

    Poly pow(int e) const {
        if (e < 0) throw std::invalid_argument("Poly: negative power");
        Poly r(Rational(1));
        for (int i = 0; i < e; ++i) r = r * *this;
        return r;
    }

    bool operator==(const Poly& o) const { return terms == o.terms; }

    // Partial or full substitution of rationals; unknown vars stay symbolic.
    Poly evaluate(const std::map<int, Rational>& bindings) const {
        Poly r;
        for (auto& [m, c] : terms) {
            Rational scale = c;
            Monomial rest;
            for (auto& [v, e] : m.factors) {
                auto it = bindings.find(v);
                if (it == bindings.end()) {
                    rest.factors.push_back({v, e});
                } else {
                    for (int i = 0; i < e; ++i) scale *= it->second;
                }
            }
            Poly t;
            if (!mcsymp::is_zero(scale)) t.terms.push_back({rest, scale});
            r = r + t;
        }
        return r;
    }

    // Substitution of polynomial values (used by zero-branch pinning).
    Poly substitute(const std::map<int, Poly>& bindings) const {
        Poly r;
        for (auto& [m, c] : terms) {
            Poly t(c);
            for (auto& [v, e] : m.factors) {
                auto it = bindings.find(v);
                if (it == bindings.end())
                    t = t * Poly(Indeterminate(v)).pow(e);
                else
                    t = t * it->second.pow(e);
            }
            r = r + t;
        }
        return r;
    }

    // Positive rational content (gcd of coefficients).
    Rational content() const {
        Rational g(0);
        for (auto& [m, c] : terms) g = rational_gcd(g, c);
        return g;
    }

    // content * sign(leading coefficient); primitive_part() has leading
    // coefficient > 0, giving the canonical representative up to units.
    Poly primitive_part() const {
        if (terms.empty()) return Poly();
        Rational g = content();
        if (sgn(leading_coefficient()) < 0) g = -g;
        return *this / g;
    }

    Poly derivative(int var) const {
        Poly r;
        for (auto& [m, c] : terms) {
            int e = m.degree_in(var);
            if (e == 0) continue;
            Monomial rest;
            for (auto& [v, k] : m.factors) {
                if (v == var) {
                    if (k > 1) rest.factors.push_back({v, k - 1});
                } else {
                    rest.factors.push_back({v, k});
                }
            }
            Poly t;
            t.terms.push_back({rest, Rational(c * e)});
            r = r + t;
        }
        return r;
    }

    // Total order for deduplication and deterministic containers.
    static int cmp(const Poly& x, const Poly& y) {
        auto a = x.terms.begin(), b = y.terms.begin();
        while (a != x.terms.end() && b != y.terms.end()) {
            int c = Monomial::cmp(a->first, b->first);
            if (c != 0) return c;
            if (a->second != b->second) return a->second < b->second ? -1 : 1;
            ++a, ++b;
        }
        if (a != x.terms.end()) return 1;
        if (b != y.terms.end()) return -1;
        return 0;
    }
};

inline Poly operator*(const Rational& c, const Poly& p) { return p * c; }

// Pivot preference: lowest total degree, then fewest terms, then termwise
// dictionary comparison. Reproduces the case-split order of the catalog
// analyses (a bare late-declared variable loses to an earlier one).
inline bool pivot_less(const Poly& x, const Poly& y) {
    if (x.total_degree() != y.total_degree()) return x.total_degree() < y.total_degree();
    if (x.terms.size() != y.terms.size()) return x.terms.size() < y.terms.size();
    auto a = x.terms.begin(), b = y.terms.begin();
    while (a != x.terms.end() && b != y.terms.end()) {
        int c = Monomial::dict_cmp(a->first, b->first);
        if (c != 0) return c < 0;
        if (a->second != b->second) return abs(a->second) < abs(b->second) || (abs(a->second) == abs(b->second) && a->second > b->second);
        ++a, ++b;
    }
    return false;
}

// Exact single-divisor division; nullopt when d does not divide p.
inline std::optional<Poly> exact_divide(const Poly& p, const Poly& d) {
    if (d.is_zero()) throw std::domain_error("exact_divide: zero divisor");
    Poly rem = p, quot;
    while (!rem.is_zero()) {
        auto mq = rem.leading_monomial().divide(d.leading_monomial());
        if (!mq) return std::nullopt;
        Rational cq = rem.leading_coefficient() / d.leading_coefficient();
        Poly t;
        t.terms.push_back({*mq, cq});
        quot = quot + t;
        rem = rem - t * d;
    }
    return quot;
}

inline bool divides(const Poly& d, const Poly& p) {
    if (d.is_zero()) return p.is_zero();
    return exact_divide(p, d).has_value();
}

namespace detail {

// View p as univariate in var: coefficients by ascending exponent.
inline std::vector<Poly> coeffs_in(const Poly& p, int var) {
    std::vector<Poly> cs(static_cast<size_t>(p.degree_in(var)) + 1);
    for (auto& [m, c] : p.terms) {
        int e = m.degree_in(var);
        Monomial rest;
        for (auto& [v, k] : m.factors)
            if (v != var) rest.factors.push_back({v, k});
        Poly t;
        t.terms.push_back({rest, c});
        cs[e] = cs[e] + t;
    }
    return cs;
}

inline Poly from_coeffs(const std::vector<Poly>& cs, int var) {
    Poly r, x = Poly(Indeterminate(var));
    for (size_t e = 0; e < cs.size(); ++e) r = r + cs[e] * x.pow(static_cast<int>(e));
    return r;
}

inline Poly poly_gcd_impl(Poly a, Poly b);

// Content of p w.r.t. var: recursive gcd of the univariate coefficients.
inline Poly content_in(const Poly& p, int var) {
    Poly g;
    for (auto& c : coeffs_in(p, var))
        if (!c.is_zero()) g = poly_gcd_impl(g, c);
    return g;
}

// Pseudo-remainder of a by b in var (deg_a >= deg_b assumed handled by caller).
inline Poly pseudo_rem(const Poly& a, const Poly& b, int var) {
    int db = b.degree_in(var);
    auto bc = coeffs_in(b, var);
    Poly lb = bc[db];
    Poly r = a;
    int dr = r.degree_in(var);
    Poly x = Poly(Indeterminate(var));
    while (!r.is_zero() && (dr = r.degree_in(var)) >= db) {
        auto rc = coeffs_in(r, var);
        Poly lead = rc[dr];
        r = r * lb - lead * b * x.pow(dr - db);
        if (r.degree_in(var) == dr) throw std::logic_error("pseudo_rem: no degree drop");
    }
    return r;
}

inline Poly poly_gcd_impl(Poly a, Poly b) {
    if (a.is_zero()) return b.primitive_part();
    if (b.is_zero()) return a.primitive_part();
    if (a.is_constant() || b.is_constant()) return Poly(Rational(1));
    std::set<int> vs = a.vars();
    for (int v : b.vars()) vs.insert(v);
    int var = *vs.rbegin();
    if (a.degree_in(var) == 0 || b.degree_in(var) == 0) {
        // var missing from one side: gcd divides its content w.r.t. var
        Poly ca = a.degree_in(var) == 0 ? a : content_in(a, var);
        Poly cb = b.degree_in(var) == 0 ? b : content_in(b, var);
        return poly_gcd_impl(ca, cb);
    }
    Poly ca = content_in(a, var), cb = content_in(b, var);
    Poly pa = *exact_divide(a, ca), pb = *exact_divide(b, cb);
    if (pa.degree_in(var) < pb.degree_in(var)) std::swap(pa, pb);
    while (true) {
        Poly r = pseudo_rem(pa, pb, var);
        if (r.is_zero()) break;
        if (r.degree_in(var) == 0) {
            pb = Poly(Rational(1));
            break;
        }
        pa = pb;
        pb = *exact_divide(r, content_in(r, var));
    }
    Poly cg = poly_gcd_impl(ca, cb);
    return (cg * pb).primitive_part();
}

}  // namespace detail

// Multivariate gcd over Q, returned primitive with positive leading coefficient.
inline Poly poly_gcd(const Poly& a, const Poly& b) { return detail::poly_gcd_impl(a, b); }

// Squarefree part: p divided by gcd(p, all partial derivatives). Same zero
// set, multiplicities dropped.
inline Poly squarefree_part(const Poly& p) {
    if (p.is_zero() || p.is_constant()) return p;
    Poly g = p;
    for (int v : p.vars()) g = poly_gcd(g, p.derivative(v));
    if (g.is_constant()) return p.primitive_part();
    return exact_divide(p, g)->primitive_part();
}

inline std::string to_string(const Monomial& m) {
    if (m.is_unit()) return "1";
    std::ostringstream os;
    bool first = true;
    for (auto& [v, e] : m.factors) {
        if (!first) os << "*";
        os << VarTable::instance().name(v);
        if (e > 1) os << "^" << e;
        first = false;
    }
    return os.str();
}

inline std::string to_string(const Poly& p) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [m, c] : p.terms) {
        Rational a = c;
        if (first) {
            if (sgn(a) < 0) {
                os << "-";
                a = -a;
            }
        } else {
            os << (sgn(a) < 0 ? " - " : " + ");
            a = abs(a);
        }
        if (m.is_unit())
            os << to_string(a);
        else if (a == 1)
            os << to_string(m);
        else
            os << to_string(a) << "*" << to_string(m);
        first = false;
    }
    return os.str();
}

}  // namespace mcsymp
