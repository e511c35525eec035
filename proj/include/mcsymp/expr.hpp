#pragma once

#include <cctype>
#include <functional>

#include "form.hpp"

namespace mcsymp {

struct ParseError : std::runtime_error {
    size_t position;
    ParseError(const std::string& msg, size_t pos)
        : std::runtime_error(msg + " (column " + std::to_string(pos + 1) + ")"), position(pos) {}
};

// Recursive-descent parser for the coefficient/form expression syntax:
//   terms joined by + and -, * for products, ^ for powers, rationals as p/q,
//   basis 1-forms as w<k> (or e<k> in nilradical naming), wedges as w1^w2,
//   d(w1) for the differential of a basis 1-form, parentheses for grouping.
// Scalars are parsed as grade-0 forms so one grammar covers both kinds.
class ExprParser {
public:
    BasisNaming naming;                                  // dim 0 disables basis tokens
    std::function<Poly(const std::string&)> resolve;     // identifier -> polynomial
    std::function<Form(int)> d_of_basis;                 // index -> differential, optional

    explicit ExprParser(BasisNaming nm = {}) : naming(nm) {}

    Form parse_form(const std::string& text) const {
        State s{text, 0};
        Form f = expr(s);
        skip_ws(s);
        if (s.pos != text.size()) throw ParseError("trailing input", s.pos);
        return f;
    }

    Poly parse_poly(const std::string& text) const {
        ExprParser scalar_only = *this;
        scalar_only.naming = BasisNaming{};
        scalar_only.d_of_basis = nullptr;
        Form f = scalar_only.parse_form(text);
        if (f.is_zero()) return Poly();
        RatFunc c = f.coefficient({});
        if (!f.is_homogeneous(0) || !c.is_polynomial())
            throw ParseError("expected a polynomial expression", 0);
        return c.as_poly();
    }

    Rational parse_rational_value(const std::string& text) const {
        Poly p = parse_poly(text);
        if (!p.is_constant()) throw ParseError("expected a rational constant", 0);
        return p.constant_value();
    }

private:
    struct State {
        const std::string& text;
        size_t pos;
    };

    static void skip_ws(State& s) {
        while (s.pos < s.text.size() && isspace(static_cast<unsigned char>(s.text[s.pos]))) ++s.pos;
    }

    static char peek(State& s) {
        skip_ws(s);
        return s.pos < s.text.size() ? s.text[s.pos] : '\0';
    }

    int scalar_dim() const { return naming.dim > 0 ? naming.dim : 1; }

    Form scalar(const RatFunc& c) const {
        Form f(scalar_dim());
        f.add_term({}, c);
        return f;
    }

    Form expr(State& s) const {
        bool neg = false;
        if (peek(s) == '-') {
            ++s.pos;
            neg = true;
        } else if (peek(s) == '+') {
            ++s.pos;
        }
        Form acc = product(s);
        if (neg) acc = -acc;
        while (true) {
            char c = peek(s);
            if (c != '+' && c != '-') break;
            ++s.pos;
            Form rhs = product(s);
            acc = c == '+' ? acc + rhs : acc - rhs;
        }
        return acc;
    }

    Form product(State& s) const {
        Form acc = powered_unit(s);
        while (true) {
            char c = peek(s);
            if (c == '*') {
                ++s.pos;
                acc = wedge(acc, powered_unit(s));
            } else if (c == '^') {
                // w1^w2 chains; exponents were consumed by powered_unit
                ++s.pos;
                acc = wedge(acc, unit(s));
            } else {
                break;
            }
        }
        return acc;
    }

    Form powered_unit(State& s) const {
        Form u = unit(s);
        size_t save = s.pos;
        if (peek(s) == '^') {
            ++s.pos;
            if (isdigit(static_cast<unsigned char>(peek(s)))) {
                long e = integer(s);
                if (!u.is_homogeneous(0)) throw ParseError("power applied to a non-scalar", save);
                RatFunc base = u.coefficient({});
                RatFunc r(Rational(1));
                for (long i = 0; i < e; ++i) r = r * base;
                return scalar(r);
            }
            s.pos = save;  // a wedge chain; let product() handle it
        }
        return u;
    }

    Form unit(State& s) const {
        char c = peek(s);
        if (c == '(') {
            ++s.pos;
            Form f = expr(s);
            if (peek(s) != ')') throw ParseError("expected ')'", s.pos);
            ++s.pos;
            return f;
        }
        if (isdigit(static_cast<unsigned char>(c))) {
            long num = integer(s);
            size_t save = s.pos;
            if (peek(s) == '/') {
                ++s.pos;
                if (isdigit(static_cast<unsigned char>(peek(s)))) {
                    long den = integer(s);
                    return scalar(RatFunc(rational(num, den)));
                }
                s.pos = save;
            }
            return scalar(RatFunc(Rational(num)));
        }
        if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = s.pos;
            std::string id = identifier(s);
            if (id == "d" && peek(s) == '(') {
                if (!d_of_basis) throw ParseError("d(...) not allowed here", start);
                ++s.pos;
                std::string lbl = identifier(s);
                int idx = naming.parse_label(lbl);
                if (idx <= 0) throw ParseError("d(...) expects a basis 1-form", start);
                if (peek(s) != ')') throw ParseError("expected ')'", s.pos);
                ++s.pos;
                return d_of_basis(idx);
            }
            if (naming.dim > 0) {
                int idx = naming.parse_label(id);
                if (idx < 0) throw ParseError("basis index out of range in '" + id + "'", start);
                if (idx > 0) return Form::one_form(naming.dim, idx);
            }
            if (!resolve) throw ParseError("unexpected identifier '" + id + "'", start);
            return scalar(RatFunc(resolve(id)));
        }
        throw ParseError(std::string("unexpected character '") + c + "'", s.pos);
    }

    static long integer(State& s) {
        skip_ws(s);
        size_t start = s.pos;
        while (s.pos < s.text.size() && isdigit(static_cast<unsigned char>(s.text[s.pos]))) ++s.pos;
        if (s.pos == start) throw ParseError("expected integer", start);
        return std::stol(s.text.substr(start, s.pos - start));
    }

    static std::string identifier(State& s) {
        skip_ws(s);
        size_t start = s.pos;
        while (s.pos < s.text.size() &&
               (isalnum(static_cast<unsigned char>(s.text[s.pos])) || s.text[s.pos] == '_'))
            ++s.pos;
        if (s.pos == start) throw ParseError("expected identifier", start);
        return s.text.substr(start, s.pos - start);
    }
};

}  // namespace mcsymp
