#pragma once

#include <functional>

#include "ratfunc.hpp"

namespace mcsymp {

// Strictly increasing basis-index tuple (1-based); () is the scalar grade.
using IndexTuple = std::vector<int>;

struct TupleLess {
    bool operator()(const IndexTuple& a, const IndexTuple& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

// Merge two strictly increasing tuples, counting crossings. Returns 0 on a
// repeated index, else the permutation sign.
inline int merge_tuples(const IndexTuple& a, const IndexTuple& b, IndexTuple& out) {
    out.clear();
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    long crossings = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return 0;
        if (a[i] < b[j]) {
            out.push_back(a[i++]);
        } else {
            crossings += static_cast<long>(a.size() - i);
            out.push_back(b[j++]);
        }
    }
    while (i < a.size()) out.push_back(a[i++]);
    while (j < b.size()) out.push_back(b[j++]);
    return crossings % 2 == 0 ? 1 : -1;
}

// Element of the exterior algebra over the dual of an n-dimensional space,
// with RatFunc coefficients. Terms of different grades may coexist.
class Form {
public:
    int dim = 0;
    std::map<IndexTuple, RatFunc, TupleLess> terms;

    Form() = default;
    explicit Form(int n) : dim(n) {
        if (n < 0) throw std::invalid_argument("Form: negative dimension");
    }

    static Form zero(int n) { return Form(n); }

    static Form basis(int n, std::initializer_list<int> indices) {
        Form f(n);
        f.add_term(IndexTuple(indices), RatFunc(Rational(1)));
        return f;
    }

    static Form one_form(int n, int i) { return basis(n, {i}); }

    // Adds c * e_{tuple}; sorts and signs an unordered tuple, drops zeros.
    void add_term(IndexTuple tuple, RatFunc c) {
        if (c.is_zero()) return;
        for (int i : tuple)
            if (i < 1 || i > dim) throw std::out_of_range("Form: index out of range");
        // insertion-sort with sign tracking
        int sign = 1;
        for (size_t i = 1; i < tuple.size(); ++i)
            for (size_t j = i; j > 0 && tuple[j] <= tuple[j - 1]; --j) {
                if (tuple[j] == tuple[j - 1]) return;
                std::swap(tuple[j], tuple[j - 1]);
                sign = -sign;
            }
        if (sign < 0) c = -c;
        auto it = terms.find(tuple);
        if (it == terms.end()) {
            terms.emplace(std::move(tuple), std::move(c));
        } else {
            RatFunc s = it->second + c;
            if (s.is_zero())
                terms.erase(it);
            else
                it->second = s;
        }
    }

    bool is_zero() const { return terms.empty(); }

    RatFunc coefficient(const IndexTuple& t) const {
        auto it = terms.find(t);
        return it == terms.end() ? RatFunc() : it->second;
    }

    bool is_homogeneous(int grade) const {
        for (auto& [t, c] : terms)
            if (static_cast<int>(t.size()) != grade) return false;
        return true;
    }

    // Max grade among stored terms (0 for the zero form).
    int top_grade() const {
        int g = 0;
        for (auto& [t, c] : terms) g = std::max(g, static_cast<int>(t.size()));
        return g;
    }

    Form grade_part(int grade) const {
        Form r(dim);
        for (auto& [t, c] : terms)
            if (static_cast<int>(t.size()) == grade) r.terms.emplace(t, c);
        return r;
    }

    Form operator-() const {
        Form r(dim);
        for (auto& [t, c] : terms) r.terms.emplace(t, -c);
        return r;
    }

    Form operator+(const Form& o) const {
        check_dim(o);
        Form r = *this;
        for (auto& [t, c] : o.terms) r.add_term(t, c);
        return r;
    }

    Form operator-(const Form& o) const { return *this + (-o); }

    Form operator*(const RatFunc& c) const {
        Form r(dim);
        if (c.is_zero()) return r;
        for (auto& [t, v] : terms) {
            RatFunc p = v * c;
            if (!p.is_zero()) r.terms.emplace(t, p);
        }
        return r;
    }

    bool operator==(const Form& o) const { return dim == o.dim && terms == o.terms; }

    Form evaluate_coeffs(const std::map<int, Rational>& bindings) const {
        Form r(dim);
        for (auto& [t, c] : terms) {
            RatFunc v = c.evaluate(bindings);
            if (!v.is_zero()) r.terms.emplace(t, v);
        }
        return r;
    }

    Form substitute_coeffs(const std::map<int, Poly>& bindings) const {
        Form r(dim);
        for (auto& [t, c] : terms) {
            RatFunc v = c.substitute(bindings);
            if (!v.is_zero()) r.terms.emplace(t, v);
        }
        return r;
    }

private:
    void check_dim(const Form& o) const {
        if (dim != o.dim) throw std::invalid_argument("Form: dimension mismatch");
    }
};

inline Form operator*(const RatFunc& c, const Form& f) { return f * c; }

inline Form wedge(const Form& f, const Form& g) {
    if (f.dim != g.dim) throw std::invalid_argument("wedge: dimension mismatch");
    Form r(f.dim);
    IndexTuple merged;
    for (auto& [ta, ca] : f.terms)
        for (auto& [tb, cb] : g.terms) {
            int sign = merge_tuples(ta, tb, merged);
            if (sign == 0) continue;
            RatFunc c = ca * cb;
            if (sign < 0) c = -c;
            if (!c.is_zero()) r.add_term(merged, c);
        }
    return r;
}

// m-fold wedge power of a grade-2 form. For 2m == dim the single surviving
// coefficient is m! times the Pfaffian of the coefficient matrix.
inline Form top_power(const Form& f, int m) {
    if (!f.is_homogeneous(2)) throw std::invalid_argument("top_power: form is not homogeneous of grade 2");
    if (m < 0 || 2 * m > f.dim) throw std::invalid_argument("top_power: bad exponent");
    Form r = Form::basis(f.dim, {});
    for (int i = 0; i < m; ++i) r = wedge(r, f);
    return r;
}

// Rank of a fully evaluated 2-form: twice the largest m with wedge^m != 0.
inline int two_form_rank(const Form& f) {
    if (!f.is_homogeneous(2)) throw std::invalid_argument("two_form_rank: not a 2-form");
    for (auto& [t, c] : f.terms)
        if (!c.is_constant())
            throw std::invalid_argument("two_form_rank: coefficients not fully evaluated");
    int best = 0;
    Form p = Form::basis(f.dim, {});
    for (int m = 1; 2 * m <= f.dim; ++m) {
        p = wedge(p, f);
        if (p.is_zero()) break;
        best = m;
    }
    return 2 * best;
}

// Skew coefficient matrix of an evaluated 2-form (for determinant checks).
inline std::vector<std::vector<Rational>> skew_matrix(const Form& f) {
    std::vector<std::vector<Rational>> a(f.dim, std::vector<Rational>(f.dim, Rational(0)));
    for (auto& [t, c] : f.terms) {
        if (t.size() != 2) throw std::invalid_argument("skew_matrix: not a 2-form");
        Rational v = c.constant_value();
        a[t[0] - 1][t[1] - 1] = v;
        a[t[1] - 1][t[0] - 1] = Rational(-v);
    }
    return a;
}

inline Rational determinant(std::vector<std::vector<Rational>> a) {
    size_t n = a.size();
    Rational det(1);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && is_zero(a[piv][col])) ++piv;
        if (piv == n) return Rational(0);
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (size_t r = col + 1; r < n; ++r) {
            if (is_zero(a[r][col])) continue;
            Rational factor = a[r][col] / a[col][col];
            for (size_t c = col; c < n; ++c) a[r][c] -= Rational(factor * a[col][c]);
        }
    }
    return det;
}

// Display naming: indices 1..eta_count print as e<i>, the rest as w<j>.
struct BasisNaming {
    int dim = 0;
    int eta_count = 0;

    std::string label(int index) const {
        if (eta_count > 0 && index <= eta_count) return "e" + std::to_string(index);
        return "w" + std::to_string(index - (eta_count > 0 ? eta_count : 0));
    }

    // Resolves "w3" / "e2" to a basis index, or 0 if not a basis token.
    int parse_label(const std::string& tok) const {
        if (tok.size() < 2) return 0;
        char k = tok[0];
        if (k != 'w' && k != 'e') return 0;
        for (size_t i = 1; i < tok.size(); ++i)
            if (!isdigit(static_cast<unsigned char>(tok[i]))) return 0;
        int n = std::stoi(tok.substr(1));
        if (k == 'e') {
            if (eta_count == 0 || n < 1 || n > eta_count) return -1;
            return n;
        }
        int base = eta_count > 0 ? eta_count : 0;
        if (n < 1 || base + n > dim) return -1;
        return base + n;
    }
};

inline std::string to_string(const Form& f, const BasisNaming& naming) {
    if (f.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [t, c] : f.terms) {
        RatFunc v = c;
        bool neg = v.is_polynomial() && v.num.terms.size() == 1 && sgn(v.num.leading_coefficient()) < 0;
        if (neg) v = -v;
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        first = false;
        std::string cs = to_string(v);
        bool is_one = v.is_constant() && !v.is_zero() && v.constant_value() == 1;
        if (t.empty()) {
            os << (is_one ? "1" : cs);
            continue;
        }
        if (!is_one) {
            if (v.is_polynomial() && v.num.terms.size() > 1) cs = "(" + cs + ")";
            os << cs << "*";
        }
        os << "(";
        for (size_t i = 0; i < t.size(); ++i) {
            if (i) os << "^";
            os << naming.label(t[i]);
        }
        os << ")";
    }
    return os.str();
}

inline std::string to_string(const Form& f) { return to_string(f, BasisNaming{f.dim, 0}); }

}  // namespace mcsymp
