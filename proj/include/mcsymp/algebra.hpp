#pragma once

#include <optional>
#include <tuple>

#include "expr.hpp"

namespace mcsymp {

// Declared parameter: enforced inequations plus informational range text.
struct ParamSpec {
    Indeterminate var;
    std::vector<Poly> nonzero_constraints;  // each required != 0
    std::string range_note;                 // advisory only
    std::vector<Rational> discrete_values;  // exhaustive value list, when printed so
};

// The differentials d(w_k) of the dual basis, as grade-2 forms.
struct MCTable {
    int dim = 0;
    std::map<int, Form> differentials;  // absent entry means d(w_k) = 0

    Form d_of(int k) const {
        auto it = differentials.find(k);
        return it == differentials.end() ? Form::zero(dim) : it->second;
    }

    void set(int k, Form f) {
        if (k < 1 || k > dim) throw std::out_of_range("MCTable: index out of range");
        if (f.dim != dim) throw std::invalid_argument("MCTable: form dimension mismatch");
        if (!f.is_zero() && !f.is_homogeneous(2)) throw std::invalid_argument("MCTable: differential must be a 2-form");
        if (f.is_zero())
            differentials.erase(k);
        else
            differentials[k] = std::move(f);
    }
};

struct AlgebraMeta {
    std::optional<int> nilradical;
    bool decomposable = false;
    std::vector<std::string> summands;
    std::string source;
    std::map<std::string, std::string> bindings;  // recorded parameter pins
};

class AlgebraDef {
public:
    std::string name;
    std::vector<ParamSpec> params;
    MCTable mc;
    AlgebraMeta meta;
    int eta_count = 0;  // >0: indices 1..eta_count display as e1..e<k>

    int dim() const { return mc.dim; }

    BasisNaming naming() const { return BasisNaming{mc.dim, eta_count}; }

    bool has_params() const { return !params.empty(); }

    const ParamSpec* find_param(const std::string& pname) const {
        for (auto& p : params)
            if (p.var.name() == pname) return &p;
        return nullptr;
    }

    std::vector<Poly> all_constraints() const {
        std::vector<Poly> cs;
        for (auto& p : params)
            for (auto& c : p.nonzero_constraints) {
                bool seen = false;
                for (auto& d : cs) seen = seen || Poly::cmp(c, d) == 0;
                if (!seen) cs.push_back(c);
            }
        return cs;
    }

    std::vector<int> param_ids() const {
        std::vector<int> ids;
        for (auto& p : params) ids.push_back(p.var.id);
        return ids;
    }
};

struct ConstraintError : std::runtime_error {
    Poly violated;
    ConstraintError(const std::string& ctx, const Poly& p)
        : std::runtime_error(ctx + ": constraint " + to_string(p) + " != 0 violated"), violated(p) {}
};

// Exterior differential induced by the Maurer-Cartan table, extended to
// arbitrary grades by the graded Leibniz rule. Coefficients are scalars.
inline Form differential(const AlgebraDef& alg, const Form& f) {
    if (f.dim != alg.dim()) throw std::invalid_argument("differential: dimension mismatch");
    Form r(alg.dim());
    for (auto& [tuple, coeff] : f.terms) {
        for (size_t j = 0; j < tuple.size(); ++j) {
            Form dj = alg.mc.d_of(tuple[j]);
            if (dj.is_zero()) continue;
            IndexTuple rest;
            for (size_t i = 0; i < tuple.size(); ++i)
                if (i != j) rest.push_back(tuple[i]);
            RatFunc c = j % 2 == 0 ? coeff : -coeff;
            for (auto& [dt, dc] : dj.terms) {
                IndexTuple merged;
                int sign = merge_tuples(dt, rest, merged);
                if (sign == 0) continue;
                RatFunc v = c * dc;
                if (sign < 0) v = -v;
                r.add_term(merged, v);
            }
        }
    }
    return r;
}

struct JacobiFailure {
    int index;
    Form d2;  // the nonzero 3-form d(d w_k)
};

struct JacobiResult {
    bool pass = true;
    std::vector<JacobiFailure> failures;
};

// d^2 = 0 identically in the parameters, checked per basis 1-form.
inline JacobiResult jacobi_check(const AlgebraDef& alg) {
    JacobiResult r;
    for (int k = 1; k <= alg.dim(); ++k) {
        Form d2 = differential(alg, alg.mc.d_of(k));
        if (!d2.is_zero()) {
            r.pass = false;
            r.failures.push_back({k, d2});
        }
    }
    return r;
}

// Structure constants C^k_{ij} for i<j, under d(w_k) = -C^k_{ij} w_i^w_j.
struct StructureConstants {
    int dim = 0;
    std::map<std::tuple<int, int, int>, RatFunc> entries;  // (i,j,k), i<j
};

inline StructureConstants mc_to_structure_constants(const MCTable& mc) {
    StructureConstants sc;
    sc.dim = mc.dim;
    for (auto& [k, f] : mc.differentials)
        for (auto& [t, c] : f.terms) sc.entries[{t[0], t[1], k}] = -c;
    return sc;
}

inline MCTable structure_constants_to_mc(const StructureConstants& sc) {
    MCTable mc;
    mc.dim = sc.dim;
    std::map<int, Form> acc;
    for (auto& [ijk, c] : sc.entries) {
        auto [i, j, k] = ijk;
        auto it = acc.find(k);
        if (it == acc.end()) it = acc.emplace(k, Form::zero(sc.dim)).first;
        it->second.add_term({i, j}, -c);
    }
    for (auto& [k, f] : acc) mc.set(k, f);
    return mc;
}

// Direct sum: indices of b are shifted by dim(a); colliding parameter names
// of b are renamed with a numeric suffix.
inline AlgebraDef direct_sum(const AlgebraDef& a, const AlgebraDef& b) {
    AlgebraDef s;
    int na = a.dim(), nb = b.dim();
    s.name = a.name + "+" + b.name;
    s.mc.dim = na + nb;
    s.meta.decomposable = true;
    s.meta.summands = {a.name, b.name};
    if (a.meta.decomposable)
        s.meta.summands.insert(s.meta.summands.begin(), a.meta.summands.begin(), a.meta.summands.end() - 1);

    std::set<std::string> taken;
    for (auto& p : a.params) taken.insert(p.var.name());
    std::map<int, Poly> rename;
    std::vector<ParamSpec> bparams;
    for (auto& p : b.params) {
        std::string nm = p.var.name();
        if (taken.count(nm)) {
            int suffix = 2;
            while (taken.count(nm + "_" + std::to_string(suffix))) ++suffix;
            nm = nm + "_" + std::to_string(suffix);
        }
        taken.insert(nm);
        ParamSpec q = p;
        if (nm != p.var.name()) {
            q.var = parameter(nm);
            rename[p.var.id] = Poly(q.var);
        }
        bparams.push_back(q);
    }
    if (!rename.empty())
        for (auto& q : bparams)
            for (auto& c : q.nonzero_constraints) c = c.substitute(rename);

    s.params = a.params;
    s.params.insert(s.params.end(), bparams.begin(), bparams.end());

    for (auto& [k, f] : a.mc.differentials) s.mc.set(k, [&] {
        Form g(s.mc.dim);
        for (auto& [t, c] : f.terms) g.add_term(t, c);
        return g;
    }());
    for (auto& [k, f] : b.mc.differentials) {
        Form g(s.mc.dim);
        for (auto& [t, c] : f.terms) {
            IndexTuple shifted = t;
            for (int& i : shifted) i += na;
            g.add_term(shifted, rename.empty() ? c : c.substitute(rename));
        }
        s.mc.set(k + na, std::move(g));
    }
    return s;
}

inline std::string format_value_list(const std::vector<Rational>& vals) {
    std::string s = "(";
    for (size_t i = 0; i < vals.size(); ++i) {
        if (i) s += ",";
        s += to_string(vals[i]);
    }
    return s + ")";
}

// Full instantiation at rational parameter values; rejects constraint
// violations naming the violated polynomial.
inline AlgebraDef instantiate(const AlgebraDef& alg, const std::map<std::string, Rational>& values) {
    std::map<int, Rational> bind;
    std::vector<Rational> ordered;
    for (auto& p : alg.params) {
        auto it = values.find(p.var.name());
        if (it == values.end())
            throw std::invalid_argument("instantiate: missing value for parameter " + p.var.name());
        bind[p.var.id] = it->second;
        ordered.push_back(it->second);
    }
    for (auto& [nm, v] : values)
        if (!alg.find_param(nm)) throw std::invalid_argument("instantiate: unknown parameter " + nm);
    for (auto& c : alg.all_constraints()) {
        Poly e = c.evaluate(bind);
        if (e.is_zero()) throw ConstraintError("instantiate " + alg.name, c);
    }
    AlgebraDef r;
    r.name = alg.name + (alg.params.empty() ? "" : format_value_list(ordered));
    r.mc.dim = alg.dim();
    r.eta_count = alg.eta_count;
    r.meta = alg.meta;
    for (auto& p : alg.params) r.meta.bindings[p.var.name()] = to_string(bind[p.var.id]);
    for (auto& [k, f] : alg.mc.differentials) {
        Form g = f.evaluate_coeffs(bind);
        if (!g.is_zero()) r.mc.set(k, g);
    }
    return r;
}

// Partial substitution by polynomial values (branch pinning). Substituted
// parameters leave the parameter list; constraints are rewritten and checked.
inline AlgebraDef substitute_params(const AlgebraDef& alg, const std::map<int, Poly>& pins) {
    AlgebraDef r;
    r.name = alg.name;
    r.mc.dim = alg.dim();
    r.eta_count = alg.eta_count;
    r.meta = alg.meta;
    std::vector<Poly> residual;
    for (auto& c : alg.all_constraints()) {
        Poly e = c.substitute(pins);
        if (e.is_zero()) throw ConstraintError("substitute_params " + alg.name, c);
        if (!e.is_constant()) residual.push_back(e);
    }
    for (auto& p : alg.params) {
        auto it = pins.find(p.var.id);
        if (it != pins.end()) {
            r.meta.bindings[p.var.name()] = to_string(it->second);
            continue;
        }
        ParamSpec q;
        q.var = p.var;
        q.range_note = p.range_note;
        q.discrete_values = p.discrete_values;
        r.params.push_back(q);
    }
    // reattach each surviving constraint to the first parameter it mentions
    for (auto& c : residual) {
        auto vs = c.vars();
        for (auto& q : r.params)
            if (vs.count(q.var.id)) {
                bool seen = false;
                for (auto& d : q.nonzero_constraints) seen = seen || Poly::cmp(c, d) == 0;
                if (!seen) q.nonzero_constraints.push_back(c);
                break;
            }
    }
    for (auto& [k, f] : alg.mc.differentials) {
        Form g = f.substitute_coeffs(pins);
        if (!g.is_zero()) r.mc.set(k, g);
    }
    return r;
}

}  // namespace mcsymp
