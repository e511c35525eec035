#pragma once

#include "closure.hpp"

namespace mcsymp {

struct ContractError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Violation of a numbered hypothesis of the direct-sum construction.
struct SumConditionError : std::runtime_error {
    int condition;
    SumConditionError(int cond, const std::string& msg)
        : std::runtime_error("condition " + std::to_string(cond) + ": " + msg), condition(cond) {}
};

inline IndexTuple volume_tuple(int n) {
    IndexTuple t(n);
    for (int i = 0; i < n; ++i) t[i] = i + 1;
    return t;
}

struct SymplecticReport {
    std::string algebra;
    AlgebraDef branch_algebra;
    std::vector<BranchCondition> branch;
    std::map<int, Poly> pins;
    int closed_space_dim = 0;
    RatFunc nondeg_exact;   // volume coefficient of the top power, as computed
    Poly nondeg_poly;       // primitive normalization of its numerator
    bool symplectic = false;
    std::optional<Form> witness;
    std::map<std::string, Rational> witness_params;
    bool exact_symplectic = false;
    int j0 = 0;
    bool truncated = false;
    bool unresolved = false;
    std::vector<std::string> notes;
    ClosureSolution solution;
};

// Basis of L(g) = span{d w_1, ..., d w_n}, reduced over Q(params).
inline std::vector<Form> exact_space(const AlgebraDef& alg) {
    std::vector<Form> basis;
    std::vector<std::map<IndexTuple, RatFunc, TupleLess>> reduced;
    for (int k = 1; k <= alg.dim(); ++k) {
        Form f = alg.mc.d_of(k);
        if (f.is_zero()) continue;
        auto terms = f.terms;
        for (size_t i = 0; i < reduced.size(); ++i) {
            auto& lead = *reduced[i].begin();
            auto it = terms.find(lead.first);
            if (it == terms.end()) continue;
            RatFunc factor = it->second / lead.second;
            for (auto& [t, c] : reduced[i]) {
                auto jt = terms.find(t);
                RatFunc upd = (jt == terms.end() ? RatFunc() : jt->second) - factor * c;
                if (upd.is_zero()) {
                    if (jt != terms.end()) terms.erase(jt);
                } else {
                    terms[t] = upd;
                }
            }
        }
        if (terms.empty()) continue;
        reduced.push_back(terms);
        basis.push_back(f);
    }
    return basis;
}

// Largest m such that the m-th wedge power of a generic element of L(g) is
// not identically zero (in the combination coefficients and any parameters).
inline int j0_generic(const AlgebraDef& alg) {
    int n = alg.dim();
    Form omega(n);
    for (int k = 1; k <= n; ++k) {
        Form f = alg.mc.d_of(k);
        if (f.is_zero()) continue;
        omega = omega + f * RatFunc(Poly(form_coeff("t" + std::to_string(k))));
    }
    if (omega.is_zero()) return 0;
    int best = 0;
    Form p = Form::basis(n, {});
    for (int m = 1; 2 * m <= n; ++m) {
        p = wedge(p, omega);
        if (p.is_zero()) break;
        best = m;
    }
    return best;
}

// j0 at a full parameter binding.
inline int j0(const AlgebraDef& alg, const std::map<std::string, Rational>& bindings) {
    return j0_generic(alg.has_params() ? instantiate(alg, bindings) : alg);
}

inline bool decide_exact_symplectic(const AlgebraDef& alg) {
    return alg.dim() % 2 == 0 && j0_generic(alg) == alg.dim() / 2;
}

namespace detail {

// Full original-parameter binding for one leaf: sample the surviving
// parameters, derive pinned ones, and check constraints plus the recorded
// nonzero assumptions.
inline std::optional<std::map<int, Rational>> leaf_binding(const AlgebraDef& orig, const ClosureSolution& sol,
                                                           size_t offset_hint) {
    auto samples = canonical_samples(sol.algebra, offset_hint + 1);
    if (samples.size() <= offset_hint) return std::nullopt;
    std::map<int, Rational> bind = samples[offset_hint];
    for (auto& [v, val] : sol.pins) {
        Poly e = val.evaluate(bind);
        if (!e.is_constant()) return std::nullopt;
        bind[v] = e.constant_value();
    }
    for (auto& c : orig.all_constraints())
        if (c.evaluate(bind).is_zero()) return std::nullopt;
    for (auto& bc : sol.branch) {
        Poly e = bc.poly.evaluate(bind);
        if (!e.is_constant()) return std::nullopt;
        bool zero = e.is_zero();
        if (zero == bc.nonzero) return std::nullopt;
    }
    return bind;
}

}  // namespace detail

// Symplectic decision per closure-analysis leaf: the top wedge power of the
// general closed form gives the nondegeneracy polynomial; a witness is found
// on the canonical sample sequence and re-verified independently.
inline std::vector<SymplecticReport> decide_symplectic(const AlgebraDef& alg, SolveMode mode) {
    int n = alg.dim();
    if (n % 2 != 0)
        throw ContractError("decide_symplectic: odd-dimensional algebra " + alg.name +
                            "; use the contact analysis instead");
    std::vector<SymplecticReport> reports;
    for (auto& sol : solve_closed_space(alg, mode)) {
        SymplecticReport rep;
        rep.algebra = alg.name;
        rep.branch_algebra = sol.algebra;
        rep.branch = sol.branch;
        rep.pins = sol.pins;
        rep.closed_space_dim = sol.closed_space_dim();
        rep.truncated = sol.truncated;
        rep.unresolved = sol.unresolved;
        rep.solution = sol;

        Form top = top_power(sol.general_closed_form, n / 2);
        rep.nondeg_exact = top.coefficient(volume_tuple(n));
        rep.nondeg_poly = rep.nondeg_exact.num.primitive_part();
        rep.symplectic = !rep.nondeg_poly.is_zero();
        rep.exact_symplectic = decide_exact_symplectic(sol.algebra);
        rep.j0 = j0_generic(sol.algebra);

        if (rep.symplectic) {
            for (size_t off = 0; off < 40 && !rep.witness; ++off) {
                auto bind = detail::leaf_binding(alg, sol, off);
                if (!bind) continue;
                Poly nd = rep.nondeg_poly.evaluate(*bind);  // now in coefficient vars only
                for (size_t coff = 0; coff < 60 && !rep.witness; ++coff) {
                    std::map<int, Rational> cvals = *bind;
                    for (size_t i = 0; i < sol.free_cols.size(); ++i)
                        cvals[sol.generic.coeffs[sol.free_cols[i]].id] = canonical_value(coff + i);
                    if (nd.evaluate(cvals).is_zero()) continue;
                    Form w = sol.general_closed_form.evaluate_coeffs(cvals);
                    // independent re-verification on the instantiated algebra
                    std::map<std::string, Rational> by_name;
                    for (auto& p : alg.params) by_name[p.var.name()] = bind->at(p.var.id);
                    AlgebraDef inst = alg.has_params() ? instantiate(alg, by_name) : alg;
                    if (!differential(inst, w).is_zero())
                        throw std::logic_error("decide_symplectic: witness not closed for " + alg.name);
                    if (top_power(w, n / 2).is_zero())
                        throw std::logic_error("decide_symplectic: witness degenerate for " + alg.name);
                    rep.witness = w;
                    rep.witness_params = by_name;
                }
            }
            if (!rep.witness) rep.notes.push_back("no witness found on the canonical sample sequence");
        }
        reports.push_back(std::move(rep));
    }
    return reports;
}

inline Form embed_form(const Form& f, int total_dim, int offset) {
    Form r(total_dim);
    for (auto& [t, c] : f.terms) {
        IndexTuple s = t;
        for (int& i : s) i += offset;
        r.add_term(s, c);
    }
    return r;
}

// Direct-sum symplectic construction for odd-dimensional summands: given
// closed top-rank 2-forms avoiding the chosen closed covector on each side,
// theta + theta' + w_{i1} ^ w_{i2}' is symplectic on the sum. Every
// hypothesis is checked, and the conclusion is re-verified.
struct SymplecticSum {
    AlgebraDef algebra;
    Form form;
};

inline SymplecticSum symplectic_direct_sum(const AlgebraDef& r1, const Form& theta, int i1,
                                           const AlgebraDef& r2, const Form& theta_p, int i2) {
    int d1 = r1.dim(), d2 = r2.dim();
    if (d1 % 2 == 0 || d2 % 2 == 0)
        throw ContractError("symplectic_direct_sum: summands must be odd-dimensional");
    int n = (d1 - 1) / 2, m = (d2 - 1) / 2;
    if (!r1.mc.d_of(i1).is_zero())
        throw SumConditionError(1, "d(w" + std::to_string(i1) + ") != 0 in " + r1.name);
    if (!r2.mc.d_of(i2).is_zero())
        throw SumConditionError(1, "d(w" + std::to_string(i2) + ") != 0 in " + r2.name);
    for (auto& [t, c] : theta.terms)
        for (int i : t)
            if (i == i1) throw SumConditionError(1, "theta touches the closed index of " + r1.name);
    for (auto& [t, c] : theta_p.terms)
        for (int i : t)
            if (i == i2) throw SumConditionError(1, "theta' touches the closed index of " + r2.name);
    if (!differential(r1, theta).is_zero()) throw SumConditionError(2, "theta is not closed");
    if (!differential(r2, theta_p).is_zero()) throw SumConditionError(2, "theta' is not closed");
    if (top_power(theta, n).is_zero()) throw SumConditionError(3, "theta fails maximal rank");
    if (top_power(theta_p, m).is_zero()) throw SumConditionError(3, "theta' fails maximal rank");

    SymplecticSum out;
    out.algebra = direct_sum(r1, r2);
    int total = d1 + d2;
    Form eta = embed_form(theta, total, 0) + embed_form(theta_p, total, d1);
    eta.add_term({i1, d1 + i2}, RatFunc(Rational(1)));
    if (!differential(out.algebra, eta).is_zero())
        throw std::logic_error("symplectic_direct_sum: combined form not closed");
    if (top_power(eta, n + m + 1).is_zero())
        throw std::logic_error("symplectic_direct_sum: combined form degenerate");
    out.form = eta;
    return out;
}

struct MembershipError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ContactConstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ContactResult {
    Form eta;                          // the contact 1-form
    Form product;                      // eta ^ (d eta)^n, for inspection
    std::vector<std::string> notes;
};

// Linear contact form on an odd-dimensional algebra from an exact 2-form
// theta = sum combo_i * d(w_i). The "theta avoids the closed index"
// hypothesis is advisory: when it fails the construction is still attempted
// and the defining product is what decides.
inline ContactResult contact_candidate(const AlgebraDef& alg, const Form& theta,
                                       const std::map<int, RatFunc>& combo, int i0) {
    int d = alg.dim();
    if (d % 2 == 0) throw ContractError("contact_candidate: even-dimensional algebra");
    int n = (d - 1) / 2;
    if (!alg.mc.d_of(i0).is_zero())
        throw ContractError("contact_candidate: d(w" + std::to_string(i0) + ") != 0");
    if (combo.count(i0) && !combo.at(i0).is_zero())
        throw MembershipError("combo assigns a coefficient to the closed index");
    Form expect(d);
    for (auto& [i, c] : combo) expect = expect + alg.mc.d_of(i) * c;
    if (!(expect == theta))
        throw MembershipError("theta does not equal the stated combination of differentials");
    if (top_power(theta, n).is_zero())
        throw ContactConstructionError("condition 3: theta^" + std::to_string(n) + " = 0");

    ContactResult out;
    bool touches = false;
    for (auto& [t, c] : theta.terms)
        for (int i : t) touches = touches || i == i0;
    if (touches)
        out.notes.push_back("theta touches w" + std::to_string(i0) + "; proceeding on direct verification");
    Form eta = Form::one_form(d, i0);
    for (auto& [i, c] : combo) eta = eta + Form::one_form(d, i) * c;
    {
        Form deta = differential(alg, eta);
        if (!(deta == theta)) throw std::logic_error("contact_candidate: d(eta) != theta");
        Form prod = wedge(eta, top_power(deta, n));
        if (prod.is_zero()) throw ContactConstructionError("eta ^ (d eta)^n vanishes");
        out.eta = eta;
        out.product = prod;
    }
    return out;
}

struct RowVerdict {
    bool closed = false;
    bool pass = false;
    RatFunc coeff;       // exact volume coefficient of the top power
    Poly coeff_poly;     // primitive normalization
    std::string failure; // first failing check, empty when pass
};

// Checks a transcribed classification-table row: the displayed form must be
// closed identically, and its nondegeneracy coefficient must be nonzero at
// every canonical probe satisfying the stated conditions (the probes zero
// out one displayed coefficient at a time).
inline RowVerdict verify_table_row(const AlgebraDef& alg, const Form& candidate,
                                   const std::vector<Poly>& conditions) {
    RowVerdict v;
    int n = alg.dim();
    if (n % 2 != 0) throw ContractError("verify_table_row: odd dimension");
    Form resid = differential(alg, candidate);
    v.closed = resid.is_zero();
    v.coeff = top_power(candidate, n / 2).coefficient(volume_tuple(n));
    v.coeff_poly = v.coeff.num.primitive_part();
    if (!v.closed) {
        v.failure = "form not closed: d = " + to_string(resid, alg.naming());
        return v;
    }
    if (v.coeff_poly.is_zero()) {
        v.failure = "top power vanishes identically";
        return v;
    }

    std::set<int> avar_set;
    for (auto& [t, c] : candidate.terms) {
        for (int x : c.num.vars())
            if (VarTable::instance().kind(x) == VarKind::FormCoeff) avar_set.insert(x);
    }
    std::vector<int> avars(avar_set.begin(), avar_set.end());

    auto probe_at = [&](const std::map<int, Rational>& probe) -> std::optional<std::string> {
        for (auto& c : conditions)
            if (c.evaluate(probe).is_zero()) return std::nullopt;  // probe not admissible
        Poly val = v.coeff_poly.evaluate(probe);
        if (val.is_zero()) {
            std::string where;
            for (auto& [x, q] : probe) where += (where.empty() ? "" : ", ") + VarTable::instance().name(x) + "=" + to_string(q);
            return "coefficient vanishes at admissible point {" + where + "}";
        }
        return std::optional<std::string>{std::in_place, ""};
    };

    bool any_admissible = false;
    for (int zero_at = -1; zero_at < static_cast<int>(avars.size()); ++zero_at) {
        std::map<int, Rational> probe;
        for (size_t i = 0; i < avars.size(); ++i)
            probe[avars[i]] = static_cast<int>(i) == zero_at ? Rational(0) : canonical_value(i);
        auto res = probe_at(probe);
        if (!res) continue;
        any_admissible = true;
        if (!res->empty()) {
            v.failure = *res;
            return v;
        }
    }
    if (!any_admissible) {
        v.failure = "no canonical probe satisfies the stated conditions";
        return v;
    }
    v.pass = true;
    return v;
}

}  // namespace mcsymp
