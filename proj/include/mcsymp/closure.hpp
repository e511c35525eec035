#pragma once

#include "samples.hpp"

namespace mcsymp {

enum class SolveMode { Generic, Branching, Instantiated };

inline std::string solve_mode_name(SolveMode m) {
    switch (m) {
        case SolveMode::Generic: return "generic";
        case SolveMode::Branching: return "branching";
        default: return "instantiated";
    }
}

// A case-split assumption on the parameters.
struct BranchCondition {
    Poly poly;  // canonical: primitive, positive leading coefficient
    bool nonzero = true;

    std::string text() const { return to_string(poly) + (nonzero ? " != 0" : " = 0"); }
};

// Generic 2-form with one fresh coefficient per index pair i<j.
struct GenericTwoForm {
    Form form;
    std::vector<std::pair<int, int>> pairs;      // pair for each column
    std::vector<Indeterminate> coeffs;           // column -> indeterminate
};

inline std::string pair_coeff_name(int i, int j) {
    return "a" + std::to_string(i) + std::to_string(j);
}

// Paper-style label: eta/omega split algebras use a^{ij}, b^{ik}, c^{12}.
inline std::string pair_coeff_label(int i, int j, int eta_count) {
    if (eta_count > 0) {
        if (j <= eta_count) return "a" + std::to_string(i) + std::to_string(j);
        if (i <= eta_count) return "b" + std::to_string(i) + std::to_string(j - eta_count);
        return "c" + std::to_string(i - eta_count) + std::to_string(j - eta_count);
    }
    return pair_coeff_name(i, j);
}

inline GenericTwoForm make_generic_two_form(int dim) {
    if (dim > 9) throw std::invalid_argument("make_generic_two_form: dimension too large");
    GenericTwoForm g;
    g.form = Form(dim);
    for (int i = 1; i <= dim; ++i)
        for (int j = i + 1; j <= dim; ++j) {
            Indeterminate v = form_coeff(pair_coeff_name(i, j));
            g.pairs.push_back({i, j});
            g.coeffs.push_back(v);
            g.form.add_term({i, j}, RatFunc(Poly(v)));
        }
    return g;
}

// One leaf of the closure analysis: the space of closed 2-forms valid under
// the recorded assumptions.
struct ClosureSolution {
    std::vector<BranchCondition> branch;              // split assumptions, split order
    std::map<int, Poly> pins;                         // parameter -> substituted value
    std::vector<Poly> pivots;                         // non-constant pivots assumed/derived nonzero
    std::vector<int> free_cols;                       // column indices of free coefficients
    std::vector<Form> kernel_basis;                   // one per free column
    std::map<int, std::map<int, RatFunc>> eliminated; // column -> linear expr in free columns
    bool truncated = false;
    bool unresolved = false;
    AlgebraDef algebra;                               // branch-pinned algebra
    GenericTwoForm generic;                           // shared column layout
    Form general_closed_form;                         // sum of coeff * kernel form

    int closed_space_dim() const { return static_cast<int>(free_cols.size()); }
};

namespace detail {

struct ZeroSystem {
    Poly condition;            // canonical polynomial cutting out this piece
    std::map<int, Poly> subs;  // equivalent substitutions
};

struct ZeroResolution {
    bool impossible = false;        // empty real zero set
    std::vector<ZeroSystem> parts;  // disjunction of substitution systems
};

struct ConjunctiveZero {
    bool impossible = false;
    std::map<int, Poly> subs;
};

// Zero set of a nonnegative-valued polynomial (real-coefficient reasoning:
// positive combinations of squares vanish only where each square does).
inline std::optional<ConjunctiveZero> resolve_nonneg_zero(const Poly& p) {
    if (p.is_zero()) return ConjunctiveZero{false, {}};
    if (p.is_constant()) {
        if (sgn(p.constant_value()) > 0) return ConjunctiveZero{true, {}};
        return std::nullopt;
    }
    bool all_even_positive = true;
    bool pure_powers = true;
    bool has_const = false;
    for (auto& [m, c] : p.terms) {
        if (sgn(c) <= 0 && !m.is_unit()) all_even_positive = false;
        if (m.is_unit()) {
            has_const = true;
            if (sgn(c) <= 0) all_even_positive = false;
            continue;
        }
        if (m.factors.size() > 1) pure_powers = false;
        for (auto& [v, e] : m.factors)
            if (e % 2 != 0) all_even_positive = false;
    }
    if (all_even_positive) {
        if (has_const) return ConjunctiveZero{true, {}};
        if (pure_powers) {
            ConjunctiveZero r;
            for (int v : p.vars()) r.subs[v] = Poly(Rational(0));
            return r;
        }
    }
    // complete the square in the latest variable of degree 2
    auto vs = p.vars();
    for (auto it = vs.rbegin(); it != vs.rend(); ++it) {
        int x = *it;
        if (p.degree_in(x) != 2) continue;
        auto cs = coeffs_in(p, x);
        if (!cs[2].is_constant()) continue;
        Rational a = cs[2].constant_value();
        if (sgn(a) <= 0) continue;
        Poly c1 = cs[1];
        if (c1.degree_in(x) != 0) continue;
        Poly rest = cs[0] - c1 * c1 / (Rational(4) * a);
        auto inner = resolve_nonneg_zero(rest);
        if (!inner) continue;
        if (inner->impossible) return inner;
        ConjunctiveZero r = *inner;
        Poly val = -(c1 / (Rational(2) * a));
        r.subs[x] = val.substitute(r.subs);
        return r;
    }
    return std::nullopt;
}

inline std::optional<Rational> rational_sqrt(const Rational& q) {
    if (sgn(q) < 0) return std::nullopt;
    mpz_class n = q.get_num(), d = q.get_den(), rn, rd;
    if (!mpz_root(rn.get_mpz_t(), n.get_mpz_t(), 2)) return std::nullopt;
    if (!mpz_root(rd.get_mpz_t(), d.get_mpz_t(), 2)) return std::nullopt;
    Rational r(rn, rd);
    r.canonicalize();
    return r;
}

// Decomposition of {p = 0} into substitution systems, when representable:
// a linear variable, a univariate quadratic with rational roots, or a
// positive combination of squares. nullopt: not representable (the caller
// flags the branch instead of guessing).
inline std::optional<ZeroResolution> resolve_zero(const Poly& p) {
    auto vs = p.vars();
    for (auto it = vs.rbegin(); it != vs.rend(); ++it) {
        int x = *it;
        if (p.degree_in(x) != 1) continue;
        auto cs = coeffs_in(p, x);
        if (!cs[1].is_constant()) continue;
        ZeroResolution r;
        r.parts.push_back({p, {{x, -(cs[0] / cs[1].constant_value())}}});
        return r;
    }
    // univariate: extract rational roots; the rootless remainder must be
    // provably positive for the decomposition to be complete
    if (vs.size() == 1) {
        int x = *vs.begin();
        Poly q = p.primitive_part();
        std::vector<Rational> roots;
        // integer coefficients after primitive normalization may still have
        // rational content; clear it
        mpz_class den_lcm(1);
        for (auto& [m, c] : q.terms) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
        q = q * Rational(den_lcm);
        auto divisors_of = [](const mpz_class& v) -> std::optional<std::vector<mpz_class>> {
            mpz_class a = abs(v);
            if (a > 1000000) return std::nullopt;
            std::vector<mpz_class> ds;
            for (mpz_class d = 1; d * d <= a; ++d)
                if (a % d == 0) {
                    ds.push_back(d);
                    ds.push_back(a / d);
                }
            return ds;
        };
        bool complete = true;
        while (!q.is_constant()) {
            auto cs = coeffs_in(q, x);
            if (cs[0].is_zero()) {  // root at zero
                roots.push_back(Rational(0));
                q = *exact_divide(q, Poly(Indeterminate(x)));
                continue;
            }
            auto lead = divisors_of(cs.back().constant_value().get_num());
            auto tail = divisors_of(cs[0].constant_value().get_num());
            if (!lead || !tail) {
                complete = false;
                break;
            }
            bool found = false;
            for (auto& dn : *tail) {
                for (auto& dd : *lead) {
                    for (int sign : {1, -1}) {
                        Rational cand(sign * dn, dd);
                        cand.canonicalize();
                        if (!q.evaluate({{x, cand}}).is_zero()) continue;
                        roots.push_back(cand);
                        q = *exact_divide(q, Poly(Indeterminate(x)) - Poly(cand));
                        found = true;
                        break;
                    }
                    if (found) break;
                }
                if (found) break;
            }
            if (!found) break;
        }
        if (complete && !q.is_constant()) {
            auto rest = resolve_nonneg_zero(q);
            complete = rest && rest->impossible;
        }
        if (!complete) return std::nullopt;
        std::sort(roots.begin(), roots.end());
        roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
        if (roots.empty()) return ZeroResolution{true, {}};
        ZeroResolution r;
        for (auto& root : roots)
            r.parts.push_back({(Poly(Indeterminate(x)) - Poly(root)).primitive_part(), {{x, Poly(root)}}});
        return r;
    }
    auto cj = resolve_nonneg_zero(p);
    if (!cj) return std::nullopt;
    if (cj->impossible) return ZeroResolution{true, {}};
    ZeroResolution r;
    r.parts.push_back({p, cj->subs});
    return r;
}

// On the admissible set, known-nonzero factors of p cannot vanish, and its
// zero set equals that of the squarefree part. Pure gcd arithmetic.
inline Poly reduce_zero_locus(Poly p, const std::vector<Poly>& facts) {
    if (p.is_zero() || p.is_constant()) return p;
    bool changed = true;
    while (changed && !p.is_constant()) {
        changed = false;
        p = squarefree_part(p);
        for (auto& f : facts) {
            if (f.is_constant()) continue;
            Poly g = poly_gcd(p, f);
            if (!g.is_constant()) {
                p = exact_divide(p, g)->primitive_part();
                changed = true;
            }
        }
    }
    return p;
}

struct SolverState {
    std::vector<std::map<int, RatFunc>> rows;
    std::vector<std::pair<int, std::map<int, RatFunc>>> eliminated;  // (col, full row)
    std::vector<BranchCondition> branch;
    std::map<int, Poly> pins;
    std::vector<Poly> pivots;        // canonical non-constant pivots
    std::vector<Poly> facts;         // polynomials known nonzero (substituted forms)
    int zero_depth = 0;
    bool truncated = false;
    bool unresolved = false;
};

inline bool known_nonzero(const Poly& p, const std::vector<Poly>& facts) {
    for (auto& f : facts)
        if (divides(p, f)) return true;
    return false;
}

inline void push_fact(std::vector<Poly>& facts, const Poly& p) {
    for (auto& f : facts)
        if (Poly::cmp(f, p) == 0) return;
    facts.push_back(p);
}

// Applies a zero-branch substitution; returns false if it contradicts a
// known-nonzero fact.
inline bool apply_subs(SolverState& st, const std::map<int, Poly>& subs) {
    std::vector<Poly> nf;
    for (auto& f : st.facts) {
        Poly g = f.substitute(subs);
        if (g.is_zero()) return false;
        if (!g.is_constant()) nf.push_back(g.primitive_part());
    }
    st.facts = std::move(nf);
    for (auto& row : st.rows) {
        std::map<int, RatFunc> nr;
        for (auto& [c, v] : row) {
            RatFunc w = v.substitute(subs);
            if (!w.is_zero()) nr[c] = w;
        }
        row = std::move(nr);
    }
    for (auto& [c, row] : st.eliminated) {
        std::map<int, RatFunc> nr;
        for (auto& [cc, v] : row) {
            RatFunc w = v.substitute(subs);
            if (!w.is_zero()) nr[cc] = w;
        }
        row = std::move(nr);
    }
    for (auto& [v, val] : st.pins) val = val.substitute(subs);
    for (auto& [v, val] : subs) st.pins[v] = val;
    return true;
}

inline void eliminate_with(SolverState& st, size_t r, int c) {
    std::map<int, RatFunc> prow = st.rows[r];
    RatFunc pivot = prow.at(c);
    st.rows.erase(st.rows.begin() + static_cast<long>(r));
    for (auto& row : st.rows) {
        auto it = row.find(c);
        if (it == row.end()) continue;
        RatFunc factor = it->second / pivot;
        row.erase(it);
        for (auto& [cc, v] : prow) {
            if (cc == c) continue;
            RatFunc upd = row.count(cc) ? row[cc] - factor * v : -(factor * v);
            if (upd.is_zero())
                row.erase(cc);
            else
                row[cc] = upd;
        }
    }
    for (auto& [col, row] : st.eliminated) {
        auto it = row.find(c);
        if (it == row.end()) continue;
        RatFunc factor = it->second / pivot;
        row.erase(it);
        for (auto& [cc, v] : prow) {
            if (cc == c) continue;
            RatFunc upd = row.count(cc) ? row[cc] - factor * v : -(factor * v);
            if (upd.is_zero())
                row.erase(cc);
            else
                row[cc] = upd;
        }
    }
    st.eliminated.push_back({c, std::move(prow)});
}

inline void drop_empty_rows(SolverState& st) {
    std::vector<std::map<int, RatFunc>> keep;
    for (auto& row : st.rows)
        if (!row.empty()) keep.push_back(std::move(row));
    st.rows = std::move(keep);
}

}  // namespace detail

// Solves d(generic 2-form) = 0 over Q(params) by exact Gaussian elimination.
// Generic mode assumes every pivot nonzero and records it; branching mode
// splits each genuine non-constant pivot into nonzero/zero cases (zero cases
// become parameter substitutions); instantiated mode requires a
// parameter-free algebra.
inline std::vector<ClosureSolution> solve_closed_space(const AlgebraDef& alg, SolveMode mode) {
    if (mode == SolveMode::Instantiated && alg.has_params())
        throw std::invalid_argument("solve_closed_space: instantiated mode requires parameter-free algebra");
    int n = alg.dim();
    GenericTwoForm gen = make_generic_two_form(n);
    int ncols = static_cast<int>(gen.pairs.size());

    detail::SolverState root;
    for (auto& c : alg.all_constraints()) detail::push_fact(root.facts, c.primitive_part());

    // rows of the linear system, keyed by 3-form basis tuple
    {
        std::map<IndexTuple, std::map<int, RatFunc>, TupleLess> rows;
        for (int col = 0; col < ncols; ++col) {
            auto [i, j] = gen.pairs[col];
            Form d = differential(alg, Form::basis(n, {i, j}));
            for (auto& [t, c] : d.terms) rows[t][col] = c;
        }
        for (auto& [t, row] : rows) root.rows.push_back(row);
    }

    const int depth_cap = static_cast<int>(alg.params.size()) + 2;
    std::vector<ClosureSolution> leaves;

    // discrete parameters expand into pinned sub-branches first
    std::vector<detail::SolverState> stack;
    if (mode == SolveMode::Branching) {
        std::vector<const ParamSpec*> disc;
        for (auto& p : alg.params)
            if (!p.discrete_values.empty()) disc.push_back(&p);
        std::vector<detail::SolverState> expanded{root};
        for (auto* d : disc) {
            std::vector<detail::SolverState> next;
            for (auto& st : expanded)
                for (auto& v : d->discrete_values) {
                    detail::SolverState s2 = st;
                    std::map<int, Poly> subs{{d->var.id, Poly(v)}};
                    if (!detail::apply_subs(s2, subs)) continue;
                    Poly cond = (Poly(d->var) - Poly(v)).primitive_part();
                    s2.branch.push_back({cond, false});
                    next.push_back(std::move(s2));
                }
            expanded = std::move(next);
        }
        for (auto it = expanded.rbegin(); it != expanded.rend(); ++it) stack.push_back(std::move(*it));
    } else {
        stack.push_back(std::move(root));
    }

    while (!stack.empty()) {
        detail::SolverState st = std::move(stack.back());
        stack.pop_back();

        bool emitted = false;
        while (!emitted) {
            detail::drop_empty_rows(st);
            if (st.rows.empty()) break;

            // smallest canonical pivot; ties by column then row order
            size_t best_r = 0;
            int best_c = -1;
            Poly best;
            for (size_t r = 0; r < st.rows.size(); ++r)
                for (auto& [c, v] : st.rows[r]) {
                    Poly cand = v.num.primitive_part();
                    if (best_c < 0 || pivot_less(cand, best) ||
                        (!pivot_less(best, cand) && (c < best_c || (c == best_c && r < best_r)))) {
                        best = cand;
                        best_r = r;
                        best_c = c;
                    }
                }

            if (best.is_constant()) {
                detail::eliminate_with(st, best_r, best_c);
                continue;
            }
            if (detail::known_nonzero(best, st.facts)) {
                st.pivots.push_back(best);
                detail::eliminate_with(st, best_r, best_c);
                continue;
            }
            if (mode != SolveMode::Branching) {
                st.pivots.push_back(best);
                st.branch.push_back({best, true});
                detail::push_fact(st.facts, best);
                detail::eliminate_with(st, best_r, best_c);
                continue;
            }

            Poly reduced = detail::reduce_zero_locus(best, st.facts);
            if (reduced.is_constant()) {
                // every potentially-vanishing factor is known nonzero
                st.pivots.push_back(best);
                detail::push_fact(st.facts, best);
                detail::eliminate_with(st, best_r, best_c);
                continue;
            }
            best = reduced;
            auto zr = detail::resolve_zero(best);
            std::vector<detail::SolverState> zero_states;
            if (zr) {
                for (auto& part : zr->parts) {
                    detail::SolverState zs = st;
                    if (!detail::apply_subs(zs, part.subs)) continue;
                    zs.branch.push_back({part.condition, false});
                    zs.zero_depth = st.zero_depth + 1;
                    zero_states.push_back(std::move(zs));
                }
                if (zero_states.empty()) {
                    // pivot cannot vanish on the admissible set
                    st.pivots.push_back(best);
                    detail::push_fact(st.facts, best);
                    detail::eliminate_with(st, best_r, best_c);
                    continue;
                }
            }
            if (st.zero_depth >= depth_cap) {
                st.truncated = true;
                st.pivots.push_back(best);
                st.branch.push_back({best, true});
                detail::push_fact(st.facts, best);
                detail::eliminate_with(st, best_r, best_c);
                continue;
            }
            if (!zr) {
                // zero locus not representable; keep the nonzero side, flag it
                st.unresolved = true;
                st.pivots.push_back(best);
                st.branch.push_back({best, true});
                detail::push_fact(st.facts, best);
                detail::eliminate_with(st, best_r, best_c);
                continue;
            }

            for (auto it = zero_states.rbegin(); it != zero_states.rend(); ++it)
                stack.push_back(std::move(*it));

            st.pivots.push_back(best);
            st.branch.push_back({best, true});
            detail::push_fact(st.facts, best);
            detail::eliminate_with(st, best_r, best_c);
        }

        // back-substitution
        ClosureSolution sol;
        sol.generic = gen;
        sol.branch = st.branch;
        sol.pins = st.pins;
        sol.pivots = st.pivots;
        sol.truncated = st.truncated;
        sol.unresolved = st.unresolved;
        sol.algebra = st.pins.empty() ? alg : substitute_params(alg, st.pins);

        std::set<int> elim_cols;
        for (auto& [c, row] : st.eliminated) elim_cols.insert(c);
        for (int c = 0; c < ncols; ++c)
            if (!elim_cols.count(c)) sol.free_cols.push_back(c);

        std::map<int, std::map<int, RatFunc>> expr;  // col -> free col -> coeff
        for (auto it = st.eliminated.rbegin(); it != st.eliminated.rend(); ++it) {
            auto& [col, row] = *it;
            RatFunc pivot = row.at(col);
            std::map<int, RatFunc> e;
            for (auto& [c, v] : row) {
                if (c == col) continue;
                RatFunc coeff = -(v / pivot);
                auto sub = expr.find(c);
                if (sub == expr.end()) {
                    RatFunc upd = e.count(c) ? e[c] + coeff : coeff;
                    if (upd.is_zero())
                        e.erase(c);
                    else
                        e[c] = upd;
                } else {
                    for (auto& [fc, fv] : sub->second) {
                        RatFunc upd = e.count(fc) ? e[fc] + coeff * fv : coeff * fv;
                        if (upd.is_zero())
                            e.erase(fc);
                        else
                            e[fc] = upd;
                    }
                }
            }
            expr[col] = std::move(e);
        }
        sol.eliminated = expr;

        std::map<int, size_t> free_index;
        for (size_t i = 0; i < sol.free_cols.size(); ++i) free_index[sol.free_cols[i]] = i;
        sol.kernel_basis.assign(sol.free_cols.size(), Form(n));
        for (size_t i = 0; i < sol.free_cols.size(); ++i) {
            int fc = sol.free_cols[i];
            Form k(n);
            k.add_term({gen.pairs[fc].first, gen.pairs[fc].second}, RatFunc(Rational(1)));
            for (auto& [col, e] : expr) {
                auto it = e.find(fc);
                if (it != e.end()) k.add_term({gen.pairs[col].first, gen.pairs[col].second}, it->second);
            }
            sol.kernel_basis[i] = k;
            Form check = differential(sol.algebra, k);
            if (!check.is_zero())
                throw std::logic_error("solve_closed_space: kernel element not closed for " + alg.name);
        }

        Form general(n);
        for (size_t i = 0; i < sol.free_cols.size(); ++i)
            general = general + sol.kernel_basis[i] * RatFunc(Poly(gen.coeffs[sol.free_cols[i]]));
        sol.general_closed_form = general;

        leaves.push_back(std::move(sol));
    }
    return leaves;
}

}  // namespace mcsymp
