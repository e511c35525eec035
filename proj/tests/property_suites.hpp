#pragma once

#include "support.hpp"

// Property suites shared by the unit tests and the acceptance runner.
namespace suites {

using namespace mcsymp;
using testsup::instantiate_at;
using testsup::random_binding;
using testsup::random_form;
using testsup::random_rational;

struct SuiteResult {
    bool pass = true;
    std::string detail;

    void fail(const std::string& msg) {
        pass = false;
        if (detail.empty()) detail = msg;
    }
};

// Graded commutativity and associativity of the wedge product.
inline SuiteResult wedge_properties(unsigned seed = 11, int reps = 60) {
    std::mt19937 rng(seed);
    SuiteResult res;
    std::uniform_int_distribution<int> dims(2, 6), grades(1, 3);
    for (int i = 0; i < reps; ++i) {
        int n = dims(rng);
        int p = grades(rng), q = grades(rng);
        Form f = random_form(rng, n, std::min(p, n)), g = random_form(rng, n, std::min(q, n));
        Form fg = wedge(f, g), gf = wedge(g, f);
        bool odd = (std::min(p, n) * std::min(q, n)) % 2 != 0;
        if (!(fg == (odd ? -gf : gf))) {
            res.fail("graded commutativity failed in dim " + std::to_string(n));
            return res;
        }
        Form h = random_form(rng, n, 1);
        if (!(wedge(wedge(f, g), h) == wedge(f, wedge(g, h)))) {
            res.fail("associativity failed in dim " + std::to_string(n));
            return res;
        }
    }
    res.detail = std::to_string(reps) + " random triples";
    return res;
}

// Leibniz rule and d^2 = 0 over every catalog algebra, identically in the
// parameters, on random low-grade forms.
inline SuiteResult differential_properties(const Catalog& cat, unsigned seed = 23, int forms_per_algebra = 2) {
    std::mt19937 rng(seed);
    SuiteResult res;
    int checked = 0;
    for (auto& alg : cat.algebras) {
        for (int grade = 1; grade <= 2 && grade < alg.dim(); ++grade) {
            for (int rep = 0; rep < forms_per_algebra; ++rep) {
                Form f = random_form(rng, alg.dim(), grade);
                if (!differential(alg, differential(alg, f)).is_zero()) {
                    res.fail("d^2 != 0 on " + alg.name);
                    return res;
                }
                Form g = random_form(rng, alg.dim(), 1);
                Form lhs = differential(alg, wedge(f, g));
                Form rhs = wedge(differential(alg, f), g) +
                           (grade % 2 == 0 ? wedge(f, differential(alg, g)) : -wedge(f, differential(alg, g)));
                if (!(lhs == rhs)) {
                    res.fail("Leibniz rule failed on " + alg.name);
                    return res;
                }
                ++checked;
            }
        }
    }
    res.detail = std::to_string(checked) + " random forms across " + std::to_string(cat.algebras.size()) +
                 " algebras";
    return res;
}

// Pf^2 = det at random full bindings in dimensions 4 and 6.
inline SuiteResult pfaffian_determinant_property(unsigned seed = 37, int bindings = 12) {
    std::mt19937 rng(seed);
    SuiteResult res;
    for (int n : {4, 6}) {
        for (int i = 0; i < bindings; ++i) {
            Form f(n);
            for (int a = 1; a <= n; ++a)
                for (int b = a + 1; b <= n; ++b) f.add_term({a, b}, RatFunc(random_rational(rng)));
            Form top = top_power(f, n / 2);
            Rational coeff(0);
            if (!top.is_zero()) coeff = top.coefficient(volume_tuple(n)).constant_value();
            // m! divides the top coefficient; Pf = coeff / m!
            Rational mfact(1);
            for (int m = 2; m <= n / 2; ++m) mfact *= m;
            Rational pf = coeff / mfact;
            Rational det = determinant(skew_matrix(f));
            if (Rational(pf * pf) != det) {
                res.fail("Pf^2 != det in dim " + std::to_string(n));
                return res;
            }
            // rank consistency: top powers vanish exactly above rank/2
            int rank = two_form_rank(f);
            for (int m = 1; 2 * m <= n; ++m) {
                bool zero = top_power(f, m).is_zero();
                if (zero != (2 * m > rank)) {
                    res.fail("wedge-power/rank inconsistency in dim " + std::to_string(n));
                    return res;
                }
            }
        }
    }
    res.detail = std::to_string(2 * bindings) + " bindings in dims 4 and 6";
    return res;
}

// theta candidates on one summand: closed 2-forms supported away from the
// chosen closed index, computed by a dense test-local elimination.
inline std::vector<Form> closed_avoiding(const AlgebraDef& alg, int i0) {
    int n = alg.dim();
    std::vector<std::pair<int, int>> pairs;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            if (i != i0 && j != i0) pairs.push_back({i, j});
    std::map<IndexTuple, size_t, TupleLess> row_index;
    std::vector<std::vector<Rational>> rows;
    for (size_t c = 0; c < pairs.size(); ++c) {
        Form d = differential(alg, Form::basis(n, {pairs[c].first, pairs[c].second}));
        for (auto& [t, v] : d.terms) {
            auto it = row_index.find(t);
            if (it == row_index.end()) {
                it = row_index.emplace(t, rows.size()).first;
                rows.push_back(std::vector<Rational>(pairs.size(), Rational(0)));
            }
            rows[it->second][c] = v.constant_value();
        }
    }
    // reduced row echelon, then kernel basis
    size_t rank = 0;
    std::vector<size_t> pivot_col;
    for (size_t col = 0; col < pairs.size() && rank < rows.size(); ++col) {
        size_t piv = rank;
        while (piv < rows.size() && is_zero(rows[piv][col])) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[piv], rows[rank]);
        for (size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || is_zero(rows[r][col])) continue;
            Rational f = rows[r][col] / rows[rank][col];
            for (size_t c = col; c < pairs.size(); ++c) rows[r][c] -= Rational(f * rows[rank][c]);
        }
        pivot_col.push_back(col);
        ++rank;
    }
    std::set<size_t> pivots(pivot_col.begin(), pivot_col.end());
    std::vector<Form> basis;
    for (size_t c = 0; c < pairs.size(); ++c) {
        if (pivots.count(c)) continue;
        Form k(n);
        k.add_term({pairs[c].first, pairs[c].second}, RatFunc(Rational(1)));
        for (size_t r = 0; r < rank; ++r) {
            if (is_zero(rows[r][c])) continue;
            Rational coeff = -(rows[r][c] / rows[r][pivot_col[r]]);
            k.add_term({pairs[pivot_col[r]].first, pairs[pivot_col[r]].second}, RatFunc(coeff));
        }
        basis.push_back(k);
    }
    return basis;
}

// Direct-sum construction on randomized valid (theta, theta') pairs.
inline SuiteResult direct_sum_construction_property(const Catalog& cat, unsigned seed = 51, int wanted = 50) {
    std::mt19937 rng(seed);
    SuiteResult res;
    struct Summand {
        AlgebraDef alg;
        int i0;
        std::vector<Form> basis;
    };
    std::vector<Summand> pool;
    auto add = [&](const std::string& name, int i0) {
        AlgebraDef a = resolve_algebra(cat, name);
        if (!a.mc.d_of(i0).is_zero()) return;
        auto basis = closed_avoiding(a, i0);
        if (!basis.empty()) pool.push_back({a, i0, std::move(basis)});
    };
    add("A3_1", 2);
    add("A3_1", 3);
    add("A3_4(-1)", 3);
    add("A3_5(0)", 3);
    add("g5_8(-1)", 5);
    add("g5_13(-1,0,2)", 5);
    add("g5_13(-1,0,1/2)", 5);
    add("g5_17(0,0,3)", 5);
    int done = 0, attempts = 0;
    while (done < wanted && attempts < wanted * 40) {
        ++attempts;
        std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
        const Summand& s1 = pool[pick(rng)];
        const Summand& s2 = pool[pick(rng)];
        auto sample_theta = [&](const Summand& s) -> std::optional<Form> {
            int half = (s.alg.dim() - 1) / 2;
            for (int t = 0; t < 8; ++t) {
                Form theta(s.alg.dim());
                for (auto& k : s.basis) theta = theta + k * RatFunc(random_rational(rng));
                if (!top_power(theta, half).is_zero()) return theta;
            }
            return std::nullopt;
        };
        auto t1 = sample_theta(s1), t2 = sample_theta(s2);
        if (!t1 || !t2) continue;
        SymplecticSum sum;
        try {
            sum = symplectic_direct_sum(s1.alg, *t1, s1.i0, s2.alg, *t2, s2.i0);
        } catch (const std::exception& e) {
            res.fail(std::string("construction rejected a valid pair: ") + e.what());
            return res;
        }
        // independent re-check of the conclusion
        if (!differential(sum.algebra, sum.form).is_zero()) {
            res.fail("combined form not closed for " + sum.algebra.name);
            return res;
        }
        if (top_power(sum.form, sum.algebra.dim() / 2).is_zero()) {
            res.fail("combined form degenerate for " + sum.algebra.name);
            return res;
        }
        ++done;
    }
    if (done < wanted) {
        res.fail("only " + std::to_string(done) + " valid pairs generated");
        return res;
    }
    res.detail = std::to_string(done) + " randomized pairs";
    return res;
}

// Branch soundness: at admissible points, exactly one leaf's assumptions
// hold and its kernel dimension agrees with a dense instantiated solve.
inline SuiteResult branch_cover_property(const Catalog& cat, const std::vector<std::string>& families,
                                         unsigned seed = 67, int points = 20) {
    std::mt19937 rng(seed);
    SuiteResult res;
    int families_checked = 0;
    for (auto& fam : families) {
        AlgebraDef alg = resolve_algebra(cat, fam);
        if (!alg.has_params()) continue;
        ++families_checked;
        auto leaves = solve_closed_space(alg, SolveMode::Branching);
        auto leaf_holds = [&](const ClosureSolution& leaf, const std::map<int, Rational>& bind) {
            for (auto& bc : leaf.branch) {
                Poly v = bc.poly.evaluate(bind);
                if (!v.is_constant()) return false;
                if (bc.nonzero == v.is_zero()) return false;
            }
            return true;
        };
        auto check_point = [&](const std::map<int, Rational>& bind) -> bool {
            int holds = 0;
            const ClosureSolution* active = nullptr;
            for (auto& leaf : leaves)
                if (leaf_holds(leaf, bind)) {
                    ++holds;
                    active = &leaf;
                }
            if (holds != 1) {
                res.fail(fam + ": " + std::to_string(holds) + " leaves cover one admissible point");
                return false;
            }
            int oracle = testsup::closure_kernel_dim_oracle(instantiate_at(alg, bind));
            if (oracle != active->closed_space_dim()) {
                res.fail(fam + ": kernel dimension " + std::to_string(oracle) + " != leaf " +
                         std::to_string(active->closed_space_dim()));
                return false;
            }
            return true;
        };
        for (int i = 0; i < points; ++i)
            if (!check_point(random_binding(rng, alg))) return res;
        // pinned points exercise the zero branches
        for (auto& leaf : leaves) {
            if (leaf.pins.empty()) continue;
            for (int t = 0; t < 40; ++t) {
                std::map<int, Rational> bind;
                for (auto& p : leaf.algebra.params) {
                    if (!p.discrete_values.empty()) {
                        std::uniform_int_distribution<size_t> pick(0, p.discrete_values.size() - 1);
                        bind[p.var.id] = p.discrete_values[pick(rng)];
                    } else {
                        bind[p.var.id] = random_rational(rng);
                    }
                }
                bool ok = true;
                std::map<int, Rational> full = bind;
                for (auto& [v, val] : leaf.pins) {
                    Poly e = val.evaluate(bind);
                    if (!e.is_constant()) {
                        ok = false;
                        break;
                    }
                    full[v] = e.constant_value();
                }
                if (!ok) continue;
                for (auto& c : alg.all_constraints()) ok = ok && !c.evaluate(full).is_zero();
                if (!ok) continue;
                for (auto& bc : leaf.branch) {
                    Poly v = bc.poly.evaluate(full);
                    ok = ok && v.is_constant() && (bc.nonzero != v.is_zero());
                }
                if (!ok) continue;
                if (!check_point(full)) return res;
                break;
            }
        }
    }
    res.detail = std::to_string(points) + "+ points over " + std::to_string(families_checked) +
                 " parametric families";
    return res;
}

// Verdict invariance under basis relabeling and summand order.
inline SuiteResult invariance_properties(const Catalog& cat, unsigned seed = 83, int perms = 5) {
    std::mt19937 rng(seed);
    SuiteResult res;
    std::vector<std::string> names = {"A3_4(-1)+A3_4(-1)", "A3_2+A3_3", "g5_36+L1", "N6_28", "N6_38", "6L1"};
    for (auto& name : names) {
        AlgebraDef alg = resolve_algebra(cat, name);
        auto base = decide_symplectic(alg, SolveMode::Instantiated);
        bool base_symp = false;
        for (auto& r : base) base_symp = base_symp || r.symplectic;
        int base_j0 = j0_generic(alg);
        for (int t = 0; t < perms; ++t) {
            std::vector<int> perm(static_cast<size_t>(alg.dim()));
            for (int i = 0; i < alg.dim(); ++i) perm[static_cast<size_t>(i)] = i + 1;
            std::shuffle(perm.begin(), perm.end(), rng);
            AlgebraDef shuffled = testsup::permute_basis(alg, perm);
            auto reps = decide_symplectic(shuffled, SolveMode::Instantiated);
            bool symp = false;
            for (auto& r : reps) symp = symp || r.symplectic;
            if (symp != base_symp || j0_generic(shuffled) != base_j0) {
                res.fail(name + ": verdict changed under a basis permutation");
                return res;
            }
        }
    }
    for (auto& [a, b] : std::vector<std::pair<std::string, std::string>>{
             {"A3_1", "A3_4(-1)"}, {"A3_2", "A3_5(0)"}, {"A3_3", "A3_3"}, {"g5_36", "L1"}, {"g5_8(-1)", "L1"}}) {
        AlgebraDef ab = resolve_algebra(cat, a + "+" + b);
        AlgebraDef ba = resolve_algebra(cat, b + "+" + a);
        auto ra = decide_symplectic(ab, SolveMode::Instantiated);
        auto rb = decide_symplectic(ba, SolveMode::Instantiated);
        bool sa = false, sb = false;
        for (auto& r : ra) sa = sa || r.symplectic;
        for (auto& r : rb) sb = sb || r.symplectic;
        if (sa != sb) {
            res.fail(a + "+" + b + ": verdict depends on summand order");
            return res;
        }
    }
    res.detail = std::to_string(perms) + " permutations per algebra, 5 summand swaps";
    return res;
}

// Exactness implies symplectic, across the six-dimensional catalog families
// at canonical samples.
inline SuiteResult exactness_coherence(const Catalog& cat) {
    SuiteResult res;
    int exact_count = 0;
    for (auto& alg : cat.algebras) {
        if (alg.dim() != 6) continue;
        for (auto& bind : canonical_samples(alg, 2)) {
            AlgebraDef inst = instantiate_at(alg, bind);
            if (!decide_exact_symplectic(inst)) continue;
            ++exact_count;
            auto reps = decide_symplectic(inst, SolveMode::Instantiated);
            bool symp = false;
            for (auto& r : reps) symp = symp || r.symplectic;
            if (!symp) {
                res.fail(inst.name + ": exact symplectic but not symplectic");
                return res;
            }
        }
    }
    res.detail = std::to_string(exact_count) + " exact-symplectic instances rechecked";
    return res;
}

}  // namespace suites
