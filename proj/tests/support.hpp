#pragma once

#include <random>

#include "mcsymp/tables.hpp"

namespace testsup {

using namespace mcsymp;

inline Catalog load_catalog(const std::string& data_dir, bool with_errata = true) {
    Catalog cat = parse_catalog_file(data_dir + "/catalog.mcalg");
    if (with_errata) {
        Errata err = load_errata(data_dir + "/errata.json");
        apply_errata(cat, err);
    }
    return cat;
}

inline Rational random_rational(std::mt19937& rng, int lo = -4, int hi = 4) {
    std::uniform_int_distribution<int> num(lo, hi), den(1, 3);
    return rational(num(rng), den(rng));
}

inline Rational random_nonzero_rational(std::mt19937& rng, int lo = -4, int hi = 4) {
    while (true) {
        Rational q = random_rational(rng, lo, hi);
        if (!is_zero(q)) return q;
    }
}

inline Poly random_poly(std::mt19937& rng, const std::vector<Indeterminate>& vars, int max_terms = 4,
                        int max_exp = 2) {
    std::uniform_int_distribution<int> nterms(0, max_terms), pick(0, static_cast<int>(vars.size()) - 1),
        exp(0, max_exp);
    Poly p;
    int k = nterms(rng);
    for (int t = 0; t < k; ++t) {
        Poly term(random_rational(rng));
        for (auto& v : vars) {
            int e = exp(rng);
            if (e > 0) term = term * Poly(v).pow(e);
        }
        p = p + term;
    }
    return p;
}

inline Form random_form(std::mt19937& rng, int dim, int grade, int max_terms = 4) {
    Form f(dim);
    std::uniform_int_distribution<int> nterms(1, max_terms), idx(1, dim);
    int k = nterms(rng);
    for (int t = 0; t < k; ++t) {
        IndexTuple tuple;
        std::set<int> used;
        while (static_cast<int>(tuple.size()) < grade) {
            int i = idx(rng);
            if (used.insert(i).second) tuple.push_back(i);
        }
        f.add_term(tuple, RatFunc(random_rational(rng)));
    }
    return f;
}

// Random full parameter binding satisfying every constraint.
inline std::map<int, Rational> random_binding(std::mt19937& rng, const AlgebraDef& alg, int tries = 200) {
    for (int t = 0; t < tries; ++t) {
        std::map<int, Rational> bind;
        for (auto& p : alg.params) {
            if (!p.discrete_values.empty()) {
                std::uniform_int_distribution<size_t> pick(0, p.discrete_values.size() - 1);
                bind[p.var.id] = p.discrete_values[pick(rng)];
            } else {
                bind[p.var.id] = random_rational(rng);
            }
        }
        bool ok = true;
        for (auto& c : alg.all_constraints()) ok = ok && !c.evaluate(bind).is_zero();
        if (ok) return bind;
    }
    throw std::runtime_error("random_binding: no admissible point found for " + alg.name);
}

inline AlgebraDef instantiate_at(const AlgebraDef& alg, const std::map<int, Rational>& bind) {
    if (!alg.has_params()) return alg;
    std::map<std::string, Rational> by_name;
    for (auto& p : alg.params) by_name[p.var.name()] = bind.at(p.var.id);
    return instantiate(alg, by_name);
}

// Basis relabeling w_i -> w_{perm[i]}; display naming is dropped.
inline AlgebraDef permute_basis(const AlgebraDef& alg, const std::vector<int>& perm) {
    AlgebraDef r;
    r.name = alg.name + "~";
    r.params = alg.params;
    r.mc.dim = alg.dim();
    for (auto& [k, f] : alg.mc.differentials) {
        Form g(alg.dim());
        for (auto& [t, c] : f.terms) {
            IndexTuple s = t;
            for (int& i : s) i = perm[static_cast<size_t>(i) - 1];
            g.add_term(s, c);
        }
        r.mc.set(perm[static_cast<size_t>(k) - 1], std::move(g));
    }
    return r;
}

// Dense exact Gaussian elimination, used as a solver-independent oracle.
// Returns the kernel dimension of the row system over the given unknowns.
inline int kernel_dimension(std::vector<std::vector<Rational>> rows, size_t unknowns) {
    size_t rank = 0;
    for (size_t col = 0; col < unknowns && rank < rows.size(); ++col) {
        size_t piv = rank;
        while (piv < rows.size() && is_zero(rows[piv][col])) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[piv], rows[rank]);
        for (size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || is_zero(rows[r][col])) continue;
            Rational f = rows[r][col] / rows[rank][col];
            for (size_t c = col; c < unknowns; ++c) rows[r][c] -= Rational(f * rows[rank][c]);
        }
        ++rank;
    }
    return static_cast<int>(unknowns - rank);
}

// Closure system of an instantiated algebra as a dense rational matrix,
// assembled directly from the differential (no solver machinery).
inline int closure_kernel_dim_oracle(const AlgebraDef& alg) {
    int n = alg.dim();
    std::vector<std::pair<int, int>> pairs;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) pairs.push_back({i, j});
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
    return kernel_dimension(std::move(rows), pairs.size());
}

}  // namespace testsup
