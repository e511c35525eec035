#pragma once

#include "algebra.hpp"

namespace mcsymp {

// Deterministic "generic" rationals: ratios of consecutive primes,
// 2, 3/2, 5/3, 7/5, 11/7, ... Reproducible without randomness.
inline Rational canonical_value(size_t i) {
    static const long primes[] = {1,   2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,
                                  41,  43,  47,  53,  59,  61,  67,  71,  73,  79,  83,  89,  97,
                                  101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163,
                                  167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227};
    constexpr size_t n = sizeof(primes) / sizeof(primes[0]);
    size_t j = i % (n - 1);
    return rational(primes[j + 1], primes[j]);
}

// Canonical sample vectors for an algebra's parameters: value k+i for the
// i-th continuous parameter at offset k, retried until every constraint
// (and every extra polynomial) is nonzero. Discrete parameters sweep their
// declared value lists.
inline std::vector<std::map<int, Rational>> canonical_samples(const AlgebraDef& alg, size_t count,
                                                              const std::vector<Poly>& extra_nonzero = {}) {
    std::vector<const ParamSpec*> cont, disc;
    for (auto& p : alg.params) (p.discrete_values.empty() ? cont : disc).push_back(&p);

    size_t combos = 1;
    for (auto* d : disc) combos *= d->discrete_values.size();

    std::vector<Poly> constraints = alg.all_constraints();
    constraints.insert(constraints.end(), extra_nonzero.begin(), extra_nonzero.end());

    std::vector<std::map<int, Rational>> out;
    std::set<std::string> seen;
    for (size_t offset = 0; offset < 400 && out.size() < count; ++offset) {
        for (size_t combo = 0; combo < combos && out.size() < count; ++combo) {
            std::map<int, Rational> bind;
            size_t c = combo;
            for (auto* d : disc) {
                bind[d->var.id] = d->discrete_values[c % d->discrete_values.size()];
                c /= d->discrete_values.size();
            }
            for (size_t i = 0; i < cont.size(); ++i) bind[cont[i]->var.id] = canonical_value(offset + i);
            bool ok = true;
            for (auto& cs : constraints)
                if (cs.evaluate(bind).is_zero()) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            std::string key;
            for (auto& [v, q] : bind) key += std::to_string(v) + "=" + to_string(q) + ";";
            if (seen.insert(key).second) out.push_back(bind);
        }
        if (cont.empty() && combos <= 1) break;  // parameter-free: one empty binding
        if (cont.empty()) break;                 // discrete-only: one pass over combos
    }
    if (out.empty() && alg.params.empty()) out.push_back({});
    return out;
}

}  // namespace mcsymp
