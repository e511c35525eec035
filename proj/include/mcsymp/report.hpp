#pragma once

#include <json.hpp>

#include "symplectic.hpp"

namespace mcsymp {

using nlohmann::json;

inline json to_json(const Form& f, const BasisNaming& naming) {
    return to_string(f, naming);
}

inline json to_json(const AlgebraDef& alg) {
    json j;
    j["name"] = alg.name;
    j["dim"] = alg.dim();
    json params = json::array();
    for (auto& p : alg.params) {
        json jp;
        jp["name"] = p.var.name();
        json cs = json::array();
        for (auto& c : p.nonzero_constraints) cs.push_back(to_string(c) + " != 0");
        jp["constraints"] = cs;
        if (!p.range_note.empty()) jp["range"] = p.range_note;
        if (!p.discrete_values.empty()) {
            json dv = json::array();
            for (auto& v : p.discrete_values) dv.push_back(to_string(v));
            jp["values"] = dv;
        }
        params.push_back(jp);
    }
    j["params"] = params;
    json mc = json::object();
    for (int k = 1; k <= alg.dim(); ++k) {
        Form f = alg.mc.d_of(k);
        if (!f.is_zero()) mc["d " + alg.naming().label(k)] = to_string(f, alg.naming());
    }
    j["maurer_cartan"] = mc;
    json meta = json::object();
    if (alg.meta.nilradical) meta["nilradical"] = *alg.meta.nilradical;
    meta["decomposable"] = alg.meta.decomposable;
    if (!alg.meta.summands.empty()) meta["summands"] = alg.meta.summands;
    if (!alg.meta.source.empty()) meta["source"] = alg.meta.source;
    if (!alg.meta.bindings.empty()) meta["bindings"] = alg.meta.bindings;
    j["meta"] = meta;
    return j;
}

inline json to_json(const SymplecticReport& r) {
    const BasisNaming naming = r.branch_algebra.naming();
    json j;
    j["name"] = r.algebra;
    json params = json::array();
    for (auto& p : r.branch_algebra.params) params.push_back(p.var.name());
    j["params"] = params;
    json br = json::array();
    for (auto& bc : r.branch) {
        json b;
        b["poly"] = to_string(bc.poly);
        b["assumption"] = bc.nonzero ? "nonzero" : "zero";
        br.push_back(b);
    }
    j["branch"] = br;
    json pins = json::object();
    for (auto& [v, val] : r.pins) pins[VarTable::instance().name(v)] = to_string(val);
    j["pins"] = pins;
    j["closed_space_dim"] = r.closed_space_dim;
    j["nondeg_poly"] = to_string(r.nondeg_poly);
    j["nondeg_exact"] = to_string(r.nondeg_exact);
    j["symplectic"] = r.symplectic;
    j["exact_symplectic"] = r.exact_symplectic;
    j["j0"] = r.j0;
    if (r.witness) {
        j["witness"] = to_string(*r.witness, naming);
        json wp = json::object();
        for (auto& [k, v] : r.witness_params) wp[k] = to_string(v);
        j["witness_params"] = wp;
    } else {
        j["witness"] = nullptr;
    }
    if (r.truncated) j["truncated"] = true;
    if (r.unresolved) j["unresolved"] = true;
    if (!r.notes.empty()) j["notes"] = r.notes;

    // closure detail: eliminated coefficients and kernel, in display labels
    const auto& sol = r.solution;
    if (!sol.generic.pairs.empty()) {
        json elim = json::object();
        for (auto& [col, e] : sol.eliminated) {
            auto [i, jdx] = sol.generic.pairs[col];
            std::string lhs = pair_coeff_label(i, jdx, naming.eta_count);
            if (e.empty()) {
                elim[lhs] = "0";
            } else {
                std::string rhs;
                bool first = true;
                for (auto& [fc, v] : e) {
                    auto [fi, fj] = sol.generic.pairs[fc];
                    rhs += (first ? "" : " + ") + std::string("(") + to_string(v) + ")*" +
                           pair_coeff_label(fi, fj, naming.eta_count);
                    first = false;
                }
                elim[lhs] = rhs;
            }
        }
        j["eliminated"] = elim;
        json freec = json::array();
        for (int c : sol.free_cols) {
            auto [i, jdx] = sol.generic.pairs[c];
            freec.push_back(pair_coeff_label(i, jdx, naming.eta_count));
        }
        j["free_coefficients"] = freec;
        json pv = json::array();
        for (auto& p : sol.pivots) pv.push_back(to_string(p));
        j["pivots"] = pv;
    }
    return j;
}

}  // namespace mcsymp
