#pragma once

#include <json.hpp>

#include "catalog.hpp"

namespace mcsymp {

// An overlay patch or annotation. The catalog text stays verbatim; patches
// are applied on top and every application is reported, never silent.
struct ErrataEntry {
    std::string id;
    std::string target;   // "catalog" or "expected"
    std::string algebra;  // catalog target
    std::string table;    // expected-table target (T1/T2/T3)
    std::string row;      // expected-table row key
    std::string action;   // "set_differential", "set_form", "set_condition", "set_exact", "note"
    std::string index;    // basis label for set_differential
    std::string value;
    std::string reason;
    std::string verdict;
};

struct Errata {
    std::vector<ErrataEntry> entries;
};

inline Errata load_errata(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open errata file " + path);
    nlohmann::json j;
    in >> j;
    Errata e;
    for (auto& je : j.at("entries")) {
        ErrataEntry en;
        en.id = je.value("id", "");
        en.target = je.value("target", "");
        en.algebra = je.value("algebra", "");
        en.table = je.value("table", "");
        en.row = je.value("row", "");
        en.action = je.value("action", "note");
        en.index = je.value("index", "");
        en.value = je.value("value", "");
        en.reason = je.value("reason", "");
        en.verdict = je.value("verdict", "");
        e.entries.push_back(en);
    }
    return e;
}

// Applies catalog patches in place; returns one log line per entry touched
// or noted (annotations are logged too).
inline std::vector<std::string> apply_errata(Catalog& cat, const Errata& errata) {
    std::vector<std::string> log;
    for (auto& en : errata.entries) {
        if (en.target != "catalog") continue;
        AlgebraDef* alg = nullptr;
        for (auto& a : cat.algebras)
            if (a.name == en.algebra) alg = &a;
        if (!alg) throw std::runtime_error("errata " + en.id + ": unknown algebra " + en.algebra);
        if (en.action == "note") {
            log.push_back("errata note  " + en.id + " (" + en.algebra + "): " + en.reason);
            continue;
        }
        if (en.action == "set_differential") {
            int idx = alg->naming().parse_label(en.index);
            if (idx <= 0) throw std::runtime_error("errata " + en.id + ": bad index " + en.index);
            ExprParser p(alg->naming());
            AlgebraDef* captured = alg;
            p.resolve = [captured](const std::string& id) -> Poly {
                const ParamSpec* ps = captured->find_param(id);
                if (!ps) throw std::invalid_argument("undeclared parameter '" + id + "'");
                return Poly(ps->var);
            };
            Form f = p.parse_form(en.value);
            alg->mc.differentials.erase(idx);
            if (!f.is_zero()) alg->mc.set(idx, f);
            log.push_back("errata patch " + en.id + " (" + en.algebra + "): d " + en.index + " = " +
                          en.value + "  [" + en.reason + "]");
            continue;
        }
        throw std::runtime_error("errata " + en.id + ": unknown catalog action " + en.action);
    }
    return log;
}

}  // namespace mcsymp
