#pragma once

#include "errata.hpp"
#include "report.hpp"

namespace mcsymp {

// One transcribed row of a reference classification table.
struct ExpectedRow {
    std::string id;                                // display key, unique within the table
    std::string family;                            // catalog family ("N6_1", "A3_1+A3_4", "g5_7+L1")
    std::map<std::string, std::string> pins;       // parameter -> pinned value (text)
    std::vector<std::string> constraints;          // row-level nonzero polynomials (text)
    std::optional<bool> exact;                     // printed exactness verdict, when present
    std::string form;                              // displayed symplectic form (DSL text)
    std::vector<std::string> conditions;           // nondegeneracy conditions (text, each != 0)
    std::string check_basis;                       // summand order the form's indices refer to
    std::string note;
};

struct ExpectedTable {
    std::string id;
    std::string title;
    std::vector<ExpectedRow> rows;
};

inline ExpectedTable load_expected_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open expected table " + path);
    json j;
    in >> j;
    ExpectedTable t;
    t.id = j.value("table", "");
    t.title = j.value("title", "");
    for (auto& jr : j.at("rows")) {
        ExpectedRow r;
        r.id = jr.at("id");
        r.family = jr.at("family");
        if (jr.contains("pins"))
            for (auto& [k, v] : jr.at("pins").items()) r.pins[k] = v.get<std::string>();
        if (jr.contains("constraints"))
            for (auto& c : jr.at("constraints")) r.constraints.push_back(c.get<std::string>());
        if (jr.contains("exact") && !jr.at("exact").is_null()) r.exact = jr.at("exact").get<bool>();
        r.form = jr.value("form", "");
        if (jr.contains("conditions"))
            for (auto& c : jr.at("conditions")) r.conditions.push_back(c.get<std::string>());
        r.check_basis = jr.value("check_basis", "");
        r.note = jr.value("note", "");
        t.rows.push_back(r);
    }
    return t;
}

// Expected-table errata are applied to the in-memory rows, loudly.
inline std::vector<std::string> apply_errata(ExpectedTable& table, const Errata& errata) {
    std::vector<std::string> log;
    for (auto& en : errata.entries) {
        if (en.target != "expected" || en.table != table.id) continue;
        ExpectedRow* row = nullptr;
        for (auto& r : table.rows)
            if (r.id == en.row) row = &r;
        if (!row) throw std::runtime_error("errata " + en.id + ": unknown row " + en.row);
        if (en.action == "note") {
            log.push_back("errata note  " + en.id + " (" + table.id + " " + en.row + "): " + en.reason);
        } else if (en.action == "set_form") {
            row->form = en.value;
            log.push_back("errata patch " + en.id + " (" + table.id + " " + en.row + "): form = " +
                          en.value + "  [" + en.reason + "]");
        } else if (en.action == "set_condition") {
            row->conditions.clear();
            std::istringstream ss(en.value);
            std::string c;
            while (std::getline(ss, c, ';'))
                if (!c.empty()) row->conditions.push_back(c);
            log.push_back("errata patch " + en.id + " (" + table.id + " " + en.row + "): conditions = " +
                          en.value + "  [" + en.reason + "]");
        } else if (en.action == "set_exact") {
            row->exact = en.value == "yes";
            log.push_back("errata patch " + en.id + " (" + table.id + " " + en.row + "): exact = " +
                          en.value + "  [" + en.reason + "]");
        } else if (en.action == "set_pins") {
            std::istringstream ss(en.value);
            std::string kv;
            while (std::getline(ss, kv, ';')) {
                size_t eq = kv.find('=');
                if (eq == std::string::npos) throw std::runtime_error("errata " + en.id + ": bad pin " + kv);
                row->pins[kv.substr(0, eq)] = kv.substr(eq + 1);
            }
            log.push_back("errata patch " + en.id + " (" + table.id + " " + en.row + "): pins += " +
                          en.value + "  [" + en.reason + "]");
        } else {
            throw std::runtime_error("errata " + en.id + ": unknown expected action " + en.action);
        }
    }
    return log;
}

inline std::vector<std::string> table_families(const Catalog& cat, const std::string& table_id) {
    std::vector<std::string> fams;
    if (table_id == "T1") {
        const char* a3[] = {"A3_1", "A3_2", "A3_3", "A3_4", "A3_5"};
        for (int i = 0; i < 5; ++i)
            for (int j = i; j < 5; ++j) {
                if (i == 0 && j == 0) continue;  // the nilpotent+nilpotent sum is not solvable non-nilpotent
                fams.push_back(std::string(a3[i]) + "+" + a3[j]);
            }
    } else if (table_id == "T2") {
        for (auto& a : cat.algebras)
            if (a.name.rfind("g5_", 0) == 0) fams.push_back(a.name + "+L1");
    } else if (table_id == "T3") {
        for (auto& a : cat.algebras)
            if (a.name.rfind("N6_", 0) == 0) fams.push_back(a.name);
    } else {
        throw std::invalid_argument("unknown table id " + table_id);
    }
    return fams;
}

struct FamilyAnalysis {
    std::string family;
    AlgebraDef algebra;                    // parametric family algebra
    std::vector<SymplecticReport> leaves;  // branching-mode reports, all branches
    std::vector<std::string> sample_notes; // instantiated confirmations for silent families
};

inline std::string pins_text(const SymplecticReport& r) {
    if (r.pins.empty()) return "";
    std::string s = "{";
    bool first = true;
    for (auto& [v, val] : r.pins) {
        s += (first ? "" : ", ") + VarTable::instance().name(v) + "=" + to_string(val);
        first = false;
    }
    return s + "}";
}

inline std::string branch_text(const SymplecticReport& r) {
    if (r.branch.empty()) return "(no case split)";
    std::string s;
    for (auto& bc : r.branch) s += (s.empty() ? "" : ", ") + bc.text();
    return s;
}

// Full branching analysis of every family in a table, in catalog order, with
// canonical-sample confirmation for families without symplectic branches.
inline std::vector<FamilyAnalysis> analyze_table(const Catalog& cat, const std::string& table_id,
                                                 size_t samples_per_family = 3) {
    std::vector<FamilyAnalysis> out;
    for (auto& fam : table_families(cat, table_id)) {
        FamilyAnalysis fa;
        fa.family = fam;
        fa.algebra = resolve_algebra(cat, fam);
        fa.leaves = decide_symplectic(fa.algebra, SolveMode::Branching);
        bool any = false;
        for (auto& r : fa.leaves) any = any || r.symplectic;
        if (!any) {
            auto samples = canonical_samples(fa.algebra, samples_per_family);
            for (auto& bind : samples) {
                std::map<std::string, Rational> by_name;
                for (auto& p : fa.algebra.params) by_name[p.var.name()] = bind.at(p.var.id);
                AlgebraDef inst = fa.algebra.has_params() ? instantiate(fa.algebra, by_name) : fa.algebra;
                auto reps = decide_symplectic(inst, SolveMode::Instantiated);
                std::string bt;
                for (auto& [k, v] : by_name) bt += (bt.empty() ? "" : ",") + k + "=" + to_string(v);
                for (auto& rep : reps)
                    fa.sample_notes.push_back("sample {" + bt + "}: " +
                                              (rep.symplectic ? "SYMPLECTIC (unexpected)" : "nondeg == 0"));
            }
        }
        out.push_back(std::move(fa));
    }
    return out;
}

// Builds the pinned algebra an expected row refers to and checks the
// transcribed form/conditions on it.
struct RowCheck {
    AlgebraDef algebra;
    RowVerdict verdict;
    std::string error;
};

inline RowCheck check_expected_row(const Catalog& cat, const ExpectedRow& row) {
    RowCheck rc;
    try {
        std::string base = row.check_basis.empty() ? row.family : row.check_basis;
        AlgebraDef fam = resolve_algebra(cat, base);
        ExprParser pinp;
        AlgebraDef* famp = &fam;
        pinp.resolve = [famp](const std::string& id) -> Poly {
            const ParamSpec* p = famp->find_param(id);
            if (!p) throw std::invalid_argument("undeclared parameter '" + id + "'");
            return Poly(p->var);
        };
        std::map<int, Poly> pins;
        for (auto& [name, text] : row.pins) {
            const ParamSpec* p = fam.find_param(name);
            // pins absent from the check algebra were consumed by check_basis
            if (!p) continue;
            pins[p->var.id] = pinp.parse_poly(text);
        }
        rc.algebra = pins.empty() ? fam : substitute_params(fam, pins);

        ExprParser fp(rc.algebra.naming());
        AlgebraDef* ap = &rc.algebra;
        ExprParser* fpp = &fp;
        fp.resolve = [ap, fpp](const std::string& id) -> Poly {
            if (const ParamSpec* p = ap->find_param(id)) return Poly(p->var);
            auto it = ap->meta.bindings.find(id);
            if (it != ap->meta.bindings.end()) return fpp->parse_poly(it->second);
            return Poly(form_coeff(id));
        };
        fp.d_of_basis = [ap](int k) { return ap->mc.d_of(k); };
        Form candidate = fp.parse_form(row.form);

        ExprParser cp;
        cp.resolve = fp.resolve;
        std::vector<Poly> conds;
        for (auto& c : row.conditions) conds.push_back(cp.parse_poly(c));
        rc.verdict = verify_table_row(rc.algebra, candidate, conds);
    } catch (const std::exception& e) {
        rc.error = e.what();
    }
    return rc;
}

// Does an engine leaf satisfy an expected row's pins and row constraints?
inline bool leaf_matches_row(const AlgebraDef& family, const SymplecticReport& leaf, const ExpectedRow& row) {
    if (!leaf.symplectic) return false;
    ExprParser pp;
    const AlgebraDef* famp = &family;
    pp.resolve = [famp](const std::string& id) -> Poly {
        const ParamSpec* p = famp->find_param(id);
        if (!p) throw std::invalid_argument("undeclared parameter '" + id + "'");
        return Poly(p->var);
    };
    try {
        for (auto& [name, text] : row.pins) {
            const ParamSpec* p = family.find_param(name);
            if (!p) return false;
            Poly diff = Poly(p->var) - pp.parse_poly(text);
            if (!diff.substitute(leaf.pins).is_zero()) return false;
        }
        for (auto& c : row.constraints) {
            Poly pc = pp.parse_poly(c).substitute(leaf.pins);
            if (pc.is_zero()) return false;
        }
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

struct DiffLine {
    std::string marker;  // MATCH / MISMATCH / PAPER-ONLY / ENGINE-ONLY
    std::string text;
};

struct TableDiff {
    std::vector<DiffLine> lines;
    int match = 0, mismatch = 0, paper_only = 0, engine_only = 0;

    bool clean() const { return mismatch == 0 && paper_only == 0 && engine_only == 0; }
};

inline TableDiff diff_table(const Catalog& cat, const std::vector<FamilyAnalysis>& analyses,
                            const ExpectedTable& expected) {
    TableDiff d;
    std::map<const SymplecticReport*, const ExpectedRow*> claimed;
    for (auto& row : expected.rows) {
        const FamilyAnalysis* fa = nullptr;
        for (auto& a : analyses)
            if (a.family == row.family) fa = &a;
        RowCheck rc = check_expected_row(cat, row);
        std::string rowinfo = rc.error.empty()
                                  ? (rc.verdict.pass ? "row check PASS, coefficient " + to_string(rc.verdict.coeff_poly)
                                                     : "row check FAIL: " + rc.verdict.failure)
                                  : "row check ERROR: " + rc.error;
        if (!fa) {
            ++d.paper_only;
            d.lines.push_back({"PAPER-ONLY", row.id + ": family " + row.family + " not analyzed; " + rowinfo});
            continue;
        }
        std::vector<const SymplecticReport*> hits;
        for (auto& leaf : fa->leaves)
            if (leaf_matches_row(fa->algebra, leaf, row)) hits.push_back(&leaf);
        bool rowok = rc.error.empty() && rc.verdict.pass;
        if (hits.empty()) {
            ++d.paper_only;
            d.lines.push_back({"PAPER-ONLY", row.id + ": no symplectic branch reaches this locus; " + rowinfo});
            continue;
        }
        for (auto* h : hits) claimed[h] = &row;
        if (rowok) {
            ++d.match;
            std::string extra;
            if (row.exact.has_value() && hits[0]->exact_symplectic != *row.exact)
                extra = "; WARNING exactness disagrees (engine says " +
                        std::string(hits[0]->exact_symplectic ? "yes" : "no") + ")";
            d.lines.push_back({"MATCH", row.id + ": branch " + branch_text(*hits[0]) + "; " + rowinfo + extra});
        } else {
            ++d.mismatch;
            d.lines.push_back({"MISMATCH", row.id + ": branch found but " + rowinfo +
                                               "; engine nondeg = " + to_string(hits[0]->nondeg_poly)});
        }
    }
    for (auto& fa : analyses)
        for (auto& leaf : fa.leaves) {
            if (!leaf.symplectic || claimed.count(&leaf)) continue;
            ++d.engine_only;
            d.lines.push_back({"ENGINE-ONLY", fa.family + " " + pins_text(leaf) + ": symplectic branch " +
                                                  branch_text(leaf) + ", nondeg = " + to_string(leaf.nondeg_poly) +
                                                  (leaf.exact_symplectic ? ", exact" : "") +
                                                  "; errata candidate (absent from the reference table)"});
        }
    return d;
}

// Deterministic text rendering of a regenerated table.
inline std::string render_table(const std::string& table_id, const std::vector<FamilyAnalysis>& analyses) {
    std::ostringstream os;
    os << "== table " << table_id << " ==\n";
    for (auto& fa : analyses) {
        bool any = false;
        for (auto& leaf : fa.leaves) {
            if (!leaf.symplectic && !leaf.truncated && !leaf.unresolved) continue;
            any = true;
            os << fa.family << "  " << pins_text(leaf) << "\n";
            os << "    branch: " << branch_text(leaf) << "\n";
            if (leaf.symplectic) {
                os << "    closed space dim " << leaf.closed_space_dim << ", nondeg: " << to_string(leaf.nondeg_poly)
                   << ", exact: " << (leaf.exact_symplectic ? "yes" : "no") << ", j0: " << leaf.j0 << "\n";
                os << "    form: " << to_string(leaf.solution.general_closed_form, leaf.branch_algebra.naming())
                   << "\n";
                if (leaf.witness)
                    os << "    witness: " << to_string(*leaf.witness, leaf.branch_algebra.naming()) << "\n";
            }
            if (leaf.truncated) os << "    [truncated: branch depth cap reached]\n";
            if (leaf.unresolved) os << "    [unresolved: a zero locus could not be decided]\n";
        }
        if (!any) {
            os << fa.family << "  non-symplectic";
            if (!fa.sample_notes.empty()) {
                os << " (" << fa.sample_notes.size() << " canonical samples)";
                for (auto& n : fa.sample_notes)
                    if (n.find("unexpected") != std::string::npos) os << "  " << n;
            }
            os << "\n";
        }
    }
    return os.str();
}

inline json table_json(const std::string& table_id, const std::vector<FamilyAnalysis>& analyses) {
    json j;
    j["table"] = table_id;
    json fams = json::array();
    for (auto& fa : analyses) {
        json f;
        f["family"] = fa.family;
        json leaves = json::array();
        for (auto& leaf : fa.leaves) leaves.push_back(to_json(leaf));
        f["branches"] = leaves;
        if (!fa.sample_notes.empty()) f["samples"] = fa.sample_notes;
        fams.push_back(f);
    }
    j["families"] = fams;
    return j;
}

}  // namespace mcsymp
