// Command-line front end: catalog validation, per-algebra symplectic/contact
// analysis, and regeneration of the reference classification tables.

#include <CLI11.hpp>

#include <iostream>

#include "mcsymp/tables.hpp"

using namespace mcsymp;

namespace {

struct Options {
    std::string catalog_path = "data/catalog.mcalg";
    std::string errata_path;
};

Catalog load_catalog(const Options& opt, std::ostream& os) {
    Catalog cat = parse_catalog_file(opt.catalog_path);
    if (!opt.errata_path.empty()) {
        Errata err = load_errata(opt.errata_path);
        for (auto& line : apply_errata(cat, err)) os << line << "\n";
    }
    return cat;
}

int cmd_validate(const Options& opt) {
    Catalog cat = load_catalog(opt, std::cout);
    int fails = 0;
    for (auto& alg : cat.algebras) {
        JacobiResult r = jacobi_check(alg);
        if (r.pass) {
            std::cout << "PASS " << alg.name << "\n";
        } else {
            ++fails;
            std::cout << "FAIL " << alg.name;
            for (auto& f : r.failures)
                std::cout << "  d2(" << alg.naming().label(f.index) << ") = " << to_string(f.d2, alg.naming());
            std::cout << "\n";
        }
    }
    std::cout << cat.algebras.size() - fails << "/" << cat.algebras.size() << " algebras satisfy d^2 = 0\n";
    return fails ? 1 : 0;
}

void print_report(const SymplecticReport& r, std::ostream& os) {
    const BasisNaming naming = r.branch_algebra.naming();
    os << r.algebra;
    if (!r.branch.empty()) os << "  [" << branch_text(r) << "]";
    os << "\n";
    if (!r.pins.empty()) os << "  pinned: " << pins_text(r) << "\n";
    os << "  closed 2-form space dimension: " << r.closed_space_dim << "\n";
    for (auto& [col, e] : r.solution.eliminated) {
        auto [i, j] = r.solution.generic.pairs[col];
        os << "    " << pair_coeff_label(i, j, naming.eta_count) << " = ";
        if (e.empty()) {
            os << "0\n";
            continue;
        }
        bool first = true;
        for (auto& [fc, v] : e) {
            auto [fi, fj] = r.solution.generic.pairs[fc];
            os << (first ? "" : " + ") << "(" << to_string(v) << ")*"
               << pair_coeff_label(fi, fj, naming.eta_count);
            first = false;
        }
        os << "\n";
    }
    os << "  general closed form: " << to_string(r.solution.general_closed_form, naming) << "\n";
    os << "  nondegeneracy polynomial: " << to_string(r.nondeg_poly) << "\n";
    os << "  symplectic: " << (r.symplectic ? "yes" : "no") << "\n";
    if (r.symplectic) {
        os << "  exact symplectic: " << (r.exact_symplectic ? "yes" : "no") << ", j0 = " << r.j0 << "\n";
        if (r.witness) {
            os << "  witness: " << to_string(*r.witness, naming);
            if (!r.witness_params.empty()) {
                os << "  at ";
                bool first = true;
                for (auto& [k, v] : r.witness_params) {
                    os << (first ? "" : ", ") << k << "=" << to_string(v);
                    first = false;
                }
            }
            os << "\n";
        }
    }
    if (r.truncated) os << "  [truncated: branch depth cap reached]\n";
    if (r.unresolved) os << "  [unresolved: a pivot's zero locus could not be decided]\n";
    for (auto& n : r.notes) os << "  note: " << n << "\n";
}

int analyze_contact(const AlgebraDef& alg) {
    int d = alg.dim();
    int n = (d - 1) / 2;
    std::cout << alg.name << " has odd dimension " << d << "; running the contact analysis\n";
    int j = j0_generic(alg);
    std::cout << "  exact space dimension: " << exact_space(alg).size() << ", generic j0 = " << j << "\n";
    if (j < n) {
        std::cout << "  no element of the exact space reaches rank " << 2 * n << "; no linear contact form"
                  << " from this construction\n";
        return 0;
    }
    // search canonical combinations of the differentials
    std::vector<int> closed;
    for (int i = 1; i <= d; ++i)
        if (alg.mc.d_of(i).is_zero()) closed.push_back(i);
    for (int i0 : closed) {
        for (size_t off = 0; off < 30; ++off) {
            std::map<int, RatFunc> combo;
            Form theta(d);
            size_t k = 0;
            for (int i = 1; i <= d; ++i) {
                if (i == i0 || alg.mc.d_of(i).is_zero()) continue;
                RatFunc c(canonical_value(off + k++));
                combo[i] = c;
                theta = theta + alg.mc.d_of(i) * c;
            }
            if (top_power(theta, n).is_zero()) continue;
            try {
                ContactResult res = contact_candidate(alg, theta, combo, i0);
                std::cout << "  contact form: " << to_string(res.eta, alg.naming()) << "\n";
                std::cout << "  eta ^ (d eta)^" << n << " = " << to_string(res.product, alg.naming()) << "\n";
                for (auto& note : res.notes) std::cout << "  note: " << note << "\n";
                return 0;
            } catch (const ContactConstructionError&) {
                continue;
            }
        }
    }
    std::cout << "  no linear contact form found on the canonical sample sequence\n";
    return 0;
}

int cmd_analyze(const Options& opt, const std::string& name, const std::string& mode_name,
                const std::vector<std::string>& param_args, bool as_json) {
    Catalog cat = load_catalog(opt, std::cerr);
    AlgebraDef alg = resolve_algebra(cat, name);
    if (!param_args.empty()) {
        std::map<std::string, Rational> vals;
        for (auto& kv : param_args) {
            size_t eq = kv.find('=');
            if (eq == std::string::npos) throw std::invalid_argument("--params expects name=value, got " + kv);
            vals[kv.substr(0, eq)] = parse_rational(kv.substr(eq + 1));
        }
        alg = instantiate(alg, vals);
    }
    SolveMode mode;
    if (mode_name == "generic")
        mode = SolveMode::Generic;
    else if (mode_name == "branching")
        mode = SolveMode::Branching;
    else if (mode_name == "instantiated")
        mode = SolveMode::Instantiated;
    else if (mode_name.empty())
        mode = alg.has_params() ? SolveMode::Generic : SolveMode::Instantiated;
    else
        throw std::invalid_argument("unknown mode " + mode_name);

    if (alg.dim() % 2 != 0) return analyze_contact(alg);

    auto reports = decide_symplectic(alg, mode);
    if (as_json) {
        json j = json::array();
        for (auto& r : reports) j.push_back(to_json(r));
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "mode: " << solve_mode_name(mode) << ", " << reports.size() << " branch(es)\n";
        for (auto& r : reports) print_report(r, std::cout);
    }
    return 0;
}

int cmd_tables(const Options& opt, const std::string& table_id, const std::string& diff_path, bool as_json) {
    Catalog cat = load_catalog(opt, std::cerr);
    auto analyses = analyze_table(cat, table_id);
    if (diff_path.empty()) {
        if (as_json)
            std::cout << table_json(table_id, analyses).dump(2) << "\n";
        else
            std::cout << render_table(table_id, analyses);
        return 0;
    }
    ExpectedTable expected = load_expected_table(diff_path);
    if (!opt.errata_path.empty()) {
        Errata err = load_errata(opt.errata_path);
        for (auto& line : apply_errata(expected, err)) std::cout << line << "\n";
    }
    TableDiff d = diff_table(cat, analyses, expected);
    if (as_json) {
        json j;
        j["table"] = table_id;
        json lines = json::array();
        for (auto& l : d.lines) lines.push_back({{"marker", l.marker}, {"detail", l.text}});
        j["diff"] = lines;
        j["match"] = d.match;
        j["mismatch"] = d.mismatch;
        j["paper_only"] = d.paper_only;
        j["engine_only"] = d.engine_only;
        std::cout << j.dump(2) << "\n";
    } else {
        for (auto& l : d.lines) std::cout << l.marker << "  " << l.text << "\n";
        std::cout << "summary: " << d.match << " match, " << d.mismatch << " mismatch, " << d.paper_only
                  << " paper-only, " << d.engine_only << " engine-only\n";
    }
    return d.mismatch == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact symplectic/contact structure analysis of solvable Lie algebras"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--catalog", opt.catalog_path, "Maurer-Cartan catalog file")->capture_default_str();
    app.add_option("--errata", opt.errata_path, "errata overlay to apply (applied loudly, never silently)");

    auto* validate = app.add_subcommand("validate", "check d^2 = 0 for every catalog algebra");

    std::string name, mode, diff_path;
    std::vector<std::string> params;
    bool as_json = false;
    auto* analyze = app.add_subcommand("analyze", "closed 2-form and symplectic analysis of one algebra");
    analyze->add_option("name", name, "algebra name, e.g. N6_1, A3_4(-1)+A3_5(0), g5_36+L1, 6L1")->required();
    analyze->add_option("--mode", mode, "generic | branching | instantiated");
    analyze->add_option("--params", params, "parameter values, name=rational");
    analyze->add_flag("--json", as_json, "emit the JSON report");

    std::string table_id;
    auto* tables = app.add_subcommand("tables", "regenerate a classification table (T1, T2, T3)");
    tables->add_option("table", table_id, "T1 | T2 | T3")->required();
    tables->add_option("--diff", diff_path, "expected-table JSON to diff against");
    tables->add_flag("--json", as_json, "emit JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (validate->parsed()) return cmd_validate(opt);
        if (analyze->parsed()) return cmd_analyze(opt, name, mode, params, as_json);
        if (tables->parsed()) return cmd_tables(opt, table_id, diff_path, as_json);
    } catch (const CatalogError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
