// Acceptance suite: runs each reproduction criterion end to end and prints
// one pass/fail line per criterion. Exits nonzero if any criterion fails.
//
//   acceptance <data-dir> [<cli-binary>]

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "property_suites.hpp"

using namespace mcsymp;
using Clock = std::chrono::steady_clock;

namespace {

struct Criterion {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

std::vector<Criterion> results;

template <typename F>
void run(const std::string& name, F&& body) {
    Criterion c;
    c.name = name;
    auto t0 = Clock::now();
    try {
        auto [ok, detail] = body();
        c.pass = ok;
        c.detail = detail;
    } catch (const std::exception& e) {
        c.pass = false;
        c.detail = std::string("exception: ") + e.what();
    }
    c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream line;
    line << "[" << results.size() + 1 << "] " << name << " ";
    while (line.str().size() < 58) line << ".";
    std::cout << line.str() << " " << (c.pass ? "PASS" : "FAIL") << "  (" << c.seconds << " s)\n";
    if (!c.detail.empty()) std::cout << "      " << c.detail << "\n";
    results.push_back(c);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <data-dir> [<cli-binary>]\n";
        return 2;
    }
    std::string data_dir = argv[1];
    std::string cli = argc > 2 ? argv[2] : "";

    Catalog cat = parse_catalog_file(data_dir + "/catalog.mcalg");
    Errata errata = load_errata(data_dir + "/errata.json");
    {
        auto log = apply_errata(cat, errata);
        std::cout << "catalog: " << cat.algebras.size() << " algebras, " << log.size()
                  << " errata entries applied/noted\n";
    }
    auto expected = [&](const std::string& tid) {
        ExpectedTable t = load_expected_table(data_dir + "/expected/" + tid + ".json");
        apply_errata(t, errata);
        return t;
    };

    run("jacobi suite over the transcribed catalog", [&]() -> std::pair<bool, std::string> {
        int dim3 = 0, dim5 = 0, dim6 = 0, fails = 0;
        for (auto& alg : cat.algebras) {
            if (!jacobi_check(alg).pass) ++fails;
            if (alg.name.rfind("A3_", 0) == 0) ++dim3;
            if (alg.name.rfind("g5_", 0) == 0) ++dim5;
            if (alg.name.rfind("N6_", 0) == 0) ++dim6;
        }
        std::string counts = std::to_string(dim3) + "+" + std::to_string(dim5) + "+" +
                             std::to_string(dim6) + " table rows (plus L1, r2), identically in parameters";
        return {fails == 0 && dim3 == 5 && dim5 == 33 && dim6 == 40, counts};
    });

    std::vector<FamilyAnalysis> t1, t2, t3;

    run("table 1 reproduction (3+3 sums)", [&]() -> std::pair<bool, std::string> {
        t1 = analyze_table(cat, "T1");
        ExpectedTable exp = expected("t1");
        TableDiff d = diff_table(cat, t1, exp);
        int symplectic_families = 0;
        for (auto& fa : t1) {
            bool any = false;
            for (auto& leaf : fa.leaves) any = any || leaf.symplectic;
            symplectic_families += any ? 1 : 0;
        }
        // the nine remaining sums: nondeg identically zero at canonical samples
        int silent = 0;
        for (auto& fa : t1) {
            bool any = false;
            for (auto& leaf : fa.leaves) any = any || leaf.symplectic;
            if (any) continue;
            ++silent;
            auto samples = canonical_samples(fa.algebra, 3);
            for (auto& bind : samples) {
                auto reps = decide_symplectic(testsup::instantiate_at(fa.algebra, bind),
                                              SolveMode::Instantiated);
                if (reps.at(0).symplectic) return {false, fa.family + " symplectic at a canonical sample"};
            }
        }
        bool ok = d.match == 5 && d.mismatch == 0 && d.paper_only == 0 && symplectic_families == 5 &&
                  silent == 9;
        return {ok, "5 listed rows verified; " + std::to_string(silent) +
                        " remaining sums non-symplectic at canonical samples"};
    });

    run("table 2 reproduction (g5+L1 sums)", [&]() -> std::pair<bool, std::string> {
        t2 = analyze_table(cat, "T2");
        ExpectedTable exp = expected("t2");
        TableDiff d = diff_table(cat, t2, exp);
        if (d.mismatch != 0 || d.paper_only != 0)
            return {false, std::to_string(d.mismatch) + " mismatches, " + std::to_string(d.paper_only) +
                               " unmatched rows"};
        // families without a listed row must be non-symplectic at canonical samples
        std::set<std::string> listed;
        for (auto& r : exp.rows) listed.insert(r.family);
        int unlisted = 0, candidates = 0;
        for (auto& fa : t2) {
            if (listed.count(fa.family)) continue;
            ++unlisted;
            for (auto& bind : canonical_samples(fa.algebra, 3)) {
                auto reps = decide_symplectic(testsup::instantiate_at(fa.algebra, bind),
                                              SolveMode::Instantiated);
                if (reps.at(0).symplectic)
                    return {false, fa.family + " symplectic at a canonical sample"};
            }
            for (auto& leaf : fa.leaves) candidates += leaf.symplectic ? 1 : 0;
        }
        return {true, std::to_string(exp.rows.size()) + " rows verified (" + std::to_string(d.match) +
                          " matched); " + std::to_string(unlisted) +
                          " unlisted families non-symplectic at canonical samples; " +
                          std::to_string(d.engine_only) + " engine-only branches emitted as errata candidates"};
    });

    run("table 3 + branching reproduction (N6 families)", [&]() -> std::pair<bool, std::string> {
        // the four-parameter family: exactly three symplectic branches
        auto reps = decide_symplectic(cat.get("N6_1"), SolveMode::Branching);
        std::vector<std::string> branches;
        for (auto& r : reps)
            if (r.symplectic) {
                std::string conds;
                for (auto& bc : r.branch) conds += (conds.empty() ? "" : "; ") + bc.text();
                branches.push_back(conds);
            }
        bool n61 = branches.size() == 3 &&
                   branches[0] == "gamma != 0; delta != 0; alpha + gamma = 0; beta + delta = 0" &&
                   branches[1] == "gamma != 0; delta = 0; gamma + 1 = 0" &&
                   branches[2] == "gamma = 0; delta + 1 = 0";
        if (!n61) return {false, "N6_1 branch structure differs"};

        auto gen = solve_closed_space(cat.get("N6_1"), SolveMode::Generic);
        std::map<std::string, std::string> elim;
        for (auto& [col, e] : gen.at(0).eliminated) {
            auto [i, j] = gen[0].generic.pairs[col];
            std::string rhs = e.empty() ? "0" : "";
            for (auto& [fc, v] : e) {
                auto [fi, fj] = gen[0].generic.pairs[fc];
                rhs += "(" + to_string(v) + ")*" + pair_coeff_label(fi, fj, 4);
            }
            elim[pair_coeff_label(i, j, 4)] = rhs;
        }
        bool elim_ok = elim.at("a13") == "0" && elim.at("a14") == "0" && elim.at("a34") == "0" &&
                       elim.at("b31") == "0" && elim.at("b42") == "0" &&
                       elim.at("b12") == "(beta/alpha)*b11";
        if (!elim_ok) return {false, "N6_1 eliminated-coefficient set differs"};

        t3 = analyze_table(cat, "T3");
        ExpectedTable exp = expected("t3");
        TableDiff d = diff_table(cat, t3, exp);
        if (d.mismatch != 0 || d.paper_only != 0)
            return {false, std::to_string(d.mismatch) + " mismatches, " + std::to_string(d.paper_only) +
                               " unmatched rows"};
        for (auto& l : d.lines)
            if (l.text.find("exactness disagrees") != std::string::npos)
                return {false, "exactness column disagrees: " + l.text};
        // the blank exact cell is reported from the engine, not asserted
        RowCheck blank = check_expected_row(cat, [&] {
            for (auto& r : exp.rows)
                if (r.id == "N6_20(0,-1)") return r;
            throw std::runtime_error("row N6_20(0,-1) missing");
        }());
        std::string blank_note =
            "N6_20(0,-1) blank exact cell: engine reports " +
            std::string(decide_exact_symplectic(blank.algebra) ? "yes" : "no");
        return {true, std::to_string(exp.rows.size()) + " rows verified (" + std::to_string(d.match) +
                          " matched, " + std::to_string(d.engine_only) + " engine-only candidates); " +
                          blank_note};
    });

    run("exactness and j0 fixtures", [&]() -> std::pair<bool, std::string> {
        const AlgebraDef& r2 = cat.get("r2");
        if (j0_generic(r2) != 1 || !decide_exact_symplectic(r2)) return {false, "r2 fixture failed"};
        auto basis = exact_space(r2);
        Form w12(2);
        w12.add_term({1, 2}, RatFunc(Rational(-1)));
        if (basis.size() != 1 || !(basis[0] == w12)) return {false, "L(r2) is not spanned by w1^w2"};

        ExpectedTable exp = expected("t3");
        int yes_rows = 0;
        for (auto& row : exp.rows) {
            if (!row.exact.has_value()) continue;
            RowCheck rc = check_expected_row(cat, row);
            if (!rc.error.empty()) return {false, row.id + ": " + rc.error};
            if (decide_exact_symplectic(rc.algebra) != *row.exact)
                return {false, row.id + ": exactness verdict differs"};
            yes_rows += *row.exact ? 1 : 0;
        }
        for (auto* name : {"2L1", "4L1", "6L1"})
            if (j0_generic(resolve_algebra(cat, name)) != 0) return {false, "abelian j0 != 0"};
        return {true, "r2, " + std::to_string(yes_rows) + " exact rows, abelian j0 = 0"};
    });

    run("property suites", [&]() -> std::pair<bool, std::string> {
        std::vector<std::pair<std::string, suites::SuiteResult>> rs;
        rs.push_back({"wedge", suites::wedge_properties()});
        rs.push_back({"differential", suites::differential_properties(cat)});
        rs.push_back({"pfaffian", suites::pfaffian_determinant_property()});
        rs.push_back({"direct-sum", suites::direct_sum_construction_property(cat)});
        std::vector<std::string> fams;
        for (auto& a : cat.algebras)
            if (a.name.rfind("N6_", 0) == 0 && a.has_params()) fams.push_back(a.name);
        for (auto& a : cat.algebras)
            if (a.name.rfind("g5_", 0) == 0 && a.has_params()) fams.push_back(a.name + "+L1");
        fams.push_back("A3_4+A3_4");
        fams.push_back("A3_1+A3_5");
        rs.push_back({"branch-cover", suites::branch_cover_property(cat, fams)});
        rs.push_back({"invariance", suites::invariance_properties(cat)});
        rs.push_back({"exactness", suites::exactness_coherence(cat)});
        std::string detail;
        bool ok = true;
        for (auto& [name, r] : rs) {
            ok = ok && r.pass;
            detail += (detail.empty() ? "" : "; ") + name + (r.pass ? " ok" : " FAILED: " + r.detail);
        }
        return {ok, detail};
    });

    run("byte-identical double run of tables T3", [&]() -> std::pair<bool, std::string> {
        if (!cli.empty()) {
            std::string base = " --catalog " + data_dir + "/catalog.mcalg --errata " + data_dir +
                               "/errata.json tables T3 ";
            std::string out1 = "acceptance_t3_run1.txt", out2 = "acceptance_t3_run2.txt";
            if (std::system((cli + base + "> " + out1 + " 2>&1").c_str()) != 0)
                return {false, "first CLI run failed"};
            if (std::system((cli + base + "> " + out2 + " 2>&1").c_str()) != 0)
                return {false, "second CLI run failed"};
            std::string a = read_file(out1), b = read_file(out2);
            std::remove(out1.c_str());
            std::remove(out2.c_str());
            return {a == b && !a.empty(), "two CLI invocations, " + std::to_string(a.size()) + " bytes each"};
        }
        std::string a = render_table("T3", analyze_table(cat, "T3"));
        std::string b = render_table("T3", analyze_table(cat, "T3"));
        return {a == b && !a.empty(), "in-process double render (CLI binary not supplied)"};
    });

    int failed = 0;
    for (auto& c : results) failed += c.pass ? 0 : 1;
    std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criterion(s) FAILED")
              << "\n";
    return failed == 0 ? 0 : 1;
}
