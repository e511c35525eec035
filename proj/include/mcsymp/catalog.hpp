#pragma once

#include <fstream>

#include "algebra.hpp"

namespace mcsymp {

struct CatalogError : std::runtime_error {
    int line;
    CatalogError(const std::string& msg, int ln)
        : std::runtime_error("catalog line " + std::to_string(ln) + ": " + msg), line(ln) {}
};

class Catalog {
public:
    std::vector<AlgebraDef> algebras;

    const AlgebraDef* find(const std::string& name) const {
        for (auto& a : algebras)
            if (a.name == name) return &a;
        return nullptr;
    }

    const AlgebraDef& get(const std::string& name) const {
        const AlgebraDef* a = find(name);
        if (!a) throw std::invalid_argument("unknown algebra '" + name + "'");
        return *a;
    }
};

namespace detail {

inline std::vector<std::string> tokenize_header(const std::string& line, int lineno) {
    std::vector<std::string> toks;
    size_t i = 0;
    while (i < line.size()) {
        if (isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        size_t j = i;
        bool inq = false;
        while (j < line.size() && (inq || !isspace(static_cast<unsigned char>(line[j])))) {
            if (line[j] == '"') inq = !inq;
            ++j;
        }
        if (inq) throw CatalogError("unterminated string", lineno);
        toks.push_back(line.substr(i, j - i));
        i = j;
    }
    return toks;
}

inline bool is_keyword(const std::string& t) {
    return t == "dim" || t == "params" || t == "constraints" || t == "discrete" || t == "ranges" ||
           t == "meta";
}

}  // namespace detail

// Line-oriented catalog DSL:
//   algebra <name> dim <n> [params p1 p2 ...]
//           [constraints <poly> != 0 ; ...] [discrete <p> = v1,v2]
//           [ranges "<text>"] [meta nilradical=<k> decomposable=<bool> source="<text>"]
//     d w<k> = <form-expr>        # omitted indices have d w<k> = 0
//   end
// '#' starts a comment; '\' continues the header line. Algebras with
// meta nilradical=4 in dimension 6 use the e1..e4,w1,w2 basis naming.
inline Catalog parse_catalog(const std::string& text) {
    Catalog cat;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;

    std::optional<AlgebraDef> block;
    AlgebraDef* cur = nullptr;
    ExprParser form_parser;

    auto strip = [](std::string s) {
        size_t a = s.find_first_not_of(" \t\r\n");
        size_t b = s.find_last_not_of(" \t\r\n");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };

    while (std::getline(in, raw)) {
        ++lineno;
        int first_line = lineno;
        // strip comment (quotes respected), join continuations
        std::string line;
        {
            std::string acc = raw;
            while (true) {
                bool inq = false;
                size_t cut = std::string::npos;
                for (size_t i = 0; i < acc.size(); ++i) {
                    if (acc[i] == '"') inq = !inq;
                    if (acc[i] == '#' && !inq) {
                        cut = i;
                        break;
                    }
                }
                if (cut != std::string::npos) acc = acc.substr(0, cut);
                acc = strip(acc);
                if (!acc.empty() && acc.back() == '\\') {
                    acc.pop_back();
                    if (!std::getline(in, raw)) throw CatalogError("dangling continuation", lineno);
                    ++lineno;
                    acc += " " + raw;
                    continue;
                }
                line = acc;
                break;
            }
        }
        if (line.empty()) continue;

        if (line.rfind("algebra", 0) == 0) {
            if (cur) throw CatalogError("nested algebra block", first_line);
            auto toks = detail::tokenize_header(line, first_line);
            if (toks.size() < 4 || toks[2] != "dim")
                throw CatalogError("expected: algebra <name> dim <n> ...", first_line);
            AlgebraDef def;
            def.name = toks[1];
            if (cat.find(def.name)) throw CatalogError("duplicate algebra name " + def.name, first_line);
            def.mc.dim = std::stoi(toks[3]);
            if (def.mc.dim < 1) throw CatalogError("bad dimension", first_line);

            size_t i = 4;
            auto segment_end = [&](size_t from) {
                size_t j = from;
                while (j < toks.size() && !detail::is_keyword(toks[j])) ++j;
                return j;
            };
            while (i < toks.size()) {
                const std::string& kw = toks[i];
                if (kw == "params") {
                    size_t j = segment_end(i + 1);
                    for (size_t k = i + 1; k < j; ++k) {
                        if (def.find_param(toks[k])) throw CatalogError("duplicate parameter " + toks[k], first_line);
                        ParamSpec ps;
                        ps.var = parameter(toks[k]);
                        def.params.push_back(ps);
                    }
                    i = j;
                } else if (kw == "constraints") {
                    size_t j = segment_end(i + 1);
                    std::string body;
                    for (size_t k = i + 1; k < j; ++k) body += (body.empty() ? "" : " ") + toks[k];
                    i = j;
                    ExprParser pp;
                    pp.resolve = [&](const std::string& id) -> Poly {
                        const ParamSpec* p = def.find_param(id);
                        if (!p) throw std::invalid_argument("undeclared parameter '" + id + "'");
                        return Poly(p->var);
                    };
                    std::istringstream cs(body);
                    std::string clause;
                    while (std::getline(cs, clause, ';')) {
                        clause = strip(clause);
                        if (clause.empty()) continue;
                        size_t neq = clause.find("!=");
                        if (neq == std::string::npos || strip(clause.substr(neq + 2)) != "0")
                            throw CatalogError("constraint must have the form <poly> != 0", first_line);
                        Poly c;
                        try {
                            c = pp.parse_poly(strip(clause.substr(0, neq)));
                        } catch (const std::exception& e) {
                            throw CatalogError(std::string("bad constraint: ") + e.what(), first_line);
                        }
                        if (c.is_constant()) throw CatalogError("constant constraint", first_line);
                        std::set<int> vs = c.vars();
                        for (auto& p : def.params)
                            if (vs.count(p.var.id)) {
                                p.nonzero_constraints.push_back(c);
                                break;
                            }
                    }
                } else if (kw == "discrete") {
                    size_t j = segment_end(i + 1);
                    if (j - i < 3) throw CatalogError("discrete <param> = v1,v2,...", first_line);
                    std::string pname = toks[i + 1];
                    std::string body;
                    for (size_t k = i + 2; k < j; ++k) body += toks[k];
                    if (!body.empty() && body[0] == '=') body = body.substr(1);
                    ParamSpec* p = nullptr;
                    for (auto& q : def.params)
                        if (q.var.name() == pname) p = &q;
                    if (!p) throw CatalogError("discrete for undeclared parameter " + pname, first_line);
                    std::istringstream vs(body);
                    std::string v;
                    while (std::getline(vs, v, ',')) p->discrete_values.push_back(parse_rational(strip(v)));
                    if (p->discrete_values.empty()) throw CatalogError("empty discrete list", first_line);
                    i = j;
                } else if (kw == "ranges") {
                    if (i + 1 >= toks.size() || toks[i + 1].front() != '"')
                        throw CatalogError("ranges expects a quoted string", first_line);
                    std::string note = toks[i + 1].substr(1, toks[i + 1].size() - 2);
                    for (auto& p : def.params)
                        if (p.range_note.empty()) p.range_note = note;
                    i += 2;
                } else if (kw == "meta") {
                    size_t j = i + 1;
                    for (; j < toks.size() && !detail::is_keyword(toks[j]); ++j) {
                        size_t eq = toks[j].find('=');
                        if (eq == std::string::npos) throw CatalogError("meta expects k=v", first_line);
                        std::string k = toks[j].substr(0, eq), v = toks[j].substr(eq + 1);
                        if (!v.empty() && v.front() == '"') v = v.substr(1, v.size() - 2);
                        if (k == "nilradical")
                            def.meta.nilradical = std::stoi(v);
                        else if (k == "decomposable")
                            def.meta.decomposable = v == "true" || v == "1";
                        else if (k == "source")
                            def.meta.source = v;
                        else
                            throw CatalogError("unknown meta key " + k, first_line);
                    }
                    i = j;
                } else {
                    throw CatalogError("unexpected token '" + kw + "' in header", first_line);
                }
            }
            if (def.mc.dim == 6 && def.meta.nilradical.value_or(0) == 4) def.eta_count = 4;
            block = std::move(def);
            cur = &*block;
            form_parser = ExprParser(cur->naming());
            AlgebraDef* captured = cur;
            form_parser.resolve = [captured](const std::string& id) -> Poly {
                const ParamSpec* p = captured->find_param(id);
                if (!p) throw std::invalid_argument("undeclared parameter '" + id + "'");
                return Poly(p->var);
            };
            continue;
        }

        if (line == "end") {
            if (!cur) throw CatalogError("stray end", first_line);
            cat.algebras.push_back(std::move(*block));
            block.reset();
            cur = nullptr;
            continue;
        }

        if (line.rfind("d ", 0) == 0 || line.rfind("d\t", 0) == 0) {
            if (!cur) throw CatalogError("differential outside algebra block", first_line);
            size_t eq = line.find('=');
            if (eq == std::string::npos) throw CatalogError("expected '='", first_line);
            std::string lhs = strip(line.substr(1, eq - 1));
            int idx = cur->naming().parse_label(lhs);
            if (idx == 0) throw CatalogError("bad basis label '" + lhs + "'", first_line);
            if (idx < 0) throw CatalogError("basis index out of range in '" + lhs + "'", first_line);
            if (cur->mc.differentials.count(idx))
                throw CatalogError("duplicate differential for " + lhs, first_line);
            Form f;
            try {
                f = form_parser.parse_form(strip(line.substr(eq + 1)));
            } catch (const std::exception& e) {
                throw CatalogError(e.what(), first_line);
            }
            if (!f.is_zero()) cur->mc.set(idx, f);
            continue;
        }

        throw CatalogError("unrecognized line '" + line + "'", first_line);
    }
    if (cur) throw CatalogError("unterminated algebra block", lineno);
    return cat;
}

inline Catalog parse_catalog_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open catalog file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_catalog(ss.str());
    } catch (const CatalogError&) {
        throw;
    }
}

// Name resolution for the command line: "<name>", "<name>(v1,v2,...)",
// "<k>L1", and '+'-joined direct sums of those.
inline AlgebraDef resolve_algebra(const Catalog& cat, const std::string& text) {
    std::vector<std::string> atoms;
    {
        std::string curtok;
        int depth = 0;
        for (char c : text) {
            if (c == '(') ++depth;
            if (c == ')') --depth;
            if (c == '+' && depth == 0) {
                atoms.push_back(curtok);
                curtok.clear();
            } else if (!isspace(static_cast<unsigned char>(c))) {
                curtok += c;
            }
        }
        atoms.push_back(curtok);
    }
    std::optional<AlgebraDef> acc;
    for (auto& atom : atoms) {
        if (atom.empty()) throw std::invalid_argument("bad algebra expression '" + text + "'");
        AlgebraDef term;
        size_t lp = atom.find('(');
        std::string base = lp == std::string::npos ? atom : atom.substr(0, lp);

        // <k>L1 shorthand for the k-dimensional abelian algebra
        bool abelian_multi = base.size() > 2 && base.substr(base.size() - 2) == "L1";
        if (abelian_multi)
            for (size_t i = 0; i + 2 < base.size(); ++i)
                abelian_multi = abelian_multi && isdigit(static_cast<unsigned char>(base[i]));
        if (abelian_multi && lp == std::string::npos) {
            int k = std::stoi(base.substr(0, base.size() - 2));
            if (k < 1) throw std::invalid_argument("bad abelian dimension in '" + atom + "'");
            AlgebraDef l1 = cat.get("L1");
            term = l1;
            for (int i = 1; i < k; ++i) term = direct_sum(term, l1);
            term.name = base;
            term.meta.decomposable = k > 1;
        } else {
            const AlgebraDef& def = cat.get(base);
            if (lp != std::string::npos) {
                if (atom.back() != ')') throw std::invalid_argument("unbalanced '(' in '" + atom + "'");
                std::string inner = atom.substr(lp + 1, atom.size() - lp - 2);
                std::vector<std::string> vals;
                std::string v;
                std::istringstream vs(inner);
                while (std::getline(vs, v, ',')) vals.push_back(v);
                if (vals.size() != def.params.size())
                    throw std::invalid_argument("algebra " + base + " expects " +
                                                std::to_string(def.params.size()) + " parameter value(s)");
                std::map<std::string, Rational> bind;
                for (size_t i = 0; i < vals.size(); ++i)
                    bind[def.params[i].var.name()] = parse_rational(vals[i]);
                term = instantiate(def, bind);
            } else {
                term = def;
            }
        }
        acc = acc ? direct_sum(*acc, term) : term;
    }
    return *acc;
}

}  // namespace mcsymp
