#include "sforcer/document.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace sforcer {

namespace {

struct Line {
    int number = 0;
    std::vector<std::string> tokens;
};

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ParseError("line " + std::to_string(line) + ": " + msg);
}

// whitespace tokens, with {...}, (...) and "..." kept together
std::vector<std::string> tokenize_line(const std::string& s, int number) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '#') break;
        if (c == '"') {
            std::size_t j = s.find('"', i + 1);
            if (j == std::string::npos) fail(number, "unterminated string");
            out.push_back(s.substr(i, j - i + 1));
            i = j + 1;
            continue;
        }
        if (c == '{' || c == '(') {
            char close = c == '{' ? '}' : ')';
            std::size_t j = s.find(close, i);
            // a lone '{' opens a block
            if (c == '{' && (j == std::string::npos)) {
                out.push_back("{");
                ++i;
                continue;
            }
            if (j == std::string::npos) fail(number, "unterminated group");
            out.push_back(s.substr(i, j - i + 1));
            i = j + 1;
            continue;
        }
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != '#') ++j;
        out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::vector<std::string> split_group(const std::string& tok, int line) {
    if (tok.size() < 2 || (tok.front() != '{' && tok.front() != '('))
        fail(line, "expected a {...} or (...) group, found '" + tok + "'");
    std::string inner = tok.substr(1, tok.size() - 2);
    std::vector<std::string> out;
    std::istringstream ss(inner);
    std::string w;
    while (ss >> w) out.push_back(w);
    return out;
}

PointSet parse_point_set(const std::string& tok, const FinTopology& t, int line) {
    PointSet s = 0;
    for (const auto& p : split_group(tok, line)) s |= PointSet(1) << t.point_by_name(p);
    return s;
}

int parse_int(const std::string& tok, int line) {
    try {
        std::size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size()) fail(line, "not a number: '" + tok + "'");
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (...) {
        fail(line, "not a number: '" + tok + "'");
    }
}

template <typename Map>
const typename Map::mapped_type& resolve(const Map& m, const std::string& name,
                                         const std::string& what, int line) {
    auto it = m.find(name);
    if (it == m.end()) fail(line, "unknown " + what + " '" + name + "'");
    return it->second;
}

// ---------------------------------------------------------------------
// Block builders
// ---------------------------------------------------------------------

LanguageSig build_signature(const std::vector<Line>& lines) {
    LanguageSig sig;
    for (const auto& ln : lines) {
        const auto& t = ln.tokens;
        if (t[0] == "function" && t.size() == 3)
            sig.functions[t[1]] = parse_int(t[2], ln.number);
        else if (t[0] == "relation" && t.size() == 3)
            sig.relations[t[1]] = parse_int(t[2], ln.number);
        else if (t[0] == "constant" && t.size() == 2)
            sig.constants.insert(t[1]);
        else
            fail(ln.number, "unknown signature clause '" + t[0] + "'");
    }
    sig.validate();
    return sig;
}

FinGroup build_group(const std::vector<Line>& lines) {
    std::vector<std::string> names;
    std::vector<std::tuple<std::string, std::string, std::string, int>> rows;
    for (const auto& ln : lines) {
        const auto& t = ln.tokens;
        if (t[0] == "elements")
            names.insert(names.end(), t.begin() + 1, t.end());
        else if (t[0] == "mul" && t.size() == 4)
            rows.push_back({t[1], t[2], t[3], ln.number});
        else
            fail(ln.number, "unknown group clause '" + t[0] + "'");
    }
    auto index = [&](const std::string& n, int line) {
        auto it = std::find(names.begin(), names.end(), n);
        if (it == names.end()) fail(line, "unknown group element '" + n + "'");
        return static_cast<int>(it - names.begin());
    };
    std::vector<std::vector<int>> mul(names.size(), std::vector<int>(names.size(), -1));
    for (const auto& [a, b, c, line] : rows) mul[index(a, line)][index(b, line)] = index(c, line);
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = 0; j < names.size(); ++j)
            if (mul[i][j] < 0)
                throw ParseError("group table missing " + names[i] + " * " + names[j]);
    return FinGroup::from_table(std::move(names), std::move(mul));
}

FinStructure build_structure(const std::vector<Line>& lines, const Document& doc,
                             std::optional<GAction>& action_out) {
    FinStructure m;
    const FinGroup* group = nullptr;
    std::vector<std::tuple<std::string, std::string, std::string, int>> act_rows;
    bool have_sig = false;
    for (const auto& ln : lines) {
        const auto& t = ln.tokens;
        if (t[0] == "signature" && t.size() == 2) {
            m.sig = resolve(doc.signatures, t[1], "signature", ln.number);
            have_sig = true;
        } else if (t[0] == "elements") {
            m.elem_names.insert(m.elem_names.end(), t.begin() + 1, t.end());
        } else if (t[0] == "constant" && t.size() == 3) {
            auto e = m.elem_by_name(t[2]);
            if (!e) fail(ln.number, "unknown element '" + t[2] + "'");
            m.const_interp[t[1]] = *e;
        } else if (t[0] == "function" && t.size() == 4) {
            if (!have_sig) fail(ln.number, "signature must precede interpretations");
            auto args = split_group(t[2], ln.number);
            auto it = m.sig.functions.find(t[1]);
            if (it == m.sig.functions.end()) fail(ln.number, "unknown function '" + t[1] + "'");
            if (static_cast<int>(args.size()) != it->second) fail(ln.number, "arity mismatch");
            FunTable& table = m.fun_interp[t[1]];
            if (table.values.empty()) {
                table.arity = it->second;
                table.universe_size = m.size();
                std::size_t total = 1;
                for (int k = 0; k < table.arity; ++k) total *= static_cast<std::size_t>(m.size());
                table.values.assign(total, -1);
            }
            Tuple tup;
            for (const auto& a : args) {
                auto e = m.elem_by_name(a);
                if (!e) fail(ln.number, "unknown element '" + a + "'");
                tup.push_back(*e);
            }
            auto val = m.elem_by_name(t[3]);
            if (!val) fail(ln.number, "unknown element '" + t[3] + "'");
            table.values[FunTable::index_of(tup, m.size())] = *val;
        } else if (t[0] == "relation" && t.size() == 3) {
            auto args = split_group(t[2], ln.number);
            Tuple tup;
            for (const auto& a : args) {
                auto e = m.elem_by_name(a);
                if (!e) fail(ln.number, "unknown element '" + a + "'");
                tup.push_back(*e);
            }
            m.rel_interp[t[1]].insert(tup);
        } else if (t[0] == "action" && t.size() == 2) {
            group = &resolve(doc.groups, t[1], "group", ln.number);
        } else if (t[0] == "act" && t.size() == 4) {
            act_rows.push_back({t[1], t[2], t[3], ln.number});
        } else {
            fail(ln.number, "unknown structure clause '" + t[0] + "'");
        }
    }
    if (!have_sig) throw ParseError("structure block needs a signature clause");
    for (const auto& [r, k] : m.sig.relations)
        m.rel_interp.try_emplace(r);
    for (const auto& [f, tab] : m.fun_interp)
        for (Elem v : tab.values)
            if (v < 0) throw ParseError("function '" + f + "' table is incomplete");
    m.validate();

    if (group) {
        GAction act;
        act.group = *group;
        act.act.assign(group->size(), std::vector<Elem>(m.size(), -1));
        for (const auto& [g, x, y, line] : act_rows) {
            auto gi = std::find(group->elem_names.begin(), group->elem_names.end(), g);
            if (gi == group->elem_names.end()) fail(line, "unknown group element '" + g + "'");
            auto xe = m.elem_by_name(x), ye = m.elem_by_name(y);
            if (!xe || !ye) fail(line, "unknown element in act clause");
            act.act[gi - group->elem_names.begin()][*xe] = *ye;
        }
        for (auto& row : act.act)
            for (Elem& v : row)
                if (v < 0) throw ParseError("action table is incomplete");
        act.validate(m.size());
        action_out = std::move(act);
    } else if (!act_rows.empty()) {
        throw ParseError("act clauses need an action group");
    }
    return m;
}

FinTopology build_topology_block(const std::vector<Line>& lines) {
    std::vector<std::string> points;
    std::vector<std::vector<std::string>> gens;
    for (const auto& ln : lines) {
        const auto& t = ln.tokens;
        if (t[0] == "points")
            points.insert(points.end(), t.begin() + 1, t.end());
        else if (t[0] == "open" && t.size() == 2)
            gens.push_back(split_group(t[1], ln.number));
        else
            fail(ln.number, "unknown topology clause '" + t[0] + "'");
    }
    std::vector<PointSet> gensets;
    for (const auto& g : gens) {
        PointSet s = 0;
        for (const auto& p : g) {
            auto it = std::find(points.begin(), points.end(), p);
            if (it == points.end()) throw ParseError("unknown point '" + p + "'");
            s |= PointSet(1) << (it - points.begin());
        }
        gensets.push_back(s);
    }
    return build_topology(points, gensets);
}

PresheafOfGStructures build_presheaf(const std::vector<Line>& lines, const Document& doc,
                                     std::optional<long long>& sequence_modulus) {
    // fixture form first
    for (const auto& ln : lines) {
        if (ln.tokens[0] != "fixture") continue;
        const auto& t = ln.tokens;
        std::map<std::string, std::vector<std::string>> kv;
        std::string key;
        for (std::size_t i = 2; i < t.size(); ++i) {
            if (std::isalpha(static_cast<unsigned char>(t[i][0])) &&
                (t[i] == "modulus" || t[i] == "base" || t[i] == "subgroup" || t[i] == "size")) {
                key = t[i];
                kv[key];
            } else if (!key.empty()) {
                kv[key].push_back(t[i]);
            } else {
                fail(ln.number, "unexpected fixture token '" + t[i] + "'");
            }
        }
        if (t[1] == "sequence-sheaf") {
            if (!kv.count("modulus") || kv["modulus"].size() != 1 || !kv.count("base") ||
                kv["base"].size() != 1)
                fail(ln.number, "sequence-sheaf needs modulus and base");
            int n = parse_int(kv["modulus"][0], ln.number);
            int base = parse_int(kv["base"][0], ln.number);
            std::vector<int> gens;
            for (const auto& g : kv["subgroup"]) gens.push_back(parse_int(g, ln.number));
            std::vector<std::string> points;
            for (int i = 0; i < base; ++i) points.push_back(std::to_string(i));
            sequence_modulus = n;
            return sequence_sheaf(zmod_structure(n), zmod_translation_action(n, gens), points);
        }
        if (t[1] == "graph-presheaf") {
            if (!kv.count("size") || kv["size"].size() != 1) fail(ln.number, "graph-presheaf needs size");
            return graph_presheaf(parse_int(kv["size"][0], ln.number));
        }
        fail(ln.number, "unknown fixture '" + t[1] + "'");
    }

    PresheafOfGStructures p;
    const FinGroup* group = nullptr;
    bool have_top = false, have_sig = false;
    std::vector<std::tuple<std::string, std::string, int>> fiber_rows;
    std::vector<std::tuple<std::string, std::string, std::vector<std::string>, int>> restr_rows;
    for (const auto& ln : lines) {
        const auto& t = ln.tokens;
        if (t[0] == "topology" && t.size() == 2) {
            p.topology = resolve(doc.topologies, t[1], "topology", ln.number);
            have_top = true;
        } else if (t[0] == "signature" && t.size() == 2) {
            p.sig = resolve(doc.signatures, t[1], "signature", ln.number);
            have_sig = true;
        } else if (t[0] == "group" && t.size() == 2) {
            group = &resolve(doc.groups, t[1], "group", ln.number);
        } else if (t[0] == "fiber" && t.size() == 3) {
            fiber_rows.push_back({t[1], t[2], ln.number});
        } else if (t[0] == "restrict" && t.size() >= 3) {
            std::vector<std::string> pairs(t.begin() + 3, t.end());
            restr_rows.push_back({t[1], t[2], pairs, ln.number});
        } else {
            fail(ln.number, "unknown presheaf clause '" + t[0] + "'");
        }
    }
    if (!have_top || !have_sig) throw ParseError("presheaf block needs topology and signature");

    for (const auto& [setTok, structName, line] : fiber_rows) {
        PointSet s = parse_point_set(setTok, p.topology, line);
        int idx = p.topology.open_index(s);
        if (idx < 0) fail(line, "fiber set is not open");
        const FinStructure& m = resolve(doc.structures, structName, "structure", line);
        if (!(m.sig == p.sig)) fail(line, "fiber structure has a different signature");
        p.fibers[idx] = m;
        auto ai = doc.structure_actions.find(structName);
        if (group) {
            if (ai == doc.structure_actions.end())
                fail(line, "fiber structure '" + structName + "' has no action of the group");
            p.actions[idx] = ai->second;
        } else {
            p.actions[idx] = GAction::trivial(m.size());
        }
    }
    // identity restrictions are implicit
    for (int u : p.nonempty_open_indices()) {
        if (!p.fibers.count(u)) continue;
        std::vector<Elem> id(p.fibers[u].size());
        std::iota(id.begin(), id.end(), 0);
        p.restrictions[{u, u}] = std::move(id);
    }
    for (const auto& [uTok, vTok, pairs, line] : restr_rows) {
        int u = p.topology.open_index(parse_point_set(uTok, p.topology, line));
        int v = p.topology.open_index(parse_point_set(vTok, p.topology, line));
        if (u < 0 || v < 0) fail(line, "restriction endpoints are not open");
        if (!p.fibers.count(u) || !p.fibers.count(v)) fail(line, "restriction endpoints lack fibers");
        std::vector<Elem> map(p.fibers[u].size(), -1);
        for (const auto& pr : pairs) {
            auto xy = split_group(pr, line);
            if (xy.size() != 2) fail(line, "restriction pairs are (src dst)");
            auto x = p.fibers[u].elem_by_name(xy[0]);
            auto y = p.fibers[v].elem_by_name(xy[1]);
            if (!x || !y) fail(line, "unknown element in restriction pair");
            map[*x] = *y;
        }
        for (Elem e : map)
            if (e < 0) fail(line, "restriction map is incomplete");
        p.restrictions[{u, v}] = std::move(map);
    }
    p.check_complete();
    return p;
}

OpenFilter build_filter(const std::vector<Line>& lines, const Document& doc) {
    const FinTopology* top = nullptr;
    std::vector<std::pair<std::string, int>> members;
    std::optional<std::pair<std::string, int>> principal;
    for (const auto& ln : lines) {
        const auto& t = ln.tokens;
        if (t[0] == "topology" && t.size() == 2)
            top = &resolve(doc.topologies, t[1], "topology", ln.number);
        else if (t[0] == "member" && t.size() == 2)
            members.push_back({t[1], ln.number});
        else if (t[0] == "principal" && t.size() == 2)
            principal = {t[1], ln.number};
        else
            fail(ln.number, "unknown filter clause '" + t[0] + "'");
    }
    if (!top) throw ParseError("filter block needs a topology");
    if (principal) {
        PointSet o = parse_point_set(principal->first, *top, principal->second);
        return principal_filter(*top, o);
    }
    OpenFilter f;
    f.topology = *top;
    for (const auto& [tok, line] : members) f.members.push_back(parse_point_set(tok, *top, line));
    std::sort(f.members.begin(), f.members.end());
    f.validate();
    return f;
}

StructMorphism build_morphism(const std::vector<Line>& lines, const Document& doc) {
    const FinStructure* from = nullptr;
    const FinStructure* to = nullptr;
    std::vector<std::tuple<std::string, std::string, int>> rows;
    for (const auto& ln : lines) {
        const auto& t = ln.tokens;
        if (t[0] == "from" && t.size() == 2)
            from = &resolve(doc.structures, t[1], "structure", ln.number);
        else if (t[0] == "to" && t.size() == 2)
            to = &resolve(doc.structures, t[1], "structure", ln.number);
        else if (t[0] == "map" && t.size() == 3)
            rows.push_back({t[1], t[2], ln.number});
        else
            fail(ln.number, "unknown morphism clause '" + t[0] + "'");
    }
    if (!from || !to) throw ParseError("morphism block needs from and to");
    StructMorphism m;
    m.source = *from;
    m.target = *to;
    m.map.assign(from->size(), -1);
    for (const auto& [x, y, line] : rows) {
        auto xe = from->elem_by_name(x);
        auto ye = to->elem_by_name(y);
        if (!xe || !ye) fail(line, "unknown element in map clause");
        m.map[*xe] = *ye;
    }
    for (Elem e : m.map)
        if (e < 0) throw ParseError("morphism map is incomplete");
    m.validate();
    return m;
}

DifferentialPresheaf build_differential(const std::vector<Line>& lines, Document& doc,
                                        const std::map<std::string, long long>& seq_moduli) {
    std::optional<long long> modulus;
    std::vector<long long> eigenvalues;
    std::string presheaf_name;
    for (const auto& ln : lines) {
        const auto& t = ln.tokens;
        if (t[0] == "presheaf" && t.size() == 2)
            presheaf_name = t[1];
        else if (t[0] == "modulus" && t.size() == 2)
            modulus = parse_int(t[1], ln.number);
        else if (t[0] == "eigenvalues") {
            for (std::size_t i = 1; i < t.size(); ++i)
                eigenvalues.push_back(parse_int(t[i], ln.number));
        } else
            fail(ln.number, "unknown differential clause '" + t[0] + "'");
    }
    if (eigenvalues.empty()) throw ParseError("differential block needs eigenvalues");
    if (!presheaf_name.empty()) {
        auto it = seq_moduli.find(presheaf_name);
        if (it == seq_moduli.end())
            throw ParseError("differential needs a sequence-sheaf presheaf, '" + presheaf_name +
                             "' is not one");
        modulus = it->second;
        const PresheafOfGStructures& p = doc.presheaves.at(presheaf_name);
        if (static_cast<int>(eigenvalues.size()) != p.topology.point_count())
            throw ParseError("one eigenvalue per base point required");
    }
    if (!modulus) throw ParseError("differential block needs a modulus or a presheaf");
    DifferentialPresheaf dp = diagonal_differential_presheaf(*modulus, eigenvalues);
    return dp;
}

} // namespace

const PresheafOfGStructures& Document::presheaf(const std::string& name) const {
    if (!name.empty()) {
        auto it = presheaves.find(name);
        if (it != presheaves.end()) return it->second;
        auto dt = differentials.find(name);
        if (dt != differentials.end()) return dt->second.presheaf;
        throw ValidationError("unknown presheaf '" + name + "'");
    }
    if (presheaves.size() == 1) return presheaves.begin()->second;
    if (presheaves.empty() && differentials.size() == 1)
        return differentials.begin()->second.presheaf;
    throw ValidationError("document needs exactly one presheaf, or name one explicitly");
}

const DifferentialPresheaf& Document::differential(const std::string& name) const {
    if (!name.empty()) {
        auto it = differentials.find(name);
        if (it == differentials.end()) throw ValidationError("unknown differential '" + name + "'");
        return it->second;
    }
    if (differentials.size() == 1) return differentials.begin()->second;
    throw ValidationError("document needs exactly one differential, or name one explicitly");
}

Document parse_document(const std::string& text) {
    Document doc;
    std::map<std::string, long long> seq_moduli;

    std::vector<Line> lines;
    {
        std::istringstream ss(text);
        std::string raw;
        int number = 0;
        while (std::getline(ss, raw)) {
            ++number;
            auto toks = tokenize_line(raw, number);
            if (!toks.empty()) lines.push_back({number, std::move(toks)});
        }
    }

    std::size_t i = 0;
    while (i < lines.size()) {
        const Line& head = lines[i];
        const auto& t = head.tokens;
        if (t[0] == "formula") {
            if (t.size() != 4 || t[3].front() != '"')
                fail(head.number, "formula syntax: formula NAME SIGNATURE \"text\"");
            const LanguageSig& sig = resolve(doc.signatures, t[2], "signature", head.number);
            std::string body = t[3].substr(1, t[3].size() - 2);
            doc.formulas[t[1]] = parse_formula(body, sig);
            doc.formula_sigs[t[1]] = t[2];
            ++i;
            continue;
        }
        if (t.size() != 3 || t[2] != "{")
            fail(head.number, "expected a block header 'kind name {'");
        const std::string kind = t[0], name = t[1];
        std::vector<Line> body;
        ++i;
        while (i < lines.size() && !(lines[i].tokens.size() == 1 && lines[i].tokens[0] == "}"))
            body.push_back(lines[i++]);
        if (i == lines.size()) fail(head.number, "unterminated block '" + name + "'");
        ++i;  // consume '}'

        try {
            if (kind == "signature") {
                doc.signatures[name] = build_signature(body);
            } else if (kind == "group") {
                doc.groups[name] = build_group(body);
            } else if (kind == "structure") {
                std::optional<GAction> act;
                doc.structures[name] = build_structure(body, doc, act);
                if (act) doc.structure_actions[name] = std::move(*act);
            } else if (kind == "topology") {
                doc.topologies[name] = build_topology_block(body);
            } else if (kind == "presheaf") {
                std::optional<long long> modulus;
                doc.presheaves[name] = build_presheaf(body, doc, modulus);
                if (modulus) seq_moduli[name] = *modulus;
            } else if (kind == "filter") {
                doc.filters[name] = build_filter(body, doc);
            } else if (kind == "morphism") {
                doc.morphisms[name] = build_morphism(body, doc);
            } else if (kind == "differential") {
                doc.differentials[name] = build_differential(body, doc, seq_moduli);
            } else {
                fail(head.number, "unknown block kind '" + kind + "'");
            }
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            fail(head.number, std::string(e.what()) + " (in block '" + name + "')");
        }
    }
    return doc;
}

// -------------------------------------------------------------------------
// Emission
// -------------------------------------------------------------------------

std::string emit_signature(const std::string& name, const LanguageSig& sig) {
    std::string out = "signature " + name + " {\n";
    for (const auto& [f, a] : sig.functions) out += "  function " + f + " " + std::to_string(a) + "\n";
    for (const auto& [r, a] : sig.relations) out += "  relation " + r + " " + std::to_string(a) + "\n";
    for (const auto& c : sig.constants) out += "  constant " + c + "\n";
    return out + "}\n";
}

std::string emit_group(const std::string& name, const FinGroup& g) {
    std::string out = "group " + name + " {\n  elements";
    for (const auto& n : g.elem_names) out += " " + n;
    out += "\n";
    for (int a = 0; a < g.size(); ++a)
        for (int b = 0; b < g.size(); ++b)
            out += "  mul " + g.elem_names[a] + " " + g.elem_names[b] + " " +
                   g.elem_names[g.mul[a][b]] + "\n";
    return out + "}\n";
}

std::string emit_structure(const std::string& name, const std::string& sig_name,
                           const FinStructure& m, const GAction* action,
                           const std::string& group_name) {
    std::string out = "structure " + name + " {\n  signature " + sig_name + "\n  elements";
    for (const auto& n : m.elem_names) out += " " + n;
    out += "\n";
    for (const auto& [c, e] : m.const_interp) out += "  constant " + c + " " + m.name_of(e) + "\n";
    for (const auto& [f, table] : m.fun_interp) {
        for (const auto& tup : all_tuples(m.size(), table.arity)) {
            out += "  function " + f + " (";
            for (std::size_t k = 0; k < tup.size(); ++k) out += (k ? " " : "") + m.name_of(tup[k]);
            out += ") " + m.name_of(table.apply(tup)) + "\n";
        }
    }
    for (const auto& [r, tuples] : m.rel_interp) {
        for (const auto& tup : tuples) {
            out += "  relation " + r + " (";
            for (std::size_t k = 0; k < tup.size(); ++k) out += (k ? " " : "") + m.name_of(tup[k]);
            out += ")\n";
        }
    }
    if (action) {
        out += "  action " + group_name + "\n";
        for (int g = 0; g < action->group.size(); ++g)
            for (Elem x = 0; x < m.size(); ++x)
                out += "  act " + action->group.elem_names[g] + " " + m.name_of(x) + " " +
                       m.name_of(action->apply(g, x)) + "\n";
    }
    return out + "}\n";
}

std::string emit_topology(const std::string& name, const FinTopology& t) {
    std::string out = "topology " + name + " {\n  points";
    for (const auto& p : t.point_names) out += " " + p;
    out += "\n";
    for (PointSet o : t.opens) {
        if (o == 0 || o == t.full_set()) continue;
        out += "  open {";
        bool first = true;
        for (int i = 0; i < t.point_count(); ++i)
            if (o & (PointSet(1) << i)) {
                out += (first ? "" : " ") + t.point_names[i];
                first = false;
            }
        out += "}\n";
    }
    return out + "}\n";
}

std::string fixture_document(const std::string& kind, const std::vector<std::string>& params) {
    auto need_int = [&](std::size_t i, const std::string& what) {
        if (i >= params.size()) throw ValidationError("fixture needs " + what);
        return std::stoi(params[i]);
    };
    if (kind == "simplex" || kind == "boundary") {
        int n = need_int(0, "a dimension");
        bool strict = true;
        for (std::size_t i = 1; i < params.size(); ++i)
            if (params[i] == "nonstrict") strict = false;
        SimplexFixture fx = simplex_fixture(n, kind == "boundary", strict);
        std::string gname = "sym" + std::to_string(n);
        std::string sname = (kind == "boundary" ? "boundary" : "simplex") + std::to_string(n);
        std::string out = emit_signature("poset", fx.structure.sig);
        out += emit_group(gname, fx.action.group);
        out += emit_structure(sname, "poset", fx.structure, &fx.action, gname);
        return out;
    }
    if (kind == "sequence-sheaf") {
        int n = need_int(0, "a modulus");
        int base = need_int(1, "a base size");
        std::string out = "presheaf seq {\n  fixture sequence-sheaf modulus " + std::to_string(n) +
                          " base " + std::to_string(base);
        if (params.size() > 2) {
            out += " subgroup";
            for (std::size_t i = 2; i < params.size(); ++i) out += " " + params[i];
        }
        return out + "\n}\n";
    }
    if (kind == "graph-presheaf") {
        int n = need_int(0, "a vertex count");
        return "presheaf graphs {\n  fixture graph-presheaf size " + std::to_string(n) + "\n}\n";
    }
    throw ValidationError("unknown fixture kind '" + kind + "'");
}

} // namespace sforcer
