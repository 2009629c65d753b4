// sheaf-forcer: validate documents, evaluate the forcing relation,
// enumerate filters, build generic models, run the equivalence sweep and
// print cohomology tables.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sforcer/document.hpp"
#include "sforcer/fixtures.hpp"

using nlohmann::json;
using namespace sforcer;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;
constexpr int kExitBound = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void render_human(const json& j, std::ostream& os, int indent = 0) {
    std::string pad(indent, ' ');
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            if (v.is_object() || v.is_array()) {
                os << pad << k << ":\n";
                render_human(v, os, indent + 2);
            } else {
                os << pad << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
            }
        }
    } else if (j.is_array()) {
        for (const auto& v : j) {
            if (v.is_object() || v.is_array()) {
                os << pad << "-\n";
                render_human(v, os, indent + 2);
            } else {
                os << pad << "- " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
            }
        }
    } else {
        os << pad << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
}

void print_report(const json& j, bool as_json) {
    if (as_json)
        std::cout << j.dump(2) << "\n";
    else
        render_human(j, std::cout);
}

json violations_json(const ViolationReport& report) {
    json arr = json::array();
    for (const auto& v : report) arr.push_back({{"condition", v.condition}, {"detail", v.detail}});
    return arr;
}

PointSet parse_open_arg(const FinTopology& t, std::string arg) {
    if (!arg.empty() && arg.front() == '{') arg = arg.substr(1, arg.size() - 2);
    PointSet s = 0;
    std::istringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) s |= PointSet(1) << t.point_by_name(item);
    return s;
}

OpenFilter parse_filter_arg(const Document& doc, const FinTopology& t, const std::string& arg) {
    auto it = doc.filters.find(arg);
    if (it != doc.filters.end()) return it->second;
    if (arg.rfind("principal:", 0) == 0) {
        PointSet o = parse_open_arg(t, arg.substr(10));
        return principal_filter(t, o);
    }
    if (arg.rfind("maximal:", 0) == 0) {
        auto all = maximal_open_filters(t);
        std::size_t k = std::stoul(arg.substr(8));
        if (k >= all.size()) throw ValidationError("only " + std::to_string(all.size()) +
                                                   " maximal filters exist");
        return all[k];
    }
    throw ValidationError("unknown filter '" + arg + "' (use a name, principal:SET or maximal:K)");
}

int default_sweep_depth(int fallback) {
    if (const char* env = std::getenv("SHEAF_FORCER_SWEEP_DEPTH")) {
        try {
            return std::stoi(env);
        } catch (...) {
            throw ValidationError("SHEAF_FORCER_SWEEP_DEPTH is not a number");
        }
    }
    return fallback;
}

Formula resolve_formula(const Document& doc, const LanguageSig& sig, const std::string& arg) {
    auto it = doc.formulas.find(arg);
    if (it != doc.formulas.end()) return it->second;
    return parse_formula(arg, sig);
}

// ---------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------

int cmd_validate(const std::string& path, bool as_json, bool diagonal) {
    Document doc = parse_document(read_file(path));
    json report;
    bool violated = false;

    json structures = json::object();
    for (const auto& [name, m] : doc.structures) {
        json entry;
        entry["elements"] = m.size();
        auto ai = doc.structure_actions.find(name);
        if (ai != doc.structure_actions.end()) {
            GCheckOptions opts;
            opts.rel_mode = diagonal ? RelInvariance::Diagonal : RelInvariance::Independent;
            auto plain = check_g_structure(m, ai->second, opts);
            opts.strong = true;
            auto strong = check_g_structure(m, ai->second, opts);
            entry["g_structure_violations"] = violations_json(plain);
            entry["strong_g_structure_violations"] = violations_json(strong);
            if (!plain.empty() && !strong.empty()) violated = true;
        }
        structures[name] = entry;
    }
    report["structures"] = structures;

    json morphisms = json::object();
    for (const auto& [name, m] : doc.morphisms) {
        MorphismFlags flags = classify_morphism(m);
        morphisms[name] = {{"is_morphism", flags.is_morphism},
                           {"is_transfitted", flags.is_transfitted},
                           {"is_embedding", flags.is_embedding},
                           {"is_submersion", flags.is_submersion},
                           {"is_iso", flags.is_iso}};
        if (!flags.is_morphism) violated = true;
    }
    report["morphisms"] = morphisms;

    json presheaves = json::object();
    for (const auto& [name, p] : doc.presheaves) {
        auto rep = validate_presheaf(p);
        auto ex = check_exactness(p);
        presheaves[name] = {{"violations", violations_json(rep)},
                            {"exact", ex.exact},
                            {"coherent", ex.coherent}};
        if (!rep.empty()) violated = true;
    }
    report["presheaves"] = presheaves;

    json differentials = json::object();
    for (const auto& [name, dp] : doc.differentials) {
        auto rep = validate_differential(dp);
        json entry = {{"violations", violations_json(rep.violations)}};
        if (rep.order) entry["order"] = *rep.order;
        differentials[name] = entry;
        if (!rep.violations.empty()) violated = true;
    }
    report["differentials"] = differentials;

    report["status"] = violated ? "violations" : "ok";
    print_report(report, as_json);
    return violated ? kExitViolation : kExitOk;
}

int cmd_force(const std::string& path, const std::string& point, const std::string& open_arg,
              const std::string& formula_arg, const std::string& section_arg,
              const std::string& mode, const std::string& presheaf_name, bool as_json) {
    Document doc = parse_document(read_file(path));
    const PresheafOfGStructures& p = doc.presheaf(presheaf_name);

    ForcingOptions opts;
    if (mode == "literal")
        opts.mode = ForcingMode::PaperLiteral;
    else if (mode == "variant")
        opts.mode = ForcingMode::CaicedoVariant;
    else
        throw ValidationError("mode must be literal or variant");
    ForcingContext ctx(p, opts);

    int x = p.topology.point_by_name(point);
    PointSet u = parse_open_arg(p.topology, open_arg);
    int u_idx = p.topology.open_index(u);
    if (u_idx < 0) throw ValidationError("'" + open_arg + "' is not an open set");

    Formula phi = resolve_formula(doc, p.sig, formula_arg);
    SectionTuple a{u_idx, {}};
    {
        std::istringstream ss(section_arg);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) {
                auto e = p.fiber(u_idx).elem_by_name(item);
                if (!e) throw ValidationError("unknown fiber element '" + item + "'");
                a.elems.push_back(*e);
            }
    }

    bool forced = ctx.forces_at(x, a, phi);
    PointSet locus = ctx.forcing_locus(a, phi);
    json report = {{"formula", phi.to_string()},
                   {"mode", mode},
                   {"point", point},
                   {"open", p.topology.set_to_string(u)},
                   {"forced_at_point", forced},
                   {"locus", p.topology.set_to_string(locus)},
                   {"forced_on_open", locus == u},
                   {"locus_is_open", p.topology.is_open(locus)}};
    print_report(report, as_json);
    return kExitOk;
}

int cmd_filters(const std::string& path, int depth, const std::string& presheaf_name, bool as_json) {
    Document doc = parse_document(read_file(path));
    const PresheafOfGStructures& p = doc.presheaf(presheaf_name);
    ForcingContext ctx(p);

    GenericityOptions gopts;
    gopts.formula_space.max_ops = depth;

    bool failure = false;
    json filters = json::array();
    for (const auto& f : maximal_open_filters(p.topology)) {
        json members = json::array();
        for (PointSet m : f.members) members.push_back(p.topology.set_to_string(m));
        GenericityResult g = is_generic_filter(ctx, f, gopts);
        json entry = {{"members", members},
                      {"minimal_member", p.topology.set_to_string(f.minimal_member())},
                      {"generic", g.generic},
                      {"decidability_checks", g.decidability_checks},
                      {"witness_checks", g.witness_checks}};
        if (!g.generic) {
            entry["failing_instance"] = g.failing_instance;
            failure = true;
        }
        filters.push_back(entry);
    }
    json report = {{"bounds", {{"max_ops", gopts.formula_space.max_ops},
                               {"max_binary", gopts.formula_space.max_binary}}},
                   {"maximal_filters", filters}};
    report["status"] = failure ? "non-generic maximal filter" : "ok";
    print_report(report, as_json);
    return failure ? kExitViolation : kExitOk;
}

int cmd_generic_model(const std::string& path, const std::string& filter_arg,
                      const std::string& presheaf_name, bool as_json) {
    Document doc = parse_document(read_file(path));
    const PresheafOfGStructures& p = doc.presheaf(presheaf_name);
    ForcingContext ctx(p);
    OpenFilter f = parse_filter_arg(doc, p.topology, filter_arg);
    GenericModel gm = generic_model(ctx, f);

    json elems = json::array();
    for (const auto& n : gm.structure.elem_names) elems.push_back(n);
    json members = json::array();
    for (PointSet m : f.members) members.push_back(p.topology.set_to_string(m));
    json report = {{"filter_members", members},
                   {"minimal_member", p.topology.set_to_string(f.minimal_member())},
                   {"size", gm.structure.size()},
                   {"elements", elems},
                   {"group", gm.action ? json(gm.action->group.size()) : json(1)}};
    GCheckOptions strong;
    strong.strong = true;
    if (gm.action) {
        report["g_structure_violations"] = violations_json(check_g_structure(gm.structure, *gm.action, {}));
        report["strong_violations"] = violations_json(check_g_structure(gm.structure, *gm.action, strong));
    }
    print_report(report, as_json);
    return kExitOk;
}

int cmd_gmt(const std::string& path, const std::string& filter_arg, int depth,
            const std::string& mode, const std::string& presheaf_name, bool as_json) {
    Document doc = parse_document(read_file(path));
    const PresheafOfGStructures& p = doc.presheaf(presheaf_name);

    ForcingOptions fopts;
    fopts.mode = mode == "variant" ? ForcingMode::CaicedoVariant : ForcingMode::PaperLiteral;
    ForcingContext ctx(p, fopts);
    OpenFilter f = parse_filter_arg(doc, p.topology, filter_arg);
    GenericModel gm = generic_model(ctx, f);

    FormulaEnumOptions eopts;
    eopts.max_ops = depth;
    auto formulas = enumerate_formulas(p.sig, eopts);

    int checked = 0;
    json failures = json::array();
    for (const auto& phi : formulas) {
        int arity = static_cast<int>(analyze_formula(phi).free_vars.size());
        for (PointSet u : f.members) {
            int u_idx = p.topology.open_index(u);
            for (const auto& tup : all_tuples(p.fiber(u_idx).size(), arity)) {
                SectionTuple a{u_idx, tup};
                GmtResult r = verify_generic_model_theorem(ctx, gm, phi, a);
                ++checked;
                if (!r.all_equal()) {
                    json sect = json::array();
                    for (Elem e : tup) sect.push_back(p.fiber(u_idx).name_of(e));
                    failures.push_back({{"formula", phi.to_string()},
                                        {"open", p.topology.set_to_string(u)},
                                        {"section", sect},
                                        {"s1", r.s1},
                                        {"s2", r.s2},
                                        {"s3", r.s3}});
                }
            }
        }
    }
    json report = {{"bounds", {{"max_ops", eopts.max_ops}, {"max_binary", eopts.max_binary}}},
                   {"mode", mode},
                   {"formulas", formulas.size()},
                   {"instances_checked", checked},
                   {"failures", failures},
                   {"status", failures.empty() ? "ok" : "inequalities found"}};
    print_report(report, as_json);
    return failures.empty() ? kExitOk : kExitViolation;
}

int cmd_cohomology(const std::string& path, int amplitude, const std::string& filter_arg,
                   const std::string& diff_name, bool as_json) {
    Document doc = parse_document(read_file(path));
    const DifferentialPresheaf& dp = doc.differential(diff_name);
    OpenFilter f = parse_filter_arg(doc, dp.presheaf.topology, filter_arg);

    DifferentialReport vrep = validate_differential(dp);
    if (!vrep.violations.empty())
        throw ValidationError(vrep.violations.front().condition + ": " +
                              vrep.violations.front().detail);
    int order = vrep.order.value_or(0);

    json lines = json::array();
    json table = json::object();
    if (amplitude > 0) {
        GenericCohomology h = generic_cohomology(dp, f, amplitude);
        std::string line = "H_" + std::to_string(amplitude) + ": " + h.decomposition.to_string();
        lines.push_back(line);
        table["H_" + std::to_string(amplitude)] = h.decomposition.to_string();
        table["kernel_order"] = h.kernel_order;
        table["image_order"] = h.image_order;
    } else if (order <= 2) {
        GenericCohomology h = generic_cohomology(dp, f);
        lines.push_back("H: " + h.decomposition.to_string());
        table["H"] = h.decomposition.to_string();
        table["kernel_order"] = h.kernel_order;
        table["image_order"] = h.image_order;
    } else {
        for (int m = 1; m <= order - 1; ++m) {
            GenericCohomology h = generic_cohomology(dp, f, m);
            lines.push_back("H_" + std::to_string(m) + ": " + h.decomposition.to_string());
            table["H_" + std::to_string(m)] = h.decomposition.to_string();
        }
    }

    if (as_json) {
        json members = json::array();
        for (PointSet m : f.members) members.push_back(dp.presheaf.topology.set_to_string(m));
        json report = {{"order", order}, {"filter_members", members}, {"table", table}};
        std::cout << report.dump(2) << "\n";
    } else {
        for (const auto& l : lines) std::cout << l.get<std::string>() << "\n";
    }
    return kExitOk;
}

int cmd_fixtures(const std::string& kind, const std::vector<std::string>& params) {
    std::cout << fixture_document(kind, params);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite sheaf semantics: forcing, generic models and cohomology"};
    app.require_subcommand(1);

    bool as_json = false;

    std::string doc_path, point, open_arg, formula_arg, section_arg, filter_arg;
    std::string mode = "literal", presheaf_name, diff_name;
    bool diagonal = false;
    int depth = default_sweep_depth(2);
    int amplitude = 0;
    std::vector<std::string> fixture_params;
    std::string fixture_kind;

    auto* validate = app.add_subcommand("validate", "run every structural validator in a document");
    validate->add_flag("--json", as_json, "emit the report as JSON");
    validate->add_option("doc", doc_path)->required();
    validate->add_flag("--diagonal", diagonal, "check relation invariance with one diagonal element");

    auto* force = app.add_subcommand("force", "evaluate the pointwise forcing relation");
    force->add_flag("--json", as_json, "emit the report as JSON");
    force->add_option("doc", doc_path)->required();
    force->add_option("--point", point)->required();
    force->add_option("--open", open_arg)->required();
    force->add_option("--formula", formula_arg)->required();
    force->add_option("--section", section_arg, "comma-separated fiber elements");
    force->add_option("--mode", mode, "literal or variant");
    force->add_option("--presheaf", presheaf_name);

    auto* filters = app.add_subcommand("filters", "maximal open filters and their genericity");
    filters->add_flag("--json", as_json, "emit the report as JSON");
    filters->add_option("doc", doc_path)->required();
    filters->add_option("--depth", depth, "formula space bound");
    filters->add_option("--presheaf", presheaf_name);

    auto* gmodel = app.add_subcommand("generic-model", "build and print the colimit model");
    gmodel->add_flag("--json", as_json, "emit the report as JSON");
    gmodel->add_option("doc", doc_path)->required();
    gmodel->add_option("--filter", filter_arg)->required();
    gmodel->add_option("--presheaf", presheaf_name);

    auto* gmt = app.add_subcommand("gmt", "three-way equivalence sweep over a bounded formula space");
    gmt->add_flag("--json", as_json, "emit the report as JSON");
    gmt->add_option("doc", doc_path)->required();
    gmt->add_option("--filter", filter_arg)->required();
    gmt->add_option("--sweep", depth, "formula space bound");
    gmt->add_option("--mode", mode, "literal or variant");
    gmt->add_option("--presheaf", presheaf_name);

    auto* cohomology = app.add_subcommand("cohomology", "generic cohomology tables");
    cohomology->add_flag("--json", as_json, "emit the report as JSON");
    cohomology->add_option("doc", doc_path)->required();
    cohomology->add_option("--amplitude", amplitude);
    cohomology->add_option("--filter", filter_arg);
    cohomology->add_option("--differential", diff_name);

    auto* fixtures = app.add_subcommand("fixtures", "emit a generated document");
    fixtures->add_option("kind", fixture_kind, "simplex | boundary | sequence-sheaf | graph-presheaf")
        ->required();
    fixtures->add_option("params", fixture_params, "fixture parameters");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(validate)) return cmd_validate(doc_path, as_json, diagonal);
        if (app.got_subcommand(force))
            return cmd_force(doc_path, point, open_arg, formula_arg, section_arg, mode,
                             presheaf_name, as_json);
        if (app.got_subcommand(filters)) return cmd_filters(doc_path, depth, presheaf_name, as_json);
        if (app.got_subcommand(gmodel))
            return cmd_generic_model(doc_path, filter_arg, presheaf_name, as_json);
        if (app.got_subcommand(gmt))
            return cmd_gmt(doc_path, filter_arg, depth, mode, presheaf_name, as_json);
        if (app.got_subcommand(cohomology)) {
            if (filter_arg.empty()) filter_arg = "maximal:0";
            return cmd_cohomology(doc_path, amplitude, filter_arg, diff_name, as_json);
        }
        if (app.got_subcommand(fixtures)) return cmd_fixtures(fixture_kind, fixture_params);
    } catch (const BoundExceeded& e) {
        std::cerr << "bound exceeded: " << e.what() << "\n";
        return kExitBound;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
