#include <doctest.h>

#include "sforcer/sheaf.hpp"

using namespace sforcer;

namespace {

FinStructure two_elem_rel() {
    FinStructure m;
    m.sig.relations["R"] = 1;
    m.elem_names = {"p", "q"};
    m.rel_interp["R"] = {{0}};
    m.validate();
    return m;
}

} // namespace

TEST_CASE("constant presheaf validates") {
    FinTopology sp = build_topology({"a", "b"}, {0b01});
    FinStructure m = two_elem_rel();
    PresheafOfGStructures p = constant_presheaf(sp, m, GAction::trivial(2));
    CHECK(validate_presheaf(p).empty());
}

TEST_CASE("broken functoriality is reported with the triple") {
    FinTopology chain = build_topology({"a", "b", "c"}, {0b001, 0b011});
    FinStructure m = two_elem_rel();
    PresheafOfGStructures p = constant_presheaf(chain, m, GAction::trivial(2));
    // swap the long edge X -> {a}
    int x_idx = p.topology.open_index(0b111);
    int a_idx = p.topology.open_index(0b001);
    p.restrictions[{x_idx, a_idx}] = {1, 0};
    auto report = validate_presheaf(p);
    REQUIRE(!report.empty());
    bool named = false;
    for (const auto& v : report)
        if (v.condition == "functoriality" && v.detail.find("{a}") != std::string::npos) named = true;
    CHECK(named);
}

TEST_CASE("sequence sheaf over Z_12") {
    FinStructure z12 = zmod_structure(12);
    GAction sub06 = zmod_translation_action(12, {6});
    PresheafOfGStructures p = sequence_sheaf(z12, sub06, {"0", "1"});

    int full = p.topology.open_index(0b11);
    CHECK(p.fiber(full).size() == 144);

    // restrictions are surjective
    for (int u : p.nonempty_open_indices())
        for (int v : p.nonempty_open_indices()) {
            if ((p.topology.opens[v] & p.topology.opens[u]) != p.topology.opens[v]) continue;
            std::set<Elem> image(p.restrict_map(u, v).begin(), p.restrict_map(u, v).end());
            CHECK(static_cast<int>(image.size()) == p.fiber(v).size());
        }

    CHECK(validate_presheaf(p).empty());

    GCheckOptions strong;
    strong.strong = true;
    for (int u : p.nonempty_open_indices())
        CHECK(check_g_structure(p.fiber(u), p.action(u), strong).empty());
}

TEST_CASE("section restriction is componentwise and functorial") {
    FinStructure z10 = zmod_structure(10);
    PresheafOfGStructures p = sequence_sheaf(z10, GAction::trivial(10), {"0", "1", "2"});
    int full = p.topology.open_index(0b111);
    int mid = p.topology.open_index(0b010);

    // the sequence (5,7,9) at {0,1,2}; first coordinate varies slowest
    Elem s = 5 * 100 + 7 * 10 + 9;
    SectionTuple a{full, {s}};
    SectionTuple to_mid = restrict_section(p, a, mid);
    CHECK(p.fiber(mid).name_of(to_mid.elems[0]) == "7");

    SectionTuple same = restrict_section(p, a, full);
    CHECK(same == a);

    // restricting in two hops equals one hop
    int pair01 = p.topology.open_index(0b011);
    SectionTuple hop = restrict_section(p, restrict_section(p, a, pair01), mid);
    CHECK(hop == to_mid);

    CHECK_THROWS_AS(restrict_section(p, to_mid, full), ValidationError);
    CHECK_THROWS_AS(restrict_section(p, a, p.topology.open_index(0)), ValidationError);
}

TEST_CASE("graph presheaf shapes and restriction") {
    PresheafOfGStructures g2 = graph_presheaf(2);
    int full = g2.topology.open_index(0b11);
    int v0 = g2.topology.open_index(0b01);
    CHECK(g2.fiber(full).size() == 2);
    CHECK(g2.fiber(v0).size() == 1);

    PresheafOfGStructures g3 = graph_presheaf(3);
    int x = g3.topology.open_index(0b111);
    CHECK(g3.fiber(x).size() == 8);
    int pair01 = g3.topology.open_index(0b011);
    CHECK(g3.fiber(pair01).size() == 2);
    // dropping vertex 2 keeps exactly the {0,1} edge bit; that pair is
    // listed first at the full open
    for (Elem e = 0; e < 8; ++e)
        CHECK(g3.restrict_elem(x, pair01, e) == (e & 1));
    CHECK(validate_presheaf(g3).empty());
}

TEST_CASE("stalks collapse to the minimal-neighborhood fiber") {
    FinStructure z5 = zmod_structure(5);
    PresheafOfGStructures p = sequence_sheaf(z5, GAction::trivial(5), {"0", "1"});
    StalkResult st = stalk_at(p, 0);
    CHECK(st.stalk.size() == 5);

    FinTopology sp = build_topology({"a", "b"}, {0b01});
    PresheafOfGStructures cp = constant_presheaf(sp, two_elem_rel(), GAction::trivial(2));
    StalkResult at_b = stalk_at(cp, 1);
    CHECK(at_b.stalk.size() == 2);  // U_b is the whole space

    // germs are restriction invariant
    int full = p.topology.open_index(0b11);
    int left = p.topology.open_index(0b01);
    for (Elem e = 0; e < p.fiber(full).size(); ++e) {
        SectionTuple s{full, {e}};
        SectionTuple r = restrict_section(p, s, left);
        CHECK(st.germ_tuple(s) == st.germ_tuple(r));
    }
}

TEST_CASE("exactness and coherence") {
    // graphs glue but not uniquely
    PresheafOfGStructures g3 = graph_presheaf(3);
    ExactnessReport rg = check_exactness(g3);
    CHECK(rg.exact);
    CHECK_FALSE(rg.coherent);
    CHECK(!rg.coherent_witness.empty());

    // sequence sheaves glue uniquely by pointwise assembly
    FinStructure z3 = zmod_structure(3);
    PresheafOfGStructures seq = sequence_sheaf(z3, GAction::trivial(3), {"0", "1"});
    ExactnessReport rs = check_exactness(seq);
    CHECK(rs.exact);
    CHECK(rs.coherent);

    // pointwise assembly oracle: any family over the singleton cover
    // has exactly one gluing
    int full = seq.topology.open_index(0b11);
    int l = seq.topology.open_index(0b01);
    int r = seq.topology.open_index(0b10);
    for (Elem sl = 0; sl < 3; ++sl)
        for (Elem sr = 0; sr < 3; ++sr) {
            int count = 0;
            Elem found = -1;
            for (Elem s = 0; s < 9; ++s)
                if (seq.restrict_elem(full, l, s) == sl && seq.restrict_elem(full, r, s) == sr) {
                    ++count;
                    found = s;
                }
            CHECK(count == 1);
            CHECK(found == sl * 3 + sr);
        }

    // constant fibers over a space whose opens pairwise meet glue
    // uniquely; over a disconnected space a two-point cover blocks gluing
    FinTopology chain = build_topology({"a", "b"}, {0b01});
    PresheafOfGStructures cc = constant_presheaf(chain, two_elem_rel(), GAction::trivial(2));
    ExactnessReport rc = check_exactness(cc);
    CHECK(rc.exact);
    CHECK(rc.coherent);

    FinTopology disc = build_topology({"a", "b"}, {0b01, 0b10});
    PresheafOfGStructures cd = constant_presheaf(disc, two_elem_rel(), GAction::trivial(2));
    ExactnessReport rd = check_exactness(cd);
    CHECK_FALSE(rd.exact);
}
