#include "checkers.hpp"
#include "doctest.h"
#include "effho/diagram.hpp"
#include "effho/keyenc.hpp"

using namespace effho;
using testutil::shape_is;

namespace {

// a <- c -> b plus identities
FiniteCategoryPtr pushout_category() {
    std::vector<FiniteCategory::Morphism> ms = {
        {"ia", 0, 0}, {"ib", 1, 1}, {"ic", 2, 2}, {"f", 2, 0}, {"g", 2, 1}};
    std::vector<std::vector<int>> comp(5, std::vector<int>(5, -1));
    comp[0][0] = 0;
    comp[1][1] = 1;
    comp[2][2] = 2;
    comp[0][3] = 3;
    comp[3][2] = 3;
    comp[1][4] = 4;
    comp[4][2] = 4;
    return std::make_shared<FiniteCategory>(
        FiniteCategory({"a", "b", "c"}, std::move(ms), {0, 1, 2}, std::move(comp)));
}

FiniteCategoryPtr z2_monoid() {
    return std::make_shared<FiniteCategory>(
        FiniteCategory::from_group({"e", "s"}, {{0, 1}, {1, 0}}));
}

FiniteCategoryPtr terminal_cat() {
    return std::make_shared<FiniteCategory>(FiniteCategory::terminal());
}

ChainComplex circle() {
    return ChainComplex(
        "S1",
        [](const GenKey& g) {
            return (g.degree == 0 && g.id == "v") || (g.degree == 1 && g.id == "e");
        },
        [](const GenKey&) { return FormalChain(); },
        [](int d) {
            std::vector<GenKey> out;
            if (d == 0) out.push_back({0, "v"});
            if (d == 1) out.push_back({1, "e"});
            return out;
        });
}

}  // namespace

TEST_CASE("product category multiplies objects and homs componentwise") {
    auto p = product_category(pushout_category(), z2_monoid());
    CHECK(p->num_objects() == 3);
    CHECK(p->num_morphisms() == 10);
    auto pc = pushout_category();
    auto z2 = z2_monoid();
    for (int x = 0; x < pc->num_objects(); ++x)
        for (int y = 0; y < pc->num_objects(); ++y)
            CHECK(p->hom(x, y).size() == pc->hom(x, y).size() * 2);
    // (f, s) o (ic, s) = (f, e)
    int fs = p->morphism_index(keyenc::node("p", {"f", "s"}));
    int ics = p->morphism_index(keyenc::node("p", {"ic", "s"}));
    int fe = p->morphism_index(keyenc::node("p", {"f", "e"}));
    REQUIRE(fs >= 0);
    REQUIRE(ics >= 0);
    CHECK(p->compose(fs, ics) == fe);
}

TEST_CASE("functor constructor audits the assignment") {
    auto pc = pushout_category();
    CHECK_NOTHROW(Functor::identity(pc));
    CHECK_NOTHROW(Functor::to_terminal(pc));
    auto t = Functor::to_terminal(pc);
    CHECK(t.cod().num_objects() == 1);
    for (int f = 0; f < pc->num_morphisms(); ++f) CHECK(t.mor(f) == 0);

    auto z2 = z2_monoid();
    // swapping the identity with the involution breaks unit preservation
    CHECK_THROWS_AS(Functor(z2, z2, {0}, {1, 0}), AuditError);
    // collapsing everything onto the identity is a functor
    CHECK_NOTHROW(Functor(z2, z2, {0}, {0, 0}));
    // dom/cod mismatch: send f: c -> a to ib
    std::vector<int> mors = {0, 1, 2, 1, 4};
    CHECK_THROWS_AS(Functor(pc, pc, {0, 1, 2}, std::move(mors)), AuditError);
}

TEST_CASE("representable diagram over the terminal category is constant Z") {
    ChainDiagram d = representable(terminal_cat(), 0);
    CHECK(d.effective());
    CHECK(d.cellular());
    CHECK(d.at(0).basis(0).size() == 1);
    CHECK(d.at(0).basis(1).empty());
    CHECK(shape_is(homology(d.at(0), 0).group, 1));
    CHECK(d.cells(0).size() == 1);
    CHECK(d.cells(1).empty());
}

TEST_CASE("representable diagram over the two-element monoid has the regular action") {
    auto z2 = z2_monoid();
    ChainDiagram d = representable(z2, 0);
    auto basis = d.at(0).basis(0);
    REQUIRE(basis.size() == 2);
    int s = z2->morphism_index("s");
    CHECK(d.arrow(s).apply_gen({0, "e"}) == FormalChain::single({0, "s"}));
    CHECK(d.arrow(s).apply_gen({0, "s"}) == FormalChain::single({0, "e"}));
    CHECK(shape_is(homology(d.at(0), 0).group, 2));
}

TEST_CASE("representable diagram at the apex of the pushout shape is Z everywhere") {
    auto pc = pushout_category();
    ChainDiagram d = representable(pc, 2);
    for (int j = 0; j < 3; ++j) {
        CHECK(d.at(j).basis(0).size() == 1);
        CHECK(shape_is(homology(d.at(j), 0).group, 1));
    }
    CHECK(d.at(0).basis(0)[0].id == "f");
    CHECK(d.at(1).basis(0)[0].id == "g");
    CHECK(d.at(2).basis(0)[0].id == "ic");
}

TEST_CASE("representable ranks match hom cardinalities at every object") {
    for (auto idx : {pushout_category(), z2_monoid(), terminal_cat()})
        for (int i = 0; i < idx->num_objects(); ++i) {
            ChainDiagram d = representable(idx, i);
            for (int j = 0; j < idx->num_objects(); ++j)
                CHECK(d.at(j).basis(0).size() == idx->hom(i, j).size());
        }
}

TEST_CASE("cellular decomposition inverts the pushforwards exactly once") {
    auto pc = pushout_category();
    ChainDiagram d = representable(pc, 2);
    for (int j = 0; j < 3; ++j) {
        auto dec = cellular_decomposition(d, j, 0);
        REQUIRE(dec.size() == 1);
        for (const auto& [gen, origin] : dec) {
            auto cells = d.cells(0);
            FormalChain img = d.arrow(origin.mor).apply_gen(cells[origin.cell].gen);
            CHECK(img == FormalChain::single(gen));
        }
    }
    CHECK(cellular_decomposition(d, 0, 1).empty());
}

TEST_CASE("tensoring with point chains keeps each value isomorphic") {
    ChainDiagram base = representable(z2_monoid(), 0);
    ChainDiagram d = diagram_tensor_const(point_complex(), base, "ptz2");
    CHECK(d.at(0).basis(0).size() == 2);
    CHECK(d.at(0).basis(1).empty());
    CHECK(d.cellular());
    CHECK(d.cells(0).size() == 1);
    // rebuilding with the probe pass on re-checks functoriality of the arrows
    CHECK_NOTHROW(ChainDiagram(d.index_ptr(), {d.at(0)}, {d.arrow(0), d.arrow(1)}, 2));
}

TEST_CASE("circle times the rank-two orbit has rank-two homology in two degrees") {
    ChainDiagram base = representable(z2_monoid(), 0);
    ChainDiagram d = diagram_tensor_const(circle(), base, "s1z2");
    CHECK(shape_is(homology(d.at(0), 0).group, 2));
    CHECK(shape_is(homology(d.at(0), 1).group, 2));
    CHECK(shape_is(homology(d.at(0), 2).group, 0));
    auto dec0 = cellular_decomposition(d, 0, 0);
    auto dec1 = cellular_decomposition(d, 0, 1);
    CHECK(dec0.size() == 2);
    CHECK(dec1.size() == 2);
    CHECK_NOTHROW(ChainDiagram(d.index_ptr(), {d.at(0)}, {d.arrow(0), d.arrow(1)}, 2));
}

TEST_CASE("external tensor with a terminal factor matches the plain tensor") {
    auto pc = pushout_category();
    ChainDiagram a = representable(pc, 2);
    ChainDiagram b = representable(terminal_cat(), 0);
    ChainDiagram e = external_tensor(a, b, "ext");
    CHECK(e.index().num_objects() == 3);
    for (int j = 0; j < 3; ++j) {
        CHECK(e.at(j).basis(0).size() == a.at(j).basis(0).size());
        CHECK(shape_is(homology(e.at(j), 0).group, 1));
    }
    CHECK(e.cells(0).size() == 1);
}

TEST_CASE("external tensor of representables matches the representable of the product") {
    auto pc = pushout_category();
    auto z2 = z2_monoid();
    ChainDiagram e = external_tensor(representable(pc, 2), representable(z2, 0), "rr");
    ChainDiagram r = representable(product_category(pc, z2),
                                   pc->num_objects() * 0 + 2);  // object (c, *)
    REQUIRE(e.index().num_objects() == r.index().num_objects());
    for (int j = 0; j < e.index().num_objects(); ++j)
        CHECK(e.at(j).basis(0).size() == r.at(j).basis(0).size());
    for (int j = 0; j < e.index().num_objects(); ++j) {
        auto dec = cellular_decomposition(e, j, 0);
        CHECK(dec.size() == e.at(j).basis(0).size());
    }
}

TEST_CASE("external tensor multiplies basis cardinalities degreewise") {
    ChainDiagram a = diagram_tensor_const(circle(), representable(pushout_category(), 2));
    ChainDiagram b = representable(z2_monoid(), 0);
    ChainDiagram e = external_tensor(a, b);
    for (int x = 0; x < 3; ++x)
        for (int d = 0; d <= 2; ++d)
            CHECK(e.at(x * 1 + 0).basis(d).size() == a.at(x).basis(d).size() * 2);
}

TEST_CASE("degree slice produces an audited diagram of free groups") {
    auto pc = pushout_category();
    ChainDiagram d = diagram_tensor_const(circle(), representable(pc, 2));
    FEAbDiagram s0 = degree_slice(d, 0);
    FEAbDiagram s1 = degree_slice(d, 1);
    for (int j = 0; j < 3; ++j) {
        CHECK(shape_is(s0.at(j), 1));
        CHECK(shape_is(s1.at(j), 1));
    }
    int f = pc->morphism_index("f");
    auto img = s1.arrow(f).apply({1});
    CHECK(img.size() == 1);
    CHECK(img[0] == 1);
}

TEST_CASE("space diagrams audit simplicial functoriality on probes") {
    SimplexKey vv{{}, "v", 0};
    LESpace s1 = finite_space("S1", {{0, {"v"}}, {1, {"e"}}}, {{"e", {vv, vv}}});
    auto z2 = z2_monoid();

    LESpace two = finite_space("two", {{0, {"p", "q"}}}, {});
    SimplicialMap swap(two, two, [&two](const std::string& b, int) {
        return SimplexKey{{}, b == "p" ? "q" : "p", 0};
    });
    CHECK_NOTHROW(SpaceDiagram(z2, {two}, {SimplicialMap::identity(two), swap}));

    // collapsing onto p is not an involution, caught by the composite probe
    SimplicialMap collapse(two, two,
                           [](const std::string&, int) { return SimplexKey{{}, "p", 0}; });
    CHECK_THROWS_AS(SpaceDiagram(z2, {two}, {SimplicialMap::identity(two), collapse}),
                    AuditError);

    SpaceDiagram constant = constant_space_diagram(pushout_category(), s1);
    ChainDiagram chains = chains_of_diagram(constant, 2);
    CHECK(chains.effective());
    CHECK(shape_is(homology(chains.at(0), 1).group, 1));
}

TEST_CASE("chains of a swap diagram swap the basis") {
    auto z2 = z2_monoid();
    LESpace two = finite_space("two", {{0, {"p", "q"}}}, {});
    SimplicialMap swap(two, two, [](const std::string& b, int) {
        return SimplexKey{{}, b == "p" ? "q" : "p", 0};
    });
    SpaceDiagram x(z2, {two}, {SimplicialMap::identity(two), swap});
    ChainDiagram c = chains_of_diagram(x, 1);
    int s = z2->morphism_index("s");
    CHECK(c.arrow(s).apply_gen({0, "p"}) == FormalChain::single({0, "q"}));
}

TEST_CASE("tensor map acts factorwise on prebuilt tensor complexes") {
    ChainComplex c = circle();
    ChainComplex pt = point_complex();
    ChainMap incl(pt, c, 0,
                  [](const GenKey&) { return FormalChain::single({0, "v"}); });
    ChainComplex dom = tensor(c, pt, "cpt");
    ChainComplex cod = tensor(c, c, "cc");
    ChainMap m = tensor_map(ChainMap::identity(c), incl, dom, cod);
    GenKey in{1, keyenc::node("t", {"1", "e", "pt"})};
    GenKey out{1, keyenc::node("t", {"1", "e", "v"})};
    CHECK(m.apply_gen(in) == FormalChain::single(out));
    // degree shifts are rejected
    ChainMap shifted(pt, c, 1,
                     [](const GenKey&) { return FormalChain::single({1, "e"}); });
    CHECK_THROWS_AS(tensor_map(ChainMap::identity(c), shifted, dom, cod),
                    ComplexMismatchError);
}

TEST_CASE("objectwise identity spans verify as a diagram equivalence") {
    auto pc = pushout_category();
    ChainDiagram d = diagram_tensor_const(circle(), representable(pc, 2));
    std::vector<Equivalence> at;
    for (int j = 0; j < 3; ++j)
        at.push_back(equivalence_from_reduction(identity_reduction(d.at(j))));
    DiagramEquivalence e{d, d, at};
    auto rep = verify_diagram_equivalence(e, 2);
    CHECK(rep.ok);

    DiagramReduction r{d, d, {identity_reduction(d.at(0)), identity_reduction(d.at(1)),
                              identity_reduction(d.at(2))}};
    CHECK(verify_diagram_reduction(r, 2).ok);
}

TEST_CASE("tensoring a span with a constant factor verifies objectwise") {
    auto pc = pushout_category();
    ChainDiagram base = representable(pc, 2);
    std::vector<Equivalence> at;
    for (int j = 0; j < 3; ++j)
        at.push_back(equivalence_from_reduction(identity_reduction(base.at(j))));
    DiagramEquivalence de{base, base, at};
    Equivalence ce = equivalence_from_reduction(identity_reduction(circle()));
    DiagramEquivalence te = tensor_const_equivalence(ce, de, "t");
    auto rep = verify_diagram_equivalence(te, 2);
    CHECK(rep.ok);
    CHECK(shape_is(homology(te.right.at(0), 1).group, 1));
}
