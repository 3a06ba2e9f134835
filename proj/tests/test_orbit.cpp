#include "checkers.hpp"
#include "doctest.h"
#include "effho/orbit.hpp"

#include <array>

using namespace effho;
using testutil::shape_is;

namespace {

FiniteGroup z2() { return FiniteGroup({"e", "s"}, {{0, 1}, {1, 0}}); }

FiniteGroup z3() {
    return FiniteGroup({"e", "r", "rr"}, {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}});
}

FiniteGroup s3() {
    // permutations of three letters, composed left to right through arrays
    std::vector<std::array<int, 3>> perms = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                                             {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
    std::vector<std::string> names = {"e", "r", "rr", "a", "b", "c"};
    auto index_of = [&perms](const std::array<int, 3>& p) {
        for (size_t i = 0; i < perms.size(); ++i)
            if (perms[i] == p) return static_cast<int>(i);
        return -1;
    };
    std::vector<std::vector<int>> table(6, std::vector<int>(6));
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) {
            std::array<int, 3> ab{};
            for (int i = 0; i < 3; ++i) ab[i] = perms[a][perms[b][i]];
            table[a][b] = index_of(ab);
        }
    return FiniteGroup(std::move(names), std::move(table));
}

// two vertices, two edges both pointing away from nobody: p -a-> q -b-> p
LESpace two_circle() {
    SimplexKey p{{}, "p", 0}, q{{}, "q", 0};
    return finite_space("C2", {{0, {"p", "q"}}, {1, {"a", "b"}}},
                        {{"a", {q, p}}, {"b", {p, q}}});
}

SimplicialMap swap_map(const LESpace& x) {
    return SimplicialMap(x, x, [](const std::string& b, int d) {
        if (b == "p") return SimplexKey{{}, "q", 0};
        if (b == "q") return SimplexKey{{}, "p", 0};
        if (b == "a") return SimplexKey{{}, "b", 1};
        return SimplexKey{{}, "a", 1};
    });
}

}  // namespace

TEST_CASE("orbit category of the trivial group has one object and one morphism") {
    OrbitCategory oc = orbit_category(FiniteGroup({"e"}, {{0}}));
    CHECK(oc.cat->num_objects() == 1);
    CHECK(oc.cat->num_morphisms() == 1);
}

TEST_CASE("orbit category of the two element group") {
    OrbitCategory oc = orbit_category(z2());
    REQUIRE(oc.cat->num_objects() == 2);
    CHECK(oc.cat->object_name(0) == "G/e");
    CHECK(oc.cat->object_name(1) == "G/G");
    CHECK(oc.cat->hom(0, 0).size() == 2);
    CHECK(oc.cat->hom(0, 1).size() == 1);
    CHECK(oc.cat->hom(1, 0).size() == 0);
    CHECK(oc.cat->hom(1, 1).size() == 1);
    for (int o = 0; o < 2; ++o) CHECK(oc.rep_of[oc.cat->identity(o)] == 0);
    // the free orbit's two self maps form the group: s after s = e
    auto loops = oc.cat->hom(0, 0);
    int s = oc.rep_of[loops[0]] == 1 ? loops[0] : loops[1];
    CHECK(oc.cat->compose(s, s) == oc.cat->identity(0));
}

TEST_CASE("orbit category of the three element group") {
    OrbitCategory oc = orbit_category(z3());
    REQUIRE(oc.cat->num_objects() == 2);
    CHECK(oc.cat->hom(0, 0).size() == 3);
    CHECK(oc.cat->hom(1, 0).size() == 0);
    CHECK(oc.cat->hom(0, 1).size() == 1);
}

TEST_CASE("orbit category of the symmetric group passes the audit") {
    OrbitCategory oc = orbit_category(s3());
    // subgroups: e, three involutions, the rotation subgroup, S3
    REQUIRE(oc.cat->num_objects() == 6);
    CHECK(oc.subgroup_of[0].size() == 1);
    CHECK(oc.subgroup_of[5].size() == 6);
    // free orbit self maps = the whole group
    CHECK(oc.cat->hom(0, 0).size() == 6);
    // no map out of the fixed orbit except to itself
    for (int j = 0; j < 5; ++j) CHECK(oc.cat->hom(5, j).empty());
}

TEST_CASE("group space construction audits the action") {
    LESpace x = two_circle();
    FiniteGroup g = z2();
    CHECK_NOTHROW(GSpace(x, g, {SimplicialMap::identity(x), swap_map(x)}, 1));
    // collapsing is not an involution
    SimplicialMap collapse(x, x, [](const std::string&, int d) {
        return d == 0 ? SimplexKey{{}, "p", 0} : SimplexKey{{0}, "p", 0};
    });
    CHECK_THROWS_AS(GSpace(x, g, {SimplicialMap::identity(x), collapse}, 1), AuditError);
    // wrong dimension bound
    CHECK_THROWS_AS(GSpace(x, g, {SimplicialMap::identity(x), swap_map(x)}, 0),
                    AuditError);
    // wrong number of maps
    CHECK_THROWS_AS(GSpace(x, g, {SimplicialMap::identity(x)}, 1), AuditError);
}

TEST_CASE("trivial action fixes everything at every orbit") {
    LESpace x = two_circle();
    GSpace gx(x, z2(), {SimplicialMap::identity(x), SimplicialMap::identity(x)}, 1);
    FixedPoints fp = fixed_points(gx);
    for (int o = 0; o < 2; ++o) {
        CHECK(fp.diagram.at(o).nondeg(0).size() == 2);
        CHECK(fp.diagram.at(o).nondeg(1).size() == 2);
    }
    ChainDiagram c = chains_of_diagram(fp.diagram, 1);
    CHECK(shape_is(homology(c.at(0), 0).group, 1));
    CHECK(shape_is(homology(c.at(0), 1).group, 1));
}

TEST_CASE("free involution on the circle has empty total fixed points") {
    LESpace x = two_circle();
    GSpace gx(x, z2(), {SimplicialMap::identity(x), swap_map(x)}, 1);
    FixedPoints fp = fixed_points(gx);
    int free_orbit = fp.orbits.cat->object_index("G/e");
    int full_orbit = fp.orbits.cat->object_index("G/G");
    CHECK(fp.diagram.at(free_orbit).nondeg(0).size() == 2);
    CHECK(fp.diagram.at(free_orbit).nondeg(1).size() == 2);
    CHECK(fp.diagram.at(full_orbit).nondeg(0).empty());
    CHECK(fp.diagram.at(full_orbit).nondeg(1).empty());
    // the deck transformation shows up as the nonidentity self map of X^e
    auto loops = fp.diagram.index().hom(free_orbit, free_orbit);
    REQUIRE(loops.size() == 2);
    for (int f : loops) {
        SimplexKey img = fp.diagram.arrow(f).apply({{}, "a", 1});
        if (fp.orbits.rep_of[f] == 0)
            CHECK(img == SimplexKey{{}, "a", 1});
        else
            CHECK(img == SimplexKey{{}, "b", 1});
    }
    ChainDiagram c = chains_of_diagram(fp.diagram, 1);
    CHECK(shape_is(homology(c.at(free_orbit), 1).group, 1));
}

TEST_CASE("the group acting on itself is fixed only at the free orbit") {
    FiniteGroup g = z3();
    LESpace pts = finite_space("G", {{0, {"e", "r", "rr"}}}, {});
    std::vector<SimplicialMap> action;
    for (int a = 0; a < 3; ++a) {
        FiniteGroup gg = g;
        action.push_back(SimplicialMap(pts, pts, [gg, a](const std::string& b, int) {
            return SimplexKey{{}, gg.element_name(gg.mul(a, gg.element_index(b))), 0};
        }));
    }
    GSpace gx(pts, g, std::move(action), 0);
    FixedPoints fp = fixed_points(gx);
    CHECK(fp.diagram.at(0).nondeg(0).size() == 3);
    CHECK(fp.diagram.at(1).nondeg(0).empty());
}

TEST_CASE("reflection of the subdivided interval keeps the midpoint") {
    SimplexKey l{{}, "l", 0}, m{{}, "m", 0}, r{{}, "r", 0};
    // both edges point outward from the midpoint, so the flip is simplicial
    LESpace x = finite_space("I", {{0, {"l", "m", "r"}}, {1, {"a", "b"}}},
                             {{"a", {l, m}}, {"b", {r, m}}});
    SimplicialMap flip(x, x, [](const std::string& b, int d) {
        if (b == "l") return SimplexKey{{}, "r", 0};
        if (b == "r") return SimplexKey{{}, "l", 0};
        if (b == "a") return SimplexKey{{}, "b", 1};
        if (b == "b") return SimplexKey{{}, "a", 1};
        return SimplexKey{{}, "m", 0};
    });
    GSpace gx(x, z2(), {SimplicialMap::identity(x), flip}, 1);
    FixedPoints fp = fixed_points(gx);
    int free_orbit = fp.orbits.cat->object_index("G/e");
    int full_orbit = fp.orbits.cat->object_index("G/G");
    CHECK(fp.diagram.at(full_orbit).nondeg(0).size() == 1);
    CHECK(fp.diagram.at(full_orbit).nondeg(1).empty());
    // the orbit map restricts to the inclusion of the fixed midpoint
    auto incl = fp.diagram.index().hom(full_orbit, free_orbit);
    REQUIRE(incl.size() == 1);
    CHECK(fp.diagram.arrow(incl[0]).apply({{}, "m", 0}) == SimplexKey{{}, "m", 0});
}
