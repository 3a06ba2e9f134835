#include "checkers.hpp"
#include "doctest.h"
#include "effho/chain.hpp"

using namespace effho;
using testutil::shape_is;

namespace {

// circle: one vertex, one loop
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

// real projective plane: v, e, f with df = 2e
ChainComplex rp2() {
    return ChainComplex(
        "RP2",
        [](const GenKey& g) {
            return (g.degree == 0 && g.id == "v") || (g.degree == 1 && g.id == "e") ||
                   (g.degree == 2 && g.id == "f");
        },
        [](const GenKey& g) {
            FormalChain out;
            if (g.degree == 2) out.add({1, "e"}, 2);
            return out;
        },
        [](int d) {
            std::vector<GenKey> out;
            if (d == 0) out.push_back({0, "v"});
            if (d == 1) out.push_back({1, "e"});
            if (d == 2) out.push_back({2, "f"});
            return out;
        });
}

void check_dd_zero(const ChainComplex& c, int max_degree) {
    for (int d = 0; d <= max_degree; ++d)
        for (const GenKey& g : c.basis(d)) {
            INFO("dd on ", g.id, " @", g.degree);
            CHECK(c.diff(c.diff(g)).is_zero());
        }
}

}  // namespace

TEST_CASE("formal chains strip zeros and order deterministically") {
    FormalChain c;
    c.add({0, "a"}, 2);
    c.add({0, "a"}, -2);
    CHECK(c.is_zero());
    c.add({1, "b"}, 1);
    c.add({0, "z"}, 3);
    auto it = c.begin();
    CHECK(it->first.id == "z");  // degree 0 first
    CHECK(c.to_string() == "3*z@0 + 1*b@1");
}

TEST_CASE("point and spheres") {
    HomologyResult h0 = homology(point_complex(), 0);
    CHECK(shape_is(h0.group, 1));
    CHECK(homology(point_complex(), 1).group.is_trivial());

    ChainComplex s1 = circle();
    CHECK(shape_is(homology(s1, 0).group, 1));
    CHECK(shape_is(homology(s1, 1).group, 1));

    ChainComplex p = rp2();
    check_dd_zero(p, 3);
    CHECK(shape_is(homology(p, 0).group, 1));
    CHECK(shape_is(homology(p, 1).group, 0, {2}));
    CHECK(homology(p, 2).group.is_trivial());
}

TEST_CASE("homology representatives are cycles that decide back") {
    ChainComplex p = rp2();
    HomologyResult h = homology(p, 1);
    REQUIRE(h.representatives.size() == 1);
    CHECK(p.diff(h.representatives[0]).is_zero());
    CHECK(!h.representatives[0].is_zero());
}

TEST_CASE("direct sum") {
    ChainComplex two = direct_sum({point_complex(), point_complex()});
    CHECK(shape_is(homology(two, 0).group, 2));
    ChainComplex ss = direct_sum({circle(), circle()});
    CHECK(shape_is(homology(ss, 1).group, 2));
    CHECK(ss.basis(0).size() == 2);
    // sum with the zero complex keeps the counts
    ChainComplex padded = direct_sum({circle(), zero_complex()});
    CHECK(padded.basis(0).size() == 1);
    CHECK(padded.basis(1).size() == 1);
}

TEST_CASE("tensor") {
    ChainComplex t = tensor(circle(), circle());
    check_dd_zero(t, 3);
    CHECK(t.basis(0).size() == 1);
    CHECK(t.basis(1).size() == 2);
    CHECK(t.basis(2).size() == 1);
    CHECK(shape_is(homology(t, 0).group, 1));
    CHECK(shape_is(homology(t, 1).group, 2));
    CHECK(shape_is(homology(t, 2).group, 1));

    // unit: C (x) point has C's basis counts
    ChainComplex unit = tensor(rp2(), point_complex());
    for (int d = 0; d <= 2; ++d) CHECK(unit.basis(d).size() == rp2().basis(d).size());
    CHECK(shape_is(homology(unit, 1).group, 0, {2}));

    // Koszul sign: d(e (x) e) = de (x) e - e (x) de = 0 for cycles e
    GenKey ee = t.basis(2)[0];
    CHECK(t.diff(ee).is_zero());
}

TEST_CASE("tensor with torsion matches Kunneth oracle") {
    // RP2 x RP2: H_0 = Z, H_1 = Z/2 + Z/2, H_2 = Z/2, H_3 = Z/2
    ChainComplex t = tensor(rp2(), rp2());
    check_dd_zero(t, 5);
    CHECK(shape_is(homology(t, 0).group, 1));
    CHECK(shape_is(homology(t, 1).group, 0, {2, 2}));
    CHECK(shape_is(homology(t, 2).group, 0, {2}));
    CHECK(shape_is(homology(t, 3).group, 0, {2}));
    // cross-check against the long long elimination oracle
    for (int d = 0; d <= 4; ++d)
        CHECK(testutil::shape_of(homology(t, d).group) == testutil::oracle_homology(t, d));
}

TEST_CASE("suspension") {
    ChainComplex s0 = suspend(circle(), 0);
    CHECK(shape_is(homology(s0, 1).group, 1));

    ChainComplex pt2 = suspend(point_complex(), 2);
    CHECK(homology(pt2, 0).group.is_trivial());
    CHECK(homology(pt2, 1).group.is_trivial());
    CHECK(shape_is(homology(pt2, 2).group, 1));

    ChainComplex s1 = suspend(circle(), 1);
    CHECK(shape_is(homology(s1, 1).group, 1));
    CHECK(shape_is(homology(s1, 2).group, 1));
    CHECK(homology(s1, 0).group.is_trivial());

    // suspension squares to a differential: sign scaling keeps dd = 0
    ChainComplex sp = suspend(rp2(), 3);
    check_dd_zero(sp, 6);
    CHECK(shape_is(homology(sp, 4).group, 0, {2}));
}

TEST_CASE("graded family sum") {
    // family: part(k) = point chains shifted to degree k
    ChainComplex fam = direct_sum_family(
        "fam", [](int k) { return suspend(point_complex(), k); },
        [](int degree) { return degree + 1; });
    for (int d = 0; d <= 3; ++d) CHECK(fam.basis(d).size() == 1);
    check_dd_zero(fam, 3);
    // and a family with growing parts: part(k) = k-fold shifted circle
    ChainComplex fam2 = direct_sum_family(
        "fam2", [](int k) { return suspend(circle(), k); },
        [](int degree) { return degree + 1; });
    CHECK(fam2.basis(0).size() == 1);   // circle vertex only
    for (int d = 1; d <= 4; ++d) CHECK(fam2.basis(d).size() == 2);
}

TEST_CASE("chain maps") {
    ChainComplex s1 = circle();
    ChainMap id = ChainMap::identity(s1);
    GenKey e{1, "e"};
    CHECK(id.apply_gen(e) == FormalChain::single(e));

    // degree map of multiplication by 3 on the loop
    ChainMap triple(s1, s1, 0, [](const GenKey& g) {
        FormalChain out;
        out.add(g, g.degree == 1 ? 3 : 1);
        return out;
    });
    ChainMap nine = triple.compose_after(triple);
    CHECK(nine.apply_gen(e).coeff(e) == 9);
    CHECK((triple - triple).apply_gen(e).is_zero());
    CHECK(triple.scaled(2).apply_gen(e).coeff(e) == 6);

    IntMatrix m = map_matrix(triple, s1.basis(1), s1.basis(1));
    CHECK(m == IntMatrix(1, 1, {3}));
}

TEST_CASE("non effective complexes refuse enumeration") {
    ChainComplex lazy("lazy", [](const GenKey& g) { return g.degree >= 0; },
                      [](const GenKey&) { return FormalChain(); });
    CHECK(!lazy.effective());
    CHECK_THROWS_AS(lazy.basis(0), UnsupportedError);
    CHECK(lazy.in_basis({3, "anything"}));
}
