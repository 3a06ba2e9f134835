#include "checkers.hpp"
#include "doctest.h"
#include "effho/ez.hpp"
#include "effho/reduction.hpp"

using namespace effho;
using testutil::shape_is;

namespace {

LESpace circle_space() {
    SimplexKey vv{{}, "v", 0};
    return finite_space("S1", {{0, {"v"}}, {1, {"e"}}}, {{"e", {vv, vv}}});
}

void verify_ez(const LESpace& x, const LESpace& y, int max_degree) {
    Reduction r = ez_reduction(x, y);
    CheckReport rep = verify_reduction(r, basis_probes(r.top, max_degree),
                                       basis_probes(r.bottom, max_degree));
    INFO(rep.witness);
    CHECK(rep.ok);
}

}  // namespace

TEST_CASE("interval squared, exhaustive") { verify_ez(standard_simplex(1), standard_simplex(1), 4); }

TEST_CASE("triangle times interval, exhaustive") {
    verify_ez(standard_simplex(2), standard_simplex(1), 5);
}

TEST_CASE("torus, exhaustive") { verify_ez(circle_space(), circle_space(), 4); }

TEST_CASE("circle times triangle, exhaustive") {
    verify_ez(circle_space(), standard_simplex(2), 5);
}

TEST_CASE("factors with a point collapse to an isomorphism") {
    LESpace pt = point_space();
    LESpace s1 = circle_space();
    Reduction r = ez_reduction(pt, s1);
    CheckReport rep = verify_reduction(r, basis_probes(r.top, 4), basis_probes(r.bottom, 4));
    INFO(rep.witness);
    CHECK(rep.ok);
    // alpha and beta are mutually inverse bijections on basis generators,
    // and the homotopy vanishes identically
    for (int d = 0; d <= 3; ++d)
        for (const GenKey& g : r.top.basis(d)) {
            CHECK(r.eta.apply_gen(g).is_zero());
            FormalChain a = r.alpha.apply_gen(g);
            CHECK(a.size() == 1);
            CHECK(r.beta.apply(a) == FormalChain::single(g));
        }
    Reduction r2 = ez_reduction(s1, pt);
    for (int d = 0; d <= 3; ++d)
        for (const GenKey& g : r2.top.basis(d)) CHECK(r2.eta.apply_gen(g).is_zero());
}

TEST_CASE("homology through the reduction matches the product complex") {
    LESpace pairs[][2] = {{standard_simplex(1), standard_simplex(1)},
                          {circle_space(), circle_space()},
                          {circle_space(), standard_simplex(2)}};
    for (auto& [x, y] : pairs) {
        Reduction r = ez_reduction(x, y);
        for (int d = 0; d <= 3; ++d) {
            auto top = testutil::shape_of(homology(r.top, d).group);
            auto bottom = testutil::shape_of(homology(r.bottom, d).group);
            CHECK(top == bottom);
        }
    }
    // torus values, frozen
    Reduction torus = ez_reduction(circle_space(), circle_space());
    CHECK(shape_is(homology(torus.bottom, 0).group, 1));
    CHECK(shape_is(homology(torus.bottom, 1).group, 2));
    CHECK(shape_is(homology(torus.bottom, 2).group, 1));
}

TEST_CASE("alpha is natural in the first factor") {
    LESpace s1 = circle_space();
    LESpace pt = point_space();
    SimplicialMap collapse(s1, pt, [](const std::string&, int dim) {
        SimplexKey k{{}, "*", 0};
        while (k.dim() < dim) k = insert_degeneracy(k, 0);
        return k;
    });

    Reduction rs = ez_reduction(s1, s1);
    Reduction rp = ez_reduction(pt, s1);

    LESpace dom_prod = product_space(s1, s1);
    LESpace cod_prod = product_space(pt, s1);
    SimplicialMap fx1 = product_map(collapse, SimplicialMap::identity(s1), dom_prod, cod_prod);
    ChainMap top_push = chains_of_map(fx1, rs.top, rp.top);

    // tensor-side pushforward: collapse on the left tensor factor
    ChainComplex cpt = normalized_chains(pt);
    ChainComplex cs1 = normalized_chains(s1);
    ChainMap left_push = chains_of_map(collapse, cs1, cpt);
    ChainMap bottom_push(rs.bottom, rp.bottom, 0, [left_push](const GenKey& g) {
        auto parts = keyenc::parse_node(g.id);
        int p = std::stoi(parts.fields[0]);
        FormalChain out;
        FormalChain img = left_push.apply_gen({p, parts.fields[1]});
        for (const auto& [ig, c] : img)
            out.add({g.degree, keyenc::node("t", {parts.fields[0], ig.id, parts.fields[2]})}, c);
        return out;
    });

    for (int d = 0; d <= 3; ++d)
        for (const GenKey& g : rs.top.basis(d)) {
            INFO("naturality at ", g.id, " @", g.degree);
            CHECK(rp.alpha.apply(top_push.apply_gen(g)) ==
                  bottom_push.apply(rs.alpha.apply_gen(g)));
            // and the homotopy is natural as well
            CHECK(rp.eta.apply(top_push.apply_gen(g)) == top_push.apply(rs.eta.apply_gen(g)));
        }
}

TEST_CASE("shuffle signs on the interval pair") {
    // beta(0.1 (x) 0.1) = (s1 a, s0 b) - (s0 a, s1 b)
    Reduction r = ez_reduction(standard_simplex(1), standard_simplex(1));
    GenKey g{2, keyenc::node("t", {"1", "0.1", "0.1"})};
    FormalChain b = r.beta.apply_gen(g);
    CHECK(b.size() == 2);
    Int plus = 0, minus = 0;
    for (const auto& [k, c] : b) (c > 0 ? plus : minus) += c;
    CHECK(plus == 1);
    CHECK(minus == -1);
    // alpha beta = id on it
    CHECK(r.alpha.apply(b) == FormalChain::single(g));
}
