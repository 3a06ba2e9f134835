#include "checkers.hpp"
#include "doctest.h"
#include "effho/holan.hpp"
#include "effho/keyenc.hpp"

#include <set>

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

LESpace circle_space() {
    return finite_space("S1", {{0, {"v"}}, {1, {"e"}}},
                        {{"e", {SimplexKey{{}, "v", 0}, SimplexKey{{}, "v", 0}}}});
}

LESpace two_points() { return finite_space("S0", {{0, {"u", "w"}}}, {}); }

// two points <- circle -> point collapses, value at the apex is the circle
SpaceDiagram pushout_sphere() {
    auto pc = pushout_category();
    LESpace pa = point_space();
    LESpace pb = point_space();
    LESpace s1 = circle_space();
    auto collapse = [](const LESpace& dom, const LESpace& cod) {
        return SimplicialMap(dom, cod,
                             [](const std::string&, int d) {
                                 SimplexKey k{{}, "*", 0};
                                 for (int i = d - 1; i >= 0; --i)
                                     k = insert_degeneracy(std::move(k), i);
                                 return k;
                             });
    };
    std::vector<SimplicialMap> arrows = {
        SimplicialMap::identity(pa), SimplicialMap::identity(pb),
        SimplicialMap::identity(s1), collapse(s1, pa), collapse(s1, pb)};
    return SpaceDiagram(pc, {pa, pb, s1}, std::move(arrows), 2);
}

SpaceDiagram point_over_z2() {
    auto z2 = z2_monoid();
    LESpace p = point_space();
    return SpaceDiagram(z2, {p}, {SimplicialMap::identity(p), SimplicialMap::identity(p)},
                        3);
}

SpaceDiagram swap_over_z2() {
    auto z2 = z2_monoid();
    LESpace s0 = two_points();
    SimplicialMap swap(s0, s0, [](const std::string& b, int) {
        return SimplexKey{{}, b == "u" ? "w" : "u", 0};
    });
    return SpaceDiagram(z2, {s0}, {SimplicialMap::identity(s0), std::move(swap)}, 3);
}

// every valid key of one dimension, degenerate ones included
std::vector<SimplexKey> all_keys(const LESpace& sp, int dim) {
    std::vector<SimplexKey> out;
    for (int mask = 0; mask < (1 << dim); ++mask) {
        std::vector<int> word;
        for (int i = dim - 1; i >= 0; --i)
            if (mask & (1 << i)) word.push_back(i);
        int m = dim - static_cast<int>(word.size());
        for (const std::string& b : sp.nondeg(m)) {
            SimplexKey k{word, b, m};
            if (sp.valid(k)) out.push_back(std::move(k));
        }
    }
    return out;
}

// one element of the double model: a chain with identities allowed, an
// anchor out of its endpoint, and a simplex of the value at its start
struct Raw {
    int i0;
    std::vector<int> chain;
    int g;
    SimplexKey x;
};

std::vector<Raw> raw_elements(const SpaceDiagram& x, const Functor& p, int j, int q) {
    const FiniteCategory& idx = x.index();
    std::vector<Raw> out;
    auto with_chain = [&](int i0, const std::vector<int>& chain, int end) {
        for (int g : p.cod().hom(p.obj(end), j))
            for (const SimplexKey& k : all_keys(x.at(i0), q))
                out.push_back({i0, chain, g, k});
    };
    if (q == 0) {
        for (int o = 0; o < idx.num_objects(); ++o) with_chain(o, {}, o);
        return out;
    }
    for (const auto& chain : idx.chains(q))
        with_chain(idx.morphism(chain.front()).dom, chain,
                   idx.morphism(chain.back()).cod);
    return out;
}

SimplexKey raw_key(const SpaceDiagram& x, const Functor& p, const Raw& r) {
    int q = r.x.dim();
    std::vector<int> t(static_cast<size_t>(q) + 1);
    for (int i = 0; i <= q; ++i) t[static_cast<size_t>(i)] = i;
    return bar_key(x, p, BarSimplex{r.i0, std::move(t), r.chain, r.g, r.x});
}

// face in both coordinates at once: the nerve-with-anchor face on the
// chain and the plain face on the value simplex
Raw raw_face(const SpaceDiagram& x, const Functor& p, const Raw& r, int k) {
    int q = r.x.dim();
    Raw out = r;
    out.x = x.at(r.i0).face(r.x, k);
    if (k == 0) {
        int f1 = r.chain.front();
        out.x = x.arrow(f1).apply(out.x);
        out.i0 = x.index().morphism(f1).cod;
        out.chain.erase(out.chain.begin());
    } else if (k == q) {
        out.g = p.cod().compose(r.g, p.mor(r.chain.back()));
        out.chain.pop_back();
    } else {
        out.chain[static_cast<size_t>(k) - 1] =
            x.index().compose(r.chain[static_cast<size_t>(k)],
                              r.chain[static_cast<size_t>(k) - 1]);
        out.chain.erase(out.chain.begin() + k);
    }
    return out;
}

void check_double_model(const SpaceDiagram& x, const Functor& p, int j, int max_dim) {
    LESpace h = holan_space(x, p, j);
    for (int q = 0; q <= max_dim; ++q) {
        std::vector<Raw> raws = raw_elements(x, p, j, q);
        std::set<SimplexKey> seen;
        int nondeg = 0;
        for (const Raw& r : raws) {
            SimplexKey k = raw_key(x, p, r);
            REQUIRE(h.valid(k));
            CHECK(seen.insert(k).second);
            if (k.nondegenerate()) ++nondeg;
            for (int i = 0; i <= q && q > 0; ++i) {
                SimplexKey lhs = h.face(k, i);
                SimplexKey rhs = raw_key(x, p, raw_face(x, p, r, i));
                CHECK(lhs == rhs);
            }
        }
        CHECK(nondeg == static_cast<int>(h.nondeg(q).size()));
    }
}

}  // namespace

TEST_CASE("collapsing a chain and taking faces commute in the double model") {
    SpaceDiagram x = pushout_sphere();
    Functor idf = Functor::identity(x.index_ptr());
    for (int j = 0; j < 3; ++j) check_double_model(x, idf, j, 3);
    check_double_model(x, Functor::to_terminal(x.index_ptr()), 0, 3);
}

TEST_CASE("the double model over a group action collapses the same way") {
    SpaceDiagram x = swap_over_z2();
    check_double_model(x, Functor::identity(x.index_ptr()), 0, 3);
    check_double_model(x, Functor::to_terminal(x.index_ptr()), 0, 4);
}

TEST_CASE("a point diagram over the order two group gives its classifying space") {
    SpaceDiagram x = point_over_z2();
    LESpace h = hocolim_space(x);
    for (int q = 0; q <= 5; ++q) CHECK(h.nondeg(q).size() == 1);

    Equivalence eq = hocolim_effective(x, finite_pointwise_eh(x));
    CHECK(shape_is(homology(eq.right.bottom, 0).group, 1));
    CHECK(shape_is(homology(eq.right.bottom, 1).group, 0, {2}));
    CHECK(shape_is(homology(eq.right.bottom, 2).group, 0));
    CHECK(shape_is(homology(eq.right.bottom, 3).group, 0, {2}));

    CheckReport rep = verify_equivalence(eq, basis_probes(eq.left.top, 3),
                                         basis_probes(eq.left.bottom, 3),
                                         basis_probes(eq.right.bottom, 3));
    INFO(rep.witness);
    CHECK(rep.ok);
}

TEST_CASE("two points glued along a circle carry the homology of a sphere") {
    SpaceDiagram x = pushout_sphere();
    Equivalence eq = hocolim_effective(x, finite_pointwise_eh(x));
    CHECK(shape_is(homology(eq.right.bottom, 0).group, 1));
    CHECK(shape_is(homology(eq.right.bottom, 1).group, 0));
    CHECK(shape_is(homology(eq.right.bottom, 2).group, 1));
    CHECK(shape_is(homology(eq.right.bottom, 3).group, 0));

    CheckReport rep = verify_equivalence(eq, basis_probes(eq.left.top, 3),
                                         basis_probes(eq.left.bottom, 3),
                                         basis_probes(eq.right.bottom, 3));
    INFO(rep.witness);
    CHECK(rep.ok);
}

TEST_CASE("a free orbit of two points has a contractible quotient model") {
    SpaceDiagram x = swap_over_z2();
    Equivalence eq = hocolim_effective(x, finite_pointwise_eh(x));
    CHECK(shape_is(homology(eq.right.bottom, 0).group, 1));
    CHECK(shape_is(homology(eq.right.bottom, 1).group, 0));
    CHECK(shape_is(homology(eq.right.bottom, 2).group, 0));
    CHECK(shape_is(homology(eq.right.bottom, 3).group, 0));
}

TEST_CASE("the collapsed total complex squares to zero") {
    for (SpaceDiagram x : {pushout_sphere(), point_over_z2()}) {
        ChainComplex c = normalized_chains(hocolim_space(x));
        for (int q = 1; q <= 4; ++q)
            for (const GenKey& g : c.basis(q)) CHECK(c.diff(c.diff(g)).is_zero());
    }
}

TEST_CASE("extension along the identity carries a cellular basis") {
    SpaceDiagram x = pushout_sphere();
    ChainDiagram d = holan_chain_diagram(x, Functor::identity(x.index_ptr()), 2);
    REQUIRE(d.cellular());
    for (int q = 0; q <= 2; ++q) {
        auto cells = d.cells(q);
        for (int j = 0; j < 3; ++j) {
            auto dec = cellular_decomposition(d, j, q);
            CHECK(dec.size() == d.at(j).basis(q).size());
            for (const auto& [gen, origin] : dec) {
                FormalChain img = d.arrow(origin.mor).apply_gen(cells[origin.cell].gen);
                CHECK(img == FormalChain::single(gen));
            }
        }
    }
}

TEST_CASE("the resolved diagram maps onto the original one simplicially") {
    SpaceDiagram x = pushout_sphere();
    CofibrantReplacement cr = cofibrant_replacement(x);
    REQUIRE(cr.ev.size() == 3);
    CHECK_NOTHROW(SpaceDiagram(cr.diagram.index_ptr(),
                               {cr.diagram.at(0), cr.diagram.at(1), cr.diagram.at(2)},
                               {cr.diagram.arrow(0), cr.diagram.arrow(1),
                                cr.diagram.arrow(2), cr.diagram.arrow(3),
                                cr.diagram.arrow(4)},
                               2));
    for (int i = 0; i < 3; ++i) {
        const LESpace& q = cr.diagram.at(i);
        for (int d = 0; d <= 3; ++d)
            for (const std::string& b : q.nondeg(d)) {
                SimplexKey k{{}, b, d};
                CHECK(cr.ev[i].apply(k).dim() == d);
                for (int fi = 0; fi <= d && d > 0; ++fi)
                    CHECK(cr.ev[i].apply(q.face(k, fi)) ==
                          x.at(i).face(cr.ev[i].apply(k), fi));
            }
    }
}

TEST_CASE("resolving a diagram keeps each value's homology") {
    SpaceDiagram x = pushout_sphere();
    CofibrantReplacement cr = cofibrant_replacement(x);
    for (int i = 0; i < 3; ++i) {
        ChainComplex c = normalized_chains(cr.diagram.at(i));
        CHECK(shape_is(homology(c, 0).group, 1));
        CHECK(shape_is(homology(c, 1).group, i == 2 ? 1 : 0));
        CHECK(shape_is(homology(c, 2).group, 0));
    }
}
