#pragma once

#include "effho/category.hpp"
#include "effho/diagram.hpp"
#include "effho/reduction.hpp"
#include "effho/simplicial.hpp"

#include <string>
#include <vector>

namespace effho {

// Canonical simplex of the one-sided bar model of a homotopy Kan extension
// along p at a target object: an identity-free composable chain
// f_1 .. f_n starting at i0 in the index category, an anchor morphism g
// from p(end of chain) to the target object, a vertex-surjective simplex t
// of the standard n-simplex, and a simplex x of the value at i0 sharing no
// degeneracy position with t.
struct BarSimplex {
    int i0 = 0;
    std::vector<int> t;      // monotone surjection onto 0..n, as values
    std::vector<int> chain;  // composable non-identity morphisms out of i0
    int g = 0;
    SimplexKey x;

    int level() const { return static_cast<int>(chain.size()); }
    int dim() const { return static_cast<int>(t.size()) - 1; }

    bool operator==(const BarSimplex&) const = default;
};

std::string encode_bar(const BarSimplex& s);
BarSimplex decode_bar(const std::string& base, int dim);

// Object at the end of the chain.
int bar_end(const FiniteCategory& index, const BarSimplex& s);

// Structural normal form: values missing from t are pushed into the data
// (0: advance x along f_1, middle: compose, n: absorb into the anchor) and
// identity arrows produced on the way are stripped out of the chain. Each
// round shortens the chain, so the rewrite terminates. The result may still
// share degeneracies between t and x; encoding as a simplex key peels those
// into a degeneracy word.
BarSimplex bar_canonicalize(const SpaceDiagram& x, const Functor& p, BarSimplex s);
SimplexKey bar_key(const SpaceDiagram& x, const Functor& p, BarSimplex s);

// The homotopy Kan extension of x along p, evaluated at object j of the
// target category. Enumerable iff every value of x is.
LESpace holan_space(const SpaceDiagram& x, const Functor& p, int j);

// All target objects at once; arrows post-compose the anchor.
SpaceDiagram holan_diagram(const SpaceDiagram& x, const Functor& p, int audit_dim = -1);

// Kan extension along the collapse to the terminal category: the homotopy
// colimit.
LESpace hocolim_space(const SpaceDiagram& x);

// Chains of holan_diagram with the orbit-shaped basis of anchor-free
// generators: the cell (i0, t, chain, x) sits at p(end) with g = id, and
// post-composition reaches every generator exactly once. Requires
// enumerable values.
ChainDiagram holan_chain_diagram(const SpaceDiagram& x, const Functor& p,
                                 int audit_dim = -1);

// Effective homology input for the values: one strong equivalence per
// object of the index category, left bottoms keyed like the normalized
// chains of the values.
struct PointwiseEH {
    std::vector<ChainComplex> chains;
    std::vector<Equivalence> eh;
};

// Identity spans for a diagram of finite spaces.
PointwiseEH finite_pointwise_eh(const SpaceDiagram& x);

// Strong equivalence from the chains of holan_space(x, p, j) (presented
// over the same generators, with the boundary split along the chain-length
// filtration and reassembled by perturbation) to an effective complex
// built from suspended copies of the pointwise effective models, one block
// per (identity-free chain, anchor). degree_budget caps the degrees the
// perturbation series is guaranteed for.
Equivalence holan_effective(const SpaceDiagram& x, const Functor& p, int j,
                            const PointwiseEH& pw, size_t degree_budget = 32);

Equivalence hocolim_effective(const SpaceDiagram& x, const PointwiseEH& pw,
                              size_t degree_budget = 32);

// The bar resolution of a diagram: objectwise the Kan extension along the
// identity functor, together with the evaluation maps Q(i) -> X(i) pushing
// x along the composite of the chain and the anchor. Evaluation is a
// levelwise homotopy equivalence and the replacement is objectwise built
// from cells, which is what the cohomology of diagrams consumes.
struct CofibrantReplacement {
    SpaceDiagram diagram;
    std::vector<SimplicialMap> ev;
};

CofibrantReplacement cofibrant_replacement(const SpaceDiagram& x);

}  // namespace effho
