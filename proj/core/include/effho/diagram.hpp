#pragma once

#include "effho/abelian.hpp"
#include "effho/category.hpp"
#include "effho/chain.hpp"
#include "effho/reduction.hpp"
#include "effho/simplicial.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace effho {

// --- diagrams of simplicial sets -------------------------------------------

// A simplicial set per object of a finite index category and a simplicial
// map per morphism. Construction probes functoriality on simplices up to
// audit_dim (exhaustively for enumerable values, skipped otherwise);
// audit_dim < 0 disables the probe pass.
class SpaceDiagram {
public:
    SpaceDiagram(FiniteCategoryPtr index, std::vector<LESpace> at,
                 std::vector<SimplicialMap> arrows, int audit_dim = 2);

    const FiniteCategory& index() const { return *index_; }
    FiniteCategoryPtr index_ptr() const { return index_; }
    const LESpace& at(int obj) const { return at_[obj]; }
    const SimplicialMap& arrow(int mor) const { return arrows_[mor]; }

private:
    FiniteCategoryPtr index_;
    std::vector<LESpace> at_;
    std::vector<SimplicialMap> arrows_;
};

SpaceDiagram constant_space_diagram(FiniteCategoryPtr index, const LESpace& x);

// --- diagrams of chain complexes -------------------------------------------

// One cell of an orbit-shaped basis: a generator of the value at `obj`
// whose pushforwards along the morphisms out of `obj` slice out part of
// the global basis.
struct CellularCell {
    int obj = 0;
    GenKey gen;
};

// Provenance of a basis generator of a value complex: the image of cell
// number `cell` under morphism `mor` (coefficient always +1).
struct CellOrigin {
    size_t cell = 0;
    int mor = 0;
};

// A chain complex per object, a degree 0 chain map per morphism, and an
// optional cellular basis enumerator. Functoriality is probed on basis
// generators up to audit_dim where values are effective.
class ChainDiagram {
public:
    using CellsFn = std::function<std::vector<CellularCell>(int)>;

    ChainDiagram(FiniteCategoryPtr index, std::vector<ChainComplex> at,
                 std::vector<ChainMap> arrows, int audit_dim = 2,
                 std::optional<CellsFn> cells = std::nullopt);

    const FiniteCategory& index() const { return *index_; }
    FiniteCategoryPtr index_ptr() const { return index_; }
    const ChainComplex& at(int obj) const { return at_[obj]; }
    const ChainMap& arrow(int mor) const { return arrows_[mor]; }

    bool effective() const { return effective_; }
    bool cellular() const { return cells_.has_value(); }
    std::vector<CellularCell> cells(int degree) const;

private:
    FiniteCategoryPtr index_;
    std::vector<ChainComplex> at_;
    std::vector<ChainMap> arrows_;
    std::optional<CellsFn> cells_;
    bool effective_ = false;
};

ChainDiagram chains_of_diagram(const SpaceDiagram& x, int audit_dim = -1);

ChainDiagram constant_chain_diagram(FiniteCategoryPtr index, const ChainComplex& c);

// Free module on the morphisms out of object i, concentrated in degree 0:
// the value at j has one generator per morphism i -> j (named by it), and a
// morphism g acts by postcomposition. Cellular with the single cell id_i.
ChainDiagram representable(FiniteCategoryPtr index, int i);

// Objectwise tensor c (x) d(j) with arrows id (x) d(f); cells are pairs of
// a basis generator of c and a cell of d.
ChainDiagram diagram_tensor_const(const ChainComplex& c, const ChainDiagram& d,
                                  std::string name = "");

// Diagram over the product index with values a(i) (x) b(j) and arrows
// f (x) g; cells are pairs of cells.
ChainDiagram external_tensor(const ChainDiagram& a, const ChainDiagram& b,
                             std::string name = "");

// Basis generators of the value at obj in one degree, each matched with the
// cell and morphism producing it. Throws AuditError when a pushforward is
// not a single generator with coefficient +1, when two pushforwards
// collide, or when the images fail to exhaust the basis.
std::map<GenKey, CellOrigin> cellular_decomposition(const ChainDiagram& d, int obj,
                                                    int degree);

// The degree n slice as a diagram of free abelian groups over the value
// bases (columns and rows in basis order).
FEAbDiagram degree_slice(const ChainDiagram& d, int degree);

// --- objectwise reductions and spans ---------------------------------------

struct DiagramReduction {
    ChainDiagram top;
    ChainDiagram bottom;
    std::vector<Reduction> at;
};

// Per-object reduction identities plus naturality of alpha, beta, eta
// against the two diagrams' arrows, probed on effective bases through
// max_degree.
CheckReport verify_diagram_reduction(const DiagramReduction& r, int max_degree);

struct DiagramEquivalence {
    ChainDiagram left;   // pointwise locally effective values
    ChainDiagram right;  // pointwise effective values
    std::vector<Equivalence> at;
};

// Per-object span identities plus strict naturality of the composite
// transfers alpha_l beta_r and alpha_r beta_l against the two diagrams.
CheckReport verify_diagram_equivalence(const DiagramEquivalence& e, int max_degree);

// Lifts diagram_tensor_const to spans: ce must sit over d.left's tensor
// factor partner, i.e. result.left(j) = c (x) d.left(j) via tensoring the
// per-object spans.
DiagramEquivalence tensor_const_equivalence(const Equivalence& ce,
                                            const DiagramEquivalence& de,
                                            std::string name = "");

}  // namespace effho
