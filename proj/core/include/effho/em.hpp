#pragma once

#include "effho/abelian.hpp"
#include "effho/diagram.hpp"
#include "effho/holan.hpp"
#include "effho/reduction.hpp"
#include "effho/simplicial.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace effho {

// Value table of a cocycle on a standard simplex: one row per strictly
// increasing (n+1)-subset of the vertices, in lexicographic order, each row
// a canonical coordinate vector of the coefficient group.
using EmTable = std::vector<std::vector<Int>>;

// Classifying space K(pi, n) as a simplicial abelian group degreewise:
// q-simplices are the normalized n-cocycles on the standard q-simplex with
// coefficients in pi, faces and degeneracies pull the value table back
// along the corresponding coface and codegeneracy. Enumerable iff pi is
// finite. Requires n >= 1.
LESpace em_space(const FEAbGroup& pi, int n);

// Canonical simplex key of the cocycle with the given table (degeneracies
// are peeled off). Throws IllFormedError when the table has the wrong
// shape, non-canonical values, or fails the cocycle condition.
SimplexKey em_key(const FEAbGroup& pi, int n, int dim, const EmTable& table);

// Full value table of a (possibly degenerate) simplex.
EmTable em_table(const FEAbGroup& pi, int n, const SimplexKey& k);

// n = 1 shorthand: the simplex with the given values on the consecutive
// edges (i, i+1); every other edge value is forced by the cocycle rule.
SimplexKey em_edge_key(const FEAbGroup& pi, const std::vector<std::vector<Int>>& edges);

// Objectwise classifying spaces; a morphism acts by mapping every table
// entry through the corresponding homomorphism.
SpaceDiagram em_diagram(const FEAbDiagram& pi, int n, int audit_dim = 2);

// Pluggable source of effective homology for levels without a built-in
// model.
using EMProvider = std::function<Equivalence(const FEAbGroup&, int)>;

// Strong equivalence from the normalized chains of em_space(pi, n) to the
// tensor, over the invariant factors of pi, of one small model each: a free
// factor contributes the circle complex (Z, Z, 0, ...), a factor of order m
// the periodic complex Z <-0- Z <-m- Z <-0- ... . Built in for n = 1;
// higher levels are delegated to the provider and UnsupportedError is
// thrown when none is given.
Equivalence em_effective_homology(const FEAbGroup& pi, int n = 1,
                                  const std::optional<EMProvider>& provider = std::nullopt);

// Pointwise models for em_diagram(pi, n), ready to feed the bar assembly.
PointwiseEH em_pointwise_eh(const FEAbDiagram& pi, int n = 1,
                            const std::optional<EMProvider>& provider = std::nullopt);

}  // namespace effho
