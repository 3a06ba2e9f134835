#pragma once

#include "effho/reduction.hpp"
#include "effho/simplicial.hpp"

namespace effho {

// Alexander-Whitney on a product generator: sum over i of front_i(x) (x)
// back_{n-i}(y), degenerate pieces dropped. Terms are tensor generators of
// tensor(normalized_chains(x), normalized_chains(y)).
FormalChain aw_on_gen(const LESpace& x, const LESpace& y, const GenKey& g);

// Shuffle map on a tensor generator t(p, a, b): signed sum over (p,q)-word
// splittings of the degenerate pairs covering a x b.
FormalChain shuffle_on_gen(const GenKey& g);

// Degree +1 homotopy on product generators, natural in both factors and
// side-conditioned: eta beta = 0, alpha eta = 0, eta eta = 0 hold on the
// nose, together with d eta + eta d = id - beta alpha.
FormalChain ez_homotopy_on_gen(const LESpace& x, const LESpace& y, const GenKey& g);

// C(X x Y) => C(X) (x) C(Y) with alpha = Alexander-Whitney, beta = shuffle.
Reduction ez_reduction(const LESpace& x, const LESpace& y);

// Same maps over caller-supplied complex handles; top must be the normalized
// chains of product_space(x, y) and bottom the matching tensor complex.
Reduction ez_reduction(const LESpace& x, const LESpace& y, ChainComplex top,
                       ChainComplex bottom);

}  // namespace effho
