#pragma once

#include "effho/chain.hpp"

#include <string>
#include <vector>

namespace effho {

// Strong deformation retraction data between chain complexes:
//   alpha: top -> bottom and beta: bottom -> top are chain maps,
//   eta: top -> top has degree +1, and
//     alpha beta = id,  d eta + eta d = id - beta alpha,
//     alpha eta = 0,  eta beta = 0,  eta eta = 0.
struct Reduction {
    ChainComplex top;
    ChainComplex bottom;
    ChainMap alpha;
    ChainMap beta;
    ChainMap eta;
};

Reduction identity_reduction(const ChainComplex& c);

// Reduction along a degreewise isomorphism; fwd and bwd must be mutually
// inverse chain maps (not audited here, probe it where it matters).
Reduction iso_reduction(const ChainMap& fwd, const ChainMap& bwd);

struct CheckReport {
    bool ok = true;
    std::string witness;  // first failed identity, empty when ok
};

// Evaluates every reduction identity on the given probe generators.
CheckReport verify_reduction(const Reduction& r, const std::vector<GenKey>& top_probes,
                             const std::vector<GenKey>& bottom_probes);

// All basis generators of an effective complex in degrees [0, max_degree].
std::vector<GenKey> basis_probes(const ChainComplex& c, int max_degree);

// first: A => B, second: B => C, result A => C
// (eta = eta1 + beta1 eta2 alpha1).
Reduction compose_reductions(const Reduction& first, const Reduction& second);

// Same complex with differential d + delta (delta of degree -1).
ChainComplex perturbed_complex(const ChainComplex& c, const ChainMap& delta,
                               std::string name = "");

// Perturbation delta of the bottom differential: the top differential gains
// beta delta alpha, all three structure maps survive unchanged.
Reduction easy_perturbation(const Reduction& r, const ChainMap& bottom_delta);
Reduction easy_perturbation(const Reduction& r, const ChainMap& bottom_delta,
                            ChainComplex new_top, ChainComplex new_bottom);

// Perturbation delta of the top differential. Requires eta delta to be
// pointwise nilpotent; the geometric series is truncated at
// nilpotency_bound and NonNilpotentError is thrown when it fails to die.
Reduction basic_perturbation(const Reduction& r, const ChainMap& top_delta,
                             size_t nilpotency_bound);
Reduction basic_perturbation(const Reduction& r, const ChainMap& top_delta,
                             size_t nilpotency_bound, ChainComplex new_top);

// Span of reductions with a common top: left.bottom is the complex of
// interest, right.bottom is effective.
struct Equivalence {
    Reduction left;
    Reduction right;
};

Equivalence equivalence_from_reduction(const Reduction& r);

CheckReport verify_equivalence(const Equivalence& e, const std::vector<GenKey>& top_probes,
                               const std::vector<GenKey>& left_probes,
                               const std::vector<GenKey>& right_probes);

// Composes C <= T1 => D and D <= T2 => E to C <= P => E, where P is the
// pullback-style complex P_n = T1_n (+) T2_n (+) D_{n+1} with
// d(x, y, u) = (dx, dy, a1 x - a2 y - du). Both projections of P extend to
// reductions, no nilpotency condition is involved.
Equivalence compose_equivalences(const Equivalence& first, const Equivalence& second);

// Perturbs the left-bottom complex by delta: easy perturbation along the
// left leg, then basic perturbation of the right leg by the induced top
// perturbation (subject to the nilpotency bound). The two legs share the
// perturbed top.
Equivalence perturb_equivalence(const Equivalence& e, const ChainMap& delta,
                                size_t nilpotency_bound);

// --- structural combinators ------------------------------------------------

Reduction direct_sum_reduction(std::vector<Reduction> parts, std::string name = "");

// Graded family version; part(k) must have top and bottom supported in
// degrees >= k.
Reduction direct_sum_family_reduction(std::string name, std::function<Reduction(int)> part,
                                      std::function<int(int)> parts_touching_degree);

// eta gains the sign (-1)^k, matching the suspended differentials.
Reduction suspend_reduction(const Reduction& r, int k);

// alpha = a1 (x) a2, beta = b1 (x) b2,
// eta = eta1 (x) id + (b1 a1) (x) eta2 with Koszul signs.
Reduction tensor_reduction(const Reduction& r1, const Reduction& r2, std::string name = "");

// Same combinators on spans. The two legs of each part share their top, so
// the lifted legs are reglued onto one common top complex.
Equivalence direct_sum_equivalence(std::vector<Equivalence> parts, std::string name = "");
Equivalence direct_sum_family_equivalence(std::string name,
                                          std::function<Equivalence(int)> part,
                                          std::function<int(int)> parts_touching_degree);
Equivalence suspend_equivalence(const Equivalence& e, int k);
Equivalence tensor_equivalence(const Equivalence& e1, const Equivalence& e2,
                               std::string name = "");

// Reduction onto a minimal bottom: Smith form of each differential in bases
// chosen degree by degree splits the complex into elementary two-term pieces
// plus untouched generators; pieces with a unit factor contract away. Bottom
// generators are named nf(<index>). Levels are computed on demand and
// memoized, so arbitrarily high degrees work, but the top must have an
// enumerable basis.
Reduction normal_form_reduction(const ChainComplex& c, std::string name = "");

}  // namespace effho
