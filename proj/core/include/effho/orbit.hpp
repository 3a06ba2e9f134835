#pragma once

#include "effho/category.hpp"
#include "effho/diagram.hpp"
#include "effho/simplicial.hpp"

#include <vector>

namespace effho {

// Category of orbits G/H, one object per subgroup in the deterministic
// order of FiniteGroup::subgroups(). A morphism G/H -> G/K is a coset gK
// with g^-1 H g contained in K, acting by right translation of the
// representative; composition multiplies representatives. Everything is
// enumerated from the multiplication table, so the construction stays
// affordable for |G| <= 12.
struct OrbitCategory {
    FiniteCategoryPtr cat;
    std::vector<std::vector<int>> subgroup_of;  // object -> sorted element list
    std::vector<int> rep_of;                    // morphism -> coset representative
};

OrbitCategory orbit_category(const FiniteGroup& g);

// Finite simplicial set with a simplexwise action of a finite group.
// top_dim bounds the nondegenerate simplices; construction checks unit,
// composition and simpliciality of the action on all of them.
class GSpace {
public:
    GSpace(LESpace space, FiniteGroup group, std::vector<SimplicialMap> action,
           int top_dim);

    const LESpace& space() const { return space_; }
    const FiniteGroup& group() const { return group_; }
    const SimplicialMap& action(int g) const { return action_[g]; }
    SimplexKey act(int g, const SimplexKey& s) const { return action_[g].apply(s); }
    int top_dim() const { return top_dim_; }

private:
    LESpace space_;
    FiniteGroup group_;
    std::vector<SimplicialMap> action_;
    int top_dim_;
};

// The fixed-point diagram over the opposite orbit category: the object G/H
// goes to the subspace of H-fixed simplices, and the morphism with
// representative g acts by x -> g x. Simplex names are shared with the
// ambient space.
struct FixedPoints {
    OrbitCategory orbits;  // the covariant orbit category; the diagram
                           // below is indexed by its opposite
    SpaceDiagram diagram;
};

FixedPoints fixed_points(const GSpace& x);

}  // namespace effho
