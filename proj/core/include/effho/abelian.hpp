#pragma once

#include "effho/category.hpp"
#include "effho/matrix.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace effho {

// Fully effective finitely generated abelian group.
//
// Elements are represented by integer vectors in an ambient coordinate
// system (a quotient of a sublattice of Z^ambient_dim). decide() maps a
// representative to canonical coordinates over the invariant factors;
// lift() is a section of it. Canonical factor order: torsion factors in
// divisibility order, then the free factors (order 0) last.
class FEAbGroup {
public:
    FEAbGroup();  // trivial group

    // Group with the given ambient coordinate orders (0 = infinite). The
    // canonical factors are derived, e.g. orders {2,3} canonicalize to {6}.
    static FEAbGroup from_orders(const std::vector<Int>& raw_orders);

    // Z^ambient / column span of `relations`.
    static FEAbGroup from_presentation(size_t ambient, const IntMatrix& relations);

    // (column span of `lattice`) / (column span of `relations`), both inside
    // Z^ambient; relation columns must lie in the lattice.
    static FEAbGroup sub_quotient(const IntMatrix& lattice, const IntMatrix& relations);

    const std::vector<Int>& orders() const { return orders_; }
    size_t rank() const { return orders_.size(); }
    size_t torsion_count() const { return torsion_count_; }
    size_t free_rank() const { return orders_.size() - torsion_count_; }
    size_t ambient_dim() const { return ambient_; }
    bool is_trivial() const { return orders_.empty(); }

    // Representative -> canonical coordinates, torsion entries in [0, q).
    // Throws IllFormedError if the vector is not in the represented subgroup.
    std::vector<Int> decide(const std::vector<Int>& representative) const;

    // Canonical coordinates -> a representative.
    std::vector<Int> lift(const std::vector<Int>& coords) const;

    // Reduce canonical coordinates mod the factor orders.
    std::vector<Int> normalize(std::vector<Int> coords) const;

    bool same_shape(const FEAbGroup& o) const { return orders_ == o.orders_; }

    // "0", "Z", "Z + Z/2", ... free copies first, torsion in factor order.
    std::string to_string() const;

private:
    std::vector<Int> orders_;
    size_t torsion_count_ = 0;
    size_t ambient_ = 0;
    std::optional<IntMatrix> lattice_;       // columns = lattice basis; absent = identity
    IntMatrix u_;                            // presentation SNF row transform
    std::vector<size_t> coord_rows_;         // rows of u_ giving canonical coords
    IntMatrix lift_cols_;                    // ambient columns lifting canonical generators
};

// Homomorphism between fully effective groups, stored as the matrix of
// images of the domain's canonical generators in the codomain's canonical
// coordinates, reduced mod the codomain orders at construction. The
// constructor audits well-definedness (order of each generator must kill
// its image) and throws AuditError otherwise.
class ComputableHom {
public:
    ComputableHom(FEAbGroup domain, FEAbGroup codomain, IntMatrix mat);

    static ComputableHom identity(const FEAbGroup& g);
    static ComputableHom zero(FEAbGroup domain, FEAbGroup codomain);

    const FEAbGroup& domain() const { return dom_; }
    const FEAbGroup& codomain() const { return cod_; }
    const IntMatrix& matrix() const { return mat_; }

    std::vector<Int> apply(const std::vector<Int>& coords) const;

    ComputableHom compose_after(const ComputableHom& first) const;  // this ∘ first
    ComputableHom operator+(const ComputableHom& o) const;
    ComputableHom operator-(const ComputableHom& o) const;

    bool equal(const ComputableHom& o) const;  // same shapes, matrices equal mod orders
    bool is_zero() const;

private:
    FEAbGroup dom_, cod_;
    IntMatrix mat_;
};

// Hom whose action is given on ambient coordinates (m is codomain-ambient x
// domain-ambient); converted to canonical coordinates via lift/decide.
ComputableHom hom_from_ambient_matrix(const FEAbGroup& dom, const FEAbGroup& cod,
                                      const IntMatrix& m);

struct KernelResult {
    FEAbGroup group;
    ComputableHom incl;  // group -> domain of f
};
KernelResult kernel(const ComputableHom& f);

struct CokernelResult {
    FEAbGroup group;
    ComputableHom proj;  // codomain of f -> group
};
CokernelResult cokernel(const ComputableHom& f);

// Direct sum with block decide/lift; `parts` may be empty (trivial group).
FEAbGroup direct_sum(const std::vector<FEAbGroup>& parts);

// Hom(A, B) as a fully effective group with a distinguished basis indexed
// by (domain generator, codomain generator) pairs with nontrivial cyclic
// hom. encode/decode translate between matrices A -> B and ambient vectors.
class HomGroup {
public:
    HomGroup(FEAbGroup a, FEAbGroup b);

    const FEAbGroup& group() const { return group_; }

    // Matrix of a hom (codomain.rank x domain.rank) -> ambient vector.
    // Throws AuditError if the matrix is not a well-defined hom A -> B.
    std::vector<Int> encode(const IntMatrix& hom_matrix) const;
    IntMatrix decode(const std::vector<Int>& ambient) const;

    size_t basis_size() const { return pairs_.size(); }

    // cyclic orders of the distinguished basis homs (0 = infinite)
    const std::vector<Int>& raw_orders() const { return raw_; }

private:
    FEAbGroup a_, b_;
    FEAbGroup group_;
    std::vector<std::pair<size_t, size_t>> pairs_;  // (domain gen, codomain gen)
    std::vector<Int> multipliers_;                  // image coefficient of basis hom
    std::vector<Int> raw_;
};

// Functor from a finite category to fully effective abelian groups.
// Functoriality (identities and all composites) is audited at construction.
class FEAbDiagram {
public:
    FEAbDiagram(FiniteCategoryPtr index, std::vector<FEAbGroup> at,
                std::vector<ComputableHom> arrows);

    const FiniteCategory& index() const { return *index_; }
    FiniteCategoryPtr index_ptr() const { return index_; }
    const FEAbGroup& at(int obj) const { return at_[obj]; }
    const ComputableHom& arrow(int mor) const { return arrows_[mor]; }

    static FEAbDiagram constant(FiniteCategoryPtr index, const FEAbGroup& g);

private:
    FiniteCategoryPtr index_;
    std::vector<FEAbGroup> at_;
    std::vector<ComputableHom> arrows_;
};

// Group of natural transformations pi => rho as a fully effective group,
// with decoding of elements into per-object hom matrices.
struct HomDiagramResult {
    FEAbGroup group;
    // element (canonical coords of `group`) -> per-object matrices
    std::vector<IntMatrix> decode(const std::vector<Int>& coords) const;

    // implementation detail, exposed for the decoder
    std::shared_ptr<const struct HomDiagramData> data;
};
HomDiagramResult hom_diagram(const FEAbDiagram& pi, const FEAbDiagram& rho);

}  // namespace effho
