#pragma once

#include "effho/category.hpp"
#include "effho/chain.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace effho {

// Canonical form of a (possibly degenerate) simplex: a strictly decreasing
// degeneracy word applied to a nondegenerate base. degens[0] is the
// outermost letter, so the simplex is s_{degens[0]} ... s_{degens.back()}(base).
struct SimplexKey {
    std::vector<int> degens;
    std::string base;
    int base_dim = 0;

    int dim() const { return base_dim + static_cast<int>(degens.size()); }
    bool nondegenerate() const { return degens.empty(); }
    auto operator<=>(const SimplexKey&) const = default;
    std::string to_string() const;
};

// k(<word>,<base>) with the word dot-joined; decoding needs the total
// dimension to recover base_dim.
std::string encode_key(const SimplexKey& k);
SimplexKey decode_key(const std::string& s, int dim);

// Simplicial set with computable faces and degeneracies on encoded
// simplices. Only the action on nondegenerate bases is supplied; the
// degeneracy-word bookkeeping is generic. Enumerable spaces can list their
// nondegenerate simplices per dimension.
class LESpace {
public:
    using BaseValidFn = std::function<bool(const std::string&, int)>;
    using BaseFaceFn = std::function<SimplexKey(const std::string&, int, int)>;
    using EnumFn = std::function<std::vector<std::string>(int)>;

    LESpace() = default;
    LESpace(std::string name, BaseValidFn base_valid, BaseFaceFn base_face,
            std::optional<EnumFn> nondeg_enum = std::nullopt);

    const std::string& name() const;
    bool enumerable() const;

    bool base_valid(const std::string& base, int dim) const;
    SimplexKey base_face(const std::string& base, int dim, int i) const;

    // Canonical-form validity: strictly decreasing in-range word over a
    // valid nondegenerate base.
    bool valid(const SimplexKey& k) const;

    SimplexKey face(const SimplexKey& k, int i) const;
    SimplexKey degeneracy(const SimplexKey& k, int i) const;

    // Nondegenerate simplices of one dimension; UnsupportedError when the
    // space is not enumerable.
    std::vector<std::string> nondeg(int dim) const;

    bool same(const LESpace& o) const { return impl_ == o.impl_; }
    bool is_valid_handle() const { return impl_ != nullptr; }

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

// Insert one degeneracy letter into a canonical word (s_i s_j = s_{j+1} s_i
// for i <= j), keeping the word strictly decreasing.
SimplexKey insert_degeneracy(SimplexKey k, int i);

// Simplicial map, given by its action on nondegenerate bases (the image may
// be degenerate); extended to all simplices by naturality.
class SimplicialMap {
public:
    SimplicialMap() = default;
    SimplicialMap(LESpace dom, LESpace cod,
                  std::function<SimplexKey(const std::string&, int)> on_base);

    static SimplicialMap identity(const LESpace& x);

    const LESpace& dom() const { return dom_; }
    const LESpace& cod() const { return cod_; }

    SimplexKey apply(const SimplexKey& k) const;
    SimplicialMap compose_after(const SimplicialMap& first) const;  // this ∘ first

private:
    LESpace dom_, cod_;
    std::function<SimplexKey(const std::string&, int)> on_base_;
};

// --- concrete spaces -------------------------------------------------------

LESpace empty_space();
LESpace point_space();

// Nondegenerate simplices are strictly increasing vertex lists "0.2.3".
LESpace standard_simplex(int n);

// Finite space from explicit data: names of nondegenerate simplices per
// dimension (globally unique) and the face table. Simplicial identities are
// audited exhaustively at construction.
LESpace finite_space(std::string name, std::map<int, std::vector<std::string>> dims,
                     std::map<std::string, std::vector<SimplexKey>> faces);

// Pairs with componentwise structure; nondegenerate pairs have disjoint
// degeneracy words, base encoding p(<key>,<key>).
LESpace product_space(const LESpace& x, const LESpace& y);

// Canonical form of a componentwise pair (extracts shared letters).
SimplexKey make_product_key(const SimplexKey& a, const SimplexKey& b);

// Components of a product simplex, with the pair word pushed back in.
std::pair<SimplexKey, SimplexKey> product_components(const SimplexKey& k);

SimplicialMap product_map(const SimplicialMap& f, const SimplicialMap& g,
                          const LESpace& dom_product, const LESpace& cod_product);

// q-simplices = composable chains of morphisms; degenerate = containing an
// identity; enumerable in every dimension.
LESpace nerve(FiniteCategoryPtr c, std::string name = "N");

// Chain of morphism indices (identities allowed) -> canonical simplex of
// the nerve. An empty chain encodes the object `obj`.
SimplexKey nerve_key(const FiniteCategory& c, const std::vector<int>& chain, int obj);

// Morphism chain and starting object of a nondegenerate nerve base.
std::pair<std::vector<int>, int> nerve_chain(const FiniteCategory& c, const std::string& base,
                                             int dim);

LESpace skeleton(const LESpace& x, int k);

// --- operators -------------------------------------------------------------

// Action of a monotone operator [d] -> [m] (given by its value list) on a
// dimension-m simplex: missed values become faces (descending), repeated
// positions become degeneracies (ascending).
SimplexKey apply_monotone(const LESpace& space, const SimplexKey& k,
                          const std::vector<int>& values);

// Vertex list of a simplex of a standard simplex (monotone, with repeats).
std::vector<int> simplex_vertices(const SimplexKey& k);

// Monotone vertex list -> canonical simplex key of a standard simplex.
SimplexKey key_from_vertices(const std::vector<int>& values);

// --- chains ----------------------------------------------------------------

// Normalized chains: generators = nondegenerate simplices, boundary =
// alternating face sum with degenerate faces dropped. Effective iff the
// space is enumerable.
ChainComplex normalized_chains(const LESpace& x);

// Induced map on normalized chains (degenerate images vanish). The caller
// provides the chain complexes so handles can be shared.
ChainMap chains_of_map(const SimplicialMap& f, ChainComplex dom, ChainComplex cod);

}  // namespace effho
