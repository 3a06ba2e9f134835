#pragma once

#include "effho/abelian.hpp"
#include "effho/errors.hpp"
#include "effho/ints.hpp"
#include "effho/keyenc.hpp"

#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace effho {

// Generator of a chain complex: degree plus an id string private to the
// owning complex. Ids of composite complexes are built with keyenc.
struct GenKey {
    int degree = 0;
    std::string id;
    auto operator<=>(const GenKey&) const = default;
};

// Finite integer combination of generators. Zero coefficients are never
// stored, so iteration order (degree, then id) is deterministic.
class FormalChain {
public:
    FormalChain() = default;
    static FormalChain single(GenKey g, Int coeff = 1);

    void add(const GenKey& g, const Int& coeff);
    Int coeff(const GenKey& g) const;
    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }

    FormalChain& operator+=(const FormalChain& o);
    FormalChain& operator-=(const FormalChain& o);
    FormalChain operator+(const FormalChain& o) const;
    FormalChain operator-(const FormalChain& o) const;
    FormalChain operator*(const Int& c) const;
    FormalChain operator-() const;
    bool operator==(const FormalChain& o) const { return terms_ == o.terms_; }

    auto begin() const { return terms_.begin(); }
    auto end() const { return terms_.end(); }

    std::string to_string() const;

private:
    std::map<GenKey, Int> terms_;
};

// Chain complex of free abelian groups, supported in degrees >= 0, given by
// closures. A complex is effective when it can enumerate a (finite) basis in
// each degree; otherwise only membership and the differential are available.
// Handles share state, so copies are cheap and compare by identity.
class ChainComplex {
public:
    using DiffFn = std::function<FormalChain(const GenKey&)>;
    using InBasisFn = std::function<bool(const GenKey&)>;
    using BasisFn = std::function<std::vector<GenKey>(int)>;

    ChainComplex() = default;
    ChainComplex(std::string name, InBasisFn in_basis, DiffFn diff,
                 std::optional<BasisFn> basis = std::nullopt);

    const std::string& name() const;
    bool effective() const;
    bool in_basis(const GenKey& g) const;
    FormalChain diff(const GenKey& g) const;
    FormalChain diff(const FormalChain& c) const;

    // Throws UnsupportedError when the complex is not effective. Degrees
    // below 0 yield an empty basis.
    std::vector<GenKey> basis(int degree) const;

    bool valid() const { return impl_ != nullptr; }
    bool same(const ChainComplex& o) const { return impl_ == o.impl_; }

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

// Graded map between complexes, degree `shift`; a generator of degree d maps
// to a chain in degree d + shift of the codomain.
class ChainMap {
public:
    ChainMap() = default;
    ChainMap(ChainComplex dom, ChainComplex cod, int shift,
             std::function<FormalChain(const GenKey&)> on_gen);

    static ChainMap identity(const ChainComplex& c);
    static ChainMap zero(ChainComplex dom, ChainComplex cod, int shift);

    const ChainComplex& dom() const { return dom_; }
    const ChainComplex& cod() const { return cod_; }
    int shift() const { return shift_; }

    FormalChain apply_gen(const GenKey& g) const;
    FormalChain apply(const FormalChain& c) const;

    ChainMap compose_after(const ChainMap& first) const;  // this ∘ first
    ChainMap operator+(const ChainMap& o) const;
    ChainMap operator-(const ChainMap& o) const;
    ChainMap operator-() const;
    ChainMap scaled(const Int& c) const;

    // Wrap with a per-generator cache (shared by copies of the result).
    ChainMap memoized() const;

    // Same action, attached to different complex handles (used when a
    // perturbation rebuilds the complexes around unchanged maps).
    ChainMap rehomed(ChainComplex new_dom, ChainComplex new_cod) const;

    bool valid() const { return static_cast<bool>(on_gen_); }

private:
    ChainComplex dom_, cod_;
    int shift_ = 0;
    std::function<FormalChain(const GenKey&)> on_gen_;
};

// --- basic complexes -------------------------------------------------------

ChainComplex zero_complex(std::string name = "0");

// One generator `id` in degree `degree`, zero differential.
ChainComplex single_gen_complex(int degree, std::string id, std::string name = "");

ChainComplex point_complex();

// Tags generators as s(<index>, <id>); effective iff every part is.
ChainComplex direct_sum(std::vector<ChainComplex> parts, std::string name = "");

// Sum of a graded family of effective parts: part(k) must be supported in
// degrees >= k, so each degree only meets finitely many parts.
ChainComplex direct_sum_family(std::string name, std::function<ChainComplex(int)> part,
                               std::function<int(int)> parts_touching_degree);

// Tags generators as t(<left degree>, <left id>, <right id>); Koszul sign
// on the right differential.
ChainComplex tensor(ChainComplex a, ChainComplex b, std::string name = "");

// Degree shift by k >= 0, differential scaled by (-1)^k; generators keep
// their ids. Matches tensor(single_gen_complex(k, ...), c) up to relabel.
ChainComplex suspend(ChainComplex c, int k);

// f (x) g on prebuilt tensor complexes; both factors must have degree 0.
ChainMap tensor_map(const ChainMap& f, const ChainMap& g, ChainComplex dom, ChainComplex cod);

// The differential packaged as a degree -1 chain map c -> c.
ChainMap diff_map(const ChainComplex& c);

// --- matrices and homology -------------------------------------------------

// Matrix of the differential basis(degree) -> basis(degree - 1).
IntMatrix boundary_matrix(const ChainComplex& c, int degree);

// Matrix of f on the given bases; every image term must lie in `rows`.
IntMatrix map_matrix(const ChainMap& f, const std::vector<GenKey>& cols,
                     const std::vector<GenKey>& rows);

struct HomologyResult {
    FEAbGroup group;
    std::vector<FormalChain> representatives;  // cycles, one per canonical factor
};

// Homology of an effective complex in one degree, with cycle representatives
// for the canonical generators.
HomologyResult homology(const ChainComplex& c, int degree);

}  // namespace effho
