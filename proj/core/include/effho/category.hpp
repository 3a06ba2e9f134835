#pragma once

#include "effho/errors.hpp"

#include <memory>
#include <string>
#include <vector>

namespace effho {

// Finite category with an explicit composition table. Objects and morphisms
// are indexed densely; names are kept for serialization and diagnostics.
// The constructor audits identity and associativity laws exhaustively and
// throws AuditError naming the first violated triple.
class FiniteCategory {
public:
    struct Morphism {
        std::string name;
        int dom = 0;
        int cod = 0;
    };

    FiniteCategory(std::vector<std::string> objects, std::vector<Morphism> morphisms,
                   std::vector<int> identity_of, std::vector<std::vector<int>> compose_table);

    int num_objects() const { return static_cast<int>(objects_.size()); }
    int num_morphisms() const { return static_cast<int>(morphisms_.size()); }

    const std::string& object_name(int i) const { return objects_[i]; }
    const Morphism& morphism(int f) const { return morphisms_[f]; }
    int identity(int obj) const { return identity_of_[obj]; }
    bool is_identity(int f) const { return identity_of_[morphisms_[f].dom] == f; }

    int object_index(const std::string& name) const;    // -1 if absent
    int morphism_index(const std::string& name) const;  // -1 if absent

    // g after f; requires cod(f) == dom(g).
    int compose(int g, int f) const;

    // Morphism ids from a to b, in id order (deterministic).
    std::vector<int> hom(int a, int b) const;

    // Composable chains i0 -> i1 -> ... -> ik with no identity arrows,
    // ordered lexicographically by morphism id. Requires k >= 1; length-0
    // chains are just objects and are handled at call sites.
    std::vector<std::vector<int>> identity_free_chains(int k) const;

    // All composable chains of length k, identities allowed.
    std::vector<std::vector<int>> chains(int k) const;

    FiniteCategory opposite() const;

    static FiniteCategory terminal();
    // One-object category whose morphisms are the group elements.
    // `table` is the multiplication table: table[a][b] = index of a*b.
    static FiniteCategory from_group(const std::vector<std::string>& elements,
                                     const std::vector<std::vector<int>>& table,
                                     const std::string& object_name = "*");

private:
    std::vector<std::string> objects_;
    std::vector<Morphism> morphisms_;
    std::vector<int> identity_of_;
    std::vector<std::vector<int>> comp_;  // comp_[g][f], -1 when not composable

    void audit() const;
};

using FiniteCategoryPtr = std::shared_ptr<const FiniteCategory>;

// Objects and morphisms are pairs, named p(<left>,<right>); composition is
// componentwise.
FiniteCategoryPtr product_category(FiniteCategoryPtr a, FiniteCategoryPtr b);

// Functor between finite categories as index assignments. The constructor
// audits identities, dom/cod compatibility and composition exhaustively.
class Functor {
public:
    Functor(FiniteCategoryPtr dom, FiniteCategoryPtr cod, std::vector<int> on_objects,
            std::vector<int> on_morphisms);

    static Functor identity(FiniteCategoryPtr c);
    // Collapses everything onto the unique object of terminal().
    static Functor to_terminal(FiniteCategoryPtr c);

    const FiniteCategory& dom() const { return *dom_; }
    const FiniteCategory& cod() const { return *cod_; }
    FiniteCategoryPtr dom_ptr() const { return dom_; }
    FiniteCategoryPtr cod_ptr() const { return cod_; }

    int obj(int i) const { return on_objects_[i]; }
    int mor(int f) const { return on_morphisms_[f]; }

private:
    FiniteCategoryPtr dom_, cod_;
    std::vector<int> on_objects_, on_morphisms_;
};

// Finite group presented by its multiplication table; element 0 must be the
// unit. Audited on construction (closure, unit, inverses, associativity).
class FiniteGroup {
public:
    FiniteGroup(std::vector<std::string> elements, std::vector<std::vector<int>> table);

    int order() const { return static_cast<int>(elements_.size()); }
    const std::string& element_name(int a) const { return elements_[a]; }
    int element_index(const std::string& name) const;  // -1 if absent
    int mul(int a, int b) const { return table_[a][b]; }
    int inverse(int a) const { return inv_[a]; }

    // All subgroups as sorted element lists, deterministically ordered
    // (by size, then lexicographically on the element index lists).
    std::vector<std::vector<int>> subgroups() const;

    FiniteCategory as_category() const;

private:
    std::vector<std::string> elements_;
    std::vector<std::vector<int>> table_;
    std::vector<int> inv_;
};

}  // namespace effho
