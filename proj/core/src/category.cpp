#include "effho/category.hpp"

#include "effho/keyenc.hpp"

#include <algorithm>
#include <set>

namespace effho {

FiniteCategory::FiniteCategory(std::vector<std::string> objects, std::vector<Morphism> morphisms,
                               std::vector<int> identity_of,
                               std::vector<std::vector<int>> compose_table)
    : objects_(std::move(objects)),
      morphisms_(std::move(morphisms)),
      identity_of_(std::move(identity_of)),
      comp_(std::move(compose_table)) {
    if (identity_of_.size() != objects_.size())
        throw AuditError("category: identity list size != object count");
    if (comp_.size() != morphisms_.size())
        throw AuditError("category: composition table row count != morphism count");
    for (const auto& row : comp_)
        if (row.size() != morphisms_.size())
            throw AuditError("category: composition table is not square");
    audit();
}

void FiniteCategory::audit() const {
    int n = num_morphisms();
    for (int o = 0; o < num_objects(); ++o) {
        int e = identity_of_[o];
        if (e < 0 || e >= n || morphisms_[e].dom != o || morphisms_[e].cod != o)
            throw AuditError("category: bad identity for object " + objects_[o]);
    }
    for (int g = 0; g < n; ++g)
        for (int f = 0; f < n; ++f) {
            bool composable = morphisms_[f].cod == morphisms_[g].dom;
            int gf = comp_[g][f];
            if (!composable) {
                if (gf != -1)
                    throw AuditError("category: table defines non-composable pair (" +
                                     morphisms_[g].name + ", " + morphisms_[f].name + ")");
                continue;
            }
            if (gf < 0 || gf >= n || morphisms_[gf].dom != morphisms_[f].dom ||
                morphisms_[gf].cod != morphisms_[g].cod)
                throw AuditError("category: composite of (" + morphisms_[g].name + ", " +
                                 morphisms_[f].name + ") missing or ill-typed");
        }
    for (int f = 0; f < n; ++f) {
        int e_cod = identity_of_[morphisms_[f].cod];
        int e_dom = identity_of_[morphisms_[f].dom];
        if (comp_[e_cod][f] != f)
            throw AuditError("category: left unit law fails at " + morphisms_[f].name);
        if (comp_[f][e_dom] != f)
            throw AuditError("category: right unit law fails at " + morphisms_[f].name);
    }
    for (int h = 0; h < n; ++h)
        for (int g = 0; g < n; ++g) {
            if (morphisms_[g].cod != morphisms_[h].dom) continue;
            int hg = comp_[h][g];
            for (int f = 0; f < n; ++f) {
                if (morphisms_[f].cod != morphisms_[g].dom) continue;
                if (comp_[h][comp_[g][f]] != comp_[hg][f])
                    throw AuditError("category: associativity fails at (" + morphisms_[h].name +
                                     ", " + morphisms_[g].name + ", " + morphisms_[f].name + ")");
            }
        }
}

int FiniteCategory::object_index(const std::string& name) const {
    for (int i = 0; i < num_objects(); ++i)
        if (objects_[i] == name) return i;
    return -1;
}

int FiniteCategory::morphism_index(const std::string& name) const {
    for (int i = 0; i < num_morphisms(); ++i)
        if (morphisms_[i].name == name) return i;
    return -1;
}

int FiniteCategory::compose(int g, int f) const {
    if (morphisms_[f].cod != morphisms_[g].dom)
        throw IllFormedError("compose: " + morphisms_[g].name + " after " + morphisms_[f].name +
                             " is not composable");
    return comp_[g][f];
}

std::vector<int> FiniteCategory::hom(int a, int b) const {
    std::vector<int> out;
    for (int f = 0; f < num_morphisms(); ++f)
        if (morphisms_[f].dom == a && morphisms_[f].cod == b) out.push_back(f);
    return out;
}

std::vector<std::vector<int>> FiniteCategory::identity_free_chains(int k) const {
    std::vector<std::vector<int>> out;
    if (k == 0) return out;  // callers treat degree 0 via objects
    std::vector<int> cur;
    // depth-first over morphism ids keeps output lexicographic
    auto rec = [&](auto&& self, int depth) -> void {
        if (depth == k) {
            out.push_back(cur);
            return;
        }
        for (int f = 0; f < num_morphisms(); ++f) {
            if (is_identity(f)) continue;
            if (depth > 0 && morphisms_[f].dom != morphisms_[cur.back()].cod) continue;
            cur.push_back(f);
            self(self, depth + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

std::vector<std::vector<int>> FiniteCategory::chains(int k) const {
    std::vector<std::vector<int>> out;
    if (k == 0) return out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int depth) -> void {
        if (depth == k) {
            out.push_back(cur);
            return;
        }
        for (int f = 0; f < num_morphisms(); ++f) {
            if (depth > 0 && morphisms_[f].dom != morphisms_[cur.back()].cod) continue;
            cur.push_back(f);
            self(self, depth + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

FiniteCategory FiniteCategory::opposite() const {
    std::vector<Morphism> ms = morphisms_;
    for (auto& m : ms) std::swap(m.dom, m.cod);
    std::vector<std::vector<int>> comp(ms.size(), std::vector<int>(ms.size(), -1));
    for (size_t g = 0; g < ms.size(); ++g)
        for (size_t f = 0; f < ms.size(); ++f)
            if (ms[f].cod == ms[g].dom) comp[g][f] = comp_[f][g];
    return FiniteCategory(objects_, std::move(ms), identity_of_, std::move(comp));
}

FiniteCategory FiniteCategory::terminal() {
    return FiniteCategory({"*"}, {{"id", 0, 0}}, {0}, {{0}});
}

FiniteCategory FiniteCategory::from_group(const std::vector<std::string>& elements,
                                          const std::vector<std::vector<int>>& table,
                                          const std::string& object_name) {
    std::vector<Morphism> ms;
    for (const auto& e : elements) ms.push_back({e, 0, 0});
    std::vector<std::vector<int>> comp(ms.size(), std::vector<int>(ms.size(), -1));
    for (size_t a = 0; a < ms.size(); ++a)
        for (size_t b = 0; b < ms.size(); ++b) comp[a][b] = table[a][b];
    return FiniteCategory({object_name}, std::move(ms), {0}, std::move(comp));
}

FiniteCategoryPtr product_category(FiniteCategoryPtr a, FiniteCategoryPtr b) {
    int oa = a->num_objects(), ob = b->num_objects();
    int ma = a->num_morphisms(), mb = b->num_morphisms();
    auto oidx = [ob](int x, int y) { return x * ob + y; };
    auto midx = [mb](int f, int g) { return f * mb + g; };

    std::vector<std::string> objects;
    for (int x = 0; x < oa; ++x)
        for (int y = 0; y < ob; ++y)
            objects.push_back(keyenc::node("p", {a->object_name(x), b->object_name(y)}));

    std::vector<FiniteCategory::Morphism> ms;
    for (int f = 0; f < ma; ++f)
        for (int g = 0; g < mb; ++g) {
            const auto& mf = a->morphism(f);
            const auto& mg = b->morphism(g);
            ms.push_back({keyenc::node("p", {mf.name, mg.name}), oidx(mf.dom, mg.dom),
                          oidx(mf.cod, mg.cod)});
        }

    std::vector<int> identity_of(objects.size());
    for (int x = 0; x < oa; ++x)
        for (int y = 0; y < ob; ++y)
            identity_of[oidx(x, y)] = midx(a->identity(x), b->identity(y));

    std::vector<std::vector<int>> comp(ms.size(), std::vector<int>(ms.size(), -1));
    for (int f2 = 0; f2 < ma; ++f2)
        for (int g2 = 0; g2 < mb; ++g2)
            for (int f1 = 0; f1 < ma; ++f1)
                for (int g1 = 0; g1 < mb; ++g1) {
                    if (a->morphism(f1).cod != a->morphism(f2).dom) continue;
                    if (b->morphism(g1).cod != b->morphism(g2).dom) continue;
                    comp[midx(f2, g2)][midx(f1, g1)] =
                        midx(a->compose(f2, f1), b->compose(g2, g1));
                }

    return std::make_shared<FiniteCategory>(std::move(objects), std::move(ms),
                                            std::move(identity_of), std::move(comp));
}

Functor::Functor(FiniteCategoryPtr dom, FiniteCategoryPtr cod, std::vector<int> on_objects,
                 std::vector<int> on_morphisms)
    : dom_(std::move(dom)),
      cod_(std::move(cod)),
      on_objects_(std::move(on_objects)),
      on_morphisms_(std::move(on_morphisms)) {
    if (static_cast<int>(on_objects_.size()) != dom_->num_objects() ||
        static_cast<int>(on_morphisms_.size()) != dom_->num_morphisms())
        throw AuditError("functor: assignment sizes do not match the domain");
    for (int i = 0; i < dom_->num_objects(); ++i)
        if (on_objects_[i] < 0 || on_objects_[i] >= cod_->num_objects())
            throw AuditError("functor: object image out of range");
    for (int f = 0; f < dom_->num_morphisms(); ++f) {
        int ff = on_morphisms_[f];
        if (ff < 0 || ff >= cod_->num_morphisms())
            throw AuditError("functor: morphism image out of range");
        const auto& m = dom_->morphism(f);
        const auto& mm = cod_->morphism(ff);
        if (mm.dom != on_objects_[m.dom] || mm.cod != on_objects_[m.cod])
            throw AuditError("functor: image of " + m.name + " has wrong endpoints");
    }
    for (int i = 0; i < dom_->num_objects(); ++i)
        if (on_morphisms_[dom_->identity(i)] != cod_->identity(on_objects_[i]))
            throw AuditError("functor: identity of " + dom_->object_name(i) + " not preserved");
    for (int g = 0; g < dom_->num_morphisms(); ++g)
        for (int f = 0; f < dom_->num_morphisms(); ++f) {
            if (dom_->morphism(f).cod != dom_->morphism(g).dom) continue;
            if (on_morphisms_[dom_->compose(g, f)] !=
                cod_->compose(on_morphisms_[g], on_morphisms_[f]))
                throw AuditError("functor: composition not preserved at (" +
                                 dom_->morphism(g).name + ", " + dom_->morphism(f).name + ")");
        }
}

Functor Functor::identity(FiniteCategoryPtr c) {
    std::vector<int> objs(c->num_objects()), mors(c->num_morphisms());
    for (size_t i = 0; i < objs.size(); ++i) objs[i] = static_cast<int>(i);
    for (size_t f = 0; f < mors.size(); ++f) mors[f] = static_cast<int>(f);
    auto cc = c;
    return Functor(std::move(c), std::move(cc), std::move(objs), std::move(mors));
}

Functor Functor::to_terminal(FiniteCategoryPtr c) {
    auto term = std::make_shared<FiniteCategory>(FiniteCategory::terminal());
    std::vector<int> objs(static_cast<size_t>(c->num_objects()), 0);
    std::vector<int> mors(static_cast<size_t>(c->num_morphisms()), 0);
    return Functor(std::move(c), std::move(term), std::move(objs), std::move(mors));
}

FiniteGroup::FiniteGroup(std::vector<std::string> elements, std::vector<std::vector<int>> table)
    : elements_(std::move(elements)), table_(std::move(table)) {
    int n = order();
    if (n == 0) throw AuditError("group: empty element list");
    if (static_cast<int>(table_.size()) != n)
        throw AuditError("group: multiplication table row count mismatch");
    for (const auto& row : table_) {
        if (static_cast<int>(row.size()) != n)
            throw AuditError("group: multiplication table is not square");
        for (int x : row)
            if (x < 0 || x >= n) throw AuditError("group: table entry out of range");
    }
    for (int a = 0; a < n; ++a)
        if (table_[0][a] != a || table_[a][0] != a)
            throw AuditError("group: element 0 is not a unit (fails at " + elements_[a] + ")");
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
                    throw AuditError("group: associativity fails at (" + elements_[a] + "," +
                                     elements_[b] + "," + elements_[c] + ")");
    inv_.assign(n, -1);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (table_[a][b] == 0) inv_[a] = b;
    for (int a = 0; a < n; ++a)
        if (inv_[a] < 0) throw AuditError("group: no inverse for " + elements_[a]);
}

int FiniteGroup::element_index(const std::string& name) const {
    for (int i = 0; i < order(); ++i)
        if (elements_[i] == name) return i;
    return -1;
}

std::vector<std::vector<int>> FiniteGroup::subgroups() const {
    int n = order();
    std::set<std::vector<int>> found;
    // close a generating set
    auto closure = [&](std::vector<int> gens) {
        std::set<int> h(gens.begin(), gens.end());
        h.insert(0);
        bool grew = true;
        while (grew) {
            grew = false;
            std::vector<int> cur(h.begin(), h.end());
            for (int a : cur)
                for (int b : cur)
                    if (h.insert(table_[a][b]).second) grew = true;
        }
        return std::vector<int>(h.begin(), h.end());
    };
    std::vector<std::vector<int>> frontier = {closure({})};
    found.insert(frontier[0]);
    while (!frontier.empty()) {
        std::vector<std::vector<int>> next;
        for (const auto& h : frontier)
            for (int g = 1; g < n; ++g) {
                if (std::binary_search(h.begin(), h.end(), g)) continue;
                std::vector<int> gens = h;
                gens.push_back(g);
                auto bigger = closure(gens);
                if (found.insert(bigger).second) next.push_back(bigger);
            }
        frontier = std::move(next);
    }
    std::vector<std::vector<int>> out(found.begin(), found.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

FiniteCategory FiniteGroup::as_category() const {
    return FiniteCategory::from_group(elements_, table_);
}

}  // namespace effho
