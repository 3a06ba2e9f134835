#include "effho/diagram.hpp"

#include <algorithm>

namespace effho {

namespace {

std::vector<SimplexKey> space_probes(const LESpace& x, int max_dim) {
    std::vector<SimplexKey> out;
    if (!x.enumerable()) return out;
    for (int d = 0; d <= max_dim; ++d)
        for (const std::string& b : x.nondeg(d)) out.push_back({{}, b, d});
    return out;
}

std::vector<GenKey> chain_probes(const ChainComplex& c, int max_degree) {
    std::vector<GenKey> out;
    if (!c.effective()) return out;
    for (int d = 0; d <= max_degree; ++d)
        for (const GenKey& g : c.basis(d)) out.push_back(g);
    return out;
}

}  // namespace

// --- SpaceDiagram ----------------------------------------------------------

SpaceDiagram::SpaceDiagram(FiniteCategoryPtr index, std::vector<LESpace> at,
                           std::vector<SimplicialMap> arrows, int audit_dim)
    : index_(std::move(index)), at_(std::move(at)), arrows_(std::move(arrows)) {
    if (!index_) throw IllFormedError("space diagram: missing index category");
    if (at_.size() != static_cast<size_t>(index_->num_objects()) ||
        arrows_.size() != static_cast<size_t>(index_->num_morphisms()))
        throw AuditError("space diagram: value counts do not match the index");
    for (int f = 0; f < index_->num_morphisms(); ++f) {
        const auto& m = index_->morphism(f);
        if (!arrows_[f].dom().same(at_[m.dom]) || !arrows_[f].cod().same(at_[m.cod]))
            throw AuditError("space diagram: arrow " + m.name + " connects the wrong spaces");
    }
    if (audit_dim < 0) return;

    for (int o = 0; o < index_->num_objects(); ++o)
        for (const SimplexKey& s : space_probes(at_[o], audit_dim))
            if (arrows_[index_->identity(o)].apply(s) != s)
                throw AuditError("space diagram: identity of " + index_->object_name(o) +
                                 " moves " + encode_key(s));
    for (int f = 0; f < index_->num_morphisms(); ++f) {
        const auto& mf = index_->morphism(f);
        for (const SimplexKey& s : space_probes(at_[mf.dom], audit_dim)) {
            SimplexKey img = arrows_[f].apply(s);
            if (!at_[mf.cod].valid(img))
                throw AuditError("space diagram: arrow " + mf.name +
                                 " leaves the codomain at " + encode_key(s));
            if (s.dim() == 0) continue;
            for (int i = 0; i <= s.dim(); ++i)
                if (arrows_[f].apply(at_[mf.dom].face(s, i)) != at_[mf.cod].face(img, i))
                    throw AuditError("space diagram: arrow " + mf.name +
                                     " is not simplicial at " + encode_key(s));
        }
    }
    for (int g = 0; g < index_->num_morphisms(); ++g)
        for (int f = 0; f < index_->num_morphisms(); ++f) {
            if (index_->morphism(f).cod != index_->morphism(g).dom) continue;
            int gf = index_->compose(g, f);
            for (const SimplexKey& s : space_probes(at_[index_->morphism(f).dom], audit_dim))
                if (arrows_[gf].apply(s) != arrows_[g].apply(arrows_[f].apply(s)))
                    throw AuditError("space diagram: composite " + index_->morphism(g).name +
                                     " o " + index_->morphism(f).name + " disagrees at " +
                                     encode_key(s));
        }
}

SpaceDiagram constant_space_diagram(FiniteCategoryPtr index, const LESpace& x) {
    std::vector<LESpace> at(static_cast<size_t>(index->num_objects()), x);
    std::vector<SimplicialMap> arrows(static_cast<size_t>(index->num_morphisms()),
                                      SimplicialMap::identity(x));
    return SpaceDiagram(std::move(index), std::move(at), std::move(arrows), -1);
}

// --- ChainDiagram ----------------------------------------------------------

ChainDiagram::ChainDiagram(FiniteCategoryPtr index, std::vector<ChainComplex> at,
                           std::vector<ChainMap> arrows, int audit_dim,
                           std::optional<CellsFn> cells)
    : index_(std::move(index)),
      at_(std::move(at)),
      arrows_(std::move(arrows)),
      cells_(std::move(cells)) {
    if (!index_) throw IllFormedError("chain diagram: missing index category");
    if (at_.size() != static_cast<size_t>(index_->num_objects()) ||
        arrows_.size() != static_cast<size_t>(index_->num_morphisms()))
        throw AuditError("chain diagram: value counts do not match the index");
    effective_ = true;
    for (const auto& c : at_) effective_ = effective_ && c.effective();
    for (int f = 0; f < index_->num_morphisms(); ++f) {
        const auto& m = index_->morphism(f);
        if (!arrows_[f].dom().same(at_[m.dom]) || !arrows_[f].cod().same(at_[m.cod]) ||
            arrows_[f].shift() != 0)
            throw AuditError("chain diagram: arrow " + m.name + " connects the wrong values");
    }
    if (audit_dim < 0) return;

    for (int o = 0; o < index_->num_objects(); ++o)
        for (const GenKey& g : chain_probes(at_[o], audit_dim))
            if (arrows_[index_->identity(o)].apply_gen(g) != FormalChain::single(g))
                throw AuditError("chain diagram: identity of " + index_->object_name(o) +
                                 " moves " + g.id);
    for (int f = 0; f < index_->num_morphisms(); ++f) {
        const auto& mf = index_->morphism(f);
        for (const GenKey& g : chain_probes(at_[mf.dom], audit_dim))
            if (arrows_[f].apply(at_[mf.dom].diff(g)) !=
                at_[mf.cod].diff(arrows_[f].apply_gen(g)))
                throw AuditError("chain diagram: arrow " + mf.name +
                                 " does not chain-commute at " + g.id);
    }
    for (int g = 0; g < index_->num_morphisms(); ++g)
        for (int f = 0; f < index_->num_morphisms(); ++f) {
            if (index_->morphism(f).cod != index_->morphism(g).dom) continue;
            int gf = index_->compose(g, f);
            for (const GenKey& p : chain_probes(at_[index_->morphism(f).dom], audit_dim))
                if (arrows_[gf].apply_gen(p) != arrows_[g].apply(arrows_[f].apply_gen(p)))
                    throw AuditError("chain diagram: composite " + index_->morphism(g).name +
                                     " o " + index_->morphism(f).name + " disagrees at " + p.id);
        }
}

std::vector<CellularCell> ChainDiagram::cells(int degree) const {
    if (!cells_) throw UnsupportedError("chain diagram has no cellular basis");
    return (*cells_)(degree);
}

ChainDiagram chains_of_diagram(const SpaceDiagram& x, int audit_dim) {
    std::vector<ChainComplex> at;
    for (int o = 0; o < x.index().num_objects(); ++o)
        at.push_back(normalized_chains(x.at(o)));
    std::vector<ChainMap> arrows;
    for (int f = 0; f < x.index().num_morphisms(); ++f) {
        const auto& m = x.index().morphism(f);
        arrows.push_back(chains_of_map(x.arrow(f), at[m.dom], at[m.cod]));
    }
    return ChainDiagram(x.index_ptr(), std::move(at), std::move(arrows), audit_dim);
}

ChainDiagram constant_chain_diagram(FiniteCategoryPtr index, const ChainComplex& c) {
    std::vector<ChainComplex> at(static_cast<size_t>(index->num_objects()), c);
    std::vector<ChainMap> arrows(static_cast<size_t>(index->num_morphisms()),
                                 ChainMap::identity(c));
    return ChainDiagram(std::move(index), std::move(at), std::move(arrows), -1);
}

ChainDiagram representable(FiniteCategoryPtr index, int i) {
    if (i < 0 || i >= index->num_objects())
        throw IllFormedError("representable: object index out of range");
    std::vector<ChainComplex> at;
    for (int j = 0; j < index->num_objects(); ++j) {
        auto idx = index;
        int jj = j;
        auto in_basis = [idx, i, jj](const GenKey& g) {
            if (g.degree != 0) return false;
            int f = idx->morphism_index(g.id);
            return f >= 0 && idx->morphism(f).dom == i && idx->morphism(f).cod == jj;
        };
        auto diff = [](const GenKey&) { return FormalChain(); };
        ChainComplex::BasisFn basis = [idx, i, jj](int d) {
            std::vector<GenKey> out;
            if (d != 0) return out;
            for (int f : idx->hom(i, jj)) out.push_back({0, idx->morphism(f).name});
            return out;
        };
        at.push_back(ChainComplex("Z.hom(" + index->object_name(i) + "," +
                                      index->object_name(j) + ")",
                                  std::move(in_basis), std::move(diff), std::move(basis)));
    }
    std::vector<ChainMap> arrows;
    for (int g = 0; g < index->num_morphisms(); ++g) {
        const auto& m = index->morphism(g);
        auto idx = index;
        int gg = g;
        arrows.push_back(ChainMap(at[m.dom], at[m.cod], 0, [idx, gg](const GenKey& h) {
            int f = idx->morphism_index(h.id);
            if (f < 0) throw IllFormedError("representable: foreign generator " + h.id);
            return FormalChain::single({0, idx->morphism(idx->compose(gg, f)).name});
        }));
    }
    auto idx = index;
    ChainDiagram::CellsFn cells = [idx, i](int degree) {
        std::vector<CellularCell> out;
        if (degree == 0) out.push_back({i, {0, idx->morphism(idx->identity(i)).name}});
        return out;
    };
    return ChainDiagram(std::move(index), std::move(at), std::move(arrows), 2,
                        std::move(cells));
}

ChainDiagram diagram_tensor_const(const ChainComplex& c, const ChainDiagram& d,
                                  std::string name) {
    std::vector<ChainComplex> at;
    for (int j = 0; j < d.index().num_objects(); ++j)
        at.push_back(tensor(c, d.at(j),
                            name.empty() ? "" : name + "." + d.index().object_name(j)));
    std::vector<ChainMap> arrows;
    for (int f = 0; f < d.index().num_morphisms(); ++f) {
        const auto& m = d.index().morphism(f);
        arrows.push_back(
            tensor_map(ChainMap::identity(c), d.arrow(f), at[m.dom], at[m.cod]));
    }
    std::optional<ChainDiagram::CellsFn> cells;
    if (c.effective() && d.cellular()) {
        ChainComplex cc = c;
        ChainDiagram dd = d;
        cells = [cc, dd](int degree) {
            std::vector<CellularCell> out;
            for (int p = 0; p <= degree; ++p)
                for (const GenKey& x : cc.basis(p))
                    for (const CellularCell& cell : dd.cells(degree - p))
                        out.push_back(
                            {cell.obj,
                             {degree, keyenc::node("t", {std::to_string(p), x.id,
                                                         cell.gen.id})}});
            return out;
        };
    }
    return ChainDiagram(d.index_ptr(), std::move(at), std::move(arrows), -1,
                        std::move(cells));
}

ChainDiagram external_tensor(const ChainDiagram& a, const ChainDiagram& b,
                             std::string name) {
    FiniteCategoryPtr index = product_category(a.index_ptr(), b.index_ptr());
    int ob = b.index().num_objects();
    int mb = b.index().num_morphisms();
    std::vector<ChainComplex> at;
    for (int x = 0; x < a.index().num_objects(); ++x)
        for (int y = 0; y < ob; ++y)
            at.push_back(tensor(a.at(x), b.at(y),
                                name.empty() ? "" : name + "." + index->object_name(x * ob + y)));
    std::vector<ChainMap> arrows;
    for (int f = 0; f < a.index().num_morphisms(); ++f)
        for (int g = 0; g < mb; ++g) {
            const auto& mf = a.index().morphism(f);
            const auto& mg = b.index().morphism(g);
            arrows.push_back(tensor_map(a.arrow(f), b.arrow(g),
                                        at[mf.dom * ob + mg.dom], at[mf.cod * ob + mg.cod]));
        }
    std::optional<ChainDiagram::CellsFn> cells;
    if (a.cellular() && b.cellular()) {
        ChainDiagram aa = a, bb = b;
        int obc = ob;
        cells = [aa, bb, obc](int degree) {
            std::vector<CellularCell> out;
            for (int p = 0; p <= degree; ++p)
                for (const CellularCell& ca : aa.cells(p))
                    for (const CellularCell& cb : bb.cells(degree - p))
                        out.push_back(
                            {ca.obj * obc + cb.obj,
                             {degree, keyenc::node("t", {std::to_string(p), ca.gen.id,
                                                         cb.gen.id})}});
            return out;
        };
    }
    return ChainDiagram(std::move(index), std::move(at), std::move(arrows), -1,
                        std::move(cells));
}

std::map<GenKey, CellOrigin> cellular_decomposition(const ChainDiagram& d, int obj,
                                                    int degree) {
    std::map<GenKey, CellOrigin> out;
    std::vector<CellularCell> cells = d.cells(degree);
    for (size_t a = 0; a < cells.size(); ++a) {
        for (int f : d.index().hom(cells[a].obj, obj)) {
            FormalChain img = d.arrow(f).apply_gen(cells[a].gen);
            if (img.size() != 1 || img.begin()->second != 1)
                throw AuditError("cellular basis: pushforward of " + cells[a].gen.id +
                                 " along " + d.index().morphism(f).name +
                                 " is not a basis generator");
            const GenKey& g = img.begin()->first;
            if (!out.emplace(g, CellOrigin{a, f}).second)
                throw AuditError("cellular basis: generator " + g.id + " covered twice");
        }
    }
    if (d.at(obj).effective()) {
        std::vector<GenKey> basis = d.at(obj).basis(degree);
        if (basis.size() != out.size())
            throw AuditError("cellular basis: cover misses part of the basis at " +
                             d.index().object_name(obj));
        for (const GenKey& g : basis)
            if (!out.count(g))
                throw AuditError("cellular basis: generator " + g.id + " not covered");
    }
    return out;
}

FEAbDiagram degree_slice(const ChainDiagram& d, int degree) {
    if (!d.effective())
        throw UnsupportedError("degree slice needs effective values");
    std::vector<FEAbGroup> at;
    std::vector<std::vector<GenKey>> bases;
    for (int j = 0; j < d.index().num_objects(); ++j) {
        bases.push_back(d.at(j).basis(degree));
        at.push_back(FEAbGroup::from_orders(std::vector<Int>(bases.back().size(), 0)));
    }
    std::vector<ComputableHom> arrows;
    for (int f = 0; f < d.index().num_morphisms(); ++f) {
        const auto& m = d.index().morphism(f);
        arrows.push_back(hom_from_ambient_matrix(
            at[m.dom], at[m.cod], map_matrix(d.arrow(f), bases[m.dom], bases[m.cod])));
    }
    return FEAbDiagram(d.index_ptr(), std::move(at), std::move(arrows));
}

// --- objectwise reductions and spans ---------------------------------------

namespace {

CheckReport naturality_probe(const ChainDiagram& dom_diag, const ChainDiagram& cod_diag,
                             const std::vector<ChainMap>& maps, int max_degree,
                             const std::string& what) {
    CheckReport rep;
    for (int f = 0; f < dom_diag.index().num_morphisms(); ++f) {
        const auto& m = dom_diag.index().morphism(f);
        for (const GenKey& g : chain_probes(dom_diag.at(m.dom), max_degree)) {
            FormalChain via_cod = cod_diag.arrow(f).apply(maps[m.dom].apply_gen(g));
            FormalChain via_dom = maps[m.cod].apply(dom_diag.arrow(f).apply_gen(g));
            if (via_cod != via_dom) {
                rep.ok = false;
                rep.witness = what + " not natural along " + m.name + " at " + g.id + "@" +
                              std::to_string(g.degree);
                return rep;
            }
        }
    }
    return rep;
}

}  // namespace

CheckReport verify_diagram_reduction(const DiagramReduction& r, int max_degree) {
    CheckReport rep;
    int n = r.top.index().num_objects();
    if (static_cast<int>(r.at.size()) != n ||
        r.top.index_ptr().get() != r.bottom.index_ptr().get()) {
        rep.ok = false;
        rep.witness = "objectwise data does not match the index";
        return rep;
    }
    for (int o = 0; o < n; ++o) {
        rep = verify_reduction(r.at[o], chain_probes(r.top.at(o), max_degree),
                               chain_probes(r.bottom.at(o), max_degree));
        if (!rep.ok) {
            rep.witness = "object " + r.top.index().object_name(o) + ": " + rep.witness;
            return rep;
        }
    }
    std::vector<ChainMap> alphas, betas, etas;
    for (const Reduction& red : r.at) {
        alphas.push_back(red.alpha);
        betas.push_back(red.beta);
        etas.push_back(red.eta);
    }
    rep = naturality_probe(r.top, r.bottom, alphas, max_degree, "alpha");
    if (!rep.ok) return rep;
    rep = naturality_probe(r.bottom, r.top, betas, max_degree, "beta");
    if (!rep.ok) return rep;
    return naturality_probe(r.top, r.top, etas, max_degree, "eta");
}

CheckReport verify_diagram_equivalence(const DiagramEquivalence& e, int max_degree) {
    CheckReport rep;
    int n = e.left.index().num_objects();
    if (static_cast<int>(e.at.size()) != n ||
        e.left.index_ptr().get() != e.right.index_ptr().get()) {
        rep.ok = false;
        rep.witness = "objectwise data does not match the index";
        return rep;
    }
    std::vector<ChainMap> to_left, to_right;
    for (int o = 0; o < n; ++o) {
        const Equivalence& eq = e.at[o];
        std::vector<GenKey> top_probes = chain_probes(eq.left.top, max_degree);
        rep = verify_equivalence(eq, top_probes, chain_probes(e.left.at(o), max_degree),
                                 chain_probes(e.right.at(o), max_degree));
        if (!rep.ok) {
            rep.witness = "object " + e.left.index().object_name(o) + ": " + rep.witness;
            return rep;
        }
        to_left.push_back(eq.left.alpha.compose_after(eq.right.beta));
        to_right.push_back(eq.right.alpha.compose_after(eq.left.beta));
    }
    rep = naturality_probe(e.right, e.left, to_left, max_degree, "transfer to values");
    if (!rep.ok) return rep;
    return naturality_probe(e.left, e.right, to_right, max_degree, "transfer to effective");
}

DiagramEquivalence tensor_const_equivalence(const Equivalence& ce,
                                            const DiagramEquivalence& de,
                                            std::string name) {
    std::vector<Equivalence> at;
    for (int j = 0; j < de.left.index().num_objects(); ++j)
        at.push_back(tensor_equivalence(ce, de.at[j]));
    ChainDiagram left = diagram_tensor_const(ce.left.bottom, de.left,
                                             name.empty() ? "" : name + ".l");
    ChainDiagram right = diagram_tensor_const(ce.right.bottom, de.right,
                                              name.empty() ? "" : name + ".r");
    return {std::move(left), std::move(right), std::move(at)};
}

}  // namespace effho
