#include "effho/abelian.hpp"

#include <sstream>

namespace effho {

FEAbGroup::FEAbGroup() : u_(IntMatrix::identity(0)), lift_cols_(0, 0) {}

FEAbGroup FEAbGroup::from_orders(const std::vector<Int>& raw_orders) {
    size_t m = raw_orders.size();
    size_t t = 0;
    for (const Int& q : raw_orders)
        if (q != 0) ++t;
    IntMatrix rel(m, t);
    size_t c = 0;
    for (size_t i = 0; i < m; ++i)
        if (raw_orders[i] != 0) rel.at(i, c++) = raw_orders[i];
    return from_presentation(m, rel);
}

FEAbGroup FEAbGroup::from_presentation(size_t ambient, const IntMatrix& relations) {
    if (relations.rows() != ambient)
        throw IllFormedError("presentation: relation rows != ambient dim");
    FEAbGroup g;
    g.ambient_ = ambient;
    SmithResult snf = smith_normal_form(relations);
    // y = U x; quotient splits as sum of Z/d_i (rows < rank) and Z (rest).
    for (size_t i = 0; i < snf.rank; ++i) {
        const Int& d = snf.s.at(i, i);
        if (d >= 2) {
            g.orders_.push_back(d);
            g.coord_rows_.push_back(i);
        }
    }
    g.torsion_count_ = g.orders_.size();
    for (size_t i = snf.rank; i < ambient; ++i) {
        g.orders_.push_back(0);
        g.coord_rows_.push_back(i);
    }
    g.u_ = snf.u;
    g.lift_cols_ = IntMatrix(ambient, g.orders_.size());
    for (size_t j = 0; j < g.coord_rows_.size(); ++j)
        for (size_t i = 0; i < ambient; ++i)
            g.lift_cols_.at(i, j) = snf.uinv.at(i, g.coord_rows_[j]);
    return g;
}

FEAbGroup FEAbGroup::sub_quotient(const IntMatrix& lattice, const IntMatrix& relations) {
    if (relations.rows() != lattice.rows())
        throw IllFormedError("sub_quotient: ambient dims differ");
    size_t k = lattice.cols();
    IntMatrix rel_in_lattice(k, relations.cols());
    for (size_t j = 0; j < relations.cols(); ++j) {
        std::vector<Int> b(relations.rows());
        for (size_t i = 0; i < relations.rows(); ++i) b[i] = relations.at(i, j);
        std::vector<Int> w;
        if (!solve(lattice, b, w))
            throw AuditError("sub_quotient: relation column " + std::to_string(j) +
                             " is outside the lattice");
        for (size_t i = 0; i < k; ++i) rel_in_lattice.at(i, j) = w[i];
    }
    FEAbGroup g = from_presentation(k, rel_in_lattice);
    // Rebase representatives to the outer ambient coordinates.
    g.lift_cols_ = lattice * g.lift_cols_;
    g.lattice_ = lattice;
    g.ambient_ = lattice.rows();
    return g;
}

std::vector<Int> FEAbGroup::decide(const std::vector<Int>& representative) const {
    std::vector<Int> w;
    if (lattice_) {
        if (representative.size() != ambient_)
            throw IllFormedError("decide: representative has wrong length");
        if (!solve(*lattice_, representative, w))
            throw IllFormedError("decide: representative is not in the subgroup");
    } else {
        if (representative.size() != ambient_)
            throw IllFormedError("decide: representative has wrong length");
        w = representative;
    }
    std::vector<Int> y = u_.apply(w);
    std::vector<Int> coords(orders_.size());
    for (size_t j = 0; j < coord_rows_.size(); ++j) coords[j] = y[coord_rows_[j]];
    return normalize(std::move(coords));
}

std::vector<Int> FEAbGroup::lift(const std::vector<Int>& coords) const {
    if (coords.size() != orders_.size()) throw IllFormedError("lift: wrong coordinate count");
    return lift_cols_.apply(coords);
}

std::vector<Int> FEAbGroup::normalize(std::vector<Int> coords) const {
    if (coords.size() != orders_.size())
        throw IllFormedError("normalize: wrong coordinate count");
    for (size_t i = 0; i < torsion_count_; ++i) coords[i] = mod_pos(coords[i], orders_[i]);
    return coords;
}

std::string FEAbGroup::to_string() const {
    if (orders_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = torsion_count_; i < orders_.size(); ++i) {
        os << (first ? "" : " + ") << "Z";
        first = false;
    }
    for (size_t i = 0; i < torsion_count_; ++i) {
        os << (first ? "" : " + ") << "Z/" << orders_[i].str();
        first = false;
    }
    return os.str();
}

ComputableHom::ComputableHom(FEAbGroup domain, FEAbGroup codomain, IntMatrix mat)
    : dom_(std::move(domain)), cod_(std::move(codomain)), mat_(std::move(mat)) {
    if (mat_.rows() != cod_.rank() || mat_.cols() != dom_.rank())
        throw IllFormedError("hom: matrix shape does not match group ranks");
    for (size_t k = 0; k < cod_.torsion_count(); ++k)
        for (size_t j = 0; j < dom_.rank(); ++j)
            mat_.at(k, j) = mod_pos(mat_.at(k, j), cod_.orders()[k]);
    // order of a generator must annihilate its image
    for (size_t j = 0; j < dom_.rank(); ++j) {
        const Int& q = dom_.orders()[j];
        if (q == 0) continue;
        for (size_t k = 0; k < cod_.rank(); ++k) {
            const Int& p = cod_.orders()[k];
            Int v = q * mat_.at(k, j);
            bool ok = (p == 0) ? (v == 0) : (v % p == 0);
            if (!ok)
                throw AuditError("hom: image of generator " + std::to_string(j) +
                                 " is not killed by its order " + q.str());
        }
    }
}

ComputableHom ComputableHom::identity(const FEAbGroup& g) {
    return ComputableHom(g, g, IntMatrix::identity(g.rank()));
}

ComputableHom ComputableHom::zero(FEAbGroup domain, FEAbGroup codomain) {
    IntMatrix m(codomain.rank(), domain.rank());
    return ComputableHom(std::move(domain), std::move(codomain), std::move(m));
}

std::vector<Int> ComputableHom::apply(const std::vector<Int>& coords) const {
    return cod_.normalize(mat_.apply(coords));
}

ComputableHom ComputableHom::compose_after(const ComputableHom& first) const {
    if (!first.cod_.same_shape(dom_))
        throw ComplexMismatchError("hom composition: middle groups differ");
    return ComputableHom(first.dom_, cod_, mat_ * first.mat_);
}

ComputableHom ComputableHom::operator+(const ComputableHom& o) const {
    if (!dom_.same_shape(o.dom_) || !cod_.same_shape(o.cod_))
        throw ComplexMismatchError("hom sum: shapes differ");
    return ComputableHom(dom_, cod_, mat_ + o.mat_);
}

ComputableHom ComputableHom::operator-(const ComputableHom& o) const {
    if (!dom_.same_shape(o.dom_) || !cod_.same_shape(o.cod_))
        throw ComplexMismatchError("hom difference: shapes differ");
    return ComputableHom(dom_, cod_, mat_ - o.mat_);
}

bool ComputableHom::equal(const ComputableHom& o) const {
    if (!dom_.same_shape(o.dom_) || !cod_.same_shape(o.cod_)) return false;
    return mat_ == o.mat_;  // both reduced at construction
}

bool ComputableHom::is_zero() const { return mat_.is_zero(); }

ComputableHom hom_from_ambient_matrix(const FEAbGroup& dom, const FEAbGroup& cod,
                                      const IntMatrix& m) {
    if (m.rows() != cod.ambient_dim() || m.cols() != dom.ambient_dim())
        throw ComplexMismatchError("ambient hom: matrix shape does not match ambients");
    IntMatrix mat(cod.rank(), dom.rank());
    for (size_t j = 0; j < dom.rank(); ++j) {
        std::vector<Int> e(dom.rank(), 0);
        e[j] = 1;
        std::vector<Int> img = cod.decide(m.apply(dom.lift(e)));
        for (size_t i = 0; i < cod.rank(); ++i) mat.at(i, j) = img[i];
    }
    return ComputableHom(dom, cod, std::move(mat));
}

KernelResult kernel(const ComputableHom& f) {
    const FEAbGroup& a = f.domain();
    const FEAbGroup& b = f.codomain();
    size_t ra = a.rank(), tb = b.torsion_count();

    // K_lattice = { z in Z^ra : M z lies in the span of the codomain torsion
    // relations }, obtained by projecting the kernel of [M | D_B].
    IntMatrix md(b.rank(), ra + tb);
    for (size_t i = 0; i < b.rank(); ++i)
        for (size_t j = 0; j < ra; ++j) md.at(i, j) = f.matrix().at(i, j);
    for (size_t k = 0; k < tb; ++k) md.at(k, ra + k) = b.orders()[k];
    IntMatrix full_ker = kernel_basis(md);
    IntMatrix gens(ra, full_ker.cols());
    for (size_t j = 0; j < full_ker.cols(); ++j)
        for (size_t i = 0; i < ra; ++i) gens.at(i, j) = full_ker.at(i, j);
    IntMatrix lattice = column_lattice_basis(gens);

    IntMatrix rel(ra, a.torsion_count());
    for (size_t k = 0; k < a.torsion_count(); ++k) rel.at(k, k) = a.orders()[k];
    FEAbGroup kgroup = FEAbGroup::sub_quotient(lattice, rel);

    IntMatrix incl(ra, kgroup.rank());
    for (size_t j = 0; j < kgroup.rank(); ++j) {
        std::vector<Int> e(kgroup.rank());
        e[j] = 1;
        std::vector<Int> x = kgroup.lift(e);
        for (size_t i = 0; i < ra; ++i) incl.at(i, j) = x[i];
    }
    return {kgroup, ComputableHom(kgroup, a, std::move(incl))};
}

CokernelResult cokernel(const ComputableHom& f) {
    const FEAbGroup& b = f.codomain();
    size_t rb = b.rank(), tb = b.torsion_count();
    IntMatrix rel(rb, f.domain().rank() + tb);
    for (size_t i = 0; i < rb; ++i)
        for (size_t j = 0; j < f.domain().rank(); ++j) rel.at(i, j) = f.matrix().at(i, j);
    for (size_t k = 0; k < tb; ++k) rel.at(k, f.domain().rank() + k) = b.orders()[k];
    FEAbGroup c = FEAbGroup::from_presentation(rb, rel);

    IntMatrix proj(c.rank(), rb);
    for (size_t j = 0; j < rb; ++j) {
        std::vector<Int> e(rb);
        e[j] = 1;
        std::vector<Int> z = c.decide(e);
        for (size_t i = 0; i < c.rank(); ++i) proj.at(i, j) = z[i];
    }
    return {c, ComputableHom(b, c, std::move(proj))};
}

FEAbGroup direct_sum(const std::vector<FEAbGroup>& parts) {
    std::vector<Int> raw;
    for (const auto& p : parts)
        for (const Int& q : p.orders()) raw.push_back(q);
    return FEAbGroup::from_orders(raw);
}

HomGroup::HomGroup(FEAbGroup a, FEAbGroup b) : a_(std::move(a)), b_(std::move(b)) {
    for (size_t i = 0; i < a_.rank(); ++i)
        for (size_t j = 0; j < b_.rank(); ++j) {
            const Int& q = a_.orders()[i];
            const Int& p = b_.orders()[j];
            if (q == 0 && p == 0) {
                pairs_.emplace_back(i, j);
                multipliers_.push_back(1);
                raw_.push_back(0);
            } else if (q == 0) {
                pairs_.emplace_back(i, j);
                multipliers_.push_back(1);
                raw_.push_back(p);
            } else if (p == 0) {
                // Hom(Z/q, Z) = 0
            } else {
                Int g = effho::gcd(q, p);
                if (g >= 2) {
                    pairs_.emplace_back(i, j);
                    multipliers_.push_back(p / g);
                    raw_.push_back(g);
                }
            }
        }
    group_ = FEAbGroup::from_orders(raw_);
}

std::vector<Int> HomGroup::encode(const IntMatrix& hom_matrix) const {
    if (hom_matrix.rows() != b_.rank() || hom_matrix.cols() != a_.rank())
        throw IllFormedError("hom encode: matrix shape mismatch");
    // entries at pairs with Hom(Z/q, Z) = 0 must vanish
    for (size_t i = 0; i < a_.rank(); ++i)
        for (size_t j = 0; j < b_.rank(); ++j) {
            if (a_.orders()[i] != 0 && b_.orders()[j] == 0 && hom_matrix.at(j, i) != 0)
                throw AuditError("hom encode: torsion generator mapped into a free factor");
            if (a_.orders()[i] != 0 && b_.orders()[j] != 0) {
                Int g = effho::gcd(a_.orders()[i], b_.orders()[j]);
                if (g == 1 && mod_pos(hom_matrix.at(j, i), b_.orders()[j]) != 0)
                    throw AuditError("hom encode: image not killed by generator order");
            }
        }
    std::vector<Int> out(pairs_.size());
    for (size_t t = 0; t < pairs_.size(); ++t) {
        auto [i, j] = pairs_[t];
        const Int& p = b_.orders()[j];
        Int v = hom_matrix.at(j, i);
        if (p != 0) v = mod_pos(v, p);
        if (v % multipliers_[t] != 0)
            throw AuditError("hom encode: image not in the cyclic hom subgroup");
        out[t] = v / multipliers_[t];
    }
    return out;
}

IntMatrix HomGroup::decode(const std::vector<Int>& ambient) const {
    if (ambient.size() != pairs_.size()) throw IllFormedError("hom decode: wrong length");
    IntMatrix m(b_.rank(), a_.rank());
    for (size_t t = 0; t < pairs_.size(); ++t) {
        auto [i, j] = pairs_[t];
        const Int& p = b_.orders()[j];
        Int v = ambient[t] * multipliers_[t];
        if (p != 0) v = mod_pos(v, p);
        m.at(j, i) = v;
    }
    return m;
}

FEAbDiagram::FEAbDiagram(FiniteCategoryPtr index, std::vector<FEAbGroup> at,
                         std::vector<ComputableHom> arrows)
    : index_(std::move(index)), at_(std::move(at)), arrows_(std::move(arrows)) {
    const FiniteCategory& c = *index_;
    if (static_cast<int>(at_.size()) != c.num_objects() ||
        static_cast<int>(arrows_.size()) != c.num_morphisms())
        throw IllFormedError("abelian diagram: object/morphism count mismatch");
    for (int f = 0; f < c.num_morphisms(); ++f) {
        if (!arrows_[f].domain().same_shape(at_[c.morphism(f).dom]) ||
            !arrows_[f].codomain().same_shape(at_[c.morphism(f).cod]))
            throw AuditError("abelian diagram: arrow " + c.morphism(f).name +
                             " has wrong domain or codomain");
    }
    for (int o = 0; o < c.num_objects(); ++o)
        if (!arrows_[c.identity(o)].equal(ComputableHom::identity(at_[o])))
            throw AuditError("abelian diagram: identity of " + c.object_name(o) +
                             " is not the identity hom");
    for (int g = 0; g < c.num_morphisms(); ++g)
        for (int f = 0; f < c.num_morphisms(); ++f) {
            if (c.morphism(f).cod != c.morphism(g).dom) continue;
            if (!arrows_[c.compose(g, f)].equal(arrows_[g].compose_after(arrows_[f])))
                throw AuditError("abelian diagram: functoriality fails at " + c.morphism(g).name +
                                 " after " + c.morphism(f).name);
        }
}

FEAbDiagram FEAbDiagram::constant(FiniteCategoryPtr index, const FEAbGroup& g) {
    std::vector<FEAbGroup> at(index->num_objects(), g);
    std::vector<ComputableHom> arrows(index->num_morphisms(), ComputableHom::identity(g));
    return FEAbDiagram(std::move(index), std::move(at), std::move(arrows));
}

struct HomDiagramData {
    std::vector<HomGroup> object_homs;  // one per object
    std::vector<size_t> offsets;        // raw offsets per object
    FEAbGroup product;
    ComputableHom incl;  // kernel -> product (canonical coords)
    HomDiagramData(FEAbGroup p, ComputableHom i) : product(std::move(p)), incl(std::move(i)) {}
};

std::vector<IntMatrix> HomDiagramResult::decode(const std::vector<Int>& coords) const {
    std::vector<Int> pcan = data->incl.apply(coords);
    std::vector<Int> raw = data->product.lift(pcan);
    std::vector<IntMatrix> out;
    for (size_t o = 0; o < data->object_homs.size(); ++o) {
        size_t off = data->offsets[o];
        size_t len = data->object_homs[o].basis_size();
        std::vector<Int> slice(raw.begin() + off, raw.begin() + off + len);
        out.push_back(data->object_homs[o].decode(slice));
    }
    return out;
}

HomDiagramResult hom_diagram(const FEAbDiagram& pi, const FEAbDiagram& rho) {
    if (pi.index_ptr() != rho.index_ptr())
        throw ComplexMismatchError("hom_diagram: diagrams over different index categories");
    const FiniteCategory& c = pi.index();

    std::vector<HomGroup> object_homs;
    std::vector<size_t> offsets;
    std::vector<Int> praw_orders;
    for (int i = 0; i < c.num_objects(); ++i) {
        object_homs.emplace_back(pi.at(i), rho.at(i));
        offsets.push_back(praw_orders.size());
        for (const Int& q : object_homs.back().raw_orders()) praw_orders.push_back(q);
    }
    FEAbGroup product = FEAbGroup::from_orders(praw_orders);

    std::vector<int> arrow_list;
    for (int f = 0; f < c.num_morphisms(); ++f)
        if (!c.is_identity(f)) arrow_list.push_back(f);

    std::vector<HomGroup> arrow_homs;
    std::vector<size_t> arrow_offsets;
    std::vector<Int> qraw_orders;
    for (size_t ai = 0; ai < arrow_list.size(); ++ai) {
        int f = arrow_list[ai];
        arrow_homs.emplace_back(pi.at(c.morphism(f).dom), rho.at(c.morphism(f).cod));
        arrow_offsets.push_back(qraw_orders.size());
        for (const Int& q : arrow_homs.back().raw_orders()) qraw_orders.push_back(q);
    }
    FEAbGroup target = FEAbGroup::from_orders(qraw_orders);

    size_t praw = praw_orders.size(), qraw = qraw_orders.size();
    IntMatrix fraw(qraw, praw);
    for (int i = 0; i < c.num_objects(); ++i) {
        for (size_t t = 0; t < object_homs[i].basis_size(); ++t) {
            std::vector<Int> e(object_homs[i].basis_size());
            e[t] = 1;
            IntMatrix h = object_homs[i].decode(e);
            size_t col = offsets[i] + t;
            for (size_t ai = 0; ai < arrow_list.size(); ++ai) {
                int f = arrow_list[ai];
                IntMatrix contrib(rho.at(c.morphism(f).cod).rank(),
                                  pi.at(c.morphism(f).dom).rank());
                bool touched = false;
                if (c.morphism(f).dom == i) {
                    contrib = contrib + rho.arrow(f).matrix() * h;
                    touched = true;
                }
                if (c.morphism(f).cod == i) {
                    contrib = contrib - h * pi.arrow(f).matrix();
                    touched = true;
                }
                if (!touched) continue;
                std::vector<Int> enc = arrow_homs[ai].encode(contrib);
                for (size_t r = 0; r < enc.size(); ++r)
                    fraw.at(arrow_offsets[ai] + r, col) += enc[r];
            }
        }
    }

    // conjugate the raw matrix into canonical coordinates
    IntMatrix fcan(target.rank(), product.rank());
    for (size_t k = 0; k < product.rank(); ++k) {
        std::vector<Int> e(product.rank());
        e[k] = 1;
        std::vector<Int> z = target.decide(fraw.apply(product.lift(e)));
        for (size_t r = 0; r < target.rank(); ++r) fcan.at(r, k) = z[r];
    }
    ComputableHom bigf(product, target, std::move(fcan));
    KernelResult kr = kernel(bigf);

    auto data = std::make_shared<HomDiagramData>(product, kr.incl);
    data->object_homs = std::move(object_homs);
    data->offsets = std::move(offsets);
    return HomDiagramResult{kr.group, std::move(data)};
}

}  // namespace effho
