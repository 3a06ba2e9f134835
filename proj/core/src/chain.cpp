#include "effho/chain.hpp"

#include <mutex>
#include <sstream>

namespace effho {

FormalChain FormalChain::single(GenKey g, Int coeff) {
    FormalChain c;
    c.add(g, coeff);
    return c;
}

void FormalChain::add(const GenKey& g, const Int& coeff) {
    if (coeff == 0) return;
    auto it = terms_.find(g);
    if (it == terms_.end()) {
        terms_.emplace(g, coeff);
        return;
    }
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
}

Int FormalChain::coeff(const GenKey& g) const {
    auto it = terms_.find(g);
    return it == terms_.end() ? Int(0) : it->second;
}

FormalChain& FormalChain::operator+=(const FormalChain& o) {
    for (const auto& [g, c] : o.terms_) add(g, c);
    return *this;
}

FormalChain& FormalChain::operator-=(const FormalChain& o) {
    for (const auto& [g, c] : o.terms_) add(g, -c);
    return *this;
}

FormalChain FormalChain::operator+(const FormalChain& o) const {
    FormalChain r = *this;
    r += o;
    return r;
}

FormalChain FormalChain::operator-(const FormalChain& o) const {
    FormalChain r = *this;
    r -= o;
    return r;
}

FormalChain FormalChain::operator*(const Int& c) const {
    FormalChain r;
    if (c == 0) return r;
    for (const auto& [g, v] : terms_) r.terms_.emplace(g, v * c);
    return r;
}

FormalChain FormalChain::operator-() const { return *this * Int(-1); }

std::string FormalChain::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [g, c] : terms_) {
        if (!first) os << " + ";
        os << c.str() << "*" << g.id << "@" << g.degree;
        first = false;
    }
    return os.str();
}

struct ChainComplex::Impl {
    std::string name;
    InBasisFn in_basis;
    DiffFn diff;
    std::optional<BasisFn> basis;
};

ChainComplex::ChainComplex(std::string name, InBasisFn in_basis, DiffFn diff,
                           std::optional<BasisFn> basis)
    : impl_(std::make_shared<Impl>(
          Impl{std::move(name), std::move(in_basis), std::move(diff), std::move(basis)})) {}

const std::string& ChainComplex::name() const { return impl_->name; }
bool ChainComplex::effective() const { return impl_->basis.has_value(); }
bool ChainComplex::in_basis(const GenKey& g) const { return impl_->in_basis(g); }

FormalChain ChainComplex::diff(const GenKey& g) const { return impl_->diff(g); }

FormalChain ChainComplex::diff(const FormalChain& c) const {
    FormalChain out;
    for (const auto& [g, v] : c) out += impl_->diff(g) * v;
    return out;
}

std::vector<GenKey> ChainComplex::basis(int degree) const {
    if (!impl_->basis)
        throw UnsupportedError("complex '" + impl_->name + "' cannot enumerate a basis");
    if (degree < 0) return {};
    return (*impl_->basis)(degree);
}

ChainMap::ChainMap(ChainComplex dom, ChainComplex cod, int shift,
                   std::function<FormalChain(const GenKey&)> on_gen)
    : dom_(std::move(dom)), cod_(std::move(cod)), shift_(shift), on_gen_(std::move(on_gen)) {}

ChainMap ChainMap::identity(const ChainComplex& c) {
    return ChainMap(c, c, 0, [](const GenKey& g) { return FormalChain::single(g); });
}

ChainMap ChainMap::zero(ChainComplex dom, ChainComplex cod, int shift) {
    return ChainMap(std::move(dom), std::move(cod), shift,
                    [](const GenKey&) { return FormalChain(); });
}

FormalChain ChainMap::apply_gen(const GenKey& g) const { return on_gen_(g); }

FormalChain ChainMap::apply(const FormalChain& c) const {
    FormalChain out;
    for (const auto& [g, v] : c) out += on_gen_(g) * v;
    return out;
}

ChainMap ChainMap::compose_after(const ChainMap& first) const {
    if (!first.cod_.same(dom_))
        throw ComplexMismatchError("chain map composition: middle complexes differ");
    ChainMap self = *this, f = first;
    return ChainMap(first.dom_, cod_, shift_ + first.shift_,
                    [self, f](const GenKey& g) { return self.apply(f.apply_gen(g)); });
}

ChainMap ChainMap::operator+(const ChainMap& o) const {
    if (!dom_.same(o.dom_) || !cod_.same(o.cod_) || shift_ != o.shift_)
        throw ComplexMismatchError("chain map sum: shapes differ");
    ChainMap a = *this, b = o;
    return ChainMap(dom_, cod_, shift_,
                    [a, b](const GenKey& g) { return a.apply_gen(g) + b.apply_gen(g); });
}

ChainMap ChainMap::operator-(const ChainMap& o) const {
    if (!dom_.same(o.dom_) || !cod_.same(o.cod_) || shift_ != o.shift_)
        throw ComplexMismatchError("chain map difference: shapes differ");
    ChainMap a = *this, b = o;
    return ChainMap(dom_, cod_, shift_,
                    [a, b](const GenKey& g) { return a.apply_gen(g) - b.apply_gen(g); });
}

ChainMap ChainMap::operator-() const { return scaled(-1); }

ChainMap ChainMap::scaled(const Int& c) const {
    ChainMap a = *this;
    Int k = c;
    return ChainMap(dom_, cod_, shift_, [a, k](const GenKey& g) { return a.apply_gen(g) * k; });
}

ChainMap ChainMap::rehomed(ChainComplex new_dom, ChainComplex new_cod) const {
    return ChainMap(std::move(new_dom), std::move(new_cod), shift_, on_gen_);
}

ChainMap ChainMap::memoized() const {
    auto cache = std::make_shared<std::map<GenKey, FormalChain>>();
    auto mtx = std::make_shared<std::mutex>();
    auto fn = on_gen_;
    return ChainMap(dom_, cod_, shift_, [cache, mtx, fn](const GenKey& g) {
        {
            std::lock_guard<std::mutex> lock(*mtx);
            auto it = cache->find(g);
            if (it != cache->end()) return it->second;
        }
        FormalChain v = fn(g);
        std::lock_guard<std::mutex> lock(*mtx);
        return cache->emplace(g, std::move(v)).first->second;
    });
}

// --- basic complexes -------------------------------------------------------

ChainComplex zero_complex(std::string name) {
    return ChainComplex(
        std::move(name), [](const GenKey&) { return false; },
        [](const GenKey&) { return FormalChain(); },
        [](int) { return std::vector<GenKey>(); });
}

ChainComplex single_gen_complex(int degree, std::string id, std::string name) {
    if (name.empty()) name = "Z[" + std::to_string(degree) + "]";
    return ChainComplex(
        std::move(name),
        [degree, id](const GenKey& g) { return g.degree == degree && g.id == id; },
        [](const GenKey&) { return FormalChain(); },
        [degree, id](int d) {
            std::vector<GenKey> b;
            if (d == degree) b.push_back({degree, id});
            return b;
        });
}

ChainComplex point_complex() { return single_gen_complex(0, "pt", "pt"); }

namespace {

bool parse_index(const std::string& s, size_t bound, size_t& out) {
    if (s.empty() || s.size() > 9) return false;
    size_t v = 0;
    for (char ch : s) {
        if (ch < '0' || ch > '9') return false;
        v = v * 10 + static_cast<size_t>(ch - '0');
    }
    if (v >= bound) return false;
    out = v;
    return true;
}

}  // namespace

ChainComplex direct_sum(std::vector<ChainComplex> parts, std::string name) {
    if (name.empty()) {
        name = "sum(";
        for (size_t i = 0; i < parts.size(); ++i)
            name += (i ? "," : "") + parts[i].name();
        name += ")";
    }
    auto ps = std::make_shared<std::vector<ChainComplex>>(std::move(parts));
    bool eff = true;
    for (const auto& p : *ps) eff = eff && p.effective();

    auto in_basis = [ps](const GenKey& g) {
        auto node = keyenc::try_parse_node(g.id);
        if (!node || node->tag != "s" || node->fields.size() != 2) return false;
        size_t i;
        if (!parse_index(node->fields[0], ps->size(), i)) return false;
        return (*ps)[i].in_basis({g.degree, node->fields[1]});
    };
    auto diff = [ps](const GenKey& g) {
        auto node = keyenc::try_parse_node(g.id);
        if (!node || node->tag != "s" || node->fields.size() != 2)
            throw IllFormedError("direct sum: generator id is not tagged: " + g.id);
        size_t i;
        if (!parse_index(node->fields[0], ps->size(), i))
            throw IllFormedError("direct sum: bad part index in " + g.id);
        FormalChain inner = (*ps)[i].diff({g.degree, node->fields[1]});
        FormalChain out;
        for (const auto& [h, c] : inner)
            out.add({h.degree, keyenc::node("s", {node->fields[0], h.id})}, c);
        return out;
    };
    std::optional<ChainComplex::BasisFn> basis;
    if (eff)
        basis = [ps](int d) {
            std::vector<GenKey> out;
            for (size_t i = 0; i < ps->size(); ++i)
                for (const GenKey& g : (*ps)[i].basis(d))
                    out.push_back({d, keyenc::node("s", {std::to_string(i), g.id})});
            return out;
        };
    return ChainComplex(std::move(name), std::move(in_basis), std::move(diff), std::move(basis));
}

ChainComplex direct_sum_family(std::string name, std::function<ChainComplex(int)> part,
                               std::function<int(int)> parts_touching_degree) {
    struct Cache {
        std::mutex mtx;
        std::map<int, ChainComplex> parts;
    };
    auto cache = std::make_shared<Cache>();
    auto get = [cache, part](int k) {
        std::lock_guard<std::mutex> lock(cache->mtx);
        auto it = cache->parts.find(k);
        if (it != cache->parts.end()) return it->second;
        return cache->parts.emplace(k, part(k)).first->second;
    };

    auto in_basis = [get, parts_touching_degree](const GenKey& g) {
        auto node = keyenc::try_parse_node(g.id);
        if (!node || node->tag != "s" || node->fields.size() != 2) return false;
        size_t k;
        size_t bound = g.degree < 0 ? 0 : static_cast<size_t>(parts_touching_degree(g.degree));
        if (!parse_index(node->fields[0], bound, k)) return false;
        return get(static_cast<int>(k)).in_basis({g.degree, node->fields[1]});
    };
    auto diff = [get](const GenKey& g) {
        auto node = keyenc::try_parse_node(g.id);
        if (!node || node->tag != "s" || node->fields.size() != 2)
            throw IllFormedError("graded sum: generator id is not tagged: " + g.id);
        size_t k;
        if (!parse_index(node->fields[0], g.degree < 0 ? 0 : size_t(g.degree) + 1, k))
            throw IllFormedError("graded sum: bad part index in " + g.id);
        FormalChain inner = get(static_cast<int>(k)).diff({g.degree, node->fields[1]});
        FormalChain out;
        for (const auto& [h, c] : inner)
            out.add({h.degree, keyenc::node("s", {node->fields[0], h.id})}, c);
        return out;
    };
    auto basis = [get, parts_touching_degree](int d) {
        std::vector<GenKey> out;
        int n = parts_touching_degree(d);
        for (int k = 0; k < n; ++k)
            for (const GenKey& g : get(k).basis(d))
                out.push_back({d, keyenc::node("s", {std::to_string(k), g.id})});
        return out;
    };
    return ChainComplex(std::move(name), std::move(in_basis), std::move(diff), std::move(basis));
}

ChainComplex tensor(ChainComplex a, ChainComplex b, std::string name) {
    if (name.empty()) name = a.name() + "(x)" + b.name();
    auto in_basis = [a, b](const GenKey& g) {
        auto node = keyenc::try_parse_node(g.id);
        if (!node || node->tag != "t" || node->fields.size() != 3) return false;
        size_t p;
        if (!parse_index(node->fields[0], size_t(g.degree < 0 ? 0 : g.degree) + 1, p))
            return false;
        return a.in_basis({static_cast<int>(p), node->fields[1]}) &&
               b.in_basis({g.degree - static_cast<int>(p), node->fields[2]});
    };
    auto diff = [a, b](const GenKey& g) {
        auto node = keyenc::try_parse_node(g.id);
        if (!node || node->tag != "t" || node->fields.size() != 3)
            throw IllFormedError("tensor: generator id is not tagged: " + g.id);
        size_t pz;
        if (!parse_index(node->fields[0], size_t(g.degree < 0 ? 0 : g.degree) + 1, pz))
            throw IllFormedError("tensor: bad left degree in " + g.id);
        int p = static_cast<int>(pz);
        int q = g.degree - p;
        FormalChain out;
        for (const auto& [h, c] : a.diff({p, node->fields[1]}))
            out.add({g.degree - 1,
                     keyenc::node("t", {std::to_string(p - 1), h.id, node->fields[2]})},
                    c);
        Int sign = (p % 2 == 0) ? 1 : -1;
        for (const auto& [h, c] : b.diff({q, node->fields[2]}))
            out.add({g.degree - 1, keyenc::node("t", {std::to_string(p), node->fields[1], h.id})},
                    c * sign);
        return out;
    };
    std::optional<ChainComplex::BasisFn> basis;
    if (a.effective() && b.effective())
        basis = [a, b](int d) {
            std::vector<GenKey> out;
            for (int p = 0; p <= d; ++p)
                for (const GenKey& x : a.basis(p))
                    for (const GenKey& y : b.basis(d - p))
                        out.push_back({d, keyenc::node("t", {std::to_string(p), x.id, y.id})});
            return out;
        };
    return ChainComplex(std::move(name), std::move(in_basis), std::move(diff), std::move(basis));
}

ChainComplex suspend(ChainComplex c, int k) {
    if (k < 0) throw IllFormedError("suspend: negative shift");
    if (k == 0) return c;
    std::string name = "s^" + std::to_string(k) + "(" + c.name() + ")";
    Int sign = (k % 2 == 0) ? 1 : -1;
    auto in_basis = [c, k](const GenKey& g) {
        return g.degree >= k && c.in_basis({g.degree - k, g.id});
    };
    auto diff = [c, k, sign](const GenKey& g) {
        FormalChain out;
        for (const auto& [h, v] : c.diff({g.degree - k, g.id}))
            out.add({h.degree + k, h.id}, v * sign);
        return out;
    };
    std::optional<ChainComplex::BasisFn> basis;
    if (c.effective())
        basis = [c, k](int d) {
            std::vector<GenKey> out;
            if (d < k) return out;
            for (const GenKey& g : c.basis(d - k)) out.push_back({d, g.id});
            return out;
        };
    return ChainComplex(std::move(name), std::move(in_basis), std::move(diff), std::move(basis));
}

ChainMap tensor_map(const ChainMap& f, const ChainMap& g, ChainComplex dom, ChainComplex cod) {
    if (f.shift() != 0 || g.shift() != 0)
        throw ComplexMismatchError("tensor map: only degree 0 factors are supported");
    ChainMap ff = f, gg = g;
    auto on_gen = [ff, gg](const GenKey& h) {
        auto node = keyenc::try_parse_node(h.id);
        if (!node || node->tag != "t" || node->fields.size() != 3)
            throw IllFormedError("tensor map: generator id is not tagged: " + h.id);
        size_t pz;
        if (!parse_index(node->fields[0], size_t(h.degree < 0 ? 0 : h.degree) + 1, pz))
            throw IllFormedError("tensor map: bad left degree in " + h.id);
        int p = static_cast<int>(pz);
        FormalChain out;
        for (const auto& [x, cx] : ff.apply_gen({p, node->fields[1]}))
            for (const auto& [y, cy] : gg.apply_gen({h.degree - p, node->fields[2]}))
                out.add({h.degree, keyenc::node("t", {std::to_string(x.degree), x.id, y.id})},
                        cx * cy);
        return out;
    };
    return ChainMap(std::move(dom), std::move(cod), 0, std::move(on_gen));
}

// --- matrices and homology -------------------------------------------------

IntMatrix map_matrix(const ChainMap& f, const std::vector<GenKey>& cols,
                     const std::vector<GenKey>& rows) {
    std::map<GenKey, size_t> row_of;
    for (size_t i = 0; i < rows.size(); ++i) row_of.emplace(rows[i], i);
    IntMatrix m(rows.size(), cols.size());
    for (size_t j = 0; j < cols.size(); ++j) {
        for (const auto& [g, c] : f.apply_gen(cols[j])) {
            auto it = row_of.find(g);
            if (it == row_of.end())
                throw AuditError("map image leaves the enumerated basis at " + g.id);
            m.at(it->second, j) = c;
        }
    }
    return m;
}

ChainMap diff_map(const ChainComplex& c) {
    ChainComplex cc = c;
    return ChainMap(c, c, -1, [cc](const GenKey& g) { return cc.diff(g); });
}

IntMatrix boundary_matrix(const ChainComplex& c, int degree) {
    std::vector<GenKey> cols = c.basis(degree);
    std::vector<GenKey> rows = c.basis(degree - 1);
    std::map<GenKey, size_t> row_of;
    for (size_t i = 0; i < rows.size(); ++i) row_of.emplace(rows[i], i);
    IntMatrix m(rows.size(), cols.size());
    for (size_t j = 0; j < cols.size(); ++j) {
        for (const auto& [g, v] : c.diff(cols[j])) {
            auto it = row_of.find(g);
            if (it == row_of.end())
                throw AuditError("differential leaves the enumerated basis at " + g.id);
            m.at(it->second, j) = v;
        }
    }
    return m;
}

HomologyResult homology(const ChainComplex& c, int degree) {
    std::vector<GenKey> gens = c.basis(degree);
    IntMatrix dn = boundary_matrix(c, degree);
    IntMatrix cycles = kernel_basis(dn);
    IntMatrix boundaries = boundary_matrix(c, degree + 1);
    FEAbGroup h = FEAbGroup::sub_quotient(cycles, boundaries);

    std::vector<FormalChain> reps;
    for (size_t j = 0; j < h.rank(); ++j) {
        std::vector<Int> e(h.rank());
        e[j] = 1;
        std::vector<Int> x = h.lift(e);
        FormalChain rep;
        for (size_t i = 0; i < gens.size(); ++i) rep.add(gens[i], x[i]);
        reps.push_back(std::move(rep));
    }
    return {std::move(h), std::move(reps)};
}

}  // namespace effho
