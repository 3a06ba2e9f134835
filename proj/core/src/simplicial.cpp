#include "effho/simplicial.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace effho {

std::string SimplexKey::to_string() const {
    if (degens.empty()) return base;
    std::string out = "s[";
    for (size_t i = 0; i < degens.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(degens[i]);
    }
    out += "](" + base + ")";
    return out;
}

std::string encode_key(const SimplexKey& k) {
    return keyenc::node("k", {keyenc::join_ints(k.degens), k.base});
}

SimplexKey decode_key(const std::string& s, int dim) {
    auto node = keyenc::parse_node(s);
    if (node.tag != "k" || node.fields.size() != 2)
        throw ParseError("not a simplex key: " + s);
    SimplexKey k;
    k.degens = keyenc::split_ints(node.fields[0]);
    k.base = node.fields[1];
    k.base_dim = dim - static_cast<int>(k.degens.size());
    if (k.base_dim < 0) throw ParseError("degeneracy word longer than dimension: " + s);
    return k;
}

SimplexKey insert_degeneracy(SimplexKey k, int i) {
    if (i < 0 || i > k.dim())
        throw IllFormedError("degeneracy index " + std::to_string(i) + " out of range for dim " +
                             std::to_string(k.dim()));
    size_t t = 0;
    while (t < k.degens.size() && i <= k.degens[t]) {
        ++k.degens[t];
        ++t;
    }
    k.degens.insert(k.degens.begin() + t, i);
    return k;
}

struct LESpace::Impl {
    std::string name;
    BaseValidFn base_valid;
    BaseFaceFn base_face;
    std::optional<EnumFn> nondeg;
};

LESpace::LESpace(std::string name, BaseValidFn base_valid, BaseFaceFn base_face,
                 std::optional<EnumFn> nondeg_enum)
    : impl_(std::make_shared<Impl>(Impl{std::move(name), std::move(base_valid),
                                        std::move(base_face), std::move(nondeg_enum)})) {}

const std::string& LESpace::name() const { return impl_->name; }
bool LESpace::enumerable() const { return impl_->nondeg.has_value(); }

bool LESpace::base_valid(const std::string& base, int dim) const {
    return dim >= 0 && impl_->base_valid(base, dim);
}

SimplexKey LESpace::base_face(const std::string& base, int dim, int i) const {
    return impl_->base_face(base, dim, i);
}

bool LESpace::valid(const SimplexKey& k) const {
    if (k.base_dim < 0) return false;
    for (size_t t = 0; t < k.degens.size(); ++t) {
        if (t > 0 && k.degens[t - 1] <= k.degens[t]) return false;
        int dim_when_applied = k.base_dim + static_cast<int>(k.degens.size() - 1 - t);
        if (k.degens[t] < 0 || k.degens[t] > dim_when_applied) return false;
    }
    return base_valid(k.base, k.base_dim);
}

SimplexKey LESpace::face(const SimplexKey& k, int i) const {
    if (k.dim() < 1 || i < 0 || i > k.dim())
        throw IllFormedError("face index " + std::to_string(i) + " out of range for dim " +
                             std::to_string(k.dim()));
    std::vector<int> collected;
    int cur = i;
    const auto& w = k.degens;
    for (size_t t = 0; t < w.size(); ++t) {
        int j = w[t];
        if (cur == j || cur == j + 1) {
            std::vector<int> word = collected;
            for (size_t r = t + 1; r < w.size(); ++r) word.push_back(w[r]);
            return {std::move(word), k.base, k.base_dim};
        }
        if (cur < j) {
            collected.push_back(j - 1);
        } else {
            collected.push_back(j);
            --cur;
        }
    }
    SimplexKey f = impl_->base_face(k.base, k.base_dim, cur);
    for (size_t t = collected.size(); t-- > 0;) f = insert_degeneracy(std::move(f), collected[t]);
    return f;
}

SimplexKey LESpace::degeneracy(const SimplexKey& k, int i) const {
    return insert_degeneracy(k, i);
}

std::vector<std::string> LESpace::nondeg(int dim) const {
    if (!impl_->nondeg)
        throw UnsupportedError("space '" + impl_->name + "' cannot enumerate simplices");
    if (dim < 0) return {};
    return (*impl_->nondeg)(dim);
}

SimplicialMap::SimplicialMap(LESpace dom, LESpace cod,
                             std::function<SimplexKey(const std::string&, int)> on_base)
    : dom_(std::move(dom)), cod_(std::move(cod)), on_base_(std::move(on_base)) {}

SimplicialMap SimplicialMap::identity(const LESpace& x) {
    return SimplicialMap(x, x, [](const std::string& base, int dim) {
        return SimplexKey{{}, base, dim};
    });
}

SimplexKey SimplicialMap::apply(const SimplexKey& k) const {
    SimplexKey img = on_base_(k.base, k.base_dim);
    for (size_t t = k.degens.size(); t-- > 0;) img = insert_degeneracy(std::move(img), k.degens[t]);
    return img;
}

SimplicialMap SimplicialMap::compose_after(const SimplicialMap& first) const {
    if (!first.cod_.same(dom_))
        throw ComplexMismatchError("simplicial map composition: middle spaces differ");
    SimplicialMap self = *this, f = first;
    return SimplicialMap(first.dom_, cod_, [self, f](const std::string& base, int dim) {
        return self.apply(f.apply({{}, base, dim}));
    });
}

// --- concrete spaces -------------------------------------------------------

LESpace empty_space() {
    return LESpace(
        "empty", [](const std::string&, int) { return false; },
        [](const std::string&, int, int) -> SimplexKey {
            throw IllFormedError("empty space has no simplices");
        },
        [](int) { return std::vector<std::string>(); });
}

LESpace point_space() {
    return LESpace(
        "pt", [](const std::string& b, int d) { return b == "*" && d == 0; },
        [](const std::string&, int, int) -> SimplexKey {
            throw IllFormedError("point: no positive-dimensional nondegenerate simplices");
        },
        [](int d) {
            std::vector<std::string> out;
            if (d == 0) out.push_back("*");
            return out;
        });
}

LESpace standard_simplex(int n) {
    if (n < 0) throw IllFormedError("standard simplex: negative dimension");
    auto parse = [](const std::string& b) { return keyenc::split_ints(b); };
    auto base_valid = [n, parse](const std::string& b, int d) {
        std::vector<int> v;
        try {
            v = parse(b);
        } catch (const std::exception&) {
            return false;
        }
        if (static_cast<int>(v.size()) != d + 1) return false;
        for (size_t i = 0; i < v.size(); ++i) {
            if (v[i] < 0 || v[i] > n) return false;
            if (i > 0 && v[i - 1] >= v[i]) return false;
        }
        return true;
    };
    auto base_face = [parse](const std::string& b, int d, int i) {
        if (d < 1) throw IllFormedError("standard simplex: face of a vertex");
        std::vector<int> v = parse(b);
        v.erase(v.begin() + i);
        return SimplexKey{{}, keyenc::join_ints(v), d - 1};
    };
    auto enumerate = [n](int d) {
        std::vector<std::string> out;
        if (d > n) return out;
        std::vector<int> pick(d + 1);
        for (int i = 0; i <= d; ++i) pick[i] = i;
        while (true) {
            out.push_back(keyenc::join_ints(pick));
            int t = d;
            while (t >= 0 && pick[t] == n - (d - t)) --t;
            if (t < 0) break;
            ++pick[t];
            for (int r = t + 1; r <= d; ++r) pick[r] = pick[r - 1] + 1;
        }
        return out;
    };
    return LESpace("D" + std::to_string(n), base_valid, base_face, enumerate);
}

LESpace finite_space(std::string name, std::map<int, std::vector<std::string>> dims,
                     std::map<std::string, std::vector<SimplexKey>> faces) {
    struct Data {
        std::map<int, std::vector<std::string>> dims;
        std::map<std::string, std::vector<SimplexKey>> faces;
        std::map<std::string, int> dim_of;
    };
    auto data = std::make_shared<Data>();
    data->dims = std::move(dims);
    data->faces = std::move(faces);
    for (const auto& [d, names] : data->dims) {
        if (d < 0) throw IllFormedError("finite space: negative dimension");
        for (const auto& s : names) {
            if (s.empty()) throw IllFormedError("finite space: empty simplex name");
            if (!data->dim_of.emplace(s, d).second)
                throw IllFormedError("finite space: duplicate simplex name " + s);
        }
    }
    for (const auto& [s, d] : data->dim_of) {
        if (d == 0) continue;
        auto it = data->faces.find(s);
        if (it == data->faces.end() || static_cast<int>(it->second.size()) != d + 1)
            throw IllFormedError("finite space: simplex " + s + " needs " + std::to_string(d + 1) +
                                 " faces");
        for (const SimplexKey& f : it->second) {
            if (f.dim() != d - 1)
                throw IllFormedError("finite space: face of " + s + " has wrong dimension");
            auto bt = data->dim_of.find(f.base);
            if (bt == data->dim_of.end() || bt->second != f.base_dim)
                throw IllFormedError("finite space: face of " + s + " has unknown base " + f.base);
        }
    }

    LESpace space(
        std::move(name),
        [data](const std::string& b, int d) {
            auto it = data->dim_of.find(b);
            return it != data->dim_of.end() && it->second == d;
        },
        [data](const std::string& b, int d, int i) -> SimplexKey {
            auto it = data->faces.find(b);
            if (it == data->faces.end() || d < 1)
                throw IllFormedError("finite space: no face table for " + b);
            return it->second[i];
        },
        [data](int d) {
            auto it = data->dims.find(d);
            return it == data->dims.end() ? std::vector<std::string>() : it->second;
        });

    // d_i d_j = d_{j-1} d_i for i < j, checked on every nondegenerate simplex
    for (const auto& [s, d] : data->dim_of) {
        if (d < 2) continue;
        SimplexKey k{{}, s, d};
        for (int j = 1; j <= d; ++j)
            for (int i = 0; i < j; ++i) {
                SimplexKey lhs = space.face(space.face(k, j), i);
                SimplexKey rhs = space.face(space.face(k, i), j - 1);
                if (lhs != rhs)
                    throw AuditError("finite space: d_" + std::to_string(i) + " d_" +
                                     std::to_string(j) + " fails on " + s);
            }
        for (const SimplexKey& f : data->faces.at(s))
            if (!space.valid(f))
                throw AuditError("finite space: face entry of " + s + " is not canonical");
    }
    return space;
}

// --- products --------------------------------------------------------------

namespace {

// pulls the letter j (present in the word) to the front and removes it
SimplexKey extract_letter(SimplexKey k, int j) {
    size_t t = 0;
    while (t < k.degens.size() && k.degens[t] != j) ++t;
    for (size_t r = 0; r < t; ++r) --k.degens[r];
    k.degens.erase(k.degens.begin() + t);
    return k;
}

}  // namespace

SimplexKey make_product_key(const SimplexKey& a, const SimplexKey& b) {
    if (a.dim() != b.dim())
        throw IllFormedError("product pair with different dimensions: " + a.to_string() + ", " +
                             b.to_string());
    SimplexKey x = a, y = b;
    std::vector<int> word;
    while (true) {
        std::set<int> wx(x.degens.begin(), x.degens.end());
        int j = -1;
        for (int v : y.degens)
            if (wx.count(v)) j = std::max(j, v);
        if (j < 0) break;
        x = extract_letter(std::move(x), j);
        y = extract_letter(std::move(y), j);
        word.push_back(j);
    }
    int base_dim = x.dim();
    return {std::move(word), keyenc::node("p", {encode_key(x), encode_key(y)}), base_dim};
}

std::pair<SimplexKey, SimplexKey> product_components(const SimplexKey& k) {
    auto node = keyenc::parse_node(k.base);
    if (node.tag != "p" || node.fields.size() != 2)
        throw ParseError("not a product simplex: " + k.base);
    SimplexKey a = decode_key(node.fields[0], k.base_dim);
    SimplexKey b = decode_key(node.fields[1], k.base_dim);
    for (size_t t = k.degens.size(); t-- > 0;) {
        a = insert_degeneracy(std::move(a), k.degens[t]);
        b = insert_degeneracy(std::move(b), k.degens[t]);
    }
    return {std::move(a), std::move(b)};
}

LESpace product_space(const LESpace& x, const LESpace& y) {
    auto base_valid = [x, y](const std::string& b, int d) {
        auto node = keyenc::try_parse_node(b);
        if (!node || node->tag != "p" || node->fields.size() != 2) return false;
        SimplexKey ka, kb;
        try {
            ka = decode_key(node->fields[0], d);
            kb = decode_key(node->fields[1], d);
        } catch (const ParseError&) {
            return false;
        }
        if (!x.valid(ka) || !y.valid(kb)) return false;
        std::set<int> wa(ka.degens.begin(), ka.degens.end());
        for (int v : kb.degens)
            if (wa.count(v)) return false;
        return true;
    };
    auto base_face = [x, y](const std::string& b, int d, int i) {
        SimplexKey k{{}, b, d};
        auto [ka, kb] = product_components(k);
        return make_product_key(x.face(ka, i), y.face(kb, i));
    };
    std::optional<LESpace::EnumFn> enumerate;
    if (x.enumerable() && y.enumerable()) {
        enumerate = [x, y](int n) {
            std::vector<std::string> out;
            if (n > 30) throw UnsupportedError("product enumeration beyond dimension 30");
            auto word_of = [n](unsigned mask) {
                std::vector<int> w;
                for (int j = n - 1; j >= 0; --j)
                    if (mask & (1u << j)) w.push_back(j);
                return w;
            };
            for (unsigned mx = 0; mx < (1u << n); ++mx) {
                std::vector<int> wx = word_of(mx);
                int p = n - static_cast<int>(wx.size());
                std::vector<std::string> xs = x.nondeg(p);
                if (xs.empty()) continue;
                for (unsigned my = 0; my < (1u << n); ++my) {
                    if (mx & my) continue;
                    std::vector<int> wy = word_of(my);
                    int q = n - static_cast<int>(wy.size());
                    for (const std::string& a : xs)
                        for (const std::string& b : y.nondeg(q))
                            out.push_back(keyenc::node(
                                "p", {encode_key({wx, a, p}), encode_key({wy, b, q})}));
                }
            }
            return out;
        };
    }
    return LESpace(x.name() + "x" + y.name(), std::move(base_valid), std::move(base_face),
                   std::move(enumerate));
}

SimplicialMap product_map(const SimplicialMap& f, const SimplicialMap& g,
                          const LESpace& dom_product, const LESpace& cod_product) {
    SimplicialMap ff = f, gg = g;
    return SimplicialMap(dom_product, cod_product, [ff, gg](const std::string& b, int d) {
        auto [ka, kb] = product_components({{}, b, d});
        return make_product_key(ff.apply(ka), gg.apply(kb));
    });
}

// --- nerves ----------------------------------------------------------------

SimplexKey nerve_key(const FiniteCategory& c, const std::vector<int>& chain, int obj) {
    for (size_t t = 0; t < chain.size(); ++t) {
        if (c.is_identity(chain[t])) {
            std::vector<int> rest = chain;
            rest.erase(rest.begin() + t);
            return insert_degeneracy(nerve_key(c, rest, obj), static_cast<int>(t));
        }
    }
    if (chain.empty()) return {{}, keyenc::node("o", {std::to_string(obj)}), 0};
    return {{}, keyenc::node("n", {keyenc::join_ints(chain)}), static_cast<int>(chain.size())};
}

std::pair<std::vector<int>, int> nerve_chain(const FiniteCategory& c, const std::string& base,
                                             int dim) {
    auto node = keyenc::parse_node(base);
    if (node.tag == "o" && node.fields.size() == 1 && dim == 0) {
        return {{}, std::stoi(node.fields[0])};
    }
    if (node.tag != "n" || node.fields.size() != 1)
        throw ParseError("not a nerve simplex: " + base);
    std::vector<int> chain = keyenc::split_ints(node.fields[0]);
    if (static_cast<int>(chain.size()) != dim)
        throw ParseError("nerve chain length does not match dimension: " + base);
    return {chain, c.morphism(chain[0]).dom};
}

LESpace nerve(FiniteCategoryPtr cp, std::string name) {
    const FiniteCategory* c = cp.get();
    auto base_valid = [cp, c](const std::string& b, int d) {
        auto node = keyenc::try_parse_node(b);
        if (!node || node->fields.size() != 1) return false;
        if (node->tag == "o") {
            if (d != 0) return false;
            try {
                int obj = std::stoi(node->fields[0]);
                return obj >= 0 && obj < c->num_objects() &&
                       node->fields[0] == std::to_string(obj);
            } catch (const std::exception&) {
                return false;
            }
        }
        if (node->tag != "n" || d < 1) return false;
        std::vector<int> chain;
        try {
            chain = keyenc::split_ints(node->fields[0]);
        } catch (const std::exception&) {
            return false;
        }
        if (static_cast<int>(chain.size()) != d) return false;
        for (size_t t = 0; t < chain.size(); ++t) {
            if (chain[t] < 0 || chain[t] >= c->num_morphisms()) return false;
            if (c->is_identity(chain[t])) return false;
            if (t > 0 && c->morphism(chain[t]).dom != c->morphism(chain[t - 1]).cod) return false;
        }
        return true;
    };
    auto base_face = [cp, c](const std::string& b, int d, int i) {
        auto [chain, obj] = nerve_chain(*c, b, d);
        if (d == 1) {
            int target = (i == 0) ? c->morphism(chain[0]).cod : c->morphism(chain[0]).dom;
            return nerve_key(*c, {}, target);
        }
        std::vector<int> rest;
        if (i == 0) {
            rest.assign(chain.begin() + 1, chain.end());
            return nerve_key(*c, rest, c->morphism(chain[0]).cod);
        }
        if (i == d) {
            rest.assign(chain.begin(), chain.end() - 1);
            return nerve_key(*c, rest, obj);
        }
        rest = chain;
        rest[i - 1] = c->compose(chain[i], chain[i - 1]);
        rest.erase(rest.begin() + i);
        return nerve_key(*c, rest, obj);
    };
    auto enumerate = [cp, c](int d) {
        std::vector<std::string> out;
        if (d == 0) {
            for (int o = 0; o < c->num_objects(); ++o)
                out.push_back(keyenc::node("o", {std::to_string(o)}));
            return out;
        }
        for (const auto& chain : c->identity_free_chains(d))
            out.push_back(keyenc::node("n", {keyenc::join_ints(chain)}));
        return out;
    };
    return LESpace(std::move(name), std::move(base_valid), std::move(base_face),
                   std::move(enumerate));
}

LESpace skeleton(const LESpace& x, int k) {
    if (k < 0) throw IllFormedError("skeleton: negative truncation");
    auto base_valid = [x, k](const std::string& b, int d) {
        return d <= k && x.base_valid(b, d);
    };
    auto base_face = [x](const std::string& b, int d, int i) { return x.base_face(b, d, i); };
    std::optional<LESpace::EnumFn> enumerate;
    if (x.enumerable())
        enumerate = [x, k](int d) {
            return d <= k ? x.nondeg(d) : std::vector<std::string>();
        };
    return LESpace("sk" + std::to_string(k) + "(" + x.name() + ")", std::move(base_valid),
                   std::move(base_face), std::move(enumerate));
}

// --- operators -------------------------------------------------------------

SimplexKey apply_monotone(const LESpace& space, const SimplexKey& k,
                          const std::vector<int>& values) {
    int m = k.dim();
    if (values.empty()) throw IllFormedError("monotone operator: empty value list");
    for (size_t t = 0; t < values.size(); ++t) {
        if (values[t] < 0 || values[t] > m)
            throw IllFormedError("monotone operator: value out of range");
        if (t > 0 && values[t] < values[t - 1])
            throw IllFormedError("monotone operator: values not monotone");
    }
    std::set<int> image(values.begin(), values.end());
    SimplexKey out = k;
    for (int v = m; v >= 0; --v)
        if (!image.count(v)) out = space.face(out, v);
    for (size_t p = 1; p < values.size(); ++p)
        if (values[p] == values[p - 1])
            out = insert_degeneracy(std::move(out), static_cast<int>(p) - 1);
    return out;
}

std::vector<int> simplex_vertices(const SimplexKey& k) {
    std::vector<int> v = keyenc::split_ints(k.base);
    for (size_t t = k.degens.size(); t-- > 0;) {
        int j = k.degens[t];
        v.insert(v.begin() + j + 1, v[j]);
    }
    return v;
}

SimplexKey key_from_vertices(const std::vector<int>& values) {
    if (values.empty()) throw IllFormedError("vertex list must be nonempty");
    std::vector<int> base;
    std::vector<int> word;
    for (size_t t = 0; t < values.size(); ++t) {
        if (t > 0 && values[t] < values[t - 1])
            throw IllFormedError("vertex list not monotone");
        if (t > 0 && values[t] == values[t - 1]) continue;
        base.push_back(values[t]);
    }
    for (size_t p = values.size(); p-- > 1;)
        if (values[p] == values[p - 1]) word.push_back(static_cast<int>(p) - 1);
    return {std::move(word), keyenc::join_ints(base), static_cast<int>(base.size()) - 1};
}

// --- chains ----------------------------------------------------------------

ChainComplex normalized_chains(const LESpace& x) {
    auto in_basis = [x](const GenKey& g) {
        return g.degree >= 0 && x.base_valid(g.id, g.degree);
    };
    auto diff = [x](const GenKey& g) {
        FormalChain out;
        if (g.degree == 0) return out;
        Int sign = 1;
        for (int i = 0; i <= g.degree; ++i) {
            SimplexKey f = x.base_face(g.id, g.degree, i);
            if (f.nondegenerate()) out.add({g.degree - 1, f.base}, sign);
            sign = -sign;
        }
        return out;
    };
    std::optional<ChainComplex::BasisFn> basis;
    if (x.enumerable())
        basis = [x](int d) {
            std::vector<GenKey> out;
            for (const std::string& s : x.nondeg(d)) out.push_back({d, s});
            return out;
        };
    return ChainComplex("C(" + x.name() + ")", std::move(in_basis), std::move(diff),
                        std::move(basis));
}

ChainMap chains_of_map(const SimplicialMap& f, ChainComplex dom, ChainComplex cod) {
    SimplicialMap ff = f;
    return ChainMap(std::move(dom), std::move(cod), 0, [ff](const GenKey& g) {
        SimplexKey img = ff.apply({{}, g.id, g.degree});
        FormalChain out;
        if (img.nondegenerate()) out.add({g.degree, img.base}, 1);
        return out;
    });
}

}  // namespace effho
