#include "effho/em.hpp"

#include "effho/errors.hpp"
#include "effho/ez.hpp"
#include "effho/keyenc.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace effho {

namespace {

std::string join_vals(const std::vector<Int>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out.push_back('.');
        out += v[i].str();
    }
    return out;
}

std::vector<Int> split_vals(const std::string& s) {
    std::vector<Int> out;
    if (s.empty()) return out;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t dot = s.find('.', pos);
        if (dot == std::string::npos) dot = s.size();
        try {
            out.emplace_back(s.substr(pos, dot - pos));
        } catch (const std::exception&) {
            throw ParseError("bad integer in cocycle table: " + s);
        }
        pos = dot + 1;
        if (dot == s.size()) break;
    }
    return out;
}

// strictly increasing (r+1)-subsets of {0..q}, lexicographic
std::vector<std::vector<int>> face_tuples(int q, int r) {
    std::vector<std::vector<int>> out;
    if (r < 0 || r > q) return out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int next) -> void {
        if (static_cast<int>(cur.size()) == r + 1) {
            out.push_back(cur);
            return;
        }
        for (int v = next; v <= q; ++v) {
            cur.push_back(v);
            self(self, v + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

std::map<std::vector<int>, int> tuple_index(const std::vector<std::vector<int>>& tuples) {
    std::map<std::vector<int>, int> idx;
    for (size_t i = 0; i < tuples.size(); ++i) idx[tuples[i]] = static_cast<int>(i);
    return idx;
}

std::string encode_table(const EmTable& t) {
    std::vector<std::string> fields;
    fields.reserve(t.size());
    for (const auto& v : t) fields.push_back(join_vals(v));
    return keyenc::node("em", fields);
}

// nullopt on anything that is not a well-shaped table of canonical values
std::optional<EmTable> decode_table(const FEAbGroup& pi, int n, const std::string& base,
                                    int dim) {
    auto p = keyenc::try_parse_node(base);
    if (!p || p->tag != "em") return std::nullopt;
    size_t want = face_tuples(dim, n).size();
    if (pi.rank() == 0) {
        if (!p->fields.empty() && p->fields.size() != want) return std::nullopt;
        for (const auto& f : p->fields)
            if (!f.empty()) return std::nullopt;
        return EmTable(want);
    }
    if (p->fields.size() != want) return std::nullopt;
    EmTable t;
    t.reserve(want);
    for (const auto& f : p->fields) {
        std::vector<Int> v;
        try {
            v = split_vals(f);
        } catch (const std::exception&) {
            return std::nullopt;
        }
        if (v.size() != pi.rank()) return std::nullopt;
        if (pi.normalize(v) != v) return std::nullopt;
        t.push_back(std::move(v));
    }
    return t;
}

// table of the simplex obtained by the monotone operator u: [q'] -> [q],
// where t is a table on the q-simplex and u is given by its value list
EmTable pullback_table(const FEAbGroup& pi, int n, const EmTable& t, int q,
                       const std::vector<int>& u) {
    int qp = static_cast<int>(u.size()) - 1;
    auto from = face_tuples(qp, n);
    auto idx = tuple_index(face_tuples(q, n));
    EmTable out;
    out.reserve(from.size());
    for (const auto& f : from) {
        std::vector<int> img;
        img.reserve(f.size());
        for (int v : f) img.push_back(u[static_cast<size_t>(v)]);
        bool degen = false;
        for (size_t i = 0; i + 1 < img.size(); ++i) degen = degen || img[i] == img[i + 1];
        if (degen)
            out.push_back(std::vector<Int>(pi.rank(), 0));
        else
            out.push_back(t[static_cast<size_t>(idx.at(img))]);
    }
    return out;
}

std::vector<int> coface_values(int q, int i) {
    std::vector<int> u;
    u.reserve(static_cast<size_t>(q));
    for (int v = 0; v <= q; ++v)
        if (v != i) u.push_back(v);
    return u;
}

std::vector<int> codegeneracy_values(int q, int i) {
    std::vector<int> u;
    u.reserve(static_cast<size_t>(q) + 2);
    for (int v = 0; v <= q; ++v) {
        u.push_back(v);
        if (v == i) u.push_back(v);
    }
    return u;
}

bool is_cocycle(const FEAbGroup& pi, int n, const EmTable& t, int q) {
    auto idx = tuple_index(face_tuples(q, n));
    for (const auto& tau : face_tuples(q, n + 1)) {
        std::vector<Int> acc(pi.rank(), 0);
        Int sign = 1;
        for (size_t i = 0; i < tau.size(); ++i, sign = -sign) {
            std::vector<int> sub;
            sub.reserve(tau.size() - 1);
            for (size_t j = 0; j < tau.size(); ++j)
                if (j != i) sub.push_back(tau[j]);
            const std::vector<Int>& v = t[static_cast<size_t>(idx.at(sub))];
            for (size_t r = 0; r < acc.size(); ++r) acc[r] += sign * v[r];
        }
        acc = pi.normalize(std::move(acc));
        for (const Int& a : acc)
            if (a != 0) return false;
    }
    return true;
}

bool degenerate_at(const FEAbGroup& pi, int n, const EmTable& t, int q, int i) {
    EmTable d = pullback_table(pi, n, t, q, coface_values(q, i));
    EmTable s = pullback_table(pi, n, d, q - 1, codegeneracy_values(q - 1, i));
    return s == t;
}

SimplexKey canonical_em_key(const FEAbGroup& pi, int n, const EmTable& t, int q) {
    for (int i = 0; i + 1 <= q; ++i)
        if (degenerate_at(pi, n, t, q, i)) {
            EmTable d = pullback_table(pi, n, t, q, coface_values(q, i));
            return insert_degeneracy(canonical_em_key(pi, n, d, q - 1), i);
        }
    return {{}, encode_table(t), q};
}

struct EmCtx {
    FEAbGroup pi;
    int n;
};

// all q-simplices, by coboundaries of arbitrary (n-1)-cochains; the
// standard simplex is contractible, so this is onto
std::vector<std::string> enumerate_level(const FEAbGroup& pi, int n, int q) {
    auto cells = face_tuples(q, n - 1);
    auto nidx = tuple_index(face_tuples(q, n));
    auto nfaces = face_tuples(q, n);
    size_t digits = cells.size() * pi.rank();
    std::vector<Int> xi(digits, 0);
    auto cidx = tuple_index(cells);
    std::set<std::string> seen;
    bool rolled = digits == 0;
    for (;;) {
        EmTable t;
        t.reserve(nfaces.size());
        for (const auto& f : nfaces) {
            std::vector<Int> acc(pi.rank(), 0);
            Int sign = 1;
            for (size_t i = 0; i < f.size(); ++i, sign = -sign) {
                std::vector<int> sub;
                for (size_t j = 0; j < f.size(); ++j)
                    if (j != i) sub.push_back(f[j]);
                size_t off = static_cast<size_t>(cidx.at(sub)) * pi.rank();
                for (size_t r = 0; r < pi.rank(); ++r) acc[r] += sign * xi[off + r];
            }
            t.push_back(pi.normalize(std::move(acc)));
        }
        bool nondeg = true;
        for (int i = 0; i + 1 <= q && nondeg; ++i) nondeg = !degenerate_at(pi, n, t, q, i);
        if (nondeg) seen.insert(encode_table(t));
        if (rolled) break;
        size_t pos = 0;
        while (pos < digits) {
            const Int& ord = pi.orders()[pos % pi.rank()];
            if (++xi[pos] < ord) break;
            xi[pos] = 0;
            ++pos;
        }
        if (pos == digits) break;
    }
    return {seen.begin(), seen.end()};
}

}  // namespace

LESpace em_space(const FEAbGroup& pi, int n) {
    if (n < 1) throw IllFormedError("classifying space level must be at least 1");
    auto ctx = std::make_shared<EmCtx>(EmCtx{pi, n});

    auto valid = [ctx](const std::string& b, int dim) -> bool {
        auto t = decode_table(ctx->pi, ctx->n, b, dim);
        if (!t || !is_cocycle(ctx->pi, ctx->n, *t, dim)) return false;
        for (int i = 0; i + 1 <= dim; ++i)
            if (degenerate_at(ctx->pi, ctx->n, *t, dim, i)) return false;
        return true;
    };

    auto face = [ctx](const std::string& b, int dim, int i) -> SimplexKey {
        auto t = decode_table(ctx->pi, ctx->n, b, dim);
        if (!t) throw ParseError("not a cocycle table: " + b);
        EmTable d = pullback_table(ctx->pi, ctx->n, *t, dim, coface_values(dim, i));
        return canonical_em_key(ctx->pi, ctx->n, d, dim - 1);
    };

    std::optional<LESpace::EnumFn> enumerate;
    if (pi.free_rank() == 0)
        enumerate = [ctx](int dim) { return enumerate_level(ctx->pi, ctx->n, dim); };

    return LESpace("K(" + pi.to_string() + "," + std::to_string(n) + ")", valid, face,
                   std::move(enumerate));
}

SimplexKey em_key(const FEAbGroup& pi, int n, int dim, const EmTable& table) {
    size_t want = face_tuples(dim, n).size();
    if (table.size() != want)
        throw IllFormedError("cocycle table has " + std::to_string(table.size()) +
                             " rows, expected " + std::to_string(want));
    for (const auto& v : table) {
        if (v.size() != pi.rank()) throw IllFormedError("cocycle value of the wrong rank");
        if (pi.normalize(v) != v) throw IllFormedError("cocycle value is not canonical");
    }
    if (!is_cocycle(pi, n, table, dim)) throw IllFormedError("table is not a cocycle");
    return canonical_em_key(pi, n, table, dim);
}

EmTable em_table(const FEAbGroup& pi, int n, const SimplexKey& k) {
    auto t = decode_table(pi, n, k.base, k.base_dim);
    if (!t) throw ParseError("not a cocycle table: " + k.base);
    int dim = k.base_dim;
    for (auto it = k.degens.rbegin(); it != k.degens.rend(); ++it) {
        *t = pullback_table(pi, n, *t, dim, codegeneracy_values(dim, *it));
        ++dim;
    }
    return *t;
}

SimplexKey em_edge_key(const FEAbGroup& pi, const std::vector<std::vector<Int>>& edges) {
    int q = static_cast<int>(edges.size());
    for (const auto& e : edges)
        if (e.size() != pi.rank()) throw IllFormedError("edge value of the wrong rank");
    EmTable t;
    for (const auto& f : face_tuples(q, 1)) {
        std::vector<Int> acc(pi.rank(), 0);
        for (int l = f[0] + 1; l <= f[1]; ++l)
            for (size_t r = 0; r < pi.rank(); ++r) acc[r] += edges[static_cast<size_t>(l) - 1][r];
        t.push_back(pi.normalize(std::move(acc)));
    }
    return em_key(pi, 1, q, t);
}

SpaceDiagram em_diagram(const FEAbDiagram& pi, int n, int audit_dim) {
    std::vector<LESpace> at;
    for (int o = 0; o < pi.index().num_objects(); ++o) at.push_back(em_space(pi.at(o), n));
    std::vector<SimplicialMap> arrows;
    for (int m = 0; m < pi.index().num_morphisms(); ++m) {
        const auto& mor = pi.index().morphism(m);
        FEAbGroup dom = pi.at(mor.dom), cod = pi.at(mor.cod);
        ComputableHom h = pi.arrow(m);
        arrows.push_back(SimplicialMap(
            at[static_cast<size_t>(mor.dom)], at[static_cast<size_t>(mor.cod)],
            [dom, cod, h, n](const std::string& b, int dim) {
                auto t = decode_table(dom, n, b, dim);
                if (!t) throw ParseError("not a cocycle table: " + b);
                EmTable out;
                out.reserve(t->size());
                for (const auto& v : *t) out.push_back(h.apply(v));
                return canonical_em_key(cod, n, out, dim);
            }));
    }
    return SpaceDiagram(pi.index_ptr(), std::move(at), std::move(arrows), audit_dim);
}

// --- effective homology at level one ---------------------------------------

namespace {

GenKey cyc_gen(int k) { return {k, keyenc::node("z", {std::to_string(k)})}; }

// order 0: two generators in degrees 0 and 1, zero differential;
// order m: one generator per degree, d z(2k) = m z(2k-1)
ChainComplex cyclic_model(const Int& m) {
    std::string name = m == 0 ? "circ" : "per" + m.str();
    auto in_basis = [m](const GenKey& g) {
        if (g.degree < 0 || (m == 0 && g.degree > 1)) return false;
        return g.id == cyc_gen(g.degree).id;
    };
    auto diff = [m](const GenKey& g) {
        FormalChain out;
        if (m != 0 && g.degree >= 2 && g.degree % 2 == 0) out.add(cyc_gen(g.degree - 1), m);
        return out;
    };
    auto basis = [m](int d) -> std::vector<GenKey> {
        if (d < 0 || (m == 0 && d > 1)) return {};
        return {cyc_gen(d)};
    };
    return ChainComplex(name, in_basis, diff, basis);
}

// consecutive edge values a_1 .. a_q of a one-dimensional table
std::vector<Int> consecutive_values(const EmTable& t, int q) {
    auto idx = tuple_index(face_tuples(q, 1));
    std::vector<Int> out;
    out.reserve(static_cast<size_t>(q));
    for (int i = 1; i <= q; ++i) out.push_back(t[static_cast<size_t>(idx.at({i - 1, i}))][0]);
    return out;
}

std::string z_bar(const FEAbGroup& pi, const std::vector<Int>& consecutive) {
    int q = static_cast<int>(consecutive.size());
    EmTable t;
    for (const auto& f : face_tuples(q, 1)) {
        Int acc = 0;
        for (int l = f[0] + 1; l <= f[1]; ++l) acc += consecutive[static_cast<size_t>(l) - 1];
        t.push_back(pi.normalize({acc}));
    }
    return encode_table(t);
}

struct EmEh {
    LESpace space;
    ChainComplex chains;
    Equivalence eq;  // left bottom is `chains`
};

// contraction of the free cyclic classifying space onto the circle model:
// a word [a_1 | rest] is funneled through [1 | j | rest] telescopes, one
// step per unit between a_1 and 1
EmEh free_factor_model(const FEAbGroup& pi) {
    LESpace k = em_space(pi, 1);
    ChainComplex c = normalized_chains(k);
    ChainComplex target = cyclic_model(0);

    ChainMap alpha(c, target, 0, [pi](const GenKey& g) {
        FormalChain out;
        if (g.degree == 0) {
            out.add(cyc_gen(0), 1);
        } else if (g.degree == 1) {
            auto t = decode_table(pi, 1, g.id, 1);
            out.add(cyc_gen(1), (*t)[0][0]);
        }
        return out;
    });

    ChainMap beta(target, c, 0, [pi](const GenKey& g) {
        FormalChain out;
        if (g.degree == 0)
            out.add({0, z_bar(pi, {})}, 1);
        else
            out.add({1, z_bar(pi, {1})}, 1);
        return out;
    });

    ChainMap eta(c, c, 1, [pi](const GenKey& g) {
        FormalChain out;
        if (g.degree == 0) return out;
        auto t = decode_table(pi, 1, g.id, g.degree);
        std::vector<Int> a = consecutive_values(*t, g.degree);
        std::vector<Int> word(a.size() + 1);
        word[0] = 1;
        for (size_t i = 1; i < a.size(); ++i) word[i + 1] = a[i];
        if (a[0] >= 1) {
            for (Int j = 1; j < a[0]; ++j) {
                word[1] = j;
                out.add({g.degree + 1, z_bar(pi, word)}, -1);
            }
        } else {
            for (Int j = a[0]; j <= -1; ++j) {
                word[1] = j;
                out.add({g.degree + 1, z_bar(pi, word)}, 1);
            }
        }
        return out;
    });

    Reduction r{c, target, std::move(alpha), std::move(beta), std::move(eta)};
    return {std::move(k), c, equivalence_from_reduction(r)};
}

// minimal model of a finite cyclic factor through the normal form, relabeled
// onto the periodic complex with the signs straightened degree by degree
EmEh torsion_factor_model(const FEAbGroup& pi, const Int& m) {
    LESpace k = em_space(pi, 1);
    ChainComplex c = normalized_chains(k);
    Reduction nf = normal_form_reduction(c);
    ChainComplex target = cyclic_model(m);

    struct Signs {
        ChainComplex nfb;
        Int m;
        mutable std::mutex mu;
        mutable std::map<int, std::pair<GenKey, Int>> memo;

        Signs(ChainComplex b, Int mm) : nfb(std::move(b)), m(std::move(mm)) {}

        std::pair<GenKey, Int> at(int k) const {
            {
                std::lock_guard<std::mutex> lock(mu);
                auto it = memo.find(k);
                if (it != memo.end()) return it->second;
            }
            std::vector<GenKey> gens = nfb.basis(k);
            if (gens.size() != 1)
                throw AuditError("minimal model of a cyclic group has " +
                                 std::to_string(gens.size()) + " generators in degree " +
                                 std::to_string(k));
            GenKey g = gens.front();
            Int eps = 1;
            FormalChain d = nfb.diff(g);
            if (k % 2 == 1 || k == 0) {
                if (!d.is_zero())
                    throw AuditError("minimal model of a cyclic group has a differential in odd degree");
            } else {
                auto prev = at(k - 1);
                Int coeff = d.coeff(prev.first);
                if ((coeff != m && coeff != -m) || d.size() != 1)
                    throw AuditError("minimal model of a cyclic group has an unexpected differential");
                eps = coeff > 0 ? 1 : -1;
            }
            std::lock_guard<std::mutex> lock(mu);
            return memo[k] = {std::move(g), std::move(eps)};
        }
    };
    auto signs = std::make_shared<Signs>(nf.bottom, m);

    ChainMap fwd(nf.bottom, target, 0, [signs](const GenKey& g) {
        auto [gen, eps] = signs->at(g.degree);
        if (g != gen) throw IllFormedError("not a minimal model generator: " + g.id);
        FormalChain out;
        out.add(cyc_gen(g.degree), eps);
        return out;
    });
    ChainMap bwd(target, nf.bottom, 0, [signs](const GenKey& g) {
        auto [gen, eps] = signs->at(g.degree);
        FormalChain out;
        out.add(gen, eps);
        return out;
    });

    Reduction full = compose_reductions(nf, iso_reduction(fwd, bwd));
    return {std::move(k), c, equivalence_from_reduction(full)};
}

EmEh level1_model(const FEAbGroup& pi);

// K(pi (+) pi', 1) = K(pi, 1) x K(pi', 1): split the first invariant factor
// off, rewrite the joint table as a pair, and shuffle the product apart
EmEh split_model(const FEAbGroup& pi) {
    const auto& ords = pi.orders();
    FEAbGroup head = FEAbGroup::from_orders({ords[0]});
    FEAbGroup tail = FEAbGroup::from_orders(std::vector<Int>(ords.begin() + 1, ords.end()));
    EmEh a = level1_model(head);
    EmEh b = level1_model(tail);

    LESpace k = em_space(pi, 1);
    ChainComplex c = normalized_chains(k);
    ChainComplex pc = normalized_chains(product_space(a.space, b.space));
    Equivalence teq = tensor_equivalence(a.eq, b.eq);
    Reduction ez = ez_reduction(a.space, b.space, pc, teq.left.bottom);

    FEAbGroup jp = pi, hp = head, tp = tail;
    ChainMap fwd(c, pc, 0, [jp, hp, tp](const GenKey& g) {
        auto t = decode_table(jp, 1, g.id, g.degree);
        EmTable th, tt;
        for (const auto& v : *t) {
            th.push_back({v[0]});
            tt.push_back(std::vector<Int>(v.begin() + 1, v.end()));
        }
        SimplexKey pk = make_product_key(canonical_em_key(hp, 1, th, g.degree),
                                         canonical_em_key(tp, 1, tt, g.degree));
        FormalChain out;
        out.add({g.degree, pk.base}, 1);
        return out;
    });
    ChainMap bwd(pc, c, 0, [jp, hp, tp](const GenKey& g) {
        auto [ka, kb] = product_components(SimplexKey{{}, g.id, g.degree});
        EmTable th = em_table(hp, 1, ka), tt = em_table(tp, 1, kb);
        EmTable t;
        for (size_t i = 0; i < th.size(); ++i) {
            std::vector<Int> v = th[i];
            v.insert(v.end(), tt[i].begin(), tt[i].end());
            t.push_back(std::move(v));
        }
        FormalChain out;
        out.add({g.degree, encode_table(t)}, 1);
        return out;
    });

    Reduction split = compose_reductions(iso_reduction(fwd, bwd), ez);
    Equivalence eq = compose_equivalences(equivalence_from_reduction(split), teq);
    return {std::move(k), c, std::move(eq)};
}

EmEh level1_model(const FEAbGroup& pi) {
    const auto& ords = pi.orders();
    if (ords.empty()) {
        LESpace k = em_space(pi, 1);
        ChainComplex c = normalized_chains(k);
        return {std::move(k), c, equivalence_from_reduction(identity_reduction(c))};
    }
    if (ords.size() > 1) return split_model(pi);
    if (ords[0] == 0) return free_factor_model(pi);
    return torsion_factor_model(pi, ords[0]);
}

}  // namespace

Equivalence em_effective_homology(const FEAbGroup& pi, int n,
                                  const std::optional<EMProvider>& provider) {
    if (n < 1) throw IllFormedError("classifying space level must be at least 1");
    if (n > 1) {
        if (provider) return (*provider)(pi, n);
        throw UnsupportedError("no built-in effective homology above level one");
    }
    return level1_model(pi).eq;
}

PointwiseEH em_pointwise_eh(const FEAbDiagram& pi, int n,
                            const std::optional<EMProvider>& provider) {
    PointwiseEH pw;
    for (int o = 0; o < pi.index().num_objects(); ++o) {
        pw.eh.push_back(em_effective_homology(pi.at(o), n, provider));
        pw.chains.push_back(pw.eh.back().left.bottom);
    }
    return pw;
}

}  // namespace effho
