#include "effho/holan.hpp"

#include "effho/ez.hpp"
#include "effho/keyenc.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

namespace effho {

std::string encode_bar(const BarSimplex& s) {
    return keyenc::node("hc", {std::to_string(s.i0), keyenc::join_ints(s.t),
                               keyenc::join_ints(s.chain), std::to_string(s.g),
                               encode_key(s.x)});
}

BarSimplex decode_bar(const std::string& base, int dim) {
    auto p = keyenc::try_parse_node(base);
    if (!p || p->tag != "hc" || p->fields.size() != 5)
        throw ParseError("not a bar simplex: " + base);
    BarSimplex s;
    s.i0 = std::stoi(p->fields[0]);
    s.t = keyenc::split_ints(p->fields[1]);
    s.chain = keyenc::split_ints(p->fields[2]);
    s.g = std::stoi(p->fields[3]);
    s.x = decode_key(p->fields[4], dim);
    return s;
}

int bar_end(const FiniteCategory& index, const BarSimplex& s) {
    return s.chain.empty() ? s.i0 : index.morphism(s.chain.back()).cod;
}

BarSimplex bar_canonicalize(const SpaceDiagram& x, const Functor& p, BarSimplex s) {
    const FiniteCategory& idx = x.index();
    for (;;) {
        int n = s.level();
        int strip = -1;
        for (int v = 1; v <= n; ++v)
            if (idx.is_identity(s.chain[v - 1])) {
                strip = v;
                break;
            }
        if (strip >= 0) {
            s.chain.erase(s.chain.begin() + (strip - 1));
            for (int& w : s.t)
                if (w >= strip) --w;
            continue;
        }
        std::vector<char> hit(static_cast<size_t>(n) + 1, 0);
        for (int w : s.t) hit[static_cast<size_t>(w)] = 1;
        int v = -1;
        for (int w = 0; w <= n; ++w)
            if (!hit[static_cast<size_t>(w)]) {
                v = w;
                break;
            }
        if (v < 0) return s;
        if (v == 0) {
            int f1 = s.chain.front();
            s.x = x.arrow(f1).apply(s.x);
            s.i0 = idx.morphism(f1).cod;
            s.chain.erase(s.chain.begin());
        } else if (v == n) {
            s.g = p.cod().compose(s.g, p.mor(s.chain.back()));
            s.chain.pop_back();
        } else {
            s.chain[v - 1] = idx.compose(s.chain[v], s.chain[v - 1]);
            s.chain.erase(s.chain.begin() + v);
        }
        for (int& w : s.t)
            if (w > v) --w;
    }
}

SimplexKey bar_key(const SpaceDiagram& x, const Functor& p, BarSimplex s) {
    s = bar_canonicalize(x, p, std::move(s));
    const LESpace& sp = x.at(s.i0);
    int q = s.dim();
    for (int k = 0; k < q; ++k) {
        if (s.t[k] != s.t[k + 1]) continue;
        SimplexKey dx = sp.face(s.x, k);
        if (sp.degeneracy(dx, k) != s.x) continue;
        BarSimplex inner = std::move(s);
        inner.t.erase(inner.t.begin() + k);
        inner.x = std::move(dx);
        return insert_degeneracy(bar_key(x, p, std::move(inner)), k);
    }
    return SimplexKey{{}, encode_bar(s), q};
}

namespace {

bool shares_degeneracy(const LESpace& sp, const std::vector<int>& t, const SimplexKey& x) {
    for (size_t k = 0; k + 1 < t.size(); ++k) {
        if (t[k] != t[k + 1]) continue;
        SimplexKey dx = sp.face(x, static_cast<int>(k));
        if (sp.degeneracy(dx, static_cast<int>(k)) == x) return true;
    }
    return false;
}

void surjections_rec(int positions, int next, int top, std::vector<int>& cur,
                     std::vector<std::vector<int>>& out) {
    if (positions == 0) {
        if (next == top + 1) out.push_back(cur);
        return;
    }
    int v = cur.empty() ? 0 : cur.back();
    // stay, or step to the next unseen value; larger jumps would skip one
    for (int w = v; w <= std::min(next, top); ++w) {
        if (w > v && w != next) continue;
        cur.push_back(w);
        surjections_rec(positions - 1, std::max(next, w + 1), top, cur, out);
        cur.pop_back();
    }
}

// monotone surjections [q] -> [n], as value lists of length q + 1
std::vector<std::vector<int>> monotone_surjections(int q, int n) {
    std::vector<std::vector<int>> out;
    if (n > q || n < 0) return out;
    std::vector<int> cur = {0};
    surjections_rec(q, 1, n, cur, out);
    return out;
}

void words_rec(int len, int lo, int hi, std::vector<int>& cur,
               std::vector<std::vector<int>>& out) {
    if (len == 0) {
        out.push_back(cur);
        return;
    }
    for (int w = hi; w >= lo + len - 1; --w) {
        cur.push_back(w);
        words_rec(len - 1, lo, w - 1, cur, out);
        cur.pop_back();
    }
}

// every valid key of one dimension, degenerate ones included
std::vector<SimplexKey> all_simplices(const LESpace& sp, int dim) {
    std::vector<SimplexKey> out;
    for (int m = 0; m <= dim; ++m) {
        std::vector<std::vector<int>> words;
        std::vector<int> cur;
        words_rec(dim - m, 0, dim - 1, cur, words);
        for (const std::string& b : sp.nondeg(m))
            for (const auto& w : words) {
                SimplexKey k{w, b, m};
                if (sp.valid(k)) out.push_back(std::move(k));
            }
    }
    return out;
}

struct LevelChain {
    int i0;
    std::vector<int> chain;
    int end;
};

std::vector<LevelChain> level_chains(const FiniteCategory& idx, int n) {
    std::vector<LevelChain> out;
    if (n == 0) {
        for (int o = 0; o < idx.num_objects(); ++o) out.push_back({o, {}, o});
        return out;
    }
    for (const auto& c : idx.identity_free_chains(n))
        out.push_back({idx.morphism(c.front()).dom, c, idx.morphism(c.back()).cod});
    return out;
}

struct HolanCtx {
    SpaceDiagram x;
    Functor p;
    int j;
};

std::vector<std::string> enumerate_bars(const HolanCtx& ctx, int dim, bool anchor_free,
                                        std::vector<int>* objects_out) {
    const FiniteCategory& idx = ctx.x.index();
    const FiniteCategory& tgt = ctx.p.cod();
    std::vector<std::string> out;
    for (int n = 0; n <= dim; ++n) {
        auto ts = monotone_surjections(dim, n);
        if (ts.empty()) continue;
        for (const LevelChain& lc : level_chains(idx, n)) {
            int pend = ctx.p.obj(lc.end);
            std::vector<int> anchors;
            if (anchor_free)
                anchors.push_back(tgt.identity(pend));
            else
                anchors = tgt.hom(pend, ctx.j);
            if (anchors.empty()) continue;
            std::vector<SimplexKey> xs = all_simplices(ctx.x.at(lc.i0), dim);
            for (const SimplexKey& xk : xs) {
                for (const auto& t : ts) {
                    if (shares_degeneracy(ctx.x.at(lc.i0), t, xk)) continue;
                    for (int g : anchors) {
                        out.push_back(encode_bar({lc.i0, t, lc.chain, g, xk}));
                        if (objects_out) objects_out->push_back(anchor_free ? pend : ctx.j);
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace

LESpace holan_space(const SpaceDiagram& x, const Functor& p, int j) {
    if (p.dom_ptr().get() != x.index_ptr().get())
        throw IllFormedError("extension: the functor must start at the diagram's index");
    if (j < 0 || j >= p.cod().num_objects())
        throw IllFormedError("extension: target object out of range");
    auto ctx = std::make_shared<HolanCtx>(HolanCtx{x, p, j});

    auto valid = [ctx, j](const std::string& b, int dim) -> bool {
        BarSimplex s;
        try {
            s = decode_bar(b, dim);
        } catch (const std::exception&) {
            return false;
        }
        const FiniteCategory& idx = ctx->x.index();
        const FiniteCategory& tgt = ctx->p.cod();
        if (s.i0 < 0 || s.i0 >= idx.num_objects()) return false;
        if (static_cast<int>(s.t.size()) != dim + 1) return false;
        int n = s.level();
        int at = s.i0;
        for (int f : s.chain) {
            if (f < 0 || f >= idx.num_morphisms()) return false;
            const auto& m = idx.morphism(f);
            if (m.dom != at || idx.is_identity(f)) return false;
            at = m.cod;
        }
        std::vector<char> hit(static_cast<size_t>(n) + 1, 0);
        int prev = 0;
        for (size_t i = 0; i < s.t.size(); ++i) {
            int w = s.t[i];
            if (w < 0 || w > n || (i && w < prev)) return false;
            prev = w;
            hit[static_cast<size_t>(w)] = 1;
        }
        for (int w = 0; w <= n; ++w)
            if (!hit[static_cast<size_t>(w)]) return false;
        if (s.g < 0 || s.g >= tgt.num_morphisms()) return false;
        const auto& gm = tgt.morphism(s.g);
        if (gm.dom != ctx->p.obj(at) || gm.cod != j) return false;
        const LESpace& sp = ctx->x.at(s.i0);
        if (s.x.dim() != dim || !sp.valid(s.x)) return false;
        return !shares_degeneracy(sp, s.t, s.x);
    };

    auto face = [ctx](const std::string& b, int dim, int i) -> SimplexKey {
        BarSimplex s = decode_bar(b, dim);
        s.t.erase(s.t.begin() + i);
        s.x = ctx->x.at(s.i0).face(s.x, i);
        return bar_key(ctx->x, ctx->p, std::move(s));
    };

    bool enumerable = true;
    for (int o = 0; o < x.index().num_objects(); ++o)
        enumerable = enumerable && x.at(o).enumerable();
    std::optional<LESpace::EnumFn> en;
    if (enumerable)
        en = [ctx](int dim) { return enumerate_bars(*ctx, dim, false, nullptr); };

    return LESpace("holan." + p.cod().object_name(j), std::move(valid), std::move(face),
                   std::move(en));
}

SpaceDiagram holan_diagram(const SpaceDiagram& x, const Functor& p, int audit_dim) {
    const FiniteCategory& tgt = p.cod();
    std::vector<LESpace> at;
    for (int o = 0; o < tgt.num_objects(); ++o) at.push_back(holan_space(x, p, o));
    std::vector<SimplicialMap> arrows;
    for (int h = 0; h < tgt.num_morphisms(); ++h) {
        const auto& m = tgt.morphism(h);
        FiniteCategoryPtr tp = p.cod_ptr();
        int hh = h;
        arrows.push_back(SimplicialMap(
            at[m.dom], at[m.cod], [tp, hh](const std::string& b, int dim) {
                BarSimplex s = decode_bar(b, dim);
                s.g = tp->compose(hh, s.g);
                return SimplexKey{{}, encode_bar(s), dim};
            }));
    }
    return SpaceDiagram(p.cod_ptr(), std::move(at), std::move(arrows), audit_dim);
}

LESpace hocolim_space(const SpaceDiagram& x) {
    return holan_space(x, Functor::to_terminal(x.index_ptr()), 0);
}

ChainDiagram holan_chain_diagram(const SpaceDiagram& x, const Functor& p, int audit_dim) {
    SpaceDiagram hd = holan_diagram(x, p, -1);
    std::vector<ChainComplex> at;
    for (int o = 0; o < p.cod().num_objects(); ++o)
        at.push_back(normalized_chains(hd.at(o)));
    std::vector<ChainMap> arrows;
    for (int h = 0; h < p.cod().num_morphisms(); ++h) {
        const auto& m = p.cod().morphism(h);
        arrows.push_back(chains_of_map(hd.arrow(h), at[m.dom], at[m.cod]));
    }
    auto ctx = std::make_shared<HolanCtx>(HolanCtx{x, p, 0});
    ChainDiagram::CellsFn cells = [ctx](int degree) {
        std::vector<int> objs;
        std::vector<std::string> bases = enumerate_bars(*ctx, degree, true, &objs);
        std::vector<CellularCell> out;
        for (size_t i = 0; i < bases.size(); ++i)
            out.push_back({objs[i], {degree, bases[i]}});
        return out;
    };
    return ChainDiagram(p.cod_ptr(), std::move(at), std::move(arrows), audit_dim,
                        std::move(cells));
}

PointwiseEH finite_pointwise_eh(const SpaceDiagram& x) {
    PointwiseEH pw;
    for (int o = 0; o < x.index().num_objects(); ++o) {
        pw.chains.push_back(normalized_chains(x.at(o)));
        pw.eh.push_back(equivalence_from_reduction(identity_reduction(pw.chains.back())));
    }
    return pw;
}

// --- effective homology of the extension -----------------------------------

namespace {

struct BlockPair {
    int i0;
    std::vector<int> chain;
    int g;
};

// lazy per-level block bookkeeping shared by the assembly maps
struct Assembly {
    SpaceDiagram x;
    Functor p;
    int j;
    std::vector<Equivalence> eh;

    Assembly(SpaceDiagram xx, Functor pp, int jj, std::vector<Equivalence> ee)
        : x(std::move(xx)), p(std::move(pp)), j(jj), eh(std::move(ee)) {}

    mutable std::mutex mu;
    mutable std::map<int, std::vector<BlockPair>> pairs_;
    mutable std::map<int, std::map<std::string, int>> pair_index_;
    mutable std::map<int, LESpace> simplices_;

    const std::vector<BlockPair>& pairs(int k) const {
        std::lock_guard<std::mutex> lock(mu);
        auto it = pairs_.find(k);
        if (it != pairs_.end()) return it->second;
        std::vector<BlockPair> out;
        std::map<std::string, int> index;
        for (const LevelChain& lc : level_chains(x.index(), k))
            for (int g : p.cod().hom(p.obj(lc.end), j)) {
                index[pair_tag(lc.i0, lc.chain, g)] = static_cast<int>(out.size());
                out.push_back({lc.i0, lc.chain, g});
            }
        pair_index_[k] = std::move(index);
        return pairs_[k] = std::move(out);
    }

    int pair_index(int k, int i0, const std::vector<int>& chain, int g) const {
        pairs(k);
        std::lock_guard<std::mutex> lock(mu);
        return pair_index_.at(k).at(pair_tag(i0, chain, g));
    }

    const LESpace& simplex(int n) const {
        std::lock_guard<std::mutex> lock(mu);
        auto it = simplices_.find(n);
        if (it != simplices_.end()) return it->second;
        return simplices_[n] = standard_simplex(n);
    }

    static std::string pair_tag(int i0, const std::vector<int>& chain, int g) {
        return std::to_string(i0) + "#" + keyenc::join_ints(chain) + "#" +
               std::to_string(g);
    }
};

GenKey block_key(int k, int pair, const std::string& y_id, int degree) {
    return {degree, keyenc::node("s", {std::to_string(k),
                                       keyenc::node("s", {std::to_string(pair), y_id})})};
}

// (level, pair index, inner generator) of a block generator
std::tuple<int, int, GenKey> split_block_key(const GenKey& g) {
    auto outer = keyenc::parse_node(g.id);
    if (outer.tag != "s" || outer.fields.size() != 2)
        throw IllFormedError("not a block generator: " + g.id);
    int k = std::stoi(outer.fields[0]);
    auto inner = keyenc::parse_node(outer.fields[1]);
    if (inner.tag != "s" || inner.fields.size() != 2)
        throw IllFormedError("not a block generator: " + g.id);
    return {k, std::stoi(inner.fields[0]), GenKey{g.degree - k, inner.fields[1]}};
}

}  // namespace

Equivalence holan_effective(const SpaceDiagram& x, const Functor& p, int j,
                            const PointwiseEH& pw, size_t degree_budget) {
    if (static_cast<int>(pw.eh.size()) != x.index().num_objects())
        throw ComplexMismatchError("pointwise data does not match the index category");

    LESpace space = holan_space(x, p, j);
    ChainComplex c = normalized_chains(space);
    auto st = std::make_shared<Assembly>(x, p, j, pw.eh);

    // boundary terms that keep the chain length; the rest is the perturbation
    ChainComplex cc = c;
    LESpace sp = space;
    auto graded_diff = [cc, sp](const GenKey& gk) {
        BarSimplex s = decode_bar(gk.id, gk.degree);
        int n = s.level();
        FormalChain out;
        Int sign = 1;
        for (int i = 0; i <= gk.degree; ++i, sign = -sign) {
            std::vector<char> hit(static_cast<size_t>(n) + 1, 0);
            for (int pos = 0; pos <= gk.degree; ++pos)
                if (pos != i) hit[static_cast<size_t>(s.t[pos])] = 1;
            bool surj = true;
            for (int w = 0; w <= n; ++w) surj = surj && hit[static_cast<size_t>(w)];
            if (!surj) continue;
            SimplexKey fk = sp.face({{}, gk.id, gk.degree}, i);
            if (!fk.nondegenerate()) continue;
            out.add({gk.degree - 1, fk.base}, sign);
        }
        return out;
    };
    std::optional<ChainComplex::BasisFn> basis;
    if (c.effective()) basis = [cc](int d) { return cc.basis(d); };
    ChainComplex cgr("gr." + space.name(), [cc](const GenKey& g) { return cc.in_basis(g); },
                     graded_diff, std::move(basis));

    // effective side: one suspended pointwise model per (chain, anchor)
    auto part = [st](int k) -> Equivalence {
        const auto& ps = st->pairs(k);
        if (ps.empty())
            return equivalence_from_reduction(identity_reduction(zero_complex("0")));
        std::vector<Equivalence> blocks;
        for (const BlockPair& pr : ps)
            blocks.push_back(suspend_equivalence(st->eh[pr.i0], k));
        return direct_sum_equivalence(std::move(blocks));
    };
    Equivalence e_b = direct_sum_family_equivalence("bar." + space.name(), part,
                                                    [](int d) { return d + 1; });
    ChainComplex b_complex = e_b.left.bottom;

    ChainMap alpha(cgr, b_complex, 0, [st](const GenKey& gk) {
        BarSimplex s = decode_bar(gk.id, gk.degree);
        int n = s.level();
        FormalChain out;
        for (int i = 0; i <= n; ++i)
            if (s.t[i] != i) return out;
        const LESpace& sp2 = st->x.at(s.i0);
        SimplexKey y = s.x;
        for (int r = 0; r < n; ++r) y = sp2.face(y, 0);
        if (!y.nondegenerate()) return out;
        int pair = st->pair_index(n, s.i0, s.chain, s.g);
        out.add(block_key(n, pair, y.base, gk.degree), 1);
        return out;
    });

    ChainMap beta(b_complex, cgr, 0, [st](const GenKey& gk) {
        auto [k, pair, y] = split_block_key(gk);
        const BlockPair& pr = st->pairs(k)[static_cast<size_t>(pair)];
        std::vector<int> iota(static_cast<size_t>(k) + 1);
        for (int i = 0; i <= k; ++i) iota[static_cast<size_t>(i)] = i;
        GenKey tg{gk.degree,
                  keyenc::node("t", {std::to_string(k), keyenc::join_ints(iota), y.id})};
        FormalChain out;
        for (const auto& [pg, coeff] : shuffle_on_gen(tg)) {
            auto [ak, xk] = product_components(SimplexKey{{}, pg.id, pg.degree});
            out.add({pg.degree,
                     encode_bar({pr.i0, simplex_vertices(ak), pr.chain, pr.g, xk})},
                    coeff);
        }
        return out;
    });

    ChainMap eta(cgr, cgr, 1, [st](const GenKey& gk) {
        BarSimplex s = decode_bar(gk.id, gk.degree);
        int n = s.level();
        SimplexKey pk = make_product_key(key_from_vertices(s.t), s.x);
        FormalChain out;
        for (const auto& [pg, coeff] :
             ez_homotopy_on_gen(st->simplex(n), st->x.at(s.i0), {gk.degree, pk.base})) {
            auto [ak, xk] = product_components(SimplexKey{{}, pg.id, pg.degree});
            std::vector<int> t = simplex_vertices(ak);
            std::vector<char> hit(static_cast<size_t>(n) + 1, 0);
            for (int w : t) hit[static_cast<size_t>(w)] = 1;
            bool surj = true;
            for (int w = 0; w <= n; ++w) surj = surj && hit[static_cast<size_t>(w)];
            if (!surj) continue;
            out.add({pg.degree, encode_bar({s.i0, t, s.chain, s.g, xk})}, coeff);
        }
        return out;
    });

    Reduction r_ez{cgr, b_complex, std::move(alpha), std::move(beta), std::move(eta)};
    Equivalence graded = compose_equivalences(equivalence_from_reduction(r_ez), e_b);

    ChainMap delta(cgr, cgr, -1, [cc, graded_diff](const GenKey& gk) {
        FormalChain out = cc.diff(gk);
        for (const auto& [term, coeff] : graded_diff(gk)) out.add(term, -coeff);
        return out;
    });
    return perturb_equivalence(graded, delta, 10 + 2 * degree_budget);
}

Equivalence hocolim_effective(const SpaceDiagram& x, const PointwiseEH& pw,
                              size_t degree_budget) {
    return holan_effective(x, Functor::to_terminal(x.index_ptr()), 0, pw, degree_budget);
}

CofibrantReplacement cofibrant_replacement(const SpaceDiagram& x) {
    Functor idf = Functor::identity(x.index_ptr());
    SpaceDiagram q = holan_diagram(x, idf, -1);
    std::vector<SimplicialMap> ev;
    for (int i = 0; i < x.index().num_objects(); ++i) {
        auto xd = std::make_shared<SpaceDiagram>(x);
        ev.push_back(SimplicialMap(q.at(i), x.at(i),
                                   [xd](const std::string& b, int dim) {
                                       BarSimplex s = decode_bar(b, dim);
                                       int total = s.g;
                                       for (auto it = s.chain.rbegin();
                                            it != s.chain.rend(); ++it)
                                           total = xd->index().compose(total, *it);
                                       return xd->arrow(total).apply(s.x);
                                   }));
    }
    return {std::move(q), std::move(ev)};
}

}  // namespace effho
