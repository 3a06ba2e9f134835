#include "effho/ez.hpp"

#include "effho/keyenc.hpp"

#include <map>
#include <mutex>
#include <set>

namespace effho {

namespace {

std::pair<SimplexKey, SimplexKey> pair_of_gen(const GenKey& g) {
    return product_components({{}, g.id, g.degree});
}

const FormalChain& universal_h(int m);

// h on one nondegenerate product pair, via the vertex maps of its components
FormalChain natural_h(const LESpace& x, const LESpace& y, const SimplexKey& kx,
                      const SimplexKey& ky) {
    FormalChain out;
    int d = kx.dim();
    if (d == 0) return out;
    for (const auto& [gen, coeff] : universal_h(d)) {
        auto [ka, kb] = pair_of_gen(gen);
        SimplexKey a = apply_monotone(x, kx, simplex_vertices(ka));
        SimplexKey b = apply_monotone(y, ky, simplex_vertices(kb));
        SimplexKey pk = make_product_key(a, b);
        if (pk.nondegenerate()) out.add({gen.degree, pk.base}, coeff);
    }
    return out;
}

FormalChain compute_universal_h(int m) {
    LESpace dm = standard_simplex(m);
    LESpace prod = product_space(dm, dm);
    ChainComplex cp = normalized_chains(prod);
    std::vector<int> all(m + 1);
    for (int i = 0; i <= m; ++i) all[i] = i;
    std::string vid = keyenc::join_ints(all);
    std::string pair_base =
        keyenc::node("p", {encode_key({{}, vid, m}), encode_key({{}, vid, m})});
    GenKey iota{m, pair_base};

    FormalChain w;
    w.add(iota, 1);
    for (const auto& [tg, c] : aw_on_gen(dm, dm, iota))
        for (const auto& [pg, c2] : shuffle_on_gen(tg)) w.add(pg, -c * c2);
    for (const auto& [fg, c] : cp.diff(iota)) {
        auto [ka, kb] = pair_of_gen(fg);
        for (const auto& [hg, c2] : natural_h(dm, dm, ka, kb)) w.add(hg, -c * c2);
    }

    // cone on the vertex (0, 0)
    FormalChain out;
    for (const auto& [pg, c] : w) {
        auto [ka, kb] = pair_of_gen(pg);
        std::vector<int> va = simplex_vertices(ka), vb = simplex_vertices(kb);
        va.insert(va.begin(), 0);
        vb.insert(vb.begin(), 0);
        SimplexKey pk = make_product_key(key_from_vertices(va), key_from_vertices(vb));
        if (pk.nondegenerate()) out.add({pg.degree + 1, pk.base}, c);
    }
    return out;
}

const FormalChain& universal_h(int m) {
    static std::mutex mu;
    static std::map<int, FormalChain> cache;
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = cache.find(m);
        if (it != cache.end()) return it->second;
    }
    FormalChain val = (m == 0) ? FormalChain() : compute_universal_h(m);
    std::lock_guard<std::mutex> lk(mu);
    return cache.emplace(m, std::move(val)).first->second;
}

FormalChain aw_chain(const LESpace& x, const LESpace& y, const FormalChain& ch) {
    FormalChain out;
    for (const auto& [g, c] : ch)
        for (const auto& [tg, c2] : aw_on_gen(x, y, g)) out.add(tg, c * c2);
    return out;
}

FormalChain shuffle_chain(const FormalChain& ch) {
    FormalChain out;
    for (const auto& [g, c] : ch)
        for (const auto& [pg, c2] : shuffle_on_gen(g)) out.add(pg, c * c2);
    return out;
}

FormalChain h_chain(const LESpace& x, const LESpace& y, const FormalChain& ch) {
    FormalChain out;
    for (const auto& [g, c] : ch) {
        auto [kx, ky] = pair_of_gen(g);
        for (const auto& [hg, c2] : natural_h(x, y, kx, ky)) out.add(hg, c * c2);
    }
    return out;
}

FormalChain pi_chain(const LESpace& x, const LESpace& y, const FormalChain& ch) {
    return ch - shuffle_chain(aw_chain(x, y, ch));
}

}  // namespace

FormalChain aw_on_gen(const LESpace& x, const LESpace& y, const GenKey& g) {
    auto [kx, ky] = pair_of_gen(g);
    int n = g.degree;
    FormalChain out;
    for (int i = 0; i <= n; ++i) {
        std::vector<int> front(i + 1), back(n - i + 1);
        for (int t = 0; t <= i; ++t) front[t] = t;
        for (int t = 0; t <= n - i; ++t) back[t] = i + t;
        SimplexKey a = apply_monotone(x, kx, front);
        if (!a.nondegenerate()) continue;
        SimplexKey b = apply_monotone(y, ky, back);
        if (!b.nondegenerate()) continue;
        out.add({n, keyenc::node("t", {std::to_string(i), a.base, b.base})}, 1);
    }
    return out;
}

FormalChain shuffle_on_gen(const GenKey& g) {
    auto node = keyenc::parse_node(g.id);
    if (node.tag != "t" || node.fields.size() != 3)
        throw IllFormedError("shuffle: not a tensor generator: " + g.id);
    int p = std::stoi(node.fields[0]);
    int n = g.degree, q = n - p;
    if (p < 0 || q < 0) throw IllFormedError("shuffle: bad bidegree on " + g.id);
    const std::string& a = node.fields[1];
    const std::string& b = node.fields[2];

    FormalChain out;
    std::vector<int> mu(p);  // ascending positions of the word placed on b
    for (int i = 0; i < p; ++i) mu[i] = i;
    while (true) {
        long par = 0;
        for (int i = 0; i < p; ++i) par += mu[i] - i;
        std::vector<int> wb(mu.rbegin(), mu.rend());
        std::vector<int> wa;
        std::set<int> ms(mu.begin(), mu.end());
        for (int v = n - 1; v >= 0; --v)
            if (!ms.count(v)) wa.push_back(v);
        std::string base = keyenc::node(
            "p", {encode_key({std::move(wa), a, p}), encode_key({std::move(wb), b, q})});
        out.add({n, std::move(base)}, par % 2 == 0 ? 1 : -1);

        int t = p - 1;
        while (t >= 0 && mu[t] == n - (p - t)) --t;
        if (t < 0) break;
        ++mu[t];
        for (int r = t + 1; r < p; ++r) mu[r] = mu[r - 1] + 1;
    }
    return out;
}

FormalChain ez_homotopy_on_gen(const LESpace& x, const LESpace& y, const GenKey& g) {
    LESpace prod = product_space(x, y);
    FormalChain one;
    one.add(g, 1);
    FormalChain h1 = pi_chain(x, y, h_chain(x, y, pi_chain(x, y, one)));
    FormalChain dh1;
    for (const auto& [pg, c] : h1) {
        SimplexKey k{{}, pg.id, pg.degree};
        Int sign = 1;
        for (int i = 0; i <= pg.degree; ++i) {
            SimplexKey f = prod.face(k, i);
            if (f.nondegenerate()) dh1.add({pg.degree - 1, f.base}, c * sign);
            sign = -sign;
        }
    }
    return pi_chain(x, y, h_chain(x, y, pi_chain(x, y, dh1)));
}

Reduction ez_reduction(const LESpace& x, const LESpace& y, ChainComplex top,
                       ChainComplex bottom) {
    LESpace xx = x, yy = y;
    ChainMap alpha(top, bottom, 0,
                   [xx, yy](const GenKey& g) { return aw_on_gen(xx, yy, g); });
    ChainMap beta(bottom, top, 0, [](const GenKey& g) { return shuffle_on_gen(g); });
    ChainMap eta(top, top, 1,
                 [xx, yy](const GenKey& g) { return ez_homotopy_on_gen(xx, yy, g); });
    return {std::move(top), std::move(bottom), alpha.memoized(), beta.memoized(),
            eta.memoized()};
}

Reduction ez_reduction(const LESpace& x, const LESpace& y) {
    ChainComplex top = normalized_chains(product_space(x, y));
    ChainComplex bottom =
        tensor(normalized_chains(x), normalized_chains(y));
    return ez_reduction(x, y, std::move(top), std::move(bottom));
}

}  // namespace effho
