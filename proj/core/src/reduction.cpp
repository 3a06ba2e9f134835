#include "effho/reduction.hpp"

#include <mutex>

namespace effho {

namespace {

FormalChain retag(const FormalChain& c, const std::string& tag, const std::string& field,
                  int degree_shift = 0) {
    FormalChain out;
    for (const auto& [g, v] : c)
        out.add({g.degree + degree_shift, keyenc::node(tag, {field, g.id})}, v);
    return out;
}

}  // namespace

Reduction identity_reduction(const ChainComplex& c) {
    return {c, c, ChainMap::identity(c), ChainMap::identity(c), ChainMap::zero(c, c, 1)};
}

Reduction iso_reduction(const ChainMap& fwd, const ChainMap& bwd) {
    if (!bwd.dom().same(fwd.cod()) || !bwd.cod().same(fwd.dom()) || fwd.shift() != 0 ||
        bwd.shift() != 0)
        throw ComplexMismatchError("iso reduction: maps are not a degree 0 inverse pair");
    return {fwd.dom(), fwd.cod(), fwd, bwd, ChainMap::zero(fwd.dom(), fwd.dom(), 1)};
}

namespace {

bool expect_equal(CheckReport& rep, const FormalChain& lhs, const FormalChain& rhs,
                  const std::string& what, const GenKey& g) {
    if (lhs == rhs) return true;
    rep.ok = false;
    rep.witness = what + " fails at " + g.id + "@" + std::to_string(g.degree) +
                  ": lhs = " + lhs.to_string() + ", rhs = " + rhs.to_string();
    return false;
}

}  // namespace

CheckReport verify_reduction(const Reduction& r, const std::vector<GenKey>& top_probes,
                             const std::vector<GenKey>& bottom_probes) {
    CheckReport rep;
    for (const GenKey& g : top_probes) {
        FormalChain x = FormalChain::single(g);
        if (!expect_equal(rep, r.alpha.apply(r.top.diff(g)), r.bottom.diff(r.alpha.apply_gen(g)),
                          "alpha d = d alpha", g))
            return rep;
        FormalChain hom = r.top.diff(r.eta.apply_gen(g)) + r.eta.apply(r.top.diff(g));
        if (!expect_equal(rep, hom, x - r.beta.apply(r.alpha.apply_gen(g)),
                          "d eta + eta d = id - beta alpha", g))
            return rep;
        if (!expect_equal(rep, r.eta.apply(r.eta.apply_gen(g)), FormalChain(), "eta eta = 0", g))
            return rep;
        if (!expect_equal(rep, r.alpha.apply(r.eta.apply_gen(g)), FormalChain(),
                          "alpha eta = 0", g))
            return rep;
    }
    for (const GenKey& b : bottom_probes) {
        if (!expect_equal(rep, r.beta.apply(r.bottom.diff(b)), r.top.diff(r.beta.apply_gen(b)),
                          "beta d = d beta", b))
            return rep;
        if (!expect_equal(rep, r.alpha.apply(r.beta.apply_gen(b)), FormalChain::single(b),
                          "alpha beta = id", b))
            return rep;
        if (!expect_equal(rep, r.eta.apply(r.beta.apply_gen(b)), FormalChain(), "eta beta = 0",
                          b))
            return rep;
    }
    return rep;
}

std::vector<GenKey> basis_probes(const ChainComplex& c, int max_degree) {
    std::vector<GenKey> out;
    for (int d = 0; d <= max_degree; ++d)
        for (const GenKey& g : c.basis(d)) out.push_back(g);
    return out;
}

Reduction compose_reductions(const Reduction& first, const Reduction& second) {
    if (!first.bottom.same(second.top))
        throw ComplexMismatchError("compose reductions: middle complexes differ");
    ChainMap alpha = second.alpha.compose_after(first.alpha).memoized();
    ChainMap beta = first.beta.compose_after(second.beta).memoized();
    ChainMap eta =
        (first.eta + first.beta.compose_after(second.eta.compose_after(first.alpha))).memoized();
    return {first.top, second.bottom, std::move(alpha), std::move(beta), std::move(eta)};
}

ChainComplex perturbed_complex(const ChainComplex& c, const ChainMap& delta, std::string name) {
    if (!delta.dom().same(c) || !delta.cod().same(c) || delta.shift() != -1)
        throw ComplexMismatchError("perturbation must be a degree -1 endo map");
    if (name.empty()) name = c.name() + "~";
    auto in_basis = [c](const GenKey& g) { return c.in_basis(g); };
    auto diff = [c, delta](const GenKey& g) { return c.diff(g) + delta.apply_gen(g); };
    std::optional<ChainComplex::BasisFn> basis;
    if (c.effective()) basis = [c](int d) { return c.basis(d); };
    return ChainComplex(std::move(name), std::move(in_basis), std::move(diff), std::move(basis));
}

Reduction easy_perturbation(const Reduction& r, const ChainMap& bottom_delta) {
    ChainMap top_delta =
        r.beta.compose_after(bottom_delta).compose_after(r.alpha).memoized();
    return easy_perturbation(r, bottom_delta, perturbed_complex(r.top, top_delta),
                             perturbed_complex(r.bottom, bottom_delta));
}

Reduction easy_perturbation(const Reduction& r, const ChainMap& bottom_delta,
                            ChainComplex new_top, ChainComplex new_bottom) {
    if (!bottom_delta.dom().same(r.bottom) || !bottom_delta.cod().same(r.bottom) ||
        bottom_delta.shift() != -1)
        throw ComplexMismatchError("easy perturbation: delta must be a degree -1 bottom endo");
    return {new_top, new_bottom, r.alpha.rehomed(new_top, new_bottom),
            r.beta.rehomed(new_bottom, new_top), r.eta.rehomed(new_top, new_top)};
}

Reduction basic_perturbation(const Reduction& r, const ChainMap& top_delta,
                             size_t nilpotency_bound) {
    return basic_perturbation(r, top_delta, nilpotency_bound,
                              perturbed_complex(r.top, top_delta));
}

Reduction basic_perturbation(const Reduction& r, const ChainMap& top_delta,
                             size_t nilpotency_bound, ChainComplex new_top) {
    if (!top_delta.dom().same(r.top) || !top_delta.cod().same(r.top) || top_delta.shift() != -1)
        throw ComplexMismatchError("basic perturbation: delta must be a degree -1 top endo");
    ChainMap eta = r.eta, delta = top_delta;
    size_t bound = nilpotency_bound;

    // phi = sum (-1)^i (eta delta)^i, psi = sum (-1)^i (delta eta)^i
    auto series = [bound](const ChainMap& inner, const ChainMap& outer, const GenKey& g) {
        FormalChain acc = FormalChain::single(g);
        FormalChain term = acc;
        Int sign = 1;
        for (size_t i = 1;; ++i) {
            term = outer.apply(inner.apply(term));
            if (term.is_zero()) break;
            if (i > bound)
                throw NonNilpotentError("perturbation series does not terminate at " + g.id +
                                        "@" + std::to_string(g.degree));
            sign = -sign;
            acc += term * sign;
        }
        return acc;
    };
    ChainMap phi = ChainMap(r.top, r.top, 0,
                            [series, eta, delta](const GenKey& g) {
                                return series(delta, eta, g);
                            })
                       .memoized();
    ChainMap psi = ChainMap(r.top, r.top, 0,
                            [series, eta, delta](const GenKey& g) {
                                return series(eta, delta, g);
                            })
                       .memoized();

    ChainMap bottom_delta = r.alpha.compose_after(psi)
                                .compose_after(top_delta)
                                .compose_after(r.beta)
                                .memoized();
    ChainComplex new_bottom = perturbed_complex(r.bottom, bottom_delta);

    ChainMap alpha = r.alpha.compose_after(psi).memoized().rehomed(new_top, new_bottom);
    ChainMap beta = phi.compose_after(r.beta).memoized().rehomed(new_bottom, new_top);
    ChainMap new_eta = phi.compose_after(r.eta).memoized().rehomed(new_top, new_top);
    return {new_top, new_bottom, std::move(alpha), std::move(beta), std::move(new_eta)};
}

Equivalence equivalence_from_reduction(const Reduction& r) {
    return {identity_reduction(r.top), r};
}

CheckReport verify_equivalence(const Equivalence& e, const std::vector<GenKey>& top_probes,
                               const std::vector<GenKey>& left_probes,
                               const std::vector<GenKey>& right_probes) {
    CheckReport rep;
    if (!e.left.top.same(e.right.top)) {
        rep.ok = false;
        rep.witness = "legs do not share the top complex";
        return rep;
    }
    rep = verify_reduction(e.left, top_probes, left_probes);
    if (!rep.ok) {
        rep.witness = "left leg: " + rep.witness;
        return rep;
    }
    rep = verify_reduction(e.right, top_probes, right_probes);
    if (!rep.ok) rep.witness = "right leg: " + rep.witness;
    return rep;
}

namespace {

// parts: 0 = left top, 1 = right top, 2 = middle shifted by one
struct PullbackParts {
    ChainComplex t1, t2, mid;
    ChainMap a1;  // t1 -> mid
    ChainMap a2;  // t2 -> mid
};

ChainComplex pullback_complex(const PullbackParts& p) {
    auto t1 = p.t1, t2 = p.t2, mid = p.mid;
    auto a1 = p.a1, a2 = p.a2;
    std::string name = "pullback(" + t1.name() + "," + t2.name() + ")";
    auto in_basis = [t1, t2, mid](const GenKey& g) {
        auto node = keyenc::try_parse_node(g.id);
        if (!node || node->tag != "pb" || node->fields.size() != 2) return false;
        const std::string& part = node->fields[0];
        if (part == "0") return t1.in_basis({g.degree, node->fields[1]});
        if (part == "1") return t2.in_basis({g.degree, node->fields[1]});
        if (part == "2") return mid.in_basis({g.degree + 1, node->fields[1]});
        return false;
    };
    auto diff = [t1, t2, mid, a1, a2](const GenKey& g) {
        auto node = keyenc::try_parse_node(g.id);
        if (!node || node->tag != "pb" || node->fields.size() != 2)
            throw IllFormedError("pullback: generator id is not tagged: " + g.id);
        const std::string& part = node->fields[0];
        FormalChain out;
        if (part == "0") {
            GenKey inner{g.degree, node->fields[1]};
            out += retag(t1.diff(inner), "pb", "0");
            out += retag(a1.apply_gen(inner), "pb", "2", -1);
        } else if (part == "1") {
            GenKey inner{g.degree, node->fields[1]};
            out += retag(t2.diff(inner), "pb", "1");
            out -= retag(a2.apply_gen(inner), "pb", "2", -1);
        } else if (part == "2") {
            GenKey inner{g.degree + 1, node->fields[1]};
            out -= retag(mid.diff(inner), "pb", "2", -1);
        } else {
            throw IllFormedError("pullback: bad part tag in " + g.id);
        }
        return out;
    };
    std::optional<ChainComplex::BasisFn> basis;
    if (t1.effective() && t2.effective() && mid.effective()) {
        basis = [t1, t2, mid](int d) {
            std::vector<GenKey> out;
            for (const GenKey& g : t1.basis(d))
                out.push_back({d, keyenc::node("pb", {"0", g.id})});
            for (const GenKey& g : t2.basis(d))
                out.push_back({d, keyenc::node("pb", {"1", g.id})});
            for (const GenKey& g : mid.basis(d + 1))
                out.push_back({d, keyenc::node("pb", {"2", g.id})});
            return out;
        };
    }
    return ChainComplex(std::move(name), std::move(in_basis), std::move(diff), std::move(basis));
}

struct SplitGen {
    int part;  // 0, 1, 2
    GenKey inner;
};

SplitGen split_pullback_gen(const GenKey& g) {
    auto node = keyenc::try_parse_node(g.id);
    if (!node || node->tag != "pb" || node->fields.size() != 2)
        throw IllFormedError("pullback: generator id is not tagged: " + g.id);
    if (node->fields[0] == "0") return {0, {g.degree, node->fields[1]}};
    if (node->fields[0] == "1") return {1, {g.degree, node->fields[1]}};
    if (node->fields[0] == "2") return {2, {g.degree + 1, node->fields[1]}};
    throw IllFormedError("pullback: bad part tag in " + g.id);
}

}  // namespace

Equivalence compose_equivalences(const Equivalence& first, const Equivalence& second) {
    if (!first.left.top.same(first.right.top) || !second.left.top.same(second.right.top))
        throw ComplexMismatchError("compose equivalences: malformed span");
    if (!first.right.bottom.same(second.left.bottom))
        throw ComplexMismatchError("compose equivalences: middle complexes differ");

    PullbackParts parts{first.left.top, second.left.top, first.right.bottom, first.right.alpha,
                        second.left.alpha};
    ChainComplex p = pullback_complex(parts);

    ChainMap b2 = second.left.beta;   // mid -> t2
    ChainMap b1 = first.right.beta;   // mid -> t1
    ChainMap a1 = first.right.alpha;  // t1 -> mid
    ChainMap a2 = second.left.alpha;  // t2 -> mid
    ChainMap e1 = first.right.eta;    // t1 -> t1, degree +1
    ChainMap e2 = second.left.eta;    // t2 -> t2, degree +1

    // projection to t1; contracts t2 (+) mid[1] via the right leg of `first`
    Reduction to_t1{
        p, first.left.top,
        ChainMap(p, first.left.top, 0,
                 [](const GenKey& g) {
                     SplitGen s = split_pullback_gen(g);
                     return s.part == 0 ? FormalChain::single(s.inner) : FormalChain();
                 }),
        ChainMap(first.left.top, p, 0,
                 [b2, a1](const GenKey& g) {
                     FormalChain out = FormalChain::single(
                         {g.degree, keyenc::node("pb", {"0", g.id})});
                     out += retag(b2.apply(a1.apply_gen(g)), "pb", "1");
                     return out;
                 }),
        ChainMap(p, p, 1, [e2, b2](const GenKey& g) {
            SplitGen s = split_pullback_gen(g);
            if (s.part == 1) return retag(e2.apply_gen(s.inner), "pb", "1");
            if (s.part == 2) return retag(-b2.apply_gen(s.inner), "pb", "1");
            return FormalChain();
        })};

    // projection to t2; contracts t1 (+) mid[1] via the left leg of `second`
    Reduction to_t2{
        p, second.left.top,
        ChainMap(p, second.left.top, 0,
                 [](const GenKey& g) {
                     SplitGen s = split_pullback_gen(g);
                     return s.part == 1 ? FormalChain::single(s.inner) : FormalChain();
                 }),
        ChainMap(second.left.top, p, 0,
                 [b1, a2](const GenKey& g) {
                     FormalChain out = FormalChain::single(
                         {g.degree, keyenc::node("pb", {"1", g.id})});
                     out += retag(b1.apply(a2.apply_gen(g)), "pb", "0");
                     return out;
                 }),
        ChainMap(p, p, 1, [e1, b1](const GenKey& g) {
            SplitGen s = split_pullback_gen(g);
            if (s.part == 0) return retag(e1.apply_gen(s.inner), "pb", "0");
            if (s.part == 2) return retag(b1.apply_gen(s.inner), "pb", "0");
            return FormalChain();
        })};

    return {compose_reductions(to_t1, first.left), compose_reductions(to_t2, second.right)};
}

Equivalence perturb_equivalence(const Equivalence& e, const ChainMap& delta,
                                size_t nilpotency_bound) {
    if (!e.left.top.same(e.right.top))
        throw ComplexMismatchError("perturb equivalence: malformed span");
    if (!delta.dom().same(e.left.bottom) || !delta.cod().same(e.left.bottom) ||
        delta.shift() != -1)
        throw ComplexMismatchError("perturb equivalence: delta must act on the left bottom");
    ChainMap top_delta = e.left.beta.compose_after(delta).compose_after(e.left.alpha).memoized();
    ChainComplex new_top = perturbed_complex(e.left.top, top_delta);
    Reduction left = easy_perturbation(e.left, delta, new_top,
                                       perturbed_complex(e.left.bottom, delta));
    Reduction right = basic_perturbation(e.right, top_delta, nilpotency_bound, new_top);
    return {std::move(left), std::move(right)};
}

// --- structural combinators ------------------------------------------------

namespace {

struct SumGen {
    std::string index;
    GenKey inner;
};

SumGen split_sum_gen(const GenKey& g) {
    auto node = keyenc::try_parse_node(g.id);
    if (!node || node->tag != "s" || node->fields.size() != 2)
        throw IllFormedError("sum: generator id is not tagged: " + g.id);
    return {node->fields[0], {g.degree, node->fields[1]}};
}

size_t sum_index(const SumGen& s, size_t bound) {
    if (s.index.empty()) throw IllFormedError("sum: empty part index");
    size_t v = 0;
    for (char ch : s.index) {
        if (ch < '0' || ch > '9') throw IllFormedError("sum: bad part index " + s.index);
        v = v * 10 + static_cast<size_t>(ch - '0');
    }
    if (v >= bound) throw IllFormedError("sum: part index out of range: " + s.index);
    return v;
}

}  // namespace

Reduction direct_sum_reduction(std::vector<Reduction> parts, std::string name) {
    auto ps = std::make_shared<std::vector<Reduction>>(std::move(parts));
    std::vector<ChainComplex> tops, bottoms;
    for (const auto& r : *ps) {
        tops.push_back(r.top);
        bottoms.push_back(r.bottom);
    }
    ChainComplex top = direct_sum(tops, name.empty() ? "" : name + ".top");
    ChainComplex bottom = direct_sum(bottoms, name.empty() ? "" : name + ".bottom");
    auto lift_map = [ps](ChainMap Reduction::* m) {
        return [ps, m](const GenKey& g) {
            SumGen s = split_sum_gen(g);
            size_t i = sum_index(s, ps->size());
            return retag(((*ps)[i].*m).apply_gen(s.inner), "s", s.index);
        };
    };
    return {top, bottom, ChainMap(top, bottom, 0, lift_map(&Reduction::alpha)),
            ChainMap(bottom, top, 0, lift_map(&Reduction::beta)),
            ChainMap(top, top, 1, lift_map(&Reduction::eta))};
}

Reduction direct_sum_family_reduction(std::string name, std::function<Reduction(int)> part,
                                      std::function<int(int)> parts_touching_degree) {
    struct Cache {
        std::mutex mtx;
        std::map<int, Reduction> parts;
    };
    auto cache = std::make_shared<Cache>();
    auto get = [cache, part](int k) -> const Reduction& {
        std::lock_guard<std::mutex> lock(cache->mtx);
        auto it = cache->parts.find(k);
        if (it != cache->parts.end()) return it->second;
        return cache->parts.emplace(k, part(k)).first->second;
    };
    ChainComplex top = direct_sum_family(
        name + ".top", [get](int k) { return get(k).top; }, parts_touching_degree);
    ChainComplex bottom = direct_sum_family(
        name + ".bottom", [get](int k) { return get(k).bottom; }, parts_touching_degree);
    auto lift_map = [get](ChainMap Reduction::* m) {
        return [get, m](const GenKey& g) {
            SumGen s = split_sum_gen(g);
            size_t k = sum_index(s, size_t(g.degree < 0 ? 0 : g.degree) + 1);
            return retag((get(static_cast<int>(k)).*m).apply_gen(s.inner), "s", s.index);
        };
    };
    return {top, bottom, ChainMap(top, bottom, 0, lift_map(&Reduction::alpha)),
            ChainMap(bottom, top, 0, lift_map(&Reduction::beta)),
            ChainMap(top, top, 1, lift_map(&Reduction::eta))};
}

Reduction suspend_reduction(const Reduction& r, int k) {
    if (k == 0) return r;
    ChainComplex top = suspend(r.top, k);
    ChainComplex bottom = suspend(r.bottom, k);
    Int sign = (k % 2 == 0) ? 1 : -1;
    auto shift_chain = [](const FormalChain& c, int k) {
        FormalChain out;
        for (const auto& [g, v] : c) out.add({g.degree + k, g.id}, v);
        return out;
    };
    ChainMap a = r.alpha, b = r.beta, h = r.eta;
    return {top, bottom,
            ChainMap(top, bottom, 0,
                     [a, k, shift_chain](const GenKey& g) {
                         return shift_chain(a.apply_gen({g.degree - k, g.id}), k);
                     }),
            ChainMap(bottom, top, 0,
                     [b, k, shift_chain](const GenKey& g) {
                         return shift_chain(b.apply_gen({g.degree - k, g.id}), k);
                     }),
            ChainMap(top, top, 1, [h, k, sign, shift_chain](const GenKey& g) {
                return shift_chain(h.apply_gen({g.degree - k, g.id}), k) * sign;
            })};
}

namespace {

struct TensorGen {
    int left_degree;
    std::string left, right;
};

TensorGen split_tensor_gen(const GenKey& g) {
    auto node = keyenc::try_parse_node(g.id);
    if (!node || node->tag != "t" || node->fields.size() != 3)
        throw IllFormedError("tensor: generator id is not tagged: " + g.id);
    int p = 0;
    for (char ch : node->fields[0]) {
        if (ch < '0' || ch > '9') throw IllFormedError("tensor: bad left degree in " + g.id);
        p = p * 10 + (ch - '0');
    }
    return {p, node->fields[1], node->fields[2]};
}

FormalChain tensor_pair(const FormalChain& left, const FormalChain& right, int total_degree) {
    FormalChain out;
    for (const auto& [x, cx] : left)
        for (const auto& [y, cy] : right)
            out.add({total_degree, keyenc::node("t", {std::to_string(x.degree), x.id, y.id})},
                    cx * cy);
    return out;
}

}  // namespace

Reduction tensor_reduction(const Reduction& r1, const Reduction& r2, std::string name) {
    ChainComplex top = tensor(r1.top, r2.top, name.empty() ? "" : name + ".top");
    ChainComplex bottom = tensor(r1.bottom, r2.bottom, name.empty() ? "" : name + ".bottom");
    Reduction a = r1, b = r2;
    auto alpha = [a, b](const GenKey& g) {
        TensorGen t = split_tensor_gen(g);
        return tensor_pair(a.alpha.apply_gen({t.left_degree, t.left}),
                           b.alpha.apply_gen({g.degree - t.left_degree, t.right}), g.degree);
    };
    auto beta = [a, b](const GenKey& g) {
        TensorGen t = split_tensor_gen(g);
        return tensor_pair(a.beta.apply_gen({t.left_degree, t.left}),
                           b.beta.apply_gen({g.degree - t.left_degree, t.right}), g.degree);
    };
    auto eta = [a, b](const GenKey& g) {
        TensorGen t = split_tensor_gen(g);
        GenKey x{t.left_degree, t.left};
        GenKey y{g.degree - t.left_degree, t.right};
        FormalChain out =
            tensor_pair(a.eta.apply_gen(x), FormalChain::single(y), g.degree + 1);
        Int sign = (t.left_degree % 2 == 0) ? 1 : -1;
        out += tensor_pair(a.beta.apply(a.alpha.apply_gen(x)), b.eta.apply_gen(y),
                           g.degree + 1) *
               sign;
        return out;
    };
    return {top, bottom, ChainMap(top, bottom, 0, alpha), ChainMap(bottom, top, 0, beta),
            ChainMap(top, top, 1, eta)};
}

namespace {

// Reattaches a reduction to an externally built top with identical
// generator keys (the combinators below lift both legs separately and the
// two lifted tops agree key for key).
Reduction with_top(Reduction r, const ChainComplex& top) {
    r.alpha = r.alpha.rehomed(top, r.bottom);
    r.beta = r.beta.rehomed(r.bottom, top);
    r.eta = r.eta.rehomed(top, top);
    r.top = top;
    return r;
}

}  // namespace

Equivalence direct_sum_equivalence(std::vector<Equivalence> parts, std::string name) {
    std::vector<Reduction> lefts, rights;
    for (auto& e : parts) {
        if (!e.left.top.same(e.right.top))
            throw ComplexMismatchError("direct sum equivalence: malformed span part");
        lefts.push_back(e.left);
        rights.push_back(e.right);
    }
    Reduction left = direct_sum_reduction(std::move(lefts), name.empty() ? "" : name + ".l");
    Reduction right = direct_sum_reduction(std::move(rights), name.empty() ? "" : name + ".r");
    right = with_top(std::move(right), left.top);
    return {std::move(left), std::move(right)};
}

Equivalence direct_sum_family_equivalence(std::string name,
                                          std::function<Equivalence(int)> part,
                                          std::function<int(int)> parts_touching_degree) {
    struct Cache {
        std::mutex mtx;
        std::map<int, Equivalence> parts;
    };
    auto cache = std::make_shared<Cache>();
    auto get = [cache, part](int k) -> const Equivalence& {
        std::lock_guard<std::mutex> lock(cache->mtx);
        auto it = cache->parts.find(k);
        if (it != cache->parts.end()) return it->second;
        return cache->parts.emplace(k, part(k)).first->second;
    };
    Reduction left = direct_sum_family_reduction(
        name + ".l", [get](int k) { return get(k).left; }, parts_touching_degree);
    Reduction right = direct_sum_family_reduction(
        name + ".r", [get](int k) { return get(k).right; }, parts_touching_degree);
    right = with_top(std::move(right), left.top);
    return {std::move(left), std::move(right)};
}

Equivalence suspend_equivalence(const Equivalence& e, int k) {
    if (k == 0) return e;
    Reduction left = suspend_reduction(e.left, k);
    Reduction right = with_top(suspend_reduction(e.right, k), left.top);
    return {std::move(left), std::move(right)};
}

Equivalence tensor_equivalence(const Equivalence& e1, const Equivalence& e2, std::string name) {
    Reduction left =
        tensor_reduction(e1.left, e2.left, name.empty() ? "" : name + ".l");
    Reduction right =
        with_top(tensor_reduction(e1.right, e2.right, name.empty() ? "" : name + ".r"),
                 left.top);
    return {std::move(left), std::move(right)};
}

// --- normal form -----------------------------------------------------------

namespace {

struct NfLevel {
    std::vector<GenKey> basis;
    std::map<std::string, size_t> index;
    // Coordinates: new = p * old, old = q * new, with p q = id.
    IntMatrix p, q;
    // New-basis indices < rank map downward: d(e_j) = down_factor[j] * e_{down_target[j]}
    // one level below; indices >= rank span the kernel. A kernel index j hit
    // from above records the elementary factor (0 when nothing hits it).
    size_t rank = 0;
    std::vector<Int> down_factor;
    std::vector<size_t> down_target;
    std::vector<Int> hit_factor;
    std::vector<size_t> hit_source;
    bool down_done = false;
};

class NfState {
public:
    explicit NfState(ChainComplex top) : top_(std::move(top)) {}

    const ChainComplex& top() const { return top_; }

    // Safe to read once every level <= d+1 has been processed; level() does
    // exactly that before returning.
    const NfLevel& level(int d) {
        std::lock_guard<std::mutex> lock(mtx_);
        for (int k = 0; k <= d + 1; ++k) process(k);
        return raw(std::max(d, 0));
    }

    bool kept(const NfLevel& lv, size_t j) const {
        return j < lv.rank ? lv.down_factor[j] != 1 : lv.hit_factor[j] != 1;
    }

private:
    NfLevel& raw(int d) {
        auto it = levels_.find(d);
        if (it != levels_.end()) return it->second;
        NfLevel lv;
        if (d >= 0) lv.basis = top_.basis(d);
        size_t n = lv.basis.size();
        for (size_t i = 0; i < n; ++i) lv.index.emplace(lv.basis[i].id, i);
        lv.p = IntMatrix::identity(n);
        lv.q = IntMatrix::identity(n);
        lv.hit_factor.assign(n, 0);
        lv.hit_source.assign(n, 0);
        return levels_.emplace(d, std::move(lv)).first->second;
    }

    void process(int k) {
        NfLevel& hi = raw(k);
        if (hi.down_done) return;
        hi.down_done = true;
        if (k == 0) return;  // nothing below degree 0
        NfLevel& lo = raw(k - 1);
        size_t n = hi.basis.size(), m = lo.basis.size();
        if (n == 0) return;

        IntMatrix d_old(m, n);
        for (size_t j = 0; j < n; ++j)
            for (const auto& [g, v] : top_.diff(hi.basis[j])) {
                auto it = lo.index.find(g.id);
                if (it == lo.index.end() || g.degree != k - 1)
                    throw AuditError("normal form: differential leaves the basis at " +
                                     hi.basis[j].id);
                d_old.at(it->second, j) = v;
            }
        IntMatrix d_new = lo.p * d_old;
        for (size_t i = 0; i < lo.rank; ++i)
            for (size_t j = 0; j < n; ++j)
                if (d_new.at(i, j) != 0)
                    throw AuditError("normal form: d d != 0 at " + hi.basis[j].id);

        size_t km = m - lo.rank;
        IntMatrix mk(km, n);
        for (size_t i = 0; i < km; ++i)
            for (size_t j = 0; j < n; ++j) mk.at(i, j) = d_new.at(lo.rank + i, j);
        SmithResult snf = smith_normal_form(mk);

        hi.q = hi.q * snf.v;
        hi.p = snf.vinv * hi.p;
        hi.rank = snf.rank;
        hi.down_factor.assign(n, 0);
        hi.down_target.assign(n, 0);
        for (size_t j = 0; j < snf.rank; ++j) {
            hi.down_factor[j] = snf.s.at(j, j);
            hi.down_target[j] = lo.rank + j;
            lo.hit_factor[lo.rank + j] = snf.s.at(j, j);
            lo.hit_source[lo.rank + j] = j;
        }

        // Rotate the kernel block of the level below to the Smith row basis.
        IntMatrix q2 = lo.q, p2 = lo.p;
        for (size_t c = 0; c < m; ++c)
            for (size_t i = 0; i < km; ++i) {
                Int acc = 0;
                for (size_t t = 0; t < km; ++t)
                    acc += lo.q.at(c, lo.rank + t) * snf.uinv.at(t, i);
                q2.at(c, lo.rank + i) = acc;
            }
        for (size_t c = 0; c < m; ++c)
            for (size_t i = 0; i < km; ++i) {
                Int acc = 0;
                for (size_t t = 0; t < km; ++t) acc += snf.u.at(i, t) * lo.p.at(lo.rank + t, c);
                p2.at(lo.rank + i, c) = acc;
            }
        lo.q = std::move(q2);
        lo.p = std::move(p2);
    }

    ChainComplex top_;
    std::mutex mtx_;
    std::map<int, NfLevel> levels_;
};

}  // namespace

Reduction normal_form_reduction(const ChainComplex& c, std::string name) {
    if (!c.effective())
        throw UnsupportedError("normal form reduction needs an enumerable basis");
    auto st = std::make_shared<NfState>(c);
    if (name.empty()) name = c.name() + ".nf";

    auto decode = [](const GenKey& g, size_t& j) {
        auto node = keyenc::try_parse_node(g.id);
        if (!node || node->tag != "nf" || node->fields.size() != 1) return false;
        j = 0;
        for (char ch : node->fields[0]) {
            if (ch < '0' || ch > '9') return false;
            j = j * 10 + static_cast<size_t>(ch - '0');
        }
        return true;
    };

    auto in_basis = [st, decode](const GenKey& g) {
        size_t j;
        if (g.degree < 0 || !decode(g, j)) return false;
        const NfLevel& lv = st->level(g.degree);
        return j < lv.basis.size() && st->kept(lv, j);
    };
    auto diff = [st, decode](const GenKey& g) {
        size_t j;
        if (!decode(g, j)) throw IllFormedError("normal form: foreign generator " + g.id);
        const NfLevel& lv = st->level(g.degree);
        FormalChain out;
        if (j < lv.rank && lv.down_factor[j] != 1)
            out.add({g.degree - 1,
                     keyenc::node("nf", {std::to_string(lv.down_target[j])})},
                    lv.down_factor[j]);
        return out;
    };
    ChainComplex::BasisFn basis = [st](int d) {
        std::vector<GenKey> out;
        if (d < 0) return out;
        const NfLevel& lv = st->level(d);
        for (size_t j = 0; j < lv.basis.size(); ++j)
            if (st->kept(lv, j)) out.push_back({d, keyenc::node("nf", {std::to_string(j)})});
        return out;
    };
    ChainComplex bottom(std::move(name), std::move(in_basis), std::move(diff),
                        std::move(basis));

    ChainMap alpha(c, bottom, 0, [st](const GenKey& g) {
        const NfLevel& lv = st->level(g.degree);
        auto it = lv.index.find(g.id);
        if (it == lv.index.end())
            throw IllFormedError("normal form: foreign generator " + g.id);
        FormalChain out;
        for (size_t j = 0; j < lv.basis.size(); ++j)
            if (st->kept(lv, j) && lv.p.at(j, it->second) != 0)
                out.add({g.degree, keyenc::node("nf", {std::to_string(j)})},
                        lv.p.at(j, it->second));
        return out;
    });
    ChainMap beta(bottom, c, 0, [st, decode](const GenKey& g) {
        size_t j;
        if (!decode(g, j)) throw IllFormedError("normal form: foreign generator " + g.id);
        const NfLevel& lv = st->level(g.degree);
        FormalChain out;
        for (size_t i = 0; i < lv.basis.size(); ++i)
            if (lv.q.at(i, j) != 0) out.add(lv.basis[i], lv.q.at(i, j));
        return out;
    });
    ChainMap eta(c, c, 1, [st](const GenKey& g) {
        const NfLevel& lv = st->level(g.degree);
        auto it = lv.index.find(g.id);
        if (it == lv.index.end())
            throw IllFormedError("normal form: foreign generator " + g.id);
        const NfLevel& up = st->level(g.degree + 1);
        FormalChain out;
        for (size_t j = lv.rank; j < lv.basis.size(); ++j) {
            if (lv.hit_factor[j] != 1) continue;
            Int coeff = lv.p.at(j, it->second);
            if (coeff == 0) continue;
            size_t src = lv.hit_source[j];
            for (size_t i = 0; i < up.basis.size(); ++i)
                if (up.q.at(i, src) != 0) out.add(up.basis[i], coeff * up.q.at(i, src));
        }
        return out;
    });

    return {c, bottom, alpha.memoized(), beta.memoized(), eta.memoized()};
}

}  // namespace effho
