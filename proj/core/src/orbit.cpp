#include "effho/orbit.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace effho {

namespace {

std::string orbit_name(const FiniteGroup& g, const std::vector<int>& sub) {
    if (sub.size() == 1) return "G/e";
    if (static_cast<int>(sub.size()) == g.order()) return "G/G";
    std::string out = "G/{";
    for (size_t i = 0; i < sub.size(); ++i) {
        if (i) out += ",";
        out += g.element_name(sub[i]);
    }
    return out + "}";
}

// least element index of the coset x K
int coset_rep(const FiniteGroup& g, int x, const std::vector<int>& k) {
    int best = g.order();
    for (int e : k) best = std::min(best, g.mul(x, e));
    return best;
}

}  // namespace

OrbitCategory orbit_category(const FiniteGroup& g) {
    std::vector<std::vector<int>> subs = g.subgroups();
    int n = static_cast<int>(subs.size());

    std::vector<std::string> objects;
    for (const auto& s : subs) objects.push_back(orbit_name(g, s));

    std::vector<FiniteCategory::Morphism> morphisms;
    std::vector<int> reps;
    std::map<std::tuple<int, int, int>, int> index;
    for (int hi = 0; hi < n; ++hi)
        for (int ki = 0; ki < n; ++ki) {
            std::set<int> k(subs[ki].begin(), subs[ki].end());
            std::set<int> seen;
            for (int x = 0; x < g.order(); ++x) {
                int rep = coset_rep(g, x, subs[ki]);
                if (!seen.insert(rep).second) continue;
                bool equivariant = true;
                for (int h : subs[hi])
                    if (!k.count(g.mul(g.mul(g.inverse(rep), h), rep))) {
                        equivariant = false;
                        break;
                    }
                if (!equivariant) continue;
                index[{hi, ki, rep}] = static_cast<int>(morphisms.size());
                morphisms.push_back(
                    {objects[hi] + ">" + g.element_name(rep) + ">" + objects[ki], hi, ki});
                reps.push_back(rep);
            }
        }

    std::vector<int> identities(n);
    for (int hi = 0; hi < n; ++hi) identities[hi] = index.at({hi, hi, 0});

    size_t m = morphisms.size();
    std::vector<std::vector<int>> comp(m, std::vector<int>(m, -1));
    for (size_t second = 0; second < m; ++second)
        for (size_t first = 0; first < m; ++first) {
            if (morphisms[first].cod != morphisms[second].dom) continue;
            int hi = morphisms[first].dom;
            int li = morphisms[second].cod;
            int rep = coset_rep(g, g.mul(reps[first], reps[second]), subs[li]);
            comp[second][first] = index.at({hi, li, rep});
        }

    auto cat = std::make_shared<FiniteCategory>(FiniteCategory(
        std::move(objects), std::move(morphisms), std::move(identities), std::move(comp)));
    return {std::move(cat), std::move(subs), std::move(reps)};
}

GSpace::GSpace(LESpace space, FiniteGroup group, std::vector<SimplicialMap> action,
               int top_dim)
    : space_(std::move(space)), group_(std::move(group)), action_(std::move(action)),
      top_dim_(top_dim) {
    if (!space_.enumerable())
        throw UnsupportedError("group actions are supported on enumerable spaces only");
    if (static_cast<int>(action_.size()) != group_.order())
        throw AuditError("group action: one simplicial map per element required");
    for (const auto& a : action_)
        if (!a.dom().same(space_) || !a.cod().same(space_))
            throw AuditError("group action: maps must be endomorphisms of the space");
    if (top_dim_ < 0 || !space_.nondeg(top_dim_ + 1).empty())
        throw AuditError("group action: top_dim does not bound the space");

    std::vector<SimplexKey> probes;
    for (int d = 0; d <= top_dim_; ++d)
        for (const std::string& b : space_.nondeg(d)) probes.push_back({{}, b, d});

    for (const SimplexKey& s : probes) {
        if (act(0, s) != s)
            throw AuditError("group action: unit moves " + encode_key(s));
        for (int i = 0; i <= s.dim() && s.dim() > 0; ++i)
            for (int g = 0; g < group_.order(); ++g)
                if (act(g, space_.face(s, i)) != space_.face(act(g, s), i))
                    throw AuditError("group action: " + group_.element_name(g) +
                                     " is not simplicial at " + encode_key(s));
        for (int a = 0; a < group_.order(); ++a)
            for (int b = 0; b < group_.order(); ++b)
                if (act(a, act(b, s)) != act(group_.mul(a, b), s))
                    throw AuditError("group action: composition law fails at " +
                                     encode_key(s) + " for " + group_.element_name(a) +
                                     "*" + group_.element_name(b));
    }
}

FixedPoints fixed_points(const GSpace& x) {
    OrbitCategory oc = orbit_category(x.group());
    auto op = std::make_shared<FiniteCategory>(oc.cat->opposite());
    int n = oc.cat->num_objects();

    std::vector<LESpace> spaces;
    for (int hi = 0; hi < n; ++hi) {
        std::map<int, std::vector<std::string>> dims;
        std::map<std::string, std::vector<SimplexKey>> faces;
        for (int d = 0; d <= x.top_dim(); ++d)
            for (const std::string& b : x.space().nondeg(d)) {
                SimplexKey s{{}, b, d};
                bool fixed = true;
                for (int h : oc.subgroup_of[hi])
                    if (x.act(h, s) != s) {
                        fixed = false;
                        break;
                    }
                if (!fixed) continue;
                dims[d].push_back(b);
                if (d > 0) {
                    std::vector<SimplexKey> fs;
                    for (int i = 0; i <= d; ++i) fs.push_back(x.space().face(s, i));
                    faces[b] = std::move(fs);
                }
            }
        spaces.push_back(finite_space(x.space().name() + "^" + oc.cat->object_name(hi),
                                      std::move(dims), std::move(faces)));
    }

    std::vector<SimplicialMap> arrows;
    for (int f = 0; f < op->num_morphisms(); ++f) {
        const auto& m = op->morphism(f);  // dom = K object, cod = H object
        int rep = oc.rep_of[f];
        GSpace xx = x;
        arrows.push_back(SimplicialMap(
            spaces[m.dom], spaces[m.cod],
            [xx, rep](const std::string& b, int d) { return xx.act(rep, {{}, b, d}); }));
    }
    SpaceDiagram diagram(op, std::move(spaces), std::move(arrows), x.top_dim());
    return {std::move(oc), std::move(diagram)};
}

}  // namespace effho
