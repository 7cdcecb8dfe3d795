#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "admcov/abelian_group.hpp"
#include "admcov/errors.hpp"
#include "admcov/half_edge_graph.hpp"
#include "admcov/rational.hpp"
#include "admcov/tree.hpp"

namespace admcov {

// Which automorphisms over id_C count. `local`: every G-equivariant graph
// automorphism of P over the identity (independent translations on the
// pieces of P glued along trivial-monodromy edges). `deck`: translations by
// a single group element only.
enum class LiftSemantics { local, deck };

struct AdmissibleCover {
    Tree target;
    std::vector<GroupElement> edge_mu;
    HalfEdgeGraph target_graph;
    HalfEdgeGraph source;
    std::vector<Subgroup> vertex_subgroup;     // per C vertex
    std::vector<CosetSpace> vertex_cosets;     // per C vertex
    std::vector<CosetSpace> half_edge_cosets;  // per C half-edge
    std::vector<int> vertex_offset;            // P vertex = offset[v] + coset index
    std::vector<int> half_edge_offset;
    std::vector<int> vertex_projection;  // P vertex -> C vertex
    std::vector<int> half_edge_projection;
    std::vector<int> marking;  // i-th labelled leg of the target (label order) -> P leg

    const AbelianGroup& group() const { return target.group; }
    int fiber_size(int v) const { return vertex_cosets[v].size(); }
    int p_vertex(int v, int j) const { return vertex_offset[v] + j; }
    int p_half_edge(int h, int j) const { return half_edge_offset[h] + j; }
    std::vector<int> genus() const {
        std::vector<int> g;
        for (const auto& v : source.vertices) g.push_back(v.genus);
        return g;
    }
    int source_euler_characteristic() const { return source.num_vertices() - source.num_edges(); }

    int act_vertex(int element_index, int x) const {
        int v = vertex_projection[x];
        return p_vertex(v, vertex_cosets[v].act(element_index, x - vertex_offset[v]));
    }
    int act_half_edge(int element_index, int y) const {
        int h = half_edge_projection[y];
        return p_half_edge(h, half_edge_cosets[h].act(element_index, y - half_edge_offset[h]));
    }
};

// The half-edge of edge e rooted at edges[e][0] carries mu[e].
inline std::vector<GroupElement> derive_edge_monodromy(const Tree& t) { return t.edge_monodromy(); }

// Genus of a source vertex over v from the local Riemann-Hurwitz relation.
inline int local_genus(const AbelianGroup& g, int stabilizer_order, const std::vector<GroupElement>& mus) {
    Rational s = 2;
    for (const auto& m : mus) {
        int o = g.element_order(m);
        s -= Rational(o - 1, o);
    }
    Rational val = s * stabilizer_order;  // = 2 - 2 genus
    val.canonicalize();
    Rational gen = (Rational(2) - val) / 2;
    gen.canonicalize();
    if (gen.get_den() != 1 || gen < 0)
        throw InvariantViolation("local Riemann-Hurwitz gives genus " + to_string(gen));
    return static_cast<int>(gen.get_num().get_si());
}

inline AdmissibleCover build_cover(const Tree& t) {
    t.validate();
    AdmissibleCover c;
    c.target = t;
    c.edge_mu = t.edge_monodromy();
    c.target_graph = t.to_graph();
    const auto& G = t.group;
    const auto& C = c.target_graph;
    c.vertex_subgroup = t.vertex_subgroups(c.edge_mu);
    for (int v = 0; v < t.num_vertices(); ++v) {
        c.vertex_cosets.emplace_back(G, c.vertex_subgroup[v]);
        c.vertex_offset.push_back(c.source.num_vertices());
        std::vector<GroupElement> mus;
        for (const auto& he : C.half_edges)
            if (he.root == v) mus.push_back(*he.mu);
        int genus = local_genus(G, c.vertex_subgroup[v].order(), mus);
        for (int j = 0; j < c.vertex_cosets[v].size(); ++j) {
            c.source.vertices.push_back({0, genus});
            c.vertex_projection.push_back(v);
        }
    }
    for (int h = 0; h < C.num_half_edges(); ++h) {
        const auto& he = C.half_edges[h];
        c.half_edge_cosets.emplace_back(G, subgroup_generated(G, {*he.mu}));
        c.half_edge_offset.push_back(c.source.num_half_edges());
        const auto& cs = c.half_edge_cosets.back();
        for (int j = 0; j < cs.size(); ++j) {
            HalfEdge ph;
            int v = he.root;
            ph.root = c.p_vertex(v, c.vertex_cosets[v].coset_of_index(cs.representative_index(j)));
            ph.partner = -1;
            ph.label = he.label;
            ph.mu = he.mu;
            c.source.half_edges.push_back(ph);
            c.half_edge_projection.push_back(h);
        }
    }
    // glue: (h, j) <-> (i(h), j); both halves share the coset space of <mu>
    for (int h = 0; h < C.num_half_edges(); ++h) {
        int h2 = C.half_edges[h].partner;
        require(c.half_edge_cosets[h].size() == c.half_edge_cosets[h2].size(), "edge halves with different fibers");
        for (int j = 0; j < c.half_edge_cosets[h].size(); ++j)
            c.source.half_edges[c.p_half_edge(h, j)].partner = c.p_half_edge(h2, j);
    }
    c.source.validate();
    for (int y = 0; y < c.source.num_half_edges(); ++y)
        require(c.source.half_edges[y].partner != y || C.is_leg(c.half_edge_projection[y]) ||
                    c.source.half_edges[y].root != c.source.half_edges[c.source.half_edges[y].partner].root,
                "self-loop in cover over a tree");
    // marking lifts for labelled legs, in label order
    std::vector<std::pair<int, int>> labelled;  // (label, C half-edge)
    for (int h = 0; h < C.num_half_edges(); ++h)
        if (C.half_edges[h].label) labelled.push_back({*C.half_edges[h].label, h});
    std::sort(labelled.begin(), labelled.end());
    for (auto [label, h] : labelled) {
        int v = C.half_edges[h].root;
        int lift = 0;
        for (const auto& l : t.vertices[v].legs)
            if (l.label == label) lift = l.lift;
        const auto& cs = c.half_edge_cosets[h];
        int chosen = -1;
        for (int j = 0; j < cs.size() && chosen < 0; ++j)
            if (c.vertex_cosets[v].coset_of_index(cs.representative_index(j)) == lift) chosen = j;
        require(chosen >= 0, "leg lift outside the vertex fiber");
        c.marking.push_back(c.p_half_edge(h, chosen));
    }
    return c;
}

// ---- automorphisms --------------------------------------------------------

// An automorphism over id_C: a translation per C vertex and per C edge,
// stored as coset indices (edge coset spaces are those of the first half).
struct FiberTranslation {
    std::vector<int> vertex;
    std::vector<int> edge;
    friend auto operator<=>(const FiberTranslation&, const FiberTranslation&) = default;
};

struct CoverAutomorphism {
    TreeAutomorphism psi;
    FiberTranslation translation;
    std::vector<int> vmap;  // on V(P)
    std::vector<int> hmap;  // on H(P); legs are carried along canonically
};

namespace detail {

// BFS spanning structure of the target rooted at vertex 0.
struct Spanning {
    std::vector<int> order;   // vertices in BFS order
    std::vector<int> parent;  // -1 at root
    std::vector<int> pedge;
};

inline Spanning spanning(const Tree& t) {
    Spanning s;
    auto adj = t.adjacency();
    s.parent.assign(t.num_vertices(), -2);
    s.pedge.assign(t.num_vertices(), -1);
    s.order.push_back(0);
    s.parent[0] = -1;
    for (std::size_t i = 0; i < s.order.size(); ++i) {
        int v = s.order[i];
        for (auto [e, w] : adj[v])
            if (s.parent[w] == -2) s.parent[w] = v, s.pedge[w] = e, s.order.push_back(w);
    }
    return s;
}

}  // namespace detail

// All translations over id_C under the given semantics.
inline std::vector<FiberTranslation> fiber_translations(const AdmissibleCover& c, LiftSemantics sem) {
    const auto& t = c.target;
    const auto& G = t.group;
    std::vector<FiberTranslation> out;
    if (sem == LiftSemantics::deck) {
        std::set<FiberTranslation> seen;
        for (int gi = 0; gi < G.order(); ++gi) {
            FiberTranslation f;
            for (int v = 0; v < t.num_vertices(); ++v) f.vertex.push_back(c.vertex_cosets[v].coset_of_index(gi));
            for (int e = 0; e < t.num_edges(); ++e) f.edge.push_back(c.half_edge_cosets[2 * e].coset_of_index(gi));
            if (seen.insert(f).second) out.push_back(f);
        }
        return out;
    }
    auto sp = detail::spanning(t);
    FiberTranslation cur;
    cur.vertex.assign(t.num_vertices(), 0);
    cur.edge.assign(t.num_edges(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == sp.order.size()) {
            out.push_back(cur);
            return;
        }
        int v = sp.order[i];
        if (i == 0) {
            for (int j = 0; j < c.vertex_cosets[v].size(); ++j) {
                cur.vertex[v] = j;
                rec(i + 1);
            }
            return;
        }
        int p = sp.parent[v], e = sp.pedge[v];
        const auto& ecs = c.half_edge_cosets[2 * e];
        for (int j = 0; j < ecs.size(); ++j) {
            int rep = ecs.representative_index(j);
            if (c.vertex_cosets[p].coset_of_index(rep) != cur.vertex[p]) continue;
            cur.edge[e] = j;
            cur.vertex[v] = c.vertex_cosets[v].coset_of_index(rep);
            rec(i + 1);
        }
    };
    rec(0);
    return out;
}

// |K| for the local semantics without enumerating it.
inline long local_translation_count(const AdmissibleCover& c) {
    const auto& t = c.target;
    auto sp = detail::spanning(t);
    long n = c.vertex_cosets[0].size();
    for (std::size_t i = 1; i < sp.order.size(); ++i) {
        int v = sp.order[i];
        n *= c.vertex_subgroup[sp.parent[v]].order() * c.half_edge_cosets[2 * sp.pedge[v]].size() / t.group.order();
    }
    return n;
}

namespace detail {

// psi on C half-edges (edge halves by endpoint, legs by label or position).
inline std::vector<int> half_edge_map(const AdmissibleCover& c, const TreeAutomorphism& psi) {
    const auto& t = c.target;
    const auto& C = c.target_graph;
    std::vector<int> hm(C.num_half_edges(), -1);
    for (int e = 0; e < t.num_edges(); ++e) {
        int e2 = psi.emap[e];
        bool same = psi.vmap[t.edges[e][0]] == t.edges[e2][0];
        hm[2 * e] = same ? 2 * e2 : 2 * e2 + 1;
        hm[2 * e + 1] = same ? 2 * e2 + 1 : 2 * e2;
    }
    // legs: per vertex, labelled legs then unlabelled legs, in storage order
    std::vector<std::vector<int>> legs_at(t.num_vertices());
    std::vector<std::map<int, int>> label_at(t.num_vertices());
    for (int h = 2 * t.num_edges(); h < C.num_half_edges(); ++h) {
        int v = C.half_edges[h].root;
        if (C.half_edges[h].label)
            label_at[v][*C.half_edges[h].label] = h;
        else
            legs_at[v].push_back(h);
    }
    for (int v = 0; v < t.num_vertices(); ++v) {
        int w = psi.vmap[v];
        for (auto [label, h] : label_at[v]) hm[h] = label_at[w].at(label);
        for (std::size_t k = 0; k < legs_at[v].size(); ++k) hm[legs_at[v][k]] = legs_at[w][k];
    }
    return hm;
}

}  // namespace detail

inline CoverAutomorphism compose_automorphism(const AdmissibleCover& c, const TreeAutomorphism& psi,
                                             const std::vector<int>& chm, const FiberTranslation& f) {
    const auto& t = c.target;
    const auto& C = c.target_graph;
    CoverAutomorphism a;
    a.psi = psi;
    a.translation = f;
    a.vmap.resize(c.source.num_vertices());
    a.hmap.resize(c.source.num_half_edges());
    for (int x = 0; x < c.source.num_vertices(); ++x) {
        int v = c.vertex_projection[x];
        int w = psi.vmap[v];
        int j = x - c.vertex_offset[v];
        int shift = c.vertex_cosets[w].representative_index(f.vertex[w]);
        a.vmap[x] = c.p_vertex(w, c.vertex_cosets[w].act(shift, j));
    }
    for (int y = 0; y < c.source.num_half_edges(); ++y) {
        int h = c.half_edge_projection[y];
        int h2 = chm[h];
        int j = y - c.half_edge_offset[h];
        int shift;
        if (h2 < 2 * t.num_edges()) {
            int e2 = h2 / 2;
            shift = c.half_edge_cosets[2 * e2].representative_index(f.edge[e2]);
        } else {
            int w = C.half_edges[h2].root;
            shift = c.vertex_cosets[w].representative_index(f.vertex[w]);
        }
        a.hmap[y] = c.p_half_edge(h2, c.half_edge_cosets[h2].act(shift, j));
    }
    return a;
}

inline std::vector<CoverAutomorphism> cover_automorphisms(const AdmissibleCover& c,
                                                          LiftSemantics sem = LiftSemantics::local) {
    auto psis = tree_automorphisms(c.target);
    auto trans = fiber_translations(c, sem);
    std::vector<CoverAutomorphism> out;
    out.reserve(psis.size() * trans.size());
    for (const auto& psi : psis) {
        auto chm = detail::half_edge_map(c, psi);
        for (const auto& f : trans) out.push_back(compose_automorphism(c, psi, chm, f));
    }
    return out;
}

// ---- orbit exponents --------------------------------------------------------

using OrbitExponentMap = std::map<int, long>;  // k -> f_k, zero entries dropped

// Cellwise orbit-length Euler characteristics for tau acting on P.
inline OrbitExponentMap orbit_exponents(const HalfEdgeGraph& P, const std::vector<int>& vmap,
                                        const std::vector<int>& hmap) {
    std::map<int, long> chi;  // k -> chi_c(X_k)
    int nv = P.num_vertices();
    std::vector<char> seen(nv, 0);
    for (int x = 0; x < nv; ++x) {
        if (seen[x]) continue;
        int k = 0;
        for (int y = x; !seen[y]; y = vmap[y]) seen[y] = 1, ++k;
        chi[k] += k;
    }
    int nh = P.num_half_edges();
    std::vector<char> eseen(nh, 0);
    for (int h = 0; h < nh; ++h) {
        if (P.is_leg(h) || eseen[h]) continue;
        int partner = P.half_edges[h].partner;
        int m = 0, y = h;
        bool reversed = false;
        while (true) {
            eseen[y] = eseen[P.half_edges[y].partner] = 1;
            y = hmap[y];
            ++m;
            if (y == h) break;
            if (y == partner) {
                reversed = true;
                break;
            }
        }
        // follow the remaining half-turn so the whole orbit is marked
        if (reversed) {
            chi[m] += m;
            chi[2 * m] -= 2 * m;
        } else {
            chi[m] -= m;
        }
    }
    OrbitExponentMap f;
    for (auto [k, x] : chi) {
        if (x % k != 0) throw InvariantViolation("non-integral orbit exponent");
        if (x != 0) f[k] = x / k;
    }
    return f;
}

inline OrbitExponentMap orbit_exponents(const AdmissibleCover& c, const CoverAutomorphism& tau) {
    return orbit_exponents(c.source, tau.vmap, tau.hmap);
}

// Independent check: subdivide every edge twice and count cell orbits.
inline OrbitExponentMap orbit_exponents_subdivision_oracle(const HalfEdgeGraph& P, const std::vector<int>& vmap,
                                                           const std::vector<int>& hmap) {
    // Cells: original vertices; per edge a midpoint; per edge half-edge h a
    // quarter point and two open segments (outer: root..quarter, inner:
    // quarter..midpoint). Each cell is a (kind, id) pair.
    int nv = P.num_vertices(), nh = P.num_half_edges();
    std::vector<int> edge_id(nh, -1);
    int ne = 0;
    for (int h = 0; h < nh; ++h)
        if (!P.is_leg(h) && edge_id[h] < 0) edge_id[h] = edge_id[P.half_edges[h].partner] = ne++;
    std::vector<int> eimg(ne);
    for (int h = 0; h < nh; ++h)
        if (!P.is_leg(h)) eimg[edge_id[h]] = edge_id[hmap[h]];
    // cell index layout
    int base_mid = nv, base_quarter = nv + ne, base_outer = base_quarter + nh, base_inner = base_outer + nh;
    int ncells = base_inner + nh;
    std::vector<int> img(ncells, -1), dim(ncells, 0);
    for (int x = 0; x < nv; ++x) img[x] = vmap[x];
    for (int e = 0; e < ne; ++e) img[base_mid + e] = base_mid + eimg[e];
    for (int h = 0; h < nh; ++h) {
        if (P.is_leg(h)) continue;
        img[base_quarter + h] = base_quarter + hmap[h];
        img[base_outer + h] = base_outer + hmap[h];
        img[base_inner + h] = base_inner + hmap[h];
        dim[base_outer + h] = dim[base_inner + h] = 1;
    }
    std::map<int, long> chi;
    for (int c = 0; c < ncells; ++c) {
        if (img[c] < 0) continue;
        int k = 1;
        for (int y = img[c]; y != c; y = img[y]) ++k;
        chi[k] += dim[c] ? -1 : 1;
    }
    OrbitExponentMap f;
    for (auto [k, x] : chi) {
        if (x % k != 0) throw InvariantViolation("non-integral orbit exponent (oracle)");
        if (x != 0) f[k] = x / k;
    }
    return f;
}

inline OrbitExponentMap orbit_exponents_subdivision_oracle(const AdmissibleCover& c, const CoverAutomorphism& tau) {
    return orbit_exponents_subdivision_oracle(c.source, tau.vmap, tau.hmap);
}

// ---- marking lifts -------------------------------------------------------------

// Generators of the translation group, restricted to their action on the
// fibers over the given vertices: each entry lists (vertex slot, element index).
namespace detail {

inline std::vector<std::vector<int>> lift_generators(const Tree& t, const std::vector<Subgroup>& subs,
                                                    const std::vector<int>& slots_vertex, LiftSemantics sem) {
    const auto& G = t.group;
    std::vector<std::vector<int>> gens;  // per generator: element index applied at each slot
    auto sp = spanning(t);
    // global translations by a generating set of G (unit vectors)
    for (int j = 0; j < G.rank(); ++j) {
        std::vector<int> res(G.rank(), 0);
        res[j] = 1;
        int gi = G.index_of(G.element(res));
        gens.push_back(std::vector<int>(slots_vertex.size(), gi));
    }
    if (sem == LiftSemantics::deck) return gens;
    // subtree twists by elements of the parent's stabilizer
    std::vector<std::vector<int>> kids(t.num_vertices());
    for (int v : sp.order)
        if (sp.parent[v] >= 0) kids[sp.parent[v]].push_back(v);
    for (int v : sp.order) {
        if (sp.parent[v] < 0) continue;
        std::vector<bool> inside(t.num_vertices(), false);
        std::vector<int> st{v};
        while (!st.empty()) {
            int x = st.back();
            st.pop_back();
            inside[x] = true;
            for (int y : kids[x]) st.push_back(y);
        }
        for (int s : subs[sp.parent[v]].element_indices()) {
            if (s == 0) continue;
            std::vector<int> g(slots_vertex.size(), 0);
            bool moves = false;
            for (std::size_t i = 0; i < slots_vertex.size(); ++i)
                if (inside[slots_vertex[i]]) g[i] = s, moves = true;
            if (moves) gens.push_back(std::move(g));
        }
    }
    return gens;
}

}  // namespace detail

struct LiftOrbit {
    std::vector<int> normal_form;  // minimal lift vector in the orbit
    long orbit_size = 0;
};

// Orbit of the current lifts of the labelled legs (in label order) under
// fiber translations; returns its least member.
inline LiftOrbit lift_orbit(const Tree& t, const std::vector<Subgroup>& subs, LiftSemantics sem = LiftSemantics::local) {
    std::vector<std::pair<int, std::pair<int, int>>> legs;  // label -> (vertex, leg index)
    for (int v = 0; v < t.num_vertices(); ++v)
        for (std::size_t i = 0; i < t.vertices[v].legs.size(); ++i)
            legs.push_back({t.vertices[v].legs[i].label, {v, static_cast<int>(i)}});
    std::sort(legs.begin(), legs.end());
    std::vector<int> slot_vertex, start;
    std::vector<CosetSpace> spaces;
    for (auto& [label, loc] : legs) {
        slot_vertex.push_back(loc.first);
        start.push_back(t.vertices[loc.first].legs[loc.second].lift);
    }
    std::map<int, CosetSpace> cs_cache;
    for (int v : slot_vertex)
        if (!cs_cache.count(v)) cs_cache.emplace(v, CosetSpace(t.group, subs[v]));
    auto gens = detail::lift_generators(t, subs, slot_vertex, sem);
    std::set<std::vector<int>> orbit{start};
    std::vector<std::vector<int>> frontier{start};
    while (!frontier.empty()) {
        auto y = std::move(frontier.back());
        frontier.pop_back();
        for (const auto& g : gens) {
            auto z = y;
            for (std::size_t i = 0; i < z.size(); ++i) z[i] = cs_cache.at(slot_vertex[i]).act(g[i], z[i]);
            if (orbit.insert(z).second) frontier.push_back(std::move(z));
        }
    }
    return {*orbit.begin(), static_cast<long>(orbit.size())};
}

// Replace the lifts of t by the normal form of their orbit.
inline void normalize_lifts(Tree& t, const std::vector<Subgroup>& subs, LiftSemantics sem = LiftSemantics::local) {
    auto orb = lift_orbit(t, subs, sem);
    std::vector<std::pair<int, Leg*>> legs;
    for (auto& v : t.vertices)
        for (auto& l : v.legs) legs.push_back({l.label, &l});
    std::sort(legs.begin(), legs.end(), [](auto& a, auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < legs.size(); ++i) legs[i].second->lift = orb.normal_form[i];
}

// All inequivalent lifts of the labelled legs, each as a cover with m_P set.
inline std::vector<AdmissibleCover> lift_markings(const AdmissibleCover& c, LiftSemantics sem = LiftSemantics::local) {
    Tree t = c.target;
    std::vector<Leg*> legs;
    std::vector<int> sizes;
    for (int v = 0; v < t.num_vertices(); ++v)
        for (auto& l : t.vertices[v].legs) legs.push_back(&l), sizes.push_back(c.vertex_cosets[v].size());
    std::set<std::vector<int>> forms;
    std::vector<AdmissibleCover> out;
    std::vector<int> y(legs.size(), 0);
    while (true) {
        for (std::size_t i = 0; i < legs.size(); ++i) legs[i]->lift = y[i];
        Tree u = t;
        normalize_lifts(u, c.vertex_subgroup, sem);
        std::vector<int> key;
        for (auto& v : u.vertices)
            for (auto& l : v.legs) key.push_back(l.lift);
        if (forms.insert(key).second) out.push_back(build_cover(u));
        std::size_t i = 0;
        while (i < y.size() && ++y[i] == sizes[i]) y[i++] = 0;
        if (i == y.size()) break;
    }
    return out;
}

inline nlohmann::json cover_to_json(const AdmissibleCover& c) {
    auto j = to_json(c.source, &c.target.group);
    j["projection"] = {{"vertices", c.vertex_projection}, {"half_edges", c.half_edge_projection}};
    j["genus"] = c.genus();
    j["marking"] = c.marking;
    j["target"] = tree_to_json(c.target);
    return j;
}

}  // namespace admcov
