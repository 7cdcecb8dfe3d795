#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "admcov/abelian_group.hpp"
#include "admcov/errors.hpp"

namespace admcov {

struct GraphVertex {
    int weight = 0;
    int genus = 0;
};

struct HalfEdge {
    int root = 0;
    int partner = 0;  // == own index for legs
    std::optional<int> label;
    std::optional<GroupElement> mu;
};

// (V, H, i, r) with optional decorations.
struct HalfEdgeGraph {
    std::vector<GraphVertex> vertices;
    std::vector<HalfEdge> half_edges;

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_half_edges() const { return static_cast<int>(half_edges.size()); }
    bool is_leg(int h) const { return half_edges[h].partner == h; }

    int num_edges() const {
        int n = 0;
        for (int h = 0; h < num_half_edges(); ++h)
            if (half_edges[h].partner > h) ++n;
        return n;
    }
    int num_legs() const {
        int n = 0;
        for (int h = 0; h < num_half_edges(); ++h) n += is_leg(h);
        return n;
    }

    void validate() const {
        for (int h = 0; h < num_half_edges(); ++h) {
            const auto& he = half_edges[h];
            if (he.root < 0 || he.root >= num_vertices()) throw InputError("half-edge root out of range");
            if (he.partner < 0 || he.partner >= num_half_edges()) throw InputError("partner out of range");
            if (half_edges[he.partner].partner != h) throw InputError("involution is not an involution");
        }
    }

    // Connected components via union-find over edges.
    int num_components() const {
        std::vector<int> parent(num_vertices());
        for (int v = 0; v < num_vertices(); ++v) parent[v] = v;
        auto find = [&](int v) {
            while (parent[v] != v) v = parent[v] = parent[parent[v]];
            return v;
        };
        int comps = num_vertices();
        for (int h = 0; h < num_half_edges(); ++h) {
            if (is_leg(h)) continue;
            int a = find(half_edges[h].root), b = find(half_edges[half_edges[h].partner].root);
            if (a != b) parent[a] = b, --comps;
        }
        return comps;
    }

    int first_betti() const { return num_edges() - num_vertices() + num_components(); }
};

// Merge the endpoints of the edge containing half-edge h. Weights add; the
// merged vertex keeps the genus sum (callers that care recompute it).
inline HalfEdgeGraph contract_edge(const HalfEdgeGraph& g, int h) {
    g.validate();
    if (h < 0 || h >= g.num_half_edges()) throw InputError("half-edge out of range");
    if (g.is_leg(h)) throw InputError("cannot contract a leg");
    int h2 = g.half_edges[h].partner;
    int a = g.half_edges[h].root, b = g.half_edges[h2].root;
    HalfEdgeGraph out;
    std::vector<int> vmap(g.num_vertices());
    for (int v = 0, k = 0; v < g.num_vertices(); ++v) {
        if (v == b && b != a) continue;
        vmap[v] = k++;
        out.vertices.push_back(g.vertices[v]);
    }
    if (b != a) {
        vmap[b] = vmap[a];
        out.vertices[vmap[a]].weight += g.vertices[b].weight;
        out.vertices[vmap[a]].genus += g.vertices[b].genus;
    } else {
        out.vertices[vmap[a]].genus += 1;  // contracting a loop
    }
    std::vector<int> hmap(g.num_half_edges(), -1);
    for (int x = 0, k = 0; x < g.num_half_edges(); ++x)
        if (x != h && x != h2) hmap[x] = k++;
    for (int x = 0; x < g.num_half_edges(); ++x) {
        if (hmap[x] < 0) continue;
        HalfEdge he = g.half_edges[x];
        he.root = vmap[he.root];
        he.partner = hmap[he.partner];
        out.half_edges.push_back(he);
    }
    return out;
}

inline nlohmann::json to_json(const HalfEdgeGraph& g, const AbelianGroup* group = nullptr) {
    nlohmann::json vs = nlohmann::json::array(), hs = nlohmann::json::array();
    for (const auto& v : g.vertices) vs.push_back({{"weight", v.weight}, {"genus", v.genus}});
    for (const auto& he : g.half_edges) {
        nlohmann::json j{{"root", he.root}, {"partner", he.partner}};
        if (he.label) j["label"] = *he.label;
        if (he.mu) j["mu"] = he.mu->residues;
        hs.push_back(std::move(j));
    }
    nlohmann::json out{{"vertices", vs}, {"half_edges", hs}};
    if (group) out["group"] = group->to_string();
    return out;
}

}  // namespace admcov
