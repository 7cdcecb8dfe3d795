#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "admcov/abelian_group.hpp"
#include "admcov/errors.hpp"
#include "admcov/half_edge_graph.hpp"

namespace admcov {

// A labelled leg. `lift` is only meaningful once the tree is the target of a
// cover: it is the index of the source vertex (in G/G_v) carrying the lifted leg.
struct Leg {
    int label = 0;
    GroupElement mu;
    int lift = 0;

    friend auto operator<=>(const Leg&, const Leg&) = default;
    friend bool operator==(const Leg&, const Leg&) = default;
};

struct TreeVertex {
    int weight = 0;  // unlabelled legs, each carrying Tree::branch
    std::vector<Leg> legs;
};

// Stable decorated tree. Covers both the weighted (hyperelliptic) trees and
// the leg-labelled monodromy trees.
struct Tree {
    AbelianGroup group;
    GroupElement branch;
    std::vector<TreeVertex> vertices;
    std::vector<std::array<int, 2>> edges;

    static Tree hyperelliptic() {
        Tree t;
        t.group = AbelianGroup::cyclic(2);
        t.branch = t.group.element({1});
        return t;
    }

    static Tree over(const AbelianGroup& g) {
        Tree t;
        t.group = g;
        t.branch = g.zero();
        return t;
    }

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }

    int add_vertex(int weight = 0) {
        vertices.push_back({weight, {}});
        return num_vertices() - 1;
    }
    int add_edge(int a, int b) {
        edges.push_back({a, b});
        return num_edges() - 1;
    }
    void add_leg(int v, int label, GroupElement mu) { vertices[v].legs.push_back({label, std::move(mu), 0}); }

    int total_weight() const {
        int w = 0;
        for (const auto& v : vertices) w += v.weight;
        return w;
    }
    int num_labelled_legs() const {
        int n = 0;
        for (const auto& v : vertices) n += static_cast<int>(v.legs.size());
        return n;
    }

    // adjacency[v] = list of (edge index, neighbour)
    std::vector<std::vector<std::pair<int, int>>> adjacency() const {
        std::vector<std::vector<std::pair<int, int>>> adj(num_vertices());
        for (int e = 0; e < num_edges(); ++e) {
            adj[edges[e][0]].push_back({e, edges[e][1]});
            adj[edges[e][1]].push_back({e, edges[e][0]});
        }
        return adj;
    }

    std::vector<int> degrees() const {
        std::vector<int> d(num_vertices(), 0);
        for (const auto& e : edges) ++d[e[0]], ++d[e[1]];
        return d;
    }

    int valence(int v, const std::vector<int>& deg) const {
        return deg[v] + vertices[v].weight + static_cast<int>(vertices[v].legs.size());
    }

    GroupElement leg_sum(int v) const {
        GroupElement s = group.scale(branch, vertices[v].weight);
        for (const auto& l : vertices[v].legs) s = group.add(s, l.mu);
        return s;
    }

    bool is_connected_tree() const {
        if (vertices.empty()) return false;
        if (num_edges() != num_vertices() - 1) return false;
        HalfEdgeGraph g;
        g.vertices.resize(num_vertices());
        for (const auto& e : edges) {
            int h = g.num_half_edges();
            if (e[0] < 0 || e[0] >= num_vertices() || e[1] < 0 || e[1] >= num_vertices()) return false;
            g.half_edges.push_back({e[0], h + 1, {}, {}});
            g.half_edges.push_back({e[1], h, {}, {}});
        }
        return g.num_components() == 1;
    }

    bool is_stable() const {
        auto deg = degrees();
        for (int v = 0; v < num_vertices(); ++v)
            if (valence(v, deg) < 3) return false;
        return true;
    }

    void validate() const {
        if (!is_connected_tree()) throw InputError("not a connected tree");
        if (!is_stable()) throw InputError("tree is not stable");
        std::vector<int> labels;
        for (const auto& v : vertices) {
            if (v.weight < 0) throw InputError("negative weight");
            for (const auto& l : v.legs) {
                if (!group.contains(l.mu)) throw InputError("leg monodromy is not a group element");
                if (l.label < 0) throw InputError("leg labels must be nonnegative");
                labels.push_back(l.label);
            }
        }
        std::sort(labels.begin(), labels.end());
        if (std::adjacent_find(labels.begin(), labels.end()) != labels.end())
            throw InputError("duplicate leg label");
    }

    // mu[e] = monodromy of the half-edge of e rooted at edges[e][0]; the other
    // half carries its negative. Equals the leg total on the far side of e.
    std::vector<GroupElement> edge_monodromy() const {
        std::vector<GroupElement> mu(num_edges());
        if (vertices.empty()) return mu;
        auto adj = adjacency();
        std::vector<GroupElement> sub(num_vertices(), group.zero());
        std::vector<int> order, parent(num_vertices(), -1), pedge(num_vertices(), -1);
        order.push_back(0);
        parent[0] = 0;
        for (std::size_t i = 0; i < order.size(); ++i) {
            int v = order[i];
            for (auto [e, w] : adj[v])
                if (parent[w] < 0) parent[w] = v, pedge[w] = e, order.push_back(w);
        }
        for (int i = num_vertices() - 1; i >= 0; --i) {
            int v = order[i];
            sub[v] = group.add(sub[v], leg_sum(v));
            if (i == 0) break;
            int p = parent[v];
            sub[p] = group.add(sub[p], sub[v]);
            int e = pedge[v];
            mu[e] = edges[e][0] == p ? sub[v] : group.neg(sub[v]);
        }
        if (!vertices.empty() && sub[0] != group.zero())
            throw InvariantViolation("leg monodromies do not sum to zero");
        return mu;
    }

    // G_v = <mu(h) : h at v>
    std::vector<Subgroup> vertex_subgroups(const std::vector<GroupElement>& emu) const {
        std::vector<std::vector<GroupElement>> gens(num_vertices());
        for (int v = 0; v < num_vertices(); ++v) {
            if (vertices[v].weight > 0) gens[v].push_back(branch);
            for (const auto& l : vertices[v].legs) gens[v].push_back(l.mu);
        }
        for (int e = 0; e < num_edges(); ++e) {
            gens[edges[e][0]].push_back(emu[e]);
            gens[edges[e][1]].push_back(emu[e]);
        }
        std::vector<Subgroup> out;
        for (auto& g : gens) out.push_back(subgroup_generated(group, g));
        return out;
    }

    std::vector<Subgroup> vertex_subgroups() const { return vertex_subgroups(edge_monodromy()); }

    // Explicit half-edge graph: half-edges 2e, 2e+1 for edge e (rooted at
    // edges[e][0], edges[e][1]), then per vertex its labelled legs followed by
    // its unlabelled legs.
    HalfEdgeGraph to_graph() const {
        auto emu = edge_monodromy();
        HalfEdgeGraph g;
        for (const auto& v : vertices) g.vertices.push_back({v.weight, 0});
        for (int e = 0; e < num_edges(); ++e) {
            g.half_edges.push_back({edges[e][0], 2 * e + 1, {}, emu[e]});
            g.half_edges.push_back({edges[e][1], 2 * e, {}, group.neg(emu[e])});
        }
        for (int v = 0; v < num_vertices(); ++v) {
            for (const auto& l : vertices[v].legs) {
                int h = g.num_half_edges();
                g.half_edges.push_back({v, h, l.label, l.mu});
            }
            for (int k = 0; k < vertices[v].weight; ++k) {
                int h = g.num_half_edges();
                g.half_edges.push_back({v, h, {}, branch});
            }
        }
        return g;
    }

    // Contract edge e. The merged vertex takes the smaller index; remaining
    // edges keep their relative order. Leg lifts are pushed to the merged fiber.
    Tree contract(int e) const {
        if (e < 0 || e >= num_edges()) throw InputError("edge index out of range");
        auto emu = edge_monodromy();
        auto subs_before = vertex_subgroups(emu);
        int a = edges[e][0], b = edges[e][1];
        int keep = std::min(a, b), gone = std::max(a, b);
        Tree out;
        out.group = group;
        out.branch = branch;
        std::vector<int> vmap(num_vertices());
        for (int v = 0, k = 0; v < num_vertices(); ++v) {
            if (v == gone) continue;
            vmap[v] = k++;
            out.vertices.push_back(vertices[v]);
        }
        vmap[gone] = vmap[keep];
        auto& merged = out.vertices[vmap[keep]];
        merged.weight += vertices[gone].weight;
        for (const auto& l : vertices[gone].legs) merged.legs.push_back(l);
        for (int f = 0; f < num_edges(); ++f)
            if (f != e) out.edges.push_back({vmap[edges[f][0]], vmap[edges[f][1]]});

        // Remap lifts: representative of the old coset, reduced in the new space.
        std::vector<GroupElement> out_mu;
        out_mu.reserve(out.num_edges());
        for (int f = 0; f < num_edges(); ++f)
            if (f != e) out_mu.push_back(emu[f]);
        auto subs_after = out.vertex_subgroups(out_mu);
        CosetSpace cs_new(group, subs_after[vmap[keep]]);
        CosetSpace cs_a(group, subs_before[keep]), cs_b(group, subs_before[gone]);
        std::size_t n_keep = vertices[keep].legs.size();
        for (std::size_t i = 0; i < merged.legs.size(); ++i) {
            const CosetSpace& old = i < n_keep ? cs_a : cs_b;
            merged.legs[i].lift = cs_new.coset_of_index(old.representative_index(merged.legs[i].lift));
        }
        return out;
    }

    // Reorder storage: new vertex i is old vertex vperm[i]; edges listed in
    // the given order with the given orientation.
    Tree relabel(const std::vector<int>& vperm, const std::vector<int>& eperm) const;
};

// ---- canonical codes ------------------------------------------------------

namespace detail {

inline void put_uint(std::string& out, unsigned long x) {
    while (x >= 0x80) {
        out.push_back(static_cast<char>((x & 0x7f) | 0x80));
        x >>= 7;
    }
    out.push_back(static_cast<char>(x));
}

inline unsigned long get_uint(const std::string& s, std::size_t& pos) {
    unsigned long x = 0;
    int shift = 0;
    while (true) {
        if (pos >= s.size()) throw InputError("truncated canonical code");
        unsigned char c = static_cast<unsigned char>(s[pos++]);
        x |= static_cast<unsigned long>(c & 0x7f) << shift;
        if (!(c & 0x80)) break;
        shift += 7;
        if (shift > 56) throw InputError("malformed canonical code");
    }
    return x;
}

inline void put_element(std::string& out, const GroupElement& x) {
    for (int r : x.residues) put_uint(out, static_cast<unsigned long>(r));
}

}  // namespace detail

struct CanonicalForm {
    std::string code;              // raw bytes
    std::vector<int> vertex_order;  // canonical position -> vertex
    std::vector<int> edge_order;    // canonical position -> edge
    std::vector<int> parent;        // rooted structure used for the code (-1 at roots)
    std::vector<int> parent_edge;
    std::vector<std::vector<int>> children;  // sorted by subtree code
    std::vector<std::string> subtree_code;
    std::vector<int> roots;  // 1 (central vertex) or 2 (central edge)
    int central_edge = -1;
    bool halves_equal = false;
};

inline std::vector<int> tree_centers(const Tree& t) {
    int n = t.num_vertices();
    if (n <= 2) {
        std::vector<int> c;
        for (int v = 0; v < n; ++v) c.push_back(v);
        return c;
    }
    auto deg = t.degrees();
    auto adj = t.adjacency();
    std::vector<int> layer;
    for (int v = 0; v < n; ++v)
        if (deg[v] <= 1) layer.push_back(v);
    int remaining = n;
    while (remaining > 2) {
        remaining -= static_cast<int>(layer.size());
        std::vector<int> next;
        for (int v : layer)
            for (auto [e, w] : adj[v])
                if (--deg[w] == 1) next.push_back(w);
        layer = std::move(next);
    }
    std::sort(layer.begin(), layer.end());
    return layer;
}

inline CanonicalForm canonical_form(const Tree& t) {
    int n = t.num_vertices();
    if (n == 0) throw InputError("empty tree");
    if (!t.is_connected_tree()) throw InputError("canonical_code needs a connected tree");
    auto emu = t.edge_monodromy();
    auto adj = t.adjacency();
    CanonicalForm cf;
    cf.parent.assign(n, -1);
    cf.parent_edge.assign(n, -1);
    cf.children.assign(n, {});
    cf.subtree_code.assign(n, {});
    std::vector<std::string> header(n);
    for (int v = 0; v < n; ++v) {
        auto legs = t.vertices[v].legs;
        std::sort(legs.begin(), legs.end());
        std::string& h = header[v];
        detail::put_uint(h, static_cast<unsigned long>(t.vertices[v].weight));
        detail::put_uint(h, legs.size());
        for (const auto& l : legs) {
            detail::put_uint(h, static_cast<unsigned long>(l.label));
            detail::put_element(h, l.mu);
            detail::put_uint(h, static_cast<unsigned long>(l.lift));
        }
    }
    std::vector<int> centers = tree_centers(t);
    if (centers.size() == 2) {
        for (auto [e, w] : adj[centers[0]])
            if (w == centers[1]) cf.central_edge = e;
        cf.parent[centers[0]] = centers[1];
        cf.parent[centers[1]] = centers[0];
        cf.parent_edge[centers[0]] = cf.parent_edge[centers[1]] = cf.central_edge;
    }
    // BFS from the centers to fix parents
    std::vector<int> order(centers.begin(), centers.end());
    std::vector<bool> seen(n, false);
    for (int c : centers) seen[c] = true;
    for (std::size_t i = 0; i < order.size(); ++i) {
        int v = order[i];
        for (auto [e, w] : adj[v])
            if (!seen[w]) {
                seen[w] = true;
                cf.parent[w] = v;
                cf.parent_edge[w] = e;
                cf.children[v].push_back(w);
                order.push_back(w);
            }
    }
    // bottom-up codes
    for (int i = n - 1; i >= 0; --i) {
        int v = order[i];
        auto& ch = cf.children[v];
        std::sort(ch.begin(), ch.end(), [&](int a, int b) { return cf.subtree_code[a] < cf.subtree_code[b]; });
        std::string c = header[v];
        if (cf.parent_edge[v] >= 0) {
            int e = cf.parent_edge[v];
            detail::put_element(c, t.edges[e][0] == v ? emu[e] : t.group.neg(emu[e]));
        }
        detail::put_uint(c, ch.size());
        for (int w : ch) c += cf.subtree_code[w];
        cf.subtree_code[v] = std::move(c);
    }
    if (centers.size() == 1) {
        cf.roots = {centers[0]};
        cf.code = "C" + cf.subtree_code[centers[0]];
    } else {
        int a = centers[0], b = centers[1];
        if (cf.subtree_code[b] < cf.subtree_code[a]) std::swap(a, b);
        cf.roots = {a, b};
        cf.halves_equal = cf.subtree_code[a] == cf.subtree_code[b];
        cf.code = "B" + cf.subtree_code[a] + cf.subtree_code[b];
    }
    // canonical vertex order: preorder, roots in order
    std::vector<int> pos(n, -1);
    for (int r : cf.roots) {
        std::vector<int> st{r};
        while (!st.empty()) {
            int v = st.back();
            st.pop_back();
            pos[v] = static_cast<int>(cf.vertex_order.size());
            cf.vertex_order.push_back(v);
            for (auto it = cf.children[v].rbegin(); it != cf.children[v].rend(); ++it) st.push_back(*it);
        }
    }
    // canonical edge order: central edge first, then by position of the child end
    std::vector<std::pair<int, int>> keyed;
    for (int e = 0; e < t.num_edges(); ++e) {
        int key;
        if (e == cf.central_edge) {
            key = -1;
        } else {
            int a = t.edges[e][0], b = t.edges[e][1];
            key = cf.parent[b] == a ? pos[b] : pos[a];
        }
        keyed.push_back({key, e});
    }
    std::sort(keyed.begin(), keyed.end());
    for (auto [k, e] : keyed) cf.edge_order.push_back(e);
    return cf;
}

inline std::string canonical_code(const Tree& t) { return canonical_form(t).code; }

inline std::string to_hex(const std::string& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(bytes.size() * 2);
    for (unsigned char c : bytes) {
        s.push_back(digits[c >> 4]);
        s.push_back(digits[c & 15]);
    }
    return s;
}

inline std::string from_hex(const std::string& hex) {
    if (hex.size() % 2) throw InputError("odd-length hex string");
    auto val = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        throw InputError("bad hex digit");
    };
    std::string out;
    for (std::size_t i = 0; i < hex.size(); i += 2) out.push_back(static_cast<char>(val(hex[i]) * 16 + val(hex[i + 1])));
    return out;
}

inline Tree Tree::relabel(const std::vector<int>& vperm, const std::vector<int>& eperm) const {
    std::vector<int> inv(num_vertices());
    for (int i = 0; i < num_vertices(); ++i) inv[vperm[i]] = i;
    Tree out;
    out.group = group;
    out.branch = branch;
    for (int i = 0; i < num_vertices(); ++i) out.vertices.push_back(vertices[vperm[i]]);
    for (int e : eperm) {
        int a = inv[edges[e][0]], b = inv[edges[e][1]];
        out.edges.push_back({std::min(a, b), std::max(a, b)});
    }
    return out;
}

// The tree stored in canonical vertex and edge order.
inline Tree canonical_tree(const Tree& t) {
    auto cf = canonical_form(t);
    return t.relabel(cf.vertex_order, cf.edge_order);
}

// Rebuild a tree from its canonical code. The group and branch element must
// be supplied since they are not part of the code.
inline Tree decode_tree(const std::string& code, const AbelianGroup& group, const GroupElement& branch) {
    Tree t;
    t.group = group;
    t.branch = branch;
    std::size_t pos = 0;
    int r = group.rank();
    std::function<int(bool)> read_vertex = [&](bool has_parent) -> int {
        int v = t.add_vertex(static_cast<int>(detail::get_uint(code, pos)));
        auto nlegs = detail::get_uint(code, pos);
        for (unsigned long i = 0; i < nlegs; ++i) {
            Leg l;
            l.label = static_cast<int>(detail::get_uint(code, pos));
            std::vector<int> res(r);
            for (int j = 0; j < r; ++j) res[j] = static_cast<int>(detail::get_uint(code, pos));
            l.mu = group.element(res);
            l.lift = static_cast<int>(detail::get_uint(code, pos));
            t.vertices[v].legs.push_back(l);
        }
        if (has_parent)
            for (int j = 0; j < r; ++j) detail::get_uint(code, pos);
        auto nch = detail::get_uint(code, pos);
        for (unsigned long i = 0; i < nch; ++i) {
            int w = read_vertex(true);
            t.add_edge(v, w);
        }
        return v;
    };
    if (code.empty()) throw InputError("empty canonical code");
    char tag = code[pos++];
    if (tag == 'C') {
        read_vertex(false);
    } else if (tag == 'B') {
        int a = read_vertex(true);
        int b = read_vertex(true);
        t.add_edge(a, b);
    } else {
        throw InputError("bad canonical code tag");
    }
    if (pos != code.size()) throw InputError("trailing bytes in canonical code");
    return canonical_tree(t);
}

// ---- automorphisms --------------------------------------------------------

struct TreeAutomorphism {
    std::vector<int> vmap;  // v -> image
    std::vector<int> emap;  // e -> image
};

inline int permutation_sign(const std::vector<int>& p) {
    std::vector<bool> seen(p.size(), false);
    int sign = 1;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (seen[i]) continue;
        std::size_t len = 0;
        for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p[j])) seen[j] = true, ++len;
        if (len % 2 == 0) sign = -sign;
    }
    return sign;
}

inline std::vector<int> edge_map_from_vertices(const Tree& t, const std::vector<int>& vmap) {
    std::map<std::pair<int, int>, int> index;
    for (int e = 0; e < t.num_edges(); ++e)
        index[{std::min(t.edges[e][0], t.edges[e][1]), std::max(t.edges[e][0], t.edges[e][1])}] = e;
    std::vector<int> emap(t.num_edges());
    for (int e = 0; e < t.num_edges(); ++e) {
        int a = vmap[t.edges[e][0]], b = vmap[t.edges[e][1]];
        emap[e] = index.at({std::min(a, b), std::max(a, b)});
    }
    return emap;
}

// Full automorphism group (weights, labelled legs and lifts are preserved).
inline std::vector<TreeAutomorphism> tree_automorphisms(const Tree& t) {
    auto cf = canonical_form(t);
    std::vector<TreeAutomorphism> out;
    std::vector<int> vmap(t.num_vertices(), -1);

    std::function<void(std::vector<std::pair<int, int>>)> extend = [&](std::vector<std::pair<int, int>> pending) {
        if (pending.empty()) {
            out.push_back({vmap, edge_map_from_vertices(t, vmap)});
            return;
        }
        auto [u, u2] = pending.back();
        pending.pop_back();
        vmap[u] = u2;
        const auto& ca = cf.children[u];
        const auto& cb = cf.children[u2];
        // runs of equal subtree codes
        std::vector<std::pair<std::size_t, std::size_t>> runs;
        for (std::size_t i = 0; i < ca.size();) {
            std::size_t j = i;
            while (j < ca.size() && cf.subtree_code[ca[j]] == cf.subtree_code[ca[i]]) ++j;
            runs.push_back({i, j});
            i = j;
        }
        std::function<void(std::size_t, std::vector<std::pair<int, int>>&)> choose =
            [&](std::size_t r, std::vector<std::pair<int, int>>& acc) {
                if (r == runs.size()) {
                    extend(acc);
                    return;
                }
                auto [lo, hi] = runs[r];
                std::vector<int> idx;
                for (std::size_t i = lo; i < hi; ++i) idx.push_back(static_cast<int>(i));
                do {
                    std::size_t base = acc.size();
                    for (std::size_t i = lo; i < hi; ++i) acc.push_back({ca[i], cb[idx[i - lo]]});
                    choose(r + 1, acc);
                    acc.resize(base);
                } while (std::next_permutation(idx.begin(), idx.end()));
            };
        choose(0, pending);
    };

    if (cf.roots.size() == 1) {
        extend({{cf.roots[0], cf.roots[0]}});
    } else {
        int a = cf.roots[0], b = cf.roots[1];
        extend({{a, a}, {b, b}});
        if (cf.halves_equal) extend({{a, b}, {b, a}});
    }
    return out;
}

// Whether some automorphism permutes the edges oddly. Uses the generating
// set of sibling swaps, whose parities are read off subtree edge counts.
inline bool has_odd_automorphism(const Tree& t, const CanonicalForm& cf) {
    int n = t.num_vertices();
    std::vector<int> sub_edges(n, 0);
    for (int i = n - 1; i >= 0; --i) {
        int v = cf.vertex_order[i];
        for (int w : cf.children[v]) sub_edges[v] += sub_edges[w] + 1;
    }
    for (int v = 0; v < n; ++v) {
        const auto& ch = cf.children[v];
        for (std::size_t i = 0; i + 1 < ch.size(); ++i)
            if (cf.subtree_code[ch[i]] == cf.subtree_code[ch[i + 1]] && sub_edges[ch[i]] % 2 == 0) return true;
    }
    if (cf.roots.size() == 2 && cf.halves_equal && sub_edges[cf.roots[0]] % 2 == 1) return true;
    return false;
}

inline bool has_odd_automorphism(const Tree& t) { return has_odd_automorphism(t, canonical_form(t)); }

// Weighted tree from a list of weights and edges (hyperelliptic convention).
inline Tree weighted_tree(const std::vector<int>& weights, const std::vector<std::array<int, 2>>& edges) {
    Tree t = Tree::hyperelliptic();
    for (int w : weights) t.add_vertex(w);
    for (auto e : edges) t.add_edge(e[0], e[1]);
    return t;
}

inline nlohmann::json tree_to_json(const Tree& t) {
    auto j = to_json(t.to_graph(), &t.group);
    j["code"] = to_hex(canonical_code(t));
    return j;
}

}  // namespace admcov
