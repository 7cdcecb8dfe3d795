#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "admcov/cover.hpp"
#include "admcov/errors.hpp"
#include "admcov/sparse_rank.hpp"
#include "admcov/tree.hpp"
#include "admcov/tree_enum.hpp"

namespace admcov {

// quotient: branch legs unlabelled (vertex weights). labelled: branch legs
// are labelled legs w_1..w_{2g+2}, numbered after the marks.
enum class Variant { quotient, labelled };
enum class Subcomplex { full, rep, w3, repw3 };

inline std::string to_string(Variant v) { return v == Variant::quotient ? "quotient" : "labelled"; }
inline std::string to_string(Subcomplex s) {
    switch (s) {
        case Subcomplex::full: return "full";
        case Subcomplex::rep: return "rep";
        case Subcomplex::w3: return "w3";
        case Subcomplex::repw3: return "repw3";
    }
    return "?";
}
inline Variant parse_variant(const std::string& s) {
    if (s == "quotient") return Variant::quotient;
    if (s == "labelled") return Variant::labelled;
    throw InputError("unknown variant '" + s + "'");
}
inline Subcomplex parse_subcomplex(const std::string& s) {
    if (s == "full") return Subcomplex::full;
    if (s == "rep") return Subcomplex::rep;
    if (s == "w3") return Subcomplex::w3;
    if (s == "repw3" || s == "rep∩w3") return Subcomplex::repw3;
    throw InputError("unknown subcomplex '" + s + "'");
}

// A cover P -> C with marking lifts, stored as its target tree in canonical
// order with normalized lifts. Marks are the legs of trivial monodromy.
struct GammaObject {
    Tree target;
    std::string code;
    bool repeated_marking = false;
    bool weight3 = false;

    int num_edges() const { return target.num_edges(); }
};

namespace detail {

inline bool is_mark(const Tree& t, const Leg& l) { return l.mu == t.group.zero(); }

inline int branch_legs_at(const Tree& t, int v) {
    int w = t.vertices[v].weight;
    for (const auto& l : t.vertices[v].legs)
        if (!is_mark(t, l)) ++w;
    return w;
}

// Vertices on the side of edges[e][1] once e is removed.
inline std::vector<bool> far_side(const Tree& t, int e) {
    auto adj = t.adjacency();
    std::vector<bool> in(t.num_vertices(), false);
    std::vector<int> st{t.edges[e][1]};
    in[t.edges[e][1]] = true;
    while (!st.empty()) {
        int v = st.back();
        st.pop_back();
        for (auto [f, w] : adj[v])
            if (f != e && !in[w]) in[w] = true, st.push_back(w);
    }
    return in;
}

// What one side of an edge looks like after contracting every other edge.
struct SideSummary {
    int branch_legs = 0;
    std::vector<int> marks;   // labels, ascending
    std::vector<int> sheets;  // sheet of each mark over the contracted side vertex
    bool repeated() const {
        auto s = sheets;
        std::sort(s.begin(), s.end());
        return std::adjacent_find(s.begin(), s.end()) != s.end();
    }
    bool one_sheet() const {
        return std::adjacent_find(sheets.begin(), sheets.end(), std::not_equal_to<>()) == sheets.end();
    }
};

inline std::array<SideSummary, 2> edge_sides(const Tree& t, int e, const std::vector<GroupElement>& emu,
                                             const std::vector<Subgroup>& subs) {
    auto in = far_side(t, e);
    std::array<SideSummary, 2> out;
    for (int s = 0; s < 2; ++s) {
        bool want = s == 1;
        std::vector<GroupElement> gens{emu[e]};
        std::vector<std::pair<int, std::pair<int, int>>> marks;  // label -> (vertex, lift)
        for (int v = 0; v < t.num_vertices(); ++v) {
            if (in[v] != want) continue;
            out[s].branch_legs += t.vertices[v].weight;
            if (t.vertices[v].weight > 0) gens.push_back(t.branch);
            for (const auto& l : t.vertices[v].legs) {
                if (is_mark(t, l)) {
                    marks.push_back({l.label, {v, l.lift}});
                } else {
                    ++out[s].branch_legs;
                    gens.push_back(l.mu);
                }
            }
        }
        std::sort(marks.begin(), marks.end());
        CosetSpace side(t.group, subgroup_generated(t.group, gens));
        for (auto& [label, loc] : marks) {
            CosetSpace at(t.group, subs[loc.first]);
            out[s].marks.push_back(label);
            out[s].sheets.push_back(side.coset_of_index(at.representative_index(loc.second)));
        }
    }
    return out;
}

}  // namespace detail

// Admits a contraction onto a single-edge cover one of whose sides is
// unstable once the marks are forgotten and carries no repeated marking.
inline bool is_forbidden(const Tree& t) {
    auto emu = t.edge_monodromy();
    auto subs = t.vertex_subgroups(emu);
    for (int e = 0; e < t.num_edges(); ++e)
        for (const auto& side : detail::edge_sides(t, e, emu, subs))
            if (side.branch_legs < 2 && !side.repeated()) return true;
    return false;
}

inline bool has_repeated_marking(const Tree& t) {
    for (const auto& v : t.vertices) {
        std::set<int> seen;
        for (const auto& l : v.legs)
            if (detail::is_mark(t, l) && !seen.insert(l.lift).second) return true;
    }
    return false;
}

inline bool has_weight3_vertex(const Tree& t) {
    for (int v = 0; v < t.num_vertices(); ++v)
        if (detail::branch_legs_at(t, v) >= 3) return true;
    return false;
}

// Normalize lifts, canonicalize and compute the flags.
inline GammaObject make_gamma_object(Tree t) {
    normalize_lifts(t, t.vertex_subgroups());
    auto cf = canonical_form(t);
    GammaObject o;
    o.target = t.relabel(cf.vertex_order, cf.edge_order);
    o.code = cf.code;
    o.repeated_marking = has_repeated_marking(o.target);
    o.weight3 = has_weight3_vertex(o.target);
    return o;
}

inline bool in_subcomplex(const GammaObject& o, Subcomplex s) {
    switch (s) {
        case Subcomplex::full: return true;
        case Subcomplex::rep: return o.repeated_marking;
        case Subcomplex::w3: return o.weight3;
        case Subcomplex::repw3: return o.repeated_marking && o.weight3;
    }
    return false;
}

// Target trees with n marks (lifts unset).
inline std::vector<Tree> gamma_target_trees(int g, int n, Variant variant) {
    if (g < 2) throw InputError("genus must be at least 2");
    if (n < 0) throw InputError("number of marks must be nonnegative");
    auto Z2 = AbelianGroup::cyclic(2);
    std::vector<Tree> cur;
    if (variant == Variant::quotient) {
        cur = enumerate_weighted_trees(2 * g + 2, 2 * g + 2);
    } else {
        std::vector<std::pair<int, GroupElement>> w;
        for (int i = 1; i <= 2 * g + 2; ++i) w.push_back({n + i, Z2.element({1})});
        cur = enumerate_labelled_trees(Z2, w);
    }
    for (int i = 1; i <= n; ++i) {
        std::vector<Tree> next;
        for (const auto& t : cur)
            for (auto& u : insert_leg(t, i, Z2.zero())) next.push_back(std::move(u));
        cur = dedup_sorted(std::move(next));
    }
    return cur;
}

// One representative per isomorphism class, sorted by code.
inline std::vector<GammaObject> enumerate_gamma(int g, int n, Variant variant, Subcomplex sub = Subcomplex::full) {
    std::map<std::string, GammaObject> found;
    for (const auto& t : gamma_target_trees(g, n, variant)) {
        auto subs = t.vertex_subgroups();
        std::vector<std::pair<int, int>> slots;  // (vertex, leg index) of each mark
        std::vector<int> sizes;
        for (int v = 0; v < t.num_vertices(); ++v)
            for (std::size_t i = 0; i < t.vertices[v].legs.size(); ++i)
                if (detail::is_mark(t, t.vertices[v].legs[i])) {
                    slots.push_back({v, static_cast<int>(i)});
                    sizes.push_back(t.group.order() / subs[v].order());
                }
        std::vector<int> y(slots.size(), 0);
        while (true) {
            Tree u = t;
            for (std::size_t i = 0; i < slots.size(); ++i) u.vertices[slots[i].first].legs[slots[i].second].lift = y[i];
            if (!is_forbidden(u)) {
                auto o = make_gamma_object(std::move(u));
                if (in_subcomplex(o, sub)) found.emplace(o.code, std::move(o));
            }
            std::size_t i = 0;
            while (i < y.size() && ++y[i] == sizes[i]) y[i++] = 0;
            if (i == y.size()) break;
        }
    }
    std::vector<GammaObject> out;
    for (auto& [c, o] : found) out.push_back(std::move(o));
    return out;
}

// ---- chain complex -------------------------------------------------------------

// Degree p holds the generators with p + 1 edges; index d = p + 1.
struct ChainComplexQ {
    std::vector<GammaObject> objects;
    std::vector<std::vector<int>> basis;    // basis[d] = object indices
    std::vector<SparseMatrix> boundary;     // boundary[d] : C_{d-1} <- C_d, d >= 1
    std::map<std::string, int> position;    // code -> index within its degree basis

    int min_degree() const { return -1; }
    int max_degree() const { return static_cast<int>(basis.size()) - 2; }
    std::vector<int> dims() const {
        std::vector<int> d;
        for (const auto& b : basis) d.push_back(static_cast<int>(b.size()));
        return d;
    }
};

// Image of a generator after contracting edge `e`, as (code, sign) with sign
// 0 when the image has an odd symmetry.
inline std::pair<std::string, int> contract_generator(const Tree& t, int e) {
    Tree u = t.contract(e);
    normalize_lifts(u, u.vertex_subgroups());
    auto cf = canonical_form(u);
    if (has_odd_automorphism(u, cf)) return {cf.code, 0};
    return {cf.code, permutation_sign(cf.edge_order)};
}

inline std::vector<std::pair<int, long>> boundary_column(const ChainComplexQ& cx, const Tree& t) {
    std::map<int, long> acc;
    for (int i = 0; i < t.num_edges(); ++i) {
        auto [code, sign] = contract_generator(t, i);
        if (sign == 0) continue;
        auto it = cx.position.find(code);
        if (it == cx.position.end()) throw InvariantViolation("contraction leaves the object set");
        acc[it->second] += (i % 2 ? -1 : 1) * sign;
    }
    std::vector<std::pair<int, long>> col;
    for (auto [r, x] : acc)
        if (x != 0) col.push_back({r, x});
    return col;
}

inline void check_boundary_squared(const ChainComplexQ& cx) {
    for (std::size_t d = 2; d < cx.boundary.size(); ++d) {
        const auto& hi = cx.boundary[d];
        const auto& lo = cx.boundary[d - 1];
        for (const auto& col : hi.columns) {
            std::map<int, long> acc;
            for (auto [r, x] : col)
                for (auto [r2, y] : lo.columns[r]) acc[r2] += x * y;
            for (auto [r, x] : acc)
                if (x != 0) throw InvariantViolation("boundary squared is nonzero in degree " + std::to_string(d - 1));
        }
    }
}

inline ChainComplexQ build_complex(std::vector<GammaObject> objects) {
    ChainComplexQ cx;
    cx.objects = std::move(objects);
    int top = 0;
    for (const auto& o : cx.objects) top = std::max(top, o.num_edges());
    cx.basis.assign(top + 1, {});
    for (int k = 0; k < static_cast<int>(cx.objects.size()); ++k) {
        const auto& o = cx.objects[k];
        if (has_odd_automorphism(o.target)) continue;
        auto& b = cx.basis[o.num_edges()];
        cx.position[o.code] = static_cast<int>(b.size());
        b.push_back(k);
    }
    cx.boundary.assign(top + 1, {});
    for (int d = 1; d <= top; ++d) {
        auto& m = cx.boundary[d];
        m.rows = static_cast<int>(cx.basis[d - 1].size());
        m.cols = static_cast<int>(cx.basis[d].size());
        for (int k : cx.basis[d]) m.columns.push_back(boundary_column(cx, cx.objects[k].target));
    }
    check_boundary_squared(cx);
    return cx;
}

// Sum over degrees of (-1)^p dim C_p, p from -1.
inline long reduced_euler_characteristic(const std::vector<int>& dims) {
    long chi = 0;
    for (std::size_t d = 0; d < dims.size(); ++d) chi += (d % 2 ? 1 : -1) * static_cast<long>(dims[d]);
    return chi;
}

// Basis sizes only, for complexes too large to assemble.
inline std::vector<int> chain_dimensions(const std::vector<GammaObject>& objects) {
    std::vector<int> dims;
    for (const auto& o : objects) {
        if (has_odd_automorphism(o.target)) continue;
        if (static_cast<int>(dims.size()) <= o.num_edges()) dims.resize(o.num_edges() + 1, 0);
        ++dims[o.num_edges()];
    }
    return dims;
}

enum class RankMethod { exact, modular };

// Reduced Betti numbers, indexed like basis (entry d is degree d - 1).
inline std::vector<int> betti(const ChainComplexQ& cx, RankMethod method = RankMethod::exact) {
    int top = static_cast<int>(cx.basis.size()) - 1;
    std::vector<int> rk(top + 2, 0);
    for (int d = 1; d <= top; ++d) {
        if (method == RankMethod::exact) {
            rk[d] = exact_rank(cx.boundary[d]);
        } else {
            int a = modular_rank(cx.boundary[d], 2147483647u);
            int b = modular_rank(cx.boundary[d], 1000000007u);
            if (a != b) rk[d] = exact_rank(cx.boundary[d]);
            else rk[d] = a;
        }
    }
    std::vector<int> b(top + 1);
    for (int d = 0; d <= top; ++d) b[d] = static_cast<int>(cx.basis[d].size()) - rk[d] - rk[d + 1];
    return b;
}

inline nlohmann::json betti_json(int g, int n, Variant v, Subcomplex s, const std::vector<int>& dims,
                                 const std::vector<int>& b) {
    return {{"g", g}, {"n", n}, {"variant", to_string(v)}, {"subcomplex", to_string(s)}, {"dims", dims}, {"betti", b}};
}

// ---- special edges -------------------------------------------------------------

// The marks of a one-sided cluster: a side with no branch legs whose marks
// (at least two) all lie on one sheet.
inline std::optional<std::vector<int>> supporting_edge(const Tree& t, int e) {
    auto emu = t.edge_monodromy();
    auto subs = t.vertex_subgroups(emu);
    for (const auto& side : detail::edge_sides(t, e, emu, subs))
        if (side.branch_legs == 0 && side.marks.size() >= 2 && side.one_sheet()) return side.marks;
    return std::nullopt;
}

namespace detail {

inline bool bare_side_with(const Tree& t, int e, int branch) {
    auto emu = t.edge_monodromy();
    auto subs = t.vertex_subgroups(emu);
    for (const auto& side : edge_sides(t, e, emu, subs))
        if (side.branch_legs == branch && side.marks.empty()) return true;
    return false;
}

}  // namespace detail

// One side carries exactly two branch legs and nothing else.
inline bool is_two_end(const Tree& t, int e) { return detail::bare_side_with(t, e, 2); }
// One side carries exactly three branch legs and nothing else.
inline bool is_three_end(const Tree& t, int e) { return detail::bare_side_with(t, e, 3); }

inline int count_three_ends(const Tree& t) {
    int k = 0;
    for (int e = 0; e < t.num_edges(); ++e) k += is_three_end(t, e);
    return k;
}

// Split weight-3 leaves off every vertex as often as stability allows.
// Quotient variant only; lifts are unaffected since the new edges carry the
// branch monodromy.
inline Tree max_three_end_expansion(const Tree& t) {
    if (t.branch == t.group.zero()) throw InputError("three-end expansion needs unlabelled branch legs");
    Tree u = t;
    auto deg = t.degrees();
    for (int v = 0; v < t.num_vertices(); ++v) {
        int others = deg[v] + static_cast<int>(t.vertices[v].legs.size());
        int k = 0;
        while (3 * (k + 1) <= t.vertices[v].weight &&
               t.vertices[v].weight - 3 * (k + 1) + (k + 1) + others >= 3)
            ++k;
        for (int j = 0; j < k; ++j) {
            u.vertices[v].weight -= 3;
            int leaf = u.add_vertex(3);
            u.add_edge(v, leaf);
        }
    }
    return u;
}

// ---- the top-degree cycle for n = 2 --------------------------------------------

struct TopCycle {
    int degree = 0;
    std::vector<std::pair<int, long>> chain;  // (basis position, coefficient)
    std::vector<std::vector<std::pair<int, long>>> generator_boundaries;
    int transposition_sign = 0;
    bool caterpillar = false;
};

namespace detail {

inline bool is_caterpillar(const Tree& t) {
    auto deg = t.degrees();
    std::vector<int> keep;
    for (int v = 0; v < t.num_vertices(); ++v)
        if (deg[v] > 1 || t.num_vertices() <= 2) keep.push_back(v);
    // the non-leaf vertices must induce a path
    std::set<int> k(keep.begin(), keep.end());
    std::map<int, int> d;
    int inner_edges = 0;
    for (const auto& e : t.edges)
        if (k.count(e[0]) && k.count(e[1])) ++d[e[0]], ++d[e[1]], ++inner_edges;
    if (inner_edges + 1 != static_cast<int>(keep.size())) return false;
    for (auto [v, x] : d)
        if (x > 2) return false;
    return true;
}

// Action of swapping marks 1 and 2 on a generator, as (basis position, sign).
inline std::pair<int, int> swap_marks(const ChainComplexQ& cx, const Tree& t) {
    Tree u = t;
    for (auto& v : u.vertices)
        for (auto& l : v.legs)
            if (detail::is_mark(u, l) && (l.label == 1 || l.label == 2)) l.label = 3 - l.label;
    normalize_lifts(u, u.vertex_subgroups());
    auto cf = canonical_form(u);
    auto it = cx.position.find(cf.code);
    if (it == cx.position.end()) throw InvariantViolation("swapped generator missing from basis");
    return {it->second, permutation_sign(cf.edge_order)};
}

}  // namespace detail

// Spine u_1..u_{g+1} of weight-0 vertices, each carrying a leaf of weight 2;
// marks 1 and 2 sit on the two ends of the spine, mark 2 on sheet `lift2`.
inline Tree caterpillar_target(int g, int lift2) {
    Tree t = Tree::hyperelliptic();
    auto zero = t.group.zero();
    std::vector<int> spine;
    for (int i = 0; i <= g; ++i) {
        int u = t.add_vertex(0);
        if (!spine.empty()) t.add_edge(spine.back(), u);
        spine.push_back(u);
        t.add_edge(u, t.add_vertex(2));
    }
    t.add_leg(spine.front(), 1, zero);
    t.add_leg(spine.back(), 2, zero);
    t.vertices[spine.back()].legs.back().lift = lift2;
    return t;
}

// The two covers of the caterpillar in degree 2g of the (g, 2) quotient
// complex: neither is a cycle, a combination of them is, and swapping the
// marks acts on it by a sign.
inline TopCycle caterpillar_cycle(const ChainComplexQ& cx, int g) {
    TopCycle out;
    out.degree = 2 * g;
    int d = 2 * g + 1;
    require(static_cast<int>(cx.basis.size()) == d + 1, "top degree is not 2g");
    std::array<int, 2> pos{};
    std::array<Tree, 2> gens;
    for (int y = 0; y < 2; ++y) {
        auto o = make_gamma_object(caterpillar_target(g, y));
        auto it = cx.position.find(o.code);
        require(it != cx.position.end(), "caterpillar cover missing from the top degree");
        pos[y] = it->second;
        gens[y] = o.target;
    }
    require(pos[0] != pos[1], "the two caterpillar covers coincide");
    out.caterpillar = detail::is_caterpillar(gens[0]);
    const auto& c0 = cx.boundary[d].columns[pos[0]];
    const auto& c1 = cx.boundary[d].columns[pos[1]];
    out.generator_boundaries = {c0, c1};
    require(!c0.empty() && !c1.empty(), "a single caterpillar cover is already a cycle");
    require(c0.size() == c1.size(), "caterpillar boundaries have different supports");
    long s = 0;
    for (std::size_t i = 0; i < c0.size(); ++i) {
        require(c0[i].first == c1[i].first, "caterpillar boundaries have different supports");
        long r = -c0[i].second / c1[i].second;
        require(r * c1[i].second == -c0[i].second && (s == 0 || s == r), "no cycle on the caterpillar");
        s = r;
    }
    out.chain = {{pos[0], 1}, {pos[1], s}};
    auto [p0, e0] = detail::swap_marks(cx, gens[0]);
    auto [p1, e1] = detail::swap_marks(cx, gens[1]);
    std::map<int, long> image;
    image[p0] += e0;
    image[p1] += e1 * s;
    require(image.size() == 2 && image.count(pos[0]) && image.count(pos[1]), "swap leaves the cycle's support");
    if (image[pos[0]] == 1 && image[pos[1]] == s) out.transposition_sign = 1;
    else if (image[pos[0]] == -1 && image[pos[1]] == -s) out.transposition_sign = -1;
    else throw InvariantViolation("transposition does not preserve the cycle line");
    return out;
}

}  // namespace admcov
