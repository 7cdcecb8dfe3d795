#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <set>

#include "admcov/cover.hpp"
#include "admcov/tree_enum.hpp"

using namespace admcov;

namespace {

Tree path222() { return weighted_tree({2, 2, 2}, {{{0, 1}}, {{1, 2}}}); }
Tree star2222() { return weighted_tree({0, 2, 2, 2}, {{{0, 1}}, {{0, 2}}, {{0, 3}}}); }

std::vector<std::vector<int>> vertex_automorphisms(const Tree& t) {
    int n = t.num_vertices();
    std::set<std::pair<int, int>> es;
    for (auto e : t.edges) es.insert({std::min(e[0], e[1]), std::max(e[0], e[1])});
    std::vector<std::vector<Leg>> legs(n);
    for (int v = 0; v < n; ++v) {
        legs[v] = t.vertices[v].legs;
        for (auto& l : legs[v]) l.lift = 0;
        std::sort(legs[v].begin(), legs[v].end());
    }
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        bool ok = true;
        for (int v = 0; v < n && ok; ++v) ok = t.vertices[v].weight == t.vertices[p[v]].weight && legs[v] == legs[p[v]];
        for (auto e : t.edges) {
            if (!ok) break;
            int a = p[e[0]], b = p[e[1]];
            ok = es.count({std::min(a, b), std::max(a, b)}) > 0;
        }
        if (ok) out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

// Number of automorphisms of P over some automorphism of C that commute with
// the G-action, counted by choosing the image of one point in every vertex
// and edge fiber and checking incidences. Legs carry no constraint here, so
// only use it for trees without labelled legs.
long brute_cover_automorphism_count(const AdmissibleCover& c) {
    const auto& t = c.target;
    const auto& P = c.source;
    int nv = t.num_vertices(), ne = t.num_edges();
    long total = 0;
    for (const auto& psi : vertex_automorphisms(t)) {
        // C half-edge image of each edge half
        std::vector<int> hpsi(2 * ne);
        for (int e = 0; e < ne; ++e)
            for (int s = 0; s < 2; ++s) {
                int a = psi[t.edges[e][s]], b = psi[t.edges[e][1 - s]];
                for (int f = 0; f < ne; ++f) {
                    if (t.edges[f][0] == a && t.edges[f][1] == b) hpsi[2 * e + s] = 2 * f;
                    if (t.edges[f][1] == a && t.edges[f][0] == b) hpsi[2 * e + s] = 2 * f + 1;
                }
            }
        std::vector<int> jv(nv), je(ne);
        auto phi_v = [&](int x) {
            int v = c.vertex_projection[x];
            int g = c.vertex_cosets[v].representative_index(x - c.vertex_offset[v]);
            int w = psi[v];
            return c.p_vertex(w, c.vertex_cosets[w].act(g, jv[v]));
        };
        auto phi_h = [&](int y) {
            int h = c.half_edge_projection[y];
            int g = c.half_edge_cosets[h].representative_index(y - c.half_edge_offset[h]);
            int h2 = hpsi[h];
            int e = h / 2;
            // the image of the base point of the first half decides both halves
            return c.p_half_edge(h2, c.half_edge_cosets[h2].act(g, je[e]));
        };
        std::function<void(int)> rec = [&](int i) {
            if (i < nv) {
                if (c.vertex_subgroup[i] != c.vertex_subgroup[psi[i]]) return;
                for (int j = 0; j < c.fiber_size(psi[i]); ++j) {
                    jv[i] = j;
                    rec(i + 1);
                }
                return;
            }
            int e = i - nv;
            if (e == ne) {
                ++total;
                return;
            }
            for (int j = 0; j < c.half_edge_cosets[hpsi[2 * e]].size(); ++j) {
                je[e] = j;
                bool ok = true;
                for (int s = 0; s < 2 && ok; ++s) {
                    int h = 2 * e + s;
                    for (int k = 0; k < c.half_edge_cosets[h].size() && ok; ++k) {
                        int y = c.p_half_edge(h, k);
                        int img = phi_h(y);
                        ok = P.half_edges[img].root == phi_v(P.half_edges[y].root) &&
                             P.half_edges[phi_h(P.half_edges[y].partner)].partner == img;
                    }
                }
                if (ok) rec(i + 1);
            }
        };
        rec(0);
    }
    return total;
}

bool is_automorphism(const AdmissibleCover& c, const CoverAutomorphism& a) {
    const auto& P = c.source;
    const auto& G = c.group();
    for (int y = 0; y < P.num_half_edges(); ++y) {
        if (P.half_edges[a.hmap[y]].root != a.vmap[P.half_edges[y].root]) return false;
        if (a.hmap[P.half_edges[y].partner] != P.half_edges[a.hmap[y]].partner) return false;
    }
    for (int gi = 0; gi < G.order(); ++gi) {
        for (int x = 0; x < P.num_vertices(); ++x)
            if (a.vmap[c.act_vertex(gi, x)] != c.act_vertex(gi, a.vmap[x])) return false;
        for (int y = 0; y < P.num_half_edges(); ++y)
            if (a.hmap[c.act_half_edge(gi, y)] != c.act_half_edge(gi, a.hmap[y])) return false;
    }
    for (int x = 0; x < P.num_vertices(); ++x)
        if (c.vertex_projection[a.vmap[x]] != a.psi.vmap[c.vertex_projection[x]]) return false;
    return true;
}

int total_genus(const AdmissibleCover& c) {
    int s = c.source.first_betti();
    for (int g : c.genus()) s += g;
    return s;
}

}  // namespace

TEST(Cover, PathExample) {
    auto c = build_cover(path222());
    // all edges unramified, every vertex fiber a single point
    EXPECT_EQ(c.source.num_vertices(), 3);
    EXPECT_EQ(c.source.num_edges(), 4);
    for (int g : c.genus()) EXPECT_EQ(g, 0);
    EXPECT_EQ(c.source.first_betti(), 2);
    EXPECT_EQ(total_genus(c), 2);
}

TEST(Cover, StarExample) {
    auto c = build_cover(star2222());
    EXPECT_EQ(c.fiber_size(0), 2);
    EXPECT_EQ(c.source.num_vertices(), 5);
    EXPECT_EQ(c.source.num_edges(), 6);
    EXPECT_EQ(total_genus(c), 2);
}

TEST(Cover, SingleVertexTripleCover) {
    AbelianGroup z3({3});
    Tree t = Tree::over(z3);
    t.add_vertex(0);
    for (int i = 1; i <= 3; ++i) t.add_leg(0, i, z3.element({1}));
    auto c = build_cover(t);
    ASSERT_EQ(c.source.num_vertices(), 1);
    EXPECT_EQ(c.genus()[0], 1);
    EXPECT_EQ(c.marking.size(), 3u);
}

TEST(Cover, SourceGenusIsConstant) {
    for (int g = 2; g <= 5; ++g)
        for (const auto& t : enumerate_weighted_trees(2 * g + 2, 2)) {
            auto c = build_cover(t);
            ASSERT_EQ(total_genus(c), g) << to_hex(canonical_code(t));
            ASSERT_EQ(c.source.num_components(), 1);
            ASSERT_EQ(c.source_euler_characteristic(), 1 - c.source.first_betti());
        }
}

TEST(Cover, AutomorphismOrderExamples) {
    EXPECT_EQ(cover_automorphisms(build_cover(path222())).size(), 8u);
    EXPECT_EQ(cover_automorphisms(build_cover(star2222())).size(), 12u);
    EXPECT_EQ(cover_automorphisms(build_cover(weighted_tree({6}, {}))).size(), 1u);
    EXPECT_EQ(cover_automorphisms(build_cover(path222()), LiftSemantics::deck).size(), 4u);
}

TEST(Cover, AutomorphismsMatchBruteForce) {
    for (int g = 2; g <= 4; ++g)
        for (const auto& t : enumerate_weighted_trees(2 * g + 2, 2)) {
            auto c = build_cover(t);
            auto auts = cover_automorphisms(c);
            ASSERT_EQ(static_cast<long>(auts.size()), brute_cover_automorphism_count(c)) << to_hex(canonical_code(t));
            ASSERT_EQ(static_cast<long>(fiber_translations(c, LiftSemantics::local).size()), local_translation_count(c));
            std::set<std::pair<std::vector<int>, std::vector<int>>> distinct;
            for (const auto& a : auts) {
                ASSERT_TRUE(is_automorphism(c, a));
                distinct.insert({a.vmap, a.hmap});
            }
            ASSERT_EQ(distinct.size(), auts.size());
        }
}

TEST(Cover, OrbitExponentExamples) {
    auto c = build_cover(path222());
    auto auts = cover_automorphisms(c);
    auto id = std::find_if(auts.begin(), auts.end(), [](const CoverAutomorphism& a) {
        for (std::size_t i = 0; i < a.vmap.size(); ++i)
            if (a.vmap[i] != static_cast<int>(i)) return false;
        for (std::size_t i = 0; i < a.hmap.size(); ++i)
            if (a.hmap[i] != static_cast<int>(i)) return false;
        return true;
    });
    ASSERT_NE(id, auts.end());
    EXPECT_EQ(orbit_exponents(c, *id), (OrbitExponentMap{{1, -1}}));
}

// The orbit exponents against an independent subdivision count; also
// sum_k k f_k = chi(P).
TEST(Cover, OrbitExponentsMatchSubdivisionOracle) {
    for (int g = 2; g <= 4; ++g)
        for (const auto& t : enumerate_weighted_trees(2 * g + 2, 2)) {
            auto c = build_cover(t);
            for (const auto& a : cover_automorphisms(c)) {
                auto f = orbit_exponents(c, a);
                ASSERT_EQ(f, orbit_exponents_subdivision_oracle(c, a)) << to_hex(canonical_code(t));
                long s = 0;
                for (auto [k, x] : f) s += k * x;
                ASSERT_EQ(s, c.source_euler_characteristic());
            }
        }
}

TEST(Cover, OrbitExponentsRandomGenusFive) {
    auto trees = enumerate_weighted_trees(12, 2);
    std::mt19937 rng(2024);
    for (int i = 0; i < 200; ++i) {
        const auto& t = trees[std::uniform_int_distribution<std::size_t>(0, trees.size() - 1)(rng)];
        auto c = build_cover(t);
        auto auts = cover_automorphisms(c);
        const auto& a = auts[std::uniform_int_distribution<std::size_t>(0, auts.size() - 1)(rng)];
        ASSERT_EQ(orbit_exponents(c, a), orbit_exponents_subdivision_oracle(c, a));
    }
}

TEST(Cover, LiftMarkingsExamples) {
    // one mark on the centre of the star: the two lifts are exchanged
    Tree t = star2222();
    t.add_leg(0, 1, t.group.zero());
    auto one = lift_markings(build_cover(t));
    EXPECT_EQ(one.size(), 1u);
    ASSERT_EQ(one[0].marking.size(), 1u);

    // two marks there: same sheet or different sheets
    t.add_leg(0, 2, t.group.zero());
    auto two = lift_markings(build_cover(t));
    EXPECT_EQ(two.size(), 2u);
    for (const auto& c : two) {
        ASSERT_EQ(c.marking.size(), 2u);
        EXPECT_EQ(c.source.half_edges[c.marking[0]].label, std::optional<int>(1));
        EXPECT_EQ(c.source.half_edges[c.marking[1]].label, std::optional<int>(2));
    }

    // a mark on a weight-2 leaf has a one-point fiber
    Tree u = star2222();
    u.add_leg(1, 1, u.group.zero());
    EXPECT_EQ(lift_markings(build_cover(u)).size(), 1u);
}

TEST(Cover, LocalRiemannHurwitz) {
    AbelianGroup z2({2});
    EXPECT_EQ(local_genus(z2, 2, {z2.element({1}), z2.element({1})}), 0);
    EXPECT_EQ(local_genus(z2, 2, std::vector<GroupElement>(6, z2.element({1}))), 2);
    EXPECT_THROW(local_genus(z2, 2, {z2.element({1})}), InvariantViolation);
}
