#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include <unistd.h>

#include "admcov/tree_enum.hpp"

using namespace admcov;

namespace {

std::vector<std::pair<int, GroupElement>> constant_legs(const AbelianGroup&, int n, const GroupElement& mu) {
    std::vector<std::pair<int, GroupElement>> out;
    for (int i = 1; i <= n; ++i) out.push_back({i, mu});
    return out;
}

using Adj = std::vector<std::vector<int>>;

// Canonical string of an unlabelled graph: lexicographically least adjacency
// matrix over all vertex orders.
std::string brute_canon(const Adj& a) {
    int n = static_cast<int>(a.size());
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<int> pos(n);
    std::string best, s;
    do {
        for (int i = 0; i < n; ++i) pos[p[i]] = i;
        s.assign(n * n, '0');
        for (int i = 0; i < n; ++i)
            for (int j : a[p[i]]) s[i * n + pos[j]] = '1';
        if (best.empty() || s < best) best = s;
    } while (std::next_permutation(p.begin(), p.end()));
    return best;
}

// Unlabelled trees with n vertices, grown leaf by leaf.
const std::vector<Adj>& unlabelled_trees(int n) {
    static std::map<int, std::vector<Adj>> memo;
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    std::vector<Adj> level{Adj(1)};
    for (int k = 2; k <= n; ++k) {
        std::map<std::string, Adj> next;
        for (const auto& t : level)
            for (int v = 0; v < k - 1; ++v) {
                Adj u = t;
                u.push_back({v});
                u[v].push_back(k - 1);
                next.emplace(brute_canon(u), u);
            }
        level.clear();
        for (auto& [c, t] : next) level.push_back(t);
    }
    return memo[n] = level;
}

std::vector<std::vector<int>> graph_automorphisms(const Adj& a) {
    int n = static_cast<int>(a.size());
    std::vector<std::set<int>> s(n);
    for (int i = 0; i < n; ++i) s[i] = std::set<int>(a[i].begin(), a[i].end());
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        bool ok = true;
        for (int i = 0; i < n && ok; ++i)
            for (int j : a[i])
                if (!s[p[i]].count(p[j])) ok = false;
        if (ok) out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

// Isomorphism classes of stable trees with weights in [0, cap] summing to total.
long brute_weighted_count(int total, int cap) {
    long count = 0;
    // each leaf of a stable tree carries weight >= 2
    for (int n = 1; n <= std::max(1, total - 2); ++n) {
        for (const auto& t : unlabelled_trees(n)) {
            auto auts = graph_automorphisms(t);
            std::set<std::vector<int>> classes;
            std::vector<int> w(n, 0);
            std::function<void(int, int)> rec = [&](int i, int left) {
                if (i == n) {
                    if (left != 0) return;
                    std::vector<int> best = w;
                    for (const auto& p : auts) {
                        std::vector<int> img(n);
                        for (int v = 0; v < n; ++v) img[p[v]] = w[v];
                        best = std::min(best, img);
                    }
                    classes.insert(best);
                    return;
                }
                for (int x = std::max(0, 3 - static_cast<int>(t[i].size())); x <= std::min(cap, left); ++x) {
                    w[i] = x;
                    rec(i + 1, left - x);
                }
            };
            rec(0, total);
            count += static_cast<long>(classes.size());
        }
    }
    return count;
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() / ("admcov-test-" + std::to_string(::getpid()));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST(TreeEnum, UnlabelledTreeOracleSanity) {
    std::vector<std::size_t> expected{1, 1, 1, 2, 3, 6, 11, 23};
    for (int n = 1; n <= 8; ++n) EXPECT_EQ(unlabelled_trees(n).size(), expected[n - 1]);
}

TEST(TreeEnum, HyperellipticCountsMatchBruteForce) {
    EXPECT_EQ(enumerate_weighted_trees(6, 2).size(), 3u);
    EXPECT_EQ(enumerate_weighted_trees(8, 2).size(), 11u);
    for (int g = 2; g <= 4; ++g)
        EXPECT_EQ(static_cast<long>(enumerate_weighted_trees(2 * g + 2, 2).size()), brute_weighted_count(2 * g + 2, 2))
            << "g=" << g;
}

TEST(TreeEnum, UncappedCountsMatchBruteForce) {
    for (int total = 4; total <= 10; total += 2)
        EXPECT_EQ(static_cast<long>(enumerate_weighted_trees(total, total).size()), brute_weighted_count(total, total))
            << "total=" << total;
}

TEST(TreeEnum, TreesAreStableAndDistinct) {
    for (int g = 2; g <= 5; ++g) {
        auto ts = enumerate_weighted_trees(2 * g + 2, 2);
        std::set<std::string> codes;
        for (const auto& t : ts) {
            ASSERT_TRUE(t.is_stable());
            ASSERT_TRUE(t.is_connected_tree());
            ASSERT_EQ(t.total_weight(), 2 * g + 2);
            ASSERT_LE(t.num_vertices(), 2 * g);
            for (const auto& v : t.vertices) ASSERT_LE(v.weight, 2);
            codes.insert(canonical_code(t));
        }
        EXPECT_EQ(codes.size(), ts.size());
    }
}

// Stable trees with n labelled leaves: 1, 4, 26, 236, 2752.
TEST(TreeEnum, LabelledLeafCounts) {
    AbelianGroup trivial({1});
    std::vector<std::size_t> expected{1, 4, 26, 236, 2752};
    for (int n = 3; n <= 7; ++n)
        EXPECT_EQ(enumerate_labelled_trees(trivial, constant_legs(trivial, n, trivial.zero())).size(), expected[n - 3]);
    AbelianGroup z2({2});
    EXPECT_EQ(enumerate_labelled_trees(z2, constant_legs(z2, 6, z2.element({1}))).size(), 236u);
}

TEST(TreeEnum, MonodromyFamilyRespectsAdmissibility) {
    AbelianGroup z3({3});
    auto legs = constant_legs(z3, 6, z3.element({1}));
    auto ts = enumerate_trees(TreeFamilySpec::monodromy(z3, legs));
    ASSERT_FALSE(ts.empty());
    for (const auto& t : ts) {
        ASSERT_EQ(t.num_labelled_legs(), 6);
        ASSERT_TRUE(t.is_stable());
        for (const auto& v : t.vertices) ASSERT_EQ(v.weight, 0);
    }
    // unramified edges are admissible, so no tree is lost
    EXPECT_EQ(ts.size(), 236u);
    EXPECT_THROW(TreeFamilySpec::monodromy(z3, constant_legs(z3, 4, z3.element({1}))).validate(), InputError);
}

TEST(TreeEnum, InsertLegProducesDistinctStableTrees) {
    auto t = weighted_tree({2, 2, 2}, {{{0, 1}}, {{1, 2}}});
    auto out = dedup_sorted(insert_leg(t, 1, t.group.zero()));
    // on an end or the middle vertex, on an edge, or split off with one
    // branch leg from an end or the middle vertex
    EXPECT_EQ(out.size(), 5u);
    for (const auto& s : out) {
        EXPECT_TRUE(s.is_stable());
        EXPECT_EQ(s.num_labelled_legs(), 1);
    }
}

TEST(TreeCache, RoundTripAndHeaderRefusal) {
    TempDir dir;
    auto spec = TreeFamilySpec::hyperelliptic(3);
    TreeCache cache{dir.path, false};
    auto built = cache.load_or_build(spec);
    auto loaded = cache.load_or_build(spec);
    ASSERT_EQ(built.size(), loaded.size());
    for (std::size_t i = 0; i < built.size(); ++i) EXPECT_EQ(canonical_code(built[i]), canonical_code(loaded[i]));

    auto path = dir.path / (spec.file_stem() + ".trees");
    ASSERT_TRUE(std::filesystem::exists(path));
    {
        std::ofstream f(path);
        f << "treecache v0 deadbeef\n";
    }
    EXPECT_THROW(cache.load_or_build(spec), InputError);
    TreeCache refresh{dir.path, true};
    EXPECT_EQ(refresh.load_or_build(spec).size(), built.size());
    EXPECT_EQ(cache.load_or_build(spec).size(), built.size());
}

TEST(TreeCache, SpecKeysDiffer) {
    AbelianGroup z2({2});
    EXPECT_NE(TreeFamilySpec::hyperelliptic(2).digest(), TreeFamilySpec::hyperelliptic(3).digest());
    EXPECT_NE(TreeFamilySpec::hyperelliptic(3).digest(),
              TreeFamilySpec::monodromy(z2, constant_legs(z2, 8, z2.element({1}))).digest());
}
