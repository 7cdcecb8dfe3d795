#include <gtest/gtest.h>

#include <set>

#include "admcov/abelian_group.hpp"

using namespace admcov;

namespace {

std::vector<AbelianGroup> small_groups(int max_order) {
    std::vector<AbelianGroup> out;
    for (int a = 1; a <= max_order; ++a) {
        out.push_back(AbelianGroup({a}));
        for (int b = 2; a * b <= max_order; ++b)
            if (b % a == 0 && a > 1) out.push_back(AbelianGroup({a, b}));
    }
    out.push_back(AbelianGroup({2, 2, 2}));
    out.push_back(AbelianGroup({2, 2, 4}));
    out.push_back(AbelianGroup({2, 2, 2, 2}));
    return out;
}

}  // namespace

TEST(AbelianGroup, OrderAndElements) {
    AbelianGroup g({2, 6});
    EXPECT_EQ(g.order(), 12);
    auto els = g.elements();
    ASSERT_EQ(els.size(), 12u);
    std::set<GroupElement> distinct(els.begin(), els.end());
    EXPECT_EQ(distinct.size(), 12u);
    for (int i = 0; i < g.order(); ++i) EXPECT_EQ(g.index_of(g.from_index(i)), i);
}

TEST(AbelianGroup, Arithmetic) {
    AbelianGroup g({2, 6});
    auto x = g.element({1, 5}), y = g.element({1, 3});
    EXPECT_EQ(g.add(x, y), g.element({0, 2}));
    EXPECT_EQ(g.neg(x), g.element({1, 1}));
    EXPECT_EQ(g.sub(x, x), g.zero());
    EXPECT_EQ(g.scale(x, 7), x);
    EXPECT_EQ(g.element_order(x), 6);
    EXPECT_EQ(g.element_order(y), 2);
    EXPECT_EQ(g.element_order(g.zero()), 1);
}

TEST(AbelianGroup, InvariantFactors) {
    EXPECT_EQ(AbelianGroup::invariant_factors({2, 3}), std::vector<int>({6}));
    EXPECT_EQ(AbelianGroup::invariant_factors({4, 6}), std::vector<int>({2, 12}));
    EXPECT_EQ(AbelianGroup::invariant_factors({2, 2, 3}), std::vector<int>({2, 6}));
}

TEST(AbelianGroup, SubgroupGeneratedExamples) {
    AbelianGroup z12({12});
    EXPECT_EQ(subgroup_generated(z12, {z12.element({8})}).order(), 3);
    EXPECT_EQ(subgroup_generated(z12, {z12.element({8}), z12.element({6})}).order(), 6);
    EXPECT_EQ(subgroup_generated(z12, {}).order(), 1);
    AbelianGroup v({2, 2});
    EXPECT_EQ(subgroup_generated(v, {v.element({1, 0}), v.element({0, 1})}).order(), 4);
    EXPECT_THROW(subgroup_generated(v, {GroupElement{{1}}}), InputError);
}

TEST(AbelianGroup, SubgroupFromElementsRequiresIdentity) {
    AbelianGroup z4({4});
    EXPECT_THROW(subgroup_from_elements(z4, {z4.element({2})}), InputError);
    EXPECT_EQ(subgroup_from_elements(z4, {z4.zero(), z4.element({2})}).order(), 2);
}

TEST(AbelianGroup, CosetExamples) {
    AbelianGroup z6({6});
    auto h = subgroup_generated(z6, {z6.element({2})});
    auto cs = coset_space(z6, h);
    ASSERT_EQ(cs.size(), 2);
    EXPECT_EQ(cs.coset_of_index(z6.index_of(z6.element({4}))), cs.coset_of_index(0));
    EXPECT_NE(cs.coset_of_index(z6.index_of(z6.element({3}))), cs.coset_of_index(0));
    int one = z6.index_of(z6.element({1}));
    EXPECT_EQ(cs.act(one, cs.act(one, 0)), 0);
}

// Every generated subgroup of every small group: Lagrange, closure, and a
// coset action that is transitive and compatible with addition.
TEST(AbelianGroup, LagrangeAndCosetActionUpTo64) {
    for (const auto& g : small_groups(64)) {
        if (g.order() > 64) continue;
        auto els = g.elements();
        std::vector<std::vector<GroupElement>> gensets;
        for (const auto& x : els) gensets.push_back({x});
        for (std::size_t i = 0; i < els.size() && i < 8; ++i)
            for (std::size_t j = i; j < els.size() && j < 8; ++j) gensets.push_back({els[i], els[j]});
        for (const auto& gens : gensets) {
            auto h = subgroup_generated(g, gens);
            ASSERT_EQ(g.order() % h.order(), 0) << g.to_string();
            for (int a : h.element_indices())
                for (int b : h.element_indices())
                    ASSERT_TRUE(h.contains_index(g.index_of(g.add(g.from_index(a), g.from_index(b)))));
            for (const auto& x : gens) ASSERT_TRUE(h.contains(g, x));
            auto cs = coset_space(g, h);
            ASSERT_EQ(cs.size() * h.order(), g.order());
            std::set<int> orbit;
            for (int i = 0; i < g.order(); ++i) orbit.insert(cs.act(i, 0));
            ASSERT_EQ(static_cast<int>(orbit.size()), cs.size());
            for (int i = 0; i < g.order(); ++i)
                for (int j = 0; j < g.order(); j += 3) {
                    int ij = g.index_of(g.add(g.from_index(i), g.from_index(j)));
                    for (int c = 0; c < cs.size(); ++c) ASSERT_EQ(cs.act(i, cs.act(j, c)), cs.act(ij, c));
                }
            for (int i = 0; i < g.order(); ++i)
                ASSERT_EQ(cs.coset_of_index(i), cs.act(i, cs.coset_of_index(0)));
        }
    }
}

TEST(PresentedGroup, Normalization) {
    auto a = PresentedGroup::parse("Z2xZ3");
    EXPECT_EQ(a.group().order(), 6);
    EXPECT_EQ(a.group().rank(), 1);
    auto x = a.map({1, 1});
    EXPECT_EQ(a.group().element_order(x), 6);
    EXPECT_EQ(a.group().element_order(a.map({1, 0})), 2);
    EXPECT_EQ(a.group().element_order(a.map({0, 1})), 3);

    auto b = PresentedGroup::parse("Z4xZ6");
    EXPECT_EQ(b.group().order(), 24);
    EXPECT_EQ(b.group().rank(), 2);
    std::set<GroupElement> images;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 6; ++j) images.insert(b.map({i, j}));
    EXPECT_EQ(images.size(), 24u);
    // map is a homomorphism
    EXPECT_EQ(b.group().add(b.map({1, 2}), b.map({3, 5})), b.map({0, 1}));
}

TEST(PresentedGroup, RejectsBadSpecs) {
    for (const char* s : {"", "Z", "Z0", "Z2x", "Y2", "Z2*Z3", "Z2xx"}) EXPECT_THROW(PresentedGroup::parse(s), InputError) << s;
}
