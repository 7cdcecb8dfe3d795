#include <gtest/gtest.h>

#include "admcov/euler_sum.hpp"
#include "reference_tables.hpp"

using namespace admcov;

namespace {

SymLaurent P1() { return SymLaurent::monomial(make_exponents({{1, 1}})); }

}  // namespace

TEST(EulerSum, GenusTwoToFourMatchReference) {
    for (int g = 2; g <= 4; ++g) EXPECT_EQ(compute_hg(g), reftables::hg_reference(g)) << "g=" << g;
}

TEST(EulerSum, GenusTwoText) {
    EXPECT_EQ(to_text(compute_hg(2)), "-P1^3/(12*P2^2) - P1^2/(6*P3) + P1/(2*P2) - P2*P3/(6*P6) - 1/(12*P1)");
}

// chi vanishes for n = 0, 1, 3 and equals -1 for n = 2 in every genus.
TEST(EulerSum, LowDegreeSpecializations) {
    for (int g = 2; g <= 5; ++g) {
        auto v = egf_values(specialize_egf(compute_hg(g)), 3);
        EXPECT_EQ(v[0], 0) << g;
        EXPECT_EQ(v[1], 0) << g;
        EXPECT_EQ(v[2], -1) << g;
        EXPECT_EQ(v[3], 0) << g;
    }
}

TEST(EulerSum, ExpansionDegreeZeroAndOneVanish) {
    for (int g = 2; g <= 4; ++g) {
        auto s = expand_to_degree(compute_hg(g), 2);
        EXPECT_TRUE(s.degree_part(0).empty()) << g;
        EXPECT_TRUE(s.degree_part(1).empty()) << g;
    }
}

TEST(EulerSum, ParallelSumIsDeterministic) {
    auto trees = enumerate_trees(TreeFamilySpec::hyperelliptic(4));
    auto one = compute_hg_from(trees, 1);
    for (int jobs : {2, 3, 8}) {
        auto many = compute_hg_from(trees, jobs);
        EXPECT_EQ(many, one);
        EXPECT_EQ(to_latex(many), to_latex(one));
    }
}

TEST(EulerSum, ContributionOfPath) {
    auto r = tree_contribution(weighted_tree({2, 2, 2}, {{{0, 1}}, {{1, 2}}}), SumMode::hyperelliptic);
    EXPECT_EQ(r.aut_order, 8);
    EXPECT_EQ(r.num_edges, 2);
    long total = 0;
    for (const auto& t : r.taus) total += t.multiplicity;
    EXPECT_EQ(total, 8);
}

// Trivial group: every cover is the identity of a tree with labelled legs,
// so the sum is P_1 times the signed count of trees with n labelled leaves.
// Those counts by number of edges are 1,3 / 1,10,15 / 1,25,105,105 /
// 1,56,490,1260,945.
TEST(EulerSum, TrivialGroupGivesSignedTreeCount) {
    AbelianGroup trivial({1});
    std::map<int, long> expected{{4, 1 - 3}, {5, 1 - 10 + 15}, {6, 1 - 25 + 105 - 105}, {7, 1 - 56 + 490 - 1260 + 945}};
    for (auto [n, c] : expected)
        EXPECT_EQ(compute_hG(trivial, constant_legs(trivial, n, trivial.zero())), Rational(c) * P1()) << "n=" << n;
}

TEST(EulerSum, LabelledZ2Example) {
    AbelianGroup z2({2});
    auto h = compute_hG(z2, constant_legs(z2, 6, z2.element({1})));
    auto v = egf_values(specialize_egf(h), 4);
    EXPECT_EQ(v, (std::vector<Rational>{-24, -24, -105, 0, -450}));
}

TEST(EulerSum, RejectsInadmissibleMonodromy) {
    AbelianGroup z3({3});
    EXPECT_THROW(compute_hG(z3, constant_legs(z3, 4, z3.element({1}))), InputError);
}
