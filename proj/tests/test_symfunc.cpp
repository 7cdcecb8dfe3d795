#include <gtest/gtest.h>

#include <random>

#include "admcov/polynomial.hpp"
#include "admcov/symfunc.hpp"
#include "reference_tables.hpp"

using namespace admcov;

namespace {

SymLaurent random_laurent(std::mt19937& rng, int terms) {
    SymLaurent x;
    std::uniform_int_distribution<int> ex(-3, 3), coeff(-5, 5), kd(1, 4), nf(0, 3);
    for (int i = 0; i < terms; ++i) {
        std::map<int, long> e;
        int nfac = nf(rng);
        for (int j = 0; j < nfac; ++j) e[kd(rng)] += ex(rng);
        x.add_term(make_exponents(e), Rational(coeff(rng), 1 + std::abs(coeff(rng))));
    }
    return x;
}

SymLaurent P(int k, int e = 1) { return SymLaurent::monomial(make_exponents({{k, e}})); }

}  // namespace

TEST(SymLaurent, RingLaws) {
    std::mt19937 rng(11);
    for (int i = 0; i < 30; ++i) {
        auto a = random_laurent(rng, 5), b = random_laurent(rng, 4), c = random_laurent(rng, 3);
        EXPECT_EQ(a + b, b + a);
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_TRUE((a - a).is_zero());
        EXPECT_EQ(a * SymLaurent::constant(1), a);
    }
    EXPECT_EQ(P(2, 3) * P(2, -3), SymLaurent::constant(1));
}

TEST(SymLaurent, TextAndLatexFormatting) {
    auto x = Rational(-1, 12) * P(1, -1) + Rational(1, 2) * (P(1) * P(2, -1));
    EXPECT_EQ(to_text(x), "P1/(2*P2) - 1/(12*P1)");
    EXPECT_EQ(to_text(SymLaurent()), "0");
    EXPECT_EQ(parse_latex(to_latex(x)), x);
}

TEST(SymLaurent, SerializationRoundTrips) {
    std::mt19937 rng(5);
    for (int i = 0; i < 30; ++i) {
        auto a = random_laurent(rng, 6);
        EXPECT_EQ(parse_latex(to_latex(a)), a) << to_latex(a);
        EXPECT_EQ(sym_laurent_from_json(to_json(a)), a);
    }
}

TEST(SymLaurent, ParsesReferenceExpressions) {
    for (int g = 2; g <= 7; ++g) {
        auto h = reftables::hg_reference(g);
        EXPECT_FALSE(h.is_zero());
        EXPECT_EQ(parse_latex(to_latex(h)), h);
    }
    EXPECT_THROW(parse_latex("\\frac{1}{2"), InputError);
}

TEST(Expansion, MatchesBinomialSeries) {
    // (1 + p_1)^{-1} = 1 - p_1 + p_1^2 - ...
    auto s = expand_to_degree(P(1, -1), 5);
    for (int n = 0; n <= 5; ++n) EXPECT_EQ(s.coefficient(std::vector<int>(n, 1)), n % 2 ? -1 : 1);
    // (1 + p_2)^3 = 1 + 3 p_2 + 3 p_2^2 + p_2^3
    auto t = expand_to_degree(P(2, 3), 6);
    EXPECT_EQ(t.coefficient({2}), 3);
    EXPECT_EQ(t.coefficient({2, 2}), 3);
    EXPECT_EQ(t.coefficient({2, 2, 2}), 1);
    EXPECT_EQ(t.coefficient({1}), 0);
}

TEST(Expansion, IsMultiplicative) {
    std::mt19937 rng(3);
    for (int i = 0; i < 20; ++i) {
        auto a = random_laurent(rng, 4), b = random_laurent(rng, 4);
        EXPECT_EQ(expand_to_degree(a * b, 6), expand_to_degree(a, 6) * expand_to_degree(b, 6));
        EXPECT_EQ(expand_to_degree(a + b, 6), [&] {
            auto s = expand_to_degree(a, 6);
            s += expand_to_degree(b, 6);
            return s;
        }());
    }
}

TEST(Specialize, LaurentAndTruncatedAgree) {
    std::mt19937 rng(9);
    for (int i = 0; i < 30; ++i) {
        auto a = random_laurent(rng, 6);
        auto f = specialize_egf(a).taylor(8);
        auto p = specialize_egf(expand_to_degree(a, 8));
        for (int n = 0; n <= 8; ++n) EXPECT_EQ(f[n], p.coeff(n));
    }
}

TEST(Specialize, Examples) {
    // P_1 -> 1 + t, P_2 -> 1
    auto f = specialize_egf(P(1, -1) + P(2, 5));
    EXPECT_EQ(f, RationalFunction1V(PolynomialQ({2, 1}), PolynomialQ({1, 1})));
    auto v = egf_values(RationalFunction1V(PolynomialQ({1}), PolynomialQ({1, -1})), 5);
    for (int n = 0; n <= 5; ++n) EXPECT_EQ(v[n], factorial(n));
}

// The closed-form EGFs and the numeric table describe the same numbers.
TEST(ReferenceTables, ClosedFormsExpandToNumericTable) {
    auto forms = reftables::egf_closed_forms();
    auto nums = reftables::euler_characteristics();
    ASSERT_EQ(forms.size(), 6u);
    ASSERT_EQ(nums.size(), 6u);
    for (const auto& [g, f] : forms) {
        auto v = egf_values(f, 10);
        ASSERT_EQ(nums.at(g).size(), 11u);
        for (int n = 0; n <= 10; ++n) EXPECT_EQ(v[n], nums.at(g)[n]) << "g=" << g << " n=" << n;
    }
}

TEST(ReferenceTables, PolynomialsMatchNumericTable) {
    auto fs = reftables::fn_polynomials();
    auto nums = reftables::euler_characteristics();
    for (const auto& [n, F] : fs) {
        EXPECT_LE(F.degree(), fn_degree_bound(n));
        for (const auto& [g, row] : nums) EXPECT_EQ(F.eval(g), row[n]) << "n=" << n << " g=" << g;
    }
}

TEST(Interpolation, RecoversLowDegreePolynomialsFromTable) {
    auto fs = reftables::fn_polynomials();
    auto nums = reftables::euler_characteristics();
    for (int n = 4; n <= 7; ++n) {
        std::vector<std::pair<Rational, Rational>> pts;
        for (const auto& [g, row] : nums) pts.push_back({Rational(g), row[n]});
        ASSERT_GT(static_cast<int>(pts.size()), fn_degree_bound(n) + 1);
        EXPECT_EQ(interpolate_Fn(pts, fn_degree_bound(n)), fs.at(n)) << "n=" << n;
    }
}

TEST(Interpolation, DegreeBoundsAndErrors) {
    EXPECT_EQ(fn_degree_bound(4), 2);
    EXPECT_EQ(fn_degree_bound(5), 2);
    EXPECT_EQ(fn_degree_bound(8), 6);
    EXPECT_EQ(fn_degree_bound(9), 6);
    EXPECT_EQ(fn_degree_bound(1), 0);
    std::vector<std::pair<Rational, Rational>> line{{0, 1}, {1, 3}, {2, 5}, {3, 8}};
    EXPECT_THROW(interpolate(line, 1), ConsistencyError);
    line.pop_back();
    EXPECT_EQ(interpolate(line, 1), PolynomialQ({1, 2}));
    EXPECT_THROW(interpolate(line, 3), InputError);
    EXPECT_THROW(interpolate({{1, 1}, {1, 2}}, 1), InputError);
}

TEST(PolynomialQ, ArithmeticAndGcd) {
    PolynomialQ a({-1, 0, 1}), b({1, 1});
    auto [q, r] = PolynomialQ::divmod(a, b);
    EXPECT_EQ(q, PolynomialQ({-1, 1}));
    EXPECT_TRUE(r.is_zero());
    EXPECT_EQ(PolynomialQ::gcd(a, PolynomialQ({1, 2, 1})), b);
    EXPECT_EQ(RationalFunction1V(a, b), RationalFunction1V(PolynomialQ({-1, 1}), PolynomialQ({1})));
}
