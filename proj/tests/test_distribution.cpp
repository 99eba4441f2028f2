#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace sepdist;

namespace {

SparsePoly v(std::size_t n, std::size_t i) { return SparsePoly::variable(n, i); }

ExactVector vec(std::initializer_list<long> xs) {
    ExactVector r;
    for (long x : xs) r.emplace_back(x);
    return r;
}

}  // namespace

TEST(CoefficientTable, PairOfForms) {
    auto d = oracle::load("pair.json");
    auto t = coefficient_table(d);
    ASSERT_EQ(t.entries.size(), 1u);
    EXPECT_EQ(t.entries.begin()->second, vec({1, 1}));
    auto wk = wd_and_kappa(t);
    EXPECT_EQ(wk.kappa, 1u);
    EXPECT_TRUE(same_span(wk.basis, {vec({1, 1})}));
}

TEST(FirstIntegrals, Darboux) {
    auto fi = first_integrals(oracle::darboux());
    EXPECT_EQ(fi.kappa, 0u);
    EXPECT_TRUE(fi.H.empty());
}

TEST(FirstIntegrals, ClosedForm) {
    auto d = oracle::load("closed.json");
    auto fi = first_integrals(d);
    ASSERT_EQ(fi.kappa, 1u);
    SparsePoly want = v(3, 2) - v(3, 0) * v(3, 1);
    // H is determined up to scale by the row of T
    ExactScalar s = fi.H[0].coeff(MultiIndex{0, 0, 1});
    EXPECT_EQ(fi.H[0], want * s);
    EXPECT_TRUE(fi.wd_basis.empty());
}

TEST(FirstIntegrals, Pair) {
    auto d = oracle::load("pair.json");
    auto fi = first_integrals(d);
    ASSERT_EQ(fi.kappa, 1u);
    ExactScalar s = fi.T[0][0];
    EXPECT_EQ(fi.T[0], (ExactVector{s, -s}));
    SparsePoly want = v(4, 2) - v(4, 3) + v(4, 0) * v(4, 1);
    EXPECT_EQ(fi.H[0], want * s);
}

TEST(FirstIntegrals, HIsAnnihilatedByEveryLiftOnRandomInput) {
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 30; ++t) {
        auto d = oracle::random_distribution(rng, 3, 3, 3, 3);
        auto fi = first_integrals(d);
        EXPECT_EQ(fi.kappa + fi.wd_basis.size(), d.N);
        EXPECT_EQ(fi.T.size(), fi.kappa);
        for (auto& row : fi.T)
            for (auto& w : fi.wd_basis) {
                ExactScalar dot;
                for (std::size_t n = 0; n < d.N; ++n) dot += row[n] * w[n];
                EXPECT_TRUE(dot.is_zero());
            }
        for (auto& h : fi.H)
            for (std::size_t i = 0; i < d.M; ++i) EXPECT_TRUE(coordinate_lift(d, i).apply(h).is_zero());
    }
}

TEST(IsFirstIntegral, Examples) {
    auto d = oracle::load("closed.json");
    SparsePoly x = v(3, 0), y = v(3, 1), z = v(3, 2), one = SparsePoly::constant(3, 1);
    EXPECT_TRUE(is_first_integral(d, z - x * y, one));
    EXPECT_FALSE(is_first_integral(d, z, one));
    EXPECT_TRUE(is_first_integral(d, (z - x * y) * (z - x * y), one));
    SparsePoly h = z - x * y;
    EXPECT_TRUE(is_first_integral(d, h, h + one));
    EXPECT_THROW(is_first_integral(d, z, SparsePoly(3)), std::invalid_argument);
    auto dd = oracle::darboux();
    SparsePoly X = v(3, 0), Z = v(3, 2), ONE = SparsePoly::constant(3, 1);
    EXPECT_FALSE(is_first_integral(dd, Z, ONE));
    EXPECT_TRUE(is_first_integral(dd, ONE, ONE));
    EXPECT_FALSE(is_first_integral(dd, X, ONE));
}

TEST(BracketSpan, Examples) {
    EXPECT_TRUE(same_span(bracket_span(oracle::darboux(), 1), {vec({1})}));
    EXPECT_TRUE(bracket_span(oracle::load("closed.json"), 3).empty());
    EXPECT_TRUE(same_span(bracket_span(oracle::load("pair.json"), 2), {vec({1, 1})}));
    EXPECT_THROW(bracket_span(oracle::darboux(), 0), std::invalid_argument);
}

TEST(BracketSpan, HigherBracketsNeededWhenDegreeIsHigher) {
    // dz = x^2 dy: [X_1, X_2] vanishes at 0, [X_1, [X_1, X_2]] does not
    OneForm w(2);
    w[1] = v(2, 0) * v(2, 0);
    SeparatedDistribution d(2, {w});
    EXPECT_TRUE(bracket_span(d, 1).empty());
    EXPECT_TRUE(same_span(bracket_span(d, 2), {vec({1})}));
}

TEST(BracketSpan, AgreesWithCoefficientSpanOnRandomInput) {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 15; ++t) {
        auto d = oracle::random_distribution(rng, 3, 2, 2, 2);
        int depth = std::max(1, d.max_degree());
        EXPECT_TRUE(same_span(bracket_span(d, depth), first_integrals(d).wd_basis));
    }
}

TEST(Distribution, RejectsInconsistentArity) {
    OneForm w(3);
    EXPECT_THROW(SeparatedDistribution(2, {w}), std::invalid_argument);
}
