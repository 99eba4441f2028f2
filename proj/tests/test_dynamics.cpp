#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace sepdist;

namespace {

const double pi = std::numbers::pi;

FoliationY two_poles(ExactScalar nu0, ExactScalar nu1 = ExactScalar(Rational(1, 3))) {
    return build_Y({ExactScalar(0), ExactScalar(3)}, {{nu0, nu1}});
}

std::vector<Generator> mloop_generators(std::size_t M, const CVector& base, const std::vector<CVector>& ys) {
    std::vector<Generator> g;
    for (auto& y : ys) {
        std::vector<int> m(M, -1);
        m[0] = 1;
        g.push_back({"g", PiecewisePath::conjugated_m_loop(base, y, m)});
    }
    return g;
}

const SynthesisResult& contact3() {
    static const SynthesisResult r = synthesize_Z(oracle::load("contact3.json"));
    return r;
}

}  // namespace

TEST(Holonomy, QuarterImaginaryResidue) {
    auto y = two_poles(ExactScalar(Rational(0), Rational(1, 4)));
    auto g = holonomy_numeric(y, 0, {1.0});
    EXPECT_NEAR(std::abs(g[0] - std::exp(-pi / 2)), 0, 1e-9);
    EXPECT_NEAR(std::exp(-pi / 2), 0.207880, 1e-6);
    EXPECT_NEAR(std::abs(g[0] - holonomy_closed_form(y, 0, {1.0})[0]), 0, 1e-9);
}

TEST(Holonomy, IntegerResidueIsTrivial) {
    auto y = two_poles(ExactScalar(1));
    State z{Complex(0.3, -0.4)};
    auto g = holonomy_numeric(y, 0, z);
    EXPECT_NEAR(std::abs(g[0] - z[0]), 0, 1e-9 * std::abs(z[0]));
}

TEST(Holonomy, MatchesClosedFormOnSecondPole) {
    auto y = build_Y({ExactScalar(0), ExactScalar(1), ExactScalar(-1, 1)},
                     {{ExactScalar(1, 1), ExactScalar(Rational(-1, 2), Rational(1, 3)), ExactScalar(2)},
                      {ExactScalar(0, 1), ExactScalar(Rational(3, 2)), ExactScalar(-1, -1)}});
    State z{Complex(0.2, 0.1), Complex(-0.5, 0.3)};
    for (std::size_t j = 0; j < 3; ++j) {
        auto num = holonomy_numeric(y, j, z);
        auto cf = holonomy_closed_form(y, j, z);
        for (std::size_t i = 0; i < 2; ++i) EXPECT_LE(std::abs(num[i] - cf[i]), 1e-6 * std::abs(cf[i]));
    }
}

TEST(Holonomy, InverseLoopRestores) {
    auto y = two_poles(ExactScalar(Rational(1, 5), Rational(1, 7)));
    State z{Complex(0.7, 0.2)};
    auto there = holonomy_numeric(y, 0, z, 1);
    auto back = holonomy_numeric(y, 0, there, -1);
    EXPECT_NEAR(std::abs(back[0] - z[0]), 0, 1e-8);
}

TEST(Holonomy, TighterToleranceMovesLittle) {
    auto y = two_poles(ExactScalar(Rational(1, 3), Rational(1, 2)));
    State z{Complex(0.5, 0.5)};
    IntegratorTolerance loose{1e-9, 1e-9, 0.05}, tight{5e-10, 5e-10, 0.05};
    auto a = holonomy_numeric(y, 0, z, 1, loose), b = holonomy_numeric(y, 0, z, 1, tight);
    EXPECT_LT(std::abs(a[0] - b[0]), 10 * 1e-9 * std::max(1.0, std::abs(a[0])));
}

TEST(Holonomy, PoleRadiusIsHalfTheGap) {
    auto y = build_Y({ExactScalar(0), ExactScalar(3), ExactScalar(1)}, {{ExactScalar(1), ExactScalar(1), ExactScalar(1)}});
    EXPECT_DOUBLE_EQ(pole_radius(y), 0.5);
    EXPECT_EQ(holonomy_base(y, 1), Complex(3.5, 0));
}

TEST(Contraction, PositiveImaginaryPartsContract) {
    auto y = two_poles(ExactScalar(Rational(1, 3), Rational(1, 10)), ExactScalar(Rational(0), Rational(1, 5)));
    auto r = contraction_check(y, {0, 1}, 30);
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(r.delta, std::exp(-2 * pi * 0.1), 1e-12);
    EXPECT_LT(r.max_ratio, 1);
}

TEST(Contraction, RealColumnFails) {
    auto y = two_poles(ExactScalar(Rational(1, 3)), ExactScalar(Rational(0), Rational(1, 5)));
    auto r = contraction_check(y, {0, 1}, 10);
    EXPECT_FALSE(r.pass);
    EXPECT_DOUBLE_EQ(r.delta, 1.0);
}

TEST(Contraction, DeltaDecreasesWithImaginaryPart) {
    double last = 2;
    for (int q = 1; q <= 5; ++q) {
        auto y = two_poles(ExactScalar(Rational(0), Rational(q, 20)), ExactScalar(Rational(0), Rational(1)));
        double delta = contraction_check(y, {0}, 2).delta;
        EXPECT_LT(delta, last);
        last = delta;
    }
}

TEST(Contraction, SynthesizedFieldContracts) {
    auto& r = contact3();
    std::vector<std::size_t> cols;
    std::size_t m = r.tl.T.size(), n = r.mu.mu.front().size();
    for (std::size_t j = m; j < m + n; ++j) cols.push_back(j);
    auto c = contraction_check(r.Y, cols, 30);
    EXPECT_TRUE(c.pass) << c.delta << " " << c.max_ratio;
}

TEST(LeafLoop, TangentToX) {
    auto& r = contact3();
    auto gens = leaf_generators(r, default_base_point(r.down.S_factors, r.d.M));
    ASSERT_FALSE(gens.empty());
    auto loop = leaf_loop(r.Y, 0, r.tl.lambda[0], CVector{0.01, Complex(0.03, 0.01)});
    EXPECT_TRUE(loop.is_closed(1e-10));
    for (double t : {0.1, 0.37, 0.8}) {
        CVector x = loop.segments()[0].point(t), v = loop.segments()[0].velocity(t);
        CVector X = r.down.X.evaluate(x);
        // v parallel to X
        Complex det = v[0] * X[1] - v[1] * X[0];
        EXPECT_LE(std::abs(det), 1e-8 * oracle::norm(v) * oracle::norm(X));
    }
}

TEST(AccumulateReturns, DarbouxStokes) {
    auto d = oracle::darboux();
    CVector base{0.05, 0.05};
    std::vector<CVector> ys{{0.2, Complex(0.1, 0.1)}, {Complex(0, 0.3), 0.15}};
    auto gens = mloop_generators(2, base, ys);
    SimConfig cfg;
    cfg.budget = 200;
    auto run = accumulate_returns(d, gens, cfg);
    for (std::size_t g = 0; g < 2; ++g) {
        Complex want = -2.0 * pi * Complex(0, 1) * ys[g][0] * ys[g][1];
        EXPECT_NEAR(std::abs(run.generator_displacements[g][0] - want), 0, 1e-12);
    }
    EXPECT_EQ(run.records.size(), 200u);
    for (auto& rec : run.records) {
        Complex sum = 0;
        for (int w : rec.word) sum += double(w > 0 ? 1 : -1) * run.generator_displacements[std::abs(w) - 1][0];
        EXPECT_NEAR(std::abs(rec.displacement[0] - sum), 0, 1e-12);
    }
}

TEST(AccumulateReturns, ExactFormCollapses) {
    auto d = oracle::load("closed.json");
    auto gens = mloop_generators(2, {0.05, 0.05}, {{0.2, 0.2}, {Complex(0, 0.2), 0.1}});
    SimConfig cfg;
    cfg.budget = 50;
    auto run = accumulate_returns(d, gens, cfg);
    for (auto& g : run.generator_displacements) EXPECT_LT(oracle::norm(g), 1e-12);
    EXPECT_EQ(run.records.size(), 1u);
    auto rep = density_report(d, run.records, cfg);
    EXPECT_EQ(rep.cells_hit, 1u);
}

TEST(AccumulateReturns, PairStaysInWd) {
    auto d = oracle::load("pair.json");
    auto gens = mloop_generators(2, {0.05, 0.05}, {{0.2, Complex(0.1, 0.1)}, {Complex(0, 0.3), 0.15}});
    SimConfig cfg;
    cfg.budget = 300;
    auto run = accumulate_returns(d, gens, cfg);
    EXPECT_LE(run.max_residual, 1e-8);
    std::vector<CVector> q{{1 / std::sqrt(2.0), 1 / std::sqrt(2.0)}};
    for (auto& r : run.records)
        EXPECT_LE(projection_residual(q, r.displacement), 1e-8 * (1 + oracle::norm(r.displacement)));
}

TEST(AccumulateReturns, GuardSkipsFarSteps) {
    auto d = oracle::darboux();
    auto gens = mloop_generators(2, {0.05, 0.05}, {{0.5, 0.5}});
    SimConfig cfg;
    cfg.fiber_radius = 3;
    cfg.budget = 1000;
    auto run = accumulate_returns(d, gens, cfg);
    EXPECT_GT(run.guard_skipped, 0u);
    for (auto& r : run.records) EXPECT_LT(oracle::norm(r.z), 3);
}

TEST(DensityReport, SingleRecordIsOneCell) {
    auto d = oracle::darboux();
    SimConfig cfg;
    ReturnRecord r{{}, {0.0}, {Complex(0.01, 0.01)}};
    auto rep = density_report(d, {r}, cfg);
    EXPECT_EQ(rep.cells_hit, 1u);
    // centers of the 8 x 8 grid with |c| <= 0.2
    std::size_t inside = 0;
    for (int a = -4; a < 4; ++a)
        for (int b = -4; b < 4; ++b)
            inside += std::hypot((a + 0.5) * 0.05, (b + 0.5) * 0.05) <= 0.2;
    EXPECT_EQ(rep.cells_total, inside);
    EXPECT_DOUBLE_EQ(rep.fraction, 1.0 / double(inside));
    EXPECT_EQ(rep.dimension, 2u);
}

TEST(DensityReport, SynthesizedLeavesFillTheDisc) {
    auto& r = contact3();
    SimConfig cfg;
    cfg.p = default_base_point(r.down.S_factors, r.d.M);
    cfg.budget = 2000;
    auto run = accumulate_returns(r.d, leaf_generators(r, cfg.p), cfg);
    EXPECT_EQ(run.guard_skipped, 0u);
    auto rep = density_report(r.d, run.records, cfg);
    EXPECT_GT(rep.fraction, 0.5);
}

TEST(DefaultBasePoint, AvoidsS) {
    auto& r = contact3();
    auto p = default_base_point(r.down.S_factors, r.d.M);
    for (auto& f : r.down.S_factors) EXPECT_GT(std::abs(f.evaluate(p)), 1e-6);
}

TEST(Probe, TargetIsAMultiplier) {
    auto mult = mu_multipliers(generate_mu(2).mu);
    auto res = subgroup_density_probe(mult, mult[1], 5);
    EXPECT_NEAR(res.error, 0, 1e-14);
    EXPECT_EQ(res.length, 1);
}

TEST(Probe, ReachesTargetAndAgreesWithBruteForce) {
    std::vector<Complex> scalars;
    for (auto& m : mu_multipliers(generate_mu(2).mu)) scalars.push_back(m[0]);
    std::vector<CVector> mult;
    for (auto s : scalars) mult.push_back({s});
    Complex target(0.5, 0.1);
    auto res = subgroup_density_probe(mult, {target}, 40);
    EXPECT_LT(res.error, 0.01);
    auto small = subgroup_density_probe(mult, {target}, 12);
    EXPECT_NEAR(small.error, oracle::brute_force_probe(scalars, target, 12), 1e-12);
    EXPECT_LE(res.error, small.error);
}

TEST(Probe, IrrationalRotation) {
    Complex rot = std::exp(two_pi_i * std::sqrt(2.0));
    Complex target = std::exp(Complex(0, 1.0));
    auto res = subgroup_density_probe({{rot}}, {target}, 200);
    EXPECT_LT(res.error, 0.01);
    EXPECT_THROW(subgroup_density_probe({{0.0}}, {target}, 3), std::invalid_argument);
}
