#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "eyam/conformal.hpp"
#include "eyam/energy.hpp"
#include "eyam/normalize.hpp"
#include "eyam/yamabe.hpp"

using namespace eyam;

namespace {

YamabeOptions quick() {
  YamabeOptions o;
  o.max_iters = 400;
  o.restarts = 4;
  o.seed = 5;
  return o;
}

RegionPair empty_region(const RadialGrid& g) {
  RegionPair e = full_region(g);
  std::fill(e.omega_mask.begin(), e.omega_mask.end(), 0);
  e.sigma_included = false;
  return e;
}

}  // namespace

TEST(Yamabe, FlatPositive) {
  auto g = build_grid(3, 1000.0, 256);
  const auto rep = yamabe_infimum(flat_metric(g), full_region(*g), {6, 4, 1}, quick());
  EXPECT_EQ(rep.sign, Sign::kPositive);
  ASSERT_TRUE(rep.minimizer.has_value());
  const auto& u = *rep.minimizer;
  const auto m = flat_metric(g);
  const double c = lq_power(m, full_region(*g), u, 6.0) + trace_power(m, full_region(*g), u, 4.0);
  EXPECT_NEAR(c, 1.0, 1e-10);
  EXPECT_NEAR(energy(m, full_region(*g), u).total, rep.value, 1e-10 * std::abs(rep.value));
}

TEST(Yamabe, WellNegative) {
  auto g = build_grid(3, 1000.0, 256);
  const auto rep = yamabe_infimum(well_metric(g, 1.0, 2.0, 50.0), full_region(*g), {6, 4, 1}, quick());
  EXPECT_EQ(rep.sign, Sign::kNegative);
  EXPECT_LT(rep.value, 0.0);
}

TEST(Yamabe, EmptyPairIsInfinite) {
  auto g = build_grid(3, 100.0, 64);
  const auto rep = yamabe_infimum(flat_metric(g), empty_region(*g), {6, 4, 1}, quick());
  EXPECT_TRUE(std::isinf(rep.value));
  EXPECT_EQ(rep.sign, Sign::kInfinite);
}

TEST(Yamabe, RejectsExponents) {
  auto g = build_grid(3, 100.0, 64);
  const auto m = flat_metric(g);
  EXPECT_THROW(yamabe_infimum(m, full_region(*g), {7, 4, 1}, quick()), std::invalid_argument);
  EXPECT_THROW(yamabe_infimum(m, full_region(*g), {6, 5, 1}, quick()), std::invalid_argument);
  EXPECT_THROW(yamabe_infimum(m, full_region(*g), {6, 1.5, 1}, quick()), std::invalid_argument);
  EXPECT_THROW(yamabe_infimum(m, full_region(*g), {1.5, 1.2, 1}, quick()), std::invalid_argument);
}

TEST(Yamabe, DefaultStarts) {
  auto g = build_grid(3, 100.0, 128);
  auto o = quick();
  o.restarts = 6;
  const auto reg = region_from_intervals(*g, {{2.0, 10.0}}, false);
  const auto s = default_starts(flat_metric(g), reg, o);
  ASSERT_GE(s.size(), 4u);
  EXPECT_EQ(s.size(), static_cast<std::size_t>(o.restarts));
  const auto fr = free_nodes(*g, reg);
  for (const auto& u : s)
    for (std::size_t i = 0; i < g->size(); ++i)
      if (!fr[i]) EXPECT_EQ(u.values[i], 0.0);
  const auto again = default_starts(flat_metric(g), reg, o);
  for (std::size_t k = 0; k < s.size(); ++k) EXPECT_EQ(s[k].values, again[k].values);
}

TEST(Yamabe, EnergyScalesQuadratically) {
  auto g = build_grid(3, 100.0, 128);
  const auto m = well_metric(g, 1.0, 2.0, 9.0);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const double a = U(rng), b = U(rng);
    const auto v = GridFunction::sample(g, [&](double r) { return a / r + b * std::exp(1.0 - r); });
    const ExponentTriple t{3.0 + 3.0 * U(rng), 2.0 + U(rng), 2.0 * U(rng) - 0.5};
    const auto p = project_to_constraint(v, m, full_region(*g), t);
    const double Eu = energy(m, full_region(*g), p.ku).total;
    const double Ev = energy(m, full_region(*g), v).total;
    EXPECT_NEAR(Eu, p.k * p.k * Ev, 1e-12 * std::abs(Eu));
  }
}

TEST(Yamabe, NegativeWitnessIsPortable) {
  auto g = build_grid(3, 1000.0, 256);
  const auto m = well_metric(g, 1.0, 2.0, 50.0);
  const auto full = full_region(*g);
  const auto rep = yamabe_infimum(m, full, {6, 4, 1}, quick());
  ASSERT_LT(rep.value, 0.0);
  const auto& w = *rep.minimizer;
  for (ExponentTriple t : {ExponentTriple{6, 2, -1}, ExponentTriple{6, 3, 0}, ExponentTriple{5, 3, 5},
                           ExponentTriple{3, 2, 1}}) {
    const auto p = project_to_constraint(w, m, full, t);
    EXPECT_LT(energy(m, full, p.ku).total, 0.0);
  }
}

TEST(Yamabe, MonotoneUnderInclusion) {
  auto g = build_grid(3, 1000.0, 256);
  const auto m = well_metric(g, 1.0, 2.0, 30.0);
  const auto o = quick();
  const auto small = region_from_intervals(*g, {{1.0, 5.0}}, false);
  const auto big = full_region(*g);
  // Shared starts from the smaller pair are admissible for the larger one.
  const auto starts = default_starts(m, small, o);
  const auto ys = yamabe_infimum(m, small, {6, 4, 0}, o, &starts);
  const auto yb = yamabe_infimum(m, big, {6, 4, 0}, o, &starts);
  EXPECT_GE(ys.value, yb.value - o.tol_grad);
}

TEST(Classify, Examples) {
  auto g = build_grid(3, 1000.0, 512);
  EXPECT_EQ(classify_sign(flat_metric(g), full_region(*g), {0.0, -0.25}), Sign::kPositive);
  EXPECT_EQ(classify_sign(well_metric(g, 1.0, 2.0, 50.0), full_region(*g), {0.0, -0.25}), Sign::kNegative);
  EXPECT_EQ(classify_sign(flat_metric(g), empty_region(*g), {0.0}), Sign::kPositive);
  EXPECT_THROW(classify_sign(flat_metric(g), full_region(*g), {}), std::invalid_argument);
  EXPECT_THROW(classify_sign(flat_metric(g), full_region(*g), {-0.6}), std::invalid_argument);
  const auto d = classify_sign_detailed(flat_metric(g), full_region(*g), {0.0, 0.3});
  EXPECT_EQ(d.reports.size(), 2u);
  EXPECT_EQ(d.deltas, (std::vector<double>{0.0, 0.3}));
}

TEST(Classify, StableUnderRefinement) {
  for (int N : {256, 512, 1024}) {
    auto g = build_grid(3, 1000.0, N);
    EXPECT_EQ(classify_sign(flat_metric(g), full_region(*g), {0.0, -0.25}), Sign::kPositive) << N;
    EXPECT_EQ(classify_sign(well_metric(g, 1.0, 2.0, 50.0), full_region(*g), {0.0, -0.25}), Sign::kNegative) << N;
  }
}

TEST(Classify, AgreesWithYamabeSign) {
  auto g = build_grid(3, 1000.0, 256);
  for (double depth : {0.0, 3.0, 50.0}) {
    const auto m = well_metric(g, 1.0, 2.0, depth);
    const auto y = yamabe_infimum(m, full_region(*g), {6, 4, 1}, quick());
    EXPECT_EQ(classify_sign(m, full_region(*g), {0.0}), y.sign) << depth;
  }
}

TEST(SignSuite, SingleCell) {
  auto g = build_grid(3, 1000.0, 128);
  const auto t = sign_independence_suite(flat_metric(g), full_region(*g), {1.0}, {4.0}, quick());
  ASSERT_EQ(t.cells.size(), 1u);
  EXPECT_TRUE(t.all_equal);
  EXPECT_EQ(t.cells[0].sign, Sign::kPositive);
}

TEST(SignSuite, WellAllNegative) {
  auto g = build_grid(3, 1000.0, 128);
  const auto t = sign_independence_suite(well_metric(g, 1.0, 2.0, 50.0), full_region(*g), {-1.0, 0.0, 5.0},
                                         {2.0, 4.0}, quick(), 3);
  EXPECT_TRUE(t.all_equal);
  for (const auto& c : t.cells) EXPECT_EQ(c.sign, Sign::kNegative);
}

TEST(ConformalCheck, IdentityFactorExact) {
  auto g = build_grid(3, 1000.0, 128);
  const auto c = conformal_invariance_check(flat_metric(g), full_region(*g), GridFunction::constant(g, 1.0), 4.0, quick());
  EXPECT_EQ(c.v1, c.v2);
  EXPECT_EQ(c.rel_diff, 0.0);
}

TEST(ConformalCheck, RejectsNonpositiveFactor) {
  auto g = build_grid(3, 1000.0, 64);
  auto phi = GridFunction::constant(g, 1.0);
  phi.values[3] = -1.0;
  EXPECT_THROW(conformal_invariance_check(flat_metric(g), full_region(*g), phi, 4.0, quick()), std::invalid_argument);
}

TEST(ConformalCheck, EnergyIdentity) {
  // E_{g'}(u) = E_g(phi u) up to the discretization of the curvature read-back.
  auto g = build_grid(3, 1000.0, 1024);
  const double h2 = g->log_step() * g->log_step();
  const auto m = flat_metric(g);
  const auto phi = GridFunction::sample(g, [](double r) { return 1.0 + 0.5 / r; }, 1.0);
  const auto mp = apply_conformal(m, phi);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int k = 0; k < 5; ++k) {
    const double a = U(rng), b = U(rng);
    const auto u = GridFunction::sample(g, [&](double r) { return a / r + b * std::exp(1.0 - r); });
    std::vector<double> pu(g->size());
    for (std::size_t i = 0; i < pu.size(); ++i) pu[i] = phi.values[i] * u.values[i];
    const auto e1 = energy(mp, full_region(*g), u);
    const auto e2 = energy(m, full_region(*g), GridFunction(g, pu));
    const double scale = std::abs(e1.dirichlet) + std::abs(e1.interior_R) + std::abs(e1.boundary_H) +
                         std::abs(e2.dirichlet) + std::abs(e2.boundary_H);
    EXPECT_LE(std::abs(e1.total - e2.total), 10.0 * h2 * scale);
  }
}
