#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "eyam/assembly.hpp"
#include "eyam/calculus.hpp"
#include "eyam/fd.hpp"

using namespace eyam;

namespace {

GridFunction inv_r(const GridPtr& g) {
  return GridFunction::sample(g, [](double r) { return 1.0 / r; });
}

}  // namespace

TEST(WeightedNorm, InverseRadius) {
  auto g = build_grid(3, 1000.0, 512);
  const double R = g->r_max();
  const double h = g->log_step();
  const double l2 = std::sqrt(4.0 * M_PI * (1.0 - 1.0 / R));
  EXPECT_NEAR(weighted_norm(inv_r(g), {0, 2.0, -0.5}) / l2, 1.0, 10.0 * h * h);
  EXPECT_NEAR(weighted_norm(inv_r(g), {0, 2.0, -0.5}), std::sqrt(4.0 * M_PI), 1e-3 * std::sqrt(4.0 * M_PI));
  const double l6 = std::pow(4.0 * M_PI / 3.0 * (1.0 - std::pow(R, -3.0)), 1.0 / 6.0);
  EXPECT_NEAR(weighted_norm(inv_r(g), {0, 6.0, -0.5}) / l6, 1.0, 10.0 * h * h);
  EXPECT_NEAR(weighted_norm(inv_r(g), {0, 6.0, -0.5}), 1.2697, 1e-4);
}

TEST(WeightedNorm, ZeroFunction) {
  auto g = build_grid(4, 100.0, 64);
  for (int k = 0; k <= 2; ++k)
    for (double p : {1.0, 2.0, 3.5})
      for (double d : {-1.0, 0.0, 0.3}) EXPECT_EQ(weighted_norm(GridFunction::zeros(g), {k, p, d}), 0.0);
}

TEST(WeightedNorm, Rejections) {
  auto g = build_grid(3, 100.0, 64);
  EXPECT_THROW(weighted_norm(inv_r(g), {3, 2.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(weighted_norm(inv_r(g), {0, 0.5, 0.0}), std::invalid_argument);
}

TEST(WeightedNorm, SecondDerivativeTerm) {
  // The k = 2 term for u = 1/r is 4 pi int_1^R (2 r^-3)^2 r^4 dr = 16 pi (1 - 1/R).
  auto g = build_grid(3, 1000.0, 1024);
  const auto u = inv_r(g);
  const double w2 = std::pow(weighted_norm(u, {2, 2.0, -0.5}), 2.0);
  const double w1 = std::pow(weighted_norm(u, {1, 2.0, -0.5}), 2.0);
  const double exact = 16.0 * M_PI * (1.0 - 1.0 / g->r_max());
  EXPECT_NEAR(w2 - w1, exact, 10.0 * g->log_step() * g->log_step() * exact);
}

TEST(GradientNorm, Examples) {
  auto g = build_grid(3, 1000.0, 512);
  const double h = g->log_step();
  const auto flat = flat_metric(g);
  const double full = gradient_sq_norm(flat, full_region(*g), inv_r(g));
  EXPECT_NEAR(full / (4.0 * M_PI * (1.0 - 1.0 / g->r_max())), 1.0, 10.0 * h * h);
  EXPECT_EQ(gradient_sq_norm(well_metric(g, 1.0, 2.0, 3.0), full_region(*g), GridFunction::constant(g, 2.5)), 0.0);
  auto gi = build_grid(3, 2.0, 256);
  const double inner = gradient_sq_norm(flat_metric(gi), full_region(*gi), inv_r(gi));
  EXPECT_NEAR(inner, 2.0 * M_PI, 10.0 * gi->log_step() * gi->log_step() * 2.0 * M_PI);
  auto gu = build_grid(3, 10.0, 288, Spacing::kUniform);  // r = 2 is a node
  const double masked =
      gradient_sq_norm(flat_metric(gu), region_from_intervals(*gu, {{1.0, 2.0}}, true), inv_r(gu));
  EXPECT_NEAR(masked, 2.0 * M_PI, 10.0 * gu->log_step() * gu->log_step() * 2.0 * M_PI);
}

TEST(GradientNorm, ProductRuleIdentity) {
  auto g = build_grid(3, 1000.0, 256);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const double a = U(rng), b = U(rng), c = U(rng);
    const auto u = GridFunction::sample(g, [&](double r) { return a / r + b / (r * r) + c * std::exp(-r); });
    const double grad = gradient_sq_norm(flat_metric(g), full_region(*g), u);
    const double w1 = std::pow(weighted_norm(u, {1, 2.0, -0.5}), 2.0);
    const double l2 = std::pow(weighted_norm(u, {0, 2.0, -0.5}), 2.0);
    EXPECT_NEAR(grad, w1 - l2, 1e-10 * w1);
  }
}

TEST(Laplacian, ClosedForms) {
  auto g = build_grid(3, 1000.0, 512);
  const double h = g->log_step();
  const auto flat = flat_metric(g);
  // Errors are measured against |u''| + (n-1)|u'|/r.
  const auto l1 = laplacian(flat, inv_r(g));
  for (std::size_t i = 0; i < g->size(); ++i)
    EXPECT_LE(std::abs(l1.values[i]) * std::pow(g->nodes[i], 3.0), 10.0 * h * h * 4.0);
  const auto l2 = laplacian(flat, GridFunction::sample(g, [](double r) { return 1.0 / (r * r); }));
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double r = g->nodes[i];
    EXPECT_NEAR(l2.values[i] * std::pow(r, 4.0), 2.0, 10.0 * h * h * 10.0);
  }
  const auto l0 = laplacian(well_metric(g, 1.0, 3.0, 2.0), GridFunction::constant(g, 1.0));
  for (double v : l0.values) EXPECT_EQ(v, 0.0);
}

TEST(Laplacian, ConformalFactorScaling) {
  // phi = 1 + a/r: Lap_g u = phi^{-2qbar} (phi^2 u'' + (2 phi phi' + 2 phi^2 / r) u').
  auto g = build_grid(3, 1000.0, 1024);
  Metric m = flat_metric(g);
  for (std::size_t i = 0; i < g->size(); ++i) m.phi[i] = 1.0 + 0.3 / g->nodes[i];
  const auto u = GridFunction::sample(g, [](double r) { return std::exp(-r); });
  const auto L = laplacian(m, u);
  const double h = g->log_step();
  for (std::size_t i = 0; i < g->size(); i += 37) {
    const double r = g->nodes[i];
    const double p = 1.0 + 0.3 / r, dp = -0.3 / (r * r);
    const double up = -std::exp(-r), upp = std::exp(-r);
    const double exact = std::pow(p, -6.0) * (p * p * upp + (2.0 * p * dp + 2.0 * p * p / r) * up);
    const double scale = std::exp(-r) * (1.0 + 2.0 / r + 1.0);
    EXPECT_NEAR(L.values[i], exact, 10.0 * h * h * scale + 1e-12);
  }
}

TEST(NormalDerivative, Examples) {
  auto g = build_grid(3, 1000.0, 512);
  const double h = g->log_step();
  EXPECT_NEAR(normal_derivative_out(inv_r(g)), 1.0, 10.0 * h * h);
  EXPECT_EQ(normal_derivative_out(GridFunction::constant(g, 3.0)), 0.0);
  EXPECT_NEAR(normal_derivative_out(GridFunction::sample(g, [](double r) { return 1.0 - 0.5 / r; })), -0.5,
              10.0 * h * h);
}

TEST(NormalDerivative, SecondOrder) {
  std::vector<double> err;
  for (int N : {128, 256, 512}) {
    auto g = build_grid(3, 1000.0, N);
    err.push_back(std::abs(normal_derivative_out(GridFunction::sample(g, [](double r) { return std::sin(r) / r; })) -
                           (std::sin(1.0) - std::cos(1.0))));
  }
  EXPECT_GT(std::log2(err[0] / err[1]), 1.8);
  EXPECT_GT(std::log2(err[1] / err[2]), 1.8);
}

TEST(FiniteDifferences, FornbergExactOnQuadratics) {
  const std::vector<double> x{0.3, 0.7, 1.6, 2.0};
  const auto w = fornberg_weights(0.9, x, 2);
  double d1 = 0.0, d2 = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double f = 2.0 - 3.0 * x[j] + 1.5 * x[j] * x[j];
    d1 += w[1][j] * f;
    d2 += w[2][j] * f;
  }
  EXPECT_NEAR(d1, -3.0 + 3.0 * 0.9, 1e-12);
  EXPECT_NEAR(d2, 3.0, 1e-12);
}

TEST(DivergenceTheorem, DiscreteGreenIdentity) {
  auto g = build_grid(3, 1000.0, 1024);
  const auto flat = flat_metric(g);
  const auto full = full_region(*g);
  const auto a = assemble(flat, full);
  const auto u = GridFunction::sample(g, [](double r) { return std::exp(-(r - 1.0)); });
  const auto v = GridFunction::sample(g, [](double r) { return std::exp(-(r - 1.0) / 2.0) * (1.5 + std::sin(r)); });
  const auto lap = laplacian(flat, u);
  double vol = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) {
    vol += a.mass[i] * (-lap.values[i]) * v.values[i];
    scale += a.mass[i] * std::abs(lap.values[i] * v.values[i]);
  }
  const double bdry = normal_derivative_out(u) * v.trace() * a.area;
  const auto sum = GridFunction(g, [&] {
    std::vector<double> s(g->size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = u.values[i] + v.values[i];
    return s;
  }());
  const auto diff = GridFunction(g, [&] {
    std::vector<double> s(g->size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = u.values[i] - v.values[i];
    return s;
  }());
  const double grad = 0.25 * (gradient_sq_norm(flat, full, sum) - gradient_sq_norm(flat, full, diff));
  const double h = g->log_step();
  scale += std::abs(bdry) + std::abs(grad);
  EXPECT_LE(std::abs(vol + bdry - grad), 10.0 * h * h * scale);
}

TEST(Probe, InverseRadiusRatios) {
  auto g = build_grid(3, 1000.0, 1024);
  const auto s = inequality_ratios(inv_r(g));
  EXPECT_NEAR(s.poincare, 1.0, 1e-3);
  EXPECT_NEAR(s.sobolev, 1.2697 / 3.5449, 1e-3);
  const auto z = inequality_ratios(GridFunction::zeros(g));
  EXPECT_EQ(z.poincare, 0.0);
  EXPECT_EQ(z.sobolev, 0.0);
}

TEST(Probe, ScaleInvariance) {
  auto g = build_grid(3, 1000.0, 256);
  const auto u = GridFunction::sample(g, [](double r) { return 1.0 / r - 0.7 * std::pow(r, -1.7); });
  const auto s1 = inequality_ratios(u);
  for (double c : {-3.0, 0.01, 250.0}) {
    const auto s2 = inequality_ratios(u.scaled(c));
    EXPECT_NEAR(s2.poincare, s1.poincare, 1e-13 * s1.poincare);
    EXPECT_NEAR(s2.sobolev, s1.sobolev, 1e-13 * s1.sobolev);
  }
}

TEST(Probe, DeterministicAndBounded) {
  auto g = build_grid(3, 1000.0, 256);
  const auto a = probe_inequalities(g, 50, 9);
  const auto b = probe_inequalities(g, 50, 9);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  EXPECT_EQ(a.C1_hat, b.C1_hat);
  EXPECT_EQ(a.C2_hat, b.C2_hat);
  EXPECT_TRUE(std::isfinite(a.C1_hat));
  EXPECT_TRUE(std::isfinite(a.C2_hat));
  EXPECT_GT(a.C1_hat, 0.0);
}
