#include <gtest/gtest.h>

#include <cmath>

#include "eyam/calculus.hpp"
#include "eyam/conformal.hpp"

using namespace eyam;

namespace {

GridFunction harmonic(const GridPtr& g, double a) {
  return GridFunction::sample(g, [a](double r) { return 1.0 + a / r; }, 1.0);
}

double closed_form_H(double a) { return (3.0 * a + 1.0) / std::pow(1.0 + a, 3.0); }

}  // namespace

TEST(Curvatures, HarmonicFactors) {
  auto g = build_grid(3, 1000.0, 1024);
  const double h2 = g->log_step() * g->log_step();
  const auto m = flat_metric(g);
  for (double a : {-0.5, 0.5, -0.2}) {
    const auto phi = harmonic(g, a);
    const auto t = conformal_curvatures(m, phi);
    const auto sc = readback_scale(m, phi);
    for (std::size_t i = 0; i < g->size(); ++i) EXPECT_LE(std::abs(t.Rp[i]), 10.0 * h2 * sc.R[i]) << i;
    EXPECT_NEAR(t.Hp, closed_form_H(a), 10.0 * h2 * sc.H);
  }
  EXPECT_NEAR(conformal_curvatures(m, harmonic(g, -0.5)).Hp, -4.0, 1e-3);
  EXPECT_NEAR(conformal_curvatures(m, harmonic(g, 0.5)).Hp, 0.7407, 1e-3);
}

TEST(Curvatures, ReadbackConverges) {
  std::vector<double> err;
  for (int N : {256, 512, 1024}) {
    auto g = build_grid(3, 1000.0, N);
    err.push_back(std::abs(conformal_curvatures(flat_metric(g), harmonic(g, -0.5)).Hp + 4.0));
  }
  EXPECT_GE(std::log2(err[0] / err[1]), 1.7);
  EXPECT_GE(std::log2(err[1] / err[2]), 1.7);
}

TEST(Curvatures, IdentityFactor) {
  auto g = build_grid(3, 100.0, 128);
  auto m = well_metric(g, 1.0, 2.0, 5.0);
  m.H = -0.3;
  const auto t = conformal_curvatures(m, GridFunction::constant(g, 1.0));
  EXPECT_EQ(t.Rp, m.R);
  EXPECT_EQ(t.Hp, m.H);
  const auto m2 = apply_conformal(m, GridFunction::constant(g, 1.0));
  EXPECT_EQ(m2.phi, m.phi);
  EXPECT_EQ(m2.R, m.R);
  EXPECT_EQ(m2.H, m.H);
}

TEST(Curvatures, Rejections) {
  auto g = build_grid(3, 100.0, 64);
  const auto m = flat_metric(g);
  auto bad = GridFunction::constant(g, 1.0);
  bad.values[5] = 0.0;
  EXPECT_THROW(conformal_curvatures(m, bad), std::invalid_argument);
  bad.values[5] = -0.1;
  EXPECT_THROW(apply_conformal(m, bad), std::invalid_argument);
  EXPECT_THROW(conformal_curvatures(m, GridFunction::constant(g, 2.0)), std::invalid_argument);
}

TEST(Curvatures, CompositionLaw) {
  auto g = build_grid(3, 1000.0, 1024);
  const double h2 = g->log_step() * g->log_step();
  const auto m = flat_metric(g);
  const auto p1 = GridFunction::sample(g, [](double r) { return 1.0 + 0.3 / r + 0.2 * std::exp(1.0 - r); }, 1.0);
  const auto p2 = GridFunction::sample(g, [](double r) { return 1.0 - 0.2 / r + 0.1 / (r * r); }, 1.0);
  std::vector<double> prod(g->size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = p1.values[i] * p2.values[i];
  const auto p12 = GridFunction(g, prod, 1.0);

  const auto twice = apply_conformal(apply_conformal(m, p1), p2);
  const auto once = apply_conformal(m, p12);
  const auto sc = readback_scale(m, p12);
  for (std::size_t i = 0; i < g->size(); ++i) {
    EXPECT_NEAR(twice.phi[i], once.phi[i], 1e-14);
    EXPECT_NEAR(twice.R[i], once.R[i], 10.0 * h2 * sc.R[i]) << i;
  }
  EXPECT_NEAR(twice.H, once.H, 10.0 * h2 * sc.H);
}

TEST(Curvatures, FieldsOverride) {
  auto g = build_grid(3, 100.0, 64);
  const auto m = flat_metric(g);
  const auto phi = harmonic(g, 0.2);
  std::vector<double> R(g->size(), -2.0);
  const auto out = conformal_with_fields(m, phi, R, -0.5);
  EXPECT_EQ(out.R, R);
  EXPECT_EQ(out.H, -0.5);
  for (std::size_t i = 0; i < g->size(); ++i) EXPECT_EQ(out.phi[i], phi.values[i]);
}

TEST(Mms, Examples) {
  auto g = build_grid(3, 1000.0, 512);
  const auto c = mms_case(g, -0.5);
  EXPECT_EQ(c.target.Hp, -4.0);
  for (std::size_t i = 0; i < g->size(); ++i) {
    EXPECT_EQ(c.target.Rp[i], 0.0);
    EXPECT_NEAR(c.u_exact.values[i], -0.5 / g->nodes[i], 1e-15);
    EXPECT_EQ(c.phi.values[i], 1.0 + c.u_exact.values[i]);
  }
  const auto c0 = mms_case(g, 0.0);
  EXPECT_EQ(c0.target.Hp, 1.0);
  for (std::size_t i = 0; i < g->size(); ++i) {
    EXPECT_EQ(c0.phi.values[i], 1.0);
    EXPECT_EQ(c0.u_exact.values[i], 0.0);
  }
  EXPECT_NEAR(mms_case(g, -0.4).target.Hp, -0.2 / 0.216, 1e-12);
  EXPECT_NEAR(mms_case(g, -0.4).target.Hp, -0.9259, 1e-4);
  EXPECT_THROW(mms_case(g, -1.0), std::invalid_argument);
  EXPECT_THROW(mms_case(g, -2.0), std::invalid_argument);
}

TEST(Mms, Harmonicity) {
  auto g = build_grid(3, 1000.0, 512);
  const double h2 = g->log_step() * g->log_step();
  for (double a : {-0.5, -0.4, 0.7}) {
    const auto c = mms_case(g, a);
    const auto lap = laplacian(flat_metric(g), c.phi);
    for (std::size_t i = 0; i < g->size(); ++i) {
      const double r = g->nodes[i];
      // scale of |phi''| + 2 |phi'| / r
      EXPECT_LE(std::abs(lap.values[i]), 10.0 * h2 * 4.0 * std::abs(a) / (r * r * r)) << i;
    }
  }
}

TEST(Mms, FourDimensions) {
  auto g = build_grid(4, 1000.0, 1024);
  const double h2 = g->log_step() * g->log_step();
  const auto c = mms_case(g, -0.3);
  const auto t = conformal_curvatures(flat_metric(g), c.phi);
  const auto sc = readback_scale(flat_metric(g), c.phi);
  EXPECT_NEAR(t.Hp, c.target.Hp, 10.0 * h2 * sc.H);
  for (std::size_t i = 0; i < g->size(); ++i) EXPECT_LE(std::abs(t.Rp[i]), 10.0 * h2 * sc.R[i]);
}

TEST(L2Delta, ClosedForm) {
  // int_1^R r^{-3} r^2 dr * 4 pi = 4 pi ln R for f = 1, delta = 0.
  auto g = build_grid(3, 1000.0, 512);
  const double n = l2_delta_norm(flat_metric(g), 0.0, std::vector<double>(g->size(), 1.0));
  EXPECT_NEAR(n * n, 4.0 * M_PI * std::log(1000.0), 10.0 * g->log_step() * g->log_step() * n * n);
}
