#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "eyam/normalize.hpp"

using namespace eyam;

namespace {

// Plain bisection on x^6 + x^4 = 1, written out here as the oracle.
double root_64() {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (lo + hi);
    (std::pow(m, 6) + std::pow(m, 4) < 1.0 ? lo : hi) = m;
  }
  return lo;
}

}  // namespace

TEST(UnitRoot, Examples) {
  EXPECT_EQ(unit_root(1.0, 0.0, 6.0, 4.0), 1.0);
  EXPECT_NEAR(unit_root(4.0, 0.0, 2.0, 1.5), 0.5, 1e-15);
  EXPECT_NEAR(unit_root(1.0, 1.0, 6.0, 4.0), root_64(), 1e-14);
  EXPECT_NEAR(unit_root(1.0, 1.0, 6.0, 4.0), 0.8688, 1e-4);
}

TEST(UnitRoot, EqualExponents) {
  EXPECT_NEAR(unit_root(2.0, 2.0, 3.0, 3.0), std::pow(0.25, 1.0 / 3.0), 1e-15);
  EXPECT_NEAR(unit_root(2.0, -1.0, 3.0, 3.0), 1.0, 1e-15);
}

TEST(UnitRoot, Rejections) {
  EXPECT_THROW(unit_root(0.0, 1.0, 6.0, 4.0), std::invalid_argument);
  EXPECT_THROW(unit_root(-1.0, 1.0, 6.0, 4.0), std::invalid_argument);
  EXPECT_THROW(unit_root(1.0, -1.0, 3.0, 3.0), std::invalid_argument);
  EXPECT_THROW(unit_root(1.0, -2.0, 3.0, 3.0), std::invalid_argument);
  EXPECT_THROW(unit_root(1.0, 0.0, 3.0, 4.0), std::invalid_argument);
}

TEST(UnitRoot, ResidualOnWellConditionedTuples) {
  // Roots in [0.1, 10] where a double can resolve the equation to 1e-12.
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int tested = 0;
  for (int k = 0; k < 5000; ++k) {
    const double a = std::pow(10.0, -1.0 + 2.0 * U(rng));
    const double b = -1.0 + 2.0 * U(rng);
    const double r = 1.1 + 3.0 * U(rng);
    const double q = r + 0.5 + 3.0 * U(rng);
    const double x = unit_root(a, b, q, r);
    if (x < 0.1 || x > 10.0) continue;
    ++tested;
    const long double xl = x;
    const long double res = a * std::pow(xl, (long double)q) + b * std::pow(xl, (long double)r) - 1.0L;
    EXPECT_LE(std::abs(res), 1e-12L) << a << " " << b << " " << q << " " << r;
  }
  EXPECT_GT(tested, 1000);
}

TEST(UnitRoot, MonotoneInB) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 2000; ++k) {
    const double a = std::pow(10.0, -3.0 + 6.0 * U(rng));
    const double r = 1.1 + 6.0 * U(rng);
    const double q = r + (8.0 - r) * U(rng) + 1e-3;
    const double b1 = -5.0 + 10.0 * U(rng), b2 = b1 + 2.0 * U(rng);
    EXPECT_GE(unit_root(a, b1, q, r), unit_root(a, b2, q, r));
  }
}

TEST(UnitRoot, Continuity) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    const double a = std::pow(10.0, -1.0 + 2.0 * U(rng));
    const double b = -1.0 + 2.0 * U(rng);
    const double r = 1.5 + 3.0 * U(rng);
    const double q = r + 1.0 + 2.0 * U(rng);
    const double x = unit_root(a, b, q, r);
    const double d3 = std::abs(unit_root(a, b + 1e-3, q, r) - x);
    const double d6 = std::abs(unit_root(a, b + 1e-6, q, r) - x);
    EXPECT_LE(d6, d3 * 1e-2 + 1e-12);  // Lipschitz: shrinks with epsilon
  }
}

TEST(UnitRoot, AgreesWithBisection) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 2000; ++k) {
    const double a = std::pow(10.0, -3.0 + 6.0 * U(rng));
    const double b = -5.0 + 10.0 * U(rng);
    const double r = 1.1 + 6.0 * U(rng);
    const double q = r + 0.05 + (7.95 - r) * U(rng);
    const double x = unit_root(a, b, q, r);
    ASSERT_TRUE(std::isfinite(x));
    EXPECT_LE(std::abs(x - unit_root_bisection(a, b, q, r)), 1e-10 * std::max(1.0, x));
  }
}

TEST(Projection, ConstraintSatisfied) {
  auto g = build_grid(3, 100.0, 256);
  const auto m = flat_metric(g);
  const auto full = full_region(*g);
  const auto u = GridFunction::sample(g, [](double r) { return 2.0 / r + 0.3 / (r * r); });
  for (ExponentTriple t : {ExponentTriple{6, 4, 1}, ExponentTriple{6, 2, -1}, ExponentTriple{4, 3, 5},
                           ExponentTriple{3, 2, 0}}) {
    const auto p = project_to_constraint(u, m, full, t);
    const double lhs = lq_power(m, full, p.ku, t.q) + t.b * trace_power(m, full, p.ku, t.r);
    EXPECT_NEAR(lhs, 1.0, 1e-10);
  }
}

TEST(Projection, Examples) {
  auto g = build_grid(3, 100.0, 256);
  const auto m = flat_metric(g);
  const auto full = full_region(*g);
  auto u = GridFunction::sample(g, [](double r) { return std::exp(-r); });
  // Scale u so that ||u||_{L^6}^6 = 1 with b = 0.
  u = u.scaled(std::pow(lq_power(m, full, u, 6.0), -1.0 / 6.0));
  EXPECT_NEAR(project_to_constraint(u, m, full, {6, 4, 0}).k, 1.0, 1e-12);

  const auto p1 = project_to_constraint(u, m, full, {6, 4, 1});
  const auto p2 = project_to_constraint(u.scaled(2.0), m, full, {6, 4, 1});
  EXPECT_NEAR(2.0 * p2.k, p1.k, 1e-12);
  for (std::size_t i = 0; i < g->size(); ++i) EXPECT_NEAR(p1.ku.values[i], p2.ku.values[i], 1e-12);
}

TEST(Projection, UnitNormsGiveUnitRoot) {
  // A function with ||u||_6^6 = ||gamma u||_4^4 = 1 reduces to unit_root(1, 1, 6, 4).
  auto g = build_grid(3, 100.0, 256);
  auto m = flat_metric(g);
  const auto full = full_region(*g);
  auto u = GridFunction::sample(g, [](double r) { return std::exp(1.0 - r); });
  u = u.scaled(std::pow(lq_power(m, full, u, 6.0), -1.0 / 6.0));
  const double tr = trace_power(m, full, u, 4.0);
  const auto p = project_to_constraint(u, m, full, {6, 4, 1.0 / tr});
  EXPECT_NEAR(p.k, 0.8688, 1e-4);
}

TEST(Projection, Errors) {
  auto g = build_grid(3, 100.0, 64);
  const auto m = flat_metric(g);
  EXPECT_THROW(project_to_constraint(GridFunction::zeros(g), m, full_region(*g), {6, 4, 1}), std::invalid_argument);
  auto u = GridFunction::constant(g, 1.0);
  u.values.back() = 0.0;
  const double a = lq_power(m, full_region(*g), u, 3.0);
  const double tr = trace_power(m, full_region(*g), u, 3.0);
  EXPECT_THROW(project_to_constraint(u, m, full_region(*g), {3, 3, -2.0 * a / tr}), std::invalid_argument);
}
