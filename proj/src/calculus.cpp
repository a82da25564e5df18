#include "eyam/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

#include "eyam/fd.hpp"

namespace eyam {

namespace {

using Rule = boost::math::quadrature::gauss<double, 30>;

// int_e hat_left r^t dr and int_e hat_right r^t dr for every element.
void hat_moments(const RadialGrid& g, double t, std::vector<double>& left,
                 std::vector<double>& right) {
  const std::size_t ne = g.elements();
  left.resize(ne);
  right.resize(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    const double a = g.nodes[e], b = g.nodes[e + 1], h = b - a;
    left[e] = Rule::integrate([&](double r) { return (b - r) / h * std::pow(r, t); }, a, b);
    right[e] = Rule::integrate([&](double r) { return (r - a) / h * std::pow(r, t); }, a, b);
  }
}

}  // namespace

double weighted_norm(const GridFunction& u, const NormSpec& spec) {
  if (spec.k < 0 || spec.k > 2) throw std::invalid_argument("weighted_norm: k must be 0, 1 or 2");
  if (!(spec.p >= 1.0)) throw std::invalid_argument("weighted_norm: p must be >= 1");
  const auto& g = *u.grid;
  const int n = g.dim();
  const double p = spec.p;
  const auto& v = u.values;
  double total = 0.0;

  std::vector<double> L, Rr;
  // j = 0
  {
    const double t = -p * spec.delta - n + (n - 1);
    hat_moments(g, t, L, Rr);
    for (std::size_t e = 0; e < g.elements(); ++e)
      total += L[e] * std::pow(std::abs(v[e]), p) + Rr[e] * std::pow(std::abs(v[e + 1]), p);
  }
  if (spec.k >= 1) {
    const double t = p * (-spec.delta - n / p + 1.0) + (n - 1);
    for (std::size_t e = 0; e < g.elements(); ++e) {
      const double slope = (v[e + 1] - v[e]) / g.elem_len[e];
      total += std::pow(std::abs(slope), p) * g.element_power_integral(e, t);
    }
  }
  if (spec.k >= 2) {
    const auto d = radial_derivatives(g, v);
    const double t = p * (-spec.delta - n / p + 2.0) + (n - 1);
    hat_moments(g, t, L, Rr);
    for (std::size_t e = 0; e < g.elements(); ++e)
      total += L[e] * std::pow(std::abs(d.d2[e]), p) + Rr[e] * std::pow(std::abs(d.d2[e + 1]), p);
  }
  return std::pow(g.sphere_area * total, 1.0 / p);
}

double gradient_sq_norm(const Metric& metric, const RegionPair& region, const GridFunction& u) {
  const auto& g = *metric.grid;
  const auto& v = u.values;
  double s = 0.0;
  for (std::size_t e = 0; e < g.elements(); ++e) {
    if (!region.element_in(e)) continue;
    const double p2 = 0.5 * (metric.phi[e] * metric.phi[e] + metric.phi[e + 1] * metric.phi[e + 1]);
    const double slope = (v[e + 1] - v[e]) / g.elem_len[e];
    s += p2 * slope * slope * g.element_power_integral(e, g.dim() - 1);
  }
  return g.sphere_area * s;
}

GridFunction laplacian(const Metric& metric, const GridFunction& u) {
  const auto& g = *metric.grid;
  const int n = g.dim();
  const auto du = radial_derivatives(g, u.values);
  const auto dp = radial_derivatives(g, metric.phi);
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double f = metric.phi[i], r = g.nodes[i];
    const double flux = f * f * du.d2[i] + (2.0 * f * dp.d1[i] + (n - 1) * f * f / r) * du.d1[i];
    out[i] = flux / metric.volume_factor(i);
  }
  return GridFunction(metric.grid, std::move(out));
}

double normal_derivative_out(const GridFunction& u) {
  const auto w = fornberg_weights(1.0, std::span(u.grid->nodes).subspan(0, 3), 1);
  double s = 0.0;
  for (int j = 1; j < 3; ++j) s += w[1][j] * (u.values[j] - u.values[0]);
  return -s;
}

double normal_derivative_out(const Metric& metric, const GridFunction& u) {
  const int n = metric.grid->dim();
  return std::pow(metric.phi.front(), -2.0 / (n - 2)) * normal_derivative_out(u);
}

ProbeSample inequality_ratios(const GridFunction& u) {
  const auto& g = *u.grid;
  const auto& d = g.dims;
  const double grad = std::sqrt(gradient_sq_norm(flat_metric(u.grid), full_region(g), u));
  ProbeSample s{"", 0.0, 0.0, 0.0};
  if (!(grad > 0.0)) return s;
  s.poincare = weighted_norm(u, {0, 2.0, d.delta_star}) / grad;
  s.sobolev = weighted_norm(u, {0, d.two_qbar, d.delta_star}) / grad;
  return s;
}

InequalityProbe probe_inequalities(const GridPtr& grid, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("probe_inequalities: samples must be >= 1");
  const auto& d = grid->dims;
  const int n = d.n;
  InequalityProbe out;
  auto record = [&](ProbeSample s) {
    if (s.poincare == 0.0 && s.sobolev == 0.0) return;
    out.C1_hat = std::max(out.C1_hat, s.poincare);
    out.C2_hat = std::max(out.C2_hat, s.sobolev);
    out.samples.push_back(std::move(s));
  };

  const double a_lo = (n - 2) / 2.0 + 0.1;
  for (int k = 0;; ++k) {
    const double alpha = a_lo + 0.1 * k;
    if (alpha > (n - 2) + 1e-12) break;
    auto s = inequality_ratios(GridFunction::sample(grid, [&](double r) { return std::pow(r, -alpha); }));
    s.family = "power";
    s.parameter = alpha;
    record(s);
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double log_r = std::log(grid->r_max());
  for (int k = 0; k < samples; ++k) {
    double c[3], al[3];
    for (int j = 0; j < 3; ++j) {
      c[j] = 2.0 * unit(rng) - 1.0;
      al[j] = (n - 2) / 2.0 + 0.05 + unit(rng) * (n - (n - 2) / 2.0 - 0.05);
    }
    const double amp = 2.0 * unit(rng) - 1.0;
    const double mu = unit(rng) * log_r;
    const double sig = 0.2 + 1.8 * unit(rng);
    auto u = GridFunction::sample(grid, [&](double r) {
      double v = 0.0;
      for (int j = 0; j < 3; ++j) v += c[j] * std::pow(r, -al[j]);
      const double z = (std::log(r) - mu) / sig;
      return v + amp * std::exp(-z * z) * std::pow(r, -(n - 2) / 2.0 - 0.05);
    });
    auto s = inequality_ratios(u);
    s.family = "random";
    s.parameter = k;
    record(s);
  }
  return out;
}

}  // namespace eyam
