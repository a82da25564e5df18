#include "eyam/conformal.hpp"

#include <cmath>
#include <stdexcept>

#include "eyam/assembly.hpp"
#include "eyam/calculus.hpp"
#include "eyam/fd.hpp"

namespace eyam {

namespace {

void check_factor(const GridFunction& psi) {
  for (double p : psi.values)
    if (!(p > 0.0)) throw std::invalid_argument("conformal factor must be positive");
  if (std::abs(psi.values.back() - 1.0) > kDecayTolerance)
    throw std::invalid_argument("conformal factor does not tend to 1");
}

}  // namespace

CurvatureTarget conformal_curvatures(const Metric& metric, const GridFunction& psi) {
  check_factor(psi);
  const auto& d = metric.dims();
  const auto lap = laplacian(metric, psi);
  std::vector<double> Rp(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double p = psi.values[i];
    Rp[i] = std::pow(p, 1.0 - d.two_qbar) * (-(1.0 / d.c_n) * lap.values[i] + metric.R[i] * p);
  }
  const double p0 = psi.trace();
  const double Hp =
      std::pow(p0, -d.qbar) * ((1.0 / d.d_n) * normal_derivative_out(metric, psi) + metric.H * p0);
  return make_target(std::move(Rp), Hp);
}

Metric apply_conformal(const Metric& metric, const GridFunction& psi) {
  auto t = conformal_curvatures(metric, psi);
  return conformal_with_fields(metric, psi, std::move(t.Rp), t.Hp);
}

Metric conformal_with_fields(const Metric& metric, const GridFunction& psi,
                             std::vector<double> R, double H) {
  check_factor(psi);
  Metric out = metric;
  for (std::size_t i = 0; i < out.phi.size(); ++i) out.phi[i] *= psi.values[i];
  out.R = std::move(R);
  out.H = H;
  validate_metric(out);
  return out;
}

MmsCase mms_case(const GridPtr& grid, double a) {
  if (!(a > -1.0)) throw std::invalid_argument("mms_case: a must exceed -1");
  const auto& d = grid->dims;
  const double p = 2.0 - d.n;
  MmsCase c;
  c.u_exact = GridFunction::sample(grid, [&](double r) { return a * std::pow(r, p); });
  c.phi = c.u_exact.shifted(1.0);
  c.target = make_target(std::vector<double>(grid->size(), 0.0),
                         (3.0 * a + 1.0) / std::pow(1.0 + a, d.qbar));
  return c;
}

ReadbackScale readback_scale(const Metric& metric, const GridFunction& psi) {
  const auto& g = *metric.grid;
  const auto& d = g.dims;
  const auto dp = radial_derivatives(g, psi.values);
  const auto df = radial_derivatives(g, metric.phi);
  ReadbackScale s;
  s.R.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double f = metric.phi[i], r = g.nodes[i], p = psi.values[i];
    const double terms = std::abs(f * f * dp.d2[i]) + std::abs(2.0 * f * df.d1[i] * dp.d1[i]) +
                         std::abs((d.n - 1) * f * f / r * dp.d1[i]);
    s.R[i] = std::pow(p, 1.0 - d.two_qbar) *
             ((1.0 / d.c_n) * terms / metric.volume_factor(i) + std::abs(metric.R[i] * p));
  }
  const double p0 = psi.trace();
  s.H = std::pow(p0, -d.qbar) *
        ((1.0 / d.d_n) * std::abs(normal_derivative_out(metric, psi)) + std::abs(metric.H * p0));
  return s;
}

double l2_delta_norm(const Metric& metric, double delta, const std::vector<double>& f) {
  const auto& g = *metric.grid;
  const auto a = assemble(metric, full_region(g));
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    s += a.mass[i] * std::pow(g.rho[i], -2.0 * delta - g.dim()) * f[i] * f[i];
  return std::sqrt(s);
}

}  // namespace eyam
