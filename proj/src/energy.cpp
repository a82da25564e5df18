#include "eyam/energy.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "eyam/assembly.hpp"

namespace eyam {

EnergyBreakdown energy(const Metric& metric, const RegionPair& region, const GridFunction& u) {
  const auto a = assemble(metric, region);
  const auto& d = metric.dims();
  EnergyBreakdown out;
  out.dirichlet = dirichlet_form(a, u);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += a.mass[i] * metric.R[i] * u.values[i] * u.values[i];
  out.interior_R = d.c_n * s;
  out.boundary_H = a.boundary ? d.d_n * metric.H * a.area * u.trace() * u.trace() : 0.0;
  out.total = out.dirichlet + out.interior_R + out.boundary_H;
  return out;
}

GridFunction energy_gradient(const Metric& metric, const RegionPair& region, const GridFunction& u) {
  const auto a = assemble(metric, region);
  const auto& d = metric.dims();
  auto g = dirichlet_apply(a, u);
  for (std::size_t i = 0; i < g.size(); ++i)
    g[i] = 2.0 * g[i] + 2.0 * d.c_n * a.mass[i] * metric.R[i] * u.values[i];
  if (a.boundary) g[0] += 2.0 * d.d_n * metric.H * a.area * u.trace();
  const auto fr = free_nodes(*metric.grid, region);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!fr[i]) g[i] = 0.0;
  return GridFunction(metric.grid, std::move(g));
}

double weight_form(const Metric& metric, const RegionPair& region, double delta,
                   const GridFunction& u) {
  const auto a = assemble(metric, region);
  const auto& g = *metric.grid;
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    s += a.mass[i] * std::pow(g.rho[i], -2.0 * delta - g.dim()) * u.values[i] * u.values[i];
  if (a.boundary) s += a.area * u.trace() * u.trace();
  return s;
}

double l2_delta_boundary_norm(const Metric& metric, double delta, const GridFunction& u) {
  return std::sqrt(weight_form(metric, full_region(*metric.grid), delta, u));
}

namespace {

struct FqrCoefficients {
  double interior;  // (n-2)/(2q(n-1))
  double boundary;  // (n-2)/r
};

FqrCoefficients fqr_coefficients(const DimensionConstants& d, const ExponentTriple& tri) {
  return {(d.n - 2.0) / (2.0 * tri.q * (d.n - 1.0)), (d.n - 2.0) / tri.r};
}

}  // namespace

double f_qr(const Metric& metric, const CurvatureTarget& target, const ExponentTriple& tri,
            const GridFunction& u) {
  const auto& g = *metric.grid;
  const auto full = full_region(g);
  const auto a = assemble(metric, full);
  const auto phi = u.shifted(1.0);
  const auto E = energy(metric, full, phi);
  const auto cf = fqr_coefficients(g.dims, tri);
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    s += a.mass[i] * target.Rp[i] * std::pow(std::abs(phi.values[i]), tri.q);
  const double bnd = a.area * target.Hp * std::pow(std::abs(phi.trace()), tri.r);
  return E.total - cf.interior * s - cf.boundary * bnd;
}

GridFunction f_qr_gradient(const Metric& metric, const CurvatureTarget& target,
                           const ExponentTriple& tri, const GridFunction& u) {
  const auto& g = *metric.grid;
  const auto full = full_region(g);
  const auto a = assemble(metric, full);
  const auto& d = g.dims;
  const auto phi = u.shifted(1.0);
  const auto cf = fqr_coefficients(d, tri);
  auto grad = dirichlet_apply(a, phi);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double p = phi.values[i];
    const double sgn = p > 0.0 ? 1.0 : (p < 0.0 ? -1.0 : 0.0);
    grad[i] = 2.0 * grad[i] + 2.0 * d.c_n * a.mass[i] * metric.R[i] * p -
              cf.interior * tri.q * a.mass[i] * target.Rp[i] * std::pow(std::abs(p), tri.q - 1.0) * sgn;
  }
  const double p0 = phi.trace();
  const double s0 = p0 > 0.0 ? 1.0 : (p0 < 0.0 ? -1.0 : 0.0);
  grad[0] += 2.0 * d.d_n * metric.H * a.area * p0 -
             cf.boundary * tri.r * a.area * target.Hp * std::pow(std::abs(p0), tri.r - 1.0) * s0;
  return GridFunction(metric.grid, std::move(grad));
}

std::vector<CoercivityRow> probe_coercivity(const Metric& metric, const CurvatureTarget& target,
                                            double q0, double r0, const std::vector<double>& B_list,
                                            int samples, std::uint64_t seed) {
  if (B_list.empty()) throw std::invalid_argument("probe_coercivity: empty B list");
  if (samples < 1) throw std::invalid_argument("probe_coercivity: samples must be >= 1");
  const auto& d = metric.dims();
  const auto grid = metric.grid;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double log_r = std::log(grid->r_max());

  std::vector<double> F(samples), norm(samples);
  for (int k = 0; k < samples; ++k) {
    const double q = q0 + unit(rng) * (d.two_qbar - q0) * (1.0 - 1e-9);
    const double r = r0 + unit(rng) * (d.qbar_plus_1 - r0) * (1.0 - 1e-9);
    const double scale = std::pow(10.0, -2.0 + 5.0 * unit(rng));
    const double c1 = 2.0 * unit(rng) - 1.0, c2 = 2.0 * unit(rng) - 1.0;
    const double mu = unit(rng) * log_r, sig = 0.2 + 1.8 * unit(rng);
    auto u = GridFunction::sample(grid, [&](double rr) {
      const double z = (std::log(rr) - mu) / sig;
      const double v = scale * (c1 * std::pow(rr, 2.0 - d.n) + c2 * std::exp(-z * z));
      return std::max(v, -1.0);
    });
    F[k] = f_qr(metric, target, {q, r, 0.0}, u);
    norm[k] = l2_delta_boundary_norm(metric, 0.0, u);
  }
  std::vector<CoercivityRow> rows;
  for (double B : B_list) {
    CoercivityRow row{B, 0.0, 0};
    for (int k = 0; k < samples; ++k)
      if (F[k] < B) {
        ++row.below;
        row.K_hat = std::max(row.K_hat, norm[k]);
      }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace eyam
