#include "eyam/assembly.hpp"

#include <cmath>

namespace eyam {

double tail_coefficient(const Metric& metric) {
  const auto& g = *metric.grid;
  const int n = g.dim();
  const double pN = metric.phi.back();
  return g.sphere_area * (n - 2) * std::pow(g.r_max(), n - 2) * pN * pN;
}

Assembly assemble(const Metric& metric, const RegionPair& region) {
  const auto& g = *metric.grid;
  const std::size_t np = g.size();
  Assembly a;
  a.stiffness = SymTridiag(np);
  a.mass.assign(np, 0.0);
  std::vector<double> w(np, 0.0);
  for (std::size_t e = 0; e < g.elements(); ++e) {
    if (!region.element_in(e)) continue;
    const double p2 = 0.5 * (metric.phi[e] * metric.phi[e] + metric.phi[e + 1] * metric.phi[e + 1]);
    const double k = g.sphere_area * p2 * g.elem_moment[e] / (g.elem_len[e] * g.elem_len[e]);
    a.stiffness.diag[e] += k;
    a.stiffness.diag[e + 1] += k;
    a.stiffness.off[e] -= k;
    w[e] += g.elem_left[e];
    w[e + 1] += g.elem_right[e];
  }
  for (std::size_t i = 0; i < np; ++i)
    a.mass[i] = w[i] > 0.0 ? g.sphere_area * w[i] * metric.volume_factor(i) : 0.0;
  a.area = metric.boundary_area();
  a.boundary = region.boundary_active();
  if (np >= 2 && region.contains(np - 1) && region.contains(np - 2)) a.tail = tail_coefficient(metric);
  return a;
}

double dirichlet_form(const Assembly& a, const GridFunction& u) {
  const auto& v = u.values;
  double s = 0.0;
  for (std::size_t e = 0; e + 1 < v.size(); ++e) {
    const double d = v[e + 1] - v[e];
    s += -a.stiffness.off[e] * d * d;
  }
  const double t = v.back() - u.far_value;
  return s + a.tail * t * t;
}

std::vector<double> dirichlet_apply(const Assembly& a, const GridFunction& u) {
  const auto& v = u.values;
  const std::size_t n = v.size();
  std::vector<double> y(n, 0.0);
  for (std::size_t e = 0; e + 1 < n; ++e) {
    const double f = -a.stiffness.off[e] * (v[e + 1] - v[e]);
    y[e] -= f;
    y[e + 1] += f;
  }
  y[n - 1] += a.tail * (v.back() - u.far_value);
  return y;
}

}  // namespace eyam
