#include "eyam/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

namespace eyam {

DimensionConstants DimensionConstants::make(int n) {
  if (n < 3) throw std::invalid_argument("dimension n must be >= 3");
  DimensionConstants d;
  const double nd = n;
  d.n = n;
  d.qbar = nd / (nd - 2.0);
  d.two_qbar = 2.0 * nd / (nd - 2.0);
  d.qbar_plus_1 = d.qbar + 1.0;
  d.delta_star = (2.0 - nd) / 2.0;
  d.c_n = (nd - 2.0) / (4.0 * (nd - 1.0));
  d.d_n = (nd - 2.0) / 2.0;
  return d;
}

Spacing parse_spacing(const std::string& s) {
  if (s == "log") return Spacing::kLog;
  if (s == "uniform") return Spacing::kUniform;
  throw std::invalid_argument("unknown grid spacing '" + s + "'");
}

std::string to_string(Spacing s) { return s == Spacing::kLog ? "log" : "uniform"; }

double RadialGrid::log_step() const {
  double h = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    h = std::max(h, std::log(nodes[i + 1] / nodes[i]));
  return h;
}

double RadialGrid::element_power_integral(std::size_t e, double s) const {
  using Rule = boost::math::quadrature::gauss<double, 30>;
  return Rule::integrate([s](double r) { return std::pow(r, s); }, nodes[e], nodes[e + 1]);
}

GridPtr build_grid(int n, double r_max, int N, Spacing spacing) {
  if (n < 3) throw std::invalid_argument("build_grid: n must be >= 3");
  if (!(r_max > 1.0)) throw std::invalid_argument("build_grid: R_max must be > 1");
  if (N < 16) throw std::invalid_argument("build_grid: N must be >= 16");

  auto g = std::make_shared<RadialGrid>();
  g->dims = DimensionConstants::make(n);
  g->spacing = spacing;
  g->nodes.resize(N + 1);
  for (int i = 0; i <= N; ++i) {
    const double t = static_cast<double>(i) / N;
    g->nodes[i] = spacing == Spacing::kLog ? std::exp(t * std::log(r_max))
                                           : 1.0 + t * (r_max - 1.0);
  }
  g->nodes.front() = 1.0;
  g->nodes.back() = r_max;
  g->rho = g->nodes;
  g->sphere_area = 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);

  using Rule = boost::math::quadrature::gauss<double, 30>;
  const double p = n - 1;
  const std::size_t ne = N;
  g->elem_len.resize(ne);
  g->elem_moment.resize(ne);
  g->elem_left.resize(ne);
  g->elem_right.resize(ne);
  g->quad_weights.assign(N + 1, 0.0);
  for (std::size_t e = 0; e < ne; ++e) {
    const double a = g->nodes[e], b = g->nodes[e + 1], h = b - a;
    g->elem_len[e] = h;
    // Both hat halves are polynomials of degree n in r; the 30-point rule is
    // exact for the dimensions of interest and accurate to rounding beyond.
    g->elem_left[e] = Rule::integrate([&](double r) { return (b - r) / h * std::pow(r, p); }, a, b);
    g->elem_right[e] = Rule::integrate([&](double r) { return (r - a) / h * std::pow(r, p); }, a, b);
    g->elem_moment[e] = g->elem_left[e] + g->elem_right[e];
    g->quad_weights[e] += g->elem_left[e];
    g->quad_weights[e + 1] += g->elem_right[e];
  }
  return g;
}

GridFunction::GridFunction(GridPtr g, std::vector<double> v, double far)
    : grid(std::move(g)), values(std::move(v)), far_value(far) {
  if (!grid) throw std::invalid_argument("GridFunction: null grid");
  if (values.size() != grid->size())
    throw std::invalid_argument("GridFunction: value count does not match grid");
}

GridFunction GridFunction::zeros(GridPtr g) {
  const auto n = g->size();
  return GridFunction(std::move(g), std::vector<double>(n, 0.0));
}

GridFunction GridFunction::constant(GridPtr g, double c) {
  const auto n = g->size();
  return GridFunction(std::move(g), std::vector<double>(n, c), c);
}

GridFunction GridFunction::shifted(double c) const {
  GridFunction out = *this;
  for (double& v : out.values) v += c;
  out.far_value += c;
  return out;
}

GridFunction GridFunction::scaled(double s) const {
  GridFunction out = *this;
  for (double& v : out.values) v *= s;
  out.far_value *= s;
  return out;
}

double Metric::boundary_area() const {
  const auto& d = dims();
  return grid->sphere_area * std::pow(phi.front(), 2.0 * (d.n - 1) / (d.n - 2));
}

double Metric::volume_factor(std::size_t i) const {
  return std::pow(phi[i], dims().two_qbar);
}

Metric flat_metric(GridPtr grid) {
  Metric m;
  const auto n = grid->size();
  m.grid = std::move(grid);
  m.phi.assign(n, 1.0);
  m.R.assign(n, 0.0);
  m.H = 1.0;
  m.tau = -1.0;
  return m;
}

Metric well_metric(GridPtr grid, double r_lo, double r_hi, double depth) {
  Metric m = flat_metric(std::move(grid));
  for (std::size_t i = 0; i < m.R.size(); ++i) {
    const double r = m.grid->nodes[i];
    if (r >= r_lo * (1 - 1e-12) && r <= r_hi * (1 + 1e-12)) m.R[i] = -depth;
  }
  return m;
}

Metric metric_with_curvature(GridPtr grid, std::vector<double> R, double H) {
  Metric m = flat_metric(std::move(grid));
  if (R.size() != m.R.size())
    throw std::invalid_argument("metric_with_curvature: R size mismatch");
  m.R = std::move(R);
  m.H = H;
  return m;
}

std::vector<double> bump_profile(const RadialGrid& grid, double r_lo, double r_hi) {
  if (!(r_hi > r_lo)) throw std::invalid_argument("bump: need r_lo < r_hi");
  std::vector<double> b(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s = (2.0 * grid.nodes[i] - r_lo - r_hi) / (r_hi - r_lo);
    if (std::abs(s) < 1.0) b[i] = std::exp(1.0 - 1.0 / (1.0 - s * s));
  }
  return b;
}

void validate_metric(const Metric& m) {
  if (!m.grid) throw std::invalid_argument("metric: null grid");
  if (m.phi.size() != m.grid->size() || m.R.size() != m.grid->size())
    throw std::invalid_argument("metric: field size mismatch");
  for (double p : m.phi)
    if (!(p > 0.0)) throw std::invalid_argument("metric: conformal factor must be positive");
  if (std::abs(m.phi.back() - 1.0) > kDecayTolerance)
    throw std::invalid_argument("metric: conformal factor does not tend to 1");
}

bool RegionPair::empty() const {
  return std::none_of(omega_mask.begin(), omega_mask.end(), [](char c) { return c != 0; });
}

RegionPair full_region(const RadialGrid& grid) {
  return RegionPair{std::vector<char>(grid.size(), 1), true};
}

RegionPair region_from_intervals(const RadialGrid& grid,
                                 const std::vector<std::pair<double, double>>& intervals,
                                 bool include_boundary) {
  constexpr double kRel = 1e-12;
  auto sorted = intervals;
  std::sort(sorted.begin(), sorted.end());
  for (const auto& [lo, hi] : sorted) {
    if (!(lo <= hi)) throw std::invalid_argument("region: interval with r_lo > r_hi");
    if (lo < 1.0 - kRel || hi > grid.r_max() * (1 + kRel))
      throw std::invalid_argument("region: interval outside [1, R_max]");
  }
  for (std::size_t k = 1; k < sorted.size(); ++k)
    if (sorted[k].first < sorted[k - 1].second)
      throw std::invalid_argument("region: overlapping intervals");

  RegionPair reg{std::vector<char>(grid.size(), 0), include_boundary};
  bool touches_boundary = false;
  for (const auto& [lo, hi] : sorted) {
    if (lo <= 1.0 + kRel) touches_boundary = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double r = grid.nodes[i];
      if (r >= lo * (1 - kRel) && r <= hi * (1 + kRel)) reg.omega_mask[i] = 1;
    }
  }
  if (include_boundary && !(touches_boundary && reg.omega_mask[0]))
    throw std::invalid_argument("region: boundary included but Omega is not adjacent to r = 1");
  return reg;
}

std::vector<std::pair<double, double>> region_to_intervals(const RadialGrid& grid,
                                                           const RegionPair& region) {
  std::vector<std::pair<double, double>> out;
  std::size_t i = 0;
  while (i < grid.size()) {
    if (!region.contains(i)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < grid.size() && region.contains(j + 1)) ++j;
    out.emplace_back(grid.nodes[i], grid.nodes[j]);
    i = j + 1;
  }
  return out;
}

double default_zero_tol(std::span<const double> Rp) {
  double m = 0.0;
  for (double v : Rp) m = std::max(m, std::abs(v));
  return std::max(1e-12 * m, 1e-300);
}

CurvatureTarget make_target(std::vector<double> Rp, double Hp) {
  CurvatureTarget t;
  t.zero_tol = default_zero_tol(Rp);
  t.Rp = std::move(Rp);
  t.Hp = Hp;
  return t;
}

RegionPair zero_set(const CurvatureTarget& target, const RadialGrid& grid) {
  if (target.Rp.size() != grid.size())
    throw std::invalid_argument("zero_set: target size does not match grid");
  RegionPair reg{std::vector<char>(grid.size(), 0), std::abs(target.Hp) <= target.zero_tol};
  for (std::size_t i = 0; i < grid.size(); ++i)
    reg.omega_mask[i] = std::abs(target.Rp[i]) <= target.zero_tol ? 1 : 0;
  return reg;
}

std::vector<char> free_nodes(const RadialGrid& grid, const RegionPair& region) {
  const std::size_t n = grid.size();
  std::vector<char> fr(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!region.contains(i)) continue;
    if (i == 0) {
      fr[i] = region.sigma_included && region.contains(1);
    } else if (i + 1 == n) {
      fr[i] = region.contains(i - 1);
    } else {
      fr[i] = region.contains(i - 1) && region.contains(i + 1);
    }
  }
  return fr;
}

}  // namespace eyam
