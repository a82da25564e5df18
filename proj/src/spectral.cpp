#include "eyam/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

#include "eyam/assembly.hpp"
#include "eyam/energy.hpp"
#include "eyam/tridiag.hpp"

namespace eyam {

std::string to_string(Sign s) {
  switch (s) {
    case Sign::kPositive: return "positive";
    case Sign::kZero: return "zero";
    case Sign::kNegative: return "negative";
    case Sign::kInfinite: return "infinite";
  }
  return "unknown";
}

Sign classify_value(double value, double scale) {
  if (std::isinf(value) && value > 0) return Sign::kInfinite;
  if (std::abs(value) <= kZeroBand * (std::abs(value) + std::abs(scale))) return Sign::kZero;
  return value > 0.0 ? Sign::kPositive : Sign::kNegative;
}

namespace {

struct Pencil {
  std::vector<std::size_t> idx;  // free grid nodes
  SymTridiag A;
  std::vector<double> B;
};

void check_delta(const Metric& metric, double delta) {
  if (!(delta > metric.dims().delta_star))
    throw std::invalid_argument("lambda_delta: delta must exceed (2-n)/2");
}

std::vector<std::size_t> free_index(const Metric& metric, const RegionPair& region) {
  const auto fr = free_nodes(*metric.grid, region);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < fr.size(); ++i)
    if (fr[i]) idx.push_back(i);
  return idx;
}

Pencil assemble_pencil(const Metric& metric, const RegionPair& region, double delta) {
  const auto& g = *metric.grid;
  const auto& d = g.dims;
  const auto a = assemble(metric, region);
  Pencil p;
  p.idx = free_index(metric, region);
  const std::size_t m = p.idx.size();
  const std::size_t last = g.size() - 1;
  p.A = SymTridiag(m);
  p.B.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = p.idx[k];
    double diag = a.stiffness.diag[i] + d.c_n * metric.R[i] * a.mass[i];
    double w = a.mass[i] * std::pow(g.rho[i], -2.0 * delta - d.n);
    if (i == last) diag += a.tail;
    if (i == 0 && a.boundary) {
      diag += d.d_n * metric.H * a.area;
      w += a.area;
    }
    p.A.diag[k] = diag;
    p.B[k] = w;
    if (k + 1 < m && p.idx[k + 1] == i + 1) p.A.off[k] = a.stiffness.off[i];
  }
  return p;
}

SymTridiag scaled(const Pencil& p) {
  const std::size_t m = p.A.size();
  SymTridiag C(m);
  std::vector<double> s(m);
  for (std::size_t k = 0; k < m; ++k) s[k] = 1.0 / std::sqrt(p.B[k]);
  for (std::size_t k = 0; k < m; ++k) {
    C.diag[k] = p.A.diag[k] * s[k] * s[k];
    if (k + 1 < m) C.off[k] = p.A.off[k] * s[k] * s[k + 1];
  }
  return C;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

InvariantReport infinite_report() {
  InvariantReport rep;
  rep.value = std::numeric_limits<double>::infinity();
  rep.sign = Sign::kInfinite;
  return rep;
}

}  // namespace

InvariantReport lambda_delta(const Metric& metric, const RegionPair& region, double delta) {
  check_delta(metric, delta);
  const Pencil p = assemble_pencil(metric, region, delta);
  const std::size_t m = p.idx.size();
  if (m == 0) return infinite_report();

  const SymTridiag C = scaled(p);
  const std::vector<double> none;
  auto [gl, gu] = gershgorin(C);
  const double cnorm = std::max(std::abs(gl), std::abs(gu));

  // Shift below the spectrum, then tighten by inertia until only the lowest
  // eigenvalue lies under hi.
  double lo = gl - 1.0, hi = gu + 1.0;
  int iters = 0;
  for (; iters < 200; ++iters) {
    const double width = hi - lo;
    if (width <= 1e-6 * std::max({1.0, std::abs(lo), std::abs(hi)}) && negative_count(C, none, hi) == 1)
      break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (negative_count(C, none, mid) == 0 ? lo : hi) = mid;
  }

  // Inverse iteration from a positive vector; the shift only moves up when
  // the LDL^T inertia certifies it is still below the lowest eigenvalue.
  double sigma = lo;
  std::vector<double> x(m, 1.0 / std::sqrt(static_cast<double>(m))), y, res(m);
  double rq = 0.0, rnorm = std::numeric_limits<double>::infinity(), best_r = rnorm;
  int stall = 0;
  for (int it = 0; it < 500; ++it, ++iters) {
    SymTridiag S = C;
    for (double& dd : S.diag) dd -= sigma;
    if (!solve_spd(S, x, y)) {
      sigma = lo;
      continue;
    }
    const double ny = norm2(y);
    for (std::size_t k = 0; k < m; ++k) x[k] = y[k] / ny;
    const auto Cx = multiply(C, x);
    rq = 0.0;
    for (std::size_t k = 0; k < m; ++k) rq += x[k] * Cx[k];
    for (std::size_t k = 0; k < m; ++k) res[k] = Cx[k] - rq * x[k];
    rnorm = norm2(res);
    if (rnorm <= 1e-15 * cnorm) break;
    if (rnorm < 0.5 * best_r) {
      best_r = rnorm;
      stall = 0;
    } else if (++stall >= 4) {
      break;
    }
    const double cand = rq - std::max(rnorm, 1e-15 * cnorm);
    if (cand > sigma && negative_count(C, none, cand) == 0) sigma = cand;
  }

  std::vector<double> full(metric.grid->size(), 0.0);
  double vmax = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double v = x[k] / std::sqrt(p.B[k]);
    full[p.idx[k]] = v;
    if (std::abs(v) > std::abs(vmax)) vmax = v;
  }
  if (vmax < 0.0)
    for (double& v : full) v = -v;

  InvariantReport rep;
  rep.value = rq;
  rep.iterations = iters;
  {
    std::vector<double> u(m);
    for (std::size_t k = 0; k < m; ++k) u[k] = full[p.idx[k]];
    const auto Au = multiply(p.A, u);
    std::vector<double> r(m);
    for (std::size_t k = 0; k < m; ++k) r[k] = Au[k] - rq * p.B[k] * u[k];
    const double na = norm2(Au);
    rep.residual = na > 0.0 ? norm2(r) / na : norm2(r);
  }
  GridFunction u(metric.grid, std::move(full));
  const auto E = energy(metric, region, u);
  rep.scale = E.dirichlet + std::abs(E.interior_R) + std::abs(E.boundary_H);
  rep.sign = classify_value(rep.value, rep.scale);
  rep.minimizer = std::move(u);
  return rep;
}

double lambda_delta_dense_oracle(const Metric& metric, const RegionPair& region, double delta) {
  check_delta(metric, delta);
  const auto& g = *metric.grid;
  if (g.elements() > 1000) throw std::invalid_argument("dense oracle: N must be <= 1000");
  const auto idx = free_index(metric, region);
  const std::size_t m = idx.size();
  if (m == 0) return std::numeric_limits<double>::infinity();

  auto unit = [&](std::size_t i, std::size_t j, bool two) {
    std::vector<double> v(g.size(), 0.0);
    v[i] = 1.0;
    if (two) v[j] = 1.0;
    return GridFunction(metric.grid, std::move(v));
  };
  SymTridiag A(m);
  std::vector<double> B(m), Ei(m);
  for (std::size_t k = 0; k < m; ++k) {
    const auto e = unit(idx[k], 0, false);
    Ei[k] = energy(metric, region, e).total;
    A.diag[k] = Ei[k];
    B[k] = weight_form(metric, region, delta, e);
  }
  for (std::size_t k = 0; k + 1 < m; ++k) {
    if (idx[k + 1] != idx[k] + 1) continue;
    const double Eij = energy(metric, region, unit(idx[k], idx[k + 1], true)).total;
    A.off[k] = 0.5 * (Eij - Ei[k] - Ei[k + 1]);
  }

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t k = 0; k < m; ++k) {
    double rad = 0.0;
    if (k > 0) rad += std::abs(A.off[k - 1]) / std::sqrt(B[k] * B[k - 1]);
    if (k + 1 < m) rad += std::abs(A.off[k]) / std::sqrt(B[k] * B[k + 1]);
    lo = std::min(lo, A.diag[k] / B[k] - rad);
    hi = std::max(hi, A.diag[k] / B[k] + rad);
  }
  lo -= 1.0;
  hi += 1.0;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (negative_count(A, B, mid) >= 1 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

LambdaCurve lambda_curve(const MetricFamily& family, const RegionPair& region, double delta,
                         const std::vector<double>& s_values, int jobs) {
  auto eval = [&](double s) {
    const auto rep = lambda_delta(family(s), region, delta);
    return CurvePoint{s, rep.value, rep.sign, rep.scale};
  };
  LambdaCurve out;
  out.points.resize(s_values.size());
  const std::size_t J = std::max(1, jobs);
  for (std::size_t start = 0; start < s_values.size(); start += J) {
    std::vector<std::future<CurvePoint>> fut;
    for (std::size_t k = start; k < std::min(s_values.size(), start + J); ++k)
      fut.push_back(std::async(J > 1 ? std::launch::async : std::launch::deferred, eval, s_values[k]));
    for (std::size_t k = 0; k < fut.size(); ++k) out.points[start + k] = fut[k].get();
  }

  auto side = [](const CurvePoint& p) {
    if (p.sign == Sign::kInfinite || p.lambda > 0.0) return 1;
    return p.lambda < 0.0 ? -1 : 0;
  };
  for (std::size_t k = 0; k + 1 < out.points.size(); ++k) {
    const int a = side(out.points[k]), b = side(out.points[k + 1]);
    if (a == 0 || b == 0 || a == b) continue;
    double lo = out.points[k].s, hi = out.points[k + 1].s;
    CurvePoint mid = out.points[k];
    for (int it = 0; it < 200; ++it) {
      const double sm = 0.5 * (lo + hi);
      if (sm <= std::min(lo, hi) || sm >= std::max(lo, hi)) break;
      mid = eval(sm);
      if (std::abs(mid.lambda) <= 1e-10 * mid.scale) break;
      (side(mid) == a ? lo : hi) = sm;
    }
    out.crossing = mid;
    out.crossing_after = k;
    break;
  }
  return out;
}

}  // namespace eyam
