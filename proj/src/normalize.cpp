#include "eyam/normalize.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace eyam {

namespace {

using ld = long double;

ld f_eval(ld a, ld b, ld q, ld r, ld x) {
  return a * std::pow(x, q) + b * std::pow(x, r) - 1.0L;
}

ld df_eval(ld a, ld b, ld q, ld r, ld x) {
  return q * a * std::pow(x, q - 1.0L) + r * b * std::pow(x, r - 1.0L);
}

void check_args(double a, double b, double q, double r) {
  if (!(a > 0.0)) throw std::invalid_argument("unit_root: a must be positive");
  if (!(r > 1.0) || !(q >= r)) throw std::invalid_argument("unit_root: need q >= r > 1");
  if (q == r && !(b > -a)) throw std::invalid_argument("unit_root: no positive root (q == r, b <= -a)");
}

// [lo, hi] with f(lo) <= 0 < f(hi) and f increasing on the bracket.
std::pair<ld, ld> bracket(ld a, ld b, ld q, ld r) {
  ld lo = 0.0L;
  if (b < 0.0L) lo = std::pow(-r * b / (q * a), 1.0L / (q - r));
  ld hi = std::pow(1.0L / a, 1.0L / q) + std::pow(std::max(0.0L, -b / a), 1.0L / (q - r)) + 1.0L;
  while (f_eval(a, b, q, r, hi) <= 0.0L) hi *= 2.0L;
  return {lo, hi};
}

}  // namespace

double unit_root(double a, double b, double q, double r) {
  check_args(a, b, q, r);
  if (q == r) return std::pow(1.0 / (a + b), 1.0 / q);

  const ld A = a, Bc = b, Q = q, Rr = r;
  auto [lo, hi] = bracket(A, Bc, Q, Rr);
  ld x = 0.5L * (lo + hi);
  for (int it = 0; it < 400; ++it) {
    const ld fx = f_eval(A, Bc, Q, Rr, x);
    if (fx == 0.0L) {
      lo = hi = x;
      break;
    }
    if (fx < 0.0L) lo = x; else hi = x;
    const ld d = df_eval(A, Bc, Q, Rr, x);
    ld next = d > 0.0L ? x - fx / d : lo - 1.0L;
    if (!(next > lo && next < hi)) next = 0.5L * (lo + hi);
    if (std::abs(next - x) <= 4.0L * std::numeric_limits<ld>::epsilon() * std::abs(x)) {
      x = next;
      break;
    }
    x = next;
  }

  // Round to double and keep the neighbour with the smallest residual.
  double best = static_cast<double>(x);
  ld best_f = std::abs(f_eval(A, Bc, Q, Rr, best));
  for (double cand : {std::nextafter(best, 0.0), std::nextafter(best, INFINITY)}) {
    const ld fc = std::abs(f_eval(A, Bc, Q, Rr, cand));
    if (fc < best_f) {
      best_f = fc;
      best = cand;
    }
  }
  return best;
}

double unit_root_bisection(double a, double b, double q, double r) {
  check_args(a, b, q, r);
  // Same sign as f(x) / x^r, which stays finite for very large roots.
  auto g = [&](double x) { return a * std::pow(x, q - r) + b - std::pow(x, -r); };
  double lo = 0.0;
  if (b < 0.0 && q > r) lo = std::pow(-r * b / (q * a), 1.0 / (q - r));
  double hi = 1.0;
  while (g(hi) <= 0.0) hi *= 2.0;
  if (lo > hi) lo = 0.0;
  for (int it = 0; it < 4000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (g(mid) <= 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double lq_power(const Metric& metric, const RegionPair& region, const GridFunction& u, double q) {
  const auto& g = *metric.grid;
  std::vector<double> w(g.size(), 0.0);
  for (std::size_t e = 0; e < g.elements(); ++e) {
    if (!region.element_in(e)) continue;
    w[e] += g.elem_left[e];
    w[e + 1] += g.elem_right[e];
  }
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (w[i] > 0.0) s += w[i] * metric.volume_factor(i) * std::pow(std::abs(u.values[i]), q);
  return g.sphere_area * s;
}

double trace_power(const Metric& metric, const RegionPair& region, const GridFunction& u, double r) {
  if (!region.boundary_active()) return 0.0;
  return metric.boundary_area() * std::pow(std::abs(u.trace()), r);
}

Projection project_to_constraint(const GridFunction& u, const Metric& metric,
                                 const RegionPair& region, const ExponentTriple& tri) {
  const double a = lq_power(metric, region, u, tri.q);
  if (!(a > 0.0)) throw std::invalid_argument("project_to_constraint: trivial function");
  const double c = tri.b * trace_power(metric, region, u, tri.r);
  double k;
  try {
    k = unit_root(a, c, tri.q, tri.r);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("project_to_constraint: constraint unsatisfiable");
  }
  return {k, u.scaled(k)};
}

}  // namespace eyam
