#include "eyam/yamabe.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>

#include "eyam/assembly.hpp"
#include "eyam/conformal.hpp"
#include "eyam/energy.hpp"
#include "eyam/tridiag.hpp"

namespace eyam {

namespace {

// Reduced problem on the free nodes.
struct Problem {
  std::vector<std::size_t> idx;
  SymTridiag A;              // E(x) = x^T A x
  SymTridiag P;              // W^{1,2}_{delta*} preconditioner
  std::vector<double> mass;  // L^q weights
  double area = 0.0;
  bool trace = false;        // x[0] is the trace node and Sigma is active
  ExponentTriple tri;
};

Problem build_problem(const Metric& metric, const RegionPair& region, const ExponentTriple& tri) {
  const auto& g = *metric.grid;
  const auto& d = g.dims;
  const auto a = assemble(metric, region);
  const auto fr = free_nodes(g, region);
  Problem p;
  p.tri = tri;
  for (std::size_t i = 0; i < fr.size(); ++i)
    if (fr[i]) p.idx.push_back(i);
  const std::size_t m = p.idx.size();
  p.A = SymTridiag(m);
  p.P = SymTridiag(m);
  p.mass.resize(m);
  p.area = a.area;
  p.trace = m > 0 && p.idx[0] == 0 && a.boundary;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = p.idx[k];
    double kd = a.stiffness.diag[i];
    if (i + 1 == g.size()) kd += a.tail;
    p.A.diag[k] = kd + d.c_n * metric.R[i] * a.mass[i];
    p.P.diag[k] = kd + a.mass[i] / (g.rho[i] * g.rho[i]);
    if (i == 0 && a.boundary) {
      p.A.diag[k] += d.d_n * metric.H * a.area;
      p.P.diag[k] += a.area;
    }
    p.mass[k] = a.mass[i];
    if (k + 1 < m && p.idx[k + 1] == i + 1) {
      p.A.off[k] = a.stiffness.off[i];
      p.P.off[k] = a.stiffness.off[i];
    }
  }
  return p;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct Eval {
  double k = 0.0;   // scale putting k x on the constraint
  double E = 0.0;   // E(x)
  double J = 0.0;   // k^2 E(x) = E(k x)
};

// Throws std::invalid_argument when x is trivial or the constraint cannot be met.
Eval evaluate(const Problem& p, const std::vector<double>& x) {
  double a = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) a += p.mass[k] * std::pow(std::abs(x[k]), p.tri.q);
  if (!(a > 0.0)) throw std::invalid_argument("trivial function");
  const double c = p.trace ? p.tri.b * p.area * std::pow(std::abs(x[0]), p.tri.r) : 0.0;
  Eval ev;
  ev.k = unit_root(a, c, p.tri.q, p.tri.r);
  const auto Ax = multiply(p.A, x);
  ev.E = dot(x, Ax);
  ev.J = ev.k * ev.k * ev.E;
  return ev;
}

std::vector<double> gradient(const Problem& p, const std::vector<double>& x, const Eval& ev) {
  const double q = p.tri.q, r = p.tri.r, k = ev.k;
  double a = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) a += p.mass[i] * std::pow(std::abs(x[i]), q);
  const double c = p.trace ? p.tri.b * p.area * std::pow(std::abs(x[0]), r) : 0.0;
  const double denom = q * a * std::pow(k, q - 1.0) + r * c * std::pow(k, r - 1.0);
  const auto Ax = multiply(p.A, x);
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double s = x[i] > 0.0 ? 1.0 : (x[i] < 0.0 ? -1.0 : 0.0);
    double dnum = std::pow(k, q) * q * p.mass[i] * std::pow(std::abs(x[i]), q - 1.0) * s;
    if (i == 0 && p.trace)
      dnum += std::pow(k, r) * p.tri.b * p.area * r * std::pow(std::abs(x[0]), r - 1.0) * s;
    const double dk = -dnum / denom;
    g[i] = 2.0 * k * ev.E * dk + k * k * 2.0 * Ax[i];
  }
  return g;
}

struct RunResult {
  std::vector<double> x;
  double J = std::numeric_limits<double>::infinity();
  int iterations = 0;
  double gnorm = 0.0;
  bool ok = false;
};

RunResult descend(const Problem& p, std::vector<double> x, const YamabeOptions& opts) {
  RunResult res;
  Eval ev;
  try {
    for (double& v : x) v = std::abs(v);
    ev = evaluate(p, x);
  } catch (const std::invalid_argument&) {
    return res;
  }
  for (double& v : x) v *= ev.k;
  ev = evaluate(p, x);
  double t = opts.step0;
  std::vector<double> dir, trial(x.size());
  int it = 0;
  for (; it < opts.max_iters; ++it) {
    const auto g = gradient(p, x, ev);
    if (!solve_spd(p.P, g, dir)) break;
    const double gd = dot(g, dir);
    res.gnorm = std::sqrt(std::max(gd, 0.0));
    if (res.gnorm <= opts.tol_grad * std::max(1.0, std::abs(ev.J))) break;
    bool accepted = false;
    Eval tv;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < x.size(); ++i) trial[i] = std::abs(x[i] - t * dir[i]);
      try {
        tv = evaluate(p, trial);
      } catch (const std::invalid_argument&) {
        t *= 0.5;
        continue;
      }
      if (tv.J <= ev.J - 1e-4 * t * gd) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = trial[i] * tv.k;
    ev = evaluate(p, x);
    t = std::min(4.0 * opts.step0, 2.0 * t);
  }
  res.x = std::move(x);
  res.J = ev.J;
  res.iterations = it;
  res.ok = true;
  return res;
}

void check_exponents(const DimensionConstants& d, const ExponentTriple& tri) {
  const double eps = 1e-12;
  if (tri.q < 2.0 - eps || tri.q > d.two_qbar + eps || tri.r < 2.0 - eps ||
      tri.r > d.qbar_plus_1 + eps || tri.r > tri.q)
    throw std::invalid_argument("yamabe: exponents out of range");
}

}  // namespace

std::vector<GridFunction> default_starts(const Metric& metric, const RegionPair& region,
                                         const YamabeOptions& opts) {
  const auto grid = metric.grid;
  const auto& g = *grid;
  const int n = g.dim();
  const auto fr = free_nodes(g, region);
  auto masked = [&](auto f) {
    std::vector<double> v(g.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i)
      if (fr[i]) v[i] = f(g.nodes[i]);
    return GridFunction(grid, std::move(v));
  };

  // Longest run of free nodes for the bump.
  std::size_t best_lo = 0, best_hi = 0, lo = 0;
  bool in_run = false;
  for (std::size_t i = 0; i <= fr.size(); ++i) {
    const bool f = i < fr.size() && fr[i];
    if (f && !in_run) {
      lo = i;
      in_run = true;
    }
    if (!f && in_run) {
      if (i - lo > best_hi - best_lo) {
        best_lo = lo;
        best_hi = i;
      }
      in_run = false;
    }
  }
  const double l0 = std::log(g.nodes[best_lo]);
  const double l1 = std::log(g.nodes[best_hi > 0 ? best_hi - 1 : 0]);
  const double mu = 0.5 * (l0 + l1), sig = std::max(0.25 * (l1 - l0), 1e-3);

  std::vector<GridFunction> starts;
  starts.push_back(masked([](double) { return 1.0; }));
  starts.push_back(masked([](double r) { return 1.0 / r; }));
  starts.push_back(masked([&](double r) {
    const double z = (std::log(r) - mu) / sig;
    return std::exp(-z * z) + 1e-3 * std::pow(r, 2.0 - n);
  }));
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 3; k < std::max(4, opts.restarts); ++k) {
    double c[3], al[3];
    for (int j = 0; j < 3; ++j) {
      c[j] = 0.1 + unit(rng);
      al[j] = (n - 2) / 2.0 + 0.1 + unit(rng) * (n - (n - 2) / 2.0);
    }
    starts.push_back(masked([&](double r) {
      double v = 0.0;
      for (int j = 0; j < 3; ++j) v += c[j] * std::pow(r, -al[j]);
      return v;
    }));
  }
  starts.resize(std::max(1, opts.restarts));
  return starts;
}

InvariantReport yamabe_infimum(const Metric& metric, const RegionPair& region,
                               const ExponentTriple& tri, const YamabeOptions& opts,
                               const std::vector<GridFunction>* starts) {
  check_exponents(metric.dims(), tri);
  if (opts.max_iters < 1 || !(opts.tol_grad > 0.0))
    throw std::invalid_argument("yamabe: invalid options");
  const Problem p = build_problem(metric, region, tri);
  InvariantReport rep;
  if (p.idx.empty()) {
    rep.value = std::numeric_limits<double>::infinity();
    rep.sign = Sign::kInfinite;
    return rep;
  }
  const auto local = starts ? *starts : default_starts(metric, region, opts);

  RunResult best;
  int total = 0;
  for (const auto& s : local) {
    std::vector<double> x(p.idx.size());
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = s.values[p.idx[k]];
    auto run = descend(p, std::move(x), opts);
    total += run.iterations;
    if (run.ok && run.J < best.J) best = std::move(run);
  }
  if (!best.ok) throw std::invalid_argument("yamabe: no admissible start");

  std::vector<double> full(metric.grid->size(), 0.0);
  for (std::size_t k = 0; k < p.idx.size(); ++k) full[p.idx[k]] = best.x[k];
  GridFunction u(metric.grid, std::move(full));
  const auto E = energy(metric, region, u);
  rep.value = best.J;
  rep.iterations = total;
  rep.residual = best.gnorm;
  rep.scale = E.dirichlet + std::abs(E.interior_R) + std::abs(E.boundary_H);
  rep.sign = classify_value(rep.value, rep.scale);
  rep.minimizer = std::move(u);
  return rep;
}

SignClassification classify_sign_detailed(const Metric& metric, const RegionPair& region,
                                          const std::vector<double>& delta_list) {
  if (delta_list.empty()) throw std::invalid_argument("classify_sign: empty delta list");
  SignClassification out;
  std::set<Sign> seen;
  for (double delta : delta_list) {
    auto rep = lambda_delta(metric, region, delta);
    seen.insert(rep.sign == Sign::kInfinite ? Sign::kPositive : rep.sign);
    out.deltas.push_back(delta);
    out.reports.push_back(std::move(rep));
  }
  if (seen.count(Sign::kPositive) && seen.count(Sign::kNegative))
    throw std::runtime_error("sign inconsistency");
  if (seen.count(Sign::kZero)) out.sign = Sign::kZero;
  else out.sign = *seen.begin();
  return out;
}

Sign classify_sign(const Metric& metric, const RegionPair& region,
                   const std::vector<double>& delta_list) {
  return classify_sign_detailed(metric, region, delta_list).sign;
}

SignTable sign_independence_suite(const Metric& metric, const RegionPair& region,
                                  const std::vector<double>& b_list,
                                  const std::vector<double>& r_list, const YamabeOptions& opts,
                                  int jobs) {
  const double q = metric.dims().two_qbar;
  std::vector<std::pair<double, double>> cells;
  for (double b : b_list)
    for (double r : r_list) cells.emplace_back(b, r);
  auto run = [&](std::pair<double, double> c) {
    const auto rep = yamabe_infimum(metric, region, {q, c.second, c.first}, opts);
    return SignCell{c.first, c.second, rep.value,
                    rep.sign == Sign::kInfinite ? Sign::kPositive : rep.sign};
  };
  SignTable t;
  t.cells.resize(cells.size());
  const std::size_t J = std::max(1, jobs);
  for (std::size_t start = 0; start < cells.size(); start += J) {
    std::vector<std::future<SignCell>> fut;
    for (std::size_t k = start; k < std::min(cells.size(), start + J); ++k)
      fut.push_back(std::async(J > 1 ? std::launch::async : std::launch::deferred, run, cells[k]));
    for (std::size_t k = 0; k < fut.size(); ++k) t.cells[start + k] = fut[k].get();
  }
  for (const auto& c : t.cells)
    if (c.sign != t.cells.front().sign) t.all_equal = false;
  return t;
}

ConformalCheck conformal_invariance_check(const Metric& metric, const RegionPair& region,
                                          const GridFunction& phi, double r,
                                          const YamabeOptions& opts) {
  for (double v : phi.values)
    if (!(v > 0.0)) throw std::invalid_argument("conformal_invariance_check: phi must be positive");
  const ExponentTriple tri{metric.dims().two_qbar, r, 0.0};
  const auto starts = default_starts(metric, region, opts);
  std::vector<GridFunction> mapped;
  for (const auto& s : starts) {
    auto v = s;
    for (std::size_t i = 0; i < v.size(); ++i) v.values[i] /= phi.values[i];
    mapped.push_back(std::move(v));
  }
  const Metric g2 = apply_conformal(metric, phi);
  ConformalCheck c;
  c.v1 = yamabe_infimum(metric, region, tri, opts, &starts).value;
  c.v2 = yamabe_infimum(g2, region, tri, opts, &mapped).value;
  const double den = std::max(std::abs(c.v1), std::abs(c.v2));
  c.rel_diff = den > 0.0 ? std::abs(c.v1 - c.v2) / den : 0.0;
  return c;
}

}  // namespace eyam
