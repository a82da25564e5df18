#include "eyam/prescribe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "eyam/assembly.hpp"
#include "eyam/calculus.hpp"
#include "eyam/conformal.hpp"
#include "eyam/energy.hpp"
#include "eyam/tridiag.hpp"
#include "eyam/yamabe.hpp"

namespace eyam {

std::string to_string(Gate g) {
  switch (g) {
    case Gate::kPassed: return "passed";
    case Gate::kFailed: return "failed";
    case Gate::kSkipped: return "skipped";
  }
  return "unknown";
}

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// The semilinear system N(u) = 0 with N = (1/2) grad F_{q,r}:
//   N_i = (K phi)_i + m_i c_n (R_i phi_i - R'_i |phi_i|^{q-2} phi_i)
//       + [i = 0] |dM| d_n (H phi_0 - H' |phi_0|^{r-2} phi_0),   phi = 1 + u.
struct Semilinear {
  const Metric& metric;
  Assembly a;
  std::vector<double> Rt;
  double Ht;
  double q, r;

  Semilinear(const Metric& m, std::vector<double> rt, double ht, double qq, double rr)
      : metric(m), a(assemble(m, full_region(*m.grid))), Rt(std::move(rt)), Ht(ht), q(qq), r(rr) {}

  std::vector<double> residual(const GridFunction& u) const {
    const auto& d = metric.dims();
    auto N = dirichlet_apply(a, u);
    for (std::size_t i = 0; i < N.size(); ++i) {
      const double p = 1.0 + u.values[i];
      N[i] += a.mass[i] * d.c_n * (metric.R[i] * p - Rt[i] * std::pow(std::abs(p), q - 2.0) * p);
    }
    const double p0 = 1.0 + u.trace();
    N[0] += a.area * d.d_n * (metric.H * p0 - Ht * std::pow(std::abs(p0), r - 2.0) * p0);
    return N;
  }

  // Jacobian of N; interior coefficient c_i and boundary coefficient db are
  // returned for reuse.
  SymTridiag jacobian(const GridFunction& u) const {
    const auto& d = metric.dims();
    SymTridiag J = a.stiffness;
    J.diag.back() += a.tail;
    for (std::size_t i = 0; i < J.size(); ++i) {
      const double p = 1.0 + u.values[i];
      J.diag[i] += a.mass[i] * d.c_n * (metric.R[i] - (q - 1.0) * Rt[i] * std::pow(std::abs(p), q - 2.0));
    }
    const double p0 = 1.0 + u.trace();
    J.diag[0] += a.area * d.d_n * (metric.H - (r - 1.0) * Ht * std::pow(std::abs(p0), r - 2.0));
    return J;
  }

  double scale() const {
    const auto& d = metric.dims();
    return 1.0 + d.c_n * (max_abs(metric.R) + max_abs(Rt)) + d.d_n * (std::abs(metric.H) + std::abs(Ht));
  }

  // (interior L^2_0 norm of N_i / m_i over i >= 1, |N_0| / |dM|)
  std::pair<double, double> norms(const std::vector<double>& N) const {
    const auto& g = *metric.grid;
    double s = 0.0;
    for (std::size_t i = 1; i < N.size(); ++i)
      s += N[i] * N[i] / a.mass[i] * std::pow(g.rho[i], -g.dim());
    return {std::sqrt(s), std::abs(N[0]) / a.area};
  }
};

double min_phi(const GridFunction& u) {
  double m = std::numeric_limits<double>::infinity();
  for (double v : u.values) m = std::min(m, 1.0 + v);
  return m;
}

void check_nonpositive_target(const CurvatureTarget& t) {
  for (double v : t.Rp)
    if (v > 0.0) throw std::invalid_argument("target scalar curvature must be <= 0");
  if (t.Hp > 0.0) throw std::invalid_argument("target mean curvature must be <= 0");
}

// Gate on the zero-set pair; returns true when positive.
bool run_gate(const Metric& metric, const CurvatureTarget& target, const SolverOptions& opts,
              SolveReport& rep) {
  const auto Z = zero_set(target, *metric.grid);
  try {
    const auto cls = classify_sign_detailed(metric, Z, opts.delta_list);
    rep.gate_sign = cls.sign;
    if (cls.sign == Sign::kPositive) {
      rep.gate = Gate::kPassed;
      return true;
    }
    rep.gate = Gate::kFailed;
    rep.gate_reason = cls.sign == Sign::kZero ? "zero-within-tolerance" : "negative";
  } catch (const std::runtime_error& e) {
    rep.gate = Gate::kFailed;
    rep.gate_reason = e.what();
  }
  rep.message = "zero-set pair is not Yamabe positive";
  return false;
}

double w12_norm(const GridFunction& u) {
  return weighted_norm(u, {1, 2.0, u.grid->dims.delta_star});
}

}  // namespace

GridFunction solve_linear_robin(const Metric& metric, const GridFunction& c, double d,
                                const GridFunction& f, double h, bool waive) {
  const auto& g = *metric.grid;
  if (!waive) {
    for (double v : c.values)
      if (v < 0.0) throw std::invalid_argument("solve_linear_robin: c must be >= 0");
    if (d < 0.0) throw std::invalid_argument("solve_linear_robin: d must be >= 0");
  }
  const auto a = assemble(metric, full_region(g));
  SymTridiag L = a.stiffness;
  L.diag.back() += a.tail;
  std::vector<double> rhs(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    L.diag[i] += a.mass[i] * c.values[i];
    rhs[i] = a.mass[i] * f.values[i];
  }
  L.diag[0] += a.area * d;
  rhs[0] += a.area * h;
  std::vector<double> u;
  if (!solve_spd(L, rhs, u)) throw std::runtime_error("non-coercive system");
  return GridFunction(metric.grid, std::move(u));
}

SolveReport minimize_subcritical(const Metric& metric, const CurvatureTarget& target, double q,
                                 double r, const SolverOptions& opts, const GridFunction* start) {
  const auto& d = metric.dims();
  check_nonpositive_target(target);
  const double eps = 1e-12;
  if (!(r >= 2.0 - eps && q >= r && q <= d.two_qbar + eps && r <= d.qbar_plus_1 + eps))
    throw std::invalid_argument("minimize_subcritical: exponents out of range");

  SolveReport rep;
  if (opts.check_gate && !run_gate(metric, target, opts, rep)) return rep;

  const Semilinear sys(metric, target.Rp, target.Hp, q, r);
  const ExponentTriple tri{q, r, 0.0};
  GridFunction u = start ? *start : GridFunction::zeros(metric.grid);
  rep.tolerance = opts.tol * sys.scale();
  double F = f_qr(metric, target, tri, u);
  rep.f_history.push_back(F);

  auto N = sys.residual(u);
  int it = 0;
  for (;; ++it) {
    std::tie(rep.residual_interior, rep.residual_boundary) = sys.norms(N);
    if (rep.residual_interior <= rep.tolerance && rep.residual_boundary <= rep.tolerance) {
      rep.converged = true;
      break;
    }
    if (it >= opts.max_iters) {
      rep.message = "iteration cap reached";
      break;
    }
    SymTridiag J = sys.jacobian(u);
    std::vector<double> neg(N.size()), du;
    for (std::size_t i = 0; i < N.size(); ++i) neg[i] = -N[i];
    if (!solve_spd(J, neg, du)) {
      // Levenberg shift until positive definite.
      double mu = 1e-8;
      const SymTridiag J0 = J;
      bool ok = false;
      for (int k = 0; k < 40 && !ok; ++k, mu *= 10.0) {
        J = J0;
        for (std::size_t i = 0; i < J.size(); ++i) J.diag[i] += mu * std::abs(J0.diag[i]);
        ok = solve_spd(J, neg, du);
      }
      if (!ok) {
        rep.message = "Hessian could not be regularized";
        break;
      }
    }
    double slope = 0.0;
    for (std::size_t i = 0; i < N.size(); ++i) slope += 2.0 * N[i] * du[i];
    const double floor = 0.01 * min_phi(u);
    double t = 1.0;
    bool accepted = false;
    GridFunction trial = u;
    double Ft = F;
    for (int ls = 0; ls <= 40; ++ls, t *= 0.5) {
      for (std::size_t i = 0; i < u.size(); ++i) trial.values[i] = u.values[i] + t * du[i];
      if (min_phi(trial) < floor) continue;
      Ft = f_qr(metric, target, tri, trial);
      if (Ft <= F + 1e-4 * t * slope + 1e-14 * std::abs(F)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      rep.message = "line search failed";
      break;
    }
    u = std::move(trial);
    F = Ft;
    rep.f_history.push_back(F);
    N = sys.residual(u);
  }
  rep.iterations = it;
  rep.ordering_ok = min_phi(u) > 0.0;
  if (!rep.ordering_ok) rep.converged = false;
  rep.solution = std::move(u);
  return rep;
}

std::vector<std::pair<double, double>> default_schedule(const DimensionConstants& d, int steps) {
  if (steps < 1) throw std::invalid_argument("default_schedule: steps must be >= 1");
  const double qc = d.two_qbar, rc = d.qbar_plus_1;
  const double q0 = std::min(3.0, 1.0 + d.qbar);
  const double r0 = std::min(2.5, (3.0 + d.qbar) / 2.0);
  std::vector<std::pair<double, double>> s;
  if (steps == 1) return {{qc, rc}};
  for (int k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) / (steps - 1);
    s.emplace_back(q0 * std::pow(qc / q0, t), r0 * std::pow(rc / r0, t));
  }
  s.back() = {qc, rc};
  return s;
}

SolveReport continuation_to_critical(const Metric& metric, const CurvatureTarget& target,
                                     const std::vector<std::pair<double, double>>& schedule,
                                     const SolverOptions& opts) {
  const auto& d = metric.dims();
  if (schedule.empty()) throw std::invalid_argument("continuation: empty schedule");
  for (std::size_t k = 1; k < schedule.size(); ++k)
    if (!(schedule[k].first >= schedule[k - 1].first && schedule[k].second >= schedule[k - 1].second &&
          (schedule[k].first > schedule[k - 1].first || schedule[k].second > schedule[k - 1].second)))
      throw std::invalid_argument("continuation: schedule must increase");
  if (std::abs(schedule.back().first - d.two_qbar) > 1e-12 ||
      std::abs(schedule.back().second - d.qbar_plus_1) > 1e-12)
    throw std::invalid_argument("continuation: schedule must end at the critical pair");
  check_nonpositive_target(target);

  SolveReport out;
  if (opts.check_gate && !run_gate(metric, target, opts, out)) return out;
  SolverOptions inner = opts;
  inner.check_gate = false;

  GridFunction u = GridFunction::zeros(metric.grid);
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const auto [q, r] = schedule[k];
    auto rep = minimize_subcritical(metric, target, q, r, inner, &u);
    StageRecord st{"subcritical", q, r, rep.converged, rep.iterations, rep.residual_interior,
                   rep.residual_boundary, w12_norm(rep.solution), rep.message};
    out.stages.push_back(st);
    out.iterations += rep.iterations;
    out.f_history.insert(out.f_history.end(), rep.f_history.begin(), rep.f_history.end());
    u = rep.solution;
    out.residual_interior = rep.residual_interior;
    out.residual_boundary = rep.residual_boundary;
    out.tolerance = rep.tolerance;
    out.ordering_ok = rep.ordering_ok;
    if (!rep.converged) {
      out.failed_stage = static_cast<int>(k);
      out.message = "stage " + std::to_string(k) + " failed: " + rep.message;
      out.solution = u;
      return out;
    }
  }
  out.converged = true;
  out.solution = std::move(u);
  return out;
}

std::pair<SolveReport, Metric> reduce_curvature(const Metric& metric, const GridFunction& Rt,
                                                double Ht, const SolverOptions& opts) {
  const auto& g = *metric.grid;
  const auto& d = g.dims;
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n; ++i)
    if (Rt.values[i] > metric.R[i]) throw std::invalid_argument("reduce_curvature: need Rt <= R");
  if (Ht > metric.H) throw std::invalid_argument("reduce_curvature: need Ht <= H");

  SolveReport rep;
  const double ex = d.two_qbar, eb = d.qbar_plus_1;
  const Semilinear sys(metric, Rt.values, Ht, ex, eb);
  rep.tolerance = opts.tol * sys.scale();

  // Subsolution from the linear problem with coefficients R - min(0, Rt) >= 0.
  std::vector<double> c(n), f(n);
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = d.c_n * (metric.R[i] - std::min(0.0, Rt.values[i]));
    f[i] = -c[i];
  }
  const double db = d.d_n * (metric.H - std::min(0.0, Ht));
  const GridFunction v = solve_linear_robin(metric, GridFunction(metric.grid, c), db,
                                            GridFunction(metric.grid, f), -db);
  constexpr double kOrderTol = 1e-12;
  for (double x : v.values)
    if (!(x > -1.0) || x > kOrderTol) {
      rep.ordering_ok = false;
      rep.message = "subsolution outside (-1, 0]";
      rep.solution = v;
      return {rep, metric};
    }

  auto gprime = [&](std::size_t i, double uu) {
    return d.c_n * (metric.R[i] - (ex - 1.0) * Rt.values[i] * std::pow(1.0 + uu, ex - 2.0));
  };
  auto gprime_b = [&](double uu) {
    return d.d_n * (metric.H - (eb - 1.0) * Ht * std::pow(1.0 + uu, eb - 2.0));
  };

  GridFunction u = GridFunction::zeros(metric.grid);
  if (opts.record_iterates) {
    rep.subsolution = v.values;
    rep.iterates.push_back(u.values);
  }
  auto N = sys.residual(u);
  int it = 0;
  bool picard = false;
  for (;; ++it) {
    std::tie(rep.residual_interior, rep.residual_boundary) = sys.norms(N);
    if (rep.residual_interior <= rep.tolerance && rep.residual_boundary <= rep.tolerance) {
      rep.converged = true;
      break;
    }
    if (it >= opts.reduce_max_iters) {
      rep.message = "iteration cap reached";
      break;
    }
    SymTridiag L = sys.a.stiffness;
    L.diag.back() += sys.a.tail;
    std::vector<double> neg(n), w;
    for (std::size_t i = 0; i < n; ++i) neg[i] = -N[i];
    auto build = [&](bool clamp) {
      SymTridiag M = L;
      for (std::size_t i = 0; i < n; ++i) {
        double ci;
        if (clamp) {
          ci = std::max(0.0, Rt.values[i] <= 0.0 ? gprime(i, 0.0) : gprime(i, v.values[i]));
        } else {
          ci = Rt.values[i] <= 0.0 ? gprime(i, u.values[i]) : gprime(i, v.values[i]);
        }
        M.diag[i] += sys.a.mass[i] * ci;
      }
      double cb;
      if (clamp) cb = std::max(0.0, Ht <= 0.0 ? gprime_b(0.0) : gprime_b(v.trace()));
      else cb = Ht <= 0.0 ? gprime_b(u.trace()) : gprime_b(v.trace());
      M.diag[0] += sys.a.area * cb;
      return M;
    };
    if (picard || !solve_spd(build(false), neg, w)) {
      picard = true;
      if (!solve_spd(build(true), neg, w)) {
        rep.message = "monotone iteration operator is not coercive";
        break;
      }
    }
    GridFunction next = u;
    for (std::size_t i = 0; i < n; ++i) next.values[i] += w[i];
    if (opts.record_iterates) rep.iterates.push_back(next.values);
    for (std::size_t i = 0; i < n; ++i) {
      if (next.values[i] - u.values[i] > kOrderTol || v.values[i] - next.values[i] > kOrderTol) {
        rep.ordering_ok = false;
        rep.message = "monotone ordering violated at iterate " + std::to_string(it + 1) + ", node " +
                      std::to_string(i);
        rep.iterations = it + 1;
        rep.solution = next;
        return {rep, metric};
      }
    }
    const double step = max_abs(w);
    u = std::move(next);
    N = sys.residual(u);
    if (step == 0.0) {
      std::tie(rep.residual_interior, rep.residual_boundary) = sys.norms(N);
      rep.converged = rep.residual_interior <= rep.tolerance && rep.residual_boundary <= rep.tolerance;
      if (!rep.converged) rep.message = "stagnated";
      ++it;
      break;
    }
  }
  rep.iterations = it;
  if (picard && rep.message.empty()) rep.message = "picard fallback";
  rep.solution = u;
  if (!rep.converged) return {rep, metric};
  return {rep, apply_conformal(metric, u.shifted(1.0))};
}

Metric flatten_ends(const Metric& metric, double r_cut, const SolverOptions& opts) {
  const auto& g = *metric.grid;
  const auto& d = g.dims;
  if (!(r_cut > 1.0 && r_cut < g.r_max())) throw std::invalid_argument("flatten_ends: need 1 < r_cut < R_max");
  std::vector<double> Rt(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) Rt[i] = g.nodes[i] <= r_cut ? metric.R[i] : 0.0;
  if (Rt == metric.R) return metric;

  auto solve = [&](const std::vector<double>& target, GridFunction& u) {
    const Semilinear sys(metric, target, metric.H, d.two_qbar, d.qbar_plus_1);
    const double tol = opts.tol * sys.scale();
    auto N = sys.residual(u);
    auto merit = [&](const std::vector<double>& r) {
      const auto [a, b] = sys.norms(r);
      return a * a + b * b;
    };
    double m = merit(N);
    for (int it = 0; it < opts.max_iters; ++it) {
      const auto [ri, rb] = sys.norms(N);
      if (ri <= tol && rb <= tol) return true;
      std::vector<double> neg(N.size()), du;
      for (std::size_t i = 0; i < N.size(); ++i) neg[i] = -N[i];
      if (!solve_symmetric(sys.jacobian(u), neg, du)) return false;
      const double floor = 0.01 * min_phi(u);
      GridFunction trial = u;
      bool accepted = false;
      double t = 1.0;
      for (int ls = 0; ls <= 40; ++ls, t *= 0.5) {
        for (std::size_t i = 0; i < u.size(); ++i) trial.values[i] = u.values[i] + t * du[i];
        if (min_phi(trial) < floor) continue;
        auto Nt = sys.residual(trial);
        const double mt = merit(Nt);
        if (mt <= (1.0 - 1e-4 * t) * m) {
          u = trial;
          N = std::move(Nt);
          m = mt;
          accepted = true;
          break;
        }
      }
      if (!accepted) return false;
    }
    const auto [ri, rb] = sys.norms(N);
    return ri <= tol && rb <= tol;
  };

  GridFunction u = GridFunction::zeros(metric.grid);
  if (!solve(Rt, u)) {
    // Homotopy from R to the truncated field.
    u = GridFunction::zeros(metric.grid);
    bool ok = true;
    const int steps = 16;
    for (int k = 1; k <= steps && ok; ++k) {
      const double s = static_cast<double>(k) / steps;
      std::vector<double> Rs(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) Rs[i] = metric.R[i] + s * (Rt[i] - metric.R[i]);
      ok = solve(Rs, u);
    }
    if (!ok) throw std::runtime_error("flatten_ends: Newton did not converge");
  }
  return conformal_with_fields(metric, u.shifted(1.0), std::move(Rt), metric.H);
}

std::vector<double> cutoff_profile(const RadialGrid& grid, int k, double r_base) {
  const double a = std::ldexp(r_base, k), b = 2.0 * a;
  std::vector<double> chi(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = std::clamp((grid.nodes[i] - a) / (b - a), 0.0, 1.0);
    chi[i] = 1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
  }
  return chi;
}

ReadbackCheck readback_check(const Metric& metric, const GridFunction& u,
                             const CurvatureTarget& target, const SolverOptions& opts) {
  const auto psi = u.shifted(1.0);
  const auto t = conformal_curvatures(metric, psi);
  const auto sc = readback_scale(metric, psi);
  ReadbackCheck c;
  std::vector<double> diff(t.Rp.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = t.Rp[i] - target.Rp[i];
  c.R = t.Rp;
  c.H = t.Hp;
  c.error_R = l2_delta_norm(metric, opts.readback_delta, diff);
  c.error_H = std::abs(t.Hp - target.Hp);
  c.scale_R = l2_delta_norm(metric, opts.readback_delta, sc.R);
  c.scale_H = sc.H;
  const double h = metric.grid->log_step();
  c.tol_R = opts.readback_factor * h * h * c.scale_R;
  c.tol_H = opts.readback_factor * h * h * c.scale_H;
  c.ok = c.error_R <= c.tol_R && c.error_H <= c.tol_H;
  return c;
}

SolveReport prescribe_pipeline(const Metric& metric, const CurvatureTarget& target,
                               const SolverOptions& opts) {
  const auto& g = *metric.grid;
  check_nonpositive_target(target);
  SolveReport rep;
  if (!run_gate(metric, target, opts, rep)) {
    rep.solution = GridFunction::zeros(metric.grid);
    return rep;
  }
  SolverOptions inner = opts;
  inner.check_gate = false;
  auto fail = [&](int stage, std::string msg) {
    rep.failed_stage = stage;
    rep.message = std::move(msg);
    rep.converged = false;
    if (rep.solution.values.empty()) rep.solution = GridFunction::zeros(metric.grid);
    return rep;
  };

  // 1. Compactly supported curvature.
  const double r_cut = opts.r_cut > 0.0 ? opts.r_cut : std::sqrt(g.r_max());
  Metric g1;
  try {
    g1 = flatten_ends(metric, r_cut, inner);
  } catch (const std::runtime_error& e) {
    rep.stages.push_back({"flatten_ends", 0, 0, false, 0, 0, 0, 0, e.what()});
    return fail(0, e.what());
  }
  rep.stages.push_back({"flatten_ends", 0, 0, true, 0, 0, 0, 0, ""});

  // 2. Truncated target chi_k R' whose zero set is still Yamabe positive.
  CurvatureTarget tk;
  bool found = false;
  for (int k = 0;; ++k) {
    const auto chi = cutoff_profile(g, k, opts.r_base);
    tk = target;
    for (std::size_t i = 0; i < g.size(); ++i) tk.Rp[i] = chi[i] * target.Rp[i];
    const auto Zk = zero_set(tk, g);
    Sign s;
    try {
      s = classify_sign(g1, Zk, opts.delta_list);
    } catch (const std::runtime_error&) {
      s = Sign::kZero;
    }
    if (s == Sign::kPositive || s == Sign::kInfinite) {
      rep.cutoff_index = k;
      found = true;
      break;
    }
    if (std::ldexp(opts.r_base, k) >= g.r_max()) break;
  }
  if (!found) {
    rep.stages.push_back({"cutoff", 0, 0, false, 0, 0, 0, 0, "no positive truncation"});
    return fail(1, "no truncated target passes the gate");
  }
  rep.stages.push_back({"cutoff", 0, 0, true, *rep.cutoff_index, 0, 0, 0, ""});

  // 3. Continuation to the critical exponents.
  const auto cont = continuation_to_critical(g1, tk, default_schedule(g.dims, opts.continuation_steps), inner);
  for (const auto& st : cont.stages) rep.stages.push_back(st);
  rep.f_history = cont.f_history;
  rep.iterations += cont.iterations;
  if (!cont.converged) {
    rep.solution = GridFunction::zeros(metric.grid);
    return fail(2, cont.message);
  }
  const Metric g2 = conformal_with_fields(g1, cont.solution.shifted(1.0), tk.Rp, tk.Hp);

  // 4. Reduce chi_k R' to R'.
  auto [red, g3] = reduce_curvature(g2, GridFunction(metric.grid, target.Rp), target.Hp, inner);
  rep.stages.push_back({"reduce_curvature", g.dims.two_qbar, g.dims.qbar_plus_1, red.converged,
                        red.iterations, red.residual_interior, red.residual_boundary,
                        w12_norm(red.solution), red.message});
  rep.iterations += red.iterations;
  rep.ordering_ok = red.ordering_ok;
  rep.residual_interior = red.residual_interior;
  rep.residual_boundary = red.residual_boundary;
  rep.tolerance = red.tolerance;

  std::vector<double> u(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    u[i] = g2.phi[i] * (1.0 + red.solution.values[i]) / metric.phi[i] - 1.0;
  rep.solution = GridFunction(metric.grid, std::move(u));
  if (!red.converged) return fail(3, red.message);

  // 5. Read-back on the original metric.
  rep.readback = readback_check(metric, rep.solution, target, opts);
  rep.converged = true;
  if (!rep.readback->ok) rep.message = "read-back outside tolerance";
  return rep;
}

}  // namespace eyam
