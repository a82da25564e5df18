#pragma once

// Prescribing non-positive scalar and boundary mean curvature:
//   -(1/c_n) Lap phi + R phi = R' phi^{2qbar-1}   in M
//   (1/d_n) d_{nu_out} phi + H phi = H' phi^{qbar}   on dM
// with phi = 1 + u -> 1 at infinity.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eyam/domain.hpp"
#include "eyam/spectral.hpp"

namespace eyam {

enum class Gate { kPassed, kFailed, kSkipped };
std::string to_string(Gate g);

struct StageRecord {
  std::string name;
  double q = 0.0;
  double r = 0.0;
  bool converged = false;
  int iterations = 0;
  double residual_interior = 0.0;
  double residual_boundary = 0.0;
  double norm_w12 = 0.0;  // ||u||_{W^{1,2}_{delta*}} after the stage
  std::string message;
};

struct ReadbackCheck {
  std::vector<double> R;       // read-back scalar curvature
  double H = 0.0;              // read-back mean curvature
  double error_R = 0.0;        // L^2_0 norm of R - R'
  double error_H = 0.0;        // |H - H'|
  double scale_R = 0.0;
  double scale_H = 0.0;
  double tol_R = 0.0;          // 10 h^2 scale_R
  double tol_H = 0.0;
  bool ok = false;
};

struct SolveReport {
  GridFunction solution;
  double residual_interior = 0.0;
  double residual_boundary = 0.0;
  double tolerance = 0.0;      // absolute residual tolerance used
  bool ordering_ok = true;
  bool converged = false;
  int iterations = 0;
  Gate gate = Gate::kSkipped;
  std::string gate_reason;
  std::optional<Sign> gate_sign;
  std::vector<StageRecord> stages;
  std::vector<double> f_history;
  int failed_stage = -1;
  std::string message;
  std::optional<ReadbackCheck> readback;
  std::optional<int> cutoff_index;  // k of the accepted chi_k
  // reduce_curvature with record_iterates: subsolution v and u^0, u^1, ...
  std::vector<double> subsolution;
  std::vector<std::vector<double>> iterates;
};

struct SolverOptions {
  int max_iters = 200;              // Newton iterations per stage
  double tol = 1e-8;                // relative residual tolerance
  bool check_gate = true;
  std::vector<double> delta_list = {0.0};
  int continuation_steps = 6;
  double r_cut = 0.0;               // flatten_ends cut; 0 selects sqrt(R_max)
  double r_base = 2.0;              // chi_k steps at 2^k r_base
  int reduce_max_iters = 500;
  double readback_delta = 0.0;      // weight of the read-back L^2 norm
  double readback_factor = 10.0;    // tolerance factor in front of h^2
  bool record_iterates = false;
};

// -Lap_g u + c u = f in M, d_{nu_out} u + d gamma u = h on dM, u -> 0.
// Requires c >= 0 and d >= 0 unless `waive` is set.
GridFunction solve_linear_robin(const Metric& metric, const GridFunction& c, double d,
                                const GridFunction& f, double h, bool waive = false);

// Damped Newton on F_{q,r}, started from `start` (zero if absent).
SolveReport minimize_subcritical(const Metric& metric, const CurvatureTarget& target, double q,
                                 double r, const SolverOptions& opts,
                                 const GridFunction* start = nullptr);

// Geometric schedule of `steps` pairs ending at (2 qbar, qbar + 1).
std::vector<std::pair<double, double>> default_schedule(const DimensionConstants& d, int steps = 6);

SolveReport continuation_to_critical(const Metric& metric, const CurvatureTarget& target,
                                     const std::vector<std::pair<double, double>>& schedule,
                                     const SolverOptions& opts);

// Monotone iteration between the subsolution v and the supersolution 0.
// The metric is apply_conformal(metric, 1 + u).
std::pair<SolveReport, Metric> reduce_curvature(const Metric& metric, const GridFunction& Rt,
                                                double Ht, const SolverOptions& opts);

// Conformal change realizing R chi_{[1, r_cut]} with H unchanged. Throws
// std::runtime_error on non-convergence.
Metric flatten_ends(const Metric& metric, double r_cut, const SolverOptions& opts);

// Smoothed radial step: 1 below 2^k r_base, 0 beyond 2^{k+1} r_base.
std::vector<double> cutoff_profile(const RadialGrid& grid, int k, double r_base);

SolveReport prescribe_pipeline(const Metric& metric, const CurvatureTarget& target,
                               const SolverOptions& opts);

// Read-back of (R', H') from metric and 1 + u.
ReadbackCheck readback_check(const Metric& metric, const GridFunction& u,
                             const CurvatureTarget& target, const SolverOptions& opts);

}  // namespace eyam
