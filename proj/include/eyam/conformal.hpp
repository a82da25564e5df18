#pragma once

// Conformal change g' = psi^{4/(n-2)} g and the curvature read-back
//   R' = psi^{1-2qbar} (-(1/c_n) Lap_g psi + R psi)
//   H' = psi(1)^{-qbar} ((1/d_n) d_{nu_out} psi + H psi(1))

#include <vector>

#include "eyam/domain.hpp"

namespace eyam {

CurvatureTarget conformal_curvatures(const Metric& metric, const GridFunction& psi);

Metric apply_conformal(const Metric& metric, const GridFunction& psi);

// Factor psi with curvature fields given by the caller instead of read back.
Metric conformal_with_fields(const Metric& metric, const GridFunction& psi,
                             std::vector<double> R, double H);

struct MmsCase {
  GridFunction phi;       // 1 + a r^{2-n}
  CurvatureTarget target; // R' = 0, H' = (3a+1)/(1+a)^qbar
  GridFunction u_exact;   // a r^{2-n}
};

MmsCase mms_case(const GridPtr& grid, double a);

// Magnitudes of the terms entering the read-back formulas; the reference
// scale for read-back errors.
struct ReadbackScale {
  std::vector<double> R;  // nodewise psi^{1-2qbar} ((1/c_n) |Lap terms| + |R psi|)
  double H = 0.0;
};

ReadbackScale readback_scale(const Metric& metric, const GridFunction& psi);

// sqrt(int rho^{-2 delta - n} f^2 dV) over M in the metric volume.
double l2_delta_norm(const Metric& metric, double delta, const std::vector<double>& f);

}  // namespace eyam
