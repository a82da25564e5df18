#pragma once

// The quadratic energy
//   E(u) = int_Omega |grad u|^2 + c_n R u^2 dV + d_n int_Sigma H (gamma u)^2 dsigma
// and the curvature functional
//   F_{q,r}(u) = E(u+1) - (n-2)/(2q(n-1)) int R' |u+1|^q dV
//                       - (n-2)/r int_dM H' |gamma(u+1)|^r dsigma.

#include <cstdint>
#include <vector>

#include "eyam/domain.hpp"
#include "eyam/normalize.hpp"

namespace eyam {

struct EnergyBreakdown {
  double dirichlet = 0.0;
  double interior_R = 0.0;
  double boundary_H = 0.0;
  double total = 0.0;
};

EnergyBreakdown energy(const Metric& metric, const RegionPair& region, const GridFunction& u);

// Nodal partial derivatives of energy(); zero at constrained nodes.
GridFunction energy_gradient(const Metric& metric, const RegionPair& region, const GridFunction& u);

// ||u||^2_{L^2_delta(Omega)} + ||gamma u||^2_{L^2(Sigma)} (lumped).
double weight_form(const Metric& metric, const RegionPair& region, double delta,
                   const GridFunction& u);

// ||u||_{L^2_delta(M, dM)}.
double l2_delta_boundary_norm(const Metric& metric, double delta, const GridFunction& u);

// F_{q,r} on the full pair (M, dM); tri.b is ignored.
double f_qr(const Metric& metric, const CurvatureTarget& target, const ExponentTriple& tri,
            const GridFunction& u);
GridFunction f_qr_gradient(const Metric& metric, const CurvatureTarget& target,
                           const ExponentTriple& tri, const GridFunction& u);

struct CoercivityRow {
  double B = 0.0;
  double K_hat = 0.0;   // largest sampled norm with F < B (0 if none)
  int below = 0;        // number of samples with F < B
};

// Samples u >= -1 and (q, r) in [q0, 2 qbar) x [r0, qbar + 1).
std::vector<CoercivityRow> probe_coercivity(const Metric& metric, const CurvatureTarget& target,
                                            double q0, double r0, const std::vector<double>& B_list,
                                            int samples, std::uint64_t seed);

}  // namespace eyam
