#pragma once

// P1 finite elements on the radial grid with lumped mass. Shared by the
// energy, eigenvalue and solver modules.
//
// For g = phi^{4/(n-2)} * flat the Dirichlet density is phi^2 |u'|^2 r^{n-1}
// and the volume density phi^{2n/(n-2)} r^{n-1}. The far field beyond R_max
// is closed by the energy of the exact decay mode r^{2-n}, which adds
// tail * (u_N - u_inf)^2 and yields the Robin row u' + (n-2)/R_max u = 0.

#include <span>
#include <vector>

#include "eyam/domain.hpp"
#include "eyam/tridiag.hpp"

namespace eyam {

struct Assembly {
  SymTridiag stiffness;       // sum over elements inside Omega, no tail
  std::vector<double> mass;   // omega * w_i^Omega * phi_i^{2n/(n-2)}
  double area = 0.0;          // |dM|_g
  bool boundary = false;      // boundary terms active
  double tail = 0.0;          // far-field coefficient (0 when r = R_max is outside Omega)
};

Assembly assemble(const Metric& metric, const RegionPair& region);

// omega (n-2) R_max^{n-2} phi_N^2
double tail_coefficient(const Metric& metric);

// sum_e k_e (u_{e+1}-u_e)^2 + tail (u_N - far)^2
double dirichlet_form(const Assembly& a, const GridFunction& u);

// K u + tail (u_N - far) e_N
std::vector<double> dirichlet_apply(const Assembly& a, const GridFunction& u);

}  // namespace eyam
