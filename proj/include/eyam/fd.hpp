#pragma once

// Finite-difference derivatives on the nonuniform radial grid.

#include <span>
#include <vector>

#include "eyam/domain.hpp"

namespace eyam {

// Fornberg weights: w[k][j] approximates the k-th derivative at x0 from the
// samples at x[j], for k = 0..m.
std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> x, int m);

struct RadialDerivatives {
  std::vector<double> d1;  // u'(r_i)
  std::vector<double> d2;  // u''(r_i)
};

// Three-point central formulas inside; one-sided three-point u' and
// four-point u'' at the two ends. Values are differenced against v[0] so a
// constant yields exact zeros.
RadialDerivatives radial_derivatives(const RadialGrid& grid, std::span<const double> v);

}  // namespace eyam
