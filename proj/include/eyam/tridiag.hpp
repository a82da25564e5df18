#pragma once

// Symmetric tridiagonal matrices: LDL^T solves, inertia counts, Gershgorin.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace eyam {

struct SymTridiag {
  std::vector<double> diag;
  std::vector<double> off;  // off[i] couples i and i+1

  SymTridiag() = default;
  explicit SymTridiag(std::size_t n) : diag(n, 0.0), off(n > 0 ? n - 1 : 0, 0.0) {}
  std::size_t size() const { return diag.size(); }
};

std::vector<double> multiply(const SymTridiag& t, std::span<const double> x);

// LDL^T solve. Returns false (x untouched) when a pivot is not strictly
// positive, i.e. the matrix is not positive definite.
bool solve_spd(const SymTridiag& t, std::span<const double> b, std::vector<double>& x);

// Solve without the definiteness requirement; false on a vanishing pivot.
bool solve_symmetric(const SymTridiag& t, std::span<const double> b, std::vector<double>& x);

// Number of negative pivots of T - sigma * W (W diagonal, positive). By
// Sylvester's law this is the number of eigenvalues of the pencil below sigma.
int negative_count(const SymTridiag& t, std::span<const double> w, double sigma);

// Gershgorin interval of T.
std::pair<double, double> gershgorin(const SymTridiag& t);

}  // namespace eyam
