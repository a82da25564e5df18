#pragma once

// Radial exterior manifold [1, R_max] x S^{n-1}: grids, conformally flat
// metrics, grid functions, region pairs (Omega, Sigma) and curvature targets.
//
// Conventions used throughout the library:
//  * H is the normalized mean curvature (trace / (n-1)) of the inner sphere
//    taken w.r.t. the inner normal +d_r; the flat exterior has H = +1.
//  * Boundary derivatives are d_{nu_out} = -d_r, the normal leaving M.
//  * Sigma is all-or-nothing: either the whole inner sphere or nothing.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace eyam {

struct DimensionConstants {
  int n = 3;
  double qbar = 3.0;         // n/(n-2)
  double two_qbar = 6.0;     // 2n/(n-2), critical Sobolev exponent
  double qbar_plus_1 = 4.0;  // critical trace exponent
  double delta_star = -0.5;  // (2-n)/2
  double c_n = 0.125;        // (n-2)/(4(n-1))
  double d_n = 0.5;          // (n-2)/2

  static DimensionConstants make(int n);
};

enum class Spacing { kLog, kUniform };

Spacing parse_spacing(const std::string& s);
std::string to_string(Spacing s);

class RadialGrid {
 public:
  DimensionConstants dims;
  Spacing spacing = Spacing::kLog;
  std::vector<double> nodes;         // r_0 = 1 < ... < r_N = R_max
  std::vector<double> quad_weights;  // w_i = int hat_i(r) r^{n-1} dr
  std::vector<double> rho;           // rho(r_i) = r_i
  double sphere_area = 0.0;          // omega_{n-1}

  // Per-element data (element e spans [r_e, r_{e+1}]).
  std::vector<double> elem_len;      // r_{e+1} - r_e
  std::vector<double> elem_moment;   // int_e r^{n-1} dr
  std::vector<double> elem_left;     // int_e hat_e r^{n-1} dr
  std::vector<double> elem_right;    // int_e hat_{e+1} r^{n-1} dr

  std::size_t size() const { return nodes.size(); }
  std::size_t elements() const { return nodes.size() - 1; }
  double r_max() const { return nodes.back(); }
  int dim() const { return dims.n; }

  // Largest logarithmic step max ln(r_{i+1}/r_i); the "h" of all h^2 bounds.
  double log_step() const;

  // int_e r^s dr for an arbitrary real power s, by Gauss-Legendre.
  double element_power_integral(std::size_t e, double s) const;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

// n >= 3, R_max > 1, N >= 16; the grid has N + 1 nodes.
GridPtr build_grid(int n, double r_max, int N, Spacing spacing = Spacing::kLog);

// Node samples of u plus the constant u tends to at infinity. Functions of
// the energy space decay (far_value = 0); u + 1 in the curvature functional
// carries far_value = 1 so the far-field closure acts on the decaying part.
struct GridFunction {
  GridPtr grid;
  std::vector<double> values;
  double far_value = 0.0;

  GridFunction() = default;
  GridFunction(GridPtr g, std::vector<double> v, double far = 0.0);

  static GridFunction zeros(GridPtr g);
  static GridFunction constant(GridPtr g, double c);
  template <class F>
  static GridFunction sample(GridPtr g, F&& f, double far = 0.0) {
    std::vector<double> v(g->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(g->nodes[i]);
    return GridFunction(std::move(g), std::move(v), far);
  }

  double trace() const { return values.front(); }
  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }

  // u + c, with the far value shifted alongside.
  GridFunction shifted(double c) const;
  GridFunction scaled(double s) const;
};

// g = phi^{4/(n-2)} * flat, with curvature fields carried alongside.
struct Metric {
  GridPtr grid;
  std::vector<double> phi;
  std::vector<double> R;
  double H = 1.0;
  double tau = -1.0;

  const DimensionConstants& dims() const { return grid->dims; }
  // Area of the inner sphere in g: omega * phi(1)^{2(n-1)/(n-2)}.
  double boundary_area() const;
  // Volume density factor phi^{2n/(n-2)} at node i.
  double volume_factor(std::size_t i) const;
};

inline constexpr double kDecayTolerance = 0.1;

Metric flat_metric(GridPtr grid);
// Flat conformal factor with R = -depth on [r_lo, r_hi]; a model metric whose
// curvature field is prescribed directly.
Metric well_metric(GridPtr grid, double r_lo, double r_hi, double depth);
Metric metric_with_curvature(GridPtr grid, std::vector<double> R, double H);
void validate_metric(const Metric& m);

// Smooth bump exp(1 - 1/(1 - s^2)) on (r_lo, r_hi), peak 1 at the midpoint,
// exactly zero outside.
std::vector<double> bump_profile(const RadialGrid& grid, double r_lo, double r_hi);

struct RegionPair {
  std::vector<char> omega_mask;
  bool sigma_included = false;

  bool empty() const;
  bool contains(std::size_t i) const { return omega_mask[i] != 0; }
  // Element e = [r_e, r_{e+1}] lies in the closure of Omega.
  bool element_in(std::size_t e) const {
    return omega_mask[e] != 0 && omega_mask[e + 1] != 0;
  }
  // The trace node r = 1 carries the boundary terms.
  bool boundary_active() const {
    return sigma_included && !omega_mask.empty() && omega_mask[0] != 0;
  }
};

RegionPair full_region(const RadialGrid& grid);
RegionPair region_from_intervals(const RadialGrid& grid,
                                 const std::vector<std::pair<double, double>>& intervals,
                                 bool include_boundary);
std::vector<std::pair<double, double>> region_to_intervals(const RadialGrid& grid,
                                                           const RegionPair& region);

struct CurvatureTarget {
  std::vector<double> Rp;
  double Hp = 0.0;
  double zero_tol = 1e-300;
};

// zero_tol defaults to 1e-12 * max|R'| with a floor of 1e-300.
CurvatureTarget make_target(std::vector<double> Rp, double Hp);
double default_zero_tol(std::span<const double> Rp);

// Zero-set pair (Z, Z_boundary) of a target. A pair with Sigma included but
// r = 1 outside Omega is returned as is; its trace is forced to vanish.
RegionPair zero_set(const CurvatureTarget& target, const RadialGrid& grid);

// Nodes free to vary for functions of W(Omega, Sigma): inside Omega, not on
// the relative boundary of Omega, and the trace node only when Sigma is in.
std::vector<char> free_nodes(const RadialGrid& grid, const RegionPair& region);

}  // namespace eyam
