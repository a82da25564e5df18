#pragma once

// Weighted Sobolev norms, Laplacian, boundary normal derivative and the
// empirical Poincare / Sobolev probe.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eyam/domain.hpp"

namespace eyam {

struct NormSpec {
  int k = 0;          // derivative order, 0..2
  double p = 2.0;     // integrability exponent, >= 1
  double delta = 0.0; // weight index
};

// (sum_{j<=k} || rho^{-delta-n/p+j} |grad^j u| ||_{L^p}^p)^{1/p} over
// [1, R_max] in the flat volume. |grad^2 u| is taken as |u''|.
double weighted_norm(const GridFunction& u, const NormSpec& spec);

// int_Omega |grad u|_g^2 dV_g, truncated at R_max.
double gradient_sq_norm(const Metric& metric, const RegionPair& region, const GridFunction& u);

// Radial Laplace-Beltrami operator of g.
GridFunction laplacian(const Metric& metric, const GridFunction& u);

// -u'(1): outward (leaving M) flat normal derivative at the inner sphere.
double normal_derivative_out(const GridFunction& u);
// Same with the g-unit normal, phi(1)^{-2/(n-2)} * (-u'(1)).
double normal_derivative_out(const Metric& metric, const GridFunction& u);

struct ProbeSample {
  std::string family;   // "power" or "random"
  double parameter;     // alpha for powers, sample index otherwise
  double poincare;      // ||u||_{L^2_{delta*}} / ||grad u||
  double sobolev;       // ||u||_{L^{2 qbar}} / ||grad u||
};

struct InequalityProbe {
  double C1_hat = 0.0;
  double C2_hat = 0.0;
  std::vector<ProbeSample> samples;
};

// Largest observed ratios over the powers r^{-alpha},
// alpha = (n-2)/2 + 0.1, ..., n-2, and `samples` random decaying functions.
InequalityProbe probe_inequalities(const GridPtr& grid, int samples, std::uint64_t seed);

// Ratios for a single function; both 0 when grad u vanishes.
ProbeSample inequality_ratios(const GridFunction& u);

}  // namespace eyam
