#pragma once

// Positive root of a x^q + b x^r = 1 and projection onto
// B^{q,r}_b = { u : ||u||^q_{L^q(Omega)} + b ||gamma u||^r_{L^r(Sigma)} = 1 }.

#include <utility>

#include "eyam/domain.hpp"

namespace eyam {

struct ExponentTriple {
  double q = 6.0;
  double r = 4.0;
  double b = 1.0;
};

// Requires a > 0 and q > r > 1 (or q == r with b > -a).
double unit_root(double a, double b, double q, double r);

// Plain bisection on the same equation; slow, used as a test oracle.
double unit_root_bisection(double a, double b, double q, double r);

// ||u||^q_{L^q(Omega)} in the metric volume (lumped).
double lq_power(const Metric& metric, const RegionPair& region, const GridFunction& u, double q);
// ||gamma u||^r_{L^r(Sigma)}; zero when Sigma is not active.
double trace_power(const Metric& metric, const RegionPair& region, const GridFunction& u, double r);

struct Projection {
  double k = 0.0;
  GridFunction ku;
};

Projection project_to_constraint(const GridFunction& u, const Metric& metric,
                                 const RegionPair& region, const ExponentTriple& tri);

}  // namespace eyam
