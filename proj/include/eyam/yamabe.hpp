#pragma once

// Relative Yamabe invariant Y^{q,r}_b(Omega, Sigma) = inf { E(u) : u in B^{q,r}_b }
// by projected, preconditioned gradient descent, and sign classification.

#include <cstdint>
#include <vector>

#include "eyam/domain.hpp"
#include "eyam/normalize.hpp"
#include "eyam/spectral.hpp"

namespace eyam {

struct YamabeOptions {
  int max_iters = 2000;
  double step0 = 1.0;
  double tol_grad = 1e-8;
  int restarts = 4;
  std::uint64_t seed = 0;
};

// Starting functions in order: constant, 1/r, bump inside Omega, seeded
// random; extra restarts draw further random starts. Constrained nodes are 0.
std::vector<GridFunction> default_starts(const Metric& metric, const RegionPair& region,
                                         const YamabeOptions& opts);

// value is an upper bound for the discrete infimum; only its sign is
// meaningful at critical exponents. Custom starts replace default_starts.
InvariantReport yamabe_infimum(const Metric& metric, const RegionPair& region,
                               const ExponentTriple& tri, const YamabeOptions& opts,
                               const std::vector<GridFunction>* starts = nullptr);

struct SignClassification {
  Sign sign = Sign::kPositive;  // positive, zero or negative
  std::vector<double> deltas;
  std::vector<InvariantReport> reports;
};

// Common sign of lambda_delta over delta_list (an empty pair counts as
// positive). Throws std::runtime_error("sign inconsistency") when one delta
// gives positive and another negative.
SignClassification classify_sign_detailed(const Metric& metric, const RegionPair& region,
                                          const std::vector<double>& delta_list);
Sign classify_sign(const Metric& metric, const RegionPair& region,
                   const std::vector<double>& delta_list);

struct SignCell {
  double b = 0.0;
  double r = 0.0;
  double value_upper_bound = 0.0;
  Sign sign = Sign::kPositive;
};

struct SignTable {
  std::vector<SignCell> cells;
  bool all_equal = true;
};

// Y^{2qbar, r}_b for every (b, r).
SignTable sign_independence_suite(const Metric& metric, const RegionPair& region,
                                  const std::vector<double>& b_list,
                                  const std::vector<double>& r_list, const YamabeOptions& opts,
                                  int jobs = 1);

struct ConformalCheck {
  double v1 = 0.0;
  double v2 = 0.0;
  double rel_diff = 0.0;
};

// Y^{2qbar, r}_0 under g and under g' = phi^{4/(n-2)} g, the second run
// started from the images u / phi of the first run's starts.
ConformalCheck conformal_invariance_check(const Metric& metric, const RegionPair& region,
                                          const GridFunction& phi, double r,
                                          const YamabeOptions& opts);

}  // namespace eyam
