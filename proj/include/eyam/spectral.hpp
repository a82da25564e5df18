#pragma once

// Weighted relative eigenvalue
//   lambda_delta(Omega, Sigma) = inf E(u) / (||u||^2_{L^2_delta(Omega)} + ||gamma u||^2_{L^2(Sigma)})
// as the smallest eigenvalue of a symmetric tridiagonal pencil (A, B).

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eyam/domain.hpp"

namespace eyam {

enum class Sign { kPositive, kZero, kNegative, kInfinite };

std::string to_string(Sign s);

// Relative width of the zero band: |v| <= kZeroBand * (|v| + scale).
inline constexpr double kZeroBand = 1e-6;

Sign classify_value(double value, double scale);

struct InvariantReport {
  double value = 0.0;
  Sign sign = Sign::kInfinite;
  std::optional<GridFunction> minimizer;
  int iterations = 0;
  double residual = 0.0;
  // Size of the individual energy terms at the normalized minimizer; the
  // reference for the zero band.
  double scale = 0.0;
};

InvariantReport lambda_delta(const Metric& metric, const RegionPair& region, double delta);

// Sturm-sequence bisection on matrices rebuilt from the energy and weight
// functionals by polarization. N <= 1000.
double lambda_delta_dense_oracle(const Metric& metric, const RegionPair& region, double delta);

struct CurvePoint {
  double s = 0.0;
  double lambda = 0.0;
  Sign sign = Sign::kPositive;
  double scale = 0.0;
};

struct LambdaCurve {
  std::vector<CurvePoint> points;
  std::optional<CurvePoint> crossing;  // bisection-located root, if any
  std::size_t crossing_after = 0;      // index of the sample preceding the root
};

using MetricFamily = std::function<Metric(double)>;

// lambda at each s; the first positive-to-negative (or reverse) change is
// refined by bisection until |lambda| <= 1e-10 * scale.
LambdaCurve lambda_curve(const MetricFamily& family, const RegionPair& region, double delta,
                         const std::vector<double>& s_values, int jobs = 1);

}  // namespace eyam
