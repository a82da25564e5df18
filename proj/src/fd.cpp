#include "eyam/fd.hpp"

#include <array>
#include <stdexcept>

namespace eyam {

std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> x, int m) {
  const int n = static_cast<int>(x.size());
  if (n == 0 || m < 0) throw std::invalid_argument("fornberg_weights: bad stencil");
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0, c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

RadialDerivatives radial_derivatives(const RadialGrid& grid, std::span<const double> v) {
  const std::size_t n = grid.size();
  if (v.size() != n) throw std::invalid_argument("radial_derivatives: size mismatch");
  const auto& x = grid.nodes;
  std::vector<double> dv(n);
  for (std::size_t i = 0; i < n; ++i) dv[i] = v[i] - v[0];

  RadialDerivatives out{std::vector<double>(n), std::vector<double>(n)};
  auto apply = [&](std::size_t first, std::size_t count, std::size_t at, int order) {
    const auto w = fornberg_weights(x[at], std::span(x).subspan(first, count), order);
    double s = 0.0;
    for (std::size_t j = 0; j < count; ++j) s += w[order][j] * dv[first + j];
    return s;
  };
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out.d1[i] = apply(i - 1, 3, i, 1);
    out.d2[i] = apply(i - 1, 3, i, 2);
  }
  out.d1[0] = apply(0, 3, 0, 1);
  out.d2[0] = apply(0, 5, 0, 2);
  out.d1[n - 1] = apply(n - 3, 3, n - 1, 1);
  out.d2[n - 1] = apply(n - 5, 5, n - 1, 2);
  return out;
}

}  // namespace eyam
