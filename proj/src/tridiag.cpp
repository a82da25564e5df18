#include "eyam/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eyam {

std::vector<double> multiply(const SymTridiag& t, std::span<const double> x) {
  const std::size_t n = t.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = t.diag[i] * x[i];
    if (i > 0) s += t.off[i - 1] * x[i - 1];
    if (i + 1 < n) s += t.off[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

namespace {

bool ldlt_solve(const SymTridiag& t, std::span<const double> b, std::vector<double>& x,
                bool require_positive) {
  const std::size_t n = t.size();
  std::vector<double> d(n), l(n > 0 ? n - 1 : 0), z(n);
  for (std::size_t i = 0; i < n; ++i) {
    double di = t.diag[i];
    if (i > 0) {
      l[i - 1] = t.off[i - 1] / d[i - 1];
      di -= l[i - 1] * t.off[i - 1];
    }
    if (require_positive ? !(di > 0.0) : (di == 0.0 || !std::isfinite(di))) return false;
    d[i] = di;
  }
  for (std::size_t i = 0; i < n; ++i) z[i] = b[i] - (i > 0 ? l[i - 1] * z[i - 1] : 0.0);
  std::vector<double> y(n);
  for (std::size_t k = n; k-- > 0;) {
    y[k] = z[k] / d[k];
    if (k + 1 < n) y[k] -= l[k] * y[k + 1];
  }
  x = std::move(y);
  return true;
}

}  // namespace

bool solve_spd(const SymTridiag& t, std::span<const double> b, std::vector<double>& x) {
  return ldlt_solve(t, b, x, true);
}

bool solve_symmetric(const SymTridiag& t, std::span<const double> b, std::vector<double>& x) {
  return ldlt_solve(t, b, x, false);
}

int negative_count(const SymTridiag& t, std::span<const double> w, double sigma) {
  const std::size_t n = t.size();
  int neg = 0;
  double prev = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = t.diag[i] - sigma * (w.empty() ? 1.0 : w[i]);
    if (i > 0) d -= t.off[i - 1] * t.off[i - 1] / prev;
    if (d == 0.0) d = -std::numeric_limits<double>::min();
    if (d < 0.0) ++neg;
    prev = d;
  }
  return neg;
}

std::pair<double, double> gershgorin(const SymTridiag& t) {
  const std::size_t n = t.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double rad = 0.0;
    if (i > 0) rad += std::abs(t.off[i - 1]);
    if (i + 1 < n) rad += std::abs(t.off[i]);
    lo = std::min(lo, t.diag[i] - rad);
    hi = std::max(hi, t.diag[i] + rad);
  }
  return {lo, hi};
}

}  // namespace eyam
