#pragma once

// Linear feasibility {x >= 0 : A x = b} by phase-one simplex with Bland's rule.
// Sized for the small systems that appear in channel-ordering tests (a few
// dozen variables); the tableau is dense.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace secrecy::lp {

struct EqualitySystem {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;  // rows x cols, row-major
  std::vector<double> b;

  EqualitySystem(std::size_t m, std::size_t n) : rows(m), cols(n), a(m * n, 0.0), b(m, 0.0) {}
  double& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

struct FeasibilityResult {
  bool feasible = false;
  std::vector<double> x;   // a vertex solution when feasible
  double residual = 0.0;   // max |A x - b|
};

inline double max_residual(const EqualitySystem& sys, const std::vector<double>& x) {
  double worst = 0.0;
  for (std::size_t r = 0; r < sys.rows; ++r) {
    double s = -sys.b[r];
    for (std::size_t c = 0; c < sys.cols; ++c) s += sys.at(r, c) * x[c];
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

/// Decides feasibility; equality constraints are accepted within `tolerance`.
inline FeasibilityResult find_feasible(const EqualitySystem& sys, double tolerance = 1e-9) {
  const std::size_t m = sys.rows, n = sys.cols;
  const std::size_t width = n + m + 1;  // structural, artificial, rhs
  constexpr double kPivotEps = 1e-12;
  std::vector<double> t((m + 1) * width, 0.0);
  auto T = [&](std::size_t r, std::size_t c) -> double& { return t[r * width + c]; };

  for (std::size_t r = 0; r < m; ++r) {
    const double sign = sys.b[r] < 0.0 ? -1.0 : 1.0;
    for (std::size_t c = 0; c < n; ++c) T(r, c) = sign * sys.at(r, c);
    T(r, n + r) = 1.0;
    T(r, width - 1) = sign * sys.b[r];
  }
  // Objective row: minimize the sum of artificials, expressed in reduced costs.
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < n; ++c) T(m, c) -= T(r, c);
  for (std::size_t r = 0; r < m; ++r) T(m, width - 1) -= T(r, width - 1);

  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) basis[r] = n + r;

  const std::size_t max_iter = 50 * (n + m) + 1000;
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    std::optional<std::size_t> enter;
    for (std::size_t c = 0; c + 1 < width; ++c)
      if (T(m, c) < -kPivotEps) {
        enter = c;
        break;
      }
    if (!enter) break;
    std::optional<std::size_t> leave;
    double best_ratio = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      const double coef = T(r, *enter);
      if (coef <= kPivotEps) continue;
      const double ratio = T(r, width - 1) / coef;
      if (!leave || ratio < best_ratio - kPivotEps ||
          (std::abs(ratio - best_ratio) <= kPivotEps && basis[r] < basis[*leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (!leave) break;  // unbounded direction cannot occur in phase one
    const std::size_t pr = *leave, pc = *enter;
    const double piv = T(pr, pc);
    for (std::size_t c = 0; c < width; ++c) T(pr, c) /= piv;
    for (std::size_t r = 0; r <= m; ++r) {
      if (r == pr) continue;
      const double f = T(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < width; ++c) T(r, c) -= f * T(pr, c);
    }
    basis[pr] = pc;
  }

  FeasibilityResult out;
  out.x.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r)
    if (basis[r] < n) out.x[basis[r]] = std::max(0.0, T(r, width - 1));
  out.residual = max_residual(sys, out.x);
  out.feasible = out.residual <= tolerance;
  return out;
}

}  // namespace secrecy::lp
