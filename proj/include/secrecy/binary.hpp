#pragma once

// Uniform binary source; Bob sees it through BEC(eps), Eve through BSC(p).
// Auxiliaries V = BSC(alpha)(A), U = BSC(beta)(V).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "info.hpp"
#include "ordering.hpp"
#include "region.hpp"

namespace secrecy::binary {

struct BinaryScheme {
  double alpha = 0.0;
  double beta = 0.0;

  void validate() const {
    if (!(alpha >= 0.0 && alpha <= 0.5)) throw std::invalid_argument("alpha must lie in [0, 1/2]");
    if (!(beta >= 0.0 && beta <= 0.5)) throw std::invalid_argument("beta must lie in [0, 1/2]");
  }
};

inline SecureSource build_source(const BecBscParams& params) {
  params.validate();
  const JointPmf a({Axis{"A", binary_alphabet()}}, {0.5, 0.5});
  const JointPmf j = joint_from(a, {ChannelLink{bec(params.eps), "A", "B"}, ChannelLink{bsc(params.p), "A", "E"}});
  return SecureSource(j, hamming_distortion(2), 1.0);
}

/// Equivocation before the [.]+ clamp.
inline double raw_equivocation(const BecBscParams& params, const BinaryScheme& s) {
  const double ab = binary_star(s.alpha, s.beta);
  return params.eps * binary_entropy(s.alpha) + (1.0 - params.eps) * binary_entropy(ab) -
         binary_entropy(binary_star(params.p, ab)) + binary_entropy(params.p);
}

inline RDETuple closed_form(const BecBscParams& params, const BinaryScheme& s) {
  params.validate();
  s.validate();
  return {params.eps * (1.0 - binary_entropy(s.alpha)), params.eps * s.alpha,
          std::max(0.0, raw_equivocation(params, s))};
}

/// a_hat(v, b) = b when b is not an erasure, v otherwise.
inline AuxScheme scheme_for(const BinaryScheme& s) {
  s.validate();
  // B alphabet is {0, e, 1}
  Reconstruction rec(2, 3, {0, 0, 1, 0, 1, 1});
  return AuxScheme(bsc(s.alpha), bsc(s.beta), std::move(rec));
}

/// Largest componentwise gap between the closed form and the general evaluator.
inline double oracle_check(const BecBscParams& params, const BinaryScheme& s) {
  const RDETuple c = closed_form(params, s);
  const RDETuple g = evaluate_scheme(build_source(params), scheme_for(s));
  return std::max({std::abs(c.rate - g.rate), std::abs(c.distortion - g.distortion), std::abs(c.equivocation - g.equivocation)});
}

struct BetaOptimum {
  double beta = 0.0;
  double raw = 0.0;
};

/// Maximizes the raw equivocation over beta in [0, 1/2]: 512-point scan, then
/// golden section around the best sample. beta = 0 wins ties.
inline BetaOptimum optimize_beta(const BecBscParams& params, double alpha, double tolerance = 1e-7) {
  constexpr std::size_t kScan = 512;
  auto f = [&](double b) { return raw_equivocation(params, {alpha, b}); };
  std::size_t best_i = 0;
  double best = f(0.0);
  for (std::size_t i = 1; i < kScan; ++i) {
    const double v = f(0.5 * static_cast<double>(i) / (kScan - 1));
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  auto grid = [&](std::size_t i) { return 0.5 * static_cast<double>(i) / (kScan - 1); };
  double lo = grid(best_i == 0 ? 0 : best_i - 1), hi = grid(std::min(best_i + 1, kScan - 1));
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > tolerance) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    }
  }
  BetaOptimum out{grid(best_i), best};
  const double mid = 0.5 * (lo + hi);
  if (const double fm = f(mid); fm > out.raw) out = {mid, fm};
  if (const double f0 = f(0.0); f0 >= out.raw - 1e-12) out = {0.0, f0};
  return out;
}

struct CurvePoint {
  double D = 0.0;
  double delta_general = 0.0;
  double delta_wz = 0.0;
  double alpha = 0.0;
  double beta_opt = 0.0;
};

inline std::vector<double> default_distortion_grid(double eps, std::size_t points = 200) {
  std::vector<double> d(points);
  for (std::size_t i = 0; i < points; ++i)
    d[i] = points == 1 ? 0.0 : 0.5 * eps * static_cast<double>(i) / static_cast<double>(points - 1);
  if (points > 1) d.back() = 0.5 * eps;
  return d;
}

/// Equivocation against distortion with alpha = D / eps.
inline std::vector<CurvePoint> sweep_fig5(const BecBscParams& params, const std::vector<double>& grid) {
  params.validate();
  for (double d : grid)
    if (!(d >= 0.0 && d <= 0.5 * params.eps)) throw std::invalid_argument("distortion " + std::to_string(d) + " outside [0, eps/2]");
  std::vector<CurvePoint> out;
  out.reserve(grid.size());
  for (double d : grid) {
    const double alpha = params.eps > 0.0 ? std::min(0.5, d / params.eps) : 0.0;
    const auto opt = optimize_beta(params, alpha);
    CurvePoint c;
    c.D = d;
    c.alpha = alpha;
    c.beta_opt = opt.beta;
    c.delta_general = std::max(0.0, opt.raw);
    c.delta_wz = std::max(0.0, raw_equivocation(params, {alpha, 0.0}));
    out.push_back(c);
  }
  return out;
}

inline void write_fig5_csv(std::ostream& os, const std::vector<CurvePoint>& curve) {
  os << "D,delta_general,delta_wz,alpha,beta_opt\n" << std::fixed << std::setprecision(6);
  for (const auto& c : curve) os << c.D << ',' << c.delta_general << ',' << c.delta_wz << ',' << c.alpha << ',' << c.beta_opt << '\n';
  os.unsetf(std::ios::floatfield);
}

struct TableColumn {
  std::string label;
  RDETuple tuple;
  BinaryScheme scheme;
};

/// h2(alpha) = 1 - fraction, so that the rate is fraction * eps.
inline double alpha_for_rate_fraction(double fraction) {
  if (fraction >= 1.0) return 0.0;
  if (fraction <= 0.0) return 0.5;
  const double target = 1.0 - fraction;
  double lo = 0.0, hi = 0.5;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (binary_entropy(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// The four reference columns: lossless with and without the secrecy
/// auxiliary, then lossy at `budget_fraction` of the lossless rate, again
/// with and without it.
inline std::vector<TableColumn> table1(const BecBscParams& params, double budget_fraction = 0.8) {
  params.validate();
  if (!(budget_fraction >= 0.0 && budget_fraction <= 1.0)) throw std::invalid_argument("rate budget fraction must lie in [0, 1]");
  const double lossy_alpha = params.eps > 0.0 ? alpha_for_rate_fraction(budget_fraction) : 0.0;
  std::vector<TableColumn> cols;
  auto add = [&](std::string label, BinaryScheme s) { cols.push_back({std::move(label), closed_form(params, s), s}); };
  add("lossless-secure", {0.0, optimize_beta(params, 0.0).beta});
  add("slepian-wolf", {0.0, 0.0});
  add("lossy-secure", {lossy_alpha, optimize_beta(params, lossy_alpha).beta});
  add("wyner-ziv", {lossy_alpha, 0.0});
  return cols;
}

inline void write_table_text(std::ostream& os, const std::vector<TableColumn>& cols) {
  os << std::left << std::setw(8) << "";
  for (const auto& c : cols) os << std::right << std::setw(17) << c.label;
  os << '\n' << std::fixed << std::setprecision(3);
  auto row = [&](const char* name, auto get) {
    os << std::left << std::setw(8) << name;
    for (const auto& c : cols) os << std::right << std::setw(17) << get(c);
    os << '\n';
  };
  row("R", [](const TableColumn& c) { return c.tuple.rate; });
  row("D", [](const TableColumn& c) { return c.tuple.distortion; });
  row("Delta", [](const TableColumn& c) { return c.tuple.equivocation; });
  row("alpha", [](const TableColumn& c) { return c.scheme.alpha; });
  row("beta", [](const TableColumn& c) { return c.scheme.beta; });
  os.unsetf(std::ios::floatfield);
}

inline void write_table_csv(std::ostream& os, const std::vector<TableColumn>& cols) {
  os << "column,R,D,Delta,alpha,beta\n" << std::fixed << std::setprecision(6);
  for (const auto& c : cols)
    os << c.label << ',' << c.tuple.rate << ',' << c.tuple.distortion << ',' << c.tuple.equivocation << ',' << c.scheme.alpha
       << ',' << c.scheme.beta << '\n';
  os.unsetf(std::ios::floatfield);
}

}  // namespace secrecy::binary
