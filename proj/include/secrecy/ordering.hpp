#pragma once

// Orderings between the two side-information channels p(b|a) and p(e|a):
// stochastic degradedness, less noisy, more capable. "Forward" always means
// Bob's side information B over Eve's E.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "info.hpp"
#include "lp.hpp"
#include "region.hpp"

namespace secrecy {

enum class Verdict { no, yes, unknown };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::no: return "no";
    case Verdict::yes: return "yes";
    case Verdict::unknown: return "unknown";
  }
  return "unknown";
}

struct DirectionVerdict {
  Verdict degraded = Verdict::no;
  Verdict less_noisy = Verdict::no;
  Verdict more_capable = Verdict::no;
};

class OrderingVerdict {
 public:
  OrderingVerdict(DirectionVerdict b_over_e, DirectionVerdict e_over_b) : forward_(b_over_e), reverse_(e_over_b) {
    check(forward_, "B over E");
    check(reverse_, "E over B");
  }

  const DirectionVerdict& forward() const noexcept { return forward_; }
  const DirectionVerdict& reverse() const noexcept { return reverse_; }

  /// Flat key-value record, forward keys first.
  std::string record() const {
    std::ostringstream os;
    os << "degraded=" << to_string(forward_.degraded) << " less_noisy=" << to_string(forward_.less_noisy)
       << " more_capable=" << to_string(forward_.more_capable) << " degraded_rev=" << to_string(reverse_.degraded)
       << " less_noisy_rev=" << to_string(reverse_.less_noisy) << " more_capable_rev=" << to_string(reverse_.more_capable);
    return os.str();
  }

 private:
  static void check(const DirectionVerdict& d, const char* which) {
    if (d.degraded == Verdict::unknown || d.more_capable == Verdict::unknown)
      throw DomainError(std::string("degraded and more_capable must be decided (") + which + ")");
    if (d.degraded == Verdict::yes && d.less_noisy != Verdict::yes)
      throw DomainError(std::string("degraded requires less noisy (") + which + ")");
    if (d.less_noisy == Verdict::yes && d.more_capable != Verdict::yes)
      throw DomainError(std::string("less noisy requires more capable (") + which + ")");
  }

  DirectionVerdict forward_;
  DirectionVerdict reverse_;
};

/// Binary source seen by Bob through BEC(eps) and by Eve through BSC(p).
struct BecBscParams {
  double p = 0.0;
  double eps = 0.0;

  void validate() const {
    if (!(p >= 0.0 && p <= 0.5)) throw std::invalid_argument("p must lie in [0, 1/2]");
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must lie in [0, 1]");
  }
};

struct BecBscThresholds {
  double degraded;      // 2p
  double less_noisy;    // 4p(1-p)
  double more_capable;  // h2(p)
};

inline BecBscThresholds bec_bsc_thresholds(double p) {
  return {2.0 * p, 4.0 * p * (1.0 - p), binary_entropy(p)};
}

/// Closed-form ordering of the BEC/BSC pair as a function of the erasure probability.
inline OrderingVerdict classify_bec_bsc(const BecBscParams& params) {
  params.validate();
  const auto th = bec_bsc_thresholds(params.p);
  const double eps = params.eps;
  auto yn = [](bool b) { return b ? Verdict::yes : Verdict::no; };
  DirectionVerdict fwd{yn(eps <= th.degraded), yn(eps <= th.less_noisy), yn(eps <= th.more_capable)};
  // Erasures cannot be produced from a noisy bit unless nothing gets through
  // (eps = 1) or Eve sees A exactly (p = 0). With the source fixed uniform,
  // h2(q*p) - (1-eps) h2(q) peaks at q = 1/2 once eps >= h2(p), so the
  // reverse less-noisy and more-capable relations share that threshold.
  const bool rev_degraded = params.p == 0.0 || eps == 1.0;
  DirectionVerdict rev{yn(rev_degraded), yn(rev_degraded || eps >= th.more_capable), yn(eps >= th.more_capable)};
  return OrderingVerdict(fwd, rev);
}

struct DegradednessResult {
  bool degraded = false;
  std::optional<ConditionalPmf> witness;  // q(second | first) when degraded
  double residual = 0.0;
};

/// Is `second` = `first` followed by some channel q? Solved as linear feasibility
/// over q >= 0 with rows summing to one.
inline DegradednessResult is_degraded(const ConditionalPmf& first, const ConditionalPmf& second, double tolerance = 1e-9) {
  if (!(first.input() == second.input())) throw std::invalid_argument("is_degraded: channels must share an input alphabet");
  const std::size_t na = first.input().size(), nb = first.output().size(), ne = second.output().size();
  lp::EqualitySystem sys(na * ne + nb, nb * ne);
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t e = 0; e < ne; ++e) {
      const std::size_t r = a * ne + e;
      for (std::size_t b = 0; b < nb; ++b) sys.at(r, b * ne + e) = first(a, b);
      sys.b[r] = second(a, e);
    }
  for (std::size_t b = 0; b < nb; ++b) {
    const std::size_t r = na * ne + b;
    for (std::size_t e = 0; e < ne; ++e) sys.at(r, b * ne + e) = 1.0;
    sys.b[r] = 1.0;
  }
  auto sol = lp::find_feasible(sys, tolerance);
  DegradednessResult out;
  out.degraded = sol.feasible;
  out.residual = sol.residual;
  if (sol.feasible) {
    std::vector<double> q = sol.x;
    for (std::size_t b = 0; b < nb; ++b) {
      double s = 0.0;
      for (std::size_t e = 0; e < ne; ++e) s += q[b * ne + e];
      for (std::size_t e = 0; e < ne; ++e) q[b * ne + e] /= s;
    }
    out.witness.emplace(first.output(), second.output(), std::move(q));
  }
  return out;
}

struct MoreCapable {
  bool b_over_e = false;
  bool e_over_b = false;
  double i_ab = 0.0;
  double i_ae = 0.0;
};

inline MoreCapable is_more_capable(const SecureSource& source, double tolerance = kEqualityTolerance) {
  const JointPmf& j = source.joint();
  MoreCapable out;
  out.i_ab = mutual_information(j, {"A"}, {"B"});
  out.i_ae = mutual_information(j, {"A"}, {"E"});
  out.b_over_e = out.i_ab >= out.i_ae - tolerance;
  out.e_over_b = out.i_ae >= out.i_ab - tolerance;
  return out;
}

struct LessNoisyConfig {
  std::size_t resolution = 16;            // channel entries are multiples of 1/resolution
  std::size_t u_size = 0;                 // 0: |A| + 1
  std::size_t max_evaluations = 200000;   // resolution is lowered until the grid fits
  double tolerance = kEqualityTolerance;
};

enum class SearchOutcome { no_violation, counterexample, unknown };

inline std::string_view to_string(SearchOutcome o) {
  switch (o) {
    case SearchOutcome::no_violation: return "no-violation";
    case SearchOutcome::counterexample: return "counterexample";
    case SearchOutcome::unknown: return "unknown";
  }
  return "unknown";
}

struct LessNoisyEvidence {
  SearchOutcome outcome = SearchOutcome::unknown;
  std::optional<ConditionalPmf> channel;  // p(u|a) exhibiting the violation
  double worst_gap = 0.0;                 // most negative I(U;better) - I(U;worse) seen
};

struct LessNoisyReport {
  LessNoisyEvidence b_over_e;
  LessNoisyEvidence e_over_b;
  std::size_t resolution = 0;  // grid actually used
  std::size_t evaluations = 0;
};

namespace detail {

inline std::vector<std::vector<std::size_t>> compositions(std::size_t total, std::size_t parts) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(parts, 0);
  auto rec = [&](auto&& self, std::size_t k, std::size_t left) -> void {
    if (k + 1 == parts) {
      cur[k] = left;
      out.push_back(cur);
      return;
    }
    for (std::size_t x = 0; x <= left; ++x) {
      cur[k] = x;
      self(self, k + 1, left - x);
    }
  };
  rec(rec, 0, total);
  return out;
}

inline double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

/// I(U; X) for p(a, x) and channel rows q(u|a) given as weights/resolution.
inline double mi_through(const std::vector<double>& pax, std::size_t na, std::size_t nx, const std::vector<double>& q,
                         std::size_t nu) {
  std::vector<double> pux(nu * nx, 0.0), pu(nu, 0.0), px(nx, 0.0);
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t x = 0; x < nx; ++x) {
      const double w = pax[a * nx + x];
      px[x] += w;
      for (std::size_t u = 0; u < nu; ++u) pux[u * nx + x] += w * q[a * nu + u];
    }
  for (std::size_t u = 0; u < nu; ++u)
    for (std::size_t x = 0; x < nx; ++x) pu[u] += pux[u * nx + x];
  double mi = 0.0;
  for (std::size_t u = 0; u < nu; ++u)
    for (std::size_t x = 0; x < nx; ++x) {
      const double p = pux[u * nx + x];
      if (p > 0.0) mi += p * std::log2(p / (pu[u] * px[x]));
    }
  return mi;
}

}  // namespace detail

/// Grid search over auxiliary channels p(u|a) for a violation of
/// I(U;B) >= I(U;E) (and of the reverse inequality). A grid that finds no
/// violation is evidence, not proof.
inline LessNoisyReport less_noisy_search(const SecureSource& source, const LessNoisyConfig& cfg = {}) {
  const std::size_t na = source.a().size(), nb = source.b().size(), ne = source.e().size();
  const std::size_t nu = cfg.u_size ? cfg.u_size : na + 1;
  LessNoisyReport report;

  std::size_t r = cfg.resolution;
  while (r >= 2 && std::pow(detail::binomial(r + nu - 1, nu - 1), static_cast<double>(na)) > static_cast<double>(cfg.max_evaluations))
    --r;
  if (r < 2 || nu < 2) return report;  // both directions stay unknown
  report.resolution = r;

  const AxisSet ab{"A", "B"}, ae{"A", "E"};
  const auto pab = source.joint().marginal_mass(ab);
  const auto pae = source.joint().marginal_mass(ae);
  const auto rows = detail::compositions(r, nu);

  std::vector<std::size_t> pick(na, 0);
  std::vector<double> q(na * nu);
  double worst_fwd = 0.0, worst_rev = 0.0;
  std::optional<std::vector<double>> cex_fwd, cex_rev;
  for (;;) {
    for (std::size_t a = 0; a < na; ++a)
      for (std::size_t u = 0; u < nu; ++u) q[a * nu + u] = static_cast<double>(rows[pick[a]][u]) / static_cast<double>(r);
    const double gap = detail::mi_through(pab, na, nb, q, nu) - detail::mi_through(pae, na, ne, q, nu);
    ++report.evaluations;
    if (gap < worst_fwd) {
      worst_fwd = gap;
      if (gap < -cfg.tolerance) cex_fwd = q;
    }
    if (-gap < worst_rev) {
      worst_rev = -gap;
      if (-gap < -cfg.tolerance) cex_rev = q;
    }
    std::size_t k = 0;
    while (k < na && ++pick[k] == rows.size()) pick[k++] = 0;
    if (k == na) break;
  }

  auto finish = [&](LessNoisyEvidence& ev, double worst, const std::optional<std::vector<double>>& cex) {
    ev.worst_gap = worst;
    if (cex) {
      ev.outcome = SearchOutcome::counterexample;
      ev.channel.emplace(source.a(), Alphabet::indexed(nu), *cex);
    } else {
      ev.outcome = SearchOutcome::no_violation;
    }
  };
  finish(report.b_over_e, worst_fwd, cex_fwd);
  finish(report.e_over_b, worst_rev, cex_rev);
  return report;
}

/// p(x|a) for x in {B, E}, restricted to source symbols of positive probability.
inline ConditionalPmf side_channel(const SecureSource& source, const std::string& axis) {
  const AxisSet a_only{"A"};
  const auto pa = source.joint().marginal_mass(a_only);
  const ConditionalPmf full = conditional_of(source.joint(), axis, "A");
  std::vector<std::string> labels;
  std::vector<double> flat;
  for (std::size_t a = 0; a < pa.size(); ++a) {
    if (pa[a] <= 0.0) continue;
    labels.push_back(source.a()[a]);
    auto row = full.row(a);
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return ConditionalPmf(Alphabet(labels), full.output(), std::move(flat));
}

struct SourceOrdering {
  OrderingVerdict verdict;
  DegradednessResult degraded_b_over_e;
  DegradednessResult degraded_e_over_b;
  MoreCapable more_capable;
  LessNoisyReport less_noisy;
};

/// Ordering of a general source: LP for degradedness, direct mutual
/// informations for more-capable, grid evidence for less-noisy.
inline SourceOrdering classify_source(const SecureSource& source, const LessNoisyConfig& cfg = {}) {
  const ConditionalPmf to_b = side_channel(source, "B");
  const ConditionalPmf to_e = side_channel(source, "E");
  auto deg_fwd = is_degraded(to_b, to_e);
  auto deg_rev = is_degraded(to_e, to_b);
  auto mc = is_more_capable(source);
  auto ln = less_noisy_search(source, cfg);

  auto direction = [](bool degraded, bool more_capable, const LessNoisyEvidence& ev) {
    DirectionVerdict d;
    d.degraded = degraded ? Verdict::yes : Verdict::no;
    d.more_capable = more_capable ? Verdict::yes : Verdict::no;
    if (degraded) d.less_noisy = Verdict::yes;
    else if (!more_capable || ev.outcome == SearchOutcome::counterexample) d.less_noisy = Verdict::no;
    else d.less_noisy = Verdict::unknown;
    return d;
  };
  OrderingVerdict verdict(direction(deg_fwd.degraded, mc.b_over_e, ln.b_over_e),
                          direction(deg_rev.degraded, mc.e_over_b, ln.e_over_b));
  return {verdict, std::move(deg_fwd), std::move(deg_rev), mc, std::move(ln)};
}

}  // namespace secrecy
