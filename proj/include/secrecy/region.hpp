#pragma once

// Rate-distortion-equivocation tuples certified by an auxiliary scheme
// (U, V, reconstruction) for a source p(a,b,e) with decoder side information,
// plus the special-case forms obtained by fixing U or V.
//
// Axis names used throughout: A (source), B (Bob's side information),
// E (Eve's side information), V (fine auxiliary), U (coarse auxiliary).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "info.hpp"

namespace secrecy {

/// Tolerance for equalities between two computation routes.
inline constexpr double kEqualityTolerance = 1e-9;

class SecureSource {
 public:
  /// `distortion` is |A| x |A| row-major, d(a, a_hat). When `d_max` is omitted
  /// the largest entry is used.
  SecureSource(const JointPmf& joint, std::vector<double> distortion, std::optional<double> d_max = std::nullopt)
      : joint_(canonical(joint)), distortion_(std::move(distortion)) {
    const std::size_t n = a().size();
    if (distortion_.size() != n * n)
      throw std::invalid_argument("distortion matrix must be " + std::to_string(n) + "x" + std::to_string(n));
    double largest = 0.0;
    for (double d : distortion_) {
      if (!std::isfinite(d) || d < 0.0) throw DomainError("distortion entries must be finite and nonnegative");
      largest = std::max(largest, d);
    }
    d_max_ = d_max.value_or(largest);
    if (!std::isfinite(d_max_) || largest > d_max_) throw DomainError("distortion entry exceeds declared d_max");
  }

  const JointPmf& joint() const noexcept { return joint_; }
  const Alphabet& a() const { return joint_.axes()[0].alphabet; }
  const Alphabet& b() const { return joint_.axes()[1].alphabet; }
  const Alphabet& e() const { return joint_.axes()[2].alphabet; }
  double distortion(std::size_t a, std::size_t ahat) const { return distortion_[a * this->a().size() + ahat]; }
  std::span<const double> distortion_matrix() const noexcept { return distortion_; }
  double d_max() const noexcept { return d_max_; }

 private:
  static JointPmf canonical(const JointPmf& j) {
    if (j.rank() != 3 || !j.has_axis("A") || !j.has_axis("B") || !j.has_axis("E"))
      throw std::invalid_argument("secure source joint must have exactly the axes A, B, E");
    const AxisSet order{"A", "B", "E"};
    return j.marginal(order);
  }

  JointPmf joint_;
  std::vector<double> distortion_;
  double d_max_ = 0.0;
};

inline std::vector<double> hamming_distortion(std::size_t n) {
  std::vector<double> d(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;
  return d;
}

/// Deterministic map (v, b) -> index into the A alphabet.
class Reconstruction {
 public:
  Reconstruction(std::size_t v_size, std::size_t b_size, std::vector<std::size_t> table)
      : v_size_(v_size), b_size_(b_size), table_(std::move(table)) {
    if (table_.size() != v_size_ * b_size_) throw std::invalid_argument("reconstruction table has the wrong size");
  }

  /// a_hat(v, b) = v; requires V and A to share an alphabet size.
  static Reconstruction from_v(std::size_t v_size, std::size_t b_size) {
    std::vector<std::size_t> t(v_size * b_size);
    for (std::size_t v = 0; v < v_size; ++v)
      for (std::size_t b = 0; b < b_size; ++b) t[v * b_size + b] = v;
    return Reconstruction(v_size, b_size, std::move(t));
  }

  std::size_t v_size() const noexcept { return v_size_; }
  std::size_t b_size() const noexcept { return b_size_; }
  std::size_t operator()(std::size_t v, std::size_t b) const { return table_[v * b_size_ + b]; }
  std::span<const std::size_t> table() const noexcept { return table_; }
  bool operator==(const Reconstruction&) const = default;

 private:
  std::size_t v_size_;
  std::size_t b_size_;
  std::vector<std::size_t> table_;
};

struct CardinalityCaps {
  std::size_t u;
  std::size_t v;
};

/// Sufficient auxiliary alphabet sizes for a source alphabet of size n.
inline CardinalityCaps cardinality_caps(std::size_t n) { return {n + 2, (n + 2) * (n + 1)}; }

/// Test channels A -> V -> U and the decoder map (V, B) -> A_hat.
struct AuxScheme {
  ConditionalPmf v_channel;
  ConditionalPmf u_channel;
  Reconstruction reconstruction;

  AuxScheme(ConditionalPmf v, ConditionalPmf u, Reconstruction r)
      : v_channel(std::move(v)), u_channel(std::move(u)), reconstruction(std::move(r)) {
    if (!(u_channel.input() == v_channel.output()))
      throw std::invalid_argument("u_channel input alphabet must equal v_channel output alphabet");
    if (reconstruction.v_size() != v_channel.output().size())
      throw std::invalid_argument("reconstruction rows must match the V alphabet");
    const auto caps = cardinality_caps(v_channel.input().size());
    if (u_channel.output().size() > caps.u)
      throw DomainError("|U| = " + std::to_string(u_channel.output().size()) + " exceeds the cap " + std::to_string(caps.u));
    if (v_channel.output().size() > caps.v)
      throw DomainError("|V| = " + std::to_string(v_channel.output().size()) + " exceeds the cap " + std::to_string(caps.v));
  }
};

struct RDETuple {
  double rate = 0.0;          // bits per source symbol
  double distortion = 0.0;
  double equivocation = 0.0;  // bits per source symbol
};

/// Tuple plus the equivocation expression before the [.]+ clamp.
struct SchemeEvaluation {
  RDETuple tuple;
  double raw_equivocation = 0.0;
};

inline void check_compatible(const SecureSource& source, const AuxScheme& scheme) {
  if (!(scheme.v_channel.input() == source.a()))
    throw std::invalid_argument("scheme v_channel input alphabet differs from the source alphabet A");
  if (scheme.reconstruction.b_size() != source.b().size())
    throw std::invalid_argument("reconstruction columns must match the B alphabet");
  for (std::size_t x : scheme.reconstruction.table())
    if (x >= source.a().size()) throw std::invalid_argument("reconstruction maps outside the A alphabet");
}

/// p(a, b, e, v, u) with V drawn from A and U from V.
inline JointPmf materialize(const SecureSource& source, const AuxScheme& scheme) {
  check_compatible(source, scheme);
  return joint_from(source.joint(), {ChannelLink{scheme.v_channel, "A", "V"}, ChannelLink{scheme.u_channel, "V", "U"}});
}

namespace detail {

/// E[d(A, a_hat(V, B))] from a joint that carries A, B, V.
inline double expected_distortion(const SecureSource& source, const JointPmf& joint, const Reconstruction& rec) {
  const AxisSet abv{"A", "B", "V"};
  auto m = joint.marginal_mass(abv);
  const std::size_t nb = source.b().size(), nv = rec.v_size();
  double d = 0.0;
  for (std::size_t a = 0; a < source.a().size(); ++a)
    for (std::size_t b = 0; b < nb; ++b)
      for (std::size_t v = 0; v < nv; ++v) {
        const double p = m[(a * nb + b) * nv + v];
        if (p > 0.0) d += p * source.distortion(a, rec(v, b));
      }
  return d;
}

inline double nonneg(double x) { return std::max(0.0, x); }

}  // namespace detail

inline SchemeEvaluation evaluate_scheme_detailed(const SecureSource& source, const AuxScheme& scheme) {
  const JointPmf j = materialize(source, scheme);
  const double rate = mutual_information(j, {"V"}, {"A"}, {"B"});
  const double dist = detail::expected_distortion(source, j, scheme.reconstruction);
  const double raw = conditional_entropy(j, {"A"}, {"V", "B"}) + mutual_information(j, {"A"}, {"B"}, {"U"}) -
                     mutual_information(j, {"A"}, {"E"}, {"U"});
  return {RDETuple{detail::nonneg(rate), dist, detail::nonneg(raw)}, raw};
}

/// Tightest tuple certified by `scheme`: rate I(V;A|B), distortion
/// E d(A, a_hat(V,B)), equivocation [H(A|VB) + I(A;B|U) - I(A;E|U)]+.
inline RDETuple evaluate_scheme(const SecureSource& source, const AuxScheme& scheme) {
  return evaluate_scheme_detailed(source, scheme).tuple;
}

/// Per (v, b), the symbol minimizing E[d(A, a_hat) | V=v, B=b]; lowest index on
/// ties, symbol 0 where p(v, b) = 0.
inline Reconstruction best_reconstruction(const SecureSource& source, const ConditionalPmf& v_channel) {
  if (!(v_channel.input() == source.a()))
    throw std::invalid_argument("v_channel input alphabet differs from the source alphabet A");
  const std::size_t na = source.a().size(), nb = source.b().size(), nv = v_channel.output().size();
  const AxisSet ab{"A", "B"};
  auto pab = source.joint().marginal_mass(ab);
  std::vector<std::size_t> table(nv * nb, 0);
  std::vector<double> w(na);
  for (std::size_t v = 0; v < nv; ++v)
    for (std::size_t b = 0; b < nb; ++b) {
      double total = 0.0;
      for (std::size_t a = 0; a < na; ++a) {
        w[a] = pab[a * nb + b] * v_channel(a, v);
        total += w[a];
      }
      if (total <= 0.0) continue;
      std::size_t best = 0;
      double best_cost = 0.0;
      for (std::size_t c = 0; c < na; ++c) {
        double cost = 0.0;
        for (std::size_t a = 0; a < na; ++a) cost += w[a] * source.distortion(a, c);
        // Costs within rounding of each other count as a tie.
        if (c == 0 || cost < best_cost - 1e-12 * total) {
          best = c;
          best_cost = cost;
        }
      }
      table[v * nb + b] = best;
    }
  return Reconstruction(nv, nb, std::move(table));
}

inline AuxScheme make_scheme(const SecureSource& source, ConditionalPmf v_channel, ConditionalPmf u_channel) {
  Reconstruction r = best_reconstruction(source, v_channel);
  return AuxScheme(std::move(v_channel), std::move(u_channel), std::move(r));
}

/// Lossless form (V = A): (H(A|B), E d(A,A), [I(A;B|U) - I(A;E|U)]+).
inline RDETuple lossless_region_point(const SecureSource& source, const ConditionalPmf& u_channel) {
  if (!(u_channel.input() == source.a()))
    throw std::invalid_argument("u_channel input alphabet differs from the source alphabet A");
  const JointPmf j = joint_from(source.joint(), {ChannelLink{u_channel, "A", "U"}});
  const AxisSet a{"A"};
  auto pa = source.joint().marginal_mass(a);
  double dist = 0.0;
  for (std::size_t x = 0; x < pa.size(); ++x) dist += pa[x] * source.distortion(x, x);
  const double rate = conditional_entropy(j, {"A"}, {"B"});
  const double gap = mutual_information(j, {"A"}, {"B"}, {"U"}) - mutual_information(j, {"A"}, {"E"}, {"U"});
  return {detail::nonneg(rate), dist, detail::nonneg(gap)};
}

/// Wyner-Ziv form with U constant: equivocation [H(A|VB) + I(A;B) - I(A;E)]+.
inline RDETuple less_noisy_bound(const SecureSource& source, const ConditionalPmf& v_channel, const Reconstruction& rec) {
  if (!(v_channel.input() == source.a()))
    throw std::invalid_argument("v_channel input alphabet differs from the source alphabet A");
  const JointPmf j = joint_from(source.joint(), {ChannelLink{v_channel, "A", "V"}});
  const double rate = mutual_information(j, {"V"}, {"A"}, {"B"});
  const double dist = detail::expected_distortion(source, j, rec);
  const double raw = conditional_entropy(j, {"A"}, {"V", "B"}) + mutual_information(j, {"A"}, {"B"}) -
                     mutual_information(j, {"A"}, {"E"});
  return {detail::nonneg(rate), dist, detail::nonneg(raw)};
}

/// Form with U = V: equivocation H(A|V,E).
inline RDETuple eve_less_noisy_bound(const SecureSource& source, const ConditionalPmf& v_channel, const Reconstruction& rec) {
  if (!(v_channel.input() == source.a()))
    throw std::invalid_argument("v_channel input alphabet differs from the source alphabet A");
  const JointPmf j = joint_from(source.joint(), {ChannelLink{v_channel, "A", "V"}});
  const double rate = mutual_information(j, {"V"}, {"A"}, {"B"});
  const double dist = detail::expected_distortion(source, j, rec);
  return {detail::nonneg(rate), dist, detail::nonneg(conditional_entropy(j, {"A"}, {"V", "E"}))};
}

/// Bob without side information (|B| = 1). Same tuple as evaluate_scheme.
inline RDETuple no_side_info_point(const SecureSource& source, const AuxScheme& scheme) {
  if (source.b().size() != 1) throw std::invalid_argument("no_side_info_point requires a singleton B alphabet");
  return evaluate_scheme(source, scheme);
}

/// Direct form when the decoder output itself is the auxiliary: rate I(A_hat;A),
/// distortion E d(A, A_hat), equivocation [H(A|A_hat) - I(A;E|U)]+.
/// `ahat_channel` is A -> A_hat (over the A alphabet) and `u_channel` is A_hat -> U.
inline RDETuple direct_reconstruction_point(const SecureSource& source, const ConditionalPmf& ahat_channel,
                                            const ConditionalPmf& u_channel) {
  if (source.b().size() != 1) throw std::invalid_argument("direct_reconstruction_point requires a singleton B alphabet");
  if (!(ahat_channel.input() == source.a()) || ahat_channel.output().size() != source.a().size())
    throw std::invalid_argument("reconstruction channel must map A onto the A alphabet");
  const JointPmf j = joint_from(source.joint(), {ChannelLink{ahat_channel, "A", "H"}, ChannelLink{u_channel, "H", "U"}});
  const AxisSet ah{"A", "H"};
  auto m = j.marginal_mass(ah);
  const std::size_t n = source.a().size();
  double dist = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t h = 0; h < n; ++h) dist += m[a * n + h] * source.distortion(a, h);
  const double rate = mutual_information(j, {"H"}, {"A"});
  const double raw = conditional_entropy(j, {"A"}, {"H"}) - mutual_information(j, {"A"}, {"E"}, {"U"});
  return {detail::nonneg(rate), dist, detail::nonneg(raw)};
}

/// Smallest distortion reachable at zero rate: E_B[min_c E[d(A,c) | B]].
inline double zero_rate_distortion(const SecureSource& source) {
  const std::size_t na = source.a().size(), nb = source.b().size();
  const AxisSet ab{"A", "B"};
  auto pab = source.joint().marginal_mass(ab);
  double total = 0.0;
  for (std::size_t b = 0; b < nb; ++b) {
    double best = 0.0;
    for (std::size_t c = 0; c < na; ++c) {
      double cost = 0.0;
      for (std::size_t a = 0; a < na; ++a) cost += pab[a * nb + b] * source.distortion(a, c);
      if (c == 0 || cost < best) best = cost;
    }
    total += best;
  }
  return total;
}

}  // namespace secrecy
