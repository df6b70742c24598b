#pragma once

// Finite joint distributions and the information measures over them.
//
// All logarithms are base 2 and 0 log 0 = 0. Axes are always addressed by
// name so that a marginal can never silently pick the wrong coordinate.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace secrecy {

/// Tolerance on the total mass of a pmf (and on each row of a channel).
inline constexpr double kPmfTolerance = 1e-12;

class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw std::invalid_argument("alphabet must be nonempty");
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (symbols_[i].empty()) throw std::invalid_argument("alphabet labels must be nonempty");
      for (std::size_t j = 0; j < i; ++j)
        if (symbols_[i] == symbols_[j])
          throw std::invalid_argument("duplicate alphabet label '" + symbols_[i] + "'");
    }
  }

  /// Labels "0", "1", ..., "n-1".
  static Alphabet indexed(std::size_t n) {
    std::vector<std::string> s;
    s.reserve(n);
    for (std::size_t i = 0; i < n; ++i) s.push_back(std::to_string(i));
    return Alphabet(std::move(s));
  }

  std::size_t size() const noexcept { return symbols_.size(); }
  const std::string& operator[](std::size_t i) const { return symbols_.at(i); }
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }

  std::optional<std::size_t> find(std::string_view label) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
      if (symbols_[i] == label) return i;
    return std::nullopt;
  }

  std::size_t index_of(std::string_view label) const {
    if (auto i = find(label)) return *i;
    throw std::invalid_argument("unknown symbol '" + std::string(label) + "'");
  }

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<std::string> symbols_;
};

struct Axis {
  std::string name;
  Alphabet alphabet;
};

using AxisSet = std::vector<std::string>;

/// Dense joint pmf over named axes, stored row-major (last axis fastest).
class JointPmf {
 public:
  JointPmf(std::vector<Axis> axes, std::vector<double> mass) : axes_(std::move(axes)), mass_(std::move(mass)) {
    if (axes_.empty()) throw std::invalid_argument("joint pmf needs at least one axis");
    for (std::size_t i = 0; i < axes_.size(); ++i) {
      if (axes_[i].name.empty()) throw std::invalid_argument("axis names must be nonempty");
      for (std::size_t j = 0; j < i; ++j)
        if (axes_[i].name == axes_[j].name)
          throw std::invalid_argument("duplicate axis name '" + axes_[i].name + "'");
    }
    init_strides();
    if (mass_.size() != total_)
      throw std::invalid_argument("joint pmf expects " + std::to_string(total_) + " entries, got " +
                                  std::to_string(mass_.size()));
    double sum = 0.0;
    for (std::size_t i = 0; i < mass_.size(); ++i) {
      if (!std::isfinite(mass_[i]) || mass_[i] < 0.0)
        throw std::invalid_argument("joint pmf entry " + std::to_string(i) + " is negative or not finite");
      sum += mass_[i];
    }
    if (std::abs(sum - 1.0) > kPmfTolerance) {
      std::ostringstream os;
      os.precision(17);
      os << "joint pmf sums to " << sum << ", expected 1";
      throw std::invalid_argument(os.str());
    }
  }

  const std::vector<Axis>& axes() const noexcept { return axes_; }
  std::size_t rank() const noexcept { return axes_.size(); }
  std::size_t size() const noexcept { return mass_.size(); }
  std::span<const double> mass() const noexcept { return mass_; }
  std::size_t stride(std::size_t pos) const { return strides_.at(pos); }

  bool has_axis(std::string_view name) const noexcept {
    return std::any_of(axes_.begin(), axes_.end(), [&](const Axis& a) { return a.name == name; });
  }

  std::size_t position(std::string_view name) const {
    for (std::size_t i = 0; i < axes_.size(); ++i)
      if (axes_[i].name == name) return i;
    throw std::invalid_argument("unknown axis '" + std::string(name) + "'");
  }

  const Axis& axis(std::string_view name) const { return axes_[position(name)]; }

  double at(std::span<const std::size_t> index) const {
    if (index.size() != axes_.size()) throw std::invalid_argument("index rank mismatch");
    std::size_t flat = 0;
    for (std::size_t i = 0; i < index.size(); ++i) {
      if (index[i] >= axes_[i].alphabet.size()) throw std::out_of_range("symbol index out of range");
      flat += index[i] * strides_[i];
    }
    return mass_[flat];
  }

  /// Mass of the marginal on `names`, laid out row-major in the order given.
  std::vector<double> marginal_mass(std::span<const std::string> names) const {
    std::vector<std::size_t> pos;
    pos.reserve(names.size());
    for (const auto& n : names) pos.push_back(position(n));
    std::vector<std::size_t> out_stride(pos.size());
    std::size_t out_total = 1;
    for (std::size_t k = pos.size(); k-- > 0;) {
      out_stride[k] = out_total;
      out_total *= axes_[pos[k]].alphabet.size();
    }
    // Per source axis, the contribution of its index to the output offset.
    std::vector<std::size_t> contrib(axes_.size(), 0);
    for (std::size_t k = 0; k < pos.size(); ++k) contrib[pos[k]] += out_stride[k];

    std::vector<double> out(out_total, 0.0);
    std::vector<std::size_t> idx(axes_.size(), 0);
    std::size_t offset = 0;
    for (std::size_t flat = 0; flat < mass_.size(); ++flat) {
      out[offset] += mass_[flat];
      for (std::size_t d = axes_.size(); d-- > 0;) {
        offset += contrib[d];
        if (++idx[d] < axes_[d].alphabet.size()) break;
        offset -= contrib[d] * idx[d];
        idx[d] = 0;
      }
    }
    return out;
  }

  JointPmf marginal(std::span<const std::string> names) const {
    std::vector<Axis> out_axes;
    for (const auto& n : names) out_axes.push_back(axis(n));
    return JointPmf(std::move(out_axes), marginal_mass(names), Unchecked{});
  }

 private:
  struct Unchecked {};
  JointPmf(std::vector<Axis> axes, std::vector<double> mass, Unchecked) : axes_(std::move(axes)), mass_(std::move(mass)) {
    init_strides();
  }

  void init_strides() {
    strides_.assign(axes_.size(), 1);
    total_ = 1;
    for (std::size_t k = axes_.size(); k-- > 0;) {
      strides_[k] = total_;
      total_ *= axes_[k].alphabet.size();
    }
  }

  std::vector<Axis> axes_;
  std::vector<double> mass_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 1;
};

/// Row-stochastic channel p(output | input).
class ConditionalPmf {
 public:
  ConditionalPmf(Alphabet input, Alphabet output, std::vector<double> flat)
      : input_(std::move(input)), output_(std::move(output)), flat_(std::move(flat)) {
    if (flat_.size() != input_.size() * output_.size())
      throw std::invalid_argument("channel expects " + std::to_string(input_.size()) + " rows of " +
                                  std::to_string(output_.size()) + " entries");
    for (std::size_t r = 0; r < input_.size(); ++r) {
      double sum = 0.0;
      for (double x : row(r)) {
        if (!std::isfinite(x) || x < 0.0)
          throw std::invalid_argument("channel row " + std::to_string(r) + " (input '" + input_[r] +
                                      "') has a negative or non-finite entry");
        sum += x;
      }
      if (std::abs(sum - 1.0) > kPmfTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "channel row " << r << " (input '" << input_[r] << "') sums to " << sum;
        throw std::invalid_argument(os.str());
      }
    }
  }

  ConditionalPmf(Alphabet input, Alphabet output, const std::vector<std::vector<double>>& rows)
      : ConditionalPmf(std::move(input), std::move(output), flatten(rows)) {}

  const Alphabet& input() const noexcept { return input_; }
  const Alphabet& output() const noexcept { return output_; }
  std::span<const double> flat() const noexcept { return flat_; }
  std::span<const double> row(std::size_t in) const {
    return std::span<const double>(flat_).subspan(in * output_.size(), output_.size());
  }
  double operator()(std::size_t in, std::size_t out) const { return flat_[in * output_.size() + out]; }

 private:
  static std::vector<double> flatten(const std::vector<std::vector<double>>& rows) {
    std::vector<double> f;
    for (const auto& r : rows) f.insert(f.end(), r.begin(), r.end());
    return f;
  }

  Alphabet input_;
  Alphabet output_;
  std::vector<double> flat_;
};

namespace detail {

inline double entropy_of(std::span<const double> p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log2(x);
  return h;
}

inline void require_known_distinct(const JointPmf& pmf, const AxisSet& set) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    (void)pmf.position(set[i]);
    for (std::size_t j = 0; j < i; ++j)
      if (set[i] == set[j]) throw std::invalid_argument("axis '" + set[i] + "' listed twice");
  }
}

inline void require_disjoint(const AxisSet& a, const AxisSet& b) {
  for (const auto& x : a)
    if (std::find(b.begin(), b.end(), x) != b.end())
      throw std::invalid_argument("axis '" + x + "' appears in overlapping sets");
}

inline AxisSet set_union(const AxisSet& a, const AxisSet& b) {
  AxisSet u = a;
  u.insert(u.end(), b.begin(), b.end());
  return u;
}

}  // namespace detail

/// H(targets) in bits.
inline double entropy(const JointPmf& pmf, const AxisSet& targets) {
  detail::require_known_distinct(pmf, targets);
  if (targets.empty()) return 0.0;
  return detail::entropy_of(pmf.marginal_mass(targets));
}

/// H(targets | given) = H(targets, given) - H(given).
inline double conditional_entropy(const JointPmf& pmf, const AxisSet& targets, const AxisSet& given) {
  detail::require_disjoint(targets, given);
  return entropy(pmf, detail::set_union(targets, given)) - entropy(pmf, given);
}

/// I(x; y | given). May come out a few ulps below zero.
inline double mutual_information(const JointPmf& pmf, const AxisSet& x, const AxisSet& y, const AxisSet& given = {}) {
  detail::require_disjoint(x, y);
  detail::require_disjoint(x, given);
  detail::require_disjoint(y, given);
  const AxisSet xg = detail::set_union(x, given);
  const AxisSet yg = detail::set_union(y, given);
  const AxisSet xyg = detail::set_union(x, yg);
  return entropy(pmf, xg) + entropy(pmf, yg) - entropy(pmf, xyg) - entropy(pmf, given);
}

/// Cascade: p(z|x) = sum_y first(y|x) second(z|y).
inline ConditionalPmf compose(const ConditionalPmf& first, const ConditionalPmf& second) {
  if (!(first.output() == second.input()))
    throw std::invalid_argument("compose: output alphabet of the first channel differs from input of the second");
  const std::size_t nx = first.input().size(), ny = first.output().size(), nz = second.output().size();
  std::vector<double> out(nx * nz, 0.0);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) {
      const double w = first(x, y);
      if (w == 0.0) continue;
      for (std::size_t z = 0; z < nz; ++z) out[x * nz + z] += w * second(y, z);
    }
  return ConditionalPmf(first.input(), second.output(), std::move(out));
}

struct ChannelLink {
  ConditionalPmf channel;
  std::string input_axis;
  std::string output_axis;
};

/// Appends one axis per link; each new variable depends only on its named input axis.
inline JointPmf joint_from(const JointPmf& base, std::span<const ChannelLink> links) {
  std::vector<Axis> axes = base.axes();
  std::vector<double> mass(base.mass().begin(), base.mass().end());
  for (const auto& link : links) {
    auto in = std::find_if(axes.begin(), axes.end(), [&](const Axis& a) { return a.name == link.input_axis; });
    if (in == axes.end()) throw std::invalid_argument("joint_from: unknown input axis '" + link.input_axis + "'");
    if (std::any_of(axes.begin(), axes.end(), [&](const Axis& a) { return a.name == link.output_axis; }))
      throw std::invalid_argument("joint_from: axis name '" + link.output_axis + "' already in use");
    if (!(in->alphabet == link.channel.input()))
      throw std::invalid_argument("joint_from: channel input alphabet differs from axis '" + link.input_axis + "'");

    std::size_t in_pos = static_cast<std::size_t>(in - axes.begin());
    std::size_t in_stride = 1;
    for (std::size_t k = axes.size(); k-- > in_pos + 1;) in_stride *= axes[k].alphabet.size();
    const std::size_t in_size = in->alphabet.size();
    const std::size_t out_size = link.channel.output().size();

    std::vector<double> next(mass.size() * out_size);
    for (std::size_t flat = 0; flat < mass.size(); ++flat) {
      const std::size_t x = (flat / in_stride) % in_size;
      auto row = link.channel.row(x);
      for (std::size_t z = 0; z < out_size; ++z) next[flat * out_size + z] = mass[flat] * row[z];
    }
    axes.push_back(Axis{link.output_axis, link.channel.output()});
    mass = std::move(next);
  }
  return JointPmf(std::move(axes), std::move(mass));
}

inline JointPmf joint_from(const JointPmf& base, std::initializer_list<ChannelLink> links) {
  return joint_from(base, std::span<const ChannelLink>(links.begin(), links.size()));
}

/// p(output_axis | input_axis) read off a joint. Rows with zero input mass are uniform.
inline ConditionalPmf conditional_of(const JointPmf& pmf, const std::string& output_axis, const std::string& input_axis) {
  const AxisSet names{input_axis, output_axis};
  auto m = pmf.marginal_mass(names);
  const Alphabet& in = pmf.axis(input_axis).alphabet;
  const Alphabet& out = pmf.axis(output_axis).alphabet;
  std::vector<double> flat(m.size());
  for (std::size_t x = 0; x < in.size(); ++x) {
    double total = 0.0;
    for (std::size_t z = 0; z < out.size(); ++z) total += m[x * out.size() + z];
    for (std::size_t z = 0; z < out.size(); ++z)
      flat[x * out.size() + z] = total > 0.0 ? m[x * out.size() + z] / total : 1.0 / static_cast<double>(out.size());
    // Renormalize so the row passes the 1e-12 check even after division rounding.
    double s = 0.0;
    for (std::size_t z = 0; z < out.size(); ++z) s += flat[x * out.size() + z];
    for (std::size_t z = 0; z < out.size(); ++z) flat[x * out.size() + z] /= s;
  }
  return ConditionalPmf(in, out, std::move(flat));
}

inline double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("binary_entropy: argument outside [0,1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

/// Crossover of two cascaded binary symmetric channels.
inline double binary_star(double a, double b) {
  if (!(a >= 0.0 && a <= 1.0) || !(b >= 0.0 && b <= 1.0))
    throw std::invalid_argument("binary_star: argument outside [0,1]");
  return a * (1.0 - b) + (1.0 - a) * b;
}

// Standard channels -------------------------------------------------------

inline Alphabet binary_alphabet() { return Alphabet({"0", "1"}); }
inline Alphabet erasure_alphabet() { return Alphabet({"0", "e", "1"}); }

inline ConditionalPmf bsc(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bsc: crossover outside [0,1]");
  return ConditionalPmf(binary_alphabet(), binary_alphabet(), std::vector<double>{1.0 - p, p, p, 1.0 - p});
}

inline ConditionalPmf bec(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("bec: erasure probability outside [0,1]");
  return ConditionalPmf(binary_alphabet(), erasure_alphabet(), std::vector<double>{1.0 - eps, eps, 0.0, 0.0, eps, 1.0 - eps});
}

inline ConditionalPmf identity_channel(const Alphabet& a) {
  std::vector<double> f(a.size() * a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) f[i * a.size() + i] = 1.0;
  return ConditionalPmf(a, a, std::move(f));
}

/// Keeps the input with probability 1-t, otherwise outputs a uniform symbol.
inline ConditionalPmf symmetric_channel(const Alphabet& a, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("symmetric_channel: parameter outside [0,1]");
  const std::size_t n = a.size();
  const double off = t / static_cast<double>(n);
  std::vector<double> f(n * n, off);
  for (std::size_t i = 0; i < n; ++i) f[i * n + i] = 1.0 - t + off;
  return ConditionalPmf(a, a, std::move(f));
}

/// Every input maps to output symbol `out_index`.
inline ConditionalPmf constant_channel(const Alphabet& in, const Alphabet& out, std::size_t out_index = 0) {
  if (out_index >= out.size()) throw std::invalid_argument("constant_channel: output index out of range");
  std::vector<double> f(in.size() * out.size(), 0.0);
  for (std::size_t i = 0; i < in.size(); ++i) f[i * out.size() + out_index] = 1.0;
  return ConditionalPmf(in, out, std::move(f));
}

}  // namespace secrecy
