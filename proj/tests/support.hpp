#pragma once

// Shared test helpers: random instances and a brute-force entropy that does
// not go through the library's marginalization code.

#include <cmath>
#include <cstddef>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "secrecy/info.hpp"
#include "secrecy/region.hpp"

namespace testing_support {

using secrecy::Alphabet;
using secrecy::Axis;
using secrecy::ConditionalPmf;
using secrecy::JointPmf;

inline std::vector<double> random_simplex(std::size_t n, std::mt19937_64& rng, double zero_prob = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(n);
  double s = 0.0;
  for (auto& x : w) {
    x = (zero_prob > 0.0 && u(rng) < zero_prob) ? 0.0 : -std::log(1.0 - u(rng));
    s += x;
  }
  if (s == 0.0) {
    w[0] = 1.0;
    s = 1.0;
  }
  for (auto& x : w) x /= s;
  return w;
}

inline JointPmf random_joint(const std::vector<std::pair<std::string, std::size_t>>& shape, std::mt19937_64& rng,
                             double zero_prob = 0.0) {
  std::vector<Axis> axes;
  std::size_t total = 1;
  for (const auto& [name, n] : shape) {
    axes.push_back(Axis{name, Alphabet::indexed(n)});
    total *= n;
  }
  return JointPmf(std::move(axes), random_simplex(total, rng, zero_prob));
}

inline ConditionalPmf random_channel(const Alphabet& in, const Alphabet& out, std::mt19937_64& rng, double zero_prob = 0.0) {
  std::vector<double> flat;
  for (std::size_t r = 0; r < in.size(); ++r) {
    auto row = random_simplex(out.size(), rng, zero_prob);
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return ConditionalPmf(in, out, std::move(flat));
}

/// Random source over A, B, E with the given alphabet sizes and Hamming distortion.
inline secrecy::SecureSource random_source(std::size_t na, std::size_t nb, std::size_t ne, std::mt19937_64& rng) {
  return secrecy::SecureSource(random_joint({{"A", na}, {"B", nb}, {"E", ne}}, rng), secrecy::hamming_distortion(na));
}

/// H(targets) in bits by walking every cell and keying on the target symbols.
inline double brute_entropy(const JointPmf& pmf, const std::vector<std::string>& targets) {
  const auto& axes = pmf.axes();
  std::vector<std::size_t> pos;
  for (const auto& t : targets)
    for (std::size_t k = 0; k < axes.size(); ++k)
      if (axes[k].name == t) pos.push_back(k);
  std::map<std::vector<std::size_t>, double> acc;
  auto mass = pmf.mass();
  for (std::size_t flat = 0; flat < mass.size(); ++flat) {
    std::vector<std::size_t> idx(axes.size());
    std::size_t rem = flat;
    for (std::size_t k = axes.size(); k-- > 0;) {
      idx[k] = rem % axes[k].alphabet.size();
      rem /= axes[k].alphabet.size();
    }
    std::vector<std::size_t> key;
    for (auto p : pos) key.push_back(idx[p]);
    acc[key] += mass[flat];
  }
  double h = 0.0;
  for (const auto& [k, p] : acc)
    if (p > 0.0) h -= p * std::log(p) / std::log(2.0);
  return h;
}

inline std::vector<std::string> join(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// I(X;Y|Z) from brute-force entropies.
inline double brute_mi(const JointPmf& pmf, const std::vector<std::string>& x, const std::vector<std::string>& y,
                       const std::vector<std::string>& z = {}) {
  return brute_entropy(pmf, join(x, z)) + brute_entropy(pmf, join(y, z)) - brute_entropy(pmf, join(join(x, y), z)) -
         brute_entropy(pmf, z);
}

}  // namespace testing_support
