#pragma once

// Finite-blocklength run of the superposition + binning scheme: u-words
// binned into 2^{nR1} bins, v-words under each u binned into 2^{nR2} bins,
// strong-typicality encoding and decoding, and exact Eve equivocation by
// enumerating every source word.
//
// Seeds: stream k of master seed s is splitmix64(s + (k+1)*golden). Stream 0
// draws the codebook, stream t+1 draws trial t.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "info.hpp"
#include "region.hpp"

namespace secrecy::sim {

inline constexpr double kMaxEnumeration = 16384.0;  // |A|^n
inline constexpr std::size_t kMaxRejections = 100000;

struct Rates {
  double S1 = 0.0;
  double R1 = 0.0;
  double S2 = 0.0;
  double R2 = 0.0;
};

struct SimConfig {
  std::size_t n = 8;
  double typ_tol = 0.1;
  Rates rates;
  std::size_t trials = 0;
  std::uint64_t seed = 1;
  std::size_t memory_budget = std::size_t{256} << 20;  // bytes
  std::size_t threads = 1;                             // 0: hardware concurrency

  void validate() const {
    if (n == 0) throw std::invalid_argument("blocklength must be positive");
    if (!(typ_tol > 0.0)) throw std::invalid_argument("typicality tolerance must be positive");
    const auto& r = rates;
    if (!(r.R1 >= 0.0 && r.S1 >= r.R1) || !(r.R2 >= 0.0 && r.S2 >= r.R2))
      throw std::invalid_argument("rates must satisfy S1 >= R1 >= 0 and S2 >= R2 >= 0");
  }
};

/// Codebook rates from the scheme's information quantities, each moved by
/// `slack` to the safe side of its constraint: covering rates up by one slack,
/// bin rates (S - I(.;B)) down by one slack below S.
inline Rates rates_from_scheme(const SecureSource& source, const AuxScheme& scheme, double slack = 0.1) {
  if (!(slack >= 0.0)) throw std::invalid_argument("slack must be nonnegative");
  const JointPmf j = materialize(source, scheme);
  const double iua = mutual_information(j, {"U"}, {"A"});
  const double iub = mutual_information(j, {"U"}, {"B"});
  const double iva = mutual_information(j, {"V"}, {"A"}, {"U"});
  const double ivb = mutual_information(j, {"V"}, {"B"}, {"U"});
  Rates r;
  r.S1 = iua + slack;
  r.R1 = std::clamp(iua - iub + 2.0 * slack, 0.0, r.S1);
  r.S2 = iva + slack;
  r.R2 = std::clamp(iva - ivb + 2.0 * slack, 0.0, r.S2);
  return r;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(master + (stream + 1) * 0x9e3779b97f4a7c15ULL);
}

/// mt19937_64 with a fixed uniform map, so draws do not depend on the
/// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  std::size_t categorical(std::span<const double> p) {
    const double x = uniform();
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] <= 0.0) continue;
      last = i;
      acc += p[i];
      if (x < acc) return i;
    }
    return last;
  }

 private:
  std::mt19937_64 eng_;
};

using Word = std::vector<std::uint8_t>;

/// Strong typicality of the joint type of `seqs` (all length n) against `pmf`,
/// laid out row-major over `dims`: |N(x) - n p(x)| <= n tol, and N(x) = 0 where p(x) = 0.
inline bool jointly_typical(std::span<const double> pmf, std::span<const std::size_t> dims,
                            std::span<const std::span<const std::uint8_t>> seqs, double tol,
                            std::vector<std::uint32_t>& counts) {
  const std::size_t n = seqs.front().size();
  counts.assign(pmf.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < seqs.size(); ++k) idx = idx * dims[k] + seqs[k][i];
    if (pmf[idx] <= 0.0) return false;
    ++counts[idx];
  }
  const double nn = static_cast<double>(n);
  for (std::size_t x = 0; x < pmf.size(); ++x)
    if (std::abs(static_cast<double>(counts[x]) - nn * pmf[x]) > nn * tol) return false;
  return true;
}

struct EncodeResult {
  bool ok = false;
  std::size_t s1 = 0;  // codeword indices (meaningful when ok)
  std::size_t s2 = 0;
  std::size_t r1 = 0;  // bin indices, 0-based; failures send (0, 0)
  std::size_t r2 = 0;
};

enum class DecodeStage { none, coarse, fine };

inline const char* to_string(DecodeStage s) {
  switch (s) {
    case DecodeStage::none: return "none";
    case DecodeStage::coarse: return "coarse";
    case DecodeStage::fine: return "fine";
  }
  return "none";
}

struct DecodeResult {
  bool ok = false;
  DecodeStage failed_stage = DecodeStage::none;
  std::size_t s1 = 0;
  std::size_t s2 = 0;
  std::size_t coarse_candidates = 0;  // typical u-words in the bin
  std::size_t fine_candidates = 0;
  Word a_hat;
};

class Codebook {
 public:
  std::size_t n() const noexcept { return n_; }
  double typ_tol() const noexcept { return tol_; }
  std::size_t u_count() const noexcept { return u_count_; }
  std::size_t v_count() const noexcept { return v_count_; }
  std::size_t u_bins() const noexcept { return u_bins_; }
  std::size_t v_bins() const noexcept { return v_bins_; }
  std::size_t u_bin(std::size_t s1) const noexcept { return s1 % u_bins_; }
  std::size_t v_bin(std::size_t s2) const noexcept { return s2 % v_bins_; }
  std::size_t messages() const noexcept { return u_bins_ * v_bins_; }
  std::size_t message_index(std::size_t r1, std::size_t r2) const noexcept { return r1 * v_bins_ + r2; }

  std::span<const std::uint8_t> u_word(std::size_t s1) const { return {u_words_.data() + s1 * n_, n_}; }
  std::span<const std::uint8_t> v_word(std::size_t s1, std::size_t s2) const {
    return {v_words_.data() + (s1 * v_count_ + s2) * n_, n_};
  }

  /// First u-word jointly typical with a, then the first v-word under it
  /// typical with (u, a).
  EncodeResult encode(std::span<const std::uint8_t> a) const {
    check_length(a);
    std::vector<std::uint32_t> counts;
    EncodeResult r;
    for (std::size_t s1 = 0; s1 < u_count_; ++s1) {
      const std::span<const std::uint8_t> ua[] = {u_word(s1), a};
      if (!jointly_typical(p_ua_, dims_ua_, ua, tol_, counts)) continue;
      for (std::size_t s2 = 0; s2 < v_count_; ++s2) {
        const std::span<const std::uint8_t> uva[] = {u_word(s1), v_word(s1, s2), a};
        if (!jointly_typical(p_uva_, dims_uva_, uva, tol_, counts)) continue;
        return {true, s1, s2, u_bin(s1), v_bin(s2)};
      }
      break;
    }
    return r;
  }

  /// Unique typical member of each bin; on zero or several, the most likely
  /// member (among the typical ones if any) is used and the stage is reported.
  DecodeResult decode(std::size_t r1, std::size_t r2, std::span<const std::uint8_t> b) const {
    check_length(b);
    if (r1 >= u_bins_ || r2 >= v_bins_) throw std::invalid_argument("message bin index out of range");
    std::vector<std::uint32_t> counts;
    DecodeResult d;
    d.ok = true;

    std::vector<std::size_t> typical;
    for (std::size_t s1 = r1; s1 < u_count_; s1 += u_bins_) {
      const std::span<const std::uint8_t> ub[] = {u_word(s1), b};
      if (jointly_typical(p_ub_, dims_ub_, ub, tol_, counts)) typical.push_back(s1);
    }
    d.coarse_candidates = typical.size();
    if (typical.size() == 1) {
      d.s1 = typical.front();
    } else {
      d.ok = false;
      d.failed_stage = DecodeStage::coarse;
      d.s1 = most_likely(typical, r1, u_count_, u_bins_, [&](std::size_t s1, std::size_t i) {
        return cond_b_u_[u_word(s1)[i] * nb_ + b[i]];
      });
    }

    typical.clear();
    for (std::size_t s2 = r2; s2 < v_count_; s2 += v_bins_) {
      const std::span<const std::uint8_t> uvb[] = {u_word(d.s1), v_word(d.s1, s2), b};
      if (jointly_typical(p_uvb_, dims_uvb_, uvb, tol_, counts)) typical.push_back(s2);
    }
    d.fine_candidates = typical.size();
    if (typical.size() == 1) {
      d.s2 = typical.front();
    } else {
      if (d.ok) d.failed_stage = DecodeStage::fine;
      d.ok = false;
      d.s2 = most_likely(typical, r2, v_count_, v_bins_, [&](std::size_t s2, std::size_t i) {
        return cond_b_uv_[(u_word(d.s1)[i] * nv_ + v_word(d.s1, s2)[i]) * nb_ + b[i]];
      });
    }

    const auto v = v_word(d.s1, d.s2);
    d.a_hat.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) d.a_hat[i] = static_cast<std::uint8_t>(rec_(v[i], b[i]));
    return d;
  }

  /// Message sent for every source word, indexed by the word read as a base-|A| number.
  const std::vector<std::uint32_t>& encoder_table() const noexcept { return table_; }

  /// (1/n) H(A^n | W = message, E^n = e) under the source law.
  double exact_equivocation(std::size_t r1, std::size_t r2, std::span<const std::uint8_t> e) const {
    check_length(e);
    if (r1 >= u_bins_ || r2 >= v_bins_) throw std::invalid_argument("message bin index out of range");
    const auto& pre = preimage_[message_index(r1, r2)];
    std::vector<double> w;
    w.reserve(pre.size());
    double total = 0.0;
    Word a(n_);
    for (std::uint32_t idx : pre) {
      unpack(idx, a);
      double p = 1.0;
      for (std::size_t i = 0; i < n_ && p > 0.0; ++i) p *= p_ae_[a[i] * ne_ + e[i]];
      w.push_back(p);
      total += p;
    }
    if (!(total > 0.0)) throw std::invalid_argument("message and Eve observation have zero probability together");
    double h = 0.0;
    for (double p : w)
      if (p > 0.0) h -= (p / total) * std::log2(p / total);
    return std::max(0.0, h) / static_cast<double>(n_);
  }

  /// Exact H(W) in bits under the source law, encode failures included.
  double message_entropy() const {
    double h = 0.0;
    Word a(n_);
    for (const auto& pre : preimage_) {
      double m = 0.0;
      for (std::uint32_t idx : pre) {
        unpack(idx, a);
        double p = 1.0;
        for (std::size_t i = 0; i < n_; ++i) p *= p_a_[a[i]];
        m += p;
      }
      if (m > 0.0) h -= m * std::log2(m);
    }
    return h;
  }

  const Reconstruction& reconstruction() const noexcept { return rec_; }

 private:
  friend Codebook generate_codebook(const SecureSource&, const AuxScheme&, const SimConfig&);

  Codebook(const SecureSource& source, const AuxScheme& scheme) : rec_(scheme.reconstruction) {
    na_ = source.a().size();
    nb_ = source.b().size();
    ne_ = source.e().size();
    nv_ = scheme.v_channel.output().size();
    nu_ = scheme.u_channel.output().size();
    if (std::max({na_, nb_, ne_, nv_, nu_}) > 255) throw DomainError("alphabets larger than 255 symbols are not simulated");
    const JointPmf j = materialize(source, scheme);
    auto m = [&](std::initializer_list<std::string> names) {
      const AxisSet s(names);
      return j.marginal_mass(s);
    };
    p_a_ = m({"A"});
    p_u_ = m({"U"});
    p_uv_ = m({"U", "V"});
    p_ua_ = m({"U", "A"});
    p_uva_ = m({"U", "V", "A"});
    p_ub_ = m({"U", "B"});
    p_uvb_ = m({"U", "V", "B"});
    p_ae_ = m({"A", "E"});
    for (std::size_t a = 0; a < na_; ++a)
      for (std::size_t e = 0; e < ne_; ++e) p_ae_[a * ne_ + e] = p_a_[a] > 0.0 ? p_ae_[a * ne_ + e] / p_a_[a] : 0.0;
    cond_b_u_ = conditional_rows(p_ub_, nu_, nb_);
    cond_b_uv_ = conditional_rows(p_uvb_, nu_ * nv_, nb_);
    dims_ua_ = {nu_, na_};
    dims_uva_ = {nu_, nv_, na_};
    dims_ub_ = {nu_, nb_};
    dims_uvb_ = {nu_, nv_, nb_};
    dims_uv_ = {nu_, nv_};
  }

  static std::vector<double> conditional_rows(const std::vector<double>& joint, std::size_t rows, std::size_t cols) {
    std::vector<double> out(joint.size(), 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < cols; ++c) s += joint[r * cols + c];
      if (s > 0.0)
        for (std::size_t c = 0; c < cols; ++c) out[r * cols + c] = joint[r * cols + c] / s;
    }
    return out;
  }

  template <class Lik>
  std::size_t most_likely(const std::vector<std::size_t>& typical, std::size_t bin, std::size_t count, std::size_t bins,
                          Lik lik) const {
    std::vector<std::size_t> pool = typical;
    if (pool.empty())
      for (std::size_t s = bin; s < count; s += bins) pool.push_back(s);
    std::size_t best = pool.front();
    double best_ll = -std::numeric_limits<double>::infinity();
    for (std::size_t s : pool) {
      double ll = 0.0;
      for (std::size_t i = 0; i < n_; ++i) {
        const double q = lik(s, i);
        ll += q > 0.0 ? std::log(q) : -1e300;
      }
      if (ll > best_ll) {
        best_ll = ll;
        best = s;
      }
    }
    return best;
  }

  void check_length(std::span<const std::uint8_t> w) const {
    if (w.size() != n_) throw std::invalid_argument("sequence length differs from the blocklength");
  }

  void unpack(std::uint32_t idx, Word& a) const {
    for (std::size_t i = n_; i-- > 0;) {
      a[i] = static_cast<std::uint8_t>(idx % na_);
      idx /= static_cast<std::uint32_t>(na_);
    }
  }

  void build_table() {
    std::size_t words = 1;
    for (std::size_t i = 0; i < n_; ++i) words *= na_;
    table_.resize(words);
    preimage_.assign(messages(), {});
    Word a(n_);
    for (std::size_t idx = 0; idx < words; ++idx) {
      unpack(static_cast<std::uint32_t>(idx), a);
      const auto r = encode(a);
      const auto msg = static_cast<std::uint32_t>(message_index(r.r1, r.r2));
      table_[idx] = msg;
      preimage_[msg].push_back(static_cast<std::uint32_t>(idx));
    }
  }

  std::size_t n_ = 0;
  double tol_ = 0.1;
  std::size_t na_ = 0, nb_ = 0, ne_ = 0, nv_ = 0, nu_ = 0;
  std::size_t u_count_ = 0, v_count_ = 0, u_bins_ = 1, v_bins_ = 1;
  Word u_words_;
  Word v_words_;
  Reconstruction rec_;
  std::vector<double> p_a_, p_u_, p_uv_, p_ua_, p_uva_, p_ub_, p_uvb_, p_ae_, cond_b_u_, cond_b_uv_;
  std::vector<std::size_t> dims_ua_, dims_uva_, dims_ub_, dims_uvb_, dims_uv_;

  std::vector<std::uint32_t> table_;
  std::vector<std::vector<std::uint32_t>> preimage_;
};

/// Number of codewords for rate s at blocklength n, with a guard against float noise.
inline double codeword_count(double s, std::size_t n) { return std::ceil(std::exp2(static_cast<double>(n) * s) - 1e-9); }
inline double bin_count(double r, std::size_t n) { return std::max(1.0, std::floor(std::exp2(static_cast<double>(n) * r) + 1e-9)); }

/// Rejects configurations that cannot be enumerated or stored.
inline void check_resources(const SecureSource& source, const SimConfig& cfg) {
  const double words = std::pow(static_cast<double>(source.a().size()), static_cast<double>(cfg.n));
  if (words > kMaxEnumeration)
    throw ResourceError("|A|^n = " + std::to_string(words) + " source words exceed the enumeration bound " +
                        std::to_string(static_cast<std::size_t>(kMaxEnumeration)));
  const double nu = codeword_count(cfg.rates.S1, cfg.n), nv = codeword_count(cfg.rates.S2, cfg.n);
  const double bytes = static_cast<double>(cfg.n) * nu * (1.0 + nv) + 4.0 * words * 2.0;
  if (bytes > static_cast<double>(cfg.memory_budget))
    throw ResourceError("codebook needs about " + std::to_string(static_cast<long long>(bytes)) + " bytes, budget is " +
                        std::to_string(cfg.memory_budget));
}

namespace detail {

inline Word draw_typical(Rng& rng, std::size_t n, const std::function<std::size_t(Rng&, std::size_t)>& letter,
                         const std::function<bool(const Word&)>& accept) {
  Word w(n);
  for (std::size_t attempt = 0; attempt < kMaxRejections; ++attempt) {
    for (std::size_t i = 0; i < n; ++i) w[i] = static_cast<std::uint8_t>(letter(rng, i));
    if (accept(w)) return w;
  }
  throw DegenerateParameters("no typical word after " + std::to_string(kMaxRejections) +
                             " draws; raise the typicality tolerance or the blocklength");
}

}  // namespace detail

/// u-words i.i.d. from p(u) until typical; under each, v-words letter by letter
/// from p(v|u) until (u, v) is typical. Deterministic in cfg.seed.
inline Codebook generate_codebook(const SecureSource& source, const AuxScheme& scheme, const SimConfig& cfg) {
  cfg.validate();
  check_compatible(source, scheme);
  check_resources(source, cfg);
  Codebook cb(source, scheme);
  cb.n_ = cfg.n;
  cb.tol_ = cfg.typ_tol;
  cb.u_count_ = static_cast<std::size_t>(codeword_count(cfg.rates.S1, cfg.n));
  cb.v_count_ = static_cast<std::size_t>(codeword_count(cfg.rates.S2, cfg.n));
  cb.u_bins_ = std::min(cb.u_count_, static_cast<std::size_t>(bin_count(cfg.rates.R1, cfg.n)));
  cb.v_bins_ = std::min(cb.v_count_, static_cast<std::size_t>(bin_count(cfg.rates.R2, cfg.n)));

  const std::size_t n = cfg.n, nu = cb.nu_, nv = cb.nv_;
  std::vector<double> v_given_u = Codebook::conditional_rows(cb.p_uv_, nu, nv);
  Rng rng(stream_seed(cfg.seed, 0));
  std::vector<std::uint32_t> counts;
  const std::size_t u_dims[] = {nu};

  cb.u_words_.reserve(cb.u_count_ * n);
  cb.v_words_.reserve(cb.u_count_ * cb.v_count_ * n);
  for (std::size_t s1 = 0; s1 < cb.u_count_; ++s1) {
    Word u = detail::draw_typical(
        rng, n, [&](Rng& r, std::size_t) { return r.categorical(cb.p_u_); },
        [&](const Word& w) {
          const std::span<const std::uint8_t> s[] = {w};
          return jointly_typical(cb.p_u_, u_dims, s, cfg.typ_tol, counts);
        });
    cb.u_words_.insert(cb.u_words_.end(), u.begin(), u.end());
    for (std::size_t s2 = 0; s2 < cb.v_count_; ++s2) {
      Word v = detail::draw_typical(
          rng, n, [&](Rng& r, std::size_t i) { return r.categorical(std::span<const double>(v_given_u).subspan(u[i] * nv, nv)); },
          [&](const Word& w) {
            const std::span<const std::uint8_t> s[] = {u, w};
            return jointly_typical(cb.p_uv_, cb.dims_uv_, s, cfg.typ_tol, counts);
          });
      cb.v_words_.insert(cb.v_words_.end(), v.begin(), v.end());
    }
  }
  cb.build_table();
  return cb;
}

struct TrialRecord {
  bool encode_ok = false;
  bool decode_ok = false;
  DecodeStage failed_stage = DecodeStage::none;
  std::size_t coarse_candidates = 0;
  double distortion = 0.0;
  double equivocation = 0.0;
};

struct Summary {
  std::size_t trials = 0;
  double mean_distortion = 0.0;
  double encode_failure_rate = 0.0;
  double decode_failure_rate = 0.0;
  double error_rate = 0.0;           // encode or decode failure
  double coarse_ambiguity_rate = 0.0;  // more than one typical u-word in the bin
  double mean_equivocation = 0.0;
  double message_entropy = 0.0;      // H(W) in bits
  std::size_t u_words = 0, u_bins = 0, v_words = 0, v_bins = 0;
  std::vector<TrialRecord> records;
};

/// One draw of (A^n, B^n, E^n), encode, decode, and exact equivocation.
inline TrialRecord run_trial(const SecureSource& source, const Codebook& cb, std::uint64_t seed) {
  const std::size_t n = cb.n(), nb = source.b().size(), ne = source.e().size();
  Rng rng(seed);
  Word a(n), b(n), e(n);
  const auto mass = source.joint().mass();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t x = rng.categorical(mass);
    a[i] = static_cast<std::uint8_t>(x / (nb * ne));
    b[i] = static_cast<std::uint8_t>((x / ne) % nb);
    e[i] = static_cast<std::uint8_t>(x % ne);
  }
  TrialRecord rec;
  const EncodeResult enc = cb.encode(a);
  rec.encode_ok = enc.ok;
  const DecodeResult dec = cb.decode(enc.r1, enc.r2, b);
  rec.decode_ok = dec.ok && enc.ok && dec.s1 == enc.s1 && dec.s2 == enc.s2;
  rec.failed_stage = dec.failed_stage;
  rec.coarse_candidates = dec.coarse_candidates;
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) d += source.distortion(a[i], dec.a_hat[i]);
  rec.distortion = d / static_cast<double>(n);
  rec.equivocation = cb.exact_equivocation(enc.r1, enc.r2, e);
  return rec;
}

inline Summary run_trials(const SecureSource& source, const AuxScheme& scheme, const SimConfig& cfg) {
  cfg.validate();
  Summary s;
  if (cfg.trials == 0) return s;
  const Codebook cb = generate_codebook(source, scheme, cfg);
  s.trials = cfg.trials;
  s.u_words = cb.u_count();
  s.u_bins = cb.u_bins();
  s.v_words = cb.v_count();
  s.v_bins = cb.v_bins();
  s.records.resize(cfg.trials);

  std::size_t threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, cfg.trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t; (t = next++) < cfg.trials;) s.records[t] = run_trial(source, cb, stream_seed(cfg.seed, t + 1));
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (const auto& r : s.records) {
    s.mean_distortion += r.distortion;
    s.mean_equivocation += r.equivocation;
    s.encode_failure_rate += r.encode_ok ? 0.0 : 1.0;
    s.decode_failure_rate += r.decode_ok ? 0.0 : 1.0;
    s.error_rate += r.encode_ok && r.decode_ok ? 0.0 : 1.0;
    s.coarse_ambiguity_rate += r.coarse_candidates > 1 ? 1.0 : 0.0;
  }
  const double k = static_cast<double>(cfg.trials);
  s.mean_distortion /= k;
  s.mean_equivocation /= k;
  s.encode_failure_rate /= k;
  s.decode_failure_rate /= k;
  s.error_rate /= k;
  s.coarse_ambiguity_rate /= k;
  s.message_entropy = cb.message_entropy();
  return s;
}

inline void write_trials_csv(std::ostream& os, const Summary& s) {
  os << "trial,encode_ok,decode_ok,distortion,equivocation\n" << std::fixed << std::setprecision(6);
  for (std::size_t t = 0; t < s.records.size(); ++t) {
    const auto& r = s.records[t];
    os << t << ',' << (r.encode_ok ? 1 : 0) << ',' << (r.decode_ok ? 1 : 0) << ',' << r.distortion << ',' << r.equivocation << '\n';
  }
  os.unsetf(std::ios::floatfield);
}

}  // namespace secrecy::sim
