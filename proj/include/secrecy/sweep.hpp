#pragma once

// Boundary search over auxiliary schemes for a list of distortion budgets.
//
// Each budget starts from a coarse grid over two structured channel families
// (symmetric and erasure-type V, symmetric U on top of V), followed by pattern
// search on the two parameters and then on individual matrix entries. Every
// reported point carries the scheme that achieves it.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "info.hpp"
#include "region.hpp"
#include "region_io.hpp"

namespace secrecy {

struct SearchConfig {
  std::size_t grid = 16;            // coarse samples per parameter: grid + 1
  std::size_t refine_rounds = 3;
  double min_step = 1e-7;
  std::optional<double> rate_budget;
  std::size_t random_starts = 0;    // extra starts from random matrices at the cardinality caps
  std::uint64_t seed = 1;
  std::size_t threads = 1;          // 0: hardware concurrency
};

struct BoundaryPoint {
  double target_distortion = 0.0;
  RDETuple tuple;
  double raw_equivocation = 0.0;
  AuxScheme scheme;
  std::string scheme_id;
};

struct BoundaryCurve {
  std::vector<BoundaryPoint> points;
  std::vector<double> infeasible;  // budgets no candidate could meet
  SearchConfig config;
};

namespace detail {

struct Candidate {
  ConditionalPmf v;
  ConditionalPmf u;
  Reconstruction rec;
  SchemeEvaluation ev;
};

enum class Goal { min_rate, max_equivocation };

struct Objective {
  const SecureSource* source;
  double distortion_cap;
  double rate_cap;  // +inf when unconstrained
  Goal goal;

  double violation(const SchemeEvaluation& e) const {
    return std::max(0.0, e.tuple.distortion - distortion_cap - 1e-12) + std::max(0.0, e.tuple.rate - rate_cap - 1e-12);
  }

  // Strictly better; equal keys keep the incumbent.
  bool better(const SchemeEvaluation& a, const SchemeEvaluation& b) const {
    const double va = violation(a), vb = violation(b);
    if (va != vb) return va < vb;
    const double pa = goal == Goal::min_rate ? a.tuple.rate : -a.raw_equivocation;
    const double pb = goal == Goal::min_rate ? b.tuple.rate : -b.raw_equivocation;
    if (pa != pb) return pa < pb;
    const double sa = goal == Goal::min_rate ? -a.raw_equivocation : a.tuple.rate;
    const double sb = goal == Goal::min_rate ? -b.raw_equivocation : b.tuple.rate;
    return sa < sb;
  }

  bool feasible(const SchemeEvaluation& e) const { return violation(e) == 0.0; }

  Candidate make(ConditionalPmf v, ConditionalPmf u) const {
    Reconstruction rec = best_reconstruction(*source, v);
    AuxScheme s(v, u, rec);
    auto ev = evaluate_scheme_detailed(*source, s);
    return {std::move(v), std::move(u), std::move(rec), ev};
  }
};

inline Alphabet with_erasure(const Alphabet& a) {
  auto labels = a.symbols();
  std::string star = "*";
  while (a.find(star)) star += "*";
  labels.push_back(star);
  return Alphabet(labels);
}

/// Keeps the symbol with probability 1-t, erases it otherwise.
inline ConditionalPmf erasure_channel(const Alphabet& a, double t) {
  const std::size_t n = a.size();
  std::vector<double> f(n * (n + 1), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    f[i * (n + 1) + i] = 1.0 - t;
    f[i * (n + 1) + n] = t;
  }
  return ConditionalPmf(a, with_erasure(a), std::move(f));
}

inline ConditionalPmf family_v(const Alphabet& a, int family, double t) {
  return family == 0 ? symmetric_channel(a, t) : erasure_channel(a, t);
}

struct Param {
  int family;
  double t;
  double s;
};

inline Candidate make_param(const Objective& obj, const Param& p) {
  ConditionalPmf v = family_v(obj.source->a(), p.family, p.t);
  ConditionalPmf u = symmetric_channel(v.output(), p.s);
  return obj.make(std::move(v), std::move(u));
}

inline std::pair<Param, Candidate> coarse_scan(const Objective& obj, std::size_t grid) {
  std::optional<std::pair<Param, Candidate>> best;
  for (int family = 0; family < 2; ++family)
    for (std::size_t i = 0; i <= grid; ++i)
      for (std::size_t j = 0; j <= grid; ++j) {
        Param p{family, static_cast<double>(i) / static_cast<double>(grid), static_cast<double>(j) / static_cast<double>(grid)};
        Candidate c = make_param(obj, p);
        if (!best || obj.better(c.ev, best->second.ev)) best.emplace(p, std::move(c));
      }
  return std::move(*best);
}

inline void refine_params(const Objective& obj, Param& p, Candidate& best, const SearchConfig& cfg) {
  constexpr int kMovesPerLevel = 64;
  for (std::size_t round = 0; round < cfg.refine_rounds; ++round) {
    for (double h = 1.0 / (static_cast<double>(cfg.grid) * std::ldexp(1.0, static_cast<int>(round))); h >= cfg.min_step; h *= 0.5) {
      for (int moves = 0; moves < kMovesPerLevel; ++moves) {
        bool moved = false;
        for (int k = 0; k < 4 && !moved; ++k) {
          Param q = p;
          double& x = k < 2 ? q.t : q.s;
          x = std::clamp(x + (k % 2 ? -h : h), 0.0, 1.0);
          if (q.t == p.t && q.s == p.s) continue;
          Candidate c = make_param(obj, q);
          if (obj.better(c.ev, best.ev)) {
            p = q;
            best = std::move(c);
            moved = true;
          }
        }
        if (!moved) break;
      }
    }
  }
}

/// Moves `h` of mass between two entries of one row; false when nothing changes.
inline bool shift_mass(std::vector<double>& flat, std::size_t cols, std::size_t row, std::size_t from, std::size_t to, double h) {
  double& src = flat[row * cols + from];
  const double amount = std::min(h, src);
  if (amount <= 0.0) return false;
  src -= amount;
  flat[row * cols + to] += amount;
  return true;
}

inline void refine_entries(const Objective& obj, Candidate& best, double start_step, const SearchConfig& cfg) {
  constexpr int kMovesPerLevel = 32;
  for (double h = start_step; h >= cfg.min_step; h *= 0.5) {
    for (int moves = 0; moves < kMovesPerLevel; ++moves) {
      bool moved = false;
      for (int which = 0; which < 2 && !moved; ++which) {
        const ConditionalPmf& m = which == 0 ? best.v : best.u;
        const std::size_t rows = m.input().size(), cols = m.output().size();
        for (std::size_t r = 0; r < rows && !moved; ++r)
          for (std::size_t from = 0; from < cols && !moved; ++from)
            for (std::size_t to = 0; to < cols && !moved; ++to) {
              if (from == to) continue;
              std::vector<double> flat(m.flat().begin(), m.flat().end());
              if (!shift_mass(flat, cols, r, from, to, h)) continue;
              ConditionalPmf changed(m.input(), m.output(), std::move(flat));
              Candidate c = which == 0 ? obj.make(changed, best.u) : obj.make(best.v, changed);
              if (obj.better(c.ev, best.ev)) {
                best = std::move(c);
                moved = true;
              }
            }
      }
      if (!moved) break;
    }
  }
}

inline ConditionalPmf random_channel(const Alphabet& in, const Alphabet& out, std::mt19937_64& rng) {
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> f(in.size() * out.size());
  for (std::size_t r = 0; r < in.size(); ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < out.size(); ++c) s += f[r * out.size() + c] = ex(rng);
    for (std::size_t c = 0; c < out.size(); ++c) f[r * out.size() + c] /= s;
  }
  return ConditionalPmf(in, out, std::move(f));
}

inline Candidate search(const Objective& obj, const SearchConfig& cfg, std::uint64_t stream,
                        const std::optional<Candidate>& extra_start) {
  auto [p, best] = coarse_scan(obj, cfg.grid);
  refine_params(obj, p, best, cfg);
  if (extra_start && obj.better(extra_start->ev, best.ev)) best = *extra_start;
  const double step = 1.0 / static_cast<double>(cfg.grid);
  refine_entries(obj, best, step, cfg);

  if (cfg.random_starts > 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    std::mt19937_64 rng(seq);
    const auto caps = cardinality_caps(obj.source->a().size());
    const Alphabet va = Alphabet::indexed(caps.v), ua = Alphabet::indexed(caps.u);
    for (std::size_t k = 0; k < cfg.random_starts; ++k) {
      ConditionalPmf v = random_channel(obj.source->a(), va, rng);
      ConditionalPmf u = random_channel(va, ua, rng);
      Candidate c = obj.make(std::move(v), std::move(u));
      refine_entries(obj, c, step, cfg);
      if (obj.better(c.ev, best.ev)) best = std::move(c);
    }
  }
  return best;
}

inline std::string scheme_id(std::size_t k) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "s%04zu", k);
  return buf;
}

}  // namespace detail

/// Smallest expected distortion of any scheme: V = A with the best decoder.
inline double min_distortion(const SecureSource& source) {
  const auto v = identity_channel(source.a());
  const auto rec = best_reconstruction(source, v);
  const JointPmf j = joint_from(source.joint(), {ChannelLink{v, "A", "V"}});
  return detail::expected_distortion(source, j, rec);
}

/// For each budget D: without a rate budget, the least rate at distortion <= D and
/// then the largest equivocation at that rate; with one, the largest
/// equivocation at distortion <= D and rate <= budget.
inline BoundaryCurve sweep_boundary(const SecureSource& source, std::vector<double> grid, const SearchConfig& cfg = {}) {
  if (grid.empty()) throw std::invalid_argument("distortion grid is empty");
  if (cfg.grid == 0) throw std::invalid_argument("search grid must be positive");
  for (double d : grid)
    if (!std::isfinite(d) || d < 0.0) throw std::invalid_argument("distortion budgets must be finite and nonnegative");
  std::sort(grid.begin(), grid.end());

  BoundaryCurve curve;
  curve.config = cfg;
  const double d_min = min_distortion(source);
  std::vector<double> targets;
  for (double d : grid) (d < d_min - kEqualityTolerance ? curve.infeasible : targets).push_back(d);

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::optional<detail::Candidate>> first(targets.size());

  auto stage_one = [&](std::size_t k) {
    const double cap = cfg.rate_budget.value_or(inf);
    const auto goal = cfg.rate_budget ? detail::Goal::max_equivocation : detail::Goal::min_rate;
    first[k] = detail::search({&source, targets[k], cap, goal}, cfg, 2 * k, std::nullopt);
  };

  std::size_t threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, targets.size());
  auto run_parallel = [&](auto&& job) {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t k; (k = next++) < targets.size();) job(k);
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
  };
  run_parallel(stage_one);

  // A scheme that met a smaller budget meets every larger one.
  for (std::size_t k = 1; k < targets.size(); ++k) {
    const detail::Objective obj{&source, targets[k], cfg.rate_budget.value_or(inf),
                                cfg.rate_budget ? detail::Goal::max_equivocation : detail::Goal::min_rate};
    if (obj.better(first[k - 1]->ev, first[k]->ev)) first[k] = first[k - 1];
  }

  // Budgets where even the best candidate breaks a constraint are reported, not returned.
  std::vector<bool> met(targets.size());
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const detail::Objective obj{&source, targets[k], cfg.rate_budget.value_or(inf), detail::Goal::min_rate};
    met[k] = obj.feasible(first[k]->ev);
  }

  std::vector<std::optional<detail::Candidate>> chosen(targets.size());
  if (cfg.rate_budget) {
    chosen = first;
  } else {
    run_parallel([&](std::size_t k) {
      if (!met[k]) return;
      const detail::Objective obj{&source, targets[k], first[k]->ev.tuple.rate + kEqualityTolerance, detail::Goal::max_equivocation};
      chosen[k] = detail::search(obj, cfg, 2 * k + 1, first[k]);
    });
  }

  for (std::size_t k = 0; k < targets.size(); ++k) {
    if (!met[k]) {
      curve.infeasible.push_back(targets[k]);
      continue;
    }
    auto& c = *chosen[k];
    AuxScheme scheme(c.v, c.u, c.rec);
    curve.points.push_back({targets[k], c.ev.tuple, c.ev.raw_equivocation, std::move(scheme), detail::scheme_id(curve.points.size())});
  }
  return curve;
}

inline void write_curve_csv(std::ostream& os, const BoundaryCurve& curve) {
  os << "D,R,Delta,scheme_id\n" << std::fixed << std::setprecision(6);
  for (const auto& p : curve.points) os << p.target_distortion << ',' << p.tuple.rate << ',' << p.tuple.equivocation << ',' << p.scheme_id << '\n';
  os.unsetf(std::ios::floatfield);
}

/// All schemes of a curve, each preceded by a comment line with its id and tuple.
inline void write_curve_schemes(std::ostream& os, const BoundaryCurve& curve, const SecureSource& source) {
  for (const auto& p : curve.points) {
    const auto old = os.precision(std::numeric_limits<double>::max_digits10);
    os << "# " << p.scheme_id << " D<=" << p.target_distortion << " R=" << p.tuple.rate << " distortion=" << p.tuple.distortion
       << " Delta=" << p.tuple.equivocation << '\n';
    os.precision(old);
    io::write_scheme(os, p.scheme, source);
    os << '\n';
  }
}

}  // namespace secrecy
