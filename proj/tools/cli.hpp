#pragma once

// Subcommands: eval, sweep, binary, classify, simulate.
// Exit codes: 0 ok, 2 bad input, 3 domain violation, 4 resource guard.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "secrecy/binary.hpp"
#include "secrecy/errors.hpp"
#include "secrecy/ordering.hpp"
#include "secrecy/region.hpp"
#include "secrecy/region_io.hpp"
#include "secrecy/simulator.hpp"
#include "secrecy/sweep.hpp"

namespace secrecy::cli {

enum Exit : int { kOk = 0, kInput = 2, kDomain = 3, kResource = 4 };

struct Options {
  std::string source, scheme, out, format = "text";
  double p = 0.1;
  std::optional<double> eps;
  std::optional<double> rate_budget;
  std::size_t grid = 0;
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  std::size_t n = 8;
  std::optional<double> alpha, beta;
  double typ_tol = 0.1;
  double slack = 0.1;
  bool curve = false;
  std::size_t points = 0;
  std::vector<double> distortions;
  std::size_t refine = 3;
  std::size_t random_starts = 0;
  std::size_t threads = 1;
  std::size_t resolution = 16;
};

inline std::string fmt6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

inline SecureSource load_source(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open source file '" + path + "'");
  try {
    return io::read_source(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline AuxScheme load_scheme(const std::string& path, const SecureSource& source) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scheme file '" + path + "'");
  try {
    return io::read_scheme(in, source);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

/// Writes to --out when given, otherwise to `out`.
inline void emit(const Options& o, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  if (o.out.empty()) {
    body(out);
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot write '" + o.out + "'");
  body(f);
}

inline BecBscParams binary_params(const Options& o) {
  BecBscParams bp{o.p, 0.0};
  if (!(o.p >= 0.0 && o.p <= 0.5)) throw std::invalid_argument("--p must lie in [0, 1/2]");
  bp.eps = o.eps.value_or(binary_entropy(o.p));
  bp.validate();
  return bp;
}

inline int cmd_eval(const Options& o, std::ostream& out) {
  const SecureSource source = load_source(o.source);
  const AuxScheme scheme = load_scheme(o.scheme, source);
  const RDETuple t = evaluate_scheme(source, scheme);
  emit(o, out, [&](std::ostream& os) {
    if (o.format == "json")
      os << nlohmann::json{{"R", t.rate}, {"D", t.distortion}, {"Delta", t.equivocation}}.dump() << '\n';
    else if (o.format == "csv")
      os << "R,D,Delta\n" << fmt6(t.rate) << ',' << fmt6(t.distortion) << ',' << fmt6(t.equivocation) << '\n';
    else
      os << "R=" << fmt6(t.rate) << " D=" << fmt6(t.distortion) << " Delta=" << fmt6(t.equivocation) << '\n';
  });
  return kOk;
}

inline int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  const SecureSource source = load_source(o.source);
  std::vector<double> grid = o.distortions;
  if (grid.empty()) {
    const double top = zero_rate_distortion(source);
    const std::size_t pts = o.points ? o.points : 11;
    for (std::size_t i = 0; i < pts; ++i) grid.push_back(pts == 1 ? top : top * static_cast<double>(i) / static_cast<double>(pts - 1));
  }
  SearchConfig cfg;
  if (o.grid) cfg.grid = o.grid;
  cfg.refine_rounds = o.refine;
  cfg.rate_budget = o.rate_budget;
  cfg.random_starts = o.random_starts;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  const BoundaryCurve curve = sweep_boundary(source, grid, cfg);
  emit(o, out, [&](std::ostream& os) {
    if (o.format == "json") {
      nlohmann::json j = nlohmann::json::array();
      for (const auto& p : curve.points)
        j.push_back({{"D", p.target_distortion}, {"R", p.tuple.rate}, {"Delta", p.tuple.equivocation}, {"distortion", p.tuple.distortion}, {"scheme_id", p.scheme_id}});
      os << nlohmann::json{{"points", j}, {"infeasible", curve.infeasible}}.dump(2) << '\n';
    } else {
      write_curve_csv(os, curve);
    }
  });
  if (!o.out.empty()) {
    std::ofstream f(o.out + ".schemes");
    if (!f) throw std::invalid_argument("cannot write '" + o.out + ".schemes'");
    write_curve_schemes(f, curve, source);
  }
  for (double d : curve.infeasible) err << "note: no scheme found for D <= " << fmt6(d) << '\n';
  return kOk;
}

inline int cmd_binary(const Options& o, std::ostream& out) {
  const BecBscParams bp = binary_params(o);
  if (o.curve) {
    const auto curve = binary::sweep_fig5(bp, binary::default_distortion_grid(bp.eps, o.points ? o.points : 200));
    emit(o, out, [&](std::ostream& os) {
      if (o.format == "json") {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& c : curve)
          j.push_back({{"D", c.D}, {"delta_general", c.delta_general}, {"delta_wz", c.delta_wz}, {"alpha", c.alpha}, {"beta_opt", c.beta_opt}});
        os << j.dump(2) << '\n';
      } else {
        binary::write_fig5_csv(os, curve);
      }
    });
    return kOk;
  }
  const auto cols = binary::table1(bp, o.rate_budget.value_or(0.8));
  emit(o, out, [&](std::ostream& os) {
    if (o.format == "json") {
      nlohmann::json j = nlohmann::json::array();
      for (const auto& c : cols)
        j.push_back({{"column", c.label}, {"R", c.tuple.rate}, {"D", c.tuple.distortion}, {"Delta", c.tuple.equivocation},
                     {"alpha", c.scheme.alpha}, {"beta", c.scheme.beta}});
      os << j.dump(2) << '\n';
    } else if (o.format == "csv") {
      binary::write_table_csv(os, cols);
    } else {
      os << "p=" << fmt6(bp.p) << " eps=" << fmt6(bp.eps) << '\n';
      binary::write_table_text(os, cols);
    }
  });
  return kOk;
}

inline nlohmann::json verdict_json(const OrderingVerdict& v) {
  auto dir = [](const DirectionVerdict& d) {
    return nlohmann::json{{"degraded", to_string(d.degraded)}, {"less_noisy", to_string(d.less_noisy)}, {"more_capable", to_string(d.more_capable)}};
  };
  return {{"b_over_e", dir(v.forward())}, {"e_over_b", dir(v.reverse())}};
}

inline int cmd_classify(const Options& o, std::ostream& out) {
  if (!o.source.empty()) {
    const SecureSource source = load_source(o.source);
    LessNoisyConfig lc;
    lc.resolution = o.resolution;
    const SourceOrdering r = classify_source(source, lc);
    emit(o, out, [&](std::ostream& os) {
      if (o.format == "json") {
        auto j = verdict_json(r.verdict);
        j["resolution"] = r.less_noisy.resolution;
        j["search_b_over_e"] = to_string(r.less_noisy.b_over_e.outcome);
        j["search_e_over_b"] = to_string(r.less_noisy.e_over_b.outcome);
        os << j.dump(2) << '\n';
      } else {
        os << r.verdict.record() << " resolution=" << r.less_noisy.resolution << '\n';
      }
    });
    return kOk;
  }
  const OrderingVerdict v = classify_bec_bsc(binary_params(o));
  emit(o, out, [&](std::ostream& os) {
    if (o.format == "json") os << verdict_json(v).dump(2) << '\n';
    else os << v.record() << '\n';
  });
  return kOk;
}

inline int cmd_simulate(const Options& o, std::ostream& out) {
  std::optional<SecureSource> source;
  std::optional<AuxScheme> scheme;
  if (!o.source.empty()) {
    source.emplace(load_source(o.source));
    if (o.scheme.empty()) throw std::invalid_argument("--source needs --scheme");
    scheme.emplace(load_scheme(o.scheme, *source));
  } else {
    const BecBscParams bp = binary_params(o);
    source.emplace(binary::build_source(bp));
    binary::BinaryScheme bs;
    if (o.alpha && o.beta) {
      bs = {*o.alpha, *o.beta};
    } else {
      bs = binary::table1(bp).at(2).scheme;
      if (o.alpha) bs.alpha = *o.alpha;
      if (o.beta) bs.beta = *o.beta;
    }
    scheme.emplace(binary::scheme_for(bs));
  }
  sim::SimConfig cfg;
  cfg.n = o.n;
  cfg.typ_tol = o.typ_tol;
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  cfg.rates = sim::rates_from_scheme(*source, *scheme, o.slack);
  sim::check_resources(*source, cfg);
  const sim::Summary s = sim::run_trials(*source, *scheme, cfg);
  const RDETuple target = evaluate_scheme(*source, *scheme);

  if (o.format == "csv") {
    emit(o, out, [&](std::ostream& os) { sim::write_trials_csv(os, s); });
    return kOk;
  }
  if (o.format == "json") {
    out << nlohmann::json{{"n", cfg.n}, {"trials", s.trials}, {"mean_distortion", s.mean_distortion},
                          {"mean_equivocation", s.mean_equivocation}, {"encode_failure_rate", s.encode_failure_rate},
                          {"decode_failure_rate", s.decode_failure_rate}, {"error_rate", s.error_rate},
                          {"message_entropy", s.message_entropy}, {"target_R", target.rate}, {"target_D", target.distortion},
                          {"target_Delta", target.equivocation}}
               .dump(2)
        << '\n';
  } else {
    out << "n=" << cfg.n << " trials=" << s.trials << " S1=" << fmt6(cfg.rates.S1) << " R1=" << fmt6(cfg.rates.R1)
        << " S2=" << fmt6(cfg.rates.S2) << " R2=" << fmt6(cfg.rates.R2) << '\n'
        << "codebook u_words=" << s.u_words << " u_bins=" << s.u_bins << " v_words=" << s.v_words << " v_bins=" << s.v_bins << '\n'
        << "target R=" << fmt6(target.rate) << " D=" << fmt6(target.distortion) << " Delta=" << fmt6(target.equivocation) << '\n'
        << "mean_distortion=" << fmt6(s.mean_distortion) << " mean_equivocation=" << fmt6(s.mean_equivocation) << '\n'
        << "encode_failure_rate=" << fmt6(s.encode_failure_rate) << " decode_failure_rate=" << fmt6(s.decode_failure_rate)
        << " error_rate=" << fmt6(s.error_rate) << " message_entropy=" << fmt6(s.message_entropy) << '\n';
  }
  if (!o.out.empty()) emit(o, out, [&](std::ostream& os) { sim::write_trials_csv(os, s); });
  return kOk;
}

/// Parses `args` (without the program name) and runs one subcommand.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rate-distortion-equivocation tools for sources with side information at Bob and Eve", "secrecy"};
  app.set_config("--config", "", "key = value file; options of a subcommand go in a section named after it");
  app.require_subcommand(1);
  Options o;

  auto add_format = [&](CLI::App* c) {
    c->add_option("--format", o.format, "csv, json or text")->check(CLI::IsMember({"csv", "json", "text"}));
    c->add_option("--out", o.out, "output file (default: standard output)");
  };
  auto add_binary = [&](CLI::App* c) {
    c->add_option("--p", o.p, "BSC crossover to Eve, in [0, 1/2]");
    c->add_option("--eps", o.eps, "BEC erasure probability to Bob, in [0, 1] (default h2(p))");
  };

  auto* eval = app.add_subcommand("eval", "evaluate a scheme on a source");
  eval->add_option("--source", o.source, "source file")->required();
  eval->add_option("--scheme", o.scheme, "scheme file")->required();
  add_format(eval);

  auto* sweep = app.add_subcommand("sweep", "search the boundary over a distortion grid");
  sweep->add_option("--source", o.source, "source file")->required();
  sweep->add_option("--grid", o.grid, "coarse samples per channel parameter");
  sweep->add_option("--points", o.points, "number of distortion budgets from 0 to the zero-rate distortion");
  sweep->add_option("--distortions", o.distortions, "explicit distortion budgets")->delimiter(',');
  sweep->add_option("--rate-budget", o.rate_budget, "rate cap in bits per symbol");
  sweep->add_option("--refine", o.refine, "refinement rounds");
  sweep->add_option("--random-starts", o.random_starts, "extra random starts at the cardinality caps");
  sweep->add_option("--seed", o.seed, "seed for random starts");
  sweep->add_option("--threads", o.threads, "worker threads (0: all cores)");
  add_format(sweep);

  auto* bin = app.add_subcommand("binary", "binary erasure/BSC example: reference table or equivocation curve");
  add_binary(bin);
  bin->add_option("--rate-budget", o.rate_budget, "lossy columns' rate as a fraction of the lossless rate (default 0.8)");
  bin->add_flag("--curve", o.curve, "print the equivocation-distortion curve instead of the table");
  bin->add_option("--grid,--points", o.points, "curve points on [0, eps/2] (default 200)");
  add_format(bin);

  auto* cls = app.add_subcommand("classify", "ordering between Bob's and Eve's side information");
  add_binary(cls);
  cls->add_option("--source", o.source, "source file instead of --p/--eps");
  cls->add_option("--grid,--resolution", o.resolution, "grid resolution of the less-noisy search");
  add_format(cls);

  auto* simc = app.add_subcommand("simulate", "Monte-Carlo run of the binning scheme");
  add_binary(simc);
  simc->add_option("--source", o.source, "source file (default: binary example)");
  simc->add_option("--scheme", o.scheme, "scheme file");
  simc->add_option("--alpha", o.alpha, "binary example: A->V crossover");
  simc->add_option("--beta", o.beta, "binary example: V->U crossover");
  simc->add_option("--n", o.n, "blocklength");
  simc->add_option("--trials", o.trials, "number of trials");
  simc->add_option("--seed", o.seed, "master seed");
  simc->add_option("--typ-tol", o.typ_tol, "strong typicality tolerance");
  simc->add_option("--slack", o.slack, "rate slack in bits per symbol");
  simc->add_option("--threads", o.threads, "worker threads (0: all cores)");
  add_format(simc);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInput;
  }

  try {
    if (eval->parsed()) return cmd_eval(o, out);
    if (sweep->parsed()) return cmd_sweep(o, out, err);
    if (bin->parsed()) return cmd_binary(o, out);
    if (cls->parsed()) return cmd_classify(o, out);
    if (simc->parsed()) return cmd_simulate(o, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInput;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << '\n';
    return kResource;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kDomain;
  } catch (const DegenerateParameters& e) {
    err << "error: " << e.what() << '\n';
    return kDomain;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kInput;
  }
  return kInput;
}

}  // namespace secrecy::cli
