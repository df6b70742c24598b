#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "secrecy/binary.hpp"

using namespace secrecy;
using namespace secrecy::binary;

namespace {

const BecBscParams kTable{0.1, binary_entropy(0.1)};

// Reference values computed with 40-digit arithmetic outside this code base.
constexpr double kEps = 0.4689955935892812;
constexpr double kLossyAlpha = 0.031124460304789384;
constexpr double kLosslessBeta = 0.07766967015180067;
constexpr double kLosslessDelta = 0.03877137046964158;
constexpr double kLossyBeta = 0.04963493070812319;
constexpr double kLossyDelta = 0.13257048918749782;
constexpr double kLossyRate = 0.37519647487142498;
constexpr double kLossyD = 0.014597234735790718;
constexpr double kWynerZivDelta = 0.12571316451247683;
constexpr double kBetaZeroAlpha = 0.0776697;

}  // namespace

TEST(BuildSource, Identities) {
  const auto s = build_source({0.3, 0.0});
  EXPECT_NEAR(conditional_entropy(s.joint(), {"A"}, {"B"}), 0.0, 1e-12);
  const auto half = build_source({0.5, 0.2});
  EXPECT_NEAR(mutual_information(half.joint(), {"A"}, {"E"}), 0.0, 1e-12);
  const auto t = build_source(kTable);
  EXPECT_NEAR(mutual_information(t.joint(), {"A"}, {"B"}), 1.0 - kEps, 1e-12);
  EXPECT_NEAR(mutual_information(t.joint(), {"A"}, {"E"}), 1.0 - kEps, 1e-12);
  EXPECT_NEAR(mutual_information(t.joint(), {"A"}, {"B"}), 0.531, 1e-3);
}

TEST(ClosedForm, TableColumns) {
  const auto lossy = closed_form(kTable, {0.031, 0.050});
  EXPECT_NEAR(lossy.rate, 0.375, 1e-3);
  EXPECT_NEAR(lossy.distortion, 0.015, 1e-3);
  EXPECT_NEAR(lossy.equivocation, 0.133, 1e-3);
  const auto lossless = closed_form(kTable, {0.0, 0.078});
  EXPECT_NEAR(lossless.rate, 0.469, 1e-3);
  EXPECT_EQ(lossless.distortion, 0.0);
  EXPECT_NEAR(lossless.equivocation, 0.039, 1e-3);
  const auto zero = closed_form({0.27, 0.6}, {0.0, 0.0});
  EXPECT_NEAR(zero.rate, 0.6, 1e-15);
  EXPECT_EQ(zero.distortion, 0.0);
  EXPECT_NEAR(zero.equivocation, 0.0, 1e-15);
  EXPECT_THROW(closed_form(kTable, {0.6, 0.1}), std::invalid_argument);
  EXPECT_THROW(closed_form(kTable, {0.1, -0.1}), std::invalid_argument);
}

TEST(ClosedForm, GenericPoint) {
  const auto t = closed_form({0.2, 0.3}, {0.1, 0.2});
  EXPECT_NEAR(t.rate, 0.15930132192321563, 1e-12);
  EXPECT_NEAR(t.distortion, 0.03, 1e-15);
  EXPECT_NEAR(t.equivocation, 0.50203651997674313, 1e-12);
}

TEST(OracleCheck, AgreesWithGeneralEvaluator) {
  EXPECT_LT(oracle_check(kTable, {0.031, 0.050}), 1e-9);
  EXPECT_LT(oracle_check({0.37, 0.81}, {0.0, 0.0}), 1e-9);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> half(0.0, 0.5), unit(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const BecBscParams bp{half(rng), unit(rng)};
    const BinaryScheme s{half(rng), half(rng)};
    EXPECT_LT(oracle_check(bp, s), 1e-9) << bp.p << ' ' << bp.eps << ' ' << s.alpha << ' ' << s.beta;
  }
}

TEST(ClosedForm, RateAndDistortionIgnoreBeta) {
  for (double alpha : {0.0, 0.05, 0.2, 0.5}) {
    const auto ref = closed_form(kTable, {alpha, 0.0});
    for (double beta : {0.01, 0.1, 0.3, 0.5}) {
      const auto t = closed_form(kTable, {alpha, beta});
      EXPECT_EQ(t.rate, ref.rate);
      EXPECT_EQ(t.distortion, ref.distortion);
    }
  }
}

TEST(ClosedForm, IndependentAuxiliaryReducesToFormula) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> half(0.0, 0.5), unit(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const BecBscParams bp{half(rng), unit(rng)};
    const double alpha = half(rng);
    const double expect = bp.eps * binary_entropy(alpha) - bp.eps + binary_entropy(bp.p);
    EXPECT_NEAR(raw_equivocation(bp, {alpha, 0.5}), expect, 1e-12);
  }
}

TEST(ClosedForm, NondecreasingInEveNoise) {
  for (double eps : {0.1, 0.469, 0.9})
    for (double alpha : {0.0, 0.03, 0.2})
      for (double beta : {0.0, 0.05, 0.3}) {
        double prev = -1.0;
        for (int i = 1; i <= 10; ++i) {
          const double d = closed_form({0.05 * i, eps}, {alpha, beta}).equivocation;
          EXPECT_GE(d, prev - 1e-12);
          prev = d;
        }
      }
}

TEST(OptimizeBeta, TableValues) {
  const auto lossless = optimize_beta(kTable, 0.0);
  EXPECT_NEAR(lossless.beta, kLosslessBeta, 1e-6);
  EXPECT_NEAR(lossless.raw, kLosslessDelta, 1e-10);
  const auto lossy = optimize_beta(kTable, kLossyAlpha);
  EXPECT_NEAR(lossy.beta, kLossyBeta, 1e-6);
  EXPECT_NEAR(lossy.raw, kLossyDelta, 1e-10);
}

TEST(OptimizeBeta, BeatsDenseScan) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> half(0.0, 0.5), unit(0.0, 1.0);
  for (int k = 0; k < 40; ++k) {
    const BecBscParams bp{half(rng), unit(rng)};
    const double alpha = half(rng);
    const auto opt = optimize_beta(bp, alpha);
    for (int i = 0; i <= 2000; ++i) EXPECT_GE(opt.raw, raw_equivocation(bp, {alpha, 0.5 * i / 2000.0}) - 1e-10);
  }
}

TEST(OptimizeBeta, UselessEavesdropperPrefersIndependentAuxiliary) {
  for (double alpha : {0.0, 0.05, 0.3}) EXPECT_NEAR(optimize_beta({0.5, 0.469}, alpha).beta, 0.5, 1e-6) << alpha;
}

TEST(OptimizeBeta, ZeroPastThreshold) {
  EXPECT_GT(optimize_beta(kTable, kBetaZeroAlpha - 1e-3).beta, 0.0);
  EXPECT_EQ(optimize_beta(kTable, kBetaZeroAlpha + 1e-3).beta, 0.0);
}

TEST(AlphaForRateFraction, Inverse) {
  EXPECT_NEAR(alpha_for_rate_fraction(0.8), kLossyAlpha, 1e-12);
  EXPECT_EQ(alpha_for_rate_fraction(1.0), 0.0);
  EXPECT_EQ(alpha_for_rate_fraction(0.0), 0.5);
  for (double f : {0.1, 0.5, 0.9}) EXPECT_NEAR(1.0 - binary_entropy(alpha_for_rate_fraction(f)), f, 1e-12);
}

TEST(Table1, ReproducesAllCells) {
  const auto cols = table1(kTable);
  ASSERT_EQ(cols.size(), 4u);
  const double expect[4][5] = {
      {0.469, 0.0, 0.039, 0.0, 0.078},
      {0.469, 0.0, 0.0, 0.0, 0.0},
      {0.375, 0.015, 0.133, 0.031, 0.050},
      {0.375, 0.015, 0.126, 0.031, 0.0},
  };
  for (std::size_t c = 0; c < 4; ++c) {
    EXPECT_NEAR(cols[c].tuple.rate, expect[c][0], 1e-3) << cols[c].label;
    EXPECT_NEAR(cols[c].tuple.distortion, expect[c][1], 1e-3) << cols[c].label;
    EXPECT_NEAR(cols[c].tuple.equivocation, expect[c][2], 1e-3) << cols[c].label;
    EXPECT_NEAR(cols[c].scheme.alpha, expect[c][3], 2e-3) << cols[c].label;
    EXPECT_NEAR(cols[c].scheme.beta, expect[c][4], 2e-3) << cols[c].label;
  }
  EXPECT_NEAR(cols[2].tuple.rate, kLossyRate, 1e-9);
  EXPECT_NEAR(cols[2].tuple.distortion, kLossyD, 1e-12);
  EXPECT_NEAR(cols[3].tuple.equivocation, kWynerZivDelta, 1e-12);
  EXPECT_EQ(cols[0].label, "lossless-secure");
  EXPECT_EQ(cols[3].label, "wyner-ziv");
}

TEST(Table1, FullBudgetCollapsesLossyColumns) {
  const auto cols = table1(kTable, 1.0);
  EXPECT_EQ(cols[2].tuple.rate, cols[0].tuple.rate);
  EXPECT_EQ(cols[2].tuple.distortion, cols[0].tuple.distortion);
  EXPECT_EQ(cols[2].tuple.equivocation, cols[0].tuple.equivocation);
  EXPECT_EQ(cols[3].tuple.equivocation, cols[1].tuple.equivocation);
  EXPECT_THROW(table1(kTable, 1.5), std::invalid_argument);
}

TEST(Table1, NoiselessChannels) {
  for (const auto& c : table1({0.0, 0.0})) {
    EXPECT_EQ(c.tuple.rate, 0.0) << c.label;
    EXPECT_EQ(c.tuple.distortion, 0.0) << c.label;
    EXPECT_NEAR(c.tuple.equivocation, 0.0, 1e-15) << c.label;
  }
}

TEST(Table1, UselessEavesdropper) {
  const BecBscParams bp{0.5, 0.469};
  for (const auto& c : table1(bp)) {
    if (c.label == "lossless-secure" || c.label == "lossy-secure") {
      EXPECT_NEAR(c.scheme.beta, 0.5, 1e-6);
    }
    const double a = c.scheme.alpha, b = c.scheme.beta;
    EXPECT_NEAR(c.tuple.equivocation, bp.eps * binary_entropy(a) + (1 - bp.eps) * binary_entropy(binary_star(a, b)), 1e-12);
  }
  EXPECT_NEAR(table1(bp)[0].tuple.equivocation, 1.0 - bp.eps, 1e-9);
}

TEST(Table1, TextAndCsv) {
  std::ostringstream text, csv;
  const auto cols = table1(kTable);
  write_table_text(text, cols);
  write_table_csv(csv, cols);
  EXPECT_NE(text.str().find("0.133"), std::string::npos);
  EXPECT_NE(text.str().find("0.078"), std::string::npos);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "column,R,D,Delta,alpha,beta");
  EXPECT_NE(csv.str().find("lossy-secure,0.375196,0.014597,0.132570,0.031124,0.049635"), std::string::npos);
}

TEST(Fig5Sweep, Structure) {
  const auto grid = default_distortion_grid(kTable.eps);
  ASSERT_EQ(grid.size(), 200u);
  EXPECT_EQ(grid.front(), 0.0);
  EXPECT_EQ(grid.back(), kTable.eps / 2);
  const auto curve = sweep_fig5(kTable, grid);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    EXPECT_GE(curve[i].delta_general, curve[i].delta_wz - 1e-12);
    if (i) {
      EXPECT_GE(curve[i].delta_general, curve[i - 1].delta_general - 1e-12);
      EXPECT_GE(curve[i].delta_wz, curve[i - 1].delta_wz - 1e-12);
    }
  }
  EXPECT_NEAR(curve.front().delta_general, 0.039, 1e-3);
  EXPECT_NEAR(curve.front().delta_wz, 0.0, 1e-12);
  std::size_t first_zero = curve.size();
  for (std::size_t i = 0; i < curve.size(); ++i)
    if (curve[i].beta_opt == 0.0) {
      first_zero = i;
      break;
    }
  ASSERT_LT(first_zero, curve.size());
  EXPECT_EQ(first_zero, 31u);
  EXPECT_NEAR(curve[first_zero].D, 0.036, 2e-3);
  for (std::size_t i = first_zero; i < curve.size(); ++i) {
    EXPECT_EQ(curve[i].beta_opt, 0.0);
    EXPECT_EQ(curve[i].delta_general, curve[i].delta_wz);
  }
}

TEST(Fig5Sweep, TablePointsAndErrors) {
  const auto c = sweep_fig5(kTable, {kLossyD});
  EXPECT_NEAR(c[0].delta_general, 0.133, 1e-3);
  EXPECT_NEAR(c[0].delta_wz, 0.126, 1e-3);
  EXPECT_THROW(sweep_fig5(kTable, {0.3}), std::invalid_argument);
  EXPECT_THROW(sweep_fig5(kTable, {-0.01}), std::invalid_argument);
  EXPECT_TRUE(sweep_fig5(kTable, {}).empty());

  std::ostringstream os;
  write_fig5_csv(os, c);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "D,delta_general,delta_wz,alpha,beta_opt");
}
