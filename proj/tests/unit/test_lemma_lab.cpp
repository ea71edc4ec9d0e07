#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "swlab/error.hpp"
#include "swlab/lemma_lab.hpp"
#include "swlab/mixed_norm.hpp"
#include "swlab/sweep.hpp"

namespace {

using namespace swlab;
using oracle::rel_diff;

template <typename F>
void expect_kind(F&& f, ErrorKind kind) {
  try {
    f();
    ADD_FAILURE() << "no exception";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

LemmaParams lemma(int n, double p, double alpha) {
  LemmaParams lp;
  lp.n = n;
  lp.p = p;
  lp.alpha = alpha;
  return lp;
}

TEST(SteinWeissKernel, EqualRadiiGiveZero) {
  const double x[2] = {3.0, 4.0};
  const double y[2] = {5.0, 0.0};
  EXPECT_EQ(stein_weiss_kernel(x, y, 0.7), 0.0);
  EXPECT_EQ(stein_weiss_kernel(x, y, -2.0), 0.0);
}

TEST(SteinWeissKernel, ZeroAlphaGivesZero) {
  const double x[3] = {1.0, 2.0, 0.5};
  const double y[3] = {-0.3, 0.1, 4.0};
  EXPECT_EQ(stein_weiss_kernel(x, y, 0.0), 0.0);
}

TEST(SteinWeissKernel, PlugInValue) {
  const double x[2] = {2.0, 0.0};
  const double y[2] = {1.0, 0.0};
  EXPECT_NEAR(stein_weiss_kernel(x, y, 1.0), 1.0, 1e-15);
  // |1 - (1/3)^{-2}| / |(1,0) - (0,3)|^3 = 8 / 10^{3/2}
  const double a[3] = {1.0, 0.0, 0.0};
  const double b[3] = {0.0, 3.0, 0.0};
  EXPECT_NEAR(stein_weiss_kernel(a, b, -2.0), 8.0 / std::pow(10.0, 1.5), 1e-15);
}

TEST(SteinWeissKernel, SingularInputs) {
  const double x[2] = {1.0, 1.0};
  const double zero[2] = {0.0, 0.0};
  expect_kind([&] { stein_weiss_kernel(x, x, 0.5); }, ErrorKind::SingularInput);
  expect_kind([&] { stein_weiss_kernel(x, zero, 0.5); }, ErrorKind::SingularInput);
  expect_kind([&] { stein_weiss_kernel(zero, x, -0.5); }, ErrorKind::SingularInput);
  EXPECT_NEAR(stein_weiss_kernel(zero, x, 0.5), 1.0 / 2.0, 1e-15);
}

TEST(CommutatorIdentity, Examples) {
  const double x[2] = {4.0, 0.0};
  const double y[2] = {1.0, 0.0};
  const auto [l, r] = verify_commutator_identity(x, y, 0.5);
  EXPECT_NEAR(l, 1.0, 1e-15);
  EXPECT_NEAR(r, 1.0, 1e-15);
  const double u[2] = {0.0, 2.0};
  const double v[2] = {2.0, 0.0};
  const auto [a, b] = verify_commutator_identity(u, v, 1.3);
  EXPECT_EQ(a, 0.0);
  EXPECT_EQ(b, 0.0);
}

TEST(CommutatorIdentity, SeededRandomTriples) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  std::uniform_real_distribution<double> weight(-3.0, 3.0);
  double worst = 0.0;
  for (int k = 0; k < 2000; ++k) {
    const int n = 2 + k % 2;
    double x[3];
    double y[3];
    for (int d = 0; d < n; ++d) {
      x[d] = coord(rng);
      y[d] = coord(rng);
    }
    const auto [l, r] = verify_commutator_identity({x, static_cast<std::size_t>(n)}, {y, static_cast<std::size_t>(n)}, weight(rng));
    worst = std::max(worst, std::abs(l - r) / l);
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(CommutatorIdentity, NearlyEqualRadii) {
  const double x[2] = {1.0, 1e-7};
  const double y[2] = {1.0, 0.0};
  const auto [l, r] = verify_commutator_identity(x, y, 0.8);
  // |x|^0.8 - 1 = 0.4 * 1e-14 to leading order.
  EXPECT_LT(rel_diff(r, 0.4e-14), 1e-6);
  EXPECT_LT(rel_diff(l, r), 1e-4);
}

TEST(SphereIntegral, CircleClosedForm) {
  EXPECT_NEAR(sphere_kernel_integral(0.0, 2), 2.0 * std::numbers::pi, 1e-12);
  for (double rho : {0.1, 0.5, 0.9, 0.999, 1.001, 1.5, 3.0, 40.0}) {
    EXPECT_LT(rel_diff(sphere_kernel_integral(rho, 2), oracle::sphere_integral(rho, 2)), 1e-6) << rho;
  }
  EXPECT_LT(rel_diff(sphere_kernel_integral(0.5, 2), 8.0 * std::numbers::pi / 3.0), 1e-6);
}

TEST(SphereIntegral, SphereClosedForm) {
  for (double rho : {0.0, 0.3, 0.9, 0.99, 1.01, 2.0, 10.0}) {
    const double exact = rho == 0.0 ? 4.0 * std::numbers::pi : oracle::sphere_integral(rho, 3);
    EXPECT_LT(rel_diff(sphere_kernel_integral(rho, 3), exact), 1e-6) << rho;
  }
}

TEST(SphereIntegral, ComparableToInverseDistanceFromOne) {
  double lo = 1e300;
  double hi = 0.0;
  for (double rho : {0.9, 0.99, 1.01, 1.1}) {
    const double v = sphere_kernel_integral(rho, 2) * std::abs(1.0 - rho);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_LT(hi / lo, 4.0);
}

TEST(SphereIntegral, ScaledClosedFormContinuousAtOne) {
  for (int n : {2, 3}) {
    const double below = sphere_kernel_integral(1.0 - 1e-4, n) * 1e-4;
    const double above = sphere_kernel_integral(1.0 + 1e-4, n) * 1e-4;
    EXPECT_LT(rel_diff(below, sphere_kernel_integral_scaled(1.0 - 1e-4, n)), 1e-6);
    EXPECT_LT(rel_diff(above, sphere_kernel_integral_scaled(1.0 + 1e-4, n)), 1e-6);
    EXPECT_NEAR(sphere_kernel_integral_scaled(1.0, n), n == 2 ? std::numbers::pi : 2.0 * std::numbers::pi, 1e-15);
  }
}

TEST(SphereIntegral, TooCloseToOne) {
  expect_kind([] { sphere_kernel_integral(1.0 + 5e-7, 2); }, ErrorKind::TooCloseToOne);
  expect_kind([] { sphere_kernel_integral(0.5, 4); }, ErrorKind::UnsupportedDimension);
}

TEST(GProfile, ZeroWeight) {
  for (double rho : {0.01, 0.5, 1.0, 7.0}) EXPECT_EQ(g_profile(rho, lemma(2, 2.0, 0.0)), 0.0);
}

TEST(GProfile, PlugInValue) {
  EXPECT_LT(rel_diff(g_profile(0.5, lemma(2, 2.0, 1.0)), 2.0 * std::numbers::pi / 3.0), 1e-6);
}

TEST(GProfile, MatchesClosedFormIncludingNearOne) {
  for (double rho : {0.01, 0.4, 0.998, 0.9995, 1.0, 1.0003, 1.002, 3.0, 250.0}) {
    for (double alpha : {-0.7, 0.5, 1.2}) {
      EXPECT_LT(rel_diff(g_profile(rho, lemma(2, 1.5, alpha)), oracle::g_profile_2d(rho, 1.5, alpha)), 1e-6)
          << rho << " " << alpha;
    }
  }
}

TEST(GProfile, TailEnvelope) {
  double lo = 1e300;
  double hi = 0.0;
  for (double rho = 4.0; rho <= 100.0; rho *= 1.2) {
    const double ratio = g_profile(rho, lemma(2, 2.0, 0.5)) / (std::pow(rho, -1.0) * (1.0 + std::sqrt(rho)));
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  EXPECT_GT(lo, 1.0 / 8.0);
  EXPECT_LT(hi, 8.0);
  EXPECT_LT(hi / lo, 4.0);
}

TEST(YoungBound, ZeroWeightIsZero) {
  const auto r = young_bound_constant(lemma(2, 2.0, 0.0), 1e-3, 1e3);
  EXPECT_EQ(r.I, 0.0);
  EXPECT_EQ(r.II, 0.0);
  EXPECT_EQ(r.III, 0.0);
  EXPECT_EQ(r.verdict, "converged");
}

TEST(YoungBound, AgreesWithIndependentQuadrature) {
  for (double alpha : {-0.5, 0.5}) {
    for (double p : {1.5, 2.0, 3.0}) {
      const auto lp = lemma(2, p, alpha * 2.0 / p);
      if (!lp.admissible()) continue;
      const auto r = young_bound_constant(lp, 1e-3, 1e3);
      EXPECT_LT(rel_diff(r.I, oracle::young_piece_2d(1e-3, 0.5, p, lp.alpha)), 1e-8);
      EXPECT_LT(rel_diff(r.II, oracle::young_piece_2d(0.5, 2.0, p, lp.alpha)), 1e-8);
      EXPECT_LT(rel_diff(r.III, oracle::young_piece_2d(2.0, 1e3, p, lp.alpha)), 1e-8);
    }
  }
}

TEST(YoungBound, ConvergesUnderWindowRefinement) {
  const auto lp = lemma(2, 2.0, 0.5);
  const double b6 = young_bound_constant(lp, 1e-6, 1e6).B;
  const double b8 = young_bound_constant(lp, 1e-8, 1e8).B;
  EXPECT_LT(rel_diff(b8, b6), 1e-2);
  EXPECT_EQ(young_bound_constant(lp, 1e-6, 1e6).verdict, "converged");
  // The coarse windows (1e-3, 1e3) -> (5e-4, 2e3) move B by the amount the
  // independent quadrature predicts; that step is still ~1.2%.
  const double c1 = young_bound_constant(lp, 1e-3, 1e3).B;
  const double c2 = young_bound_constant(lp, 5e-4, 2e3).B;
  const double o1 = oracle::young_bound_2d(1e-3, 1e3, 2.0, 0.5);
  const double o2 = oracle::young_bound_2d(5e-4, 2e3, 2.0, 0.5);
  EXPECT_LT(std::abs((c2 - c1) - (o2 - o1)), 1e-8 * o2);
}

TEST(YoungBound, LogDivergenceAtLowerEndpoint) {
  const auto lp = lemma(2, 2.0, -1.0);
  const double i3 = young_bound_constant(lp, 1e-3, 1e3).I / std::log(1e3);
  const double i5 = young_bound_constant(lp, 1e-5, 1e3).I / std::log(1e5);
  EXPECT_LT(std::abs(i5 - i3) / i5, 0.1);
  const auto r = young_bound_constant(lp, 1e-5, 1e3);
  EXPECT_EQ(r.verdict, "divergent");
  EXPECT_EQ(r.divergent_piece, "I");
  EXPECT_EQ(r.model, "log");
  // Integrand tends to |alpha| 2 pi per unit log(1/rho) as rho -> 0.
  EXPECT_LT(rel_diff(r.tail_I.log_coefficient, 2.0 * std::numbers::pi), 1e-3);
}

TEST(YoungBound, PowerDivergenceRatesAndDualSwap) {
  for (double p : {1.5, 2.0, 3.0}) {
    const double a_lo = -2.0 / p - 0.25;
    const auto lower = young_bound_constant(lemma(2, p, a_lo), 1e-6, 1e6);
    EXPECT_EQ(lower.divergent_piece, "I");
    EXPECT_EQ(lower.model, "power");
    EXPECT_LT(std::abs(lower.fitted_rate - 0.25) / 0.25, 0.1);

    // (p, alpha) -> (p', -alpha) maps piece I onto piece III at the same rate.
    const double pd = p / (p - 1.0);
    const auto upper = young_bound_constant(lemma(2, pd, -a_lo), 1e-6, 1e6);
    EXPECT_EQ(upper.divergent_piece, "III");
    EXPECT_EQ(upper.model, "power");
    EXPECT_LT(std::abs(upper.fitted_rate - lower.fitted_rate) / lower.fitted_rate, 0.02);
  }
}

TEST(YoungBound, InvalidWindow) {
  expect_kind([] { young_bound_constant(lemma(2, 2.0, 0.5), 0.6, 1e3); }, ErrorKind::InvalidWindow);
  expect_kind([] { young_bound_constant(lemma(2, 2.0, 0.5), 1e-3, 1.5); }, ErrorKind::InvalidWindow);
  expect_kind([] { young_bound_constant(lemma(2, 1.0, 0.5), 1e-3, 1e3); }, ErrorKind::InvalidRange);
}

TEST(YoungBound, ThreeDimensionalConverges) {
  const auto r6 = young_bound_constant(lemma(3, 2.0, 0.5), 1e-6, 1e6);
  const auto r8 = young_bound_constant(lemma(3, 2.0, 0.5), 1e-8, 1e8);
  EXPECT_EQ(r6.verdict, "converged");
  EXPECT_LT(rel_diff(r8.B, r6.B), 1e-2);
}

TEST(YoungBound, JsonFields) {
  const auto j = to_json(young_bound_constant(lemma(2, 2.0, 0.5), 1e-3, 1e3));
  for (const char* key : {"I", "II", "III", "B", "delta", "M", "verdict", "divergent_piece", "fitted_rate"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}

GridFunction annulus_indicator(const PolarGridPtr& g) {
  return sample([](std::span<const double> x) {
    const double r = std::hypot(x[0], x[1]);
    return r > 1.0 && r < 2.0 ? 1.0 : 0.0;
  }, g);
}

TEST(ApplyF, ZeroWeightGivesZero) {
  const auto g = build_polar_grid(2, 0.1, 4.0, 24, 16);
  const auto r = apply_F(annulus_indicator(g), 0.0);
  for (double v : r.field.values()) EXPECT_EQ(v, 0.0);
}

TEST(ApplyF, RadialInputGivesRadialOutput) {
  const auto g = build_polar_grid(2, 0.1, 4.0, 32, 32);
  const auto r = apply_F(sample([](std::span<const double> x) { return std::exp(-x[0] * x[0] - x[1] * x[1]); }, g), 0.5);
  double sup = 0.0;
  for (double v : r.field.values()) sup = std::max(sup, std::abs(v));
  const std::size_t na = g->angular_count();
  for (std::size_t i = 0; i < g->radial_count(); ++i) {
    double mean = 0.0;
    for (std::size_t j = 0; j < na; ++j) mean += r.field[i * na + j];
    mean /= static_cast<double>(na);
    double var = 0.0;
    for (std::size_t j = 0; j < na; ++j) var += std::pow(r.field[i * na + j] - mean, 2);
    EXPECT_LT(var / static_cast<double>(na), 1e-8 * sup);
  }
}

TEST(ApplyF, CommutesWithGridRotations) {
  const auto g = build_polar_grid(2, 0.2, 4.0, 20, 24);
  const auto f = [](std::span<const double> x) { return std::exp(-std::pow(x[0] - 1.0, 2) - 2.0 * x[1] * x[1]); };
  const double step = 2.0 * std::numbers::pi / 24.0 * 5.0;
  const auto rotated = [&](std::span<const double> x) {
    const double y[2] = {std::cos(step) * x[0] + std::sin(step) * x[1], -std::sin(step) * x[0] + std::cos(step) * x[1]};
    return f(y);
  };
  const auto a = apply_F(sample(f, g), 0.7).field;
  const auto b = apply_F(sample(rotated, g), 0.7).field;
  const std::size_t na = 24;
  double err = 0.0;
  double sup = 0.0;
  for (std::size_t i = 0; i < g->radial_count(); ++i) {
    for (std::size_t j = 0; j < na; ++j) {
      err = std::max(err, std::abs(b[i * na + (j + 5) % na] - a[i * na + j]));
      sup = std::max(sup, std::abs(a[i * na + j]));
    }
  }
  EXPECT_LT(err, 1e-10 * sup);
}

TEST(ApplyF, RatioBelowSplitConstant) {
  const auto g = build_polar_grid(2, 0.05, 8.0, 96, 64);
  const auto phi = annulus_indicator(g);
  const auto r = apply_F(phi, 0.5);
  const NormParams np{2.0, 2.0, 0.5, 2};
  const double ratio = mixed_norm(r.field, np) / mixed_norm(phi, np);
  const double b = young_bound_constant(lemma(2, 2.0, 0.5), 1e-6, 1e6).B;
  EXPECT_GT(ratio, 0.0);
  EXPECT_LE(ratio, kLemmaEnvelopeConstant * b);
  EXPECT_GT(r.skipped_bound, 0.0);
}

TEST(ApplyF, NeedsPolarGrid) {
  const auto f = sample([](auto) { return 1.0; }, build_cartesian_grid(2, 1.0, 8));
  expect_kind([&] { apply_F(f, 0.5); }, ErrorKind::DimensionMismatch);
}

}  // namespace
