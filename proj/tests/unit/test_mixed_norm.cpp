#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "swlab/error.hpp"
#include "swlab/mixed_norm.hpp"

namespace {

using namespace swlab;
using oracle::rel_diff;

double gaussian(std::span<const double> x) {
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  return std::exp(-r2);
}

double ball(std::span<const double> x) { return std::hypot(x[0], x[1]) <= 1.0 ? 1.0 : 0.0; }

TEST(AngularNorm, ConstantOnCircle) {
  const auto g = build_polar_grid(2, 0.5, 2.0, 4, 64);
  const auto f = sample([](auto) { return 3.0; }, g);
  EXPECT_NEAR(angular_norm(f, 2, 2.0), 3.0 * std::sqrt(2.0 * std::numbers::pi), 1e-13);
  EXPECT_EQ(angular_norm(f, 0, kInfiniteExponent), 3.0);
}

TEST(AngularNorm, CosineOnCircle) {
  const auto g = build_polar_grid(2, 1.0, 2.0, 2, 64);
  const auto f = sample([](std::span<const double> x) { return x[0] / std::hypot(x[0], x[1]); }, g);
  EXPECT_NEAR(angular_norm(f, 1, 2.0), std::sqrt(std::numbers::pi), 1e-13);
}

TEST(AngularNorm, IndexOutOfRange) {
  const auto f = sample([](auto) { return 1.0; }, build_polar_grid(2, 0.5, 2.0, 4, 8));
  try {
    angular_norm(f, 4, 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IndexOutOfRange);
  }
}

TEST(AngularNorm, NormalizedMeasureIsMonotoneInExponent) {
  for (int n : {2, 3}) {
    const auto g = build_polar_grid(n, 0.5, 3.0, 6, 24);
    const auto f = sample([](std::span<const double> x) { return std::exp(x[0]) + 0.3 * x[1] * x[1]; }, g);
    for (std::size_t shell = 0; shell < g->radial_count(); ++shell) {
      double prev = 0.0;
      for (double q : {1.5, 2.0, 3.0, 6.0, kInfiniteExponent}) {
        const double v = angular_norm(f, shell, q, AngularMeasure::Probability);
        EXPECT_GE(v, prev * (1.0 - 1e-14)) << "n=" << n << " shell " << shell << " q " << q;
        prev = v;
      }
    }
  }
}

TEST(MixedNorm, GaussianL2) {
  const double exact = std::sqrt(std::numbers::pi / 2.0);
  const auto norm_at = [](int nr) {
    return mixed_norm(sample(gaussian, build_polar_grid(2, 1e-3, 10.0, nr, 64)), NormParams{2.0, 2.0, 0.0, 2});
  };
  const double coarse = rel_diff(norm_at(512), exact);
  const double fine = rel_diff(norm_at(1023), exact);
  EXPECT_LT(coarse, 1e-4);
  // Second order in the log step.
  EXPECT_NEAR(coarse / fine, 4.0, 0.5);
}

TEST(MixedNorm, BallIndicatorMixedExponents) {
  const auto g = build_polar_grid(2, 0.01, 2.0, 4096, 64);
  const double v = mixed_norm(sample(ball, g), NormParams{2.0, 4.0, 0.0, 2});
  const double exact = std::pow(2.0 * std::numbers::pi, 0.25) * std::sqrt((1.0 - 1e-4) / 2.0);
  EXPECT_LT(rel_diff(v, exact), 2e-3);
}

TEST(MixedNorm, EqualExponentsReduceToLp) {
  for (int n : {2, 3}) {
    const auto g = build_polar_grid(n, 1e-2, 6.0, 96, 24);
    const auto f = sample([](std::span<const double> x) { return std::exp(-x[0] * x[0] - 2.0 * x[1] * x[1]) * (1 + x[0]); }, g);
    for (double p : {1.1, 1.5, 2.0, 3.0, 7.5}) {
      const double a = mixed_norm(f, NormParams{p, p, 0.0, n});
      const double b = lp_quadrature_norm(f, p);
      EXPECT_LE(std::abs(a - b), 1e-14 * b) << "n=" << n << " p=" << p;
    }
  }
}

TEST(MixedNorm, DimensionMismatch) {
  const auto f = sample(gaussian, build_polar_grid(3, 0.1, 2.0, 8, 8));
  try {
    mixed_norm(f, NormParams{2.0, 2.0, 0.0, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(MixedNorm, InfiniteAngularExponent) {
  const auto g = build_polar_grid(2, 1.0, 2.0, 64, 32);
  const auto f = sample([](auto) { return 2.0; }, g);
  // (int_1^2 2^2 rho drho)^{1/2} = sqrt(6)
  NormParams np{2.0, 2.0, 0.0, 2};
  np.p_tilde = kInfiniteExponent;
  EXPECT_LT(rel_diff(mixed_norm(f, np), std::sqrt(6.0)), 1e-6);
}

TEST(MixedNorm, DetailedReportsBoundaryShells) {
  const auto g = build_polar_grid(2, 0.5, 2.0, 16, 16);
  const auto f = sample([](auto) { return 1.0; }, g);
  const auto r = mixed_norm_detailed(f, NormParams{2.0, 2.0, 0.0, 2}, 0.0);
  EXPECT_GT(r.inner_shell_integrand, 0.0);
  EXPECT_GT(r.outer_shell_integrand, r.inner_shell_integrand);
}

TEST(WeightedNorm, ZeroWeightIsUnweighted) {
  const auto f = sample(gaussian, build_polar_grid(2, 1e-3, 8.0, 64, 32));
  const NormParams np{2.5, 1.7, 0.0, 2};
  EXPECT_EQ(weighted_mixed_norm(f, np), mixed_norm(f, np));
}

TEST(WeightedNorm, BallIndicatorWithWeight) {
  const auto g = build_polar_grid(2, 1e-3, 2.0, 4096, 32);
  const double v = weighted_mixed_norm(sample(ball, g), NormParams{2.0, 2.0, 0.5, 2});
  EXPECT_LT(rel_diff(v, std::sqrt(2.0 * std::numbers::pi / 3.0)), 2e-3);
}

TEST(WeightedNorm, AnnulusSupportBrackets) {
  const auto g = build_polar_grid(2, 0.5, 3.0, 256, 32);
  const auto f = sample([](std::span<const double> x) {
    const double r = std::hypot(x[0], x[1]);
    return r > 1.0 && r < 2.0 ? 1.0 + 0.5 * x[0] / r : 0.0;
  }, g);
  for (double alpha : {0.25, 0.8, 1.5}) {
    const NormParams np{2.0, 3.0, alpha, 2};
    const double w = weighted_mixed_norm(f, np);
    const double u = mixed_norm(f, np);
    EXPECT_GE(w, u);
    EXPECT_LE(w, std::pow(2.0, alpha) * u);
  }
}

TEST(WeightedNorm, Homogeneity) {
  const auto f = sample(gaussian, build_polar_grid(2, 1e-3, 8.0, 64, 32));
  std::vector<double> scaled(f.values().begin(), f.values().end());
  for (double& v : scaled) v *= -3.5;
  const GridFunction g(f.grid(), scaled);
  const NormParams np{1.7, 4.0, 0.3, 2};
  EXPECT_LE(std::abs(weighted_mixed_norm(g, np) - 3.5 * weighted_mixed_norm(f, np)), 1e-14 * weighted_mixed_norm(g, np));
}

TEST(NormScaling, IdentityScaleAgreesExactly) {
  const auto [a, b] = norm_scaling_check(gaussian, 1.0, NormParams{2.0, 3.0, 0.2, 2}, PolarWindow{});
  EXPECT_EQ(a, b);
}

TEST(NormScaling, GaussianUnweighted) {
  const auto [a, b] = norm_scaling_check(gaussian, 2.0, NormParams{2.0, 3.0, 0.0, 2}, PolarWindow{});
  EXPECT_LT(rel_diff(a, b), 1e-6);
}

TEST(NormScaling, GaussianWeighted) {
  const NormParams np{2.0, 2.0, 0.3, 2};
  const auto [a, b] = norm_scaling_check(gaussian, 4.0, np, PolarWindow{});
  EXPECT_LT(rel_diff(a, b), 1e-6);
  // The reference is lambda^{-alpha - n/p} times the weighted norm at lambda = 1.
  const auto [c, d] = norm_scaling_check(gaussian, 1.0, np, PolarWindow{});
  EXPECT_LT(rel_diff(b, std::pow(4.0, -0.3 - 1.0) * d), 1e-14);
}

TEST(NormScaling, RejectsNonPositiveScale) {
  EXPECT_THROW(norm_scaling_check(gaussian, 0.0, NormParams{}, PolarWindow{}), Error);
}

TEST(NormParams, AdmissibleRangeAndDual) {
  const NormParams np{3.0, 1.5, 0.4, 2};
  EXPECT_DOUBLE_EQ(np.alpha_lower(), -2.0 / 3.0);
  EXPECT_DOUBLE_EQ(np.alpha_upper(), 2.0 - 2.0 / 3.0);
  EXPECT_TRUE(np.admissible());
  EXPECT_FALSE((NormParams{2.0, 2.0, -1.0, 2}.admissible()));
  EXPECT_FALSE((NormParams{2.0, 2.0, 1.0, 2}.admissible()));
  const NormParams d = np.dual();
  EXPECT_DOUBLE_EQ(d.p, 1.5);
  EXPECT_DOUBLE_EQ(d.p_tilde, 3.0);
  EXPECT_DOUBLE_EQ(d.alpha, -0.4);
  EXPECT_TRUE(d.admissible());
}

TEST(NormParams, ValidateRejectsOutOfRange) {
  for (const NormParams& np : {NormParams{1.0, 2.0, 0.0, 2}, NormParams{2.0, 0.5, 0.0, 2},
                               NormParams{std::numeric_limits<double>::infinity(), 2.0, 0.0, 2},
                               NormParams{2.0, 2.0, std::nan(""), 2}}) {
    try {
      np.validate();
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidRange);
    }
  }
  EXPECT_THROW((NormParams{2.0, 2.0, 0.0, 4}.validate()), Error);
}

}  // namespace
