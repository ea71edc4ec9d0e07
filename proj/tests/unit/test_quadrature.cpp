#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "swlab/quadrature.hpp"

namespace {

using swlab::quad::composite_gauss_legendre;
using swlab::quad::gauss_legendre;
using swlab::quad::integrate_adaptive;

TEST(GaussLegendre, ExactForPolynomialsUpToDegree2nMinus1) {
  for (int order : {1, 2, 5, 12, 40}) {
    const auto rule = gauss_legendre(order);
    ASSERT_EQ(rule.nodes.size(), static_cast<std::size_t>(order));
    for (int deg = 0; deg <= 2 * order - 1; ++deg) {
      double s = 0.0;
      for (int k = 0; k < order; ++k) s += rule.weights[k] * std::pow(rule.nodes[k], deg);
      const double exact = deg % 2 == 1 ? 0.0 : 2.0 / (deg + 1);
      EXPECT_NEAR(s, exact, 1e-13) << "order " << order << " degree " << deg;
    }
  }
}

TEST(GaussLegendre, NodesAscendingInsideInterval) {
  const auto rule = gauss_legendre(64);
  for (std::size_t k = 1; k < rule.nodes.size(); ++k) EXPECT_LT(rule.nodes[k - 1], rule.nodes[k]);
  EXPECT_GT(rule.nodes.front(), -1.0);
  EXPECT_LT(rule.nodes.back(), 1.0);
}

TEST(GaussLegendre, CompositeRuleIntegratesExponential) {
  const auto rule = composite_gauss_legendre(-1.0, 3.0, 7, 10);
  double s = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) s += rule.weights[k] * std::exp(rule.nodes[k]);
  EXPECT_NEAR(s, std::exp(3.0) - std::exp(-1.0), 1e-12);
}

TEST(AdaptiveQuadrature, ResolvesNearSingularPeak) {
  // int_0^pi d phi / (g^2 + phi^2) = atan(pi/g)/g
  const double g = 1e-5;
  const double v = integrate_adaptive([g](double x) { return 1.0 / (g * g + x * x); }, 0.0, std::numbers::pi, 1e-12);
  EXPECT_LT(std::abs(v - std::atan(std::numbers::pi / g) / g) / v, 1e-10);
}

TEST(AdaptiveQuadrature, ReversedLimitsChangeSign) {
  const auto f = [](double x) { return std::cos(x); };
  EXPECT_NEAR(integrate_adaptive(f, 1.0, 0.0), -std::sin(1.0), 1e-14);
}

TEST(SphereMeasure, CircleAndSphere) {
  EXPECT_NEAR(swlab::quad::sphere_measure(2), 2.0 * std::numbers::pi, 1e-15);
  EXPECT_NEAR(swlab::quad::sphere_measure(3), 4.0 * std::numbers::pi, 1e-14);
}

}  // namespace
