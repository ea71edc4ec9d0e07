#pragma once

// Closed forms used as independent references by the unit and acceptance
// tests. Nothing here calls into the library under test except the
// Gauss-Legendre rule generator.

#include <cmath>
#include <numbers>

#include "swlab/quadrature.hpp"

namespace oracle {

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

/// Riesz transform in direction theta of exp(-|x|^2), n = 2, with symbol
/// -i xi.theta/|xi|: (x.theta) sqrt(pi)/2 e^{-r^2/2} (I0(r^2/2) - I1(r^2/2)).
inline double riesz_gaussian_2d(double x1, double x2, double t1 = 1.0, double t2 = 0.0) {
  const double h = 0.5 * (x1 * x1 + x2 * x2);
  const double bessel = h == 0.0 ? 1.0 : std::cyl_bessel_i(0.0, h) - std::cyl_bessel_i(1.0, h);
  return 0.5 * std::sqrt(std::numbers::pi) * (x1 * t1 + x2 * t2) * std::exp(-h) * bessel;
}

/// int_{S^{n-1}} |rho e - theta|^{-n} dS for n = 2, 3.
inline double sphere_integral(double rho, int n) {
  if (n == 2) return 2.0 * std::numbers::pi / std::abs(1.0 - rho * rho);
  if (rho < 1.0) return 4.0 * std::numbers::pi / (1.0 - rho * rho);
  return 4.0 * std::numbers::pi / (rho * (rho * rho - 1.0));
}

/// Profile g for n = 2 from the closed-form circle integral:
/// rho^{2/p} |1 - rho^alpha| 2 pi / |1 - rho^2|, continuous through rho = 1.
inline double g_profile_2d(double rho, double p, double alpha) {
  const double radial = std::pow(rho, 2.0 / p);
  const double lr = std::log(rho);
  if (std::abs(lr) < 1e-9) return radial * std::abs(alpha) * std::numbers::pi;
  return radial * std::abs(std::expm1(alpha * lr)) * 2.0 * std::numbers::pi / std::abs(-std::expm1(2.0 * lr));
}

/// int_a^b g drho/rho for n = 2 by fixed composite Gauss-Legendre in log rho
/// (40 panels per unit of log rho, order 20, split at rho = 1).
inline double young_piece_2d(double a, double b, double p, double alpha) {
  const auto piece = [&](double ua, double ub) {
    if (ub <= ua) return 0.0;
    const int panels = std::max(8, static_cast<int>(std::ceil(40.0 * (ub - ua))));
    const auto rule = swlab::quad::composite_gauss_legendre(ua, ub, panels, 20);
    double s = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) s += rule.weights[k] * g_profile_2d(std::exp(rule.nodes[k]), p, alpha);
    return s;
  };
  const double ua = std::log(a);
  const double ub = std::log(b);
  if (ua < 0.0 && ub > 0.0) return piece(ua, 0.0) + piece(0.0, ub);
  return piece(ua, ub);
}

inline double young_bound_2d(double delta, double M, double p, double alpha) {
  return young_piece_2d(delta, 0.5, p, alpha) + young_piece_2d(0.5, 2.0, p, alpha) + young_piece_2d(2.0, M, p, alpha);
}

}  // namespace oracle
