#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace swlab::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights on [-1, 1], ascending. Newton iteration
/// on the three-term recurrence; accurate to a few ulps for order <= 1000.
Rule gauss_legendre(int order);

/// `panels` equal sub-intervals of [a, b], each carrying a Gauss-Legendre
/// rule of the given order.
Rule composite_gauss_legendre(double a, double b, int panels, int order);

/// Globally adaptive 15-point Gauss-Kronrod on [a, b] with optional
/// interior breakpoints: the panel with the largest error estimate is
/// bisected until the summed estimate is below rel_tol |result| or the
/// panel budget (4000) is spent.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-12, std::span<const double> breakpoints = {},
                          double* error_estimate = nullptr);

/// Surface measure of the unit sphere S^{n-1}.
double sphere_measure(int n);

}  // namespace swlab::quad
