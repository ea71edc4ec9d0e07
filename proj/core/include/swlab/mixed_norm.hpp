#pragma once

// Mixed radial-angular Lebesgue norms L^p_{|x|} L^q_theta and their
// |x|^alpha-weighted variants, evaluated by polar-grid quadrature.

#include <cstddef>
#include <limits>
#include <utility>

#include "swlab/grid.hpp"

namespace swlab {

inline constexpr double kInfiniteExponent = std::numeric_limits<double>::infinity();

struct NormParams {
  double p = 2.0;
  double p_tilde = 2.0;
  double alpha = 0.0;
  int n = 2;

  /// Weight exponents with -n/p < alpha < n - n/p.
  bool admissible() const noexcept;
  double alpha_lower() const noexcept { return -n / p; }
  double alpha_upper() const noexcept { return n - n / p; }
  /// Hoelder-conjugate exponents and reflected weight: (p', p~', -alpha).
  NormParams dual() const;
  /// Throws InvalidRange unless 1 < p, p_tilde < inf and n in {2, 3}.
  void validate() const;
};

enum class AngularMeasure {
  Surface,      ///< the grid's angular weights, total |S^{n-1}|
  Probability,  ///< the same weights rescaled to total mass 1
};

/// (sum_j w_j |f(rho_i theta_j)|^q)^{1/q}; q = kInfiniteExponent gives the max.
double angular_norm(const GridFunction& f, std::size_t shell_index, double p_tilde,
                    AngularMeasure measure = AngularMeasure::Surface);

struct NormResult {
  double value = 0.0;
  /// W_i * A_i^p at the innermost and outermost shells, A_i the (weighted)
  /// angular norm; large values signal truncation sensitivity.
  double inner_shell_integrand = 0.0;
  double outer_shell_integrand = 0.0;
};

/// Norm of rho^weight_exponent * f, the weight applied per shell as an exact
/// scalar. params.alpha is not read here.
NormResult mixed_norm_detailed(const GridFunction& f, const NormParams& params, double weight_exponent);

double mixed_norm(const GridFunction& f, const NormParams& params);
double weighted_mixed_norm(const GridFunction& f, const NormParams& params);

/// Plain L^p norm as a single sum over all nodes with product weights.
double lp_quadrature_norm(const GridFunction& f, double p);

/// Radial window and resolution of a polar grid, dimension supplied apart.
struct PolarWindow {
  double rho_min = 1e-3;
  double rho_max = 10.0;
  int radial_count = 256;
  int angular_resolution = 64;
};

/// Returns (||f(lambda .)||, lambda^{-alpha-n/p} ||f||), both weighted with
/// params.alpha. f(lambda .) is sampled on the window scaled by 1/lambda.
std::pair<double, double> norm_scaling_check(const ScalarField& f, double lambda, const NormParams& params,
                                             const PolarWindow& window);

}  // namespace swlab
