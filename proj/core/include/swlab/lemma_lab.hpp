#pragma once

// Quantitative pieces of the weighted-kernel lemma: the kernel
//   F(x, y) = |1 - (|x|/|y|)^alpha| / |x - y|^n,
// the weight/operator commutator identity, the sphere integral
// int_{S^{n-1}} |rho e - theta|^{-n} dS, the radial profile g(rho), and the
// split of int g drho/rho over (0, 1/2), (1/2, 2), (2, inf) whose convergence
// encodes -n/p < alpha < n - n/p.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "swlab/grid.hpp"

namespace swlab {

struct LemmaParams {
  int n = 2;
  double p = 2.0;
  double alpha = 0.0;
  Vec3 e{1.0, 0.0, 0.0};

  void validate() const;
  bool admissible() const noexcept { return alpha > -n / p && alpha < n - n / p; }
};

/// |1 - (|x|/|y|)^alpha| / |x - y|^n. Numerator via expm1(alpha log t).
/// Throws SingularInput at x = y, y = 0, or x = 0 with alpha < 0.
double stein_weiss_kernel(std::span<const double> x, std::span<const double> y, double alpha);

/// (||y|^alpha - |x|^alpha|, F(x, y) |x - y|^n |y|^alpha).
std::pair<double, double> verify_commutator_identity(std::span<const double> x, std::span<const double> y,
                                                     double alpha);

/// Adaptive quadrature of int_{S^{n-1}} |rho e - theta|^{-n} dS_theta with
/// geometric refinement toward theta = e. quad_resolution is the number of
/// uniform starting panels on the polar angle. Throws TooCloseToOne for
/// |rho - 1| <= 1e-6.
double sphere_kernel_integral(double rho, int n, int quad_resolution = 16);

/// |1 - rho| times the sphere integral in closed form (n = 2, 3); bounded
/// and continuous through rho = 1. Used for the removable singularity of g.
double sphere_kernel_integral_scaled(double rho, int n);

/// g(rho) = rho^{n/p} |1 - rho^alpha| int_{S^{n-1}} |rho e - theta|^{-n} dS.
/// Within 1e-3 of rho = 1 the product form |1-rho^alpha|/|1-rho| times
/// the scaled closed form is used, so g is finite and continuous at 1.
double g_profile(double rho, const LemmaParams& params, int quad_resolution = 16);

struct TailFit {
  std::string model = "none";  ///< "none" (converges), "log", or "power"
  double rate = 0.0;            ///< growth exponent per unit log(1/delta) or log M
  double log_coefficient = 0.0;
  std::vector<double> increments;  ///< integral over successive decades
};

struct SplitReport {
  double I = 0.0;
  double II = 0.0;
  double III = 0.0;
  double B = 0.0;
  double delta = 0.0;
  double M = 0.0;
  std::string verdict;          ///< "converged" or "divergent"
  std::string divergent_piece;  ///< "none", "I", "III" or "I+III"
  double fitted_rate = 0.0;     ///< rate of the divergent piece (0 for log growth)
  std::string model = "none";
  TailFit tail_I;
  TailFit tail_III;
};

struct YoungOptions {
  int quad_resolution = 16;
  /// Decades probed beyond delta (downward) and M (upward) for the verdict.
  int ladder_decades = 3;
  /// |rate| at or below this is classified as logarithmic growth.
  double log_rate_threshold = 0.05;
  double rel_tol = 1e-10;
};

/// I = int_delta^{1/2} g drho/rho, II = int_{1/2}^2, III = int_2^M, B = I+II+III.
SplitReport young_bound_constant(const LemmaParams& params, double delta, double M, const YoungOptions& options = {});

nlohmann::json to_json(const SplitReport& report);

struct ApplyFResult {
  GridFunction field;
  std::size_t skipped_pairs = 0;
  /// Upper bound on the largest per-node contribution dropped with the
  /// skipped near-diagonal pairs.
  double skipped_bound = 0.0;
};

/// (A phi)(x) = int F(x, y) phi(y) dy by quadrature over the polar grid of
/// phi. Pairs with |x - y| below half the local node spacing are skipped.
ApplyFResult apply_F(const GridFunction& phi, double alpha);

}  // namespace swlab
