#pragma once

// Singular integral operators T f = P.V. (f * K): a Fourier-multiplier path
// on periodic Cartesian grids, a direct truncated principal-value quadrature
// used as its cross-oracle, and an empirical checker for the size,
// smoothness and multiplier bounds on K.

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swlab/grid.hpp"

namespace swlab {

using Multiplier = std::function<std::complex<double>(std::span<const double>)>;

struct KernelSpec {
  int dim = 2;
  ScalarField kernel;
  /// Fourier symbol m with (Tf)^ = m f^, f^(xi) = int f(x) e^{-i x.xi} dx.
  std::optional<Multiplier> multiplier;
  std::optional<Vec3> direction;
  std::string label;
  /// Kernel has vanishing spherical means, so the P.V. limit can be taken by
  /// subtracting f(x) on the inner region.
  bool mean_zero = false;
};

/// c_n = Gamma((n+1)/2) / pi^{(n+1)/2}, fixed by the symbol -i xi.theta/|xi|.
double riesz_constant(int n);

/// Directional Riesz transform: K(y) = c_n (y.theta)/|y|^{n+1},
/// m(xi) = -i (xi.theta)/|xi|, m(0) = 0. theta must be a unit vector.
KernelSpec riesz(int n, std::span<const double> theta);

struct KernelConditionCaps {
  double size = 10.0;
  double gradient = 10.0;
  double fourier = 10.0;
};

struct KernelConditionReport {
  double size_sup = 0.0;      ///< sup |y|^n |K(y)|
  double gradient_sup = 0.0;  ///< sup |y|^{n+1} |grad K(y)|, central differences
  double fourier_sup = 0.0;   ///< sup |m(xi)| or sup |K^(xi)| estimated by quadrature
  bool fourier_from_multiplier = false;
  bool size_ok = false;
  bool gradient_ok = false;
  bool fourier_ok = false;
  std::size_t samples = 0;

  bool all_ok() const noexcept { return size_ok && gradient_ok && fourier_ok; }
};

/// sample_radii must span at least four decades. Directions: equispaced
/// (n = 2) or a spherical Fibonacci set (n = 3), plus +-theta when the
/// kernel carries a direction.
KernelConditionReport check_kernel_conditions(const KernelSpec& kernel, std::span<const double> sample_radii,
                                              int samples_per_shell, const KernelConditionCaps& caps = {});

/// int_{eps < |y| < R} K(y) e^{-i xi.y} dy by polar quadrature.
std::complex<double> truncated_fourier_transform(const KernelSpec& kernel, std::span<const double> xi, double eps,
                                                 double outer_radius, int resolution);

struct SpectralOptions {
  /// Boundary-to-peak ratio of |f| above which a leakage warning is recorded.
  double leakage_tolerance = 1e-8;
  /// Ratio above which leakage becomes a SupportLeakage error.
  double leakage_error_threshold = std::numeric_limits<double>::infinity();
  double imaginary_tolerance = 1e-10;
};

struct SpectralResult {
  GridFunction field;
  /// max |Im| / max |Re| of the inverse transform before discarding Im.
  double imaginary_residue = 0.0;
  /// max |f| on the outermost layer of the box over max |f|.
  double boundary_tail = 0.0;
  std::vector<std::string> warnings;
};

SpectralResult apply_spectral(const KernelSpec& kernel, const GridFunction& f, const SpectralOptions& options = {});

struct PvResult {
  std::vector<double> values;
  /// False when the kernel lacks the mean-zero property and the raw
  /// truncated integral was returned.
  bool subtracted = true;
};

/// T_{eps,R} f(x) = int_{eps<|y|<1} (f(x-y) - f(x)) K(y) dy + int_{1<|y|<R} f(x-y) K(y) dy.
/// quad_resolution is the angular node count; radial panel density grows with it.
PvResult apply_pv_direct(const KernelSpec& kernel, const ScalarField& f, std::span<const Vec3> eval_points, double eps,
                         double outer_radius, int quad_resolution);

}  // namespace swlab
