#pragma once

// Experiment runner: empirical operator ratios ||w T phi|| / ||w phi|| over
// test-function families and (p, p~, alpha) grids, truncation blow-up
// probes outside the admissible weight range, and the lemma's split
// constant at every (p, alpha).

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "swlab/families.hpp"
#include "swlab/lemma_lab.hpp"
#include "swlab/mixed_norm.hpp"
#include "swlab/sio.hpp"

namespace swlab {

/// Polar norm window plus the Cartesian box of the spectral path.
struct GridSpec {
  int n = 2;
  PolarWindow polar{1e-3, 11.0, 512, 256};
  double half_extent = 12.0;
  int points_per_axis = 512;

  /// "default" or "fine" (every resolution doubled, same windows).
  static GridSpec preset(std::string_view name, int n);
  GridSpec refined() const;
  /// Every length multiplied by `scale`, resolutions unchanged.
  GridSpec dilated(double scale) const;
  double radial_points_per_decade() const;
};

struct OperatorSpec {
  std::string kernel = "riesz";
  Vec3 direction{1.0, 0.0, 0.0};
};

KernelSpec make_kernel(const OperatorSpec& op, int n);

struct RatioRow {
  int n = 2;
  double p = 2.0;
  double p_tilde = 2.0;
  double alpha = 0.0;
  std::string family;
  double param = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  double ratio = 0.0;
  std::string flags;
};

/// phi sampled directly on the polar grid and T phi carried there from the
/// spectral Cartesian result. Independent of (p, p~, alpha).
struct PreparedSample {
  GridFunction phi;
  GridFunction transformed;
  std::vector<std::string> flags;
};

PreparedSample prepare_sample(const ScalarField& phi, const KernelSpec& kernel, const GridSpec& grid);
RatioRow ratio_from_sample(const PreparedSample& sample, const NormParams& params);

/// Throws ZeroDenominator when ||w phi|| <= 1e-12.
RatioRow ratio_point(const ScalarField& phi, const NormParams& params, const KernelSpec& kernel, const GridSpec& grid);

struct BlowupFit {
  NormParams requested;
  NormParams probed;           ///< requested, or its dual for the upper side
  std::string side;            ///< "lower", "upper" or "control"
  std::vector<double> deltas;  ///< decreasing
  std::vector<double> ratios;
  double expected_exponent = 0.0;  ///< -(alpha + n/p) of the probed params
  double fitted_exponent = 0.0;    ///< growth exponent of the ratio in 1/delta
  double power_r2 = 0.0;
  double log_r2 = 0.0;
  double f_statistic = 0.0;
  std::string preferred_model;  ///< "power", "log" or "converged"
  double last_decade_change = 0.0;
  bool monotone = true;
};

/// Truncated-window ratio of the necessity bump over norm windows
/// [delta, rho_max]. ratio^p is fitted as c + a (delta^{-q} - 1)/q; the
/// exponent reported is q/p (q may be negative: converging corrections) and
/// the log model is the q = 0 member, chosen unless the extra parameter is
/// significant (nested F statistic > 10) and |q/p| exceeds 0.05.
/// Upper-side points (alpha >= n - n/p) are probed at the dual exponents.
BlowupFit blowup_probe(const NormParams& params, const KernelSpec& kernel, std::span<const double> deltas,
                       const GridSpec& grid);

struct FamilySpec {
  Family family = Family::GaussianDilations;
  std::vector<double> parameters;
};

struct SweepConfig {
  int n = 2;
  std::vector<double> p_values;
  std::vector<double> p_tilde_values;
  std::vector<double> alpha_values;
  std::vector<FamilySpec> families;
  GridSpec grid = GridSpec::preset("default", 2);
  std::string grid_preset = "default";
  OperatorSpec op;
  std::filesystem::path output_dir = "sweep_out";
  bool refine_check = false;
  bool blowup = true;
  std::vector<double> blowup_deltas{1e-2, 5e-3, 2e-3, 1e-3, 5e-4, 2e-4, 1e-4};
  bool lemma = true;
  double lemma_delta = 1e-6;
  double lemma_M = 1e6;
  /// Rows for the lemma operator A phi = int F(., y) phi(y) dy on a coarse
  /// polar grid, checked against the split constant B.
  bool lemma_rows = false;
  PolarWindow lemma_grid{0.05, 8.0, 64, 32};
  int workers = 0;  ///< 0: hardware concurrency
};

/// Throws Error(Config) on malformed input.
SweepConfig parse_sweep_config(const nlohmann::json& j);
SweepConfig load_sweep_config(const std::filesystem::path& path);

struct PointSummary {
  double p = 0.0;
  double p_tilde = 0.0;
  double alpha = 0.0;
  bool admissible = false;
  double ratio_max_lower = 0.0;
  std::optional<double> ratio_max_refined;
  std::optional<double> grid_change;
  /// max/min - 1 of the gaussian_dilations ratios.
  std::optional<double> dilation_spread;
  std::optional<double> lemma_ratio_max;
  std::optional<double> lemma_bound;
};

struct RowFailure {
  std::string where;
  std::string message;
};

struct SweepReport {
  int n = 2;
  std::vector<RatioRow> rows;
  std::vector<RatioRow> lemma_rows;
  std::vector<PointSummary> points;
  std::vector<BlowupFit> blowups;
  std::vector<std::pair<LemmaParams, SplitReport>> splits;
  std::vector<RowFailure> failures;
  nlohmann::json provenance;
};

/// Deterministic for a given config: fixed quadrature, no randomness, and
/// results merged in config order regardless of worker scheduling.
SweepReport run_sweep(const SweepConfig& config);

/// Constant relating the lemma operator's empirical ratio to the split
/// constant B. The angular and radial Young steps both hold with constant 1
/// for zonal kernels; the slack absorbs quadrature error.
inline constexpr double kLemmaEnvelopeConstant = 1.05;

}  // namespace swlab
