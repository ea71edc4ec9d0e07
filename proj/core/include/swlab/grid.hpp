#pragma once

// Discretizations of R^n (n = 2, 3): a log-polar grid carrying the
// quadrature for radial-angular norms, and a periodic Cartesian box hosting
// the spectral operator path.

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <variant>
#include <vector>

namespace swlab {

using Vec3 = std::array<double, 3>;

/// A real field on R^n. The span has exactly n entries.
using ScalarField = std::function<double(std::span<const double>)>;

struct PolarGridParams {
  int dim = 2;
  double rho_min = 1e-3;
  double rho_max = 10.0;
  int radial_count = 128;
  /// n = 2: number of equispaced angles. n = 3: azimuth count; the polar
  /// cosine carries max(2, resolution / 2) Gauss-Legendre nodes.
  int angular_resolution = 64;
};

/// Tensor grid of log-uniform radii and a fixed angular rule. Node k lives on
/// shell k / angular_count() at direction k % angular_count().
class PolarGrid {
 public:
  explicit PolarGrid(const PolarGridParams& params);

  int dim() const noexcept { return params_.dim; }
  const PolarGridParams& params() const noexcept { return params_; }

  std::span<const double> radii() const noexcept { return radii_; }
  std::span<const double> radial_weights() const noexcept { return radial_weights_; }
  std::span<const double> angular_weights() const noexcept { return angular_weights_; }
  std::size_t radial_count() const noexcept { return radii_.size(); }
  std::size_t angular_count() const noexcept { return angular_weights_.size(); }
  std::size_t size() const noexcept { return radial_count() * angular_count(); }

  std::span<const double> angular_node(std::size_t j) const {
    return {angular_nodes_.data() + j * static_cast<std::size_t>(dim()), static_cast<std::size_t>(dim())};
  }
  /// Spacing of the radial nodes in log rho.
  double log_step() const noexcept { return log_step_; }

  Vec3 node(std::size_t k) const;
  /// Volume of the annulus rho_min <= |x| <= rho_max.
  double annulus_volume() const;

 private:
  PolarGridParams params_;
  double log_step_ = 0.0;
  std::vector<double> radii_;
  std::vector<double> radial_weights_;
  std::vector<double> angular_nodes_;
  std::vector<double> angular_weights_;
};

struct CartesianGridParams {
  int dim = 2;
  double half_extent = 12.0;
  int points_per_axis = 256;
};

/// Periodic box [-L, L)^n with M points per axis; index M/2 is the origin.
/// Flattened index is row-major with the last axis fastest.
class CartesianGrid {
 public:
  explicit CartesianGrid(const CartesianGridParams& params);

  int dim() const noexcept { return params_.dim; }
  const CartesianGridParams& params() const noexcept { return params_; }
  double half_extent() const noexcept { return params_.half_extent; }
  int points_per_axis() const noexcept { return params_.points_per_axis; }
  double spacing() const noexcept { return 2.0 * params_.half_extent / params_.points_per_axis; }
  std::size_t size() const noexcept { return size_; }

  double coordinate(int index) const noexcept { return -params_.half_extent + index * spacing(); }
  Vec3 node(std::size_t k) const;
  std::size_t flat_index(std::span<const int> idx) const;

 private:
  CartesianGridParams params_;
  std::size_t size_ = 0;
};

using PolarGridPtr = std::shared_ptr<const PolarGrid>;
using CartesianGridPtr = std::shared_ptr<const CartesianGrid>;
using GridRef = std::variant<PolarGridPtr, CartesianGridPtr>;

PolarGridPtr build_polar_grid(int n, double rho_min, double rho_max, int radial_count,
                              int angular_resolution);
PolarGridPtr build_polar_grid(const PolarGridParams& params);
CartesianGridPtr build_cartesian_grid(int n, double half_extent, int points_per_axis);

int grid_dim(const GridRef& grid);
std::size_t grid_size(const GridRef& grid);
Vec3 grid_node(const GridRef& grid, std::size_t k);

/// Sampled real field. Values are checked finite on construction.
class GridFunction {
 public:
  GridFunction(GridRef grid, std::vector<double> values);

  const GridRef& grid() const noexcept { return grid_; }
  int dim() const { return grid_dim(grid_); }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }

  /// Non-null only when the grid is of the requested kind.
  const PolarGrid* polar() const;
  const CartesianGrid* cartesian() const;

 private:
  GridRef grid_;
  std::vector<double> values_;
};

GridFunction sample(const ScalarField& f, const GridRef& grid);

struct ResampleResult {
  GridFunction field;
  std::size_t zero_filled = 0;
};

/// Cartesian sources: tensor cubic Lagrange interpolation over the node hull
/// [-L, L - h]^n. Polar sources: linear in log rho; linear in angle (n = 2)
/// or nearest angular node (n = 3). Targets outside the source's covered
/// region receive 0 and are counted.
ResampleResult resample(const GridFunction& f, const GridRef& target);

}  // namespace swlab
