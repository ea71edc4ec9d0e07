#include "swlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "swlab/error.hpp"
#include "swlab/quadrature.hpp"

namespace swlab {
namespace {

void check_dim(int n) {
  if (n != 2 && n != 3) {
    throw Error(ErrorKind::UnsupportedDimension, "dimension " + std::to_string(n) + " not in {2, 3}");
  }
}

// Integrals of the left/right hat functions against e^{a s} over s in [0, 1]:
// left = (e^a - 1 - a) / a^2, right = ((a - 1) e^a + 1) / a^2.
double hat_left(double a) {
  if (std::abs(a) < 1e-3) return 0.5 + a / 6.0 + a * a / 24.0 + a * a * a / 120.0 + a * a * a * a / 720.0;
  return (std::expm1(a) - a) / (a * a);
}

double hat_right(double a) {
  if (std::abs(a) < 1e-3) return 0.5 + a / 3.0 + a * a / 8.0 + a * a * a / 30.0 + a * a * a * a / 144.0;
  return (a * std::exp(a) - std::expm1(a)) / (a * a);
}

std::string describe(std::span<const double> x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ')';
  return os.str();
}

// Cubic Lagrange stencil along one axis of a Cartesian grid: first index and
// four weights. Returns false outside the node hull.
bool cubic_stencil(const CartesianGrid& g, double x, int& start, std::array<double, 4>& w) {
  const int m = g.points_per_axis();
  const double s = (x + g.half_extent()) / g.spacing();
  const double slack = 1e-12 * m;
  if (s < -slack || s > (m - 1) + slack) return false;
  const int cell = std::clamp(static_cast<int>(std::floor(s)), 0, m - 2);
  start = std::clamp(cell - 1, 0, m - 4);
  const double t = s - start;
  w[0] = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
  w[1] = t * (t - 2.0) * (t - 3.0) / 2.0;
  w[2] = -t * (t - 1.0) * (t - 3.0) / 2.0;
  w[3] = t * (t - 1.0) * (t - 2.0) / 6.0;
  return true;
}

double interpolate_cartesian(const CartesianGrid& g, std::span<const double> values, const Vec3& x,
                             bool& inside) {
  const int n = g.dim();
  const auto m = static_cast<std::size_t>(g.points_per_axis());
  std::array<int, 3> start{};
  std::array<std::array<double, 4>, 3> w{};
  for (int d = 0; d < n; ++d) {
    if (!cubic_stencil(g, x[d], start[d], w[d])) {
      inside = false;
      return 0.0;
    }
  }
  inside = true;
  double acc = 0.0;
  if (n == 2) {
    for (int a = 0; a < 4; ++a) {
      const std::size_t row = static_cast<std::size_t>(start[0] + a) * m;
      double inner = 0.0;
      for (int b = 0; b < 4; ++b) inner += w[1][b] * values[row + start[1] + b];
      acc += w[0][a] * inner;
    }
  } else {
    for (int a = 0; a < 4; ++a) {
      double plane = 0.0;
      for (int b = 0; b < 4; ++b) {
        const std::size_t row = (static_cast<std::size_t>(start[0] + a) * m + (start[1] + b)) * m;
        double inner = 0.0;
        for (int c = 0; c < 4; ++c) inner += w[2][c] * values[row + start[2] + c];
        plane += w[1][b] * inner;
      }
      acc += w[0][a] * plane;
    }
  }
  return acc;
}

double interpolate_polar(const PolarGrid& g, std::span<const double> values, const Vec3& x, bool& inside) {
  const int n = g.dim();
  double rho = 0.0;
  for (int d = 0; d < n; ++d) rho += x[d] * x[d];
  rho = std::sqrt(rho);
  const auto radii = g.radii();
  const double lo = radii.front();
  const double hi = radii.back();
  if (!(rho >= lo * (1.0 - 1e-12) && rho <= hi * (1.0 + 1e-12))) {
    inside = false;
    return 0.0;
  }
  inside = true;
  const std::size_t nr = g.radial_count();
  const std::size_t na = g.angular_count();
  const double s = (std::log(rho) - std::log(lo)) / g.log_step();
  const std::size_t i = std::min(static_cast<std::size_t>(std::max(0.0, std::floor(s))), nr - 2);
  const double tr = std::clamp(s - static_cast<double>(i), 0.0, 1.0);

  auto shell_value = [&](std::size_t shell) {
    const double* row = values.data() + shell * na;
    if (n == 2) {
      double phi = std::atan2(x[1], x[0]);
      if (phi < 0) phi += 2.0 * std::numbers::pi;
      const double sa = phi / (2.0 * std::numbers::pi / static_cast<double>(na));
      const auto j = static_cast<std::size_t>(std::floor(sa)) % na;
      const double ta = sa - std::floor(sa);
      return (1.0 - ta) * row[j] + ta * row[(j + 1) % na];
    }
    std::size_t best = 0;
    double best_dot = -2.0;
    for (std::size_t j = 0; j < na; ++j) {
      const auto e = g.angular_node(j);
      const double dot = (e[0] * x[0] + e[1] * x[1] + e[2] * x[2]) / rho;
      if (dot > best_dot) {
        best_dot = dot;
        best = j;
      }
    }
    return row[best];
  };
  return (1.0 - tr) * shell_value(i) + tr * shell_value(i + 1);
}

}  // namespace

PolarGrid::PolarGrid(const PolarGridParams& params) : params_(params) {
  check_dim(params.dim);
  if (!(params.rho_min > 0.0) || !(params.rho_min < params.rho_max) || !std::isfinite(params.rho_max)) {
    throw Error(ErrorKind::InvalidRange, "polar grid requires 0 < rho_min < rho_max");
  }
  if (params.radial_count < 2) throw Error(ErrorKind::InvalidRange, "radial_count must be >= 2");
  if (params.angular_resolution < 4) throw Error(ErrorKind::InvalidRange, "angular_resolution must be >= 4");

  const int n = params.dim;
  const std::size_t nr = static_cast<std::size_t>(params.radial_count);
  const double u0 = std::log(params.rho_min);
  const double u1 = std::log(params.rho_max);
  log_step_ = (u1 - u0) / static_cast<double>(nr - 1);

  radii_.resize(nr);
  for (std::size_t i = 0; i < nr; ++i) radii_[i] = std::exp(u0 + log_step_ * static_cast<double>(i));
  radii_.front() = params.rho_min;
  radii_.back() = params.rho_max;

  // Exact integration of the piecewise-linear (in log rho) interpolant
  // against the Jacobian rho^n d(log rho).
  radial_weights_.assign(nr, 0.0);
  const double a = n * log_step_;
  const double left = hat_left(a);
  const double right = hat_right(a);
  for (std::size_t k = 0; k + 1 < nr; ++k) {
    const double base = std::pow(radii_[k], n) * log_step_;
    radial_weights_[k] += base * left;
    radial_weights_[k + 1] += base * right;
  }

  if (n == 2) {
    const int na = params.angular_resolution;
    angular_nodes_.reserve(2 * static_cast<std::size_t>(na));
    for (int j = 0; j < na; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / na;
      angular_nodes_.push_back(std::cos(phi));
      angular_nodes_.push_back(std::sin(phi));
    }
    angular_weights_.assign(static_cast<std::size_t>(na), 2.0 * std::numbers::pi / na);
  } else {
    const int naz = params.angular_resolution;
    const int npol = std::max(2, params.angular_resolution / 2);
    const quad::Rule gl = quad::gauss_legendre(npol);
    for (int a_idx = 0; a_idx < npol; ++a_idx) {
      const double c = gl.nodes[a_idx];
      const double s = std::sqrt((1.0 - c) * (1.0 + c));
      for (int b = 0; b < naz; ++b) {
        const double phi = 2.0 * std::numbers::pi * b / naz;
        angular_nodes_.push_back(s * std::cos(phi));
        angular_nodes_.push_back(s * std::sin(phi));
        angular_nodes_.push_back(c);
        angular_weights_.push_back(gl.weights[a_idx] * 2.0 * std::numbers::pi / naz);
      }
    }
  }
}

Vec3 PolarGrid::node(std::size_t k) const {
  const std::size_t na = angular_count();
  const double rho = radii_[k / na];
  const auto e = angular_node(k % na);
  Vec3 x{};
  for (int d = 0; d < dim(); ++d) x[d] = rho * e[d];
  return x;
}

double PolarGrid::annulus_volume() const {
  const int n = dim();
  return quad::sphere_measure(n) * (std::pow(params_.rho_max, n) - std::pow(params_.rho_min, n)) / n;
}

CartesianGrid::CartesianGrid(const CartesianGridParams& params) : params_(params) {
  check_dim(params.dim);
  if (!(params.half_extent > 0.0) || !std::isfinite(params.half_extent)) {
    throw Error(ErrorKind::InvalidRange, "half_extent must be positive");
  }
  if (params.points_per_axis < 4 || params.points_per_axis % 2 != 0) {
    throw Error(ErrorKind::InvalidRange, "points_per_axis must be even and >= 4");
  }
  size_ = 1;
  for (int d = 0; d < params.dim; ++d) size_ *= static_cast<std::size_t>(params.points_per_axis);
}

Vec3 CartesianGrid::node(std::size_t k) const {
  const auto m = static_cast<std::size_t>(points_per_axis());
  Vec3 x{};
  for (int d = dim() - 1; d >= 0; --d) {
    x[d] = coordinate(static_cast<int>(k % m));
    k /= m;
  }
  return x;
}

std::size_t CartesianGrid::flat_index(std::span<const int> idx) const {
  const auto m = static_cast<std::size_t>(points_per_axis());
  std::size_t k = 0;
  for (int d = 0; d < dim(); ++d) k = k * m + static_cast<std::size_t>(idx[d]);
  return k;
}

PolarGridPtr build_polar_grid(int n, double rho_min, double rho_max, int radial_count, int angular_resolution) {
  return build_polar_grid(PolarGridParams{n, rho_min, rho_max, radial_count, angular_resolution});
}

PolarGridPtr build_polar_grid(const PolarGridParams& params) { return std::make_shared<const PolarGrid>(params); }

CartesianGridPtr build_cartesian_grid(int n, double half_extent, int points_per_axis) {
  return std::make_shared<const CartesianGrid>(CartesianGridParams{n, half_extent, points_per_axis});
}

int grid_dim(const GridRef& grid) {
  return std::visit([](const auto& g) { return g->dim(); }, grid);
}

std::size_t grid_size(const GridRef& grid) {
  return std::visit([](const auto& g) { return g->size(); }, grid);
}

Vec3 grid_node(const GridRef& grid, std::size_t k) {
  return std::visit([k](const auto& g) { return g->node(k); }, grid);
}

GridFunction::GridFunction(GridRef grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (std::visit([](const auto& g) { return g == nullptr; }, grid_)) {
    throw Error(ErrorKind::InvalidRange, "grid function needs a grid");
  }
  if (values_.size() != grid_size(grid_)) {
    throw Error(ErrorKind::DimensionMismatch, "value count " + std::to_string(values_.size()) +
                                                  " does not match node count " + std::to_string(grid_size(grid_)));
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      const Vec3 x = grid_node(grid_, k);
      throw Error(ErrorKind::NonFiniteValue,
                  "value at node " + std::to_string(k) + " " + describe({x.data(), static_cast<std::size_t>(dim())}));
    }
  }
}

const PolarGrid* GridFunction::polar() const {
  const auto* p = std::get_if<PolarGridPtr>(&grid_);
  return p ? p->get() : nullptr;
}

const CartesianGrid* GridFunction::cartesian() const {
  const auto* p = std::get_if<CartesianGridPtr>(&grid_);
  return p ? p->get() : nullptr;
}

GridFunction sample(const ScalarField& f, const GridRef& grid) {
  const std::size_t count = grid_size(grid);
  const auto n = static_cast<std::size_t>(grid_dim(grid));
  std::vector<double> values(count);
  for (std::size_t k = 0; k < count; ++k) {
    const Vec3 x = grid_node(grid, k);
    const double v = f({x.data(), n});
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::NonFiniteValue, "field is not finite at node " + std::to_string(k) + " " +
                                                 describe({x.data(), n}));
    }
    values[k] = v;
  }
  return GridFunction(grid, std::move(values));
}

ResampleResult resample(const GridFunction& f, const GridRef& target) {
  if (f.dim() != grid_dim(target)) {
    throw Error(ErrorKind::DimensionMismatch, "source and target grids differ in dimension");
  }
  const std::size_t count = grid_size(target);
  std::vector<double> out(count, 0.0);
  std::size_t zero_filled = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const Vec3 x = grid_node(target, k);
    bool inside = false;
    double v = 0.0;
    if (const CartesianGrid* c = f.cartesian()) {
      v = interpolate_cartesian(*c, f.values(), x, inside);
    } else {
      v = interpolate_polar(*f.polar(), f.values(), x, inside);
    }
    if (inside) {
      out[k] = v;
    } else {
      ++zero_filled;
    }
  }
  return {GridFunction(target, std::move(out)), zero_filled};
}

}  // namespace swlab
