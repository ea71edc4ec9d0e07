#include "swlab/mixed_norm.hpp"

#include <algorithm>
#include <cmath>

#include "swlab/error.hpp"

namespace swlab {
namespace {

const PolarGrid& require_polar(const GridFunction& f) {
  const PolarGrid* g = f.polar();
  if (!g) throw Error(ErrorKind::DimensionMismatch, "mixed norms need a polar grid function");
  return *g;
}

// Neumaier summation: the grouped and flat sums of the same terms then agree
// to a few ulps.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// sum_j w_j |f_ij|^q, or max_j |f_ij| for q = inf.
double shell_sum(const GridFunction& f, const PolarGrid& g, std::size_t i, double q) {
  const std::size_t na = g.angular_count();
  const auto w = g.angular_weights();
  const auto v = f.values().subspan(i * na, na);
  if (std::isinf(q)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  CompensatedSum s;
  for (std::size_t j = 0; j < na; ++j) s.add(w[j] * std::pow(std::abs(v[j]), q));
  return s.value();
}

}  // namespace

bool NormParams::admissible() const noexcept { return alpha > alpha_lower() && alpha < alpha_upper(); }

NormParams NormParams::dual() const {
  auto conj = [](double r) { return std::isinf(r) ? 1.0 : r / (r - 1.0); };
  return NormParams{conj(p), conj(p_tilde), -alpha, n};
}

void NormParams::validate() const {
  if (!(p > 1.0) || !std::isfinite(p)) throw Error(ErrorKind::InvalidRange, "p must lie in (1, inf)");
  if (!(p_tilde > 1.0) || !std::isfinite(p_tilde)) {
    throw Error(ErrorKind::InvalidRange, "p_tilde must lie in (1, inf)");
  }
  if (!std::isfinite(alpha)) throw Error(ErrorKind::InvalidRange, "alpha must be finite");
  if (n != 2 && n != 3) throw Error(ErrorKind::UnsupportedDimension, "n must be 2 or 3");
}

double angular_norm(const GridFunction& f, std::size_t shell_index, double p_tilde, AngularMeasure measure) {
  const PolarGrid& g = require_polar(f);
  if (shell_index >= g.radial_count()) {
    throw Error(ErrorKind::IndexOutOfRange, "shell " + std::to_string(shell_index) + " of " +
                                                std::to_string(g.radial_count()));
  }
  if (!(p_tilde >= 1.0)) throw Error(ErrorKind::InvalidRange, "p_tilde must be >= 1");
  const double s = shell_sum(f, g, shell_index, p_tilde);
  if (std::isinf(p_tilde)) return s;
  double scale = 1.0;
  if (measure == AngularMeasure::Probability) {
    double total = 0.0;
    for (double w : g.angular_weights()) total += w;
    scale = 1.0 / total;
  }
  return std::pow(scale * s, 1.0 / p_tilde);
}

NormResult mixed_norm_detailed(const GridFunction& f, const NormParams& params, double weight_exponent) {
  const PolarGrid& g = require_polar(f);
  if (g.dim() != params.n) {
    throw Error(ErrorKind::DimensionMismatch, "grid dimension " + std::to_string(g.dim()) +
                                                  " differs from params.n = " + std::to_string(params.n));
  }
  const double p = params.p;
  const double q = params.p_tilde;
  const auto radii = g.radii();
  const auto wr = g.radial_weights();
  const std::size_t nr = g.radial_count();

  NormResult out;
  CompensatedSum total;
  for (std::size_t i = 0; i < nr; ++i) {
    const double s = shell_sum(f, g, i, q);
    // A_i^p without forming A_i, so p == q regroups the plain L^p sum exactly.
    const double ap = std::isinf(q) ? std::pow(s, p) : std::pow(s, p / q);
    const double term = wr[i] * std::pow(radii[i], weight_exponent * p) * ap;
    total.add(term);
    if (i == 0) out.inner_shell_integrand = term;
    if (i + 1 == nr) out.outer_shell_integrand = term;
  }
  out.value = std::pow(total.value(), 1.0 / p);
  return out;
}

double mixed_norm(const GridFunction& f, const NormParams& params) {
  return mixed_norm_detailed(f, params, 0.0).value;
}

double weighted_mixed_norm(const GridFunction& f, const NormParams& params) {
  return mixed_norm_detailed(f, params, params.alpha).value;
}

double lp_quadrature_norm(const GridFunction& f, double p) {
  const PolarGrid& g = require_polar(f);
  const std::size_t na = g.angular_count();
  const auto wr = g.radial_weights();
  const auto wa = g.angular_weights();
  const auto v = f.values();
  CompensatedSum total;
  for (std::size_t k = 0; k < v.size(); ++k) total.add(wr[k / na] * wa[k % na] * std::pow(std::abs(v[k]), p));
  return std::pow(total.value(), 1.0 / p);
}

std::pair<double, double> norm_scaling_check(const ScalarField& f, double lambda, const NormParams& params,
                                             const PolarWindow& window) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error(ErrorKind::InvalidRange, "lambda must be positive");
  const int n = params.n;
  const auto base = build_polar_grid(n, window.rho_min, window.rho_max, window.radial_count, window.angular_resolution);
  const auto scaled = build_polar_grid(n, window.rho_min / lambda, window.rho_max / lambda, window.radial_count,
                                       window.angular_resolution);
  const ScalarField dilated = [&f, lambda](std::span<const double> x) {
    Vec3 y{};
    for (std::size_t d = 0; d < x.size(); ++d) y[d] = lambda * x[d];
    return f({y.data(), x.size()});
  };
  const double lhs = weighted_mixed_norm(sample(dilated, scaled), params);
  const double rhs = std::pow(lambda, -params.alpha - n / params.p) * weighted_mixed_norm(sample(f, base), params);
  return {lhs, rhs};
}

}  // namespace swlab
