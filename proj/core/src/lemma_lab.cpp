#include "swlab/lemma_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "swlab/error.hpp"
#include "swlab/quadrature.hpp"

namespace swlab {
namespace {

double length(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double distance(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t d = 0; d < x.size(); ++d) s += (x[d] - y[d]) * (x[d] - y[d]);
  return std::sqrt(s);
}

// |1 - t^alpha| for t > 0, accurate near t = 1.
double one_minus_power(double t, double alpha) {
  if (alpha == 0.0) return 0.0;
  return std::abs(std::expm1(alpha * std::log(t)));
}

TailFit fit_tail(std::vector<double> increments, double log_threshold) {
  TailFit fit;
  fit.increments = increments;
  const std::size_t k = increments.size();
  const double peak = *std::max_element(increments.begin(), increments.end());
  if (!(peak > 0.0)) return fit;
  // log(increment) against decade index; slope / ln 10 is the growth rate.
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < k; ++i) {
    if (increments[i] <= 0.0) return fit;
    xs.push_back(static_cast<double>(i) * std::numbers::ln10);
    ys.push_back(std::log(increments[i]));
  }
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  if (slope < -log_threshold) return fit;
  if (slope <= log_threshold) {
    fit.model = "log";
    fit.rate = 0.0;
    fit.log_coefficient = increments.back() / std::numbers::ln10;
  } else {
    fit.model = "power";
    fit.rate = slope;
  }
  return fit;
}

}  // namespace

void LemmaParams::validate() const {
  if (n != 2 && n != 3) throw Error(ErrorKind::UnsupportedDimension, "n must be 2 or 3");
  if (!(p > 1.0) || !std::isfinite(p)) throw Error(ErrorKind::InvalidRange, "p must lie in (1, inf)");
  if (!std::isfinite(alpha)) throw Error(ErrorKind::InvalidRange, "alpha must be finite");
  if (std::abs(length({e.data(), static_cast<std::size_t>(n)}) - 1.0) > 1e-12) {
    throw Error(ErrorKind::InvalidRange, "e must be a unit vector");
  }
}

double stein_weiss_kernel(std::span<const double> x, std::span<const double> y, double alpha) {
  if (x.size() != y.size()) throw Error(ErrorKind::DimensionMismatch, "points differ in dimension");
  const double rx = length(x);
  const double ry = length(y);
  const double dist = distance(x, y);
  if (dist == 0.0) throw Error(ErrorKind::SingularInput, "x = y");
  if (ry == 0.0) throw Error(ErrorKind::SingularInput, "y = 0");
  if (rx == 0.0 && alpha < 0.0) throw Error(ErrorKind::SingularInput, "x = 0 with alpha < 0");
  const auto n = static_cast<int>(x.size());
  double num = 0.0;
  if (alpha == 0.0) {
    num = 0.0;
  } else if (rx == 0.0) {
    num = 1.0;
  } else {
    // log(|x|/|y|) = log1p((|x|^2 - |y|^2) / |y|^2) / 2 with the difference
    // of squares formed as sum (x - y)(x + y), exact-ish for |x| ~ |y|.
    double diff = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) diff += (x[d] - y[d]) * (x[d] + y[d]);
    num = std::abs(std::expm1(0.5 * alpha * std::log1p(diff / (ry * ry))));
  }
  return num / std::pow(dist, n);
}

std::pair<double, double> verify_commutator_identity(std::span<const double> x, std::span<const double> y,
                                                     double alpha) {
  const double f = stein_weiss_kernel(x, y, alpha);
  // Direct difference of powers, in extended precision so that its own
  // cancellation does not mask the comparison.
  long double sx = 0.0L;
  long double sy = 0.0L;
  for (std::size_t d = 0; d < x.size(); ++d) {
    sx += static_cast<long double>(x[d]) * x[d];
    sy += static_cast<long double>(y[d]) * y[d];
  }
  const auto lhs = static_cast<double>(std::abs(std::pow(std::sqrt(sy), static_cast<long double>(alpha)) -
                                                std::pow(std::sqrt(sx), static_cast<long double>(alpha))));
  const double rhs = f * std::pow(distance(x, y), static_cast<double>(x.size())) * std::pow(length(y), alpha);
  return {lhs, rhs};
}

double sphere_kernel_integral(double rho, int n, int quad_resolution) {
  if (n != 2 && n != 3) throw Error(ErrorKind::UnsupportedDimension, "n must be 2 or 3");
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw Error(ErrorKind::InvalidRange, "rho must be >= 0");
  const double gap = std::abs(1.0 - rho);
  if (gap <= 1e-6) throw Error(ErrorKind::TooCloseToOne, "|rho - 1| <= 1e-6; the integral diverges");

  // |rho e - theta|^2 = (1 - rho)^2 + 4 rho sin^2(phi/2), phi the angle to e.
  const double gap2 = gap * gap;
  std::function<double(double)> integrand;
  double factor = 0.0;
  if (n == 2) {
    integrand = [=](double phi) {
      const double s = std::sin(0.5 * phi);
      return 1.0 / (gap2 + 4.0 * rho * s * s);
    };
    factor = 2.0;
  } else {
    integrand = [=](double phi) {
      const double s = std::sin(0.5 * phi);
      const double d2 = gap2 + 4.0 * rho * s * s;
      return std::sin(phi) / (d2 * std::sqrt(d2));
    };
    factor = 2.0 * std::numbers::pi;
  }

  std::vector<double> cuts;
  const int panels = std::max(1, quad_resolution);
  for (int k = 1; k < panels; ++k) cuts.push_back(std::numbers::pi * k / panels);
  for (double w = gap; w < std::numbers::pi; w *= 2.0) cuts.push_back(w);
  return factor * quad::integrate_adaptive(integrand, 0.0, std::numbers::pi, 1e-13, cuts);
}

double sphere_kernel_integral_scaled(double rho, int n) {
  if (n == 2) return 2.0 * std::numbers::pi / (1.0 + rho);
  if (n == 3) {
    return rho <= 1.0 ? 4.0 * std::numbers::pi / (1.0 + rho) : 4.0 * std::numbers::pi / (rho * (1.0 + rho));
  }
  throw Error(ErrorKind::UnsupportedDimension, "n must be 2 or 3");
}

double g_profile(double rho, const LemmaParams& params, int quad_resolution) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw Error(ErrorKind::InvalidRange, "rho must be positive");
  const int n = params.n;
  if (params.alpha == 0.0) return 0.0;
  const double radial = std::pow(rho, n / params.p);
  const double gap = std::abs(rho - 1.0);
  if (gap < 1e-3) {
    const double ratio = gap == 0.0 ? std::abs(params.alpha) : one_minus_power(rho, params.alpha) / gap;
    return radial * ratio * sphere_kernel_integral_scaled(rho, n);
  }
  return radial * one_minus_power(rho, params.alpha) * sphere_kernel_integral(rho, n, quad_resolution);
}

SplitReport young_bound_constant(const LemmaParams& params, double delta, double M, const YoungOptions& options) {
  params.validate();
  if (!(delta > 0.0 && delta < 0.5 && M > 2.0 && std::isfinite(M))) {
    throw Error(ErrorKind::InvalidWindow, "need 0 < delta < 1/2 < 2 < M");
  }
  const auto g_log = [&](double u) { return g_profile(std::exp(u), params, options.quad_resolution); };
  const auto piece = [&](double a, double b) {
    const double mid[] = {0.0};
    return quad::integrate_adaptive(g_log, std::log(a), std::log(b), options.rel_tol, mid);
  };

  SplitReport rep;
  rep.delta = delta;
  rep.M = M;
  rep.I = piece(delta, 0.5);
  rep.II = piece(0.5, 2.0);
  rep.III = piece(2.0, M);
  rep.B = rep.I + rep.II + rep.III;

  std::vector<double> inc_lo;
  std::vector<double> inc_hi;
  for (int k = 0; k < options.ladder_decades; ++k) {
    const double hi = delta * std::pow(10.0, -k);
    inc_lo.push_back(piece(hi / 10.0, hi));
    const double lo = M * std::pow(10.0, k);
    inc_hi.push_back(piece(lo, lo * 10.0));
  }
  rep.tail_I = fit_tail(inc_lo, options.log_rate_threshold);
  rep.tail_III = fit_tail(inc_hi, options.log_rate_threshold);

  const bool div_lo = rep.tail_I.model != "none";
  const bool div_hi = rep.tail_III.model != "none";
  rep.verdict = (div_lo || div_hi) ? "divergent" : "converged";
  rep.divergent_piece = div_lo && div_hi ? "I+III" : div_lo ? "I" : div_hi ? "III" : "none";
  const TailFit* lead = div_lo ? &rep.tail_I : div_hi ? &rep.tail_III : nullptr;
  if (lead) {
    rep.model = lead->model;
    rep.fitted_rate = lead->rate;
  }
  return rep;
}

nlohmann::json to_json(const SplitReport& r) {
  auto tail = [](const TailFit& t) {
    return nlohmann::json{{"model", t.model}, {"rate", t.rate}, {"log_coefficient", t.log_coefficient},
                          {"increments", t.increments}};
  };
  return nlohmann::json{{"I", r.I},
                        {"II", r.II},
                        {"III", r.III},
                        {"B", r.B},
                        {"delta", r.delta},
                        {"M", r.M},
                        {"verdict", r.verdict},
                        {"divergent_piece", r.divergent_piece},
                        {"fitted_rate", r.fitted_rate},
                        {"model", r.model},
                        {"tail_I", tail(r.tail_I)},
                        {"tail_III", tail(r.tail_III)}};
}

ApplyFResult apply_F(const GridFunction& phi, double alpha) {
  const PolarGrid* g = phi.polar();
  if (!g) throw Error(ErrorKind::DimensionMismatch, "apply_F needs a polar grid function");
  if (!std::isfinite(alpha)) throw Error(ErrorKind::InvalidRange, "alpha must be finite");
  const int n = g->dim();
  const std::size_t nr = g->radial_count();
  const std::size_t na = g->angular_count();
  const auto radii = g->radii();
  const auto wr = g->radial_weights();
  const auto wa = g->angular_weights();
  const auto vals = phi.values();

  std::vector<double> cosines(na * na);
  for (std::size_t j = 0; j < na; ++j) {
    const auto ej = g->angular_node(j);
    for (std::size_t l = 0; l < na; ++l) {
      const auto el = g->angular_node(l);
      double c = 0.0;
      for (int d = 0; d < n; ++d) c += ej[d] * el[d];
      cosines[j * na + l] = c;
    }
  }
  const double angular_step =
      n == 2 ? 2.0 * std::numbers::pi / static_cast<double>(na) : std::sqrt(4.0 * std::numbers::pi / static_cast<double>(na));
  const double radial_growth = std::expm1(g->log_step());
  const double sphere = quad::sphere_measure(n);

  std::vector<double> out(nr * na, 0.0);
  std::size_t skipped = 0;
  double skipped_bound = 0.0;
  double phi_sup = 0.0;
  for (double v : vals) phi_sup = std::max(phi_sup, std::abs(v));

  std::vector<double> weighted(nr * na);
  for (std::size_t k = 0; k < nr; ++k)
    for (std::size_t l = 0; l < na; ++l) weighted[k * na + l] = wr[k] * wa[l] * vals[k * na + l];

  for (std::size_t i = 0; i < nr; ++i) {
    const double rx = radii[i];
    const double band = 0.5 * rx * std::max(radial_growth, angular_step);
    const double band2 = band * band;
    for (std::size_t k = 0; k < nr; ++k) {
      const double ry = radii[k];
      const double num = one_minus_power(rx / ry, alpha);
      if (num == 0.0) continue;
      for (std::size_t j = 0; j < na; ++j) {
        double acc = 0.0;
        const double* cj = cosines.data() + j * na;
        const double* wk = weighted.data() + k * na;
        for (std::size_t l = 0; l < na; ++l) {
          const double d2 = rx * rx + ry * ry - 2.0 * rx * ry * cj[l];
          if (d2 < band2) {
            ++skipped;
            continue;
          }
          acc += wk[l] / (n == 2 ? d2 : d2 * std::sqrt(d2));
        }
        out[i * na + j] += num * acc;
      }
    }
    // Dropped mass over the ball |x - y| < band: |1 - t^alpha| <= |alpha|
    // max(t^{alpha-1}, 1) |x - y| / |y|, integrated against |x - y|^{-n}.
    if (alpha != 0.0) {
      const double inner = std::max(rx - band, 0.5 * rx);
      const double tmax = rx / inner;
      const double lip = std::abs(alpha) * std::max({1.0, std::pow(tmax, alpha - 1.0), std::pow(1.0 / tmax, alpha - 1.0)});
      skipped_bound = std::max(skipped_bound, lip / inner * sphere * band * phi_sup);
    }
  }
  return ApplyFResult{GridFunction(phi.grid(), std::move(out)), skipped, skipped_bound};
}

}  // namespace swlab
