#include "swlab/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "swlab/error.hpp"

namespace swlab::fit {
namespace {

double total_sum_squares(std::span<const double> y) {
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double tss = 0.0;
  for (double v : y) tss += (v - mean) * (v - mean);
  return tss;
}

}  // namespace

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorKind::InvalidRange, "line fit needs >= 2 points");
  const auto m = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    f.rss += r * r;
  }
  const double tss = total_sum_squares(y);
  f.r2 = tss > 0.0 ? 1.0 - f.rss / tss : 1.0;
  return f;
}

GrowthFit fit_growth_fixed(std::span<const double> x, std::span<const double> y, double exponent) {
  std::vector<double> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    z[i] = exponent == 0.0 ? x[i] : std::expm1(exponent * x[i]) / exponent;
  }
  const LineFit line = fit_line(z, y);
  return GrowthFit{line.intercept, line.slope, exponent, line.rss, line.r2};
}

GrowthFit fit_growth(std::span<const double> x, std::span<const double> y, double max_exponent) {
  // Coarse scan, then golden-section refinement around the best bracket.
  const int scan = 200;
  GrowthFit best = fit_growth_fixed(x, y, 0.0);
  int best_k = 0;
  for (int k = 1; k <= scan; ++k) {
    const GrowthFit f = fit_growth_fixed(x, y, max_exponent * k / scan);
    if (f.rss < best.rss) {
      best = f;
      best_k = k;
    }
  }
  double lo = max_exponent * std::max(0, best_k - 1) / scan;
  double hi = max_exponent * std::min(scan, best_k + 1) / scan;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = hi - phi * (hi - lo);
  double b = lo + phi * (hi - lo);
  GrowthFit fa = fit_growth_fixed(x, y, a);
  GrowthFit fb = fit_growth_fixed(x, y, b);
  for (int iter = 0; iter < 80; ++iter) {
    if (fa.rss < fb.rss) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - phi * (hi - lo);
      fa = fit_growth_fixed(x, y, a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + phi * (hi - lo);
      fb = fit_growth_fixed(x, y, b);
    }
  }
  for (const GrowthFit& f : {fa, fb}) {
    if (f.rss < best.rss) best = f;
  }
  return best;
}

}  // namespace swlab::fit
