#pragma once

#include <span>

namespace swlab::fit {

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r2 = 0.0;
  double rss = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// y = c + a (e^{q x} - 1) / q with q >= 0; q = 0 is the linear model
/// y = c + a x, so the log-growth model is the nested q -> 0 limit.
struct GrowthFit {
  double offset = 0.0;
  double amplitude = 0.0;
  double exponent = 0.0;
  double rss = 0.0;
  double r2 = 0.0;
};

GrowthFit fit_growth(std::span<const double> x, std::span<const double> y, double max_exponent = 4.0);
GrowthFit fit_growth_fixed(std::span<const double> x, std::span<const double> y, double exponent);

}  // namespace swlab::fit
