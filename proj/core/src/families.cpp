#include "swlab/families.hpp"

#include <cmath>
#include <string>

#include "swlab/error.hpp"

namespace swlab {
namespace {

ScalarField bump_at(Vec3 centre, double radius, int n) {
  return [centre, radius, n](std::span<const double> x) {
    double s2 = 0.0;
    for (int d = 0; d < n; ++d) s2 += (x[d] - centre[d]) * (x[d] - centre[d]);
    return smooth_bump(std::sqrt(s2) / radius);
  };
}

}  // namespace

std::string_view to_string(Family family) noexcept {
  switch (family) {
    case Family::GaussianDilations: return "gaussian_dilations";
    case Family::AnnulusBumps: return "annulus_bumps";
    case Family::NecessityBump: return "necessity_bump";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "gaussian_dilations") return Family::GaussianDilations;
  if (name == "annulus_bumps") return Family::AnnulusBumps;
  if (name == "necessity_bump") return Family::NecessityBump;
  throw Error(ErrorKind::UnknownFamily, "unknown family '" + std::string(name) + "'");
}

double smooth_bump(double s) noexcept {
  if (!(s < 1.0)) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

ScalarField make_test_function(Family family, double parameter, int n) {
  if (!(parameter > 0.0) || !std::isfinite(parameter)) {
    throw Error(ErrorKind::InvalidRange, "family parameter must be positive");
  }
  if (n != 2 && n != 3) throw Error(ErrorKind::UnsupportedDimension, "n must be 2 or 3");
  switch (family) {
    case Family::GaussianDilations:
      return [lambda = parameter, n](std::span<const double> x) {
        double r2 = 0.0;
        for (int d = 0; d < n; ++d) r2 += x[d] * x[d];
        return std::exp(-lambda * lambda * r2);
      };
    case Family::AnnulusBumps:
      return bump_at({1.5 * std::cos(parameter), 1.5 * std::sin(parameter), 0.0}, 0.5, n);
    case Family::NecessityBump:
      return bump_at({2.0, 0.0, 0.0}, 0.5, n);
  }
  throw Error(ErrorKind::UnknownFamily, "unknown family");
}

double family_length_scale(Family family, double parameter) {
  return family == Family::GaussianDilations ? 1.0 / parameter : 1.0;
}

}  // namespace swlab
