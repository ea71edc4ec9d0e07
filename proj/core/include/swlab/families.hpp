#pragma once

#include <string_view>

#include "swlab/grid.hpp"

namespace swlab {

enum class Family {
  GaussianDilations,  ///< exp(-|lambda x|^2), parameter lambda
  AnnulusBumps,       ///< bump of radius 1/2 centred at 1.5 (cos t, sin t), parameter t
  NecessityBump,      ///< bump of radius 1/2 centred at 2 e_1; parameter is a window radius
};

std::string_view to_string(Family family) noexcept;
/// Throws UnknownFamily.
Family parse_family(std::string_view name);

/// C-infinity bump exp(1 - 1/(1 - s^2)) for s < 1, zero otherwise.
double smooth_bump(double s) noexcept;

ScalarField make_test_function(Family family, double parameter, int n);

/// Natural length scale of a family member; grids for it are dilated by
/// this factor so that dilated members see self-similar discretizations.
double family_length_scale(Family family, double parameter);

}  // namespace swlab
