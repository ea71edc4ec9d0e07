#pragma once

#include <filesystem>
#include <iosfwd>

#include <nlohmann/json.hpp>

#include "swlab/grid.hpp"

namespace swlab {

/// Header describing the grid a field was sampled on; enough to rebuild it.
nlohmann::json field_header(const GridFunction& f);

/// Text table: one '#'-prefixed JSON header line, a column-name line, then
/// one row per node `x,y[,z],value` with 17 significant digits.
void write_field(std::ostream& os, const GridFunction& f);
void write_field(const std::filesystem::path& path, const GridFunction& f);

GridFunction read_field(std::istream& is);
GridFunction read_field(const std::filesystem::path& path);

}  // namespace swlab
