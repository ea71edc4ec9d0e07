#include "swlab/field_io.hpp"

#include <cstdio>
#include <fstream>
#include <string>

#include "swlab/error.hpp"

namespace swlab {
namespace {

std::string format_real(double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return {buf, static_cast<std::size_t>(len)};
}

}  // namespace

nlohmann::json field_header(const GridFunction& f) {
  nlohmann::json h;
  h["format"] = "swlab-field";
  h["version"] = 1;
  h["dim"] = f.dim();
  h["count"] = f.size();
  if (const PolarGrid* g = f.polar()) {
    const auto& p = g->params();
    h["grid"] = "polar";
    h["params"] = {{"rho_min", p.rho_min},
                   {"rho_max", p.rho_max},
                   {"radial_count", p.radial_count},
                   {"angular_resolution", p.angular_resolution}};
  } else {
    const auto& p = f.cartesian()->params();
    h["grid"] = "cartesian";
    h["params"] = {{"half_extent", p.half_extent}, {"points_per_axis", p.points_per_axis}};
  }
  return h;
}

void write_field(std::ostream& os, const GridFunction& f) {
  static constexpr const char* kAxes[] = {"x", "y", "z"};
  const int n = f.dim();
  os << '#' << field_header(f).dump() << '\n';
  for (int d = 0; d < n; ++d) os << kAxes[d] << ',';
  os << "value\n";
  for (std::size_t k = 0; k < f.size(); ++k) {
    const Vec3 x = grid_node(f.grid(), k);
    for (int d = 0; d < n; ++d) os << format_real(x[d]) << ',';
    os << format_real(f[k]) << '\n';
  }
  if (!os) throw Error(ErrorKind::Io, "failed writing field table");
}

void write_field(const std::filesystem::path& path, const GridFunction& f) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::Io, "cannot open " + path.string());
  write_field(os, f);
}

GridFunction read_field(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.empty() || line[0] != '#') {
    throw Error(ErrorKind::Io, "missing field header");
  }
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(line.substr(1));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, std::string("bad field header: ") + e.what());
  }
  GridRef grid;
  try {
    const int n = h.at("dim").get<int>();
    const auto& p = h.at("params");
    if (h.at("grid") == "polar") {
      grid = build_polar_grid(n, p.at("rho_min").get<double>(), p.at("rho_max").get<double>(),
                              p.at("radial_count").get<int>(), p.at("angular_resolution").get<int>());
    } else {
      grid = build_cartesian_grid(n, p.at("half_extent").get<double>(), p.at("points_per_axis").get<int>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, std::string("bad field header: ") + e.what());
  }
  std::getline(is, line);  // column names
  const std::size_t count = grid_size(grid);
  std::vector<double> values;
  values.reserve(count);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    const std::string tail = line.substr(comma + 1);
    try {
      values.push_back(std::stod(tail));
    } catch (const std::exception&) {
      throw Error(ErrorKind::Io, "unreadable value '" + tail + "'");
    }
  }
  if (values.size() != count) throw Error(ErrorKind::Io, "row count does not match header");
  return GridFunction(grid, std::move(values));
}

GridFunction read_field(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return read_field(is);
}

}  // namespace swlab
