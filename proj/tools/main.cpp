// swlab: command-line front end for norms, operators, the lemma split and sweeps.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "swlab/error.hpp"
#include "swlab/field_io.hpp"
#include "swlab/report.hpp"
#include "swlab/sweep.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace swlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailedRow = 1;
constexpr int kExitConfig = 2;

struct Globals {
  std::string out;
  std::string format = "csv";
  bool plot_data = false;
  std::string grid_preset = "default";
};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string cell(const json& v) {
  if (v.is_number_float()) return fmt17(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

// A flat result object goes to stdout and, with --out, to <stem>.csv|json.
void emit(const Globals& g, const std::string& stem, const json& obj) {
  std::string text;
  if (parse_report_format(g.format) == ReportFormat::Json) {
    text = obj.dump(2) + "\n";
  } else {
    std::string head;
    std::string row;
    for (const auto& [k, v] : obj.items()) {
      head += (head.empty() ? "" : ",") + k;
      row += (row.empty() ? "" : ",") + cell(v);
    }
    text = head + "\n" + row + "\n";
  }
  std::cout << text;
  if (!g.out.empty()) {
    fs::create_directories(g.out);
    const fs::path path = fs::path(g.out) / (stem + (g.format == "json" ? ".json" : ".csv"));
    std::ofstream os(path, std::ios::binary);
    os << text;
    if (!os) throw Error(ErrorKind::Io, "cannot write " + path.string());
  }
}

KernelSpec inverse_power_kernel(int n) {
  KernelSpec k;
  k.dim = n;
  k.label = "inverse_power";
  k.kernel = [n](std::span<const double> y) {
    double r2 = 0.0;
    for (int d = 0; d < n; ++d) r2 += y[d] * y[d];
    return std::pow(r2, -0.5 * (n - 1));
  };
  return k;
}

OperatorSpec operator_from(const std::vector<double>& direction, int n) {
  OperatorSpec op;
  if (direction.empty()) return op;
  if (direction.size() != static_cast<std::size_t>(n)) throw Error(ErrorKind::Config, "--direction needs n components");
  op.direction = {0.0, 0.0, 0.0};
  std::copy(direction.begin(), direction.end(), op.direction.begin());
  return op;
}

json split_json(const SplitReport& r, const LemmaParams& lp) {
  json j = json::parse(to_json(r).dump());
  j["n"] = lp.n;
  j["p"] = lp.p;
  j["alpha"] = lp.alpha;
  j["admissible"] = lp.admissible();
  return j;
}

int classify(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Config:
    case ErrorKind::InvalidRange:
    case ErrorKind::UnsupportedDimension:
    case ErrorKind::UnknownFamily:
    case ErrorKind::InvalidWindow:
    case ErrorKind::InsufficientDecades:
    case ErrorKind::TooCloseToOne:
      return kExitConfig;
    default:
      return kExitFailedRow;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted mixed-norm experiments for singular integral operators"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--out", g.out, "Output directory")->expected(1);
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--plot-data", g.plot_data, "Also write two-column plot data files");
  app.add_option("--grid-preset", g.grid_preset, "Grid resolutions")->check(CLI::IsMember({"default", "fine"}));

  int n = 2;
  double p = 2.0;
  double p_tilde = 2.0;
  double alpha = 0.0;
  std::string family = "gaussian_dilations";
  double param = 1.0;
  std::vector<double> direction;

  auto* norm = app.add_subcommand("norm", "Weighted mixed norm of one family member");
  auto* riesz_cmd = app.add_subcommand("riesz", "Apply the directional Riesz transform");
  auto* lemma = app.add_subcommand("lemma", "Split constant of the weighted-kernel lemma");
  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep from a JSON config");
  auto* sharp = app.add_subcommand("sharpness", "Truncation blow-up probe at a boundary weight");
  auto* check = app.add_subcommand("check-kernel", "Empirical size/smoothness/multiplier bounds of a kernel");
  for (auto* sub : {norm, riesz_cmd, lemma, sharp, check}) sub->add_option("--n", n, "Dimension (2 or 3)");
  for (auto* sub : {norm, lemma, sharp}) {
    sub->add_option("--p", p, "Radial exponent");
    sub->add_option("--alpha", alpha, "Weight exponent");
  }
  for (auto* sub : {norm, sharp}) sub->add_option("--p-tilde", p_tilde, "Angular exponent");
  for (auto* sub : {norm, riesz_cmd}) {
    sub->add_option("--family", family, "gaussian_dilations | annulus_bumps | necessity_bump");
    sub->add_option("--param", param, "Family parameter");
  }
  for (auto* sub : {riesz_cmd, sharp, check}) sub->add_option("--direction", direction, "Unit direction theta");

  std::string dump_field;
  riesz_cmd->add_option("--dump-field", dump_field, "Write the transformed field to this file");
  double delta = 1e-6;
  double big_m = 1e6;
  lemma->add_option("--delta", delta, "Inner truncation");
  lemma->add_option("--M", big_m, "Outer truncation");
  std::string config_path;
  sweep->add_option("--config", config_path, "Sweep config (JSON)")->required();
  std::vector<double> deltas{1e-2, 5e-3, 2e-3, 1e-3, 5e-4, 2e-4, 1e-4};
  sharp->add_option("--deltas", deltas, "Truncation radii");
  std::string kernel_name = "riesz";
  check->add_option("--kernel", kernel_name, "riesz | inverse-power")->check(CLI::IsMember({"riesz", "inverse-power"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*norm) {
      const NormParams np{p, p_tilde, alpha, n};
      np.validate();
      const Family fam = parse_family(family);
      const GridSpec grid = GridSpec::preset(g.grid_preset, n).dilated(family_length_scale(fam, param));
      const auto polar = build_polar_grid(n, grid.polar.rho_min, grid.polar.rho_max, grid.polar.radial_count,
                                          grid.polar.angular_resolution);
      const GridFunction f = sample(make_test_function(fam, param, n), polar);
      emit(g, "norm",
           json{{"n", n}, {"p", p}, {"p_tilde", p_tilde}, {"alpha", alpha}, {"family", family}, {"param", param},
                {"norm", mixed_norm(f, np)}, {"weighted_norm", weighted_mixed_norm(f, np)},
                {"admissible", np.admissible()}});
      return kExitOk;
    }

    if (*riesz_cmd) {
      const KernelSpec kernel = make_kernel(operator_from(direction, n), n);
      const Family fam = parse_family(family);
      const GridSpec grid = GridSpec::preset(g.grid_preset, n).dilated(family_length_scale(fam, param));
      const auto box = build_cartesian_grid(n, grid.half_extent, grid.points_per_axis);
      const SpectralResult r = apply_spectral(kernel, sample(make_test_function(fam, param, n), box));
      double sup = 0.0;
      for (double v : r.field.values()) sup = std::max(sup, std::abs(v));
      if (!dump_field.empty()) {
        const fs::path path(dump_field);
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        write_field(path, r.field);
      }
      emit(g, "riesz",
           json{{"n", n}, {"operator", kernel.label}, {"family", family}, {"param", param}, {"sup", sup},
                {"imaginary_residue", r.imaginary_residue}, {"boundary_tail", r.boundary_tail},
                {"warnings", r.warnings.size()}});
      return kExitOk;
    }

    if (*lemma) {
      LemmaParams lp;
      lp.n = n;
      lp.p = p;
      lp.alpha = alpha;
      const SplitReport r = young_bound_constant(lp, delta, big_m);
      json j = split_json(r, lp);
      j.erase("tail_I");
      j.erase("tail_III");
      emit(g, "lemma", j);
      return kExitOk;
    }

    if (*sweep) {
      SweepConfig config = load_sweep_config(config_path);
      if (app.get_option("--grid-preset")->count() > 0) {
        config.grid = GridSpec::preset(g.grid_preset, config.n);
        config.grid_preset = g.grid_preset;
      }
      const fs::path out = g.out.empty() ? config.output_dir : fs::path(g.out);
      const SweepReport report = run_sweep(config);
      const auto files = emit_reports(report, out, parse_report_format(g.format), g.plot_data);
      for (const auto& f : report.failures) std::cerr << "failed: " << f.where << ": " << f.message << '\n';
      std::cout << report.rows.size() << " rows, " << report.blowups.size() << " blow-up probes, "
                << report.splits.size() << " split reports, " << report.failures.size() << " failures\n";
      std::cout << files.size() << " files written to " << out.string() << '\n';
      return report.failures.empty() ? kExitOk : kExitFailedRow;
    }

    if (*sharp) {
      const NormParams np{p, p_tilde, alpha, n};
      np.validate();
      const KernelSpec kernel = make_kernel(operator_from(direction, n), n);
      const BlowupFit fit = blowup_probe(np, kernel, deltas, GridSpec::preset(g.grid_preset, n));
      if (g.plot_data && !g.out.empty()) {
        SweepReport rep;
        rep.n = n;
        rep.blowups.push_back(fit);
        emit_reports(rep, g.out, parse_report_format(g.format), true);
      }
      const json j = json::parse(to_json(fit).dump());
      json flat{{"n", n}, {"p", p}, {"p_tilde", p_tilde}, {"alpha", alpha}};
      for (const char* key : {"side", "preferred_model", "expected_exponent", "fitted_exponent", "power_r2", "log_r2",
                              "f_statistic", "last_decade_change", "monotone"}) {
        flat[key] = j[key];
      }
      emit(g, "sharpness", g.format == "json" ? j : flat);
      return kExitOk;
    }

    if (*check) {
      const KernelSpec kernel =
          kernel_name == "riesz" ? make_kernel(operator_from(direction, n), n) : inverse_power_kernel(n);
      std::vector<double> radii;
      for (int k = -12; k <= 12; ++k) radii.push_back(std::pow(10.0, k / 4.0));
      const KernelConditionReport r = check_kernel_conditions(kernel, radii, 64);
      emit(g, "check_kernel",
           json{{"n", n}, {"kernel", kernel.label}, {"size_sup", r.size_sup}, {"gradient_sup", r.gradient_sup},
                {"fourier_sup", r.fourier_sup}, {"fourier_from_multiplier", r.fourier_from_multiplier},
                {"size_ok", r.size_ok}, {"gradient_ok", r.gradient_ok}, {"fourier_ok", r.fourier_ok},
                {"accepted", r.all_ok()}});
      return r.all_ok() ? kExitOk : kExitFailedRow;
    }
  } catch (const Error& e) {
    std::cerr << "swlab: " << e.what() << '\n';
    return classify(e);
  } catch (const std::exception& e) {
    std::cerr << "swlab: " << e.what() << '\n';
    return kExitFailedRow;
  }
  return kExitOk;
}
