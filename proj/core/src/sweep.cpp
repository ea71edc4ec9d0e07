#include "swlab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <thread>
#include <tuple>

#include "swlab/error.hpp"
#include "swlab/fitting.hpp"

namespace swlab {
namespace {

constexpr double kLogRateThreshold = 0.05;

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body) {
  std::size_t threads = workers > 0 ? static_cast<std::size_t>(workers) : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
}

std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const auto& f : flags) {
    if (!out.empty()) out += ';';
    out += f;
  }
  return out;
}

GridFunction transform_on_box(const ScalarField& phi, const KernelSpec& kernel, const GridSpec& grid,
                              std::vector<std::string>& flags) {
  const auto box = build_cartesian_grid(grid.n, grid.half_extent, grid.points_per_axis);
  SpectralResult spectral = apply_spectral(kernel, sample(phi, box));
  for (auto& w : spectral.warnings) flags.push_back(w.substr(0, w.find(':')));
  return std::move(spectral.field);
}

PolarGridPtr window_grid(const GridSpec& grid, double rho_min, int radial_count) {
  return build_polar_grid(grid.n, rho_min, grid.polar.rho_max, radial_count, grid.polar.angular_resolution);
}

template <typename T>
std::vector<T> read_list(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) return {};
  if (!j.at(key).is_array()) throw Error(ErrorKind::Config, std::string(key) + " must be an array");
  return j.at(key).get<std::vector<T>>();
}

}  // namespace

GridSpec GridSpec::preset(std::string_view name, int n) {
  GridSpec g;
  g.n = n;
  if (n == 2) {
    g.polar = PolarWindow{1e-3, 11.0, 512, 256};
    g.half_extent = 12.0;
    g.points_per_axis = 512;
  } else if (n == 3) {
    g.polar = PolarWindow{1e-2, 7.0, 128, 32};
    g.half_extent = 8.0;
    g.points_per_axis = 96;
  } else {
    throw Error(ErrorKind::UnsupportedDimension, "no grid preset for n = " + std::to_string(n));
  }
  if (name == "fine") return g.refined();
  if (name != "default") throw Error(ErrorKind::Config, "unknown grid preset '" + std::string(name) + "'");
  return g;
}

GridSpec GridSpec::refined() const {
  GridSpec g = *this;
  g.polar.radial_count = 2 * polar.radial_count;
  g.polar.angular_resolution = 2 * polar.angular_resolution;
  g.points_per_axis = 2 * points_per_axis;
  return g;
}

GridSpec GridSpec::dilated(double scale) const {
  GridSpec g = *this;
  g.polar.rho_min *= scale;
  g.polar.rho_max *= scale;
  g.half_extent *= scale;
  return g;
}

double GridSpec::radial_points_per_decade() const {
  return (polar.radial_count - 1) / std::log10(polar.rho_max / polar.rho_min);
}

KernelSpec make_kernel(const OperatorSpec& op, int n) {
  if (op.kernel != "riesz") throw Error(ErrorKind::Config, "unknown operator kernel '" + op.kernel + "'");
  double len = 0.0;
  for (int d = 0; d < n; ++d) len += op.direction[d] * op.direction[d];
  len = std::sqrt(len);
  if (!(len > 0.0)) throw Error(ErrorKind::Config, "operator direction must be nonzero");
  Vec3 unit{};
  for (int d = 0; d < n; ++d) unit[d] = op.direction[d] / len;
  return riesz(n, {unit.data(), static_cast<std::size_t>(n)});
}

PreparedSample prepare_sample(const ScalarField& phi, const KernelSpec& kernel, const GridSpec& grid) {
  std::vector<std::string> flags;
  const GridFunction t_box = transform_on_box(phi, kernel, grid, flags);
  const auto polar = build_polar_grid(grid.n, grid.polar.rho_min, grid.polar.rho_max, grid.polar.radial_count,
                                      grid.polar.angular_resolution);
  ResampleResult carried = resample(t_box, polar);
  if (carried.zero_filled > 0) flags.push_back("zero_fill=" + std::to_string(carried.zero_filled));
  return PreparedSample{sample(phi, polar), std::move(carried.field), std::move(flags)};
}

RatioRow ratio_from_sample(const PreparedSample& s, const NormParams& params) {
  params.validate();
  RatioRow row;
  row.n = params.n;
  row.p = params.p;
  row.p_tilde = params.p_tilde;
  row.alpha = params.alpha;
  row.numerator = weighted_mixed_norm(s.transformed, params);
  row.denominator = weighted_mixed_norm(s.phi, params);
  if (!(row.denominator > 1e-12)) throw Error(ErrorKind::ZeroDenominator, "weighted norm of phi is below 1e-12");
  row.ratio = row.numerator / row.denominator;
  std::vector<std::string> flags = s.flags;
  if (!params.admissible()) flags.insert(flags.begin(), "inadmissible");
  row.flags = join_flags(flags);
  return row;
}

RatioRow ratio_point(const ScalarField& phi, const NormParams& params, const KernelSpec& kernel, const GridSpec& grid) {
  params.validate();
  if (params.n != grid.n || kernel.dim != grid.n) throw Error(ErrorKind::DimensionMismatch, "n differs across inputs");
  return ratio_from_sample(prepare_sample(phi, kernel, grid), params);
}

BlowupFit blowup_probe(const NormParams& params, const KernelSpec& kernel, std::span<const double> deltas,
                       const GridSpec& grid) {
  params.validate();
  if (params.n != grid.n || kernel.dim != grid.n) throw Error(ErrorKind::DimensionMismatch, "n differs across inputs");
  if (deltas.size() < 4) throw Error(ErrorKind::InsufficientDecades, "need at least 4 truncation radii");
  std::vector<double> requested(deltas.begin(), deltas.end());
  std::sort(requested.begin(), requested.end(), std::greater<>());
  if (!(requested.back() > 0.0) || requested.front() / requested.back() < 100.0 * (1.0 - 1e-9)) {
    throw Error(ErrorKind::InsufficientDecades, "truncation radii must be positive and span >= 2 decades");
  }
  if (!(requested.front() < grid.polar.rho_max)) throw Error(ErrorKind::InvalidWindow, "delta must be below rho_max");

  BlowupFit out;
  out.requested = params;
  if (params.alpha <= params.alpha_lower()) {
    out.side = "lower";
    out.probed = params;
  } else if (params.alpha >= params.alpha_upper()) {
    out.side = "upper";
    out.probed = params.dual();
  } else {
    out.side = "control";
    out.probed = params;
  }
  const NormParams& q = out.probed;
  out.expected_exponent = -(q.alpha + q.n / q.p);

  const ScalarField phi = make_test_function(Family::NecessityBump, requested.back(), grid.n);
  std::vector<std::string> flags;
  const GridFunction t_box = transform_on_box(phi, kernel, grid, flags);

  // Windows snap to a common log lattice anchored at rho_max so that the
  // grids are nested and successive ratios differ only by the added shells.
  const double h = std::log(10.0) / grid.radial_points_per_decade();
  for (double d : requested) {
    const auto steps = static_cast<int>(std::lround(std::log(grid.polar.rho_max / d) / h));
    if (!out.deltas.empty() && steps <= static_cast<int>(std::lround(std::log(grid.polar.rho_max / out.deltas.back()) / h))) {
      continue;
    }
    const double snapped = grid.polar.rho_max * std::exp(-h * steps);
    const auto polar = window_grid(grid, snapped, steps + 1);
    const GridFunction t_polar = resample(t_box, polar).field;
    const double num = weighted_mixed_norm(t_polar, q);
    const double den = weighted_mixed_norm(sample(phi, polar), q);
    if (!(den > 1e-12)) throw Error(ErrorKind::ZeroDenominator, "necessity bump has vanishing norm");
    out.deltas.push_back(snapped);
    out.ratios.push_back(num / den);
  }

  const std::size_t m = out.ratios.size();
  for (std::size_t k = 1; k < m; ++k) {
    if (out.ratios[k] < out.ratios[k - 1] * (1.0 - 1e-12)) out.monotone = false;
  }
  // Change over the last decade: compare with the window closest to 10 delta_min.
  const double target = std::log(10.0 * out.deltas.back());
  std::size_t ref = 0;
  for (std::size_t k = 0; k < m; ++k) {
    if (std::abs(std::log(out.deltas[k]) - target) < std::abs(std::log(out.deltas[ref]) - target)) ref = k;
  }
  out.last_decade_change = std::abs(out.ratios.back() - out.ratios[ref]) / out.ratios.back();

  std::vector<double> x(m);
  std::vector<double> y(m);
  for (std::size_t k = 0; k < m; ++k) {
    x[k] = std::log(1.0 / out.deltas[k]);
    y[k] = std::pow(out.ratios[k], q.p);
  }
  const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
  const fit::GrowthFit free_fit = fit::fit_growth(x, y, 4.0);
  const fit::GrowthFit neg_fit = [&] {
    // Decaying corrections: exponent in [-4, 0).
    std::vector<double> xn(x.begin(), x.end());
    for (double& v : xn) v = -v;
    fit::GrowthFit f = fit::fit_growth(xn, y, 4.0);
    f.exponent = -f.exponent;
    return f;
  }();
  const fit::GrowthFit best = neg_fit.rss < free_fit.rss ? neg_fit : free_fit;
  const fit::GrowthFit log_fit = fit::fit_growth_fixed(x, y, 0.0);
  out.power_r2 = best.r2;
  out.log_r2 = log_fit.r2;
  const double dof = static_cast<double>(m) - 3.0;
  if (best.rss > 0.0 && dof > 0.0) {
    out.f_statistic = (log_fit.rss - best.rss) / (best.rss / dof);
  } else {
    out.f_statistic = log_fit.rss > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }

  if (*ymax - *ymin <= 1e-12 * std::abs(*ymax)) {
    out.preferred_model = "converged";
  } else if (out.f_statistic > 10.0 && std::abs(best.exponent / q.p) > kLogRateThreshold) {
    out.preferred_model = best.exponent < 0.0 ? "converged" : "power";
    if (best.exponent > 0.0) out.fitted_exponent = best.exponent / q.p;
  } else {
    // Noise-free data make F large for any smooth correction, so a
    // significant but negligible exponent still selects the log model.
    out.preferred_model = log_fit.amplitude > 0.0 ? "log" : "converged";
  }
  return out;
}

SweepConfig parse_sweep_config(const nlohmann::json& j) {
  try {
    SweepConfig c;
    c.n = j.value("n", 2);
    if (c.n != 2 && c.n != 3) throw Error(ErrorKind::Config, "n must be 2 or 3");
    c.p_values = read_list<double>(j, "p_values");
    c.p_tilde_values = read_list<double>(j, "p_tilde_values");
    c.alpha_values = read_list<double>(j, "alpha_values");
    for (double v : c.p_values)
      if (!(v > 1.0) || !std::isfinite(v)) throw Error(ErrorKind::Config, "p values must lie in (1, inf)");
    for (double v : c.p_tilde_values)
      if (!(v > 1.0) || !std::isfinite(v)) throw Error(ErrorKind::Config, "p_tilde values must lie in (1, inf)");

    if (j.contains("families")) {
      for (const auto& f : j.at("families")) {
        FamilySpec spec;
        spec.family = parse_family(f.at("family").get<std::string>());
        spec.parameters = read_list<double>(f, "parameters");
        c.families.push_back(std::move(spec));
      }
    } else if (j.contains("family")) {
      FamilySpec spec;
      spec.family = parse_family(j.at("family").get<std::string>());
      spec.parameters = read_list<double>(j, "family_parameters");
      c.families.push_back(std::move(spec));
    }
    for (const auto& f : c.families)
      for (double v : f.parameters)
        if (!(v > 0.0)) throw Error(ErrorKind::Config, "family parameters must be positive");

    c.grid_preset = "default";
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      c.grid_preset = g.value("preset", std::string("default"));
      c.grid = GridSpec::preset(c.grid_preset, c.n);
      c.grid.polar.rho_min = g.value("rho_min", c.grid.polar.rho_min);
      c.grid.polar.rho_max = g.value("rho_max", c.grid.polar.rho_max);
      c.grid.polar.radial_count = g.value("radial_count", c.grid.polar.radial_count);
      c.grid.polar.angular_resolution = g.value("angular_resolution", c.grid.polar.angular_resolution);
      c.grid.half_extent = g.value("half_extent", c.grid.half_extent);
      c.grid.points_per_axis = g.value("points_per_axis", c.grid.points_per_axis);
    } else {
      c.grid = GridSpec::preset("default", c.n);
    }
    if (!(c.grid.polar.rho_max < c.grid.half_extent)) {
      throw Error(ErrorKind::Config, "polar window must lie inside the Cartesian box");
    }

    if (j.contains("operator")) {
      const auto& o = j.at("operator");
      c.op.kernel = o.value("kernel", std::string("riesz"));
      if (o.contains("direction")) {
        const auto dir = o.at("direction").get<std::vector<double>>();
        if (dir.size() != static_cast<std::size_t>(c.n)) throw Error(ErrorKind::Config, "direction length must be n");
        c.op.direction = {0.0, 0.0, 0.0};
        std::copy(dir.begin(), dir.end(), c.op.direction.begin());
      }
    }
    c.output_dir = j.value("output_dir", std::string("sweep_out"));
    c.refine_check = j.value("refine_check", false);
    if (j.contains("blowup")) {
      const auto& b = j.at("blowup");
      c.blowup = b.value("enabled", true);
      if (b.contains("deltas")) c.blowup_deltas = b.at("deltas").get<std::vector<double>>();
    }
    if (j.contains("lemma")) {
      const auto& l = j.at("lemma");
      c.lemma = l.value("enabled", true);
      c.lemma_delta = l.value("delta", c.lemma_delta);
      c.lemma_M = l.value("M", c.lemma_M);
    }
    if (j.contains("lemma_rows")) {
      const auto& l = j.at("lemma_rows");
      c.lemma_rows = l.value("enabled", false);
      c.lemma_grid.rho_min = l.value("rho_min", c.lemma_grid.rho_min);
      c.lemma_grid.rho_max = l.value("rho_max", c.lemma_grid.rho_max);
      c.lemma_grid.radial_count = l.value("radial_count", c.lemma_grid.radial_count);
      c.lemma_grid.angular_resolution = l.value("angular_resolution", c.lemma_grid.angular_resolution);
    }
    c.workers = j.value("workers", 0);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Config, e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    throw Error(ErrorKind::Config, e.what());
  }
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::Config, "cannot open config " + path.string());
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Config, std::string("malformed config: ") + e.what());
  }
  return parse_sweep_config(j);
}

SweepReport run_sweep(const SweepConfig& config) {
  SweepReport report;
  report.n = config.n;
  const KernelSpec kernel = make_kernel(config.op, config.n);

  struct Member {
    Family family;
    double param;
  };
  std::vector<Member> members;
  for (const auto& f : config.families)
    for (double v : f.parameters) members.push_back({f.family, v});

  std::vector<NormParams> points;
  for (double p : config.p_values)
    for (double pt : config.p_tilde_values)
      for (double a : config.alpha_values) points.push_back(NormParams{p, pt, a, config.n});

  // Operator rows: one task per family member, all parameter points at once.
  struct MemberResult {
    std::vector<RatioRow> rows;
    std::vector<double> refined;
    std::vector<RatioRow> lemma_rows;
    std::vector<RowFailure> failures;
  };
  std::vector<MemberResult> member_results(members.size());
  std::map<std::pair<double, double>, SplitReport> split_cache;

  // Split reports are needed by the lemma rows; compute them first.
  std::vector<std::pair<double, double>> p_alpha;
  for (double p : config.p_values)
    for (double a : config.alpha_values) p_alpha.emplace_back(p, a);
  std::vector<std::optional<SplitReport>> splits(p_alpha.size());
  std::vector<std::string> split_errors(p_alpha.size());
  if (config.lemma || config.lemma_rows) {
    parallel_for(p_alpha.size(), config.workers, [&](std::size_t i) {
      try {
        const LemmaParams lp{config.n, p_alpha[i].first, p_alpha[i].second};
        splits[i] = young_bound_constant(lp, config.lemma_delta, config.lemma_M);
      } catch (const std::exception& e) {
        split_errors[i] = e.what();
      }
    });
  }
  for (std::size_t i = 0; i < p_alpha.size(); ++i) {
    if (splits[i]) {
      split_cache[p_alpha[i]] = *splits[i];
      if (config.lemma) report.splits.emplace_back(LemmaParams{config.n, p_alpha[i].first, p_alpha[i].second}, *splits[i]);
    } else if (!split_errors[i].empty()) {
      report.failures.push_back({"lemma p=" + std::to_string(p_alpha[i].first) +
                                     " alpha=" + std::to_string(p_alpha[i].second),
                                 split_errors[i]});
    }
  }

  parallel_for(members.size(), config.workers, [&](std::size_t mi) {
    const Member& mem = members[mi];
    MemberResult& res = member_results[mi];
    const std::string fname(to_string(mem.family));
    const std::string where = fname + " param=" + std::to_string(mem.param);
    try {
      const ScalarField phi = make_test_function(mem.family, mem.param, config.n);
      const double scale = family_length_scale(mem.family, mem.param);
      const PreparedSample prepared = prepare_sample(phi, kernel, config.grid.dilated(scale));
      std::optional<PreparedSample> fine;
      if (config.refine_check) fine = prepare_sample(phi, kernel, config.grid.refined().dilated(scale));
      for (const NormParams& np : points) {
        try {
          RatioRow row = ratio_from_sample(prepared, np);
          row.family = fname;
          row.param = mem.param;
          res.rows.push_back(row);
          res.refined.push_back(fine ? ratio_from_sample(*fine, np).ratio : std::numeric_limits<double>::quiet_NaN());
        } catch (const std::exception& e) {
          res.failures.push_back({where, e.what()});
        }
      }
      if (config.lemma_rows) {
        const auto lg = build_polar_grid(config.n, config.lemma_grid.rho_min * scale, config.lemma_grid.rho_max * scale,
                                         config.lemma_grid.radial_count, config.lemma_grid.angular_resolution);
        const GridFunction phi_lg = sample(phi, lg);
        std::map<double, GridFunction> applied;
        for (const NormParams& np : points) {
          auto it = applied.find(np.alpha);
          if (it == applied.end()) it = applied.emplace(np.alpha, apply_F(phi_lg, np.alpha).field).first;
          RatioRow row;
          row.n = np.n;
          row.p = np.p;
          row.p_tilde = np.p_tilde;
          row.alpha = np.alpha;
          row.family = fname;
          row.param = mem.param;
          row.numerator = mixed_norm(it->second, np);
          row.denominator = mixed_norm(phi_lg, np);
          row.ratio = row.numerator / row.denominator;
          row.flags = "operator=stein_weiss_F";
          res.lemma_rows.push_back(row);
        }
      }
    } catch (const std::exception& e) {
      res.failures.push_back({where, e.what()});
    }
  });

  // Merge in config order.
  std::map<std::tuple<double, double, double>, std::size_t> point_index;
  for (const NormParams& np : points) {
    PointSummary s;
    s.p = np.p;
    s.p_tilde = np.p_tilde;
    s.alpha = np.alpha;
    s.admissible = np.admissible();
    point_index[{np.p, np.p_tilde, np.alpha}] = report.points.size();
    report.points.push_back(s);
  }
  std::vector<std::pair<double, double>> dil_range(points.size(),
                                                   {std::numeric_limits<double>::infinity(), 0.0});
  for (std::size_t mi = 0; mi < members.size(); ++mi) {
    MemberResult& res = member_results[mi];
    for (std::size_t r = 0; r < res.rows.size(); ++r) {
      const RatioRow& row = res.rows[r];
      PointSummary& s = report.points[point_index.at({row.p, row.p_tilde, row.alpha})];
      s.ratio_max_lower = std::max(s.ratio_max_lower, row.ratio);
      if (!std::isnan(res.refined[r])) s.ratio_max_refined = std::max(s.ratio_max_refined.value_or(0.0), res.refined[r]);
      if (members[mi].family == Family::GaussianDilations) {
        auto& range = dil_range[point_index.at({row.p, row.p_tilde, row.alpha})];
        range.first = std::min(range.first, row.ratio);
        range.second = std::max(range.second, row.ratio);
      }
      report.rows.push_back(row);
    }
    for (const RatioRow& row : res.lemma_rows) {
      PointSummary& s = report.points[point_index.at({row.p, row.p_tilde, row.alpha})];
      s.lemma_ratio_max = std::max(s.lemma_ratio_max.value_or(0.0), row.ratio);
      if (auto it = split_cache.find({row.p, row.alpha}); it != split_cache.end()) s.lemma_bound = it->second.B;
      report.lemma_rows.push_back(row);
    }
    for (auto& f : res.failures) report.failures.push_back(std::move(f));
  }
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    PointSummary& s = report.points[i];
    if (s.ratio_max_refined && s.ratio_max_lower > 0.0) {
      s.grid_change = std::abs(*s.ratio_max_refined - s.ratio_max_lower) / s.ratio_max_lower;
    }
    if (dil_range[i].second > 0.0) s.dilation_spread = dil_range[i].second / dil_range[i].first - 1.0;
  }

  // Blow-up probes at every inadmissible point, once per (p, p~, alpha).
  if (config.blowup) {
    std::vector<NormParams> probes;
    for (const NormParams& np : points)
      if (!np.admissible()) probes.push_back(np);
    std::vector<std::optional<BlowupFit>> fits(probes.size());
    std::vector<std::string> errors(probes.size());
    parallel_for(probes.size(), config.workers, [&](std::size_t i) {
      try {
        fits[i] = blowup_probe(probes[i], kernel, config.blowup_deltas, config.grid);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    });
    for (std::size_t i = 0; i < probes.size(); ++i) {
      if (fits[i]) {
        report.blowups.push_back(*fits[i]);
      } else {
        report.failures.push_back({"blowup p=" + std::to_string(probes[i].p) + " alpha=" + std::to_string(probes[i].alpha),
                                   errors[i]});
      }
    }
  }

  report.provenance = {
      {"n", config.n},
      {"operator", kernel.label},
      {"grid_preset", config.grid_preset},
      {"grid",
       {{"rho_min", config.grid.polar.rho_min},
        {"rho_max", config.grid.polar.rho_max},
        {"radial_count", config.grid.polar.radial_count},
        {"angular_resolution", config.grid.polar.angular_resolution},
        {"half_extent", config.grid.half_extent},
        {"points_per_axis", config.grid.points_per_axis}}},
      {"refine_check", config.refine_check},
      {"blowup_deltas", config.blowup_deltas},
      {"lemma_window", {{"delta", config.lemma_delta}, {"M", config.lemma_M}}},
      {"dilated_grids", "gaussian_dilations members use grids scaled by 1/lambda"},
  };
  return report;
}

}  // namespace swlab
