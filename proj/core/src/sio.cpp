#include "swlab/sio.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "swlab/error.hpp"
#include "swlab/quadrature.hpp"

namespace swlab {
namespace {

// FFTW's planner is not reentrant.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

double norm_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

struct AngularRule {
  std::vector<Vec3> nodes;
  std::vector<double> weights;
};

AngularRule angular_rule(int n, int resolution) {
  const auto g = build_polar_grid(n, 1.0, 2.0, 2, std::max(4, resolution));
  AngularRule r;
  for (std::size_t j = 0; j < g->angular_count(); ++j) {
    const auto e = g->angular_node(j);
    Vec3 v{};
    std::copy(e.begin(), e.end(), v.begin());
    r.nodes.push_back(v);
    r.weights.push_back(g->angular_weights()[j]);
  }
  return r;
}

std::vector<Vec3> sample_directions(int n, int count, const std::optional<Vec3>& extra) {
  std::vector<Vec3> dirs;
  if (n == 2) {
    for (int j = 0; j < count; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / count;
      dirs.push_back({std::cos(phi), std::sin(phi), 0.0});
    }
  } else {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int j = 0; j < count; ++j) {
      const double z = 1.0 - 2.0 * (j + 0.5) / count;
      const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
      dirs.push_back({s * std::cos(golden * j), s * std::sin(golden * j), z});
    }
  }
  if (extra) {
    dirs.push_back(*extra);
    dirs.push_back({-(*extra)[0], -(*extra)[1], -(*extra)[2]});
  }
  return dirs;
}

double eval_checked(const ScalarField& f, const Vec3& y, int n) {
  const double v = f({y.data(), static_cast<std::size_t>(n)});
  if (!std::isfinite(v)) throw Error(ErrorKind::Evaluation, "kernel evaluation is not finite");
  return v;
}

}  // namespace

double riesz_constant(int n) {
  return std::tgamma(0.5 * (n + 1)) / std::pow(std::numbers::pi, 0.5 * (n + 1));
}

KernelSpec riesz(int n, std::span<const double> theta) {
  if (n != 2 && n != 3) throw Error(ErrorKind::UnsupportedDimension, "riesz kernel needs n in {2, 3}");
  if (theta.size() != static_cast<std::size_t>(n)) {
    throw Error(ErrorKind::DimensionMismatch, "direction length differs from n");
  }
  if (std::abs(norm_of(theta) - 1.0) > 1e-12) throw Error(ErrorKind::InvalidRange, "direction must be a unit vector");
  Vec3 dir{};
  std::copy(theta.begin(), theta.end(), dir.begin());
  const double cn = riesz_constant(n);

  KernelSpec k;
  k.dim = n;
  k.direction = dir;
  k.mean_zero = true;
  k.kernel = [dir, cn, n](std::span<const double> y) {
    double r2 = 0.0;
    double dot = 0.0;
    for (int d = 0; d < n; ++d) {
      r2 += y[d] * y[d];
      dot += y[d] * dir[d];
    }
    const double r = std::sqrt(r2);
    return cn * dot / std::pow(r, n + 1);
  };
  k.multiplier = [dir, n](std::span<const double> xi) {
    double r2 = 0.0;
    double dot = 0.0;
    for (int d = 0; d < n; ++d) {
      r2 += xi[d] * xi[d];
      dot += xi[d] * dir[d];
    }
    if (r2 == 0.0) return std::complex<double>(0.0, 0.0);
    return std::complex<double>(0.0, -dot / std::sqrt(r2));
  };
  std::string label = "riesz(";
  for (int d = 0; d < n; ++d) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%.6g", d ? "," : "", dir[d]);
    label += buf;
  }
  k.label = label + ")";
  return k;
}

std::complex<double> truncated_fourier_transform(const KernelSpec& kernel, std::span<const double> xi, double eps,
                                                 double outer_radius, int resolution) {
  const int n = kernel.dim;
  const AngularRule ang = angular_rule(n, resolution);
  const double xi_norm = norm_of(xi);
  std::vector<double> r_nodes;
  std::vector<double> r_weights;  // includes r^{n-1} dr
  const double density = std::max(1.0, resolution / 64.0);
  const double inner_hi = std::min(1.0, outer_radius);
  if (eps < inner_hi) {
    const int panels = static_cast<int>(std::ceil(density * std::log(inner_hi / eps))) + 1;
    const quad::Rule rule = quad::composite_gauss_legendre(std::log(eps), std::log(inner_hi), panels, 8);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double r = std::exp(rule.nodes[i]);
      r_nodes.push_back(r);
      r_weights.push_back(rule.weights[i] * std::pow(r, n));
    }
  }
  if (outer_radius > 1.0) {
    const double lo = std::max(1.0, eps);
    // Resolve the plane wave: several panels per wavelength.
    const double waves = (outer_radius - lo) * xi_norm / (2.0 * std::numbers::pi);
    const int panels = static_cast<int>(std::ceil(density * (outer_radius - lo) + 4.0 * waves)) + 1;
    const quad::Rule rule = quad::composite_gauss_legendre(lo, outer_radius, panels, 8);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      r_nodes.push_back(rule.nodes[i]);
      r_weights.push_back(rule.weights[i] * std::pow(rule.nodes[i], n - 1));
    }
  }
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < r_nodes.size(); ++i) {
    const double r = r_nodes[i];
    std::complex<double> shell = 0.0;
    for (std::size_t j = 0; j < ang.nodes.size(); ++j) {
      Vec3 y{};
      double phase = 0.0;
      for (int d = 0; d < n; ++d) {
        y[d] = r * ang.nodes[j][d];
        phase += xi[d] * y[d];
      }
      shell += ang.weights[j] * eval_checked(kernel.kernel, y, n) * std::complex<double>(std::cos(phase), -std::sin(phase));
    }
    acc += r_weights[i] * shell;
  }
  return acc;
}

KernelConditionReport check_kernel_conditions(const KernelSpec& kernel, std::span<const double> sample_radii,
                                              int samples_per_shell, const KernelConditionCaps& caps) {
  const int n = kernel.dim;
  if (sample_radii.empty()) throw Error(ErrorKind::InvalidRange, "no sample radii");
  const auto [lo, hi] = std::minmax_element(sample_radii.begin(), sample_radii.end());
  if (!(*lo > 0.0) || *hi / *lo < 1e4 * (1.0 - 1e-12)) {
    throw Error(ErrorKind::InsufficientDecades, "sample radii must be positive and span at least 4 decades");
  }
  if (samples_per_shell < 4) throw Error(ErrorKind::InvalidRange, "samples_per_shell must be >= 4");

  const std::vector<Vec3> dirs = sample_directions(n, samples_per_shell, kernel.direction);
  KernelConditionReport rep;
  for (double r : sample_radii) {
    for (const Vec3& e : dirs) {
      Vec3 y{};
      for (int d = 0; d < n; ++d) y[d] = r * e[d];
      const double kv = eval_checked(kernel.kernel, y, n);
      rep.size_sup = std::max(rep.size_sup, std::pow(r, n) * std::abs(kv));

      const double h = 1e-5 * r;
      double g2 = 0.0;
      for (int d = 0; d < n; ++d) {
        Vec3 yp = y;
        Vec3 ym = y;
        yp[d] += h;
        ym[d] -= h;
        const double gd = (eval_checked(kernel.kernel, yp, n) - eval_checked(kernel.kernel, ym, n)) / (2.0 * h);
        g2 += gd * gd;
      }
      rep.gradient_sup = std::max(rep.gradient_sup, std::pow(r, n + 1) * std::sqrt(g2));
      ++rep.samples;
    }
  }

  if (kernel.multiplier) {
    rep.fourier_from_multiplier = true;
    for (double r : sample_radii) {
      for (const Vec3& e : dirs) {
        Vec3 xi{};
        for (int d = 0; d < n; ++d) xi[d] = r * e[d];
        const auto m = (*kernel.multiplier)({xi.data(), static_cast<std::size_t>(n)});
        if (!std::isfinite(std::abs(m))) throw Error(ErrorKind::Evaluation, "multiplier evaluation is not finite");
        rep.fourier_sup = std::max(rep.fourier_sup, std::abs(m));
      }
    }
  } else {
    // |K^| at a handful of frequencies; the truncation window is placed
    // relative to 1/|xi| so homogeneous kernels are probed consistently.
    const std::vector<Vec3> fdirs = sample_directions(n, 4, kernel.direction);
    for (double mag : {0.1, 1.0, 10.0}) {
      for (const Vec3& e : fdirs) {
        Vec3 xi{};
        for (int d = 0; d < n; ++d) xi[d] = mag * e[d];
        const auto v = truncated_fourier_transform(kernel, {xi.data(), static_cast<std::size_t>(n)}, 1e-4 / mag,
                                                   40.0 / mag, 128);
        rep.fourier_sup = std::max(rep.fourier_sup, std::abs(v));
      }
    }
  }
  rep.size_ok = rep.size_sup <= caps.size;
  rep.gradient_ok = rep.gradient_sup <= caps.gradient;
  rep.fourier_ok = rep.fourier_sup <= caps.fourier;
  return rep;
}

SpectralResult apply_spectral(const KernelSpec& kernel, const GridFunction& f, const SpectralOptions& options) {
  if (!kernel.multiplier) throw Error(ErrorKind::MissingMultiplier, "kernel '" + kernel.label + "' has no multiplier");
  const CartesianGrid* g = f.cartesian();
  if (!g) throw Error(ErrorKind::DimensionMismatch, "spectral application needs a Cartesian grid function");
  if (g->dim() != kernel.dim) throw Error(ErrorKind::DimensionMismatch, "kernel and grid dimensions differ");

  const int n = g->dim();
  const int m = g->points_per_axis();
  const std::size_t total = g->size();
  const auto values = f.values();

  double peak = 0.0;
  for (double v : values) peak = std::max(peak, std::abs(v));
  double edge = 0.0;
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t rem = k;
    bool boundary = false;
    for (int d = 0; d < n; ++d) {
      const auto idx = static_cast<int>(rem % static_cast<std::size_t>(m));
      rem /= static_cast<std::size_t>(m);
      boundary = boundary || idx == 0 || idx == m - 1;
    }
    if (boundary) edge = std::max(edge, std::abs(values[k]));
  }

  std::vector<std::string> warnings;
  const double tail = peak > 0.0 ? edge / peak : 0.0;
  if (tail > options.leakage_error_threshold) {
    throw Error(ErrorKind::SupportLeakage, "boundary/peak ratio " + std::to_string(tail) + " exceeds threshold");
  }
  if (tail > options.leakage_tolerance) {
    warnings.push_back("support-leakage: boundary/peak ratio " + std::to_string(tail));
  }

  fftw_complex* buf = fftw_alloc_complex(total);
  if (!buf) throw Error(ErrorKind::Evaluation, "FFT buffer allocation failed");
  std::array<int, 3> dims{m, m, m};
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  {
    std::lock_guard lock(fftw_planner_mutex());
    fwd = fftw_plan_dft(n, dims.data(), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft(n, dims.data(), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  for (std::size_t k = 0; k < total; ++k) {
    buf[k][0] = values[k];
    buf[k][1] = 0.0;
  }
  fftw_execute(fwd);

  // Frequencies 2 pi k / (2L); the unpaired Nyquist index is zeroed so the
  // discrete symbol stays Hermitian.
  const double dxi = std::numbers::pi / g->half_extent();
  const auto& symbol = *kernel.multiplier;
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t rem = k;
    Vec3 xi{};
    bool nyquist = false;
    for (int d = n - 1; d >= 0; --d) {
      int idx = static_cast<int>(rem % static_cast<std::size_t>(m));
      rem /= static_cast<std::size_t>(m);
      if (idx >= m / 2) idx -= m;
      nyquist = nyquist || idx == -m / 2;
      xi[d] = dxi * idx;
    }
    std::complex<double> mult = 0.0;
    if (!nyquist) mult = symbol({xi.data(), static_cast<std::size_t>(n)});
    const std::complex<double> z = mult * std::complex<double>(buf[k][0], buf[k][1]);
    buf[k][0] = z.real();
    buf[k][1] = z.imag();
  }
  fftw_execute(bwd);

  const double scale = 1.0 / static_cast<double>(total);
  std::vector<double> out(total);
  double re_max = 0.0;
  double im_max = 0.0;
  for (std::size_t k = 0; k < total; ++k) {
    out[k] = buf[k][0] * scale;
    re_max = std::max(re_max, std::abs(out[k]));
    im_max = std::max(im_max, std::abs(buf[k][1] * scale));
  }
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  fftw_free(buf);

  const double residue = re_max > 0.0 ? im_max / re_max : im_max;
  if (residue > options.imaginary_tolerance) {
    warnings.push_back("imaginary-residue: " + std::to_string(residue));
  }
  return SpectralResult{GridFunction(f.grid(), std::move(out)), residue, tail, std::move(warnings)};
}

PvResult apply_pv_direct(const KernelSpec& kernel, const ScalarField& f, std::span<const Vec3> eval_points, double eps,
                         double outer_radius, int quad_resolution) {
  if (!(eps > 0.0) || !(eps < outer_radius)) throw Error(ErrorKind::InvalidWindow, "need 0 < eps < R");
  const int n = kernel.dim;
  const auto nd = static_cast<std::size_t>(n);
  const AngularRule ang = angular_rule(n, quad_resolution);
  const double density = std::max(1.0, quad_resolution / 64.0);

  struct RadialNode {
    double r;
    double w;  // includes r^{n-1} dr
    bool inner;
  };
  std::vector<RadialNode> radial;
  const bool subtract = kernel.mean_zero;
  const double inner_hi = subtract ? std::min(1.0, outer_radius) : outer_radius;
  const double split = subtract ? inner_hi : std::min(1.0, outer_radius);
  // Inner region in log r (geometric grading toward eps), outer region in r.
  if (eps < split) {
    const int panels = static_cast<int>(std::ceil(density * std::log(split / eps))) + 1;
    const quad::Rule rule = quad::composite_gauss_legendre(std::log(eps), std::log(split), panels, 8);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double r = std::exp(rule.nodes[i]);
      radial.push_back({r, rule.weights[i] * std::pow(r, n), subtract});
    }
  }
  const double lo = std::max(split, eps);
  if (outer_radius > lo) {
    const int panels = static_cast<int>(std::ceil(density * (outer_radius - lo))) + 1;
    const quad::Rule rule = quad::composite_gauss_legendre(lo, outer_radius, panels, 8);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      radial.push_back({rule.nodes[i], rule.weights[i] * std::pow(rule.nodes[i], n - 1), false});
    }
  }

  // Kernel values on the quadrature nodes do not depend on x.
  std::vector<double> kvals(radial.size() * ang.nodes.size());
  for (std::size_t i = 0; i < radial.size(); ++i) {
    for (std::size_t j = 0; j < ang.nodes.size(); ++j) {
      Vec3 y{};
      for (int d = 0; d < n; ++d) y[d] = radial[i].r * ang.nodes[j][d];
      kvals[i * ang.nodes.size() + j] = eval_checked(kernel.kernel, y, n) * ang.weights[j] * radial[i].w;
    }
  }

  PvResult out;
  out.subtracted = subtract;
  out.values.reserve(eval_points.size());
  for (const Vec3& x : eval_points) {
    const double fx = f({x.data(), nd});
    double acc = 0.0;
    for (std::size_t i = 0; i < radial.size(); ++i) {
      double shell = 0.0;
      for (std::size_t j = 0; j < ang.nodes.size(); ++j) {
        Vec3 z{};
        for (int d = 0; d < n; ++d) z[d] = x[d] - radial[i].r * ang.nodes[j][d];
        double v = f({z.data(), nd});
        if (radial[i].inner) v -= fx;
        shell += v * kvals[i * ang.nodes.size() + j];
      }
      acc += shell;
    }
    if (!std::isfinite(acc)) throw Error(ErrorKind::Evaluation, "principal-value quadrature is not finite");
    out.values.push_back(acc);
  }
  return out;
}

}  // namespace swlab
