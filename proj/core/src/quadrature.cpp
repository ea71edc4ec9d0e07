#include "swlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "swlab/error.hpp"

namespace swlab::quad {

Rule gauss_legendre(int order) {
  if (order < 1) throw Error(ErrorKind::InvalidRange, "Gauss-Legendre order must be >= 1");
  Rule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess for the i-th root, counted from the right.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = order * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[order - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[order - 1 - i] = w;
    rule.weights[i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

Rule composite_gauss_legendre(double a, double b, int panels, int order) {
  if (panels < 1) throw Error(ErrorKind::InvalidRange, "panel count must be >= 1");
  const Rule base = gauss_legendre(order);
  Rule rule;
  rule.nodes.reserve(static_cast<std::size_t>(panels) * order);
  rule.weights.reserve(rule.nodes.capacity());
  const double width = (b - a) / panels;
  for (int k = 0; k < panels; ++k) {
    const double lo = a + k * width;
    const double mid = lo + 0.5 * width;
    for (int i = 0; i < order; ++i) {
      rule.nodes.push_back(mid + 0.5 * width * base.nodes[i]);
      rule.weights.push_back(0.5 * width * base.weights[i]);
    }
  }
  return rule;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, std::span<const double> breakpoints,
                          double* error_estimate) {
  std::vector<double> cuts{a};
  for (double c : breakpoints) {
    if (c > std::min(a, b) && c < std::max(a, b)) cuts.push_back(c);
  }
  cuts.push_back(b);
  std::sort(cuts.begin() + 1, cuts.end() - 1);
  if (b < a) std::sort(cuts.begin() + 1, cuts.end() - 1, std::greater<>());

  struct Panel {
    double a, b, value, error;
  };
  const auto eval = [&f](double lo, double hi) {
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, lo, hi, 0, 0.0, &err);
    return Panel{lo, hi, v, std::abs(err)};
  };
  const auto worse = [](const Panel& x, const Panel& y) { return x.error < y.error; };
  std::vector<Panel> heap;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) heap.push_back(eval(cuts[k], cuts[k + 1]));
  std::make_heap(heap.begin(), heap.end(), worse);

  // Global bisection of the worst panel until the summed error estimate
  // meets the tolerance or no panel can be usefully split.
  constexpr std::size_t kMaxPanels = 4000;
  double total = 0.0;
  double err_total = 0.0;
  const auto sums = [&] {
    total = 0.0;
    err_total = 0.0;
    for (const Panel& p : heap) {
      total += p.value;
      err_total += p.error;
    }
  };
  sums();
  while (heap.size() < kMaxPanels && err_total > rel_tol * std::abs(total)) {
    std::pop_heap(heap.begin(), heap.end(), worse);
    const Panel worst = heap.back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(std::abs(worst.b - worst.a) > 8.0 * std::numeric_limits<double>::epsilon() * std::abs(mid))) {
      heap.push_back(worst);
      break;
    }
    const Panel left = eval(worst.a, mid);
    const Panel right = eval(mid, worst.b);
    total += left.value + right.value - worst.value;
    err_total += left.error + right.error - worst.error;
    heap.back() = left;
    std::push_heap(heap.begin(), heap.end(), worse);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), worse);
    if (heap.size() % 256 == 0) sums();
  }
  sums();
  if (!std::isfinite(total)) throw Error(ErrorKind::Evaluation, "adaptive quadrature produced a non-finite value");
  if (error_estimate) *error_estimate = err_total;
  return total;
}

double sphere_measure(int n) {
  // 2 pi^{n/2} / Gamma(n/2)
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

}  // namespace swlab::quad
