#include "mahler/quadrature.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>

namespace mahler {

GaussLegendre::GaussLegendre(int n) : nodes(n), weights(n) {
  // Newton iteration on P_n from the Chebyshev-like initial guess.
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = w;
  }
}

double GaussLegendre::integrate(const std::function<double(double)>& f, double a, double b) const {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(mid + half * nodes[i]);
  return s * half;
}

namespace {

void refine(const std::function<double(double)>& f, double a, double b, double whole, double tol_density,
            double min_width, const GaussLegendre& rule, AdaptiveResult& out) {
  const double mid = 0.5 * (a + b);
  const double left = rule.integrate(f, a, mid);
  const double right = rule.integrate(f, mid, b);
  out.evaluations += 2 * rule.nodes.size();
  const double diff = std::abs(left + right - whole);
  const double width = b - a;
  // Rounding in f near a zero of P leaves ~1e-15 of noise in each interval
  // regardless of its width; the floor stops refinement from chasing it.
  const double floor = 64.0 * DBL_EPSILON * std::max(1.0, std::abs(whole));
  if (diff <= std::max(tol_density * width, floor) || 0.5 * width < min_width || !std::isfinite(diff)) {
    out.value += left + right;
    out.error += std::isfinite(diff) ? diff : 0.0;
    ++out.intervals;
    return;
  }
  refine(f, a, mid, left, tol_density, min_width, rule, out);
  refine(f, mid, b, right, tol_density, min_width, rule, out);
}

}  // namespace

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double tol_density, double min_width, const GaussLegendre& rule) {
  AdaptiveResult out;
  if (!(b > a)) return out;
  const double whole = rule.integrate(f, a, b);
  out.evaluations += rule.nodes.size();
  refine(f, a, b, whole, tol_density, min_width, rule, out);
  return out;
}

}  // namespace mahler
