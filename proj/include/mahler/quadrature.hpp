#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace mahler {

/// n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  explicit GaussLegendre(int n);

  std::vector<double> nodes;
  std::vector<double> weights;

  double integrate(const std::function<double(double)>& f, double a, double b) const;
};

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;  // sum over accepted intervals of |coarse - refined|
  std::size_t evaluations = 0;
  std::size_t intervals = 0;
};

/// Bisection-refined Gauss-Legendre on [a, b]. An interval is accepted when
/// the rule on it and on its two halves agree to tol_density * width (or to
/// a rounding floor of 64 eps), or
/// when halving would drop below min_width. Bisection makes the refinement
/// geometric (ratio 1/2) toward endpoint singularities.
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double tol_density, double min_width, const GaussLegendre& rule);

}  // namespace mahler
