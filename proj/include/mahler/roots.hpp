#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace mahler {

struct UnivariateTerm {
  std::int64_t exponent;  // >= 0
  std::complex<double> coeff;
};

struct RootOptions {
  double root_tol = 1e-12;
  int max_iterations = 500;
};

struct RootResult {
  /// All roots with multiplicity. Approximations that form a cluster around
  /// a multiple root are replaced by the cluster centroid.
  std::vector<std::complex<double>> roots;
  std::complex<double> leading;  // coefficient of the highest power
  std::size_t degree = 0;
  std::size_t zero_roots = 0;
  std::size_t clusters = 0;      // clusters with more than one member
  double max_residual = 0.0;     // max_i |Q(a_i)| / sum_k |c_k| |a_i|^k
  int iterations = 0;
};

/// Simultaneous (Aberth-Ehrlich) iteration started from Newton-polygon
/// radii. Throws ComputationError if some relative residual is still above
/// root_tol after max_iterations sweeps.
RootResult find_roots(std::vector<UnivariateTerm> terms, const RootOptions& opts = {});

}  // namespace mahler
