#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "mahler/laurent.hpp"

namespace mahler {

/// Which integrand is averaged over the torus: log|P| (Classic), the
/// pointwise max of log|P_i| (Max), or the product of log|P_i| (Prod).
struct MeasureKind {
  enum class Tag { Classic, Max, Prod };

  Tag tag = Tag::Classic;
  std::size_t k = 1;

  static MeasureKind classic() { return {Tag::Classic, 1}; }
  static MeasureKind max(std::size_t k) { return {Tag::Max, k}; }
  static MeasureKind prod(std::size_t k) { return {Tag::Prod, k}; }

  std::size_t arity() const { return k; }
  std::string name() const;

  friend bool operator==(const MeasureKind&, const MeasureKind&) = default;
};

enum class Method { JensenExact, CircleQuadrature, TorusQMC, BoydLawtonLimit };

std::string method_name(Method m);

using DetailValue = std::variant<std::int64_t, std::uint64_t, double, std::string>;
using Detail = std::map<std::string, DetailValue>;

struct MeasureEstimate {
  double value = 0.0;
  double error_estimate = 0.0;  // empirical, not a certified bound
  Method method = Method::JensenExact;
  Detail detail;
};

struct QmcConfig {
  std::uint64_t samples = 1u << 20;
  std::uint64_t shifts = 8;
  std::uint64_t seed = 0x5eed;
  double clip = 1e-300;  // log|P| is clamped below at log(clip)

  void validate() const;
};

/// m_1 by Jensen's formula: log|a_d| + sum of log|alpha| over roots outside
/// the unit disk.
MeasureEstimate mahler1_exact(const LaurentPoly& p, double root_tol = 1e-12);

/// One-variable Classic/Max/Prod measure by Gauss-Legendre quadrature on
/// panels split at the angles of roots lying on the unit circle.
MeasureEstimate circle_measure(const MeasureKind& kind, const std::vector<LaurentPoly>& polys,
                               double panel_tol = 1e-10);

/// Randomly shifted rank-1 (Kronecker) lattice rule on [0,1)^n. The value is
/// the mean over shifts and the error estimate their sample standard
/// deviation. Deterministic in (polys, cfg) whatever the thread count.
MeasureEstimate torus_qmc(const MeasureKind& kind, const std::vector<LaurentPoly>& polys, const QmcConfig& cfg);

/// Substitutes r = (1, b, ..., b^{n-1}) into every polynomial and takes the
/// one-variable measure of the result (Jensen for Classic, circle
/// quadrature otherwise). `tol` is the root tolerance or panel tolerance.
MeasureEstimate boyd_lawton_estimate(const MeasureKind& kind, const std::vector<LaurentPoly>& polys,
                                     std::int64_t b, double tol = 1e-10);

struct MeasureParams {
  double root_tol = 1e-12;
  double panel_tol = 1e-10;
  QmcConfig qmc;
  std::int64_t b = 20;
};

Method default_method(const MeasureKind& kind, std::size_t nvars);

MeasureEstimate measure(const MeasureKind& kind, const std::vector<LaurentPoly>& polys, Method method,
                        const MeasureParams& params = {});

/// Throws ComputationError unless polys match the kind's arity, are nonzero
/// and share one variable count. Returns that count.
std::size_t validate_measure_input(const MeasureKind& kind, const std::vector<LaurentPoly>& polys);

}  // namespace mahler
