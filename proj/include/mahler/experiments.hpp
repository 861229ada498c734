#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mahler/laurent.hpp"
#include "mahler/measures.hpp"
#include "mahler/torushom.hpp"

namespace mahler {

struct Family {
  enum class Type { Vector, Matrix };

  Type type = Type::Vector;
  std::size_t m = 1;  // target torus dimension; 1 for Vector

  static Family vector() { return {Type::Vector, 1}; }
  static Family matrix(std::size_t m) { return {Type::Matrix, m}; }
};

struct ExperimentSpec {
  MeasureKind kind = MeasureKind::classic();
  std::vector<LaurentPoly> polys;
  Family family = Family::vector();
  std::vector<std::int64_t> b_schedule;  // strictly increasing
  std::optional<double> reference;
  MeasureParams params;
};

/// One step of a limit experiment, using the base-b matrix with parameter b.
struct ConvergenceRecord {
  std::int64_t b = 0;
  BoydHeight mu = BoydHeight::infinite();
  std::size_t target_vars = 1;
  std::optional<MeasureEstimate> estimate;  // empty when the step was skipped
  std::optional<double> reference;
  std::optional<double> deviation;

  bool skipped() const { return !estimate.has_value(); }
};

/// Runs the schedule in order. Every record's matrix height is recomputed
/// and must equal b. Steps whose substitution is the zero polynomial are
/// recorded as skipped; if all are skipped a ComputationError is thrown.
std::vector<ConvergenceRecord> run_convergence(const ExperimentSpec& spec);

/// run_convergence restricted to matrix families with m >= 2.
std::vector<ConvergenceRecord> matrix_convergence(const ExperimentSpec& spec);

struct IdentityCase {
  std::string name;
  MeasureKind kind;
  std::vector<LaurentPoly> polys;
  double reference_value = 0.0;
  double tolerance = 0.0;
  Method method = Method::JensenExact;
  MeasureParams params;
  bool full_only = false;  // needs T^2..T^4 quasi-Monte Carlo
};

struct CheckResult {
  std::string name;
  double computed = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  double error_estimate = 0.0;
  std::string method;
  bool pass = false;
  std::string note;
};

struct Report {
  std::vector<CheckResult> results;

  bool all_pass() const;
};

/// Reference constants for the closed-form identities, materialized once
/// from zeta() at 12 digits.
struct ReferenceConstants {
  double classic_linear_3;   // 7 zeta(3) / (2 pi^2)
  double max_linear_4;       // 9 zeta(3) / (2 pi^2) - 93 zeta(5) / (2 pi^4)
  double prod_cubed_z_minus_1;  // -3 zeta(3) / 2
  double prod_linear_2;      // (9/2) log(2 zeta(2)) - (15/4) zeta(3)
};

const ReferenceConstants& reference_constants();

std::vector<IdentityCase> identity_cases();

/// Computes every identity case (the full_only ones only when `full`).
Report identity_suite(bool full = true);

/// Exact checks on heights and polynomial algebra; deterministic.
Report exact_property_suite();

}  // namespace mahler
