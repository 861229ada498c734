#include "mahler/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mahler/errors.hpp"
#include "mahler/zeta.hpp"

namespace mahler {

namespace {

void validate_spec(const ExperimentSpec& spec) {
  if (spec.polys.empty()) throw ComputationError("experiment needs at least one polynomial");
  const std::size_t n = validate_measure_input(spec.kind, spec.polys);
  if (n < 2) throw ComputationError("limit experiments need polynomials in at least 2 variables");
  if (spec.b_schedule.empty()) throw ComputationError("empty b schedule");
  for (std::size_t i = 0; i < spec.b_schedule.size(); ++i) {
    if (spec.b_schedule[i] < 1) throw ComputationError("b values must be positive");
    if (i > 0 && spec.b_schedule[i] <= spec.b_schedule[i - 1])
      throw ComputationError("b schedule must be strictly increasing");
  }
  if (spec.family.type == Family::Type::Matrix && spec.family.m < 2)
    throw ComputationError("matrix family needs m >= 2");
}

}  // namespace

std::vector<ConvergenceRecord> run_convergence(const ExperimentSpec& spec) {
  validate_spec(spec);
  const std::size_t n = spec.polys.front().nvars();
  const std::size_t m = spec.family.type == Family::Type::Vector ? 1 : spec.family.m;

  std::vector<ConvergenceRecord> records;
  records.reserve(spec.b_schedule.size());
  std::size_t skipped = 0;
  for (std::int64_t b : spec.b_schedule) {
    const mpz_class bz(static_cast<long>(b));
    TorusHom a = base_b_family(n, m, bz);
    ConvergenceRecord rec;
    rec.b = b;
    rec.target_vars = m;
    rec.mu = boyd_height(a);
    if (!(rec.mu.is_finite() && rec.mu.value() == bz))
      throw ComputationError("height certification failed: mu = " + rec.mu.to_string() + " for b = " +
                             std::to_string(b));
    rec.reference = spec.reference;

    std::vector<LaurentPoly> reduced;
    bool zero = false;
    for (const auto& p : spec.polys) {
      reduced.push_back(substitute(p, a));
      zero = zero || reduced.back().is_zero();
    }
    if (zero) {
      ++skipped;
      records.push_back(std::move(rec));
      continue;
    }
    if (m == 1) {
      rec.estimate = spec.kind.tag == MeasureKind::Tag::Classic
                         ? mahler1_exact(reduced.front(), spec.params.root_tol)
                         : circle_measure(spec.kind, reduced, spec.params.panel_tol);
    } else {
      rec.estimate = torus_qmc(spec.kind, reduced, spec.params.qmc);
    }
    rec.estimate->detail["b"] = b;
    if (rec.reference) rec.deviation = std::abs(rec.estimate->value - *rec.reference);
    records.push_back(std::move(rec));
  }
  if (skipped == records.size())
    throw ComputationError("every step of the schedule substituted to the zero polynomial");
  return records;
}

std::vector<ConvergenceRecord> matrix_convergence(const ExperimentSpec& spec) {
  if (spec.family.type != Family::Type::Matrix || spec.family.m < 2)
    throw ComputationError("matrix_convergence needs a matrix family with m >= 2");
  return run_convergence(spec);
}

bool Report::all_pass() const {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.pass; });
}

const ReferenceConstants& reference_constants() {
  static const ReferenceConstants constants = [] {
    constexpr unsigned digits = 12;
    HighPrecision z2 = zeta(2, digits), z3 = zeta(3, digits), z5 = zeta(5, digits);
    HighPrecision pi = pi_value(digits);
    HighPrecision pi2 = pi * pi, pi4 = pi2 * pi2;
    ReferenceConstants c{};
    c.classic_linear_3 = static_cast<double>(7 * z3 / (2 * pi2));
    c.max_linear_4 = static_cast<double>(9 * z3 / (2 * pi2) - 93 * z5 / (2 * pi4));
    c.prod_cubed_z_minus_1 = static_cast<double>(-3 * z3 / 2);
    c.prod_linear_2 = static_cast<double>(HighPrecision(9) / 2 * log(2 * z2) - HighPrecision(15) / 4 * z3);
    return c;
  }();
  return constants;
}

std::vector<IdentityCase> identity_cases() {
  const auto& c = reference_constants();
  std::vector<IdentityCase> cases;

  QmcConfig big;
  big.samples = 1u << 22;
  big.shifts = 8;

  {
    IdentityCase ic;
    ic.name = "prod-(z-1)^3";
    ic.kind = MeasureKind::prod(3);
    ic.polys.assign(3, parse_poly("Z1 - 1"));
    ic.reference_value = c.prod_cubed_z_minus_1;
    ic.tolerance = 1e-4;
    ic.method = Method::CircleQuadrature;
    cases.push_back(std::move(ic));
  }
  {
    IdentityCase ic;
    ic.name = "classic-linear-3";
    ic.kind = MeasureKind::classic();
    ic.polys = {parse_poly("Z1 + Z2 + Z3 + 1")};
    ic.reference_value = c.classic_linear_3;
    ic.tolerance = 1e-2;
    ic.method = Method::BoydLawtonLimit;
    ic.params.b = 50;
    cases.push_back(std::move(ic));
  }
  {
    IdentityCase ic;
    ic.name = "classic-linear-3-qmc";
    ic.kind = MeasureKind::classic();
    ic.polys = {parse_poly("Z1 + Z2 + Z3 + 1")};
    ic.reference_value = c.classic_linear_3;
    ic.tolerance = 2e-2;
    ic.method = Method::TorusQMC;
    ic.params.qmc = big;
    ic.full_only = true;
    cases.push_back(std::move(ic));
  }
  {
    IdentityCase ic;
    ic.name = "max-4-linear";
    ic.kind = MeasureKind::max(4);
    ic.polys = {parse_poly("Z1 + 1", 4), parse_poly("Z2 + 1", 4), parse_poly("Z3 + 1", 4), parse_poly("Z4 + 1", 4)};
    ic.reference_value = c.max_linear_4;
    ic.tolerance = 2e-2;
    ic.method = Method::BoydLawtonLimit;
    ic.params.b = 20;
    ic.full_only = true;
    cases.push_back(std::move(ic));
  }
  {
    IdentityCase ic;
    ic.name = "prod-linear-2";
    ic.kind = MeasureKind::prod(3);
    ic.polys.assign(3, parse_poly("Z1 + Z2 + 2"));
    ic.reference_value = c.prod_linear_2;
    ic.tolerance = 3e-2;
    ic.method = Method::TorusQMC;
    ic.params.qmc = big;
    ic.full_only = true;
    cases.push_back(std::move(ic));
  }
  return cases;
}

Report identity_suite(bool full) {
  Report report;
  for (const auto& ic : identity_cases()) {
    if (ic.full_only && !full) continue;
    CheckResult r;
    r.name = ic.name;
    r.reference = ic.reference_value;
    r.tolerance = ic.tolerance;
    r.method = method_name(ic.method);
    try {
      MeasureEstimate est = measure(ic.kind, ic.polys, ic.method, ic.params);
      r.computed = est.value;
      r.error_estimate = est.error_estimate;
      r.pass = std::abs(est.value - ic.reference_value) <= ic.tolerance;
    } catch (const Error& e) {
      r.computed = std::nan("");
      r.note = e.what();
      r.pass = false;
    }
    report.results.push_back(std::move(r));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Exact property checks

namespace {

LaurentPoly random_poly(std::mt19937_64& rng, std::size_t nvars, int max_terms, int max_exp) {
  std::uniform_int_distribution<int> nterms(1, max_terms), ex(-max_exp, max_exp), num(-9, 9), den(1, 6);
  LaurentPoly p(nvars);
  int count = nterms(rng);
  for (int t = 0; t < count; ++t) {
    ExponentVector e(nvars);
    for (auto& x : e) x = ex(rng);
    mpq_class re(num(rng), den(rng)), im(num(rng) % 3, den(rng));
    re.canonicalize();
    im.canonicalize();
    p.add_term(e, Coefficient(re, im));
  }
  return p;
}

TorusHom random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int bound) {
  std::uniform_int_distribution<int> d(-bound, bound);
  TorusHom a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a(i, j) = d(rng);
  return a;
}

bool witness_ok(const TorusHom& a, const BoydHeight& h) {
  if (h.is_infinite()) return true;
  if (!h.witness()) return false;
  const auto& v = *h.witness();
  if (sup_norm(v) != h.value()) return false;
  return compose(TorusHom::row(v), a) == TorusHom(1, a.cols());
}

CheckResult count_check(std::string name, std::size_t cases, std::size_t failures) {
  CheckResult r;
  r.name = std::move(name);
  r.computed = static_cast<double>(failures);
  r.reference = 0.0;
  r.method = "exact";
  r.pass = failures == 0;
  r.note = std::to_string(cases) + " cases";
  return r;
}

}  // namespace

Report exact_property_suite() {
  Report report;
  std::mt19937_64 rng(20240611);

  {
    std::size_t cases = 0, fails = 0;
    for (std::size_t n = 2; n <= 4; ++n)
      for (std::size_t m = 1; m <= 3; ++m)
        for (long b = 1; b <= 10; ++b) {
          ++cases;
          TorusHom a = base_b_family(n, m, b);
          BoydHeight h = boyd_height(a);
          if (!(h.is_finite() && h.value() == b && witness_ok(a, h))) ++fails;
        }
    report.results.push_back(count_check("height-base-b", cases, fails));
  }
  {
    std::size_t cases = 0, fails = 0;
    std::uniform_int_distribution<int> d(-20, 20);
    for (std::size_t n = 2; n <= 4; ++n)
      for (int trial = 0; trial < 25; ++trial) {
        IntVector r(n);
        for (auto& x : r) x = d(rng);
        r[static_cast<std::size_t>(trial) % n] = 0;
        ++cases;
        BoydHeight h = boyd_height(TorusHom::column(r));
        if (!(h.is_finite() && h.value() == 1)) ++fails;
      }
    report.results.push_back(count_check("height-zero-component", cases, fails));
  }
  {
    std::size_t cases = 0, fails = 0;
    std::uniform_int_distribution<int> d(-20, 20);
    for (std::size_t n = 2; n <= 4; ++n)
      for (int trial = 0; trial < 25; ++trial) {
        IntVector r(n);
        for (auto& x : r) x = d(rng);
        ++cases;
        BoydHeight h = boyd_height(TorusHom::column(r));
        BoydHeight hp = boyd_height(TorusHom::column(sign_split(r).r_plus));
        if (!(h == hp) || !witness_ok(TorusHom::column(r), h)) ++fails;
      }
    report.results.push_back(count_check("height-sign-invariance", cases, fails));
  }
  {
    std::size_t cases = 0, fails = 0;
    std::uniform_int_distribution<int> dim(1, 3);
    for (int trial = 0; trial < 60; ++trial) {
      auto n = static_cast<std::size_t>(dim(rng)), m = static_cast<std::size_t>(dim(rng)),
           l = static_cast<std::size_t>(dim(rng));
      LaurentPoly p = random_poly(rng, n, 6, 8);
      TorusHom a = random_matrix(rng, n, m, 4), b = random_matrix(rng, m, l, 4);
      ++cases;
      if (!(substitute(substitute(p, a), b) == substitute(p, compose(a, b)))) ++fails;
    }
    report.results.push_back(count_check("substitution-functoriality", cases, fails));
  }
  {
    std::size_t cases = 0, fails = 0;
    std::uniform_int_distribution<int> dim(1, 4);
    for (int trial = 0; trial < 60; ++trial) {
      auto n = static_cast<std::size_t>(dim(rng));
      LaurentPoly p = random_poly(rng, n, 6, 8);
      ++cases;
      if (!(parse_poly(format_poly(p), n) == p)) ++fails;
    }
    report.results.push_back(count_check("format-round-trip", cases, fails));
  }
  return report;
}

}  // namespace mahler
