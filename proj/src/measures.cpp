#include "mahler/measures.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>

#include "mahler/errors.hpp"
#include "mahler/parallel.hpp"
#include "mahler/quadrature.hpp"
#include "mahler/roots.hpp"
#include "mahler/torushom.hpp"

namespace mahler {

std::string MeasureKind::name() const {
  switch (tag) {
    case Tag::Classic: return "classic";
    case Tag::Max: return "max";
    case Tag::Prod: return "prod";
  }
  return "?";
}

std::string method_name(Method m) {
  switch (m) {
    case Method::JensenExact: return "jensen";
    case Method::CircleQuadrature: return "circle";
    case Method::TorusQMC: return "qmc";
    case Method::BoydLawtonLimit: return "boyd-lawton";
  }
  return "?";
}

std::size_t validate_measure_input(const MeasureKind& kind, const std::vector<LaurentPoly>& polys) {
  if (kind.k == 0) throw ComputationError("measure kind needs k >= 1");
  if (kind.tag == MeasureKind::Tag::Classic && kind.k != 1)
    throw ComputationError("classic measure takes exactly one polynomial");
  if (polys.size() != kind.k)
    throw ComputationError("k mismatch: " + kind.name() + " expects " + std::to_string(kind.k) +
                           " polynomials, got " + std::to_string(polys.size()));
  const std::size_t n = polys.front().nvars();
  for (const auto& p : polys) {
    if (p.is_zero()) throw ComputationError("zero polynomial has no Mahler measure");
    if (p.nvars() != n) throw ComputationError("polynomials have different numbers of variables");
  }
  return n;
}

namespace {

// Neumaier-compensated running sum.
struct CompensatedSum {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

std::vector<UnivariateTerm> univariate_terms(const LaurentPoly& q) {
  std::vector<UnivariateTerm> terms;
  terms.reserve(q.size());
  for (const auto& [e, c] : q.terms()) terms.push_back({e[0], c.to_complex()});
  return terms;
}

RootResult roots_of(const LaurentPoly& p, double root_tol) {
  MonomialSplit split = strip_monomial(p);
  RootOptions opts;
  opts.root_tol = root_tol;
  return find_roots(univariate_terms(split.q), opts);
}

// Floor applied to log|P| so that an exact zero hit by a node stays finite.
const double kLogFloor = std::log(DBL_MIN);

double combine(MeasureKind::Tag tag, const double* logs, std::size_t k) {
  switch (tag) {
    case MeasureKind::Tag::Classic: return logs[0];
    case MeasureKind::Tag::Max: return *std::max_element(logs, logs + k);
    case MeasureKind::Tag::Prod: {
      double p = 1.0;
      for (std::size_t i = 0; i < k; ++i) p *= logs[i];
      return p;
    }
  }
  return 0.0;
}

}  // namespace

MeasureEstimate mahler1_exact(const LaurentPoly& p, double root_tol) {
  if (p.nvars() != 1) throw ComputationError("method requires 1 variable");
  if (p.is_zero()) throw ComputationError("zero polynomial has no Mahler measure");
  RootResult r = roots_of(p, root_tol);
  CompensatedSum s;
  s.add(std::log(std::abs(r.leading)));
  for (const auto& a : r.roots) {
    double m = std::abs(a);
    if (m > 1.0) s.add(std::log(m));
  }
  MeasureEstimate est;
  est.value = s.value();
  est.error_estimate = 0.0;
  est.method = Method::JensenExact;
  est.detail["degree"] = static_cast<std::int64_t>(r.degree);
  est.detail["max_residual"] = r.max_residual;
  est.detail["root_tol"] = root_tol;
  est.detail["iterations"] = static_cast<std::int64_t>(r.iterations);
  est.detail["clusters"] = static_cast<std::int64_t>(r.clusters);
  return est;
}

MeasureEstimate circle_measure(const MeasureKind& kind, const std::vector<LaurentPoly>& polys, double panel_tol) {
  const std::size_t n = validate_measure_input(kind, polys);
  if (n != 1) throw ComputationError("method requires 1 variable");
  if (!(panel_tol > 0)) throw ComputationError("panel_tol must be positive");

  constexpr double kOnCircle = 1e-6;
  constexpr double kMinWidth = 1e-12;

  std::vector<double> breaks;
  std::int64_t span = 1;
  double worst_residual = 0.0;
  for (const auto& p : polys) {
    RootResult r = roots_of(p, 1e-12);
    worst_residual = std::max(worst_residual, r.max_residual);
    span = std::max<std::int64_t>(span, static_cast<std::int64_t>(r.degree));
    for (const auto& a : r.roots) {
      if (std::abs(std::abs(a) - 1.0) >= kOnCircle) continue;
      double t = std::arg(a) / (2.0 * std::numbers::pi);
      if (t < 0) t += 1.0;
      if (t >= 1.0) t = 0.0;
      breaks.push_back(t);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(), [](double a, double b) { return b - a < 1e-14; }),
               breaks.end());
  if (breaks.size() > 1 && breaks.front() + 1.0 - breaks.back() < 1e-14) breaks.pop_back();

  // Panels between consecutive singular angles (cyclically), each cut into
  // pieces no wider than a quarter of the shortest oscillation 1/degree.
  std::vector<std::pair<double, double>> pieces;
  auto add_panel = [&](double a, double b) {
    auto count = static_cast<std::size_t>(std::ceil((b - a) * 4.0 * static_cast<double>(span)));
    count = std::max<std::size_t>(count, 1);
    for (std::size_t i = 0; i < count; ++i)
      pieces.emplace_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(count),
                          i + 1 == count ? b : a + (b - a) * static_cast<double>(i + 1) / static_cast<double>(count));
  };
  if (breaks.empty()) {
    add_panel(0.0, 1.0);
  } else {
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) add_panel(breaks[i], breaks[i + 1]);
    add_panel(breaks.back(), breaks.front() + 1.0);
  }

  std::vector<TorusEvaluator> evals;
  evals.reserve(polys.size());
  for (const auto& p : polys) evals.emplace_back(p);
  const auto tag = kind.tag;
  const std::size_t k = polys.size();
  auto integrand = [&](double t) {
    double logs[64];
    std::vector<double> big;
    double* l = logs;
    if (k > 64) {
      big.resize(k);
      l = big.data();
    }
    for (std::size_t i = 0; i < k; ++i) {
      double v = evals[i].log_abs(std::span<const double>(&t, 1));
      l[i] = std::isfinite(v) ? v : kLogFloor;
    }
    return combine(tag, l, k);
  };

  static const GaussLegendre rule(12);
  std::vector<AdaptiveResult> parts(pieces.size());
  parallel_for(pieces.size(), [&](std::size_t i) {
    parts[i] = integrate_adaptive(integrand, pieces[i].first, pieces[i].second, panel_tol, kMinWidth, rule);
  });

  CompensatedSum value;
  double error = 0.0;
  std::size_t evaluations = 0, intervals = 0;
  for (const auto& part : parts) {
    value.add(part.value);
    error += part.error;
    evaluations += part.evaluations;
    intervals += part.intervals;
  }
  MeasureEstimate est;
  est.value = value.value();
  est.error_estimate = error;
  est.method = Method::CircleQuadrature;
  est.detail["panel_tol"] = panel_tol;
  est.detail["singular_points"] = static_cast<std::int64_t>(breaks.size());
  est.detail["panels"] = static_cast<std::int64_t>(pieces.size());
  est.detail["intervals"] = static_cast<std::int64_t>(intervals);
  est.detail["evaluations"] = static_cast<std::int64_t>(evaluations);
  est.detail["max_residual"] = worst_residual;
  return est;
}

MeasureEstimate boyd_lawton_estimate(const MeasureKind& kind, const std::vector<LaurentPoly>& polys,
                                     std::int64_t b, double tol) {
  const std::size_t n = validate_measure_input(kind, polys);
  if (b < 2) throw ComputationError("boyd-lawton estimate needs b >= 2");
  TorusHom r = base_b_family(n, 1, mpz_class(static_cast<long>(b)));
  BoydHeight mu = boyd_height(r);
  std::vector<LaurentPoly> reduced;
  reduced.reserve(polys.size());
  for (const auto& p : polys) {
    LaurentPoly s = substitute(p, r);
    if (s.is_zero())
      throw ComputationError("substitution with b = " + std::to_string(b) +
                             " produced a zero polynomial; increase b");
    reduced.push_back(std::move(s));
  }
  MeasureEstimate inner = kind.tag == MeasureKind::Tag::Classic ? mahler1_exact(reduced.front(), tol)
                                                                 : circle_measure(kind, reduced, tol);
  MeasureEstimate est = inner;
  est.method = Method::BoydLawtonLimit;
  est.detail["inner_method"] = method_name(inner.method);
  est.detail["b"] = b;
  est.detail["mu"] = mu.to_string();
  return est;
}

Method default_method(const MeasureKind& kind, std::size_t nvars) {
  if (nvars == 1) return kind.tag == MeasureKind::Tag::Classic ? Method::JensenExact : Method::CircleQuadrature;
  return Method::TorusQMC;
}

MeasureEstimate measure(const MeasureKind& kind, const std::vector<LaurentPoly>& polys, Method method,
                        const MeasureParams& params) {
  const std::size_t n = validate_measure_input(kind, polys);
  switch (method) {
    case Method::JensenExact:
      if (kind.tag != MeasureKind::Tag::Classic) throw ComputationError("jensen method requires the classic kind");
      if (n != 1) throw ComputationError("method requires 1 variable");
      return mahler1_exact(polys.front(), params.root_tol);
    case Method::CircleQuadrature:
      if (n != 1) throw ComputationError("method requires 1 variable");
      return circle_measure(kind, polys, params.panel_tol);
    case Method::TorusQMC:
      return torus_qmc(kind, polys, params.qmc);
    case Method::BoydLawtonLimit:
      return boyd_lawton_estimate(kind, polys, params.b,
                                  kind.tag == MeasureKind::Tag::Classic ? params.root_tol : params.panel_tol);
  }
  throw ComputationError("unknown method");
}

}  // namespace mahler
