// Acceptance run: one PASS/FAIL line per criterion, plus indented detail
// lines. Exit status is nonzero when any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "mahler/experiments.hpp"
#include "mahler/laurent.hpp"
#include "mahler/measures.hpp"
#include "mahler/torushom.hpp"
#include "oracles.hpp"

using namespace mahler;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> lines;

  void check(bool ok, const char* fmt, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    lines.push_back(std::string(ok ? "ok   " : "MISS ") + buf);
    pass = pass && ok;
  }
  void info(const char* fmt, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    lines.push_back(std::string("info ") + buf);
  }
};

QmcConfig qmc(std::uint64_t samples, std::uint64_t shifts = 8) {
  QmcConfig c;
  c.samples = samples;
  c.shifts = shifts;
  return c;
}

std::vector<LaurentPoly> copies(const char* text, int k) { return std::vector<LaurentPoly>(k, parse_poly(text)); }

LaurentPoly random_poly(std::mt19937_64& rng, std::size_t n, int terms, int max_exp) {
  std::uniform_int_distribution<int> e(-max_exp, max_exp), c(-5, 5);
  LaurentPoly p(n);
  while (p.is_zero()) {
    for (int t = 0; t < terms; ++t) {
      ExponentVector v(n);
      for (auto& x : v) x = e(rng);
      p.add_term(v, Coefficient(c(rng)));
    }
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

// Product of random elementary matrices (row additions and swaps).
TorusHom random_unimodular(std::mt19937_64& rng, std::size_t n, int ops) {
  TorusHom u = TorusHom::identity(n);
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_int_distribution<int> mult(-2, 2), kind(0, 3);
  for (int k = 0; k < ops; ++k) {
    std::size_t i = idx(rng), j = idx(rng);
    if (i == j) continue;
    TorusHom e = TorusHom::identity(n);
    if (kind(rng) == 0) {
      e(i, i) = 0;
      e(j, j) = 0;
      e(i, j) = 1;
      e(j, i) = 1;
    } else {
      e(i, j) = mult(rng);
    }
    u = compose(u, e);
  }
  return u;
}

bool witness_valid(const TorusHom& a, const BoydHeight& h) {
  if (h.is_infinite()) return true;
  const auto& w = h.witness();
  return w && sup_norm(*w) == h.value() && compose(TorusHom::row(*w), a) == TorusHom(1, a.cols());
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  const double target = reference_constants().classic_linear_3;
  auto p = copies("Z1 + Z2 + Z3 + 1", 1);
  MeasureEstimate bl = boyd_lawton_estimate(MeasureKind::classic(), p, 50, 1e-12);
  o.check(std::abs(bl.value - target) < 1e-2, "boyd-lawton b=50: %.10f, |dev| = %.3g < 1e-2", bl.value,
          std::abs(bl.value - target));
  MeasureEstimate q = torus_qmc(MeasureKind::classic(), p, qmc(1u << 22));
  o.check(std::abs(q.value - target) < 2e-2, "qmc 2^22 x 8: %.10f +- %.2g, |dev| = %.3g < 2e-2", q.value,
          q.error_estimate, std::abs(q.value - target));
  o.info("oracle 7 zeta(3) / (2 pi^2) = %.12f", 7 * oracle::zeta3() / (2 * oracle::pi * oracle::pi));
  return o;
}

Outcome criterion2() {
  Outcome o;
  const double target = reference_constants().prod_cubed_z_minus_1;
  MeasureEstimate e = circle_measure(MeasureKind::prod(3), copies("Z1 - 1", 3));
  o.check(std::abs(e.value - target) < 1e-4, "circle prod(3): %.12f, |dev| = %.3g < 1e-4", e.value,
          std::abs(e.value - target));
  o.info("oracle -3 zeta(3) / 2 = %.12f", -1.5 * oracle::zeta3());
  return o;
}

Outcome criterion3() {
  Outcome o;
  const double target = reference_constants().prod_linear_2;
  const double truth = oracle::prod_linear_2();
  auto p = copies("Z1 + Z2 + 2", 3);
  MeasureEstimate q = torus_qmc(MeasureKind::prod(3), p, qmc(1u << 22));
  o.check(std::abs(q.value - target) < 3e-2, "qmc 2^22 x 8: %.10f +- %.2g, |dev| = %.3g < 3e-2", q.value,
          q.error_estimate, std::abs(q.value - target));

  ExperimentSpec spec;
  spec.kind = MeasureKind::prod(3);
  spec.polys = p;
  spec.family = Family::matrix(2);
  spec.b_schedule = {4, 8, 16};
  spec.reference = target;
  auto records = matrix_convergence(spec);
  for (const auto& r : records)
    o.info("matrix family b=%lld: %.8f +- %.2g (oracle dev %.3g)", static_cast<long long>(r.b),
           r.estimate->value, r.estimate->error_estimate, std::abs(r.estimate->value - truth));
  double dev = *records.back().deviation;
  o.check(dev < 3e-2, "matrix family final deviation %.3g < 3e-2", dev);

  o.info("series oracle for the same measure: %.10f", truth);
  o.info("qmc vs series oracle: |dev| = %.3g", std::abs(q.value - truth));
  o.info("reference constant (9/2) log(2 zeta(2)) - (15/4) zeta(3) = %.10f", target);
  return o;
}

Outcome criterion4() {
  Outcome o;
  const double target = reference_constants().max_linear_4;
  std::vector<LaurentPoly> p = {parse_poly("Z1 + 1", 4), parse_poly("Z2 + 1", 4), parse_poly("Z3 + 1", 4),
                                parse_poly("Z4 + 1", 4)};
  MeasureEstimate e = boyd_lawton_estimate(MeasureKind::max(4), p, 20, 1e-10);
  o.check(std::abs(e.value - target) < 2e-2, "boyd-lawton b=20 max(4): %.10f, |dev| = %.3g < 2e-2", e.value,
          std::abs(e.value - target));
  o.info("reference constant 9 zeta(3) / (2 pi^2) - 93 zeta(5) / (2 pi^4) = %.10f", target);
  const double truth = oracle::max_linear(4);
  o.info("order-statistics oracle for the same measure: %.10f (|dev| = %.3g)", truth, std::abs(e.value - truth));
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::size_t bad = 0, cases = 0;
  for (std::size_t n = 2; n <= 4; ++n)
    for (std::size_t m = 1; m <= 3; ++m)
      for (long b = 1; b <= 10; ++b) {
        ++cases;
        TorusHom a = base_b_family(n, m, b);
        BoydHeight h = boyd_height(a);
        if (!(h.is_finite() && h.value() == b && witness_valid(a, h))) ++bad;
      }
  o.check(bad == 0, "base-b family: %zu/%zu exact", cases - bad, cases);

  std::mt19937_64 rng(7);
  bad = cases = 0;
  std::uniform_int_distribution<int> d(-50, 50);
  for (std::size_t n = 1; n <= 5; ++n)
    for (int t = 0; t < 20; ++t) {
      IntVector r(n);
      for (auto& x : r) x = d(rng);
      r[static_cast<std::size_t>(t) % n] = 0;
      ++cases;
      BoydHeight h = boyd_height(TorusHom::column(r));
      if (!(h.is_finite() && h.value() == 1 && witness_valid(TorusHom::column(r), h))) ++bad;
    }
  o.check(bad == 0, "zero-component vectors: %zu/%zu give height 1", cases - bad, cases);

  bad = 0;
  std::size_t finite = 0;
  std::uniform_int_distribution<std::size_t> dim(1, 4);
  const long bounds[] = {0, 30, 40, 12, 5};
  for (int t = 0; t < 200; ++t) {
    std::size_t n = dim(rng), m = dim(rng);
    TorusHom a = random_matrix(rng, n, m, 3);
    BoydHeight h = boyd_height(a);
    auto brute = oracle::brute_force_height(a, bounds[n]);
    bool ok = witness_valid(a, h) && (h.is_infinite() == (oracle::rank(a) == n));
    if (brute)
      ok = ok && h.is_finite() && h.value() == *brute;
    else
      ok = ok && (h.is_infinite() || h.value() > bounds[n]);
    finite += h.is_finite();
    bad += !ok;
  }
  o.check(bad == 0, "random matrices vs brute force: %zu/200 agree (%zu finite)", 200 - bad, finite);
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> dim(1, 3);

  std::size_t bad = 0;
  for (int t = 0; t < 100; ++t) {
    std::size_t n = dim(rng), m = dim(rng), l = dim(rng);
    LaurentPoly p = random_poly(rng, n, 5, 6);
    TorusHom a = random_matrix(rng, n, m, 4), b = random_matrix(rng, m, l, 4);
    bad += !(substitute(substitute(p, a), b) == substitute(p, compose(a, b)));
  }
  o.check(bad == 0, "substitution functoriality: %zu/100 exact", 100 - bad);

  double worst = 0;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = dim(rng), m = dim(rng);
    LaurentPoly p = random_poly(rng, n, 5, 5);
    TorusHom a = random_matrix(rng, n, m, 3);
    TorusPoint pt;
    for (std::size_t j = 0; j < m; ++j) pt.angles.push_back(unif(rng));
    worst = std::max(worst, std::abs(evaluate(substitute(p, a), pt) - evaluate(p, apply(a, pt))));
  }
  o.check(worst < 1e-10, "evaluation compatibility: worst |diff| = %.3g < 1e-10", worst);

  bad = 0;
  std::uniform_int_distribution<int> d20(-20, 20);
  for (int t = 0; t < 200; ++t) {
    IntVector r(1 + static_cast<std::size_t>(t) % 4);
    for (auto& x : r) x = d20(rng);
    bad += !(boyd_height(TorusHom::column(r)) == boyd_height(TorusHom::column(sign_split(r).r_plus)));
  }
  o.check(bad == 0, "sign invariance mu(r) = mu(r+): %zu/200 exact", 200 - bad);

  // A is m x n (T^n -> T^m) with large height, B is l x m with height >= b.
  bad = 0;
  std::size_t triples = 0, nontrivial = 0;
  std::uniform_int_distribution<long> small_b(1, 4);
  while (triples < 100) {
    std::size_t m = 1 + dim(rng), n = dim(rng), l = dim(rng);
    TorusHom bm = random_matrix(rng, l, m, 2);
    BoydHeight hb = boyd_height(bm);
    long b = small_b(rng);
    if (!(hb >= mpz_class(b))) continue;
    mpz_class c = mpz_class(static_cast<long>(l)) * sup_norm(bm) * b + small_b(rng) - 1;
    if (c < 1) c = 1;
    TorusHom a = compose(base_b_family(m, n, c), random_unimodular(rng, n, 4));
    BoydHeight ha = boyd_height(a);
    if (!(ha >= mpz_class(static_cast<long>(l)) * sup_norm(bm) * b)) continue;
    ++triples;
    BoydHeight hba = boyd_height(compose(bm, a));
    nontrivial += hba.is_finite();
    bad += !(hba >= mpz_class(b));
  }
  o.check(bad == 0, "composition lower bound: %zu/100 hold (%zu with finite height)", 100 - bad, nontrivial);

  worst = 0;
  for (int t = 0; t < 30; ++t) {
    LaurentPoly p = oracle::random_univariate(rng, 8, 5);
    double j = mahler1_exact(p).value;
    double c = circle_measure(MeasureKind::classic(), {p}).value;
    worst = std::max(worst, std::abs(j - c));
  }
  o.check(worst < 1e-5, "jensen vs quadrature: worst |diff| = %.3g < 1e-5", worst);

  worst = 0;
  for (int t = 0; t < 30; ++t) {
    LaurentPoly p = oracle::random_univariate(rng, 8, 5), q = oracle::random_univariate(rng, 8, 5);
    worst = std::max(worst,
                     std::abs(mahler1_exact(multiply(p, q)).value - mahler1_exact(p).value - mahler1_exact(q).value));
  }
  o.check(worst < 1e-9, "jensen multiplicativity: worst |diff| = %.3g < 1e-9", worst);

  worst = 0;
  TorusHom inv(std::vector<IntVector>{{-1}});
  for (int t = 0; t < 30; ++t) {
    LaurentPoly p = oracle::random_univariate(rng, 8, 5);
    worst = std::max(worst, std::abs(mahler1_exact(substitute(p, inv)).value - mahler1_exact(p).value));
  }
  o.check(worst < 1e-9, "inversion invariance: worst |diff| = %.3g < 1e-9", worst);

  const QmcConfig cfg = qmc(1u << 18);
  bad = 0;
  double margin = 1e9;
  for (int t = 0; t < 10; ++t) {
    LaurentPoly p = random_poly(rng, 2, 4, 3);
    TorusHom u = random_unimodular(rng, 2, 4);
    MeasureEstimate x = torus_qmc(MeasureKind::classic(), {substitute(p, u)}, cfg);
    MeasureEstimate y = torus_qmc(MeasureKind::classic(), {p}, cfg);
    double band = 3 * (x.error_estimate + y.error_estimate) + 1e-3;
    margin = std::min(margin, band - std::abs(x.value - y.value));
    bad += !(std::abs(x.value - y.value) < band);
  }
  o.check(bad == 0, "unimodular invariance (qmc): %zu/10 within band (min slack %.3g)", 10 - bad, margin);

  bad = 0;
  TorusHom surj(std::vector<IntVector>{{1, 0, 2}, {0, 1, -1}});
  for (int t = 0; t < 5; ++t) {
    LaurentPoly p = random_poly(rng, 2, 4, 3);
    MeasureEstimate x = torus_qmc(MeasureKind::classic(), {substitute(p, surj)}, cfg);
    MeasureEstimate y = torus_qmc(MeasureKind::classic(), {p}, cfg);
    bad += !(std::abs(x.value - y.value) < 3 * (x.error_estimate + y.error_estimate) + 1e-3);
  }
  o.check(bad == 0, "surjective composition T^3 -> T^2 (qmc): %zu/5 within band", 5 - bad);
  return o;
}

Outcome criterion7() {
  Outcome o;
  const double ref = oracle::classic_linear_2();
  o.info("oracle m(Z1 + Z2 + 1) = %.12f", ref);
  ExperimentSpec spec;
  spec.polys = {parse_poly("Z1 + Z2 + 1")};
  spec.b_schedule = {5, 10, 20, 40};
  spec.reference = ref;
  auto vec = run_convergence(spec);
  std::vector<double> dev;
  for (const auto& r : vec) {
    dev.push_back(*r.deviation);
    o.info("vector b=%lld: %.10f dev %.3g", static_cast<long long>(r.b), r.estimate->value, *r.deviation);
  }
  o.check(dev.back() <= std::min(dev[0], dev[1]), "vector family trend: final %.3g <= min(%.3g, %.3g)", dev.back(),
          dev[0], dev[1]);

  spec.family = Family::matrix(2);
  auto mat = matrix_convergence(spec);
  std::size_t bad = 0;
  for (std::size_t i = 0; i < mat.size(); ++i) {
    double diff = std::abs(mat[i].estimate->value - vec[i].estimate->value);
    double band = 3 * (mat[i].estimate->error_estimate + vec[i].estimate->error_estimate) + 1e-3;
    o.info("matrix m=2 b=%lld: %.10f +- %.2g, |diff to vector| %.3g (band %.3g)",
           static_cast<long long>(mat[i].b), mat[i].estimate->value, mat[i].estimate->error_estimate, diff, band);
    bad += !(diff <= band);
  }
  o.check(bad == 0, "matrix family m=2 agrees with vector family at %zu/%zu steps", mat.size() - bad, mat.size());
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double budget_s;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "classic identity m_3(Z1+Z2+Z3+1)", 180, criterion1},
      {2, "prod identity (Z1-1)^3", 5, criterion2},
      {3, "prod identity Z1+Z2+2", 240, criterion3},
      {4, "max identity (Z1+1,...,Z4+1)", 120, criterion4},
      {5, "exact height suite", 30, criterion5},
      {6, "property suites", 120, criterion6},
      {7, "convergence trend Z1+Z2+1", 60, criterion7},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, "exception: %s", e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.check(secs <= c.budget_s, "runtime %.2f s <= %.0f s", secs, c.budget_s);
    std::printf("criterion %d %s: %s (%.2f s)\n", c.id, o.pass ? "PASS" : "FAIL", c.title, secs);
    for (const auto& line : o.lines) std::printf("    %s\n", line.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
