#include "mahler/roots.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "mahler/errors.hpp"

namespace mahler {

namespace {

using cplx = std::complex<double>;

cplx ipow(cplx z, std::int64_t n) {
  cplx result = 1.0;
  while (n > 0) {
    if (n & 1) result *= z;
    z *= z;
    n >>= 1;
  }
  return result;
}

double ipow(double x, std::int64_t n) {
  double result = 1.0;
  while (n > 0) {
    if (n & 1) result *= x;
    x *= x;
    n >>= 1;
  }
  return result;
}

struct Evaluation {
  cplx newton;      // P(z) / P'(z)
  double residual;  // |P(z)| / sum |c_k| |z|^k
  bool derivative_zero;
};

// Sparse polynomial with exponents 0 = e_0 < e_1 < ... < e_last = degree.
class SparsePoly {
public:
  explicit SparsePoly(std::vector<UnivariateTerm> t) : terms_(std::move(t)) {}

  std::int64_t degree() const { return terms_.back().exponent; }

  // Horner in z on the terms in descending order, valid for |z| <= 1.
  // For |z| > 1 the same is done on the reversed polynomial in w = 1/z.
  Evaluation eval(cplx z) const {
    const bool outside = std::abs(z) > 1.0;
    const std::int64_t d = degree();
    cplx x = outside ? 1.0 / z : z;
    double ax = std::abs(x);
    cplx p = 0.0, dp = 0.0;
    double bound = 0.0;
    std::int64_t prev = -1;
    auto step = [&](std::int64_t power, const UnivariateTerm& t) {
      if (prev >= 0) {
        std::int64_t gap = prev - power;
        cplx xg = ipow(x, gap);
        p *= xg;
        dp *= xg;
        bound *= ipow(ax, gap);
      }
      p += t.coeff;
      dp += static_cast<double>(t.exponent) * t.coeff;
      bound += std::abs(t.coeff);
      prev = power;
    };
    if (!outside) {
      for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) step(it->exponent, *it);
    } else {
      for (const auto& t : terms_) step(d - t.exponent, t);
    }
    if (prev > 0) {
      cplx xg = ipow(x, prev);
      p *= xg;
      dp *= xg;
      bound *= ipow(ax, prev);
    }
    // Inside: p = P(z), dp = z P'(z). Outside: p = R(w), dp = S(w) with
    // P/P' = z R/S. Either way P/P' = z * p / dp.
    Evaluation ev;
    ev.residual = bound > 0 ? std::abs(p) / bound : 0.0;
    ev.derivative_zero = dp == cplx(0.0);
    ev.newton = ev.derivative_zero ? cplx(0.0) : z * p / dp;
    return ev;
  }

  std::vector<cplx> initial_guesses() const {
    // Upper convex hull of (k, log|c_k|).
    std::vector<std::pair<double, double>> pts;
    for (const auto& t : terms_) pts.emplace_back(static_cast<double>(t.exponent), std::log(std::abs(t.coeff)));
    std::vector<std::size_t> hull;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      while (hull.size() >= 2) {
        const auto& a = pts[hull[hull.size() - 2]];
        const auto& b = pts[hull.back()];
        const auto& c = pts[i];
        double cross = (b.first - a.first) * (c.second - a.second) - (b.second - a.second) * (c.first - a.first);
        if (cross >= 0) hull.pop_back();
        else break;
      }
      hull.push_back(i);
    }
    const double d = static_cast<double>(degree());
    std::vector<cplx> z;
    z.reserve(static_cast<std::size_t>(degree()));
    constexpr double sigma = 0.7;
    for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
      const auto& a = pts[hull[h]];
      const auto& b = pts[hull[h + 1]];
      auto count = static_cast<std::int64_t>(b.first - a.first);
      double radius = std::exp((a.second - b.second) / (b.first - a.first));
      for (std::int64_t j = 0; j < count; ++j) {
        double theta = 2.0 * std::numbers::pi * (static_cast<double>(j) / static_cast<double>(count) +
                                                 a.first / d) + sigma;
        z.push_back(std::polar(radius, theta));
      }
    }
    return z;
  }

private:
  std::vector<UnivariateTerm> terms_;
};

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

// A root of multiplicity k is a simple root of the (k-1)-th derivative, where
// Newton converges quadratically. The centroid is kept if the iteration
// leaves the cluster.
cplx polish_multiple(const std::vector<UnivariateTerm>& terms, cplx start, std::size_t k, double spread) {
  std::vector<UnivariateTerm> deriv;
  const auto order = static_cast<std::int64_t>(k - 1);
  for (const auto& t : terms) {
    if (t.exponent < order) continue;
    double f = 1.0;
    for (std::int64_t j = 0; j < order; ++j) f *= static_cast<double>(t.exponent - j);
    deriv.push_back({t.exponent - order, t.coeff * f});
  }
  if (deriv.size() < 2) return start;
  SparsePoly dp(deriv);
  cplx x = start;
  for (int it = 0; it < 20; ++it) {
    Evaluation ev = dp.eval(x);
    if (ev.derivative_zero || ev.residual <= DBL_EPSILON) break;
    x -= ev.newton;
    if (!(std::abs(x - start) <= spread)) return start;
    if (std::abs(ev.newton) <= 2.0 * DBL_EPSILON * std::abs(x)) break;
  }
  return x;
}

}  // namespace

RootResult find_roots(std::vector<UnivariateTerm> terms, const RootOptions& opts) {
  std::erase_if(terms, [](const UnivariateTerm& t) { return t.coeff == cplx(0.0); });
  if (terms.empty()) throw ComputationError("find_roots: zero polynomial");
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.exponent < b.exponent; });
  for (std::size_t i = 1; i < terms.size(); ++i)
    if (terms[i].exponent == terms[i - 1].exponent) throw ComputationError("find_roots: repeated exponent");
  if (terms.front().exponent < 0) throw ComputationError("find_roots: negative exponent");

  RootResult res;
  res.zero_roots = static_cast<std::size_t>(terms.front().exponent);
  const std::int64_t low = terms.front().exponent;
  for (auto& t : terms) t.exponent -= low;
  res.leading = terms.back().coeff;
  const std::int64_t degree = terms.back().exponent;
  res.degree = static_cast<std::size_t>(degree + low);
  res.roots.assign(res.zero_roots, cplx(0.0));
  if (degree == 0) return res;
  if (degree == 1) {
    res.roots.push_back(-terms[0].coeff / terms[1].coeff);
    return res;
  }

  SparsePoly poly(terms);
  std::vector<cplx> z = poly.initial_guesses();
  const auto d = static_cast<std::size_t>(degree);
  std::vector<char> done(d, 0);
  std::vector<double> residual(d, 1.0);
  constexpr double kStopResidual = 32.0 * DBL_EPSILON;

  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    std::size_t active = 0;
    for (std::size_t i = 0; i < d; ++i) {
      if (done[i]) continue;
      ++active;
      Evaluation ev = poly.eval(z[i]);
      residual[i] = ev.residual;
      if (ev.residual <= kStopResidual) {
        done[i] = 1;
        continue;
      }
      if (ev.derivative_zero) {
        z[i] *= cplx(1.0 + 1e-8, 1e-8);
        continue;
      }
      const double zr = z[i].real(), zi = z[i].imag();
      double sr = 0.0, si = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        if (j == i) continue;
        double dr = zr - z[j].real(), di = zi - z[j].imag();
        double inv = 1.0 / (dr * dr + di * di);
        sr += dr * inv;
        si -= di * inv;
      }
      cplx n = ev.newton;
      cplx delta = n / (1.0 - n * cplx(sr, si));
      if (!std::isfinite(delta.real()) || !std::isfinite(delta.imag())) delta = n;
      z[i] -= delta;
      if (std::abs(delta) <= 4.0 * DBL_EPSILON * std::abs(z[i])) done[i] = 1;
    }
    if (active == 0) break;
  }
  res.iterations = it;

  std::vector<double> radius(d);
  for (std::size_t i = 0; i < d; ++i) {
    Evaluation ev = poly.eval(z[i]);
    residual[i] = ev.residual;
    res.max_residual = std::max(res.max_residual, ev.residual);
    radius[i] = ev.derivative_zero ? std::sqrt(DBL_EPSILON) * std::max(1.0, std::abs(z[i]))
                                   : 2.0 * static_cast<double>(d) * std::abs(ev.newton);
  }
  // A root stored to relative precision eps moves z^d by about d * eps, so
  // that is the best residual available at high degree.
  const double accept = std::max(opts.root_tol, 8.0 * static_cast<double>(degree) * DBL_EPSILON);
  if (!(res.max_residual <= accept)) {
    throw ComputationError("root iteration did not converge after " + std::to_string(it) +
                           " iterations; worst residual " + std::to_string(res.max_residual));
  }

  // Overlapping Newton inclusion disks mark approximations to one multiple root.
  // The radii carry a factor 2 because P itself is only known to rounding
  // level near a multiple root.
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return z[a].real() < z[b].real(); });
  const double rmax = *std::max_element(radius.begin(), radius.end());
  DisjointSets sets(d);
  for (std::size_t a = 0; a < d; ++a) {
    std::size_t i = order[a];
    for (std::size_t b = a + 1; b < d; ++b) {
      std::size_t j = order[b];
      if (z[j].real() - z[i].real() > radius[i] + rmax) break;
      if (std::abs(z[i] - z[j]) <= radius[i] + radius[j]) sets.unite(i, j);
    }
  }
  std::vector<cplx> sum(d, 0.0);
  std::vector<std::size_t> count(d, 0);
  std::vector<double> spread(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    std::size_t r = sets.find(i);
    sum[r] += z[i];
    ++count[r];
    spread[r] += radius[i];
  }
  for (std::size_t r = 0; r < d; ++r) {
    if (count[r] < 2) continue;
    ++res.clusters;
    sum[r] = polish_multiple(terms, sum[r] / static_cast<double>(count[r]), count[r], spread[r]);
  }
  for (std::size_t i = 0; i < d; ++i) {
    std::size_t r = sets.find(i);
    res.roots.push_back(count[r] > 1 ? sum[r] : z[i]);
  }
  return res;
}

}  // namespace mahler
