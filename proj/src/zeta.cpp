#include "mahler/zeta.hpp"

#include <vector>

#include <gmpxx.h>

#include "mahler/errors.hpp"

namespace mahler {

namespace {

// B_0..B_{2m} by the Akiyama-Tanigawa algorithm (B_1 = +1/2 convention,
// irrelevant here since only even indices are used).
std::vector<mpq_class> bernoulli(std::size_t count) {
  std::vector<mpq_class> out(count), a(count);
  for (std::size_t m = 0; m < count; ++m) {
    a[m] = mpq_class(1, m + 1);
    a[m].canonicalize();
    for (std::size_t j = m; j >= 1; --j) {
      a[j - 1] = mpq_class(static_cast<unsigned long>(j)) * (a[j - 1] - a[j]);
    }
    out[m] = a[0];
  }
  return out;
}

HighPrecision from_mpq(const mpq_class& q) {
  HighPrecision num(q.get_num().get_str()), den(q.get_den().get_str());
  return num / den;
}

}  // namespace

HighPrecision pi_value(unsigned digits) {
  HighPrecision::default_precision(digits + 20);
  return boost::multiprecision::mpfr_float(boost::math::constants::pi<HighPrecision>());
}

HighPrecision zeta(int s, unsigned digits) {
  if (s < 2) throw ComputationError("zeta: s must be at least 2");
  HighPrecision::default_precision(digits + 20);
  const unsigned long n = digits + 10;  // direct-sum cutoff
  HighPrecision sum = 0;
  for (unsigned long k = n - 1; k >= 1; --k) sum += pow(HighPrecision(k), -s);
  const HighPrecision big_n(n);
  sum += pow(big_n, 1 - s) / (s - 1);
  sum += pow(big_n, -s) / 2;

  // Correction terms B_{2j}/(2j)! * s(s+1)...(s+2j-2) * N^{-s-2j+1}, added
  // until they drop below the requested accuracy.
  const HighPrecision eps = pow(HighPrecision(10), -static_cast<int>(digits) - 5);
  const std::size_t max_terms = 4 * digits + 40;
  auto b = bernoulli(2 * max_terms + 2);
  mpq_class rising = s;  // s(s+1)...(s+2j-2)
  mpq_class factorial = 2;
  for (std::size_t j = 1; j <= max_terms; ++j) {
    HighPrecision term = from_mpq(b[2 * j] / factorial * rising) * pow(big_n, -s - static_cast<int>(2 * j) + 1);
    sum += term;
    if (abs(term) < eps) break;
    rising *= mpq_class((s + 2 * static_cast<long>(j) - 1) * (s + 2 * static_cast<long>(j)));
    factorial *= mpq_class(static_cast<long>((2 * j + 1) * (2 * j + 2)));
  }
  return sum;
}

}  // namespace mahler
