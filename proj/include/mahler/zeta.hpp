#pragma once

#include <boost/multiprecision/mpfr.hpp>

namespace mahler {

using HighPrecision = boost::multiprecision::mpfr_float;

/// Riemann zeta at an integer s >= 2 to `digits` decimal digits, by
/// Euler-Maclaurin summation with exact Bernoulli numbers.
HighPrecision zeta(int s, unsigned digits);

HighPrecision pi_value(unsigned digits);

}  // namespace mahler
