#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace mahler {

class TorusHom;

/// Exponent of each variable Z1..Zn in one monomial; entries may be negative.
using ExponentVector = std::vector<std::int64_t>;

/// Exact Gaussian rational re + im*i.
struct Coefficient {
  mpq_class re;
  mpq_class im;

  Coefficient() = default;
  Coefficient(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {}
  Coefficient(long r) : re(r), im(0) {}

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

  Coefficient& operator+=(const Coefficient& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  friend Coefficient operator+(Coefficient a, const Coefficient& b) { return a += b; }
  friend Coefficient operator-(const Coefficient& a) { return {-a.re, -a.im}; }
  friend Coefficient operator-(const Coefficient& a, const Coefficient& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend Coefficient operator*(const Coefficient& a, const Coefficient& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const Coefficient& a, const Coefficient& b) {
    return a.re == b.re && a.im == b.im;
  }
};

/// Point (e^{2 pi i t_1}, ..., e^{2 pi i t_n}) of the torus, stored by its
/// angles t_i in [0, 1).
struct TorusPoint {
  std::vector<double> angles;

  std::size_t dim() const { return angles.size(); }
};

/// Sparse Laurent polynomial in Z1..Zn with exact Gaussian-rational
/// coefficients. The term map never holds a zero coefficient and every key
/// has length nvars(); the zero polynomial is the empty map.
class LaurentPoly {
public:
  using TermMap = std::map<ExponentVector, Coefficient>;

  explicit LaurentPoly(std::size_t nvars);

  static LaurentPoly constant(std::size_t nvars, const Coefficient& c);
  static LaurentPoly monomial(ExponentVector exponents, const Coefficient& c = Coefficient(1));

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /// Adds c*Z^e, combining with an existing term and erasing it on cancellation.
  void add_term(const ExponentVector& e, const Coefficient& c);

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

private:
  std::size_t nvars_;
  TermMap terms_;
};

/// Parses the ASCII grammar, e.g. "(1/2)*Z1^2*Z2^-1 - 3 + 2i*Z3".
/// Without `expected_nvars` the result has as many variables as the largest
/// index mentioned (at least one).
LaurentPoly parse_poly(std::string_view text,
                       std::optional<std::size_t> expected_nvars = std::nullopt);

/// Canonical text: terms in descending lexicographic exponent order, "0" for
/// the zero polynomial. parse_poly(format_poly(p)) == p.
std::string format_poly(const LaurentPoly& p);

std::complex<double> evaluate(const LaurentPoly& p, const TorusPoint& t);

/// P^(A): the exponent e of every term is sent to A^T e. The result lives in
/// A.cols() variables and may be zero.
LaurentPoly substitute(const LaurentPoly& p, const TorusHom& a);

struct MonomialSplit {
  ExponentVector k;  // nonnegative
  LaurentPoly q;     // p == Z^{-k} * q, every variable has minimum exponent >= 0 in q
};

MonomialSplit strip_monomial(const LaurentPoly& p);

LaurentPoly multiply(const LaurentPoly& p, const LaurentPoly& q);

inline bool is_zero(const LaurentPoly& p) { return p.is_zero(); }

/// Double-precision view of a LaurentPoly for repeated evaluation on the
/// torus. Phases e.t are reduced mod 1 before the trigonometric call, so
/// large exponents do not lose accuracy.
class TorusEvaluator {
public:
  explicit TorusEvaluator(const LaurentPoly& p);

  std::size_t nvars() const { return nvars_; }

  std::complex<double> operator()(std::span<const double> angles) const;
  double log_abs(std::span<const double> angles) const;

  /// Angles given as 64-bit fixed point fractions of a full turn.
  double log_abs_fixed(std::span<const std::uint64_t> angles) const;

private:
  std::size_t nvars_;
  std::vector<std::int64_t> exponents_;  // row-major, size() * nvars_
  std::vector<std::complex<double>> coeffs_;
  // Monomials have constant modulus on the torus; log_abs returns this exactly.
  std::optional<double> constant_log_abs_;
};

}  // namespace mahler
