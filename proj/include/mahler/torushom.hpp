#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "mahler/laurent.hpp"

namespace mahler {

using IntVector = std::vector<mpz_class>;

/// Integer n x m matrix A, read as the continuous homomorphism
/// q_A : T^m -> T^n, t -> A t mod 1.
class TorusHom {
public:
  TorusHom(std::size_t rows, std::size_t cols);
  explicit TorusHom(const std::vector<IntVector>& rows);

  static TorusHom identity(std::size_t n);
  static TorusHom column(const IntVector& r);
  static TorusHom row(const IntVector& v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  const mpz_class& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  mpz_class& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }

  IntVector column_vector(std::size_t j) const;

  friend bool operator==(const TorusHom& a, const TorusHom& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<mpz_class> entries_;
};

/// Minimum sup-norm of a nonzero integer row vector v with v.A = 0, or
/// infinite when no such v exists. Finite heights carry a witness.
class BoydHeight {
public:
  static BoydHeight infinite() { return BoydHeight(); }
  static BoydHeight finite(mpz_class value, IntVector witness);

  bool is_infinite() const { return !value_.has_value(); }
  bool is_finite() const { return value_.has_value(); }
  const mpz_class& value() const;
  const std::optional<IntVector>& witness() const { return witness_; }

  std::string to_string() const;

  // Infinite compares greater than every finite height.
  friend bool operator==(const BoydHeight& a, const BoydHeight& b) { return a.value_ == b.value_; }
  friend bool operator<(const BoydHeight& a, const BoydHeight& b);
  friend bool operator>=(const BoydHeight& a, const mpz_class& bound) {
    return a.is_infinite() || *a.value_ >= bound;
  }

private:
  BoydHeight() = default;
  std::optional<mpz_class> value_;
  std::optional<IntVector> witness_;
};

struct SignSplit {
  std::vector<int> signs;  // diagonal of D, each +1 or -1
  IntVector r_plus;        // |r_i|

  TorusHom d() const;
};

TorusHom compose(const TorusHom& a, const TorusHom& b);
TorusPoint apply(const TorusHom& a, const TorusPoint& t);

std::size_t integer_rank(const TorusHom& a);
bool is_surjective(const TorusHom& a);

BoydHeight boyd_height(const TorusHom& a);

/// n x m matrix whose columns all equal (1, b, ..., b^{n-1}); its height is b
/// for n >= 2.
TorusHom base_b_family(std::size_t n, std::size_t m, const mpz_class& b);

SignSplit sign_split(const IntVector& r);

/// Largest absolute entry.
mpz_class sup_norm(const TorusHom& a);
mpz_class sup_norm(const IntVector& v);

/// "1,1;4,4;16,16" -> 3x2. Rows split on ';', entries on ','.
TorusHom parse_matrix(std::string_view text);
std::string format_matrix(const TorusHom& a);

}  // namespace mahler
