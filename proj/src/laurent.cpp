#include "mahler/laurent.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

#include "mahler/errors.hpp"
#include "mahler/torushom.hpp"

namespace mahler {

LaurentPoly::LaurentPoly(std::size_t nvars) : nvars_(nvars) {
  if (nvars == 0) throw DimensionError("polynomial needs at least one variable");
}

LaurentPoly LaurentPoly::constant(std::size_t nvars, const Coefficient& c) {
  LaurentPoly p(nvars);
  p.add_term(ExponentVector(nvars, 0), c);
  return p;
}

LaurentPoly LaurentPoly::monomial(ExponentVector exponents, const Coefficient& c) {
  LaurentPoly p(exponents.size());
  p.add_term(exponents, c);
  return p;
}

void LaurentPoly::add_term(const ExponentVector& e, const Coefficient& c) {
  if (e.size() != nvars_) throw DimensionError("exponent vector length does not match nvars");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class PolyParser {
public:
  explicit PolyParser(std::string_view text) : s_(text) {}

  struct RawTerm {
    Coefficient coef;
    std::map<std::size_t, std::int64_t> powers;  // variable index (1-based) -> exponent
  };

  std::vector<RawTerm> parse() {
    std::vector<RawTerm> out;
    skip_ws();
    if (at_end()) fail("empty polynomial");
    bool negate = false;
    if (peek() == '+' || peek() == '-') {
      negate = peek() == '-';
      ++pos_;
    }
    for (;;) {
      RawTerm t = term();
      if (negate) t.coef = -t.coef;
      out.push_back(std::move(t));
      skip_ws();
      if (at_end()) break;
      char c = peek();
      if (c != '+' && c != '-') fail("expected '+' or '-'");
      negate = c == '-';
      ++pos_;
    }
    return out;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string digits() {
    skip_ws();
    std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return std::string(s_.substr(start, pos_ - start));
  }

  // int ['/' posint] | decimal
  mpq_class rational() {
    std::string whole = digits();
    if (peek() == '.') {
      ++pos_;
      std::string frac = digits();
      mpz_class num(whole + frac, 10);
      mpz_class den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
      mpq_class q(num, den);
      q.canonicalize();
      return q;
    }
    mpq_class q{mpz_class(whole, 10)};
    if (accept('/')) {
      std::size_t at = pos_;
      mpz_class den(digits(), 10);
      if (den == 0) throw ParseError("zero denominator", at);
      q = mpq_class(mpz_class(whole, 10), den);
      q.canonicalize();
    }
    return q;
  }

  // '(' [sign] rational ['i'] [('+'|'-') rational 'i'] ')'
  Coefficient paren_coef() {
    bool neg = false;
    skip_ws();
    if (peek() == '+' || peek() == '-') {
      neg = peek() == '-';
      ++pos_;
    }
    mpq_class first = rational();
    if (neg) first = -first;
    Coefficient c;
    if (accept('i')) {
      c.im = first;
    } else {
      c.re = first;
      skip_ws();
      if (peek() == '+' || peek() == '-') {
        bool ineg = peek() == '-';
        ++pos_;
        mpq_class second = rational();
        if (!accept('i')) fail("expected 'i' after imaginary part");
        c.im = ineg ? mpq_class(-second) : second;
      }
    }
    if (!accept(')')) fail("expected ')'");
    return c;
  }

  bool at_coef_start() {
    skip_ws();
    char c = peek();
    return c == '(' || std::isdigit(static_cast<unsigned char>(c));
  }

  Coefficient coef() {
    if (accept('(')) return paren_coef();
    mpq_class q = rational();
    if (accept('i')) return Coefficient(0, q);
    return Coefficient(q);
  }

  std::int64_t signed_int() {
    skip_ws();
    bool neg = false;
    if (peek() == '+' || peek() == '-') {
      neg = peek() == '-';
      ++pos_;
    }
    std::size_t at = pos_;
    mpz_class v(digits(), 10);
    if (neg) v = -v;
    if (!v.fits_slong_p()) throw ParseError("exponent out of range", at);
    return v.get_si();
  }

  void factor(RawTerm& t) {
    skip_ws();
    if (peek() != 'Z') fail("expected variable Z<index>");
    ++pos_;
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected variable index");
    std::size_t at = pos_;
    mpz_class idx(digits(), 10);
    if (idx == 0 || !idx.fits_ulong_p() || idx > 1'000'000) throw ParseError("bad variable index", at);
    std::int64_t e = 1;
    if (accept('^')) e = signed_int();
    t.powers[idx.get_ui()] += e;
  }

  RawTerm term() {
    RawTerm t;
    t.coef = Coefficient(1);
    if (at_coef_start()) {
      t.coef = coef();
      if (!accept('*')) return t;
    }
    factor(t);
    while (accept('*')) factor(t);
    return t;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

LaurentPoly parse_poly(std::string_view text, std::optional<std::size_t> expected_nvars) {
  auto raw = PolyParser(text).parse();
  std::size_t max_index = 0;
  for (const auto& t : raw)
    for (const auto& [idx, e] : t.powers) max_index = std::max(max_index, idx);
  std::size_t nvars = std::max<std::size_t>(max_index, 1);
  if (expected_nvars) {
    if (*expected_nvars == 0) throw DimensionError("expected_nvars must be positive");
    if (max_index > *expected_nvars)
      throw DimensionError("variable Z" + std::to_string(max_index) + " exceeds nvars " +
                           std::to_string(*expected_nvars));
    nvars = *expected_nvars;
  }
  LaurentPoly p(nvars);
  for (const auto& t : raw) {
    ExponentVector e(nvars, 0);
    for (const auto& [idx, ex] : t.powers) e[idx - 1] = ex;
    p.add_term(e, t.coef);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Formatting

namespace {

std::string monomial_text(const ExponentVector& e) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += 'Z' + std::to_string(i + 1);
    if (e[i] != 1) out += '^' + std::to_string(e[i]);
  }
  return out;
}

// Coefficient text for a coefficient already normalized to a positive
// leading part; `bare_one` allows dropping a unit coefficient.
std::string coefficient_text(const Coefficient& c, bool bare_one) {
  if (sgn(c.im) == 0) {
    if (bare_one && c.re == 1) return {};
    if (bare_one && c.re.get_den() != 1) return "(" + c.re.get_str() + ")";
    return c.re.get_str();
  }
  if (sgn(c.re) == 0) return c.im.get_str() + 'i';
  std::string s = "(" + c.re.get_str();
  s += sgn(c.im) < 0 ? '-' : '+';
  s += mpq_class(abs(c.im)).get_str() + "i)";
  return s;
}

}  // namespace

std::string format_poly(const LaurentPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [e, c0] = *it;
    bool negative = sgn(c0.re) < 0 || (sgn(c0.re) == 0 && sgn(c0.im) < 0);
    Coefficient c = negative ? -c0 : c0;
    std::string mono = monomial_text(e);
    std::string coef = coefficient_text(c, !mono.empty());
    std::string body;
    if (mono.empty())
      body = coef;
    else if (coef.empty())
      body = mono;
    else
      body = coef + '*' + mono;
    if (first)
      out += negative ? "-" + body : body;
    else
      out += (negative ? " - " : " + ") + body;
    first = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// frac(sum_i e_i t_i) in [0, 1), with the products split exactly via fma.
double phase(const std::int64_t* e, const double* t, std::size_t n) {
  double hi = 0.0, lo = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (e[i] == 0) continue;
    double ed = static_cast<double>(e[i]);
    double prod = ed * t[i];
    lo += std::fma(ed, t[i], -prod);
    hi += prod - std::floor(prod);
  }
  double s = (hi - std::floor(hi)) + lo;
  s -= std::floor(s);
  return s >= 1.0 ? 0.0 : s;
}

std::complex<double> unit(double turns) {
  double r = turns - std::nearbyint(turns);
  return {std::cos(kTwoPi * r), std::sin(kTwoPi * r)};
}

std::complex<double> unit_fixed(std::uint64_t turns) {
  double r = static_cast<double>(static_cast<std::int64_t>(turns)) * 0x1p-64;
  return {std::cos(kTwoPi * r), std::sin(kTwoPi * r)};
}

}  // namespace

std::complex<double> evaluate(const LaurentPoly& p, const TorusPoint& t) {
  if (t.dim() != p.nvars()) throw DimensionError("torus point dimension does not match nvars");
  return TorusEvaluator(p)(t.angles);
}

TorusEvaluator::TorusEvaluator(const LaurentPoly& p) : nvars_(p.nvars()) {
  exponents_.reserve(p.size() * nvars_);
  coeffs_.reserve(p.size());
  for (const auto& [e, c] : p.terms()) {
    for (auto x : e) {
      if (std::abs(x) > (std::int64_t{1} << 53))
        throw ComputationError("exponent too large for floating evaluation");
      exponents_.push_back(x);
    }
    coeffs_.push_back(c.to_complex());
  }
  if (coeffs_.size() == 1) constant_log_abs_ = std::log(std::abs(coeffs_[0]));
}

std::complex<double> TorusEvaluator::operator()(std::span<const double> angles) const {
  if (angles.size() != nvars_) throw DimensionError("torus point dimension does not match nvars");
  std::complex<double> sum = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k)
    sum += coeffs_[k] * unit(phase(&exponents_[k * nvars_], angles.data(), nvars_));
  return sum;
}

double TorusEvaluator::log_abs(std::span<const double> angles) const {
  if (constant_log_abs_) return *constant_log_abs_;
  return std::log(std::abs((*this)(angles)));
}

double TorusEvaluator::log_abs_fixed(std::span<const std::uint64_t> angles) const {
  if (constant_log_abs_) return *constant_log_abs_;
  std::complex<double> sum = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    std::uint64_t ph = 0;
    const std::int64_t* e = &exponents_[k * nvars_];
    for (std::size_t i = 0; i < nvars_; ++i) ph += static_cast<std::uint64_t>(e[i]) * angles[i];
    sum += coeffs_[k] * unit_fixed(ph);
  }
  return std::log(std::abs(sum));
}

// ---------------------------------------------------------------------------
// Algebra

LaurentPoly substitute(const LaurentPoly& p, const TorusHom& a) {
  if (a.rows() != p.nvars())
    throw DimensionError("substitution matrix has " + std::to_string(a.rows()) +
                         " rows but the polynomial has " + std::to_string(p.nvars()) + " variables");
  const std::size_t m = a.cols();
  LaurentPoly out(m);
  ExponentVector f(m);
  mpz_class acc;
  for (const auto& [e, c] : p.terms()) {
    for (std::size_t j = 0; j < m; ++j) {
      acc = 0;
      for (std::size_t i = 0; i < e.size(); ++i) acc += a(i, j) * e[i];
      if (!acc.fits_slong_p()) throw ComputationError("substituted exponent overflows 64 bits");
      f[j] = acc.get_si();
    }
    out.add_term(f, c);
  }
  return out;
}

MonomialSplit strip_monomial(const LaurentPoly& p) {
  if (p.is_zero()) throw ComputationError("strip_monomial of the zero polynomial");
  const std::size_t n = p.nvars();
  ExponentVector k(n, 0);
  for (const auto& [e, c] : p.terms())
    for (std::size_t i = 0; i < n; ++i) k[i] = std::max(k[i], -e[i]);
  LaurentPoly q(n);
  ExponentVector shifted(n);
  for (const auto& [e, c] : p.terms()) {
    for (std::size_t i = 0; i < n; ++i) shifted[i] = e[i] + k[i];
    q.add_term(shifted, c);
  }
  return {std::move(k), std::move(q)};
}

LaurentPoly multiply(const LaurentPoly& p, const LaurentPoly& q) {
  if (p.nvars() != q.nvars()) throw DimensionError("multiply: nvars mismatch");
  const std::size_t n = p.nvars();
  LaurentPoly out(n);
  ExponentVector e(n);
  for (const auto& [ep, cp] : p.terms())
    for (const auto& [eq, cq] : q.terms()) {
      for (std::size_t i = 0; i < n; ++i) e[i] = ep[i] + eq[i];
      out.add_term(e, cp * cq);
    }
  return out;
}

}  // namespace mahler
