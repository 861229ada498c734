#include "mahler/torushom.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

#include "mahler/errors.hpp"

namespace mahler {

TorusHom::TorusHom(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {
  if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
}

TorusHom::TorusHom(const std::vector<IntVector>& rows)
    : TorusHom(rows.size(), rows.empty() ? 0 : rows.front().size()) {
  for (std::size_t i = 0; i < rows_; ++i) {
    if (rows[i].size() != cols_) throw DimensionError("ragged matrix rows");
    std::copy(rows[i].begin(), rows[i].end(), entries_.begin() + i * cols_);
  }
}

TorusHom TorusHom::identity(std::size_t n) {
  TorusHom a(n, n);
  for (std::size_t i = 0; i < n; ++i) a(i, i) = 1;
  return a;
}

TorusHom TorusHom::column(const IntVector& r) {
  TorusHom a(r.size(), 1);
  for (std::size_t i = 0; i < r.size(); ++i) a(i, 0) = r[i];
  return a;
}

TorusHom TorusHom::row(const IntVector& v) {
  TorusHom a(1, v.size());
  for (std::size_t j = 0; j < v.size(); ++j) a(0, j) = v[j];
  return a;
}

IntVector TorusHom::column_vector(std::size_t j) const {
  IntVector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

BoydHeight BoydHeight::finite(mpz_class value, IntVector witness) {
  BoydHeight h;
  h.value_ = std::move(value);
  h.witness_ = std::move(witness);
  return h;
}

const mpz_class& BoydHeight::value() const {
  if (!value_) throw ComputationError("infinite Boyd height has no finite value");
  return *value_;
}

std::string BoydHeight::to_string() const { return value_ ? value_->get_str() : "infinite"; }

bool operator<(const BoydHeight& a, const BoydHeight& b) {
  if (a.is_infinite()) return false;
  if (b.is_infinite()) return true;
  return *a.value_ < *b.value_;
}

TorusHom SignSplit::d() const {
  TorusHom m(signs.size(), signs.size());
  for (std::size_t i = 0; i < signs.size(); ++i) m(i, i) = signs[i];
  return m;
}

TorusHom compose(const TorusHom& a, const TorusHom& b) {
  if (a.cols() != b.rows())
    throw DimensionError("compose: inner dimensions " + std::to_string(a.cols()) + " and " +
                         std::to_string(b.rows()) + " differ");
  TorusHom c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (sgn(a(i, k)) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

TorusPoint apply(const TorusHom& a, const TorusPoint& t) {
  if (t.dim() != a.cols()) throw DimensionError("apply: point dimension does not match matrix columns");
  // Doubles are dyadic rationals, so the reduction mod 1 is done exactly.
  std::vector<mpq_class> exact(t.dim());
  for (std::size_t j = 0; j < t.dim(); ++j) exact[j] = mpq_class(t.angles[j]);
  TorusPoint out;
  out.angles.resize(a.rows());
  mpq_class s;
  mpz_class whole;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    s = 0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += mpq_class(a(i, j)) * exact[j];
    mpz_fdiv_q(whole.get_mpz_t(), s.get_num_mpz_t(), s.get_den_mpz_t());
    s -= whole;
    double v = s.get_d();
    out.angles[i] = v >= 1.0 ? 0.0 : v;
  }
  return out;
}

std::size_t integer_rank(const TorusHom& a) {
  // Bareiss fraction-free elimination.
  std::vector<std::vector<mpz_class>> m(a.rows(), std::vector<mpz_class>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m[i][j] = a(i, j);
  std::size_t rank = 0;
  mpz_class prev = 1;
  for (std::size_t col = 0; col < a.cols() && rank < a.rows(); ++col) {
    std::size_t piv = rank;
    while (piv < a.rows() && sgn(m[piv][col]) == 0) ++piv;
    if (piv == a.rows()) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t i = rank + 1; i < a.rows(); ++i) {
      for (std::size_t j = col + 1; j < a.cols(); ++j) {
        m[i][j] = m[rank][col] * m[i][j] - m[i][col] * m[rank][j];
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      m[i][col] = 0;
    }
    prev = m[rank][col];
    ++rank;
  }
  return rank;
}

bool is_surjective(const TorusHom& a) { return integer_rank(a) == a.rows(); }

TorusHom base_b_family(std::size_t n, std::size_t m, const mpz_class& b) {
  if (b < 1) throw DimensionError("base_b_family: b must be positive");
  TorusHom a(n, m);
  mpz_class power = 1;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) a(i, j) = power;
    power *= b;
  }
  return a;
}

SignSplit sign_split(const IntVector& r) {
  SignSplit s;
  s.signs.reserve(r.size());
  s.r_plus.reserve(r.size());
  for (const auto& x : r) {
    s.signs.push_back(sgn(x) < 0 ? -1 : 1);
    s.r_plus.push_back(abs(x));
  }
  return s;
}

mpz_class sup_norm(const IntVector& v) {
  mpz_class best = 0;
  for (const auto& x : v)
    if (abs(x) > best) best = abs(x);
  return best;
}

mpz_class sup_norm(const TorusHom& a) {
  mpz_class best = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (abs(a(i, j)) > best) best = abs(a(i, j));
  return best;
}

// ---------------------------------------------------------------------------
// Boyd height

namespace {

using i128 = __int128;

i128 to_i128(const mpz_class& z) {
  mpz_class mag = abs(z);
  mpz_class lo_part = mag & mpz_class("18446744073709551615");
  mpz_class hi_part = mag >> 64;
  i128 v = (static_cast<i128>(hi_part.get_ui()) << 64) | static_cast<i128>(lo_part.get_ui());
  return sgn(z) < 0 ? -v : v;
}

mpz_class to_mpz(i128 v) {
  bool neg = v < 0;
  unsigned __int128 mag = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  mpz_class hi = static_cast<unsigned long>(mag >> 64);
  mpz_class lo = static_cast<unsigned long>(mag & 0xFFFFFFFFFFFFFFFFull);
  mpz_class out = (hi << 64) + lo;
  return neg ? mpz_class(-out) : out;
}

mpz_class to_mpz(const mpz_class& v) { return v; }

template <typename Int>
Int abs_of(const Int& v) {
  return v < 0 ? Int(-v) : v;
}

// Rational left kernel of A, i.e. solutions of A^T x = 0, written as
// x_pivot[r] = (sum_f numer[r][f] * x_free[f]) / denom.
struct KernelForm {
  std::vector<std::size_t> pivots;
  std::vector<std::size_t> frees;
  std::vector<std::vector<mpz_class>> numer;  // pivots.size() x frees.size()
  mpz_class denom = 1;
};

KernelForm left_kernel(const TorusHom& a) {
  const std::size_t n = a.rows(), m = a.cols();
  // RREF of A^T (m x n) over Q.
  std::vector<std::vector<mpq_class>> t(m, std::vector<mpq_class>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) t[j][i] = a(i, j);
  KernelForm k;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = row;
    while (piv < m && sgn(t[piv][col]) == 0) ++piv;
    if (piv == m) {
      k.frees.push_back(col);
      continue;
    }
    std::swap(t[piv], t[row]);
    mpq_class inv = 1 / t[row][col];
    for (auto& x : t[row]) x *= inv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == row || sgn(t[r][col]) == 0) continue;
      mpq_class f = t[r][col];
      for (std::size_t c = col; c < n; ++c) t[r][c] -= f * t[row][c];
    }
    k.pivots.push_back(col);
    ++row;
  }
  for (std::size_t r = 0; r < k.pivots.size(); ++r)
    for (auto f : k.frees) mpz_lcm(k.denom.get_mpz_t(), k.denom.get_mpz_t(), t[r][f].get_den_mpz_t());
  k.numer.assign(k.pivots.size(), std::vector<mpz_class>(k.frees.size()));
  for (std::size_t r = 0; r < k.pivots.size(); ++r)
    for (std::size_t f = 0; f < k.frees.size(); ++f) {
      mpq_class v = -t[r][k.frees[f]] * k.denom;
      k.numer[r][f] = v.get_num();
    }
  return k;
}

void make_primitive(IntVector& v) {
  mpz_class g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g > 1)
    for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  for (const auto& x : v) {
    if (sgn(x) == 0) continue;
    if (sgn(x) < 0)
      for (auto& y : v) y = -y;
    break;
  }
}

// Integer kernel vector obtained by setting one free coordinate to 1 and
// clearing denominators.
IntVector basis_vector(const KernelForm& k, std::size_t n, std::size_t f) {
  IntVector v(n, 0);
  v[k.frees[f]] = k.denom;
  for (std::size_t r = 0; r < k.pivots.size(); ++r) v[k.pivots[r]] = k.numer[r][f];
  make_primitive(v);
  return v;
}

bool lex_less(const IntVector& a, const IntVector& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Visits every free vector x with ||x|| = t, i.e. the surface of the box
// [-t, t]^nf, and keeps the best kernel vector seen so far: smallest sup
// norm, then lexicographically smallest with first nonzero entry positive.
template <typename Int>
struct SurfaceSearch {
  const KernelForm& k;
  std::size_t n;
  const std::vector<std::vector<Int>>& numer;
  const Int& denom;
  Int t;
  std::vector<Int> x, v;
  std::optional<Int> best_norm;
  std::optional<IntVector> best;

  void visit() {
    const std::size_t nf = k.frees.size(), np = k.pivots.size();
    Int norm = t;
    for (std::size_t f = 0; f < nf; ++f) v[k.frees[f]] = x[f];
    for (std::size_t r = 0; r < np; ++r) {
      Int acc = 0;
      for (std::size_t f = 0; f < nf; ++f) acc += numer[r][f] * x[f];
      if (acc % denom != 0) return;
      acc /= denom;
      Int mag = abs_of(acc);
      if (best_norm && mag > *best_norm) return;
      if (mag > norm) norm = mag;
      v[k.pivots[r]] = acc;
    }
    std::size_t first = 0;
    while (first < n && v[first] == 0) ++first;
    if (first == n || v[first] < 0) return;
    IntVector cand(n);
    for (std::size_t i = 0; i < n; ++i) cand[i] = to_mpz(v[i]);
    if (!best_norm || norm < *best_norm || lex_less(cand, *best)) {
      best_norm = norm;
      best = std::move(cand);
    }
  }

  void walk(std::size_t idx, bool on_surface) {
    if (idx == x.size()) {
      if (on_surface) visit();
      return;
    }
    if (idx + 1 == x.size() && !on_surface) {
      x[idx] = -t;
      visit();
      x[idx] = t;
      visit();
      return;
    }
    for (x[idx] = -t; x[idx] <= t; x[idx] += 1) walk(idx + 1, on_surface || abs_of(x[idx]) == t);
  }
};

// Every kernel vector has ||v|| >= ||x_free||, so once the free shell index
// exceeds the best norm found, nothing smaller remains.
template <typename Int>
BoydHeight shell_search(const KernelForm& k, std::size_t n, const mpz_class& ceiling,
                        Int (*convert)(const mpz_class&)) {
  std::vector<std::vector<Int>> numer(k.pivots.size(), std::vector<Int>(k.frees.size()));
  for (std::size_t r = 0; r < k.pivots.size(); ++r)
    for (std::size_t f = 0; f < k.frees.size(); ++f) numer[r][f] = convert(k.numer[r][f]);
  Int denom = convert(k.denom);
  SurfaceSearch<Int> s{k, n, numer, denom, Int(0), std::vector<Int>(k.frees.size()), std::vector<Int>(n), {}, {}};
  const Int top = convert(ceiling);
  for (s.t = 1; s.t <= top; s.t += 1) {
    if (s.best_norm && s.t > *s.best_norm) break;
    s.walk(0, false);
  }
  if (!s.best) throw ComputationError("boyd_height: no annihilator found below the kernel ceiling");
  return BoydHeight::finite(to_mpz(*s.best_norm), *s.best);
}

mpz_class identity_convert(const mpz_class& z) { return z; }

}  // namespace

BoydHeight boyd_height(const TorusHom& a) {
  const std::size_t n = a.rows();
  if (integer_rank(a) == n) return BoydHeight::infinite();
  KernelForm k = left_kernel(a);

  std::optional<IntVector> shortest_basis;
  for (std::size_t f = 0; f < k.frees.size(); ++f) {
    IntVector v = basis_vector(k, n, f);
    if (!shortest_basis || sup_norm(v) < sup_norm(*shortest_basis)) shortest_basis = std::move(v);
  }
  mpz_class ceiling = sup_norm(*shortest_basis);

  // A rank-one kernel lattice is generated by its primitive vector.
  if (k.frees.size() == 1) return BoydHeight::finite(ceiling, *shortest_basis);

  mpz_class max_numer = k.denom;
  for (const auto& row : k.numer)
    for (const auto& x : row) max_numer = std::max(max_numer, mpz_class(abs(x)));
  mpz_class bound = max_numer * ceiling * static_cast<unsigned long>(k.frees.size() + 1);
  if (mpz_sizeinbase(bound.get_mpz_t(), 2) < 120) return shell_search<i128>(k, n, ceiling, &to_i128);
  return shell_search<mpz_class>(k, n, ceiling, &identity_convert);
}

// ---------------------------------------------------------------------------
// Text format

TorusHom parse_matrix(std::string_view text) {
  std::vector<IntVector> rows;
  IntVector current;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  for (;;) {
    skip_ws();
    std::size_t start = pos;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
    std::size_t digits_start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (digits_start == pos) throw ParseError("expected integer matrix entry", start);
    std::string tok(text.substr(start, pos - start));
    if (tok[0] == '+') tok.erase(0, 1);
    current.emplace_back(tok, 10);
    skip_ws();
    if (pos == text.size()) {
      rows.push_back(std::move(current));
      break;
    }
    if (text[pos] == ',') {
      ++pos;
    } else if (text[pos] == ';') {
      rows.push_back(std::move(current));
      current.clear();
      ++pos;
    } else {
      throw ParseError("expected ',' or ';' in matrix", pos);
    }
  }
  for (const auto& r : rows)
    if (r.size() != rows.front().size()) throw ParseError("matrix rows have different lengths", text.size());
  return TorusHom(rows);
}

std::string format_matrix(const TorusHom& a) {
  std::string out;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (i) out += ';';
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) out += ',';
      out += a(i, j).get_str();
    }
  }
  return out;
}

}  // namespace mahler
