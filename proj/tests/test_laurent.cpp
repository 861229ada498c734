#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mahler/errors.hpp"
#include "mahler/laurent.hpp"
#include "mahler/torushom.hpp"
#include "oracles.hpp"

using namespace mahler;

TEST_CASE("parse builds the term map") {
  LaurentPoly p = parse_poly("Z1 + Z2 + 1");
  CHECK(p.nvars() == 2);
  CHECK(p.size() == 3);

  CHECK(parse_poly("Z1^-1*Z2 - Z1^-1*Z2").is_zero());

  LaurentPoly c = parse_poly("(2+1i)*Z1^3");
  REQUIRE(c.size() == 1);
  const auto& [e, coef] = *c.terms().begin();
  CHECK(e == ExponentVector{3});
  CHECK(coef == Coefficient(2, 1));
}

TEST_CASE("parse accepts rationals, decimals and imaginary units") {
  LaurentPoly p = parse_poly("(1/2)*Z1^2*Z2^-1 - 3 + 2i*Z3");
  CHECK(p.nvars() == 3);
  CHECK(p.terms().at({2, -1, 0}) == Coefficient(mpq_class(1, 2)));
  CHECK(p.terms().at({0, 0, 0}) == Coefficient(-3));
  CHECK(p.terms().at({0, 0, 1}) == Coefficient(0, 2));
  CHECK(parse_poly("0.25*Z1").terms().at({1}) == Coefficient(mpq_class(1, 4)));
  CHECK(parse_poly("-Z1 + Z1").is_zero());
  CHECK(parse_poly("010*Z1^010").terms().at({10}) == Coefficient(10));
  CHECK(parse_poly("Z1", 3).nvars() == 3);
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(parse_poly("Z1 +"), ParseError);
  CHECK_THROWS_AS(parse_poly("Z0"), ParseError);
  CHECK_THROWS_AS(parse_poly("1/0"), ParseError);
  CHECK_THROWS_AS(parse_poly("Z1 ^ x"), ParseError);
  try {
    parse_poly("Z1 + * Z2");
    FAIL("no throw");
  } catch (const ParseError& e) {
    CHECK(e.position() == 5);
  }
  CHECK_THROWS_AS(parse_poly("Z3", 2), DimensionError);
}

TEST_CASE("format is canonical") {
  CHECK(format_poly(LaurentPoly(2)) == "0");
  CHECK(format_poly(parse_poly("Z2+Z1")) == "Z1 + Z2");
  CHECK(format_poly(parse_poly("3*Z1^-2")) == "3*Z1^-2");
  CHECK(format_poly(parse_poly("1 - Z1")) == "-Z1 + 1");
  CHECK(format_poly(parse_poly("(1/2)*Z1 + (2+1i)")) == "(1/2)*Z1 + (2+1i)");
}

TEST_CASE("format round trips random polynomials") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> e(-6, 6), c(-7, 7), d(1, 5), n(1, 4);
  for (int t = 0; t < 200; ++t) {
    std::size_t vars = static_cast<std::size_t>(n(rng));
    LaurentPoly p(vars);
    for (int k = 0; k < 5; ++k) {
      ExponentVector v(vars);
      for (auto& x : v) x = e(rng);
      mpq_class re(c(rng), d(rng)), im(c(rng) % 2, d(rng));
      re.canonicalize();
      im.canonicalize();
      p.add_term(v, Coefficient(re, im));
    }
    INFO(format_poly(p));
    CHECK(parse_poly(format_poly(p), vars) == p);
  }
}

TEST_CASE("evaluate on the torus") {
  auto z = evaluate(parse_poly("Z1"), TorusPoint{{0.25}});
  CHECK(std::abs(z - std::complex<double>(0, 1)) < 1e-14);
  for (double t : {0.0, 0.1, 0.37, 0.9}) {
    auto v = evaluate(parse_poly("Z1 + Z1^-1"), TorusPoint{{t}});
    CHECK(std::abs(v - 2 * std::cos(2 * oracle::pi * t)) < 1e-14);
  }
  CHECK(std::abs(evaluate(parse_poly("Z1+Z2+1"), TorusPoint{{1.0 / 3, 2.0 / 3}})) < 1e-12);
  CHECK_THROWS_AS(evaluate(parse_poly("Z1+Z2"), TorusPoint{{0.5}}), DimensionError);
}

TEST_CASE("TorusEvaluator matches direct evaluation, including huge exponents") {
  LaurentPoly p = parse_poly("Z1^1000003*Z2^-7 + (1/3)*Z2^250 - 2");
  TorusEvaluator ev(p);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 50; ++t) {
    double a[2] = {u(rng), u(rng)};
    std::complex<double> expect = 0;
    for (const auto& [e, c] : p.terms()) {
      long double ph = std::fmod(static_cast<long double>(e[0]) * a[0] + static_cast<long double>(e[1]) * a[1], 1.0L);
      expect += c.to_complex() * std::polar(1.0, static_cast<double>(2 * oracle::pi * ph));
    }
    CHECK(std::abs(ev(std::span<const double>(a, 2)) - expect) < 1e-9);
  }
  CHECK(TorusEvaluator(parse_poly("3*Z1^5*Z2")).log_abs(std::vector<double>{0.1, 0.2}) == doctest::Approx(std::log(3.0)));
}

TEST_CASE("substitute applies the transpose to exponents") {
  TorusHom ones(std::vector<IntVector>{{1}, {1}});
  TorusHom alt(std::vector<IntVector>{{1}, {-1}});
  CHECK(substitute(parse_poly("Z1+Z2+1"), ones) == parse_poly("2*Z1 + 1"));
  CHECK(substitute(parse_poly("Z1+Z2"), alt) == parse_poly("Z1 + Z1^-1"));
  CHECK(substitute(parse_poly("Z1-Z2"), ones).is_zero());
  CHECK(is_zero(substitute(parse_poly("Z1-Z2"), ones)));
  CHECK_THROWS_AS(substitute(parse_poly("Z1+Z2+Z3"), ones), DimensionError);
}

TEST_CASE("substitution overflow is reported") {
  TorusHom big(std::vector<IntVector>{{mpz_class("100000000000000000000")}});
  CHECK_THROWS_AS(substitute(parse_poly("Z1"), big), ComputationError);
}

TEST_CASE("strip_monomial") {
  MonomialSplit a = strip_monomial(parse_poly("Z1^-1 + Z2"));
  CHECK(a.k == ExponentVector{1, 0});
  CHECK(a.q == parse_poly("1 + Z1*Z2"));
  MonomialSplit b = strip_monomial(parse_poly("Z1^2 + Z1"));
  CHECK(b.k == ExponentVector{0});
  CHECK(b.q == parse_poly("Z1^2 + Z1"));
  MonomialSplit c = strip_monomial(parse_poly("Z1^-2*Z2^-1"));
  CHECK(c.k == ExponentVector{2, 1});
  CHECK(c.q == parse_poly("1", 2));
}

TEST_CASE("multiply") {
  CHECK(multiply(parse_poly("Z1-1"), parse_poly("Z1+1")) == parse_poly("Z1^2 - 1"));
  CHECK(multiply(parse_poly("Z1-1"), LaurentPoly(1)).is_zero());
  CHECK(multiply(parse_poly("Z1+Z1^-1"), parse_poly("Z1+Z1^-1")) == parse_poly("Z1^2 + 2 + Z1^-2"));
  CHECK(multiply(parse_poly("(1+1i)"), parse_poly("(1-1i)")) == parse_poly("2"));
}

TEST_CASE("is_zero") {
  CHECK(LaurentPoly(1).is_zero());
  CHECK_FALSE(parse_poly("Z1").is_zero());
}
