#include <cmath>

#include "doctest.h"

#include "bergman/acceptance.hpp"
#include "bergman/symbol_dsl.hpp"

using namespace bergman;

TEST_CASE("evaluation examples") {
  CHECK(dsl::eval(dsl::parse("1"), 0.0) == 1.0);
  CHECK(dsl::eval(dsl::parse("(1-r^2)^0.5"), 0.0) == 1.0);
  CHECK(dsl::eval(dsl::parse("x*x+y*y"), Complex(0.3, 0.4)) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(dsl::eval(dsl::parse("2*(1-r^2)"), 0.0) == 2.0);
  CHECK(dsl::eval(dsl::parse("chi_pos(x)"), -0.5) == 0.0);
  CHECK(dsl::eval(dsl::parse("chi_pos(x)"), 0.0) == 0.0);
  CHECK(dsl::eval(dsl::parse("theta"), -0.5) == doctest::Approx(kPi));
  CHECK(dsl::eval(dsl::parse("pi"), 0.0) == doctest::Approx(kPi));
}

TEST_CASE("precedence") {
  CHECK(dsl::eval(dsl::parse("2^3^2"), 0.0) == 512.0);
  CHECK(dsl::eval(dsl::parse("-2^2"), 0.0) == -4.0);
  CHECK(dsl::eval(dsl::parse("1+2*3"), 0.0) == 7.0);
  CHECK(dsl::eval(dsl::parse("2*3^2"), 0.0) == 18.0);
  CHECK(dsl::eval(dsl::parse("8/2/2"), 0.0) == 2.0);
  CHECK(dsl::eval(dsl::parse("2^-1"), 0.0) == 0.5);
}

TEST_CASE("syntax errors carry offsets") {
  try {
    dsl::parse("1+");
    FAIL("expected a parse error");
  } catch (const dsl::ParseError& e) {
    CHECK(e.offset() == 2);
  }
  CHECK_THROWS_AS(dsl::parse("foo(x)"), dsl::ParseError);
  CHECK_THROWS_AS(dsl::parse("q"), dsl::ParseError);
  CHECK_THROWS_AS(dsl::parse("(1"), dsl::ParseError);
  CHECK_THROWS_AS(dsl::parse("1 2"), dsl::ParseError);
}

TEST_CASE("domain errors quote the subexpression") {
  try {
    dsl::eval(dsl::parse("1+log(x)"), -0.5);
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("log") != std::string::npos);
  }
  CHECK_THROWS_AS(dsl::eval(dsl::parse("1/x"), 0.0), DomainError);
  CHECK_THROWS_AS(dsl::eval(dsl::parse("x"), 1.0), DomainError);
}

TEST_CASE("corpus round-trips") {
  REQUIRE(acceptance::dsl_corpus().size() == 50);
  for (const auto& s : acceptance::dsl_corpus()) {
    const dsl::Expr e = dsl::parse(s);
    CHECK_MESSAGE(dsl::parse(dsl::print(e)) == e, s);
    CHECK(dsl::print(dsl::parse(dsl::print(e))) == dsl::print(e));
  }
}

TEST_CASE("r^2 equals x*x+y*y pointwise") {
  const dsl::Expr a = dsl::parse("r^2"), b = dsl::parse("x*x+y*y");
  for (int i = 0; i < 1000; ++i) {
    const Complex z = std::polar(std::sqrt((i + 0.5) / 1000.0) * 0.999, 2.399963229728653 * i);
    CHECK(std::abs(a(z) - b(z)) <= 1e-14);
  }
}
