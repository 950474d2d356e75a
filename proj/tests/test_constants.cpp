#include <doctest.h>

#include "qfcert/constants.hpp"

using namespace qfcert;

TEST_CASE("rationals normalize and round-trip") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-3, -6) == Rational(1, 2));
  CHECK(Rational(3, -6) == Rational(-1, 2));
  CHECK(Rational(0, 5) == Rational(0, 1));
  CHECK(Rational(1, 2).str() == "1/2");
  CHECK(Rational(-7, 1).str() == "-7");
  CHECK(Rational::parse("4/6") == Rational(2, 3));
  CHECK(Rational::parse("-5") == Rational(-5, 1));
  CHECK(Rational::parse(Rational(-9, 4).str()) == Rational(-9, 4));
  CHECK_THROWS_AS(Rational::parse("1/0"), Error);
  CHECK_THROWS_AS(Rational::parse(""), Error);
  CHECK_THROWS_AS(Rational::parse("2x"), Error);
  CHECK_THROWS_AS(Rational(1, 0), Error);
}

TEST_CASE("rational inverse") {
  CHECK(Rational(2, 3).inverse() == Rational(3, 2));
  CHECK(Rational(-1, 4).inverse() == Rational(-4, 1));
  CHECK_THROWS_AS(Rational(0, 1).inverse(), Error);
}

TEST_CASE("constants: shapes and equality") {
  CHECK(ConstVal::integer(1).is_zero() == false);
  CHECK(ConstVal::zero().is_zero());
  CHECK(ConstVal::integer(3) == ConstVal::rational(Rational(3, 1)));
  CHECK(ConstVal::symbol("lambda") != ConstVal::symbol("kappa"));
  CHECK(ConstVal::symbol("lambda") != ConstVal::integer(1));
  CHECK_THROWS_AS(ConstVal::symbol("2bad"), Error);
}

TEST_CASE("constants: inversion flips the symbol exponent") {
  ConstVal l = ConstVal::symbol("lambda");
  ConstVal inv = l.inverse();
  CHECK(inv.sym == "lambda");
  CHECK(inv.sym_exp == -1);
  CHECK(inv.inverse() == l);
  CHECK_THROWS_AS(ConstVal::zero().inverse(), Error);

  ConstVal half = ConstVal::rational(Rational(1, 2));
  CHECK(half.inverse() == ConstVal::integer(2));
}

TEST_CASE("constants: parse/str round trips") {
  for (const char* text : {"1", "-2", "2/3", "lambda", "3*kappa", "1/nu", "-5/(2*mu)"}) {
    ConstVal v = ConstVal::parse(text);
    CHECK(ConstVal::parse(v.str()) == v);
  }
  CHECK(ConstVal::parse("lambda") == ConstVal::symbol("lambda"));
  CHECK(ConstVal::parse("1/lambda") == ConstVal::symbol("lambda").inverse());
  CHECK(ConstVal::parse("2/3") == ConstVal::rational(Rational(2, 3)));
  CHECK_THROWS_AS(ConstVal::parse("lambda*kappa"), Error);
  CHECK_THROWS_AS(ConstVal::parse(""), Error);
}

TEST_CASE("identifier predicate") {
  CHECK(is_identifier("x1"));
  CHECK(is_identifier("lambda"));
  CHECK(is_identifier("_t"));
  CHECK(!is_identifier("1x"));
  CHECK(!is_identifier("a-b"));
  CHECK(!is_identifier(""));
}
