#pragma once

#include <string>

#include "qfcert/errors.hpp"

namespace qfcert {

// Exact rational number.  Values stay tiny (factor roots and their
// reciprocals), so long long is plenty.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d);

  bool is_zero() const { return num == 0; }
  bool is_one() const { return num == 1 && den == 1; }
  Rational inverse() const;

  friend bool operator==(const Rational&, const Rational&) = default;

  std::string str() const;
  static Rational parse(const std::string& text);
};

// A constant of the (algebraically closed) coefficient field, of the shape
// coeff * sym^exp with exp in {-1, 0, +1} and sym an opaque transcendental
// name.  The engine only ever compares constants for equality and inverts
// them; since distinct opaque names are algebraically independent, distinct
// normal forms denote distinct field elements, which is all we need.
struct ConstVal {
  Rational coeff;
  std::string sym;  // empty when the constant is rational
  int sym_exp = 0;  // -1, 0 or +1

  bool is_zero() const { return coeff.is_zero(); }
  ConstVal inverse() const;

  friend bool operator==(const ConstVal&, const ConstVal&) = default;

  std::string str() const;
  static ConstVal parse(const std::string& text);

  static ConstVal zero();
  static ConstVal integer(long long n);
  static ConstVal rational(const Rational& r);
  static ConstVal symbol(const std::string& name);
};

bool is_identifier(const std::string& s);

}  // namespace qfcert
