#include "qfcert/constants.hpp"

#include <cctype>
#include <cstdlib>
#include <numeric>

namespace qfcert {

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (den == 0) throw Error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
}

Rational Rational::inverse() const {
  if (num == 0) throw Error("inverse of zero");
  return Rational(den, num);
}

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

Rational Rational::parse(const std::string& text) {
  auto bad = [&] { throw Error("cannot parse rational '" + text + "'"); };
  if (text.empty()) bad();
  size_t pos = 0;
  auto read_int = [&]() -> long long {
    size_t start = pos;
    if (pos < text.size() && text[pos] == '-') ++pos;
    size_t digits = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      ++pos;
      ++digits;
    }
    if (digits == 0) bad();
    return std::strtoll(text.substr(start, pos - start).c_str(), nullptr, 10);
  };
  long long n = read_int();
  long long d = 1;
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    d = read_int();
  }
  if (pos != text.size()) bad();
  return Rational(n, d);
}

ConstVal ConstVal::inverse() const {
  if (is_zero()) throw Error("inverse of zero constant");
  ConstVal r;
  r.coeff = coeff.inverse();
  r.sym = sym;
  r.sym_exp = -sym_exp;
  return r;
}

std::string ConstVal::str() const {
  if (sym.empty() || sym_exp == 0) return coeff.str();
  if (sym_exp == 1) {
    if (coeff.is_one()) return sym;
    return coeff.str() + "*" + sym;
  }
  // coeff * sym^-1 == num / (den * sym)
  if (coeff.is_one()) return "1/" + sym;
  if (coeff.den == 1) return std::to_string(coeff.num) + "/" + sym;
  return std::to_string(coeff.num) + "/(" + std::to_string(coeff.den) + "*" + sym + ")";
}

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

ConstVal ConstVal::parse(const std::string& text) {
  auto bad = [&] { throw Error("cannot parse constant '" + text + "'"); };
  if (text.empty()) bad();

  auto normalized = [](Rational r, std::string name, int exp) {
    ConstVal v;
    v.coeff = r;
    if (r.is_zero() || name.empty()) {
      v.sym.clear();
      v.sym_exp = 0;
    } else {
      v.sym = std::move(name);
      v.sym_exp = exp;
    }
    return v;
  };

  // num/(den*name)
  auto paren = text.find("/(");
  if (paren != std::string::npos) {
    if (text.back() != ')') bad();
    std::string left = text.substr(0, paren);
    std::string inner = text.substr(paren + 2, text.size() - paren - 3);
    auto star = inner.find('*');
    if (star == std::string::npos) bad();
    std::string den = inner.substr(0, star);
    std::string name = inner.substr(star + 1);
    if (!is_identifier(name)) bad();
    Rational n = Rational::parse(left);
    Rational d = Rational::parse(den);
    if (d.is_zero()) bad();
    return normalized(Rational(n.num * d.den, n.den * d.num), name, -1);
  }

  auto star = text.find('*');
  if (star != std::string::npos) {
    std::string name = text.substr(star + 1);
    if (!is_identifier(name)) bad();
    return normalized(Rational::parse(text.substr(0, star)), name, 1);
  }

  auto slash = text.find('/');
  if (slash != std::string::npos &&
      std::isalpha(static_cast<unsigned char>(text[slash + 1]))) {
    std::string name = text.substr(slash + 1);
    if (!is_identifier(name)) bad();
    return normalized(Rational::parse(text.substr(0, slash)), name, -1);
  }

  if (std::isalpha(static_cast<unsigned char>(text[0])) || text[0] == '_') {
    if (!is_identifier(text)) bad();
    return normalized(Rational(1, 1), text, 1);
  }
  return normalized(Rational::parse(text), "", 0);
}

ConstVal ConstVal::zero() { return ConstVal{}; }

ConstVal ConstVal::integer(long long n) {
  ConstVal v;
  v.coeff = Rational(n, 1);
  return v;
}

ConstVal ConstVal::rational(const Rational& r) {
  ConstVal v;
  v.coeff = r;
  return v;
}

ConstVal ConstVal::symbol(const std::string& name) {
  if (!is_identifier(name)) throw Error("bad constant name '" + name + "'");
  ConstVal v;
  v.coeff = Rational(1, 1);
  v.sym = name;
  v.sym_exp = 1;
  return v;
}

}  // namespace qfcert
