#pragma once

#include <json.hpp>

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qfcert/constants.hpp"
#include "qfcert/errors.hpp"

// Model of the square-class group K^x/K^x2 of a rational function field
// K = k(x_1..x_n) over an algebraically closed field k of characteristic
// not 2.  Constants are squares, so a square class is an F2-vector over a
// declared finite set of irreducible polynomial generators; every declared
// generator is linear in a single variable (the variable itself or
// x_i - c with c a nonzero constant).

namespace qfcert {

using json = nlohmann::json;

struct ResidueClass {
  enum class Kind { TrivialSquare, NonzeroConstant, GeneratorClass };
  Kind kind = Kind::TrivialSquare;
  std::string generator;  // only for GeneratorClass

  static ResidueClass trivial() { return {Kind::TrivialSquare, ""}; }
  static ResidueClass nonzero_constant() { return {Kind::NonzeroConstant, ""}; }
  static ResidueClass generator_class(const std::string& g) {
    return {Kind::GeneratorClass, g};
  }
  friend bool operator==(const ResidueClass&, const ResidueClass&) = default;
  std::string str() const;
};

struct IrreducibleGen {
  std::string name;
  std::set<std::string> variable_support;
  std::optional<std::string> univariate_in;
  std::map<std::string, int> degree_in_variable;
  bool nonzero_at_origin = false;
  ConstVal constant;  // generator is (variable - constant); 0 for the variable
  bool is_variable_gen = false;
  std::optional<std::string> reciprocal_image;
  // Keyed by the name of the generator whose divisorial valuation we reduce
  // at.  Never contains an entry for this generator's own valuation.
  std::map<std::string, ResidueClass> reduction_table;

  int degree_in(const std::string& var) const;
};

struct FieldInstance;
using FieldInstancePtr = std::shared_ptr<const FieldInstance>;

struct FieldInstance {
  int n = 0;  // number of variables; 0 only for residue/abstract instances
  std::vector<std::string> variables;
  std::vector<std::string> constants;  // opaque transcendental names
  std::vector<IrreducibleGen> generators;
  // Transcendence degree of the field over k (an upper bound for abstract
  // residue instances); feeds the cohomological-dimension vanishing rule.
  int transcendence_bound = 0;
  std::string label;

  const IrreducibleGen* find_gen(const std::string& name) const;
  const IrreducibleGen& gen(const std::string& name) const;
  bool has_variable(const std::string& name) const;
  std::vector<std::string> factor_names_of(const std::string& var) const;
  int gen_index(const std::string& name) const;
  std::string structural_key() const;
  void validate() const;
};

bool same_instance(const FieldInstancePtr& a, const FieldInstancePtr& b);

struct SquareClass {
  FieldInstancePtr instance;
  std::set<std::string> support;

  bool is_trivial() const { return support.empty(); }
  std::string str() const;  // product in declaration order, "1" when trivial
  friend bool operator==(const SquareClass& a, const SquareClass& b) {
    return a.support == b.support;
  }
};

// One case of the finite valuation schema: which variables lie in the
// center prime of the valuation and which declared factors do.
struct ValuationCase {
  std::set<std::string> positive_variables;
  std::map<std::string, bool> factor_in_ideal;
  int residue_transcendence_bound = 0;

  bool in_ideal(const std::string& gen_name, const FieldInstance& inst) const;
  json to_json() const;
  static ValuationCase from_json(const json& j);
};

struct Valuation {
  enum class Kind { DivisorialAtGenerator, AtInfinityInVariable, AbstractCase };
  Kind kind = Kind::DivisorialAtGenerator;
  std::string at;  // generator name / variable name; empty for abstract
  std::optional<ValuationCase> case_data;

  static Valuation divisorial(const std::string& gen);
  static Valuation at_infinity(const std::string& var);
  static Valuation abstract_case(const ValuationCase& c);
  std::string str() const;                     // "div:<gen>" or "inf:<var>"
  static Valuation parse(const std::string&);  // inverse of str()
};

struct FactorSpec {
  std::string name;
  ConstVal constant;
  bool nonzero_at_origin = true;
};

struct InstanceSpec {
  int n = 0;
  std::vector<std::string> variables;
  std::vector<std::string> constants;
  std::map<std::string, std::vector<FactorSpec>> factors;
};

// Construction.  Every variable's factor list must have even total degree,
// all factors nonvanishing at the origin, names pairwise distinct.
FieldInstancePtr make_instance(const InstanceSpec& spec);

// Variables x(,y,z | x1..xn) with per-variable factors (x-1)(x-c_i) for
// declared transcendental constants c_i: the shape cut out by a product of
// Legendre-form elliptic curves.
FieldInstancePtr make_legendre_instance(int n, const std::vector<std::string>& constant_names);

std::vector<std::string> default_variable_names(int n);
std::vector<std::string> default_constant_names(int n);
std::string canonical_factor_name(const std::string& var, const ConstVal& c);

SquareClass trivial_class(const FieldInstancePtr& inst);
SquareClass class_of(const FieldInstancePtr& inst, const std::vector<std::string>& gens);
SquareClass class_mul(const SquareClass& a, const SquareClass& b);

int valuation_parity(const SquareClass& a, const Valuation& v);

// Residue field of the divisorial valuation at a (linear, univariate)
// generator: one variable fewer, the other variables' generators surviving
// under the same names.
FieldInstancePtr residue_instance(const FieldInstancePtr& inst, const std::string& gen_name);

struct Reduction {
  std::vector<std::pair<std::string, ResidueClass>> parts;  // per support generator
  SquareClass residue_class;                                // over the residue instance
};

// Reduce an unramified class at a divisorial valuation.  Precondition:
// valuation parity 0.  Missing table entries raise UndeterminedReduction.
Reduction reduce_class(const SquareClass& a, const Valuation& v);

struct ReciprocalResult {
  FieldInstancePtr instance;
  // old generator name -> generator name in the transformed instance
  std::map<std::string, std::string> image;
};

// Substitute x -> 1/x in one variable: each factor list of even total degree
// maps to its reciprocal list, preserving the square class of x*f(x) and the
// quadratic extension defined by the full product.
ReciprocalResult reciprocal_transform(const FieldInstancePtr& inst, const std::string& var);

// Image of a square class under the reciprocal substitution: x -> {x},
// (x - c) -> {x, x - 1/c}, generators in other variables unchanged.
SquareClass map_class_through_reciprocal(const SquareClass& a, const ReciprocalResult& rr,
                                         const std::string& var);

// Instance configuration file (stable key order; errors name line/field).
json instance_to_json(const FieldInstance& inst);
FieldInstancePtr instance_from_json(const json& j);
FieldInstancePtr instance_from_text(const std::string& text);
FieldInstancePtr load_instance_file(const std::string& path);

json class_to_json(const SquareClass& a);
SquareClass class_from_json(const FieldInstancePtr& inst, const json& j);

}  // namespace qfcert
