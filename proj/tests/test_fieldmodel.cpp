#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "qfcert/fieldmodel.hpp"

using namespace qfcert;

namespace {
FieldInstancePtr leg(int n) { return make_legendre_instance(n, default_constant_names(n)); }

template <typename E, typename F>
bool throws_containing(F&& fn, const std::string& needle) {
  try {
    fn();
  } catch (const E& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  } catch (...) {
    return false;
  }
  return false;
}
}  // namespace

TEST_CASE("legendre instance layout") {
  auto inst = leg(2);
  CHECK(inst->n == 2);
  CHECK(inst->variables == std::vector<std::string>{"x", "y"});
  CHECK(inst->constants == std::vector<std::string>{"lambda", "kappa"});
  std::vector<std::string> names;
  for (const auto& g : inst->generators) names.push_back(g.name);
  CHECK(names == std::vector<std::string>{"x", "x-1", "x-lambda", "y", "y-1", "y-kappa"});
  CHECK(inst->factor_names_of("x") == std::vector<std::string>{"x-1", "x-lambda"});
  CHECK(inst->gen("x").is_variable_gen);
  CHECK(inst->gen("x-1").nonzero_at_origin);
  CHECK(inst->gen("x-lambda").constant == ConstVal::symbol("lambda"));
  CHECK(inst->transcendence_bound == 2);
  CHECK_NOTHROW(inst->validate());

  auto big = leg(4);
  CHECK(big->variables == std::vector<std::string>{"x1", "x2", "x3", "x4"});
  CHECK(big->constants ==
        std::vector<std::string>{"lambda1", "lambda2", "lambda3", "lambda4"});
}

TEST_CASE("make_instance rejects ill-formed declarations") {
  InstanceSpec spec;
  spec.n = 1;
  spec.variables = {"x"};
  spec.constants = {};
  spec.factors["x"] = {{"x-1", ConstVal::integer(1), true}};
  CHECK(throws_containing<Precondition>([&] { make_instance(spec); }, "odd degree"));

  spec.factors["x"] = {{"x-1", ConstVal::integer(1), true},
                       {"x-0", ConstVal::zero(), false}};
  CHECK(throws_containing<Precondition>([&] { make_instance(spec); },
                                        "vanishes at the origin"));

  spec.factors["x"] = {{"x-1", ConstVal::integer(1), true},
                       {"x-1", ConstVal::integer(1), true}};
  CHECK_THROWS_AS(static_cast<void>(make_instance(spec)), Error);
}

TEST_CASE("square classes drop signs and square factors") {
  auto inst = leg(2);
  CHECK(trivial_class(inst).is_trivial());
  CHECK(class_of(inst, {"x", "x"}).is_trivial());
  SquareClass a = class_of(inst, {"x", "y"});
  SquareClass b = class_of(inst, {"y", "x-1"});
  SquareClass p = class_mul(a, b);
  CHECK(p.support == std::set<std::string>{"x", "x-1"});
  CHECK(class_mul(p, p).is_trivial());
  CHECK(class_of(inst, {"x"}).str() == "x");
  CHECK_THROWS_AS(static_cast<void>(class_of(inst, {"w"})), Error);
}

TEST_CASE("valuation parity counts odd exponents") {
  auto inst = leg(2);
  CHECK(valuation_parity(class_of(inst, {"x"}), Valuation::divisorial("x")) == 1);
  CHECK(valuation_parity(class_of(inst, {"x"}), Valuation::divisorial("y")) == 0);
  CHECK(valuation_parity(class_of(inst, {"x", "x-1"}), Valuation::divisorial("x")) == 1);
  CHECK(valuation_parity(class_of(inst, {"x"}), Valuation::at_infinity("x")) == 1);
  CHECK(valuation_parity(class_of(inst, {"x", "y"}), Valuation::at_infinity("x")) == 1);
  CHECK(valuation_parity(class_of(inst, {"x-1"}), Valuation::at_infinity("x")) == 1);
  CHECK(valuation_parity(class_of(inst, {"x", "x-1"}), Valuation::at_infinity("x")) == 0);
}

TEST_CASE("reduction of units at a divisor") {
  auto inst = leg(2);

  // x at div(x-1) reduces to the constant 1
  Reduction r = reduce_class(class_of(inst, {"x"}), Valuation::divisorial("x-1"));
  REQUIRE(r.parts.size() == 1);
  CHECK(r.parts[0].first == "x");
  CHECK(r.parts[0].second.kind == ResidueClass::Kind::NonzeroConstant);
  CHECK(r.residue_class.is_trivial());

  // x-lambda at div(x) reduces to the nonzero constant -lambda
  Reduction r2 = reduce_class(class_of(inst, {"x-lambda"}), Valuation::divisorial("x"));
  REQUIRE(r2.parts.size() == 1);
  CHECK(r2.parts[0].second.kind == ResidueClass::Kind::NonzeroConstant);
  CHECK(r2.residue_class.is_trivial());

  // y at div(x) stays the generator y of the residue field
  Reduction r3 = reduce_class(class_of(inst, {"y"}), Valuation::divisorial("x"));
  REQUIRE(r3.parts.size() == 1);
  CHECK(r3.parts[0].second.kind == ResidueClass::Kind::GeneratorClass);
  CHECK(r3.residue_class.support == std::set<std::string>{"y"});

  // reduction needs a unit
  CHECK_THROWS_AS(static_cast<void>(
                      reduce_class(class_of(inst, {"x"}), Valuation::divisorial("x"))),
                  Precondition);
}

TEST_CASE("residue instance forgets one generator and drops the bound") {
  auto inst = leg(2);
  auto res = residue_instance(inst, "x");
  CHECK(res->transcendence_bound == 1);
  CHECK(res->find_gen("x") == nullptr);
  CHECK(res->find_gen("y") != nullptr);
  CHECK_NOTHROW(res->validate());
}

TEST_CASE("reciprocal transform inverts one coordinate") {
  auto inst = leg(2);
  ReciprocalResult rr = reciprocal_transform(inst, "x");
  CHECK_NOTHROW(rr.instance->validate());

  // x -> x, (x-1) -> (x-1), (x-lambda) -> (x-1/lambda)
  SquareClass ix = map_class_through_reciprocal(class_of(inst, {"x"}), rr, "x");
  CHECK(ix.support == std::set<std::string>{"x"});
  SquareClass i1 = map_class_through_reciprocal(class_of(inst, {"x-1"}), rr, "x");
  CHECK(i1.support == std::set<std::string>{"x", "x-1"});
  SquareClass il = map_class_through_reciprocal(class_of(inst, {"x-lambda"}), rr, "x");
  REQUIRE(il.support.size() == 2);
  CHECK(il.support.count("x") == 1);
  std::string other;
  for (const auto& g : il.support)
    if (g != "x") other = g;
  CHECK(rr.instance->gen(other).constant == ConstVal::symbol("lambda").inverse());

  // the untouched coordinate passes through
  SquareClass iy = map_class_through_reciprocal(class_of(inst, {"y"}), rr, "x");
  CHECK(iy.support == std::set<std::string>{"y"});
}

TEST_CASE("valuations parse and print") {
  CHECK(Valuation::divisorial("x-1").str() == "div:x-1");
  CHECK(Valuation::at_infinity("x").str() == "inf:x");
  CHECK(Valuation::parse("div:x-1").kind == Valuation::Kind::DivisorialAtGenerator);
  CHECK(Valuation::parse("inf:y").at == "y");
  CHECK_THROWS_AS(static_cast<void>(Valuation::parse("deg:x")), Error);

  ValuationCase c;
  c.positive_variables = {"x"};
  c.factor_in_ideal["y-1"] = true;
  c.residue_transcendence_bound = 1;
  ValuationCase back = ValuationCase::from_json(c.to_json());
  CHECK(back.positive_variables == c.positive_variables);
  CHECK(back.factor_in_ideal == c.factor_in_ideal);
  CHECK(back.residue_transcendence_bound == 1);

  auto inst = leg(2);
  CHECK(c.in_ideal("x", *inst));
  CHECK(!c.in_ideal("x-1", *inst));
  CHECK(c.in_ideal("y-1", *inst));
  CHECK(!c.in_ideal("y", *inst));
}

TEST_CASE("instances serialize, round-trip, and load from disk") {
  auto inst = leg(3);
  nlohmann::json j = instance_to_json(*inst);
  auto back = instance_from_json(j);
  CHECK(same_instance(inst, back));
  CHECK(instance_to_json(*back).dump() == j.dump());

  std::string path = "tmp_instance_roundtrip.json";
  {
    std::ofstream f(path);
    f << j.dump(2) << "\n";
  }
  auto loaded = load_instance_file(path);
  CHECK(same_instance(inst, loaded));
  std::remove(path.c_str());

  auto other = leg(2);
  CHECK(!same_instance(inst, other));
}

TEST_CASE("class json keeps sorted generator names") {
  auto inst = leg(2);
  SquareClass c = class_of(inst, {"y", "x-1"});
  nlohmann::json j = class_to_json(c);
  REQUIRE(j.is_array());
  CHECK(j.size() == 2);
  CHECK(j[0] == "x-1");
  CHECK(j[1] == "y");
  CHECK(class_from_json(inst, j) == c);
  CHECK_THROWS_AS(static_cast<void>(class_from_json(inst, nlohmann::json::array({"w"}))), Error);
}
