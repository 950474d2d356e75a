#include <doctest.h>

#include <algorithm>

#include "qfcert/certifier.hpp"

using namespace qfcert;

namespace {
FieldInstancePtr leg(int n) { return make_legendre_instance(n, default_constant_names(n)); }

template <class E, class F>
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

std::vector<std::string> step_ids(const Certificate& c) {
  std::vector<std::string> ids;
  for (const auto& s : c.steps) ids.push_back(s.id);
  return ids;
}

long long covered(const Certificate& c, const std::string& id) {
  const CertStep* s = c.find(id);
  REQUIRE(s != nullptr);
  return s->outputs.at("assignments_covered").get<long long>();
}

bool any_issue_mentions(const ReplayReport& r, const std::string& needle) {
  return std::any_of(r.issues.begin(), r.issues.end(), [&](const ReplayIssue& i) {
    return i.step_id.find(needle) != std::string::npos ||
           i.message.find(needle) != std::string::npos;
  });
}
}  // namespace

TEST_CASE("extension class and symbol slots") {
  auto inst = leg(2);
  SquareClass f = extension_class(inst);
  CHECK(f.support ==
        std::set<std::string>{"x", "x-1", "x-lambda", "y", "y-1", "y-kappa"});
  auto slots = xi_presentation(inst);
  REQUIRE(slots.size() == 2);
  CHECK(slots[0].support == std::set<std::string>{"x"});
  CHECK(slots[1].support == std::set<std::string>{"y"});
}

TEST_CASE("one-variable certificate layout") {
  Certificate c = main_unram(leg(1));
  CHECK(c.kind == "unramifiedness-certificate");
  CHECK(c.is_complete());
  CHECK(c.axioms.empty());
  CHECK_FALSE(c.commitment.empty());
  CHECK_FALSE(c.identification.empty());
  CHECK(step_ids(c) ==
        std::vector<std::string>{"recip", "case1", "case3:S={x}", "spots"});

  // no square-in-completion leaves in one variable: the divisorial valuations
  // at the factors already have the coordinate as a unit with constant residue
  const CertStep* spots = c.find("spots");
  REQUIRE(spots != nullptr);
  std::vector<std::string> spot_ids;
  for (const auto& ch : spots->children) spot_ids.push_back(ch.id);
  CHECK(spot_ids == std::vector<std::string>{"spot:div:x", "spot:div:x-1",
                                             "spot:div:x-lambda", "spot:inf:x"});
  for (const auto& ch : spots->children) {
    CHECK(ch.kind == "residue-computation");
    CHECK(ch.outputs.at("residue_is_zero") == true);
  }

  ReplayReport rep = check_certificate(c);
  CHECK(rep.ok);
  CHECK(rep.issues.empty());
}

TEST_CASE("two-variable certificate covers all sixteen valuation cases") {
  Certificate c = main_unram(leg(2));
  CHECK(c.is_complete());
  CHECK(step_ids(c) == std::vector<std::string>{
                           "recip", "case1", "case2:x:x-1", "case2:x:x-lambda",
                           "case2:y:y-1", "case2:y:y-kappa", "case3:S={x}",
                           "case3:S={y}", "case3:S={x,y}", "spots"});

  CHECK(covered(c, "case1") == 9);
  long long total = covered(c, "case1");
  for (const auto& id : {"case2:x:x-1", "case2:x:x-lambda", "case2:y:y-1",
                         "case2:y:y-kappa", "case3:S={x}", "case3:S={y}",
                         "case3:S={x,y}"}) {
    CHECK(covered(c, id) == 1);
    total += covered(c, id);
  }
  CHECK(total == 16);  // (2 + #factors)^n valuation cases in the schema

  for (const auto& id : {"case2:x:x-1", "case2:y:y-kappa"}) {
    const CertStep* s = c.find(id);
    REQUIRE(s != nullptr);
    CHECK(s->kind == "square-in-completion");
    CHECK(s->outputs.at("reduction") == "nonzero-constant");
    CHECK(s->outputs.at("residue") == "zero");
  }

  ReplayReport rep = check_certificate(c);
  CHECK(rep.ok);
}

TEST_CASE("three-variable coverage tallies") {
  Certificate c = main_unram(leg(3));
  CHECK(c.is_complete());

  CHECK(covered(c, "case1") == 27);
  // a leaf at coordinate i covers the assignments where the earlier
  // coordinates stay out of the prime and a later one falls in it
  for (const auto& id : {"case2:x:x-1", "case2:x:x-lambda"}) CHECK(covered(c, id) == 7);
  for (const auto& id : {"case2:y:y-1", "case2:y:y-kappa"}) CHECK(covered(c, id) == 5);
  for (const auto& id : {"case2:z:z-1", "case2:z:z-nu"}) CHECK(covered(c, id) == 3);
  for (const auto& id : {"case3:S={x}", "case3:S={y}", "case3:S={z}", "case3:S={x,y}",
                         "case3:S={x,z}", "case3:S={y,z}", "case3:S={x,y,z}"})
    CHECK(covered(c, id) == 1);

  long long total = 0;
  for (const auto& s : c.steps)
    if (s.outputs.contains("assignments_covered"))
      total += s.outputs.at("assignments_covered").get<long long>();
  CHECK(total == 64);

  ReplayReport rep = check_certificate(c);
  CHECK(rep.ok);
}

TEST_CASE("case-split chains end in a dimension bound when the subset is larger") {
  Certificate c = main_unram(leg(3));
  const CertStep* s = c.find("case3:S={x,y}");
  REQUIRE(s != nullptr);
  REQUIRE(s->children.size() == 5);
  CHECK(s->children[3].id == "case3:S={x,y}/residue");
  CHECK(s->children[3].outputs.at("residue_bound") == 1);
  CHECK(s->children[4].id == "case3:S={x,y}/vanish");
  CHECK(s->children[4].outputs.at("verdict") == "zero");

  const CertStep* single = c.find("case3:S={z}");
  REQUIRE(single != nullptr);
  REQUIRE(single->children.size() == 4);
  CHECK(single->children[3].id == "case3:S={z}/conclude");
}

TEST_CASE("certificates survive a serialization round trip") {
  Certificate c = main_unram(leg(2));
  std::string text = c.serialize();
  Certificate back = Certificate::deserialize(text);
  CHECK(back.to_json() == c.to_json());
  CHECK(back.serialize() == text);
  ReplayReport rep = check_certificate(back);
  CHECK(rep.ok);
}

TEST_CASE("replay flags tampering") {
  const Certificate base = main_unram(leg(2));
  REQUIRE(check_certificate(base).ok);

  SUBCASE("a flipped spot-check flag") {
    Certificate c = base;
    REQUIRE(c.steps.back().id == "spots");
    c.steps.back().children[0].outputs["residue_is_zero"] = false;
    ReplayReport rep = check_certificate(c);
    CHECK_FALSE(rep.ok);
    CHECK(any_issue_mentions(rep, "spot:div:x"));
  }

  SUBCASE("a rewritten substitution output") {
    Certificate c = base;
    for (auto& s : c.steps)
      if (s.id == "case3:S={x}") s.children[2].outputs["presentation"] = nlohmann::json::array();
    ReplayReport rep = check_certificate(c);
    CHECK_FALSE(rep.ok);
    CHECK(any_issue_mentions(rep, "case3:S={x}"));
  }

  SUBCASE("an inflated coverage count") {
    Certificate c = base;
    for (auto& s : c.steps)
      if (s.id == "case1") s.outputs["assignments_covered"] = 10;
    ReplayReport rep = check_certificate(c);
    CHECK_FALSE(rep.ok);
  }

  SUBCASE("a deleted case leaf") {
    Certificate c = base;
    c.steps.erase(c.steps.begin() + 2);
    ReplayReport rep = check_certificate(c);
    CHECK_FALSE(rep.ok);
  }

  SUBCASE("a forged extension class") {
    Certificate c = base;
    auto inst = leg(2);
    c.extension_class = class_to_json(class_of(inst, {"x"}));
    ReplayReport rep = check_certificate(c);
    CHECK_FALSE(rep.ok);
  }

  SUBCASE("a complete status is part of what is checked") {
    Certificate c = base;
    c.status = "incomplete";
    CHECK_FALSE(check_certificate(c).ok);
  }

  SUBCASE("an empty certificate claiming completeness") {
    Certificate c;
    c.status = "complete";
    CHECK_FALSE(check_certificate(c).ok);
  }
}

TEST_CASE("wider factor lists still certify") {
  InstanceSpec spec;
  spec.n = 2;
  spec.variables = {"x", "y"};
  spec.constants = {"lambda", "kappa"};
  spec.factors["x"] = {{"x-1", ConstVal::integer(1), true},
                       {"x-lambda", ConstVal::symbol("lambda"), true},
                       {"x-2", ConstVal::integer(2), true},
                       {"x-3", ConstVal::integer(3), true}};
  spec.factors["y"] = {{"y-1", ConstVal::integer(1), true},
                       {"y-kappa", ConstVal::symbol("kappa"), true}};
  auto inst = make_instance(spec);

  Certificate c = certify_unramified(inst);
  CHECK(c.is_complete());
  CHECK(c.steps.size() == 12);  // recip + case1 + 6 completions + 3 splits + spots
  CHECK(covered(c, "case1") == 5LL * 3);  // states (1 + F_x)(1 + F_y) with no coordinate in the prime
  ReplayReport rep = check_certificate(c);
  CHECK(rep.ok);

  CHECK(throws_containing<Precondition>([&] { main_unram(inst); },
                                        "exactly two declared factors"));
}

TEST_CASE("the specialized entry point checks the factor shape") {
  InstanceSpec spec;
  spec.n = 1;
  spec.variables = {"x"};
  spec.constants = {};
  spec.factors["x"] = {{"x-2", ConstVal::integer(2), true},
                       {"x-3", ConstVal::integer(3), true}};
  CHECK(throws_containing<Precondition>([&] { main_unram(make_instance(spec)); },
                                        "Legendre shape"));

  InstanceSpec reused;
  reused.n = 2;
  reused.variables = {"x", "y"};
  reused.constants = {"lambda"};
  reused.factors["x"] = {{"x-1", ConstVal::integer(1), true},
                         {"x-lambda", ConstVal::symbol("lambda"), true}};
  reused.factors["y"] = {{"y-1", ConstVal::integer(1), true},
                         {"y-lambda", ConstVal::symbol("lambda"), true}};
  CHECK(throws_containing<Precondition>([&] { main_unram(make_instance(reused)); },
                                        "is reused"));
}

TEST_CASE("certification preconditions on hand-built instances") {
  // an odd-degree factor product in x
  auto odd = std::make_shared<FieldInstance>(*leg(1));
  IrreducibleGen extra = odd->gen("x-1");
  extra.name = "x-5";
  extra.constant = ConstVal::integer(5);
  extra.reduction_table.clear();
  odd->generators.push_back(std::move(extra));
  FieldInstancePtr oddp = odd;
  CHECK_NOTHROW(oddp->validate());
  CHECK(throws_containing<Precondition>([&] { certify_unramified(oddp); }, "odd degree"));

  // a factor whose root is zero does not sit inside any completion argument
  auto vanishing = std::make_shared<FieldInstance>(*leg(1));
  for (auto& g : vanishing->generators)
    if (g.name == "x-1") {
      g.constant = ConstVal::zero();
      g.nonzero_at_origin = false;
    }
  FieldInstancePtr vp = vanishing;
  CHECK(throws_containing<Precondition>([&] { certify_unramified(vp); },
                                        "vanishes at the origin"));

  // the two flags must agree for the instance to validate at all
  auto inconsistent = std::make_shared<FieldInstance>(*leg(1));
  for (auto& g : inconsistent->generators)
    if (g.name == "x-1") g.constant = ConstVal::zero();
  FieldInstancePtr ip = inconsistent;
  CHECK(throws_containing<Error>([&] { certify_unramified(ip); },
                                 "inconsistent with constant"));
}

TEST_CASE("an undischargeable case is marked, not hidden") {
  auto broken = std::make_shared<FieldInstance>(*leg(2));
  for (auto& g : broken->generators)
    if (g.name == "x") g.reduction_table.clear();
  FieldInstancePtr bp = broken;

  Certificate c = certify_unramified(bp);
  CHECK_FALSE(c.is_complete());
  bool saw_undischarged = false;
  for (const auto& s : c.steps)
    if (s.outputs.contains("undischarged") && s.outputs["undischarged"] == true) {
      saw_undischarged = true;
      CHECK_FALSE(s.outputs.at("error").get<std::string>().empty());
    }
  CHECK(saw_undischarged);
  CHECK_FALSE(check_certificate(c).ok);
}
