#include <doctest.h>

#include "qfcert/counterexample.hpp"

using namespace qfcert;

namespace {
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
}  // namespace

TEST_CASE("the construction starts at two coordinates") {
  CHECK(throws_containing<Error>([] { build_counterexample(1, {"lambda"}); },
                                 "genus zero"));
  CHECK(throws_containing<Error>([] { build_counterexample(0, {}); }, "genus zero"));
}

TEST_CASE("the built form is the twisted multiplicative form") {
  auto [inst, q] = build_counterexample(2, default_constant_names(2));
  REQUIRE(q.dim() == 4);
  CHECK(q.entries[0].is_trivial());
  CHECK(q.entries[1].support == std::set<std::string>{"x"});
  CHECK(q.entries[2].support == std::set<std::string>{"y"});
  // the last entry absorbs the defining product; the coordinate part cancels
  CHECK(q.entries[3].support ==
        std::set<std::string>{"x-1", "x-lambda", "y-1", "y-kappa"});
  CHECK(discriminant(q) == extension_class(inst));

  auto [inst3, q3] = build_counterexample(3, default_constant_names(3));
  REQUIRE(q3.dim() == 8);
  CHECK(q3.entries[0].is_trivial());
  CHECK(q3.entries[1].support == std::set<std::string>{"x"});
  CHECK(q3.entries[2].support == std::set<std::string>{"y"});
  CHECK(q3.entries[3].support == std::set<std::string>{"z"});
  CHECK(q3.entries[4].support == std::set<std::string>{"x", "y"});
  CHECK(q3.entries[5].support == std::set<std::string>{"x", "z"});
  CHECK(q3.entries[6].support == std::set<std::string>{"y", "z"});
  CHECK(q3.entries[7].support ==
        std::set<std::string>{"x-1", "x-lambda", "y-1", "y-kappa", "z-1", "z-nu"});
}

TEST_CASE("the full pipeline verifies") {
  for (int n : {2, 3}) {
    CAPTURE(n);
    auto [inst, q] = build_counterexample(n, default_constant_names(n));
    CounterexampleReport rep = verify_theorem(inst, q);
    CHECK(rep.verified());
    CHECK(rep.status == "verified");
    CHECK(rep.failing_stage.empty());
    CHECK(rep.axioms == std::vector<std::string>{"gabber-symbol-nontriviality"});
    CHECK(rep.unramified.is_complete());
    CHECK(rep.anisotropy.is_complete());
    CHECK(rep.caveat.id == "caveat");
    CHECK(rep.caveat.kind == "note");

    // one cover decision and one transfer per residue transcendence degree
    REQUIRE(rep.local.size() == 2u * static_cast<unsigned>(n));
    for (int i = 0; i < n; ++i) {
      const CertStep& cover = rep.local[2 * static_cast<std::size_t>(i)];
      const CertStep& down = rep.local[2 * static_cast<std::size_t>(i) + 1];
      CHECK(cover.id == "cover:ci" + std::to_string(i));
      CHECK(cover.kind == "isotropy-decision");
      CHECK(cover.outputs.at("verdict") == "isotropic");
      REQUIRE(cover.children.size() == 1);
      CHECK(down.id == "transfer:ci" + std::to_string(i));
      CHECK(down.kind == "isotropy-transfer");
      CHECK(down.outputs.at("verdict") == "isotropic");
    }
  }
}

TEST_CASE("reports are deterministic and read in proof order") {
  auto [inst, q] = build_counterexample(2, default_constant_names(2));
  CounterexampleReport a = verify_theorem(inst, q);
  CounterexampleReport b = verify_theorem(inst, q);
  CHECK(a.to_json().dump() == b.to_json().dump());
  CHECK(a.text() == b.text());

  nlohmann::json j = a.to_json();
  // a serialization round trip must not register as a difference, whatever
  // integer representation the parser picks
  CHECK_FALSE(json_diff_path(j, nlohmann::json::parse(j.dump())).has_value());
  CHECK(json_diff_path(nlohmann::json(1), nlohmann::json(2)).value() == "/");

  CHECK(j.at("kind") == "counterexample-report");
  CHECK(j.at("status") == "verified");
  CHECK(j.at("dimension") == 4);
  CHECK(j.at("axioms").size() == 1);

  std::string t = a.text();
  for (const char* marker :
       {"(a) unramifiedness", "(b) isotropy", "(c) transfer", "(d) anisotropy",
        "(e) axioms", "gabber-symbol-nontriviality", "status: verified"}) {
    CAPTURE(marker);
    CHECK(t.find(marker) != std::string::npos);
  }
  // the form itself is printed
  CHECK(t.find(q.str()) != std::string::npos);
}

TEST_CASE("verification names the failing stage") {
  auto [inst, q] = build_counterexample(2, default_constant_names(2));

  SUBCASE("missing instance") {
    FieldInstancePtr none;
    CounterexampleReport rep = verify_theorem(none, q);
    CHECK_FALSE(rep.verified());
    CHECK(rep.failing_stage.rfind("inputs", 0) == 0);
  }

  SUBCASE("one coordinate only") {
    auto solo = make_legendre_instance(1, default_constant_names(1));
    DiagonalForm p = pfister(solo, xi_presentation(solo));
    CounterexampleReport rep = verify_theorem(solo, p);
    CHECK_FALSE(rep.verified());
    CHECK(rep.failing_stage.rfind("inputs", 0) == 0);
    CHECK(rep.failing_stage.find("two coordinates") != std::string::npos);
  }

  SUBCASE("a form that is not the twisted one") {
    DiagonalForm plain = pfister(inst, xi_presentation(inst));
    CounterexampleReport rep = verify_theorem(inst, plain);
    CHECK_FALSE(rep.verified());
    CHECK(rep.failing_stage.rfind("inputs", 0) == 0);
  }

  SUBCASE("an instance whose symbol cannot be certified") {
    auto broken = std::make_shared<FieldInstance>(*inst);
    for (auto& g : broken->generators)
      if (g.name == "x") g.reduction_table.clear();
    FieldInstancePtr bp = broken;
    DiagonalForm qb = pfister_with_disc(bp, xi_presentation(bp), extension_class(bp));
    CounterexampleReport rep = verify_theorem(bp, qb);
    CHECK_FALSE(rep.verified());
    CHECK(rep.failing_stage.rfind("unramifiedness", 0) == 0);
    CHECK(rep.to_json().at("status") == "not-verified");
    CHECK(rep.text().find("status: not-verified") != std::string::npos);
  }
}

TEST_CASE("the generic construction reproduces the built example") {
  for (int n : {2, 3}) {
    CAPTURE(n);
    auto [inst, q] = build_counterexample(n, default_constant_names(n));
    ConstructionResult r = construct_from_unramified_class(
        ConstructionKind::QuadraticExtension, n, xi_presentation(inst),
        extension_class(inst));
    CHECK(r.form == q);
    CHECK(r.cert.kind == "construction-certificate");
    CHECK(r.cert.is_complete());
    CHECK(r.cert.axioms == std::vector<std::string>{"input-class-nontriviality",
                                                    "restriction-corestriction-descent"});
    REQUIRE(r.cert.steps.size() == 3);
    CHECK(r.cert.steps[0].id == "hypothesis");
    CHECK(r.cert.steps[1].id == "descend");
    CHECK(r.cert.steps[1].kind == "uncomputed-inference");
    CHECK(r.cert.steps[2].id == "assemble");
  }
}

TEST_CASE("the direct branch is the plain multiplicative form") {
  auto inst = make_legendre_instance(2, default_constant_names(2));
  ConstructionResult r = construct_from_unramified_class(
      ConstructionKind::Direct, 2, xi_presentation(inst), std::nullopt);
  CHECK(r.form == pfister(inst, xi_presentation(inst)));
  CHECK(r.cert.axioms == std::vector<std::string>{"input-class-nontriviality"});
  REQUIRE(r.cert.steps.size() == 2);
  CHECK(r.cert.steps[0].id == "hypothesis");
  CHECK(r.cert.steps[1].id == "assemble");
}

TEST_CASE("the construction rejects bad inputs") {
  auto inst = make_legendre_instance(2, default_constant_names(2));
  auto slots = xi_presentation(inst);

  CHECK(throws_containing<Error>(
      [&] { construct_from_unramified_class(ConstructionKind::Direct, 0, slots, std::nullopt); },
      "degree mismatch"));
  CHECK(throws_containing<Error>(
      [&] { construct_from_unramified_class(ConstructionKind::Direct, 1, {}, std::nullopt); },
      "missing representatives"));
  CHECK(throws_containing<Error>(
      [&] { construct_from_unramified_class(ConstructionKind::Direct, 3, slots, std::nullopt); },
      "degree mismatch"));
  CHECK(throws_containing<Error>(
      [&] {
        construct_from_unramified_class(ConstructionKind::QuadraticExtension, 2, slots,
                                        std::nullopt);
      },
      "missing representatives"));

  // a repeated representative collapses the symbol's normal form to zero
  std::vector<SquareClass> repeated = {class_of(inst, {"x"}), class_of(inst, {"x"})};
  CHECK(throws_containing<Error>(
      [&] {
        construct_from_unramified_class(ConstructionKind::Direct, 2, repeated, std::nullopt);
      },
      "nontriviality hypothesis unsatisfiable"));
}
