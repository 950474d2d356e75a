#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qfcert/certificate.hpp"
#include "qfcert/certifier.hpp"
#include "qfcert/quadform.hpp"
#include "qfcert/springer.hpp"

namespace qfcert {

// The central dimension-2^n example: the Legendre-style instance in n
// coordinates together with q = <<x1,...,xn; f>> where f is the defining
// product.  Errors out for n < 2: over a one-coordinate rational function
// field, isotropy of binary forms satisfies the local-global principle
// (genus zero), so the phenomenon starts at n = 2.
std::pair<FieldInstancePtr, DiagonalForm> build_counterexample(
    int n, const std::vector<std::string>& constant_names);

enum class ConstructionKind { Direct, QuadraticExtension };

struct ConstructionResult {
  DiagonalForm form;
  Certificate cert;  // argument skeleton; its hypotheses are recorded axioms
};

// Turns an unramified degree-n symbol with representatives a1..an into the
// witness form: pfister(a1..an) when the symbol lives over the base field
// directly, or pfister_with_disc(a1..an; d) when it is unramified only over
// the quadratic extension by d.  Nontriviality of the input class is an
// axiom, not a computation (a nonzero normal form is required but does not
// certify it); the quadratic-extension branch additionally records the
// uncomputed descent of representatives to the base field.
ConstructionResult construct_from_unramified_class(
    ConstructionKind kind, int degree, const std::vector<SquareClass>& classes,
    const std::optional<SquareClass>& disc);

struct CounterexampleReport {
  std::string status = "not-verified";  // "verified" | "not-verified"
  std::string failing_stage;            // empty exactly when verified
  FieldInstancePtr instance;
  DiagonalForm form;
  Certificate unramified;            // stage (a), independently replayed
  std::vector<CertStep> local;       // stages (b)+(c), per residue degree
  Certificate anisotropy;            // stage (d), Laurent-model certificate
  std::vector<std::string> axioms;   // stage (e)
  CertStep caveat;

  bool verified() const { return status == "verified"; }
  nlohmann::json to_json() const;  // stable key order, no timestamps
  std::string text() const;        // human-readable, in proof order
};

// Full pipeline over (instance, form) as produced by build_counterexample:
// (a) unramifiedness certificate plus independent replay; (b) isotropy of a
// dimension-2^n form over the completion of the quadratic cover at every
// residue transcendence degree i < n (the C_i bound); (c) transfer of each
// isotropy verdict down to the completion of the base; (d) unconditional
// anisotropy of the coordinate multiplicative form over the iterated
// Laurent model; (e) the single recorded nontriviality axiom for the
// function field itself.  Any failing stage yields status "not-verified"
// with that stage named.
CounterexampleReport verify_theorem(const FieldInstancePtr& inst, const DiagonalForm& q);

}  // namespace qfcert
