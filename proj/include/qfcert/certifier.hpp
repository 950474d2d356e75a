#pragma once

#include <vector>

#include "qfcert/certificate.hpp"
#include "qfcert/fieldmodel.hpp"
#include "qfcert/symbols.hpp"

namespace qfcert {

// Square class of the defining product f = (prod of variables) * (prod of
// declared factors): the quadratic extension under study is by sqrt(f).
SquareClass extension_class(const FieldInstancePtr& inst);

// The coordinate symbol's slots: one square class per variable, in
// declaration order.
std::vector<SquareClass> xi_presentation(const FieldInstancePtr& inst);

// Runs the finite valuation-case analysis showing that the coordinate symbol,
// restricted to the quadratic extension by the defining product, has zero
// residue at every discrete valuation.  The certificate's top-level steps are
// one reciprocal-reduction leaf, the unit case, one square-in-completion leaf
// per (variable, factor) pair when n >= 2, one case per nonempty subset of
// coordinates with odd valuation, and a supplementary section of concrete
// residue spot checks.  An undischargeable case leaves the certificate
// incomplete with the offending step marked.
Certificate certify_unramified(const FieldInstancePtr& instance);

// Specializes certify_unramified to instances whose factor lists have the
// Legendre shape (x - 1)(x - c) with c a declared transcendental constant,
// recording the identification of the defining extension's coordinate Kummer
// classes with the coordinate square classes.
Certificate main_unram(const FieldInstancePtr& instance);

// Independent replay: re-parses the embedded instance, recomputes the
// expected leaf set, re-invokes the validating operation of every step, and
// re-verifies case coverage.  ok is true exactly when every replay matches
// and the certificate's status is complete.
ReplayReport check_certificate(const Certificate& c);

}  // namespace qfcert
