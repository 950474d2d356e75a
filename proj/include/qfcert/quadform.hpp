#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qfcert/certificate.hpp"
#include "qfcert/fieldmodel.hpp"
#include "qfcert/verdict.hpp"

namespace qfcert {

// Diagonal quadratic form over the square-class group of a field instance.
// Entries are square classes; the ambient field has all constants square,
// so <1,-a> and <1,a> denote the same form.
struct DiagonalForm {
  FieldInstancePtr instance;
  std::vector<SquareClass> entries;

  std::size_t dim() const { return entries.size(); }
  std::string str() const;
  bool operator==(const DiagonalForm& o) const;

  nlohmann::json to_json() const;
  static DiagonalForm from_json(const nlohmann::json& j, const FieldInstancePtr& inst);
};

DiagonalForm diagonal(const FieldInstancePtr& inst, std::vector<SquareClass> entries);

// <a> tensor q: multiplies every entry by the class a.
DiagonalForm scale(const SquareClass& a, const DiagonalForm& q);

DiagonalForm orthogonal_sum(const DiagonalForm& a, const DiagonalForm& b);

// Tensor product; entries in row-major order (left form indexes the rows).
DiagonalForm tensor(const DiagonalForm& a, const DiagonalForm& b);

// n-fold Pfister form <<a1,...,an>> = <1,a1> x ... x <1,an>, normalized so
// that entry T of the result is prod_{i in T} a_i with the subsets T of
// {1..n} enumerated by size and then lexicographically: for n = 2 the
// entries read <1, a1, a2, a1a2>.
DiagonalForm pfister(const FieldInstancePtr& inst, const std::vector<SquareClass>& slots);

// Pfister form with its last entry twisted by d: <<a1,...,an; d>>.
// For n >= 2 the discriminant of the result is the class of d.
DiagonalForm pfister_with_disc(const FieldInstancePtr& inst,
                               const std::vector<SquareClass>& slots,
                               const SquareClass& d);

// Signed determinant class: product of entries times (-1)^(m(m-1)/2);
// the sign is a square here, so this is the plain entry product.
SquareClass discriminant(const DiagonalForm& q);

// Isotropy transfer along the degree-2 extension given by adjoining a square
// root of the discriminant: reconstructs the Pfister shape <<a1..an; d>>
// from q's entries, checks q matches it entrywise and disc(q) = d, then
// passes the verdict through.  Returns the verdict and a checkable step.
std::pair<Verdict, CertStep> transfer_isotropy(const DiagonalForm& q,
                                               const SquareClass& d,
                                               Verdict verdict_over_cover);

}  // namespace qfcert
