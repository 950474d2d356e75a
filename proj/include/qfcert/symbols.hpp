#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "qfcert/fieldmodel.hpp"

namespace qfcert {

// A term of a mod-2 symbol sum: sorted, pairwise-distinct generator names.
using SymbolTerm = std::vector<std::string>;

// Element of the degree-n mod-2 cohomology of the field instance, kept in a
// normal form that applies multilinearity, symmetry (tuples sorted), and
// repeated-generator vanishing — and nothing else.  A zero normal form
// certifies triviality; a nonzero one does NOT certify nontriviality.
//
// `presentation`, when nonempty, is a slot-level view of the sum as one
// product symbol (slot classes may be products); it always re-expands to
// `terms`.  `declared_squares` lists classes declared trivial in the working
// extension field, which justify substitution rewrites.
struct SymbolSum {
  FieldInstancePtr instance;
  std::size_t degree = 0;
  std::set<SymbolTerm> terms;
  std::vector<SquareClass> presentation;
  std::vector<SquareClass> declared_squares;

  bool is_zero() const { return terms.empty(); }
  bool same_normal_form(const SymbolSum& o) const;
  SymbolSum with_declared_square(const SquareClass& sq) const;
  std::string str() const;
  std::string presentation_str() const;
  nlohmann::json to_json() const;
};

// Cup product of the given square classes, multilinearly expanded and
// normalized.  The result keeps the inputs as its presentation.
SymbolSum symbol(const std::vector<SquareClass>& slots);

// Sum in the cohomology group (mod-2 cancellation).  Drops any presentation.
SymbolSum operator+(const SymbolSum& a, const SymbolSum& b);

// Rewrites one presentation slot (the single index in `slot_indices`) to the
// class `combined`.  An empty index set is the identity rewrite.  Valid when
// either the rewrite re-expands to the same normal form (a regrouping), or
// the old and new slot classes differ by a product of declared squares (a
// substitution; the normal form is then recomputed).  Anything else throws.
SymbolSum rewrite_product_slot(const SymbolSum& s,
                               const std::set<std::size_t>& slot_indices,
                               const SquareClass& combined);

// Reorders presentation slots; perm lists the old slot index for each new
// position.  The normal form is unchanged (symbols are symmetric mod 2).
SymbolSum permute_slots(const SymbolSum& s, const std::vector<std::size_t>& perm);

// Residue homomorphism at a divisorial valuation (degree drops by one, the
// result lives over the residue instance), or at infinity in one variable
// (computed by passing through the reciprocal transform and taking the
// divisorial residue at the inverted variable).  Abstract valuation cases
// are not computable here; use is_zero_by_dimension.
SymbolSum residue(const SymbolSum& s, const Valuation& v);

// Maps a sum through the reciprocal transform at `variable`, slot by slot.
SymbolSum map_symbol_through_reciprocal(const SymbolSum& s, const ReciprocalResult& r,
                                        const std::string& var);

enum class ZeroVerdict { ZeroByDimension, NotDecidedByBound };

std::string to_string(ZeroVerdict v);

// A degree-d class over a residue field of transcendence degree at most
// `bound` (over an algebraically closed base) vanishes when d > bound:
// the cohomological dimension of such a field is `bound`.
ZeroVerdict is_zero_by_dimension(const SymbolSum& s, int bound);

}  // namespace qfcert
