#include "qfcert/symbols.hpp"

#include <algorithm>
#include <sstream>

#include "qfcert/errors.hpp"

namespace qfcert {

using nlohmann::json;

bool SymbolSum::same_normal_form(const SymbolSum& o) const {
  return degree == o.degree && terms == o.terms && same_instance(instance, o.instance);
}

SymbolSum SymbolSum::with_declared_square(const SquareClass& sq) const {
  if (!same_instance(sq.instance, instance))
    throw InstanceMismatch("declared square belongs to a different field instance");
  SymbolSum r = *this;
  r.declared_squares.push_back(sq);
  return r;
}

std::string SymbolSum::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first_term = true;
  for (const auto& t : terms) {
    if (!first_term) os << " + ";
    first_term = false;
    if (t.empty()) {
      os << "(1)";
      continue;
    }
    for (const auto& g : t) os << "(" << g << ")";
  }
  return os.str();
}

std::string SymbolSum::presentation_str() const {
  if (presentation.empty()) return "";
  std::ostringstream os;
  for (const auto& c : presentation) os << "(" << c.str() << ")";
  return os.str();
}

json SymbolSum::to_json() const {
  json jterms = json::array();
  for (const auto& t : terms) jterms.push_back(t);
  json j;
  j["degree"] = degree;
  j["terms"] = jterms;
  if (!presentation.empty()) {
    json slots = json::array();
    for (const auto& c : presentation) slots.push_back(class_to_json(c));
    j["presentation"] = slots;
  }
  return j;
}

// Canonicalizes one tuple: sorts it and reports whether it survives
// (a repeated generator makes the tuple vanish, since (a)(a) = (a)(-1)
// and -1 is a square here).
static bool normalize_term(SymbolTerm& t) {
  std::sort(t.begin(), t.end());
  return std::adjacent_find(t.begin(), t.end()) == t.end();
}

static void toggle_term(std::set<SymbolTerm>& terms, SymbolTerm t) {
  if (!normalize_term(t)) return;
  auto it = terms.find(t);
  if (it == terms.end())
    terms.insert(std::move(t));
  else
    terms.erase(it);
}

// Multilinear expansion of a product of classes into normal-form tuples.
static std::set<SymbolTerm> expand_slots(const std::vector<SquareClass>& slots) {
  std::set<SymbolTerm> out;
  std::vector<SymbolTerm> partial{SymbolTerm{}};
  for (const auto& c : slots) {
    std::vector<SymbolTerm> next;
    next.reserve(partial.size() * std::max<std::size_t>(c.support.size(), 1));
    for (const auto& p : partial)
      for (const auto& g : c.support) {
        SymbolTerm q = p;
        q.push_back(g);
        next.push_back(std::move(q));
      }
    partial = std::move(next);
    if (partial.empty()) break;  // a trivial slot class annihilates the product
  }
  for (auto& t : partial) toggle_term(out, std::move(t));
  return out;
}

SymbolSum symbol(const std::vector<SquareClass>& slots) {
  if (slots.empty()) throw Precondition("symbol: degree 0 products are not formed here");
  for (std::size_t i = 1; i < slots.size(); ++i)
    if (!same_instance(slots[0].instance, slots[i].instance))
      throw InstanceMismatch("symbol: slot classes live over different field instances");
  SymbolSum s;
  s.instance = slots[0].instance;
  s.degree = slots.size();
  s.terms = expand_slots(slots);
  s.presentation = slots;
  return s;
}

SymbolSum operator+(const SymbolSum& a, const SymbolSum& b) {
  if (!same_instance(a.instance, b.instance))
    throw InstanceMismatch("symbol sum: operands live over different field instances");
  if (a.degree != b.degree)
    throw Precondition("symbol sum: operands have different degrees");
  SymbolSum r;
  r.instance = a.instance;
  r.degree = a.degree;
  r.terms = a.terms;
  for (const auto& t : b.terms) toggle_term(r.terms, t);
  r.declared_squares = a.declared_squares;
  for (const auto& d : b.declared_squares) r.declared_squares.push_back(d);
  return r;
}

// Gaussian elimination over F2 spans of generator-support sets: decides
// whether `target` is a product of some subset of `basis`.
static bool in_f2_span(const std::vector<SquareClass>& basis, const SquareClass& target) {
  std::vector<std::set<std::string>> rows;
  for (const auto& b : basis) rows.push_back(b.support);
  std::set<std::string> t = target.support;
  for (auto& row : rows) {
    if (row.empty()) continue;
    const std::string& pivot = *row.begin();
    if (t.count(pivot)) {
      std::set<std::string> merged;
      std::set_symmetric_difference(t.begin(), t.end(), row.begin(), row.end(),
                                    std::inserter(merged, merged.begin()));
      t = std::move(merged);
    }
    // eliminate the pivot from the remaining rows
    for (auto& other : rows) {
      if (&other == &row || !other.count(pivot)) continue;
      std::set<std::string> merged;
      std::set_symmetric_difference(other.begin(), other.end(), row.begin(), row.end(),
                                    std::inserter(merged, merged.begin()));
      other = std::move(merged);
    }
  }
  return t.empty();
}

SymbolSum rewrite_product_slot(const SymbolSum& s,
                               const std::set<std::size_t>& slot_indices,
                               const SquareClass& combined) {
  if (slot_indices.empty()) return s;
  if (slot_indices.size() > 1)
    throw Precondition("rewrite_product_slot: rewrites target one slot at a time");
  if (s.presentation.empty())
    throw Precondition("rewrite_product_slot: the sum carries no slot presentation");
  const std::size_t idx = *slot_indices.begin();
  if (idx >= s.presentation.size())
    throw Precondition("rewrite_product_slot: slot index out of range");
  if (!same_instance(combined.instance, s.instance))
    throw InstanceMismatch("rewrite_product_slot: class over a different field instance");

  std::vector<SquareClass> slots = s.presentation;
  SquareClass old = slots[idx];
  slots[idx] = combined;
  std::set<SymbolTerm> expanded = expand_slots(slots);

  SymbolSum r;
  r.instance = s.instance;
  r.degree = s.degree;
  r.presentation = std::move(slots);
  r.declared_squares = s.declared_squares;
  if (expanded == s.terms) {
    r.terms = s.terms;  // a regrouping: normal form unchanged
    return r;
  }
  if (in_f2_span(s.declared_squares, class_mul(old, combined))) {
    r.terms = std::move(expanded);  // substitution modulo a declared square
    return r;
  }
  throw Error(
      "rewrite_product_slot: the requested rewrite changes the normal form and is not "
      "justified by any declared square");
}

SymbolSum permute_slots(const SymbolSum& s, const std::vector<std::size_t>& perm) {
  if (s.presentation.empty())
    throw Precondition("permute_slots: the sum carries no slot presentation");
  if (perm.size() != s.presentation.size())
    throw Precondition("permute_slots: permutation length does not match slot count");
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t p : perm) {
    if (p >= perm.size() || seen[p]) throw Precondition("permute_slots: not a permutation");
    seen[p] = true;
  }
  SymbolSum r = s;
  for (std::size_t i = 0; i < perm.size(); ++i) r.presentation[i] = s.presentation[perm[i]];
  return r;
}

SymbolSum map_symbol_through_reciprocal(const SymbolSum& s, const ReciprocalResult& r,
                                        const std::string& var) {
  SymbolSum out;
  out.instance = r.instance;
  out.degree = s.degree;
  for (const auto& t : s.terms) {
    std::vector<SquareClass> images;
    images.reserve(t.size());
    for (const auto& g : t)
      images.push_back(map_class_through_reciprocal(class_of(s.instance, {g}), r, var));
    if (t.empty()) {
      toggle_term(out.terms, SymbolTerm{});
      continue;
    }
    for (const auto& term : expand_slots(images)) toggle_term(out.terms, term);
  }
  if (!s.presentation.empty()) {
    for (const auto& c : s.presentation)
      out.presentation.push_back(map_class_through_reciprocal(c, r, var));
  }
  for (const auto& d : s.declared_squares)
    out.declared_squares.push_back(map_class_through_reciprocal(d, r, var));
  return out;
}

static SymbolSum divisorial_residue(const SymbolSum& s, const IrreducibleGen& g) {
  if (s.degree == 0)
    throw Precondition("residue: degree-0 classes are constants and carry no residue here");
  SymbolSum out;
  out.instance = residue_instance(s.instance, g.name);
  out.degree = s.degree - 1;
  for (const auto& t : s.terms) {
    auto pos = std::find(t.begin(), t.end(), g.name);
    if (pos == t.end()) continue;  // all slots are units at this divisor
    SymbolTerm reduced;
    reduced.reserve(t.size() - 1);
    bool dead = false;
    for (const auto& h : t) {
      if (h == g.name) continue;
      const IrreducibleGen& hg = s.instance->gen(h);
      auto it = hg.reduction_table.find(g.name);
      if (it == hg.reduction_table.end())
        throw UndeterminedReduction("residue: no reduction recorded for " + h + " at " + g.name +
                                    "; never silently collapsed to the trivial class");
      switch (it->second.kind) {
        case ResidueClass::Kind::TrivialSquare:
        case ResidueClass::Kind::NonzeroConstant:
          dead = true;  // a square residue kills the whole tuple
          break;
        case ResidueClass::Kind::GeneratorClass:
          reduced.push_back(it->second.generator);
          break;
      }
      if (dead) break;
    }
    if (dead) continue;
    toggle_term(out.terms, std::move(reduced));
  }
  return out;
}

SymbolSum residue(const SymbolSum& s, const Valuation& v) {
  switch (v.kind) {
    case Valuation::Kind::DivisorialAtGenerator:
      return divisorial_residue(s, s.instance->gen(v.at));
    case Valuation::Kind::AtInfinityInVariable: {
      if (!s.instance->has_variable(v.at))
        throw Precondition("residue: " + v.at + " is not a variable of the instance");
      ReciprocalResult r = reciprocal_transform(s.instance, v.at);
      SymbolSum mapped = map_symbol_through_reciprocal(s, r, v.at);
      return divisorial_residue(mapped, r.instance->gen(v.at));
    }
    case Valuation::Kind::AbstractCase:
      throw Precondition(
          "residue: abstract valuation cases carry no computable residue; use the "
          "dimension bound instead");
  }
  throw Precondition("residue: unknown valuation kind");
}

std::string to_string(ZeroVerdict v) {
  return v == ZeroVerdict::ZeroByDimension ? "zero" : "not-decided";
}

ZeroVerdict is_zero_by_dimension(const SymbolSum& s, int bound) {
  if (bound < 0) throw Precondition("is_zero_by_dimension: negative transcendence bound");
  return (static_cast<int>(s.degree) > bound) ? ZeroVerdict::ZeroByDimension
                                              : ZeroVerdict::NotDecidedByBound;
}

}  // namespace qfcert
