#include "qfcert/certifier.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "qfcert/errors.hpp"

namespace qfcert {

using nlohmann::json;

SquareClass extension_class(const FieldInstancePtr& inst) {
  if (!inst) throw Precondition("extension class: field instance required");
  std::vector<std::string> gens;
  gens.reserve(inst->generators.size());
  for (const auto& g : inst->generators) gens.push_back(g.name);
  return class_of(inst, gens);
}

std::vector<SquareClass> xi_presentation(const FieldInstancePtr& inst) {
  if (!inst) throw Precondition("coordinate symbol: field instance required");
  if (inst->variables.empty())
    throw Precondition("coordinate symbol: the instance has no coordinates");
  std::vector<SquareClass> slots;
  slots.reserve(inst->variables.size());
  for (const auto& v : inst->variables) slots.push_back(class_of(inst, {v}));
  return slots;
}

namespace {

json pres_to_json(const std::vector<SquareClass>& pres) {
  json a = json::array();
  for (const auto& c : pres) a.push_back(class_to_json(c));
  return a;
}

std::vector<SquareClass> pres_from_json(const FieldInstancePtr& inst, const json& j) {
  std::vector<SquareClass> out;
  for (const auto& e : j) out.push_back(class_from_json(inst, e));
  return out;
}

json terms_json(const SymbolSum& s) {
  json a = json::array();
  for (const auto& t : s.terms) a.push_back(t);
  return a;
}

std::string case3_id(const std::vector<std::string>& svars) {
  std::string id = "case3:S={";
  for (std::size_t i = 0; i < svars.size(); ++i) {
    if (i) id += ",";
    id += svars[i];
  }
  id += "}";
  return id;
}

// Nonempty subsets of {0..n-1} by size, then lexicographically.
std::vector<std::vector<int>> graded_nonempty_subsets(int n) {
  std::vector<std::vector<int>> out;
  for (int k = 1; k <= n; ++k) {
    std::vector<int> c(k);
    for (int i = 0; i < k; ++i) c[i] = i;
    while (true) {
      out.push_back(c);
      int i = k - 1;
      while (i >= 0 && c[i] == n - k + i) --i;
      if (i < 0) break;
      ++c[i];
      for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
    }
  }
  return out;
}

// New slot order: the S coordinates in declaration order, then the rest.
std::vector<std::size_t> canonical_perm(const FieldInstance& inst,
                                        const std::set<std::string>& svars) {
  std::vector<std::size_t> perm;
  for (std::size_t i = 0; i < inst.variables.size(); ++i)
    if (svars.count(inst.variables[i])) perm.push_back(i);
  for (std::size_t i = 0; i < inst.variables.size(); ++i)
    if (!svars.count(inst.variables[i])) perm.push_back(i);
  return perm;
}

// Routes every assignment of the finite hypothesis lattice (each coordinate
// either lies in the center prime, or nothing of its level does, or exactly
// one of its declared factors does) to the case leaf that discharges it.
std::map<std::string, long long> route_all_cases(const FieldInstance& inst) {
  const int n = static_cast<int>(inst.variables.size());
  std::vector<std::vector<std::string>> factors(n);
  std::vector<int> nstates(n);
  for (int i = 0; i < n; ++i) {
    factors[i] = inst.factor_names_of(inst.variables[i]);
    nstates[i] = 2 + static_cast<int>(factors[i].size());
  }

  std::map<std::string, long long> counts;
  std::vector<int> state(n, 0);  // 0 = coordinate in prime; 1 = nothing; 2+k = factor k
  while (true) {
    std::vector<std::string> svars;
    int least_c = -1;
    for (int i = 0; i < n; ++i) {
      if (state[i] == 0) svars.push_back(inst.variables[i]);
      if (state[i] >= 2 && least_c < 0) least_c = i;
    }
    std::string leaf;
    if (svars.empty())
      leaf = "case1";
    else if (least_c >= 0)
      leaf = "case2:" + inst.variables[least_c] + ":" + factors[least_c][state[least_c] - 2];
    else
      leaf = case3_id(svars);
    ++counts[leaf];

    int pos = n;
    while (pos > 0) {
      if (++state[pos - 1] < nstates[pos - 1]) break;
      state[pos - 1] = 0;
      --pos;
    }
    if (pos == 0) break;
  }
  return counts;
}

SquareClass product_class(const FieldInstancePtr& inst, const std::vector<std::string>& svars) {
  SquareClass p = trivial_class(inst);
  for (const auto& v : svars) p = class_mul(p, class_of(inst, {v}));
  return p;
}

std::vector<std::string> expected_unit_tuple(const FieldInstance& inst,
                                             const std::set<std::string>& svars) {
  std::vector<std::string> tuple{"~u"};
  for (const auto& v : inst.variables)
    if (!svars.count(v)) tuple.push_back("~" + v);
  return tuple;
}

const char* kCommitment =
    "modeling commitment: discrete valuations are analyzed through the finite case schema "
    "determined by which coordinates and which declared factors lie in the center prime, "
    "after reciprocal reduction of any coordinate taking a negative value; the constant "
    "field is algebraically closed of characteristic not 2, so every nonzero constant is a "
    "square; the analysis never distinguishes valuations of the base function field from "
    "valuations of its quadratic extension, because every step is valid for both";

// ---- leaf builders ----------------------------------------------------------

CertStep build_recip(const FieldInstancePtr& inst, const SquareClass& f, const SymbolSum& xi) {
  CertStep s;
  s.id = "recip";
  s.kind = "reciprocal-reduction";
  s.inputs["presentation"] = pres_to_json(xi.presentation);
  s.inputs["variables"] = inst->variables;
  json per = json::object();
  for (const auto& var : inst->variables) {
    ReciprocalResult rr = reciprocal_transform(inst, var);
    SquareClass fimg = map_class_through_reciprocal(f, rr, var);
    SquareClass ft = extension_class(rr.instance);
    if (!(fimg == ft))
      throw Error("reciprocal reduction: inverting " + var +
                  " does not carry the defining product onto the transformed instance's");
    SymbolSum mapped = map_symbol_through_reciprocal(xi, rr, var);
    json e;
    e["extension_class_image"] = class_to_json(fimg);
    e["transformed_extension_class"] = class_to_json(ft);
    e["mapped_presentation"] = pres_to_json(mapped.presentation);
    per[var] = std::move(e);
  }
  s.outputs["per_variable"] = std::move(per);
  s.justification =
      "a valuation taking a negative value on some coordinate becomes, after inverting those "
      "coordinates, a valuation nonnegative on every coordinate of a transformed instance of "
      "the same shape: inversion preserves each coordinate's square class and carries the "
      "defining product's class onto the transformed defining product, so the remaining "
      "cases apply verbatim there; in particular the at-infinity valuation in a coordinate "
      "becomes divisorial at that coordinate";
  return s;
}

CertStep build_case1(const SymbolSum& xi, long long covered) {
  CertStep s;
  s.id = "case1";
  s.kind = "unit-unramified";
  s.inputs["hypothesis"] = "every coordinate has valuation zero";
  s.inputs["presentation"] = pres_to_json(xi.presentation);
  s.outputs["residue"] = "zero";
  s.outputs["assignments_covered"] = covered;
  s.justification =
      "every slot of the symbol is a valuation unit under the hypothesis, so each term of "
      "its expansion is a unit symbol and its residue vanishes";
  return s;
}

CertStep build_case2(const FieldInstancePtr& inst, const std::string& var,
                     const std::string& factor, long long covered) {
  CertStep s;
  s.id = "case2:" + var + ":" + factor;
  s.kind = "square-in-completion";
  s.inputs["variable"] = var;
  s.inputs["factor"] = factor;
  s.inputs["valuation"] = "div:" + factor;
  s.inputs["coordinate_class"] = class_to_json(class_of(inst, {var}));
  s.inputs["root"] = inst->gen(factor).constant.str();
  s.inputs["hypothesis"] =
      "the factor lies in the center prime and its root is a nonzero constant (no declared "
      "factor vanishes at the origin)";
  Reduction red = reduce_class(class_of(inst, {var}), Valuation::divisorial(factor));
  if (red.parts.size() != 1 ||
      red.parts[0].second.kind != ResidueClass::Kind::NonzeroConstant ||
      !red.residue_class.is_trivial())
    throw Error("square-in-completion: " + var +
                " does not reduce to a nonzero constant at div:" + factor);
  s.outputs["reduction"] = "nonzero-constant";
  s.outputs["completion_class"] = "square";
  s.outputs["residue"] = "zero";
  s.outputs["assignments_covered"] = covered;
  s.justification =
      "the coordinate is a valuation unit reducing to a nonzero constant; constants are "
      "squares over the base and a unit with square residue is a square in the completion "
      "(Hensel), so the symbol has a square slot, restricts to zero in the completion, and "
      "carries no residue";
  return s;
}

CertStep build_case3(const FieldInstancePtr& inst, const SquareClass& f, const SymbolSum& xi,
                     const std::vector<std::string>& svars, long long covered) {
  const int n = static_cast<int>(inst->variables.size());
  const std::size_t m = svars.size();
  const std::set<std::string> sset(svars.begin(), svars.end());
  const std::string cid = case3_id(svars);

  ValuationCase vc;
  vc.positive_variables = sset;
  vc.residue_transcendence_bound = n - static_cast<int>(m);

  CertStep s;
  s.id = cid;
  s.kind = "case-split";
  s.inputs["S"] = svars;
  s.inputs["m"] = m;
  s.inputs["case"] = vc.to_json();
  s.inputs["hypothesis"] =
      "exactly the coordinates in S have positive valuation; no declared factor of a "
      "coordinate outside S lies in the center prime";
  s.outputs["residue"] = "zero";
  s.outputs["assignments_covered"] = covered;
  s.justification =
      "the odd slots are regrouped into one product slot, which the declared square trades "
      "for a valuation unit; the residue then vanishes either because every slot is a unit "
      "or by the dimension bound on the residue field";

  CertStep reindex;
  reindex.id = cid + "/reindex";
  reindex.kind = "symbol-rewrite";
  std::vector<std::size_t> perm = canonical_perm(*inst, sset);
  reindex.inputs["presentation"] = pres_to_json(xi.presentation);
  reindex.inputs["permutation"] = perm;
  SymbolSum permuted = permute_slots(xi, perm);
  reindex.outputs["presentation"] = pres_to_json(permuted.presentation);
  reindex.justification =
      "slots reordered so the odd-valuation coordinates come first; symbols are symmetric "
      "mod 2, so the normal form is unchanged (the permutation is recorded and replayed)";
  s.children.push_back(std::move(reindex));

  CertStep group;
  group.id = cid + "/group";
  group.kind = "symbol-rewrite";
  SquareClass prods = product_class(inst, svars);
  group.inputs["presentation"] = pres_to_json(permuted.presentation);
  group.inputs["slot"] = m - 1;
  group.inputs["combined"] = class_to_json(prods);
  SymbolSum grouped = rewrite_product_slot(permuted, {m - 1}, prods);
  if (!grouped.same_normal_form(xi))
    throw Error(cid + ": regrouping the odd slots changed the normal form");
  group.outputs["presentation"] = pres_to_json(grouped.presentation);
  group.justification =
      "the last odd slot becomes the product of all odd coordinates; the rewrite re-expands "
      "to the same normal form because every added cross term repeats a generator and "
      "vanishes";
  s.children.push_back(std::move(group));

  CertStep sub;
  sub.id = cid + "/substitute";
  sub.kind = "symbol-rewrite";
  SquareClass u = class_mul(f, prods);
  sub.inputs["presentation"] = pres_to_json(grouped.presentation);
  sub.inputs["slot"] = m - 1;
  sub.inputs["combined"] = class_to_json(u);
  sub.inputs["declared_square"] = class_to_json(f);
  SymbolSum subbed = rewrite_product_slot(grouped, {m - 1}, u);
  for (const auto& g : u.support)
    if (vc.in_ideal(g, *inst))
      throw Error(cid + ": the substituted slot is not a unit under the case hypothesis");
  sub.outputs["presentation"] = pres_to_json(subbed.presentation);
  sub.outputs["unit_slot_support"] = class_to_json(u);
  sub.justification =
      "over the quadratic extension the defining product is a square, and the product of "
      "the odd coordinates times the substituted class equals it up to squares; every "
      "generator in the new slot's support is a valuation unit under the case hypothesis";
  s.children.push_back(std::move(sub));

  if (m == 1) {
    CertStep done;
    done.id = cid + "/conclude";
    done.kind = "unit-unramified";
    done.inputs["presentation"] = pres_to_json(subbed.presentation);
    for (const auto& slot : subbed.presentation)
      for (const auto& g : slot.support)
        if (vc.in_ideal(g, *inst))
          throw Error(cid + ": a slot is not a unit after substitution");
    done.outputs["residue"] = "zero";
    done.justification =
        "after the substitution every slot is a valuation unit, so the symbol is unramified "
        "at every valuation of this case";
    s.children.push_back(std::move(done));
  } else {
    CertStep res;
    res.id = cid + "/residue";
    res.kind = "residue-computation";
    res.inputs["mode"] = "abstract";
    res.inputs["presentation"] = pres_to_json(subbed.presentation);
    res.inputs["m"] = m;
    res.inputs["case"] = vc.to_json();
    res.outputs["alpha_degree"] = m - 2;
    res.outputs["unit_tuple"] = expected_unit_tuple(*inst, sset);
    res.outputs["residue_degree"] = n - 1;
    res.outputs["residue_bound"] = n - static_cast<int>(m);
    res.justification =
        "the residue at any valuation of this case is a class of degree m-2 built from the "
        "odd slots, cup the reductions of the unit slot and the even coordinates: a symbol "
        "of the recorded degree over a residue field whose transcendence degree over the "
        "algebraically closed base is at most the recorded bound";
    s.children.push_back(std::move(res));

    CertStep van;
    van.id = cid + "/vanish";
    van.kind = "dimension-vanishing";
    van.inputs["class_degree"] = n - m + 1;
    van.inputs["bound"] = n - static_cast<int>(m);
    SymbolSum probe;
    probe.degree = static_cast<std::size_t>(n - m + 1);
    if (is_zero_by_dimension(probe, n - static_cast<int>(m)) != ZeroVerdict::ZeroByDimension)
      throw Error(cid + ": the dimension bound does not force vanishing");
    van.outputs["verdict"] = "zero";
    van.justification =
        "a mod-2 class of degree exceeding the residue field's transcendence degree over "
        "the algebraically closed base vanishes (cohomological dimension)";
    s.children.push_back(std::move(van));
  }
  return s;
}

CertStep build_spot_div_factor(const SymbolSum& xi, const std::string& gname) {
  SymbolSum res = residue(xi, Valuation::divisorial(gname));
  if (!res.is_zero()) throw Error("spot check: nonzero residue at div:" + gname);
  CertStep s;
  s.id = "spot:div:" + gname;
  s.kind = "residue-computation";
  s.inputs["mode"] = "concrete";
  s.inputs["valuation"] = "div:" + gname;
  s.inputs["presentation"] = pres_to_json(xi.presentation);
  s.outputs["residue_terms"] = terms_json(res);
  s.outputs["residue_is_zero"] = res.is_zero();
  s.justification =
      "direct evaluation of the residue of the coordinate symbol at the factor's divisor";
  return s;
}

CertStep build_spot_div_variable(const FieldInstancePtr& inst, const SquareClass& f,
                                 const SymbolSum& xi, const std::string& var) {
  const std::size_t i = static_cast<std::size_t>(
      std::find(inst->variables.begin(), inst->variables.end(), var) - inst->variables.begin());
  SquareClass u = class_mul(f, class_of(inst, {var}));
  SymbolSum subbed = rewrite_product_slot(xi, {i}, u);
  SymbolSum res = residue(subbed, Valuation::divisorial(var));
  if (!res.is_zero()) throw Error("spot check: nonzero residue at div:" + var);
  CertStep s;
  s.id = "spot:div:" + var;
  s.kind = "residue-computation";
  s.inputs["mode"] = "concrete";
  s.inputs["valuation"] = "div:" + var;
  s.inputs["substituted_slot"] = i;
  s.inputs["combined"] = class_to_json(u);
  s.inputs["declared_square"] = class_to_json(f);
  s.inputs["presentation"] = pres_to_json(subbed.presentation);
  s.outputs["residue_terms"] = terms_json(res);
  s.outputs["residue_is_zero"] = res.is_zero();
  s.justification =
      "the coordinate slot is first traded against the declared square (valid over the "
      "quadratic extension), after which every slot is a unit at the divisor and the "
      "residue is evaluated directly";
  return s;
}

CertStep build_spot_inf(const FieldInstancePtr& inst, const SymbolSum& xi,
                        const std::string& var) {
  const std::size_t i = static_cast<std::size_t>(
      std::find(inst->variables.begin(), inst->variables.end(), var) - inst->variables.begin());
  ReciprocalResult rr = reciprocal_transform(inst, var);
  SquareClass ft = extension_class(rr.instance);
  SymbolSum mapped = map_symbol_through_reciprocal(xi, rr, var);
  SquareClass ut = class_mul(ft, class_of(rr.instance, {var}));
  SymbolSum subbed = rewrite_product_slot(mapped, {i}, ut);
  SymbolSum res = residue(subbed, Valuation::divisorial(var));
  if (!res.is_zero()) throw Error("spot check: nonzero residue at inf:" + var);
  CertStep s;
  s.id = "spot:inf:" + var;
  s.kind = "residue-computation";
  s.inputs["mode"] = "concrete";
  s.inputs["variable"] = var;
  s.inputs["valuation"] = "div:" + var;  // over the transformed instance
  s.inputs["substituted_slot"] = i;
  s.inputs["combined"] = class_to_json(ut);
  s.inputs["declared_square"] = class_to_json(ft);
  s.inputs["presentation"] = pres_to_json(subbed.presentation);
  s.outputs["transformed_extension_class"] = class_to_json(ft);
  s.outputs["residue_terms"] = terms_json(res);
  s.outputs["residue_is_zero"] = res.is_zero();
  s.justification =
      "the at-infinity valuation becomes divisorial at the inverted coordinate over the "
      "transformed instance; the mapped symbol's inverted slot is traded against the "
      "transformed defining square and the residue is evaluated directly";
  return s;
}

CertStep undischarged_step(const std::string& id, const std::string& kind,
                           const std::string& error) {
  CertStep s;
  s.id = id;
  s.kind = kind;
  s.outputs["undischarged"] = true;
  s.outputs["error"] = error;
  return s;
}

}  // namespace

Certificate certify_unramified(const FieldInstancePtr& inst) {
  if (!inst) throw Precondition("certify: field instance required");
  inst->validate();
  if (inst->variables.empty())
    throw Precondition("certify: the instance has no coordinates");
  for (const auto& var : inst->variables) {
    int total = 0;
    for (const auto& name : inst->factor_names_of(var)) {
      const IrreducibleGen& g = inst->gen(name);
      if (!g.nonzero_at_origin || g.constant.is_zero())
        throw Precondition("certify: factor " + name + " vanishes at the origin");
      total += g.degree_in(var);
    }
    if (total % 2 != 0)
      throw Precondition("certify: the declared factor product in " + var + " has odd degree");
  }

  const int n = static_cast<int>(inst->variables.size());
  SquareClass f = extension_class(inst);
  SymbolSum xi = symbol(xi_presentation(inst)).with_declared_square(f);
  std::map<std::string, long long> counts = route_all_cases(*inst);

  Certificate cert;
  cert.kind = "unramifiedness-certificate";
  cert.goal =
      "the degree-" + std::to_string(n) +
      " coordinate symbol, restricted to the quadratic extension by the defining product, "
      "has zero residue at every discrete valuation";
  cert.commitment = kCommitment;
  cert.instance = instance_to_json(*inst);
  cert.extension_class = class_to_json(f);
  cert.status = "complete";

  auto attempt = [&cert](const std::string& id, const std::string& kind, auto&& build) {
    try {
      cert.steps.push_back(build());
    } catch (const Error& e) {
      cert.steps.push_back(undischarged_step(id, kind, e.what()));
      cert.status = "incomplete";
    }
  };

  attempt("recip", "reciprocal-reduction", [&] { return build_recip(inst, f, xi); });
  attempt("case1", "unit-unramified", [&] { return build_case1(xi, counts["case1"]); });
  if (n >= 2)
    for (const auto& var : inst->variables)
      for (const auto& factor : inst->factor_names_of(var))
        attempt("case2:" + var + ":" + factor, "square-in-completion", [&] {
          long long covered = counts["case2:" + var + ":" + factor];
          if (covered <= 0)
            throw Error("coverage: no valuation case routes to case2:" + var + ":" + factor);
          return build_case2(inst, var, factor, covered);
        });
  for (const auto& subset : graded_nonempty_subsets(n)) {
    std::vector<std::string> svars;
    for (int i : subset) svars.push_back(inst->variables[static_cast<std::size_t>(i)]);
    attempt(case3_id(svars), "case-split", [&] {
      long long covered = counts[case3_id(svars)];
      if (covered <= 0)
        throw Error("coverage: no valuation case routes to " + case3_id(svars));
      return build_case3(inst, f, xi, svars, covered);
    });
  }

  attempt("spots", "case-split", [&] {
    CertStep spots;
    spots.id = "spots";
    spots.kind = "case-split";
    spots.inputs["note"] =
        "concrete residue spot checks over the declared valuations; supplementary to the "
        "case analysis";
    spots.justification =
        "each child evaluates the residue map directly and must produce zero";
    for (const auto& g : inst->generators) {
      if (g.is_variable_gen)
        spots.children.push_back(build_spot_div_variable(inst, f, xi, g.name));
      else
        spots.children.push_back(build_spot_div_factor(xi, g.name));
    }
    for (const auto& var : inst->variables)
      spots.children.push_back(build_spot_inf(inst, xi, var));
    return spots;
  });

  return cert;
}

Certificate main_unram(const FieldInstancePtr& inst) {
  if (!inst) throw Precondition("main: field instance required");
  inst->validate();
  std::set<std::string> seen_syms;
  for (const auto& var : inst->variables) {
    std::vector<std::string> fs = inst->factor_names_of(var);
    if (fs.size() != 2)
      throw Precondition("main: expected exactly two declared factors in " + var);
    bool has_one = false, has_sym = false;
    for (const auto& name : fs) {
      const ConstVal& c = inst->gen(name).constant;
      if (c.sym.empty() && c.coeff.is_one() && c.sym_exp == 0) {
        has_one = true;
      } else if (!c.sym.empty() && c.sym_exp == 1 && c.coeff.is_one()) {
        if (!seen_syms.insert(c.sym).second)
          throw Precondition("main: transcendental constant " + c.sym + " is reused");
        has_sym = true;
      } else {
        throw Precondition("main: factor " + name + " does not have the Legendre shape");
      }
    }
    if (!has_one || !has_sym)
      throw Precondition("main: the factors of " + var +
                         " must have roots 1 and a declared transcendental constant");
  }
  Certificate cert = certify_unramified(inst);
  cert.identification =
      "the quadratic extension is by the square root of the product of all coordinates and "
      "declared factors; in each coordinate direction its Kummer class coincides with the "
      "coordinate's square class, so the certified class is the cup product of the "
      "coordinate classes";
  return cert;
}

// ---- independent replay ------------------------------------------------------

namespace {

struct Replayer {
  const Certificate& cert;
  std::vector<ReplayIssue> issues;

  FieldInstancePtr inst;
  SquareClass f;
  SymbolSum xi;

  explicit Replayer(const Certificate& c) : cert(c) {}

  void issue(const std::string& id, const std::string& msg) { issues.push_back({id, msg}); }

  void expect_json(const CertStep& s, const char* where, const json& got, const json& want) {
    if (got != want) {
      auto path = json_diff_path(got, want);
      issue(s.id, std::string(where) + " differs" + (path ? " at " + *path : ""));
    }
  }

  bool prepare() {
    if (cert.kind != "unramifiedness-certificate") {
      issue("", "unexpected certificate kind '" + cert.kind + "'");
      return false;
    }
    if (!cert.is_complete())
      issue("", "status is '" + cert.status + "': the goal is undischarged");
    try {
      inst = instance_from_json(cert.instance);
      inst->validate();
    } catch (const std::exception& e) {
      issue("", std::string("embedded instance: ") + e.what());
      return false;
    }
    f = extension_class(inst);
    if (cert.extension_class != class_to_json(f)) {
      issue("", "extension class does not match the embedded instance's defining product");
      return false;
    }
    xi = symbol(xi_presentation(inst)).with_declared_square(f);
    return true;
  }

  std::vector<std::string> expected_leaf_ids() const {
    std::vector<std::string> ids{"recip", "case1"};
    const int n = static_cast<int>(inst->variables.size());
    if (n >= 2)
      for (const auto& var : inst->variables)
        for (const auto& factor : inst->factor_names_of(var))
          ids.push_back("case2:" + var + ":" + factor);
    for (const auto& subset : graded_nonempty_subsets(n)) {
      std::vector<std::string> svars;
      for (int i : subset) svars.push_back(inst->variables[static_cast<std::size_t>(i)]);
      ids.push_back(case3_id(svars));
    }
    ids.push_back("spots");
    return ids;
  }

  void check_discharged(const CertStep& s) {
    if (s.outputs.contains("undischarged") && s.outputs["undischarged"].is_boolean() &&
        s.outputs["undischarged"].get<bool>())
      issue(s.id, "leaf is marked undischarged: " + s.outputs.value("error", std::string{}));
  }

  void replay_recip(const CertStep& s) {
    if (s.kind != "reciprocal-reduction") {
      issue(s.id, "expected kind reciprocal-reduction, found '" + s.kind + "'");
      return;
    }
    expect_json(s, "input presentation", s.inputs.value("presentation", json()),
                pres_to_json(xi.presentation));
    const json& per = s.outputs.value("per_variable", json::object());
    for (const auto& var : inst->variables) {
      if (!per.contains(var)) {
        issue(s.id, "missing reciprocal record for coordinate " + var);
        continue;
      }
      ReciprocalResult rr = reciprocal_transform(inst, var);
      SquareClass fimg = map_class_through_reciprocal(f, rr, var);
      SquareClass ft = extension_class(rr.instance);
      if (!(fimg == ft)) {
        issue(s.id, "the defining product does not map onto the transformed product in " + var);
        continue;
      }
      SymbolSum mapped = map_symbol_through_reciprocal(xi, rr, var);
      const json& e = per[var];
      expect_json(s, ("extension class image in " + var).c_str(),
                  e.value("extension_class_image", json()), class_to_json(fimg));
      expect_json(s, ("transformed extension class in " + var).c_str(),
                  e.value("transformed_extension_class", json()), class_to_json(ft));
      expect_json(s, ("mapped presentation in " + var).c_str(),
                  e.value("mapped_presentation", json()), pres_to_json(mapped.presentation));
    }
    for (auto it = per.begin(); it != per.end(); ++it)
      if (!inst->has_variable(it.key()))
        issue(s.id, "reciprocal record for unknown coordinate " + it.key());
  }

  void replay_case1(const CertStep& s) {
    if (s.kind != "unit-unramified") {
      issue(s.id, "expected kind unit-unramified, found '" + s.kind + "'");
      return;
    }
    expect_json(s, "input presentation", s.inputs.value("presentation", json()),
                pres_to_json(xi.presentation));
    if (s.outputs.value("residue", std::string{}) != "zero")
      issue(s.id, "recorded residue is not zero");
    try {
      std::vector<SquareClass> pres = pres_from_json(inst, s.inputs.value("presentation", json()));
      for (std::size_t i = 0; i < pres.size(); ++i)
        if (pres[i].support != std::set<std::string>{inst->variables.at(i)})
          issue(s.id, "slot " + std::to_string(i) + " is not the coordinate's class");
    } catch (const std::exception& e) {
      issue(s.id, std::string("presentation does not parse: ") + e.what());
    }
  }

  void replay_case2(const CertStep& s) {
    if (s.kind != "square-in-completion") {
      issue(s.id, "expected kind square-in-completion, found '" + s.kind + "'");
      return;
    }
    std::string var = s.inputs.value("variable", std::string{});
    std::string factor = s.inputs.value("factor", std::string{});
    if (s.id != "case2:" + var + ":" + factor) {
      issue(s.id, "step id does not match its recorded variable and factor");
      return;
    }
    if (!inst->has_variable(var)) {
      issue(s.id, "unknown coordinate " + var);
      return;
    }
    const IrreducibleGen* g = inst->find_gen(factor);
    if (!g || g->is_variable_gen || g->univariate_in != var) {
      issue(s.id, "'" + factor + "' is not a declared factor of " + var);
      return;
    }
    if (g->constant.is_zero()) {
      issue(s.id, "the factor's root is zero, the square-in-completion rule does not apply");
      return;
    }
    if (s.inputs.value("root", std::string{}) != g->constant.str())
      issue(s.id, "recorded root does not match the factor's root");
    expect_json(s, "coordinate class", s.inputs.value("coordinate_class", json()),
                class_to_json(class_of(inst, {var})));
    try {
      Reduction red = reduce_class(class_of(inst, {var}), Valuation::divisorial(factor));
      if (red.parts.size() != 1 ||
          red.parts[0].second.kind != ResidueClass::Kind::NonzeroConstant ||
          !red.residue_class.is_trivial()) {
        issue(s.id, "the coordinate does not reduce to a nonzero constant at div:" + factor);
        return;
      }
    } catch (const std::exception& e) {
      issue(s.id, std::string("reduction replay failed: ") + e.what());
      return;
    }
    if (s.outputs.value("reduction", std::string{}) != "nonzero-constant" ||
        s.outputs.value("residue", std::string{}) != "zero")
      issue(s.id, "recorded outputs do not state the nonzero-constant reduction");
  }

  void replay_case3(const CertStep& s) {
    if (s.kind != "case-split") {
      issue(s.id, "expected kind case-split, found '" + s.kind + "'");
      return;
    }
    std::vector<std::string> svars;
    for (const auto& v : s.inputs.value("S", json::array())) svars.push_back(v.get<std::string>());
    if (svars.empty() || s.id != case3_id(svars)) {
      issue(s.id, "step id does not match its recorded coordinate subset");
      return;
    }
    {
      std::size_t pos = 0;
      for (const auto& v : inst->variables)
        if (pos < svars.size() && svars[pos] == v) ++pos;
      if (pos != svars.size()) {
        issue(s.id, "the subset is not listed in coordinate declaration order");
        return;
      }
    }
    const int n = static_cast<int>(inst->variables.size());
    const std::size_t m = svars.size();
    const std::set<std::string> sset(svars.begin(), svars.end());
    if (s.inputs.value("m", std::size_t{0}) != m)
      issue(s.id, "recorded m does not equal |S|");
    ValuationCase vc;
    vc.positive_variables = sset;
    vc.residue_transcendence_bound = n - static_cast<int>(m);
    expect_json(s, "valuation case", s.inputs.value("case", json()), vc.to_json());

    std::vector<std::string> want_child_ids{s.id + "/reindex", s.id + "/group",
                                            s.id + "/substitute"};
    if (m == 1)
      want_child_ids.push_back(s.id + "/conclude");
    else {
      want_child_ids.push_back(s.id + "/residue");
      want_child_ids.push_back(s.id + "/vanish");
    }
    if (s.children.size() != want_child_ids.size()) {
      issue(s.id, "unexpected child-step count");
      return;
    }
    for (std::size_t i = 0; i < want_child_ids.size(); ++i)
      if (s.children[i].id != want_child_ids[i]) {
        issue(s.id, "child steps are not the reindex/group/substitute chain");
        return;
      }

    const CertStep& reindex = s.children[0];
    const CertStep& group = s.children[1];
    const CertStep& sub = s.children[2];

    if (reindex.kind != "symbol-rewrite") issue(reindex.id, "expected kind symbol-rewrite");
    expect_json(reindex, "input presentation", reindex.inputs.value("presentation", json()),
                pres_to_json(xi.presentation));
    std::vector<std::size_t> perm;
    for (const auto& p : reindex.inputs.value("permutation", json::array()))
      perm.push_back(p.get<std::size_t>());
    if (perm != canonical_perm(*inst, sset)) {
      issue(reindex.id, "recorded permutation is not the canonical one for S");
      return;
    }
    SymbolSum permuted;
    try {
      permuted = permute_slots(xi, perm);
    } catch (const std::exception& e) {
      issue(reindex.id, std::string("permutation replay failed: ") + e.what());
      return;
    }
    expect_json(reindex, "output presentation", reindex.outputs.value("presentation", json()),
                pres_to_json(permuted.presentation));
    if (!permuted.same_normal_form(xi))
      issue(reindex.id, "permutation changed the normal form");

    if (group.kind != "symbol-rewrite") issue(group.id, "expected kind symbol-rewrite");
    expect_json(group, "input presentation", group.inputs.value("presentation", json()),
                pres_to_json(permuted.presentation));
    if (group.inputs.value("slot", std::size_t{1 << 20}) != m - 1)
      issue(group.id, "grouping slot is not the last odd slot");
    SquareClass prods = product_class(inst, svars);
    expect_json(group, "combined class", group.inputs.value("combined", json()),
                class_to_json(prods));
    SymbolSum grouped;
    try {
      grouped = rewrite_product_slot(permuted, {m - 1}, prods);
    } catch (const std::exception& e) {
      issue(group.id, std::string("regrouping replay failed: ") + e.what());
      return;
    }
    if (!grouped.same_normal_form(xi)) issue(group.id, "regrouping changed the normal form");
    expect_json(group, "output presentation", group.outputs.value("presentation", json()),
                pres_to_json(grouped.presentation));

    if (sub.kind != "symbol-rewrite") issue(sub.id, "expected kind symbol-rewrite");
    expect_json(sub, "input presentation", sub.inputs.value("presentation", json()),
                pres_to_json(grouped.presentation));
    if (sub.inputs.value("slot", std::size_t{1 << 20}) != m - 1)
      issue(sub.id, "substitution slot is not the last odd slot");
    SquareClass u = class_mul(f, prods);
    expect_json(sub, "combined class", sub.inputs.value("combined", json()), class_to_json(u));
    expect_json(sub, "declared square", sub.inputs.value("declared_square", json()),
                class_to_json(f));
    SymbolSum subbed;
    try {
      subbed = rewrite_product_slot(grouped, {m - 1}, u);
    } catch (const std::exception& e) {
      issue(sub.id, std::string("substitution replay failed: ") + e.what());
      return;
    }
    expect_json(sub, "output presentation", sub.outputs.value("presentation", json()),
                pres_to_json(subbed.presentation));
    for (const auto& g : u.support)
      if (vc.in_ideal(g, *inst))
        issue(sub.id, "the substituted slot is not a unit under the case hypothesis");

    if (m == 1) {
      const CertStep& done = s.children[3];
      if (done.kind != "unit-unramified") issue(done.id, "expected kind unit-unramified");
      expect_json(done, "input presentation", done.inputs.value("presentation", json()),
                  pres_to_json(subbed.presentation));
      for (const auto& slot : subbed.presentation)
        for (const auto& g : slot.support)
          if (vc.in_ideal(g, *inst)) issue(done.id, "a slot is not a unit under the hypothesis");
      if (done.outputs.value("residue", std::string{}) != "zero")
        issue(done.id, "recorded residue is not zero");
    } else {
      const CertStep& res = s.children[3];
      const CertStep& van = s.children[4];
      if (res.kind != "residue-computation") issue(res.id, "expected kind residue-computation");
      if (res.inputs.value("mode", std::string{}) != "abstract")
        issue(res.id, "expected abstract mode");
      expect_json(res, "input presentation", res.inputs.value("presentation", json()),
                  pres_to_json(subbed.presentation));
      if (res.outputs.value("alpha_degree", std::size_t{1 << 20}) != m - 2)
        issue(res.id, "alpha degree is not m-2");
      json want_tuple = expected_unit_tuple(*inst, sset);
      expect_json(res, "unit tuple", res.outputs.value("unit_tuple", json()), want_tuple);
      if (res.outputs.value("residue_degree", -1) != n - 1)
        issue(res.id, "residue degree is not n-1");
      if (res.outputs.value("residue_bound", -1) != n - static_cast<int>(m))
        issue(res.id, "residue bound is not n-m");

      if (van.kind != "dimension-vanishing") issue(van.id, "expected kind dimension-vanishing");
      int cd = van.inputs.value("class_degree", -1);
      int bound = van.inputs.value("bound", -1);
      if (cd != n - static_cast<int>(m) + 1) issue(van.id, "class degree is not n-m+1");
      if (bound != n - static_cast<int>(m)) issue(van.id, "bound is not n-m");
      SymbolSum probe;
      probe.degree = static_cast<std::size_t>(cd < 0 ? 0 : cd);
      try {
        if (is_zero_by_dimension(probe, bound) != ZeroVerdict::ZeroByDimension)
          issue(van.id, "the dimension rule does not force vanishing on the recorded data");
      } catch (const std::exception& e) {
        issue(van.id, std::string("dimension rule replay failed: ") + e.what());
      }
      if (van.outputs.value("verdict", std::string{}) != "zero")
        issue(van.id, "recorded verdict is not zero");
    }
  }

  void replay_spot(const CertStep& c) {
    if (c.kind != "residue-computation") {
      issue(c.id, "expected kind residue-computation, found '" + c.kind + "'");
      return;
    }
    if (c.inputs.value("mode", std::string{}) != "concrete") {
      issue(c.id, "spot checks must be concrete");
      return;
    }
    const bool is_inf = c.id.rfind("spot:inf:", 0) == 0;
    const bool is_div = c.id.rfind("spot:div:", 0) == 0;
    if (!is_inf && !is_div) {
      issue(c.id, "unexpected spot-check id");
      return;
    }
    const std::string target = c.id.substr(9);

    try {
      FieldInstancePtr over = inst;
      SymbolSum base = xi;
      if (is_inf) {
        if (!inst->has_variable(target)) {
          issue(c.id, "unknown coordinate " + target);
          return;
        }
        ReciprocalResult rr = reciprocal_transform(inst, target);
        SquareClass ft = extension_class(rr.instance);
        SquareClass fimg = map_class_through_reciprocal(f, rr, target);
        if (!(fimg == ft)) {
          issue(c.id, "the defining product does not map onto the transformed product");
          return;
        }
        expect_json(c, "transformed extension class",
                    c.outputs.value("transformed_extension_class", json()), class_to_json(ft));
        over = rr.instance;
        base = map_symbol_through_reciprocal(xi, rr, target);
      }
      const IrreducibleGen* g = over->find_gen(target);
      if (!g) {
        issue(c.id, "unknown generator " + target);
        return;
      }
      SymbolSum checked = base;
      if (g->is_variable_gen) {
        const std::size_t i = static_cast<std::size_t>(
            std::find(over->variables.begin(), over->variables.end(), g->name) -
            over->variables.begin());
        if (c.inputs.value("substituted_slot", std::size_t{1 << 20}) != i) {
          issue(c.id, "recorded substituted slot is not the coordinate's slot");
          return;
        }
        SquareClass fo = extension_class(over);
        SquareClass u = class_mul(fo, class_of(over, {g->name}));
        expect_json(c, "combined class", c.inputs.value("combined", json()), class_to_json(u));
        expect_json(c, "declared square", c.inputs.value("declared_square", json()),
                    class_to_json(fo));
        checked = rewrite_product_slot(base, {i}, u);
      }
      expect_json(c, "presentation", c.inputs.value("presentation", json()),
                  pres_to_json(checked.presentation));
      if (c.inputs.value("valuation", std::string{}) != "div:" + g->name)
        issue(c.id, "recorded valuation does not match the spot target");
      SymbolSum res = residue(checked, Valuation::divisorial(g->name));
      expect_json(c, "residue terms", c.outputs.value("residue_terms", json()), terms_json(res));
      if (c.outputs.value("residue_is_zero", false) != res.is_zero())
        issue(c.id, "recorded residue flag does not match the replayed residue");
      if (!res.is_zero()) issue(c.id, "replayed residue is nonzero");
    } catch (const std::exception& e) {
      issue(c.id, std::string("spot replay failed: ") + e.what());
    }
  }

  void replay_spots(const CertStep& s) {
    if (s.kind != "case-split") {
      issue(s.id, "expected kind case-split, found '" + s.kind + "'");
      return;
    }
    std::vector<std::string> want;
    for (const auto& g : inst->generators) want.push_back("spot:div:" + g.name);
    for (const auto& var : inst->variables) want.push_back("spot:inf:" + var);
    std::vector<std::string> got;
    for (const auto& c : s.children) got.push_back(c.id);
    if (got != want) {
      issue(s.id, "spot-check children do not enumerate the declared valuations");
      return;
    }
    for (const auto& c : s.children) {
      check_discharged(c);
      replay_spot(c);
    }
  }

  void verify_coverage() {
    std::map<std::string, long long> counts = route_all_cases(*inst);
    for (const auto& [leaf, count] : counts) {
      const CertStep* step = cert.find(leaf);
      if (!step) {
        issue("", "a valuation case routes to missing leaf " + leaf);
        continue;
      }
      long long recorded = step->outputs.value("assignments_covered", -1LL);
      if (recorded != count)
        issue(leaf, "recorded case coverage (" + std::to_string(recorded) +
                        ") differs from the recomputed routing (" + std::to_string(count) + ")");
    }
    for (const auto& step : cert.steps) {
      if (step.id == "recip" || step.id == "spots") continue;
      if (!counts.count(step.id) || counts[step.id] <= 0)
        issue(step.id, "no valuation case routes to this leaf");
    }
  }

  void run() {
    if (!prepare()) return;
    std::vector<std::string> expected = expected_leaf_ids();
    std::vector<std::string> got;
    for (const auto& s : cert.steps) got.push_back(s.id);
    if (got != expected) {
      std::ostringstream os;
      os << "step list does not match the case schema; expected [";
      for (std::size_t i = 0; i < expected.size(); ++i)
        os << (i ? ", " : "") << expected[i];
      os << "], found [";
      for (std::size_t i = 0; i < got.size(); ++i) os << (i ? ", " : "") << got[i];
      os << "]";
      issue("", os.str());
    }
    for (const auto& s : cert.steps) {
      check_discharged(s);
      if (s.id == "recip")
        replay_recip(s);
      else if (s.id == "case1")
        replay_case1(s);
      else if (s.id.rfind("case2:", 0) == 0)
        replay_case2(s);
      else if (s.id.rfind("case3:", 0) == 0)
        replay_case3(s);
      else if (s.id == "spots")
        replay_spots(s);
      else
        issue(s.id, "unexpected step");
    }
    verify_coverage();
  }
};

}  // namespace

ReplayReport check_certificate(const Certificate& c) {
  Replayer r(c);
  r.run();
  ReplayReport rep;
  rep.issues = std::move(r.issues);
  rep.ok = rep.issues.empty() && c.is_complete();
  return rep;
}

}  // namespace qfcert
