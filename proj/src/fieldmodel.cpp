#include "qfcert/fieldmodel.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace qfcert {

std::string ResidueClass::str() const {
  switch (kind) {
    case Kind::TrivialSquare: return "trivial-square";
    case Kind::NonzeroConstant: return "nonzero-constant";
    case Kind::GeneratorClass: return "generator:" + generator;
  }
  return "?";
}

int IrreducibleGen::degree_in(const std::string& var) const {
  auto it = degree_in_variable.find(var);
  return it == degree_in_variable.end() ? 0 : it->second;
}

const IrreducibleGen* FieldInstance::find_gen(const std::string& name) const {
  for (const auto& g : generators)
    if (g.name == name) return &g;
  return nullptr;
}

const IrreducibleGen& FieldInstance::gen(const std::string& name) const {
  const IrreducibleGen* g = find_gen(name);
  if (!g) throw Error("unknown generator '" + name + "' in " + label);
  return *g;
}

bool FieldInstance::has_variable(const std::string& name) const {
  return std::find(variables.begin(), variables.end(), name) != variables.end();
}

std::vector<std::string> FieldInstance::factor_names_of(const std::string& var) const {
  std::vector<std::string> out;
  for (const auto& g : generators)
    if (!g.is_variable_gen && g.univariate_in && *g.univariate_in == var)
      out.push_back(g.name);
  return out;
}

int FieldInstance::gen_index(const std::string& name) const {
  for (size_t i = 0; i < generators.size(); ++i)
    if (generators[i].name == name) return static_cast<int>(i);
  return -1;
}

std::string FieldInstance::structural_key() const {
  std::ostringstream os;
  os << n << ';';
  for (const auto& v : variables) os << v << ',';
  os << ';';
  for (const auto& c : constants) os << c << ',';
  os << ';';
  for (const auto& g : generators) {
    os << g.name << ':' << (g.univariate_in ? *g.univariate_in : "") << ':'
       << g.constant.str() << '|';
  }
  os << ';' << transcendence_bound;
  return os.str();
}

void FieldInstance::validate() const {
  std::set<std::string> names;
  for (const auto& v : variables) {
    if (!is_identifier(v)) throw Error("bad variable name '" + v + "'");
    if (!names.insert(v).second) throw Error("duplicate variable '" + v + "'");
  }
  if (static_cast<int>(variables.size()) != n)
    throw Error("variable count does not match n");
  std::set<std::string> gnames;
  for (const auto& g : generators) {
    if (g.name.empty()) throw Error("generator with empty name");
    if (!gnames.insert(g.name).second)
      throw Error("duplicate generator name '" + g.name + "'");
    if (g.univariate_in) {
      if (g.variable_support != std::set<std::string>{*g.univariate_in})
        throw Error("generator '" + g.name + "': support inconsistent with univariate-in");
      if (!has_variable(*g.univariate_in))
        throw Error("generator '" + g.name + "' over unknown variable");
    }
    if (g.nonzero_at_origin == g.constant.is_zero() && g.univariate_in)
      throw Error("generator '" + g.name + "': nonzero-at-origin inconsistent with constant");
    if (g.reduction_table.count(g.name))
      throw Error("generator '" + g.name + "' has a reduction entry at its own valuation");
    for (const auto& [key, rc] : g.reduction_table) {
      if (!find_gen(key))
        throw Error("reduction table of '" + g.name + "' references unknown '" + key + "'");
      if (rc.kind == ResidueClass::Kind::GeneratorClass && rc.generator.empty())
        throw Error("empty generator-class reduction for '" + g.name + "'");
    }
  }
}

bool same_instance(const FieldInstancePtr& a, const FieldInstancePtr& b) {
  if (!a || !b) return false;
  if (a == b) return true;
  return a->structural_key() == b->structural_key();
}

std::string SquareClass::str() const {
  if (support.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  if (!instance) {
    for (const auto& s : support) {
      if (!first) os << '*';
      first = false;
      os << s;
    }
    return os.str();
  }
  // declaration order, with parentheses around multi-character factor names
  for (const auto& g : instance->generators) {
    if (!support.count(g.name)) continue;
    if (!first) os << '*';
    first = false;
    if (g.name.find('-') != std::string::npos || g.name.find('+') != std::string::npos)
      os << '(' << g.name << ')';
    else
      os << g.name;
  }
  // names not known to the instance (abstract images) go last, sorted
  for (const auto& s : support) {
    if (instance && instance->find_gen(s)) continue;
    if (!first) os << '*';
    first = false;
    os << s;
  }
  return os.str();
}

bool ValuationCase::in_ideal(const std::string& gen_name, const FieldInstance& inst) const {
  const IrreducibleGen& g = inst.gen(gen_name);
  if (g.is_variable_gen) return positive_variables.count(g.name) > 0;
  auto it = factor_in_ideal.find(gen_name);
  return it != factor_in_ideal.end() && it->second;
}

json ValuationCase::to_json() const {
  json j;
  j["positive_variables"] = positive_variables;
  json fi = json::object();
  for (const auto& [k, v] : factor_in_ideal)
    if (v) fi[k] = true;
  j["factor_in_ideal"] = fi;
  j["residue_transcendence_bound"] = residue_transcendence_bound;
  return j;
}

ValuationCase ValuationCase::from_json(const json& j) {
  ValuationCase c;
  for (const auto& v : j.at("positive_variables")) c.positive_variables.insert(v.get<std::string>());
  for (const auto& [k, v] : j.at("factor_in_ideal").items()) c.factor_in_ideal[k] = v.get<bool>();
  c.residue_transcendence_bound = j.at("residue_transcendence_bound").get<int>();
  return c;
}

Valuation Valuation::divisorial(const std::string& gen) {
  return {Kind::DivisorialAtGenerator, gen, std::nullopt};
}
Valuation Valuation::at_infinity(const std::string& var) {
  return {Kind::AtInfinityInVariable, var, std::nullopt};
}
Valuation Valuation::abstract_case(const ValuationCase& c) {
  return {Kind::AbstractCase, "", c};
}

std::string Valuation::str() const {
  switch (kind) {
    case Kind::DivisorialAtGenerator: return "div:" + at;
    case Kind::AtInfinityInVariable: return "inf:" + at;
    case Kind::AbstractCase: return "case";
  }
  return "?";
}

Valuation Valuation::parse(const std::string& s) {
  if (s.rfind("div:", 0) == 0 && s.size() > 4) return divisorial(s.substr(4));
  if (s.rfind("inf:", 0) == 0 && s.size() > 4) return at_infinity(s.substr(4));
  throw Error("cannot parse valuation '" + s + "' (expected div:<generator> or inf:<variable>)");
}

std::vector<std::string> default_variable_names(int n) {
  if (n <= 3) {
    std::vector<std::string> v = {"x", "y", "z"};
    v.resize(n);
    return v;
  }
  std::vector<std::string> v;
  for (int i = 1; i <= n; ++i) v.push_back("x" + std::to_string(i));
  return v;
}

std::vector<std::string> default_constant_names(int n) {
  if (n <= 3) {
    std::vector<std::string> v = {"lambda", "kappa", "nu"};
    v.resize(n);
    return v;
  }
  std::vector<std::string> v;
  for (int i = 1; i <= n; ++i) v.push_back("lambda" + std::to_string(i));
  return v;
}

std::string canonical_factor_name(const std::string& var, const ConstVal& c) {
  std::string cs = c.str();
  if (!cs.empty() && cs[0] == '-') return var + "+" + cs.substr(1);
  return var + "-" + cs;
}

static bool valid_gen_name(const std::string& s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (std::isalnum(static_cast<unsigned char>(ch))) continue;
    if (ch == '-' || ch == '+' || ch == '/' || ch == '_' || ch == '(' || ch == ')' ||
        ch == '~' || ch == '.')
      continue;
    return false;  // '*', ';' and whitespace are separators elsewhere
  }
  return true;
}

FieldInstancePtr make_instance(const InstanceSpec& spec) {
  if (spec.n <= 0) throw Precondition("instance needs at least one variable");
  if (static_cast<int>(spec.variables.size()) != spec.n)
    throw Precondition("expected " + std::to_string(spec.n) + " variable names, got " +
                       std::to_string(spec.variables.size()));

  auto inst = std::make_shared<FieldInstance>();
  inst->n = spec.n;
  inst->variables = spec.variables;
  inst->constants = spec.constants;
  inst->transcendence_bound = spec.n;
  {
    std::ostringstream os;
    os << "k(";
    for (size_t i = 0; i < spec.variables.size(); ++i)
      os << (i ? "," : "") << spec.variables[i];
    os << ")";
    inst->label = os.str();
  }

  std::set<std::string> cnames;
  for (const auto& c : spec.constants) {
    if (!is_identifier(c)) throw Precondition("bad constant name '" + c + "'");
    if (!cnames.insert(c).second) throw Precondition("duplicate constant '" + c + "'");
  }

  std::set<std::string> seen_names;
  for (const auto& v : spec.variables) {
    if (!is_identifier(v)) throw Precondition("bad variable name '" + v + "'");
    if (cnames.count(v)) throw Precondition("'" + v + "' declared both variable and constant");
    if (!seen_names.insert(v).second) throw Precondition("duplicate variable '" + v + "'");
  }

  for (const auto& [var, facs] : spec.factors)
    if (std::find(spec.variables.begin(), spec.variables.end(), var) == spec.variables.end())
      throw Precondition("factor list for unknown variable '" + var + "'");

  for (const auto& var : spec.variables) {
    // the variable itself is a generator; its factor list multiplies f
    IrreducibleGen xg;
    xg.name = var;
    xg.variable_support = {var};
    xg.univariate_in = var;
    xg.degree_in_variable[var] = 1;
    xg.nonzero_at_origin = false;
    xg.constant = ConstVal::zero();
    xg.is_variable_gen = true;
    xg.reciprocal_image = var;
    inst->generators.push_back(xg);

    auto it = spec.factors.find(var);
    if (it == spec.factors.end()) continue;
    const auto& facs = it->second;
    if (facs.size() % 2 != 0)
      throw Precondition("variable '" + var + "': factor product has odd degree " +
                         std::to_string(facs.size()));
    std::vector<ConstVal> used;
    for (const auto& f : facs) {
      if (!valid_gen_name(f.name)) throw Precondition("bad factor name '" + f.name + "'");
      if (!seen_names.insert(f.name).second)
        throw Precondition("duplicate generator name '" + f.name + "'");
      if (f.constant.is_zero() || !f.nonzero_at_origin)
        throw Precondition("factor '" + f.name + "' vanishes at the origin");
      if (!f.constant.sym.empty() && !cnames.count(f.constant.sym))
        throw Precondition("factor '" + f.name + "' uses undeclared constant '" +
                           f.constant.sym + "'");
      for (const auto& u : used)
        if (u == f.constant)
          throw Precondition("variable '" + var + "': repeated root " + f.constant.str());
      used.push_back(f.constant);

      IrreducibleGen g;
      g.name = f.name;
      g.variable_support = {var};
      g.univariate_in = var;
      g.degree_in_variable[var] = 1;
      g.nonzero_at_origin = true;
      g.constant = f.constant;
      g.is_variable_gen = false;
      g.reciprocal_image = canonical_factor_name(var, f.constant.inverse());
      inst->generators.push_back(g);
    }
  }

  // Reduction tables: same-variable generators reduce to distinct nonzero
  // constants of k (hence squares); generators of other variables survive.
  for (auto& h : inst->generators) {
    for (const auto& g : inst->generators) {
      if (g.name == h.name) continue;
      if (*g.univariate_in == *h.univariate_in)
        h.reduction_table[g.name] = ResidueClass::nonzero_constant();
      else
        h.reduction_table[g.name] = ResidueClass::generator_class(h.name);
    }
  }

  inst->validate();
  return inst;
}

FieldInstancePtr make_legendre_instance(int n, const std::vector<std::string>& constant_names) {
  if (n <= 0) throw Precondition("instance needs at least one variable");
  std::vector<std::string> consts =
      constant_names.empty() ? default_constant_names(n) : constant_names;
  if (static_cast<int>(consts.size()) != n)
    throw Precondition("need one transcendental constant per variable");
  InstanceSpec spec;
  spec.n = n;
  spec.variables = default_variable_names(n);
  spec.constants = consts;
  for (int i = 0; i < n; ++i) {
    const std::string& var = spec.variables[i];
    ConstVal one = ConstVal::integer(1);
    ConstVal lam = ConstVal::symbol(consts[i]);
    spec.factors[var] = {
        {canonical_factor_name(var, one), one, true},
        {canonical_factor_name(var, lam), lam, true},
    };
  }
  return make_instance(spec);
}

SquareClass trivial_class(const FieldInstancePtr& inst) { return {inst, {}}; }

SquareClass class_of(const FieldInstancePtr& inst, const std::vector<std::string>& gens) {
  SquareClass a{inst, {}};
  for (const auto& g : gens) {
    inst->gen(g);  // existence check
    if (a.support.count(g))
      a.support.erase(g);
    else
      a.support.insert(g);
  }
  return a;
}

SquareClass class_mul(const SquareClass& a, const SquareClass& b) {
  if (!same_instance(a.instance, b.instance))
    throw InstanceMismatch("class_mul across distinct field instances");
  SquareClass r{a.instance, a.support};
  for (const auto& g : b.support) {
    if (r.support.count(g))
      r.support.erase(g);
    else
      r.support.insert(g);
  }
  return r;
}

int valuation_parity(const SquareClass& a, const Valuation& v) {
  switch (v.kind) {
    case Valuation::Kind::DivisorialAtGenerator:
      a.instance->gen(v.at);
      return a.support.count(v.at) ? 1 : 0;
    case Valuation::Kind::AtInfinityInVariable: {
      if (!a.instance->has_variable(v.at))
        throw Error("unknown variable '" + v.at + "'");
      int d = 0;
      for (const auto& g : a.support) d += a.instance->gen(g).degree_in(v.at);
      return d & 1;  // order of the pole at infinity is the total degree
    }
    case Valuation::Kind::AbstractCase:
      throw Precondition("parity at an abstract case valuation is case-dependent");
  }
  return 0;
}

FieldInstancePtr residue_instance(const FieldInstancePtr& inst, const std::string& gen_name) {
  const IrreducibleGen& g = inst->gen(gen_name);
  if (!g.univariate_in)
    throw Precondition("residue instance needs a univariate generator");
  const std::string var = *g.univariate_in;

  auto res = std::make_shared<FieldInstance>();
  res->n = inst->n - 1;
  for (const auto& v : inst->variables)
    if (v != var) res->variables.push_back(v);
  res->constants = inst->constants;
  res->transcendence_bound = inst->transcendence_bound - 1;
  res->label = inst->label + " mod " + gen_name;
  for (const auto& h : inst->generators) {
    if (h.univariate_in && *h.univariate_in == var) continue;
    IrreducibleGen kept = h;
    for (auto it = kept.reduction_table.begin(); it != kept.reduction_table.end();) {
      const IrreducibleGen& keygen = inst->gen(it->first);
      if (keygen.univariate_in && *keygen.univariate_in == var)
        it = kept.reduction_table.erase(it);
      else
        ++it;
    }
    res->generators.push_back(kept);
  }
  res->validate();
  return res;
}

Reduction reduce_class(const SquareClass& a, const Valuation& v) {
  if (v.kind != Valuation::Kind::DivisorialAtGenerator)
    throw Precondition("reduce_class expects a divisorial valuation (transform first for infinity)");
  if (valuation_parity(a, v) != 0)
    throw Precondition("reduce_class on a ramified class (parity 1 at " + v.str() + ")");
  FieldInstancePtr res = residue_instance(a.instance, v.at);
  Reduction out;
  out.residue_class = {res, {}};
  for (const auto& gname : a.support) {
    const IrreducibleGen& g = a.instance->gen(gname);
    auto it = g.reduction_table.find(v.at);
    if (it == g.reduction_table.end())
      throw UndeterminedReduction("reduction of '" + gname + "' at " + v.str() +
                                  " is not determined");
    out.parts.emplace_back(gname, it->second);
    if (it->second.kind == ResidueClass::Kind::GeneratorClass) {
      const std::string& img = it->second.generator;
      res->gen(img);
      auto& supp = out.residue_class.support;
      if (supp.count(img))
        supp.erase(img);
      else
        supp.insert(img);
    }
    // trivial squares and nonzero constants of the algebraically closed k
    // contribute nothing to the residue square class
  }
  return out;
}

ReciprocalResult reciprocal_transform(const FieldInstancePtr& inst, const std::string& var) {
  if (!inst->has_variable(var)) throw Error("unknown variable '" + var + "'");
  int total_degree = 0;
  std::vector<const IrreducibleGen*> facs;
  for (const auto& g : inst->generators) {
    if (g.is_variable_gen || !g.univariate_in || *g.univariate_in != var) continue;
    facs.push_back(&g);
    total_degree += g.degree_in(var);
  }
  if (total_degree % 2 != 0)
    throw Precondition("variable '" + var + "': factor product has odd degree " +
                       std::to_string(total_degree) + "; reciprocal transform would change the class");

  InstanceSpec spec;
  spec.n = inst->n;
  spec.variables = inst->variables;
  spec.constants = inst->constants;
  ReciprocalResult rr;
  for (const auto& v : inst->variables) {
    for (const auto& g : inst->generators) {
      if (!g.univariate_in || *g.univariate_in != v || g.is_variable_gen) continue;
      if (v == var) {
        ConstVal inv = g.constant.inverse();
        std::string nm = canonical_factor_name(var, inv);
        spec.factors[v].push_back({nm, inv, true});
        rr.image[g.name] = nm;
      } else {
        spec.factors[v].push_back({g.name, g.constant, true});
        rr.image[g.name] = g.name;
      }
    }
  }
  for (const auto& v : inst->variables) rr.image[v] = v;
  rr.instance = make_instance(spec);
  return rr;
}

SquareClass map_class_through_reciprocal(const SquareClass& a, const ReciprocalResult& rr,
                                         const std::string& var) {
  SquareClass out{rr.instance, {}};
  auto flip = [&out](const std::string& g) {
    if (out.support.count(g))
      out.support.erase(g);
    else
      out.support.insert(g);
  };
  for (const auto& gname : a.support) {
    const IrreducibleGen& g = a.instance->gen(gname);
    if (g.univariate_in && *g.univariate_in == var && !g.is_variable_gen) {
      // (x - c) = x * (x' - 1/c) * (-c) * x'^-2 after x = 1/x': class {x, x-1/c}
      flip(var);
      flip(rr.image.at(gname));
    } else {
      flip(rr.image.at(gname));
    }
  }
  for (const auto& gname : out.support) rr.instance->gen(gname);
  return out;
}

json instance_to_json(const FieldInstance& inst) {
  json j;
  j["n"] = inst.n;
  j["variables"] = inst.variables;
  j["constants"] = inst.constants;
  json facs = json::object();
  for (const auto& var : inst.variables) {
    json arr = json::array();
    for (const auto& g : inst.generators) {
      if (g.is_variable_gen || !g.univariate_in || *g.univariate_in != var) continue;
      json f;
      f["name"] = g.name;
      f["constant"] = g.constant.str();
      f["nonzero_at_origin"] = g.nonzero_at_origin;
      arr.push_back(f);
    }
    facs[var] = arr;
  }
  j["factors"] = facs;
  return j;
}

static Error field_error(const std::string& path, const std::string& what) {
  return Error("instance config: field '" + path + "': " + what);
}

FieldInstancePtr instance_from_json(const json& j) {
  if (!j.is_object()) throw Error("instance config: top level must be an object");
  InstanceSpec spec;
  if (!j.contains("n") || !j["n"].is_number_integer())
    throw field_error("n", "must be an integer");
  spec.n = j["n"].get<int>();
  if (!j.contains("variables") || !j["variables"].is_array())
    throw field_error("variables", "must be an array of names");
  for (const auto& v : j["variables"]) {
    if (!v.is_string()) throw field_error("variables", "entries must be strings");
    spec.variables.push_back(v.get<std::string>());
  }
  if (j.contains("constants")) {
    if (!j["constants"].is_array()) throw field_error("constants", "must be an array of names");
    for (const auto& c : j["constants"]) {
      if (!c.is_string()) throw field_error("constants", "entries must be strings");
      spec.constants.push_back(c.get<std::string>());
    }
  }
  if (j.contains("factors")) {
    if (!j["factors"].is_object()) throw field_error("factors", "must map variables to factor lists");
    for (const auto& [var, arr] : j["factors"].items()) {
      if (!arr.is_array()) throw field_error("factors." + var, "must be an array");
      int idx = 0;
      for (const auto& f : arr) {
        std::string path = "factors." + var + "[" + std::to_string(idx) + "]";
        if (!f.is_object()) throw field_error(path, "must be an object");
        FactorSpec fs;
        if (!f.contains("name") || !f["name"].is_string())
          throw field_error(path + ".name", "must be a string");
        fs.name = f["name"].get<std::string>();
        if (!f.contains("constant") || !f["constant"].is_string())
          throw field_error(path + ".constant", "must be a string");
        try {
          fs.constant = ConstVal::parse(f["constant"].get<std::string>());
        } catch (const Error& e) {
          throw field_error(path + ".constant", e.what());
        }
        if (f.contains("nonzero_at_origin")) {
          if (!f["nonzero_at_origin"].is_boolean())
            throw field_error(path + ".nonzero_at_origin", "must be a boolean");
          fs.nonzero_at_origin = f["nonzero_at_origin"].get<bool>();
        }
        spec.factors[var].push_back(fs);
        ++idx;
      }
    }
  }
  return make_instance(spec);
}

FieldInstancePtr instance_from_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    size_t line = 1, col = 1;
    for (size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error("instance config: parse error at line " + std::to_string(line) + ", column " +
                std::to_string(col) + ": " + e.what());
  }
  return instance_from_json(j);
}

FieldInstancePtr load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open instance file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return instance_from_text(os.str());
}

json class_to_json(const SquareClass& a) {
  json j = json::array();
  for (const auto& g : a.support) j.push_back(g);
  return j;
}

SquareClass class_from_json(const FieldInstancePtr& inst, const json& j) {
  if (!j.is_array()) throw Error("square class must be an array of generator names");
  std::vector<std::string> gens;
  for (const auto& g : j) gens.push_back(g.get<std::string>());
  return class_of(inst, gens);
}

}  // namespace qfcert
