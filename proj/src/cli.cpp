#include "qfcert/cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qfcert/counterexample.hpp"
#include "qfcert/errors.hpp"

namespace qfcert {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cli: cannot open " + path);
  json j;
  f >> j;
  return j;
}

std::string instance_text(const FieldInstance& inst) {
  std::ostringstream os;
  os << "instance " << inst.label << "\n";
  os << "coordinates:";
  for (const auto& v : inst.variables) os << " " << v;
  os << "\nconstants:";
  for (const auto& c : inst.constants) os << " " << c;
  os << "\n";
  for (const auto& v : inst.variables) {
    os << "factors in " << v << ":";
    for (const auto& name : inst.factor_names_of(v)) os << " " << name;
    os << "\n";
  }
  os << "transcendence bound: " << inst.transcendence_bound << "\n";
  return os.str();
}

std::string replay_text(const ReplayReport& rep) {
  std::ostringstream os;
  os << "replay: " << (rep.ok ? "ok" : "FAILED") << "\n";
  for (const auto& i : rep.issues)
    os << "  [" << (i.step_id.empty() ? "certificate" : i.step_id) << "] " << i.message << "\n";
  return os.str();
}

json replay_json(const ReplayReport& rep) {
  json j;
  j["ok"] = rep.ok;
  json issues = json::array();
  for (const auto& i : rep.issues) issues.push_back({{"step", i.step_id}, {"message", i.message}});
  j["issues"] = issues;
  return j;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"certified construction of locally isotropic, anisotropic quadratic forms"};
  app.name("qfcert");
  app.require_subcommand(1);

  int n = 2;
  std::string instance_path;
  std::string out_path;
  std::string format = "text";
  long long seed = 0;
  std::string symbol_text, valuation_text, replay_path;

  auto add_common = [&](CLI::App* sub, bool with_n, bool with_instance) {
    if (with_n) sub->add_option("--n", n, "number of coordinates")->check(CLI::Range(1, 16));
    if (with_instance) sub->add_option("--instance", instance_path, "instance or input file");
    sub->add_option("--out", out_path, "write the output to this file instead of stdout");
    sub->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "structured"}));
  };

  CLI::App* cmd_build = app.add_subcommand("build", "write an instance file");
  add_common(cmd_build, true, true);
  CLI::App* cmd_certify =
      app.add_subcommand("certify", "build and replay the unramifiedness certificate");
  add_common(cmd_certify, true, true);
  CLI::App* cmd_residue = app.add_subcommand("residue", "one symbol, one valuation");
  cmd_residue
      ->add_option("symbol", symbol_text,
                   "symbol slots separated by ';', each a ','-list of generators (e.g. \"x;y\")")
      ->required();
  cmd_residue->add_option("valuation", valuation_text, "div:<generator> or inf:<coordinate>")
      ->required();
  add_common(cmd_residue, true, true);
  CLI::App* cmd_isotropy =
      app.add_subcommand("isotropy", "decide isotropy of a monomial form over a complete model");
  add_common(cmd_isotropy, false, true);
  cmd_isotropy->get_option("--instance")->required();
  CLI::App* cmd_oracle =
      app.add_subcommand("oracle", "finite-field brute-force agreement sweep");
  add_common(cmd_oracle, false, false);
  cmd_oracle->add_option("--seed", seed,
                         "shard selector: 0 runs the whole sweep, 1..3 run one residue "
                         "characteristic (3, 5, 7)")
      ->check(CLI::Range(0, 3));
  CLI::App* cmd_report =
      app.add_subcommand("report", "run the full verification pipeline and emit the report");
  add_common(cmd_report, true, true);
  CLI::App* cmd_replay = app.add_subcommand("replay", "check a serialized certificate or report");
  cmd_replay->add_option("file", replay_path, "certificate or report file")->required();
  add_common(cmd_replay, false, false);

  std::vector<const char*> argv;
  argv.push_back("qfcert");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  auto emit = [&](std::string payload) {
    if (payload.empty() || payload.back() != '\n') payload += '\n';
    if (out_path.empty()) {
      out << payload;
    } else {
      std::ofstream f(out_path);
      if (!f) throw Error("cli: cannot write " + out_path);
      f << payload;
    }
  };
  auto structured = [&] { return format == "structured"; };
  auto resolve_instance = [&]() -> FieldInstancePtr {
    if (!instance_path.empty()) return load_instance_file(instance_path);
    return make_legendre_instance(n, default_constant_names(n));
  };

  try {
    if (cmd_build->parsed()) {
      FieldInstancePtr inst = resolve_instance();
      emit(structured() ? instance_to_json(*inst).dump(2) : instance_text(*inst));
      return 0;
    }

    if (cmd_certify->parsed()) {
      FieldInstancePtr inst = resolve_instance();
      Certificate cert = main_unram(inst);
      ReplayReport rep = check_certificate(cert);
      if (structured()) {
        emit(cert.serialize());
      } else {
        std::ostringstream os;
        os << "goal: " << cert.goal << "\n";
        os << "status: " << cert.status << " (" << cert.steps.size() << " top-level steps)\n";
        os << replay_text(rep);
        emit(os.str());
      }
      return cert.is_complete() && rep.ok ? 0 : 1;
    }

    if (cmd_residue->parsed()) {
      FieldInstancePtr inst = resolve_instance();
      std::vector<SquareClass> slots;
      for (const auto& slot : split(symbol_text, ';')) {
        std::vector<std::string> gens;
        for (const auto& g : split(slot, ',')) {
          if (g.empty()) continue;
          if (!inst->find_gen(g)) throw Error("residue: unknown generator '" + g + "'");
          gens.push_back(g);
        }
        if (gens.empty()) throw Error("residue: empty symbol slot");
        slots.push_back(class_of(inst, gens));
      }
      SymbolSum s = symbol(slots);
      Valuation v = Valuation::parse(valuation_text);
      if (v.kind == Valuation::Kind::DivisorialAtGenerator && !inst->find_gen(v.at))
        throw Error("residue: unknown generator '" + v.at + "'");
      if (v.kind == Valuation::Kind::AtInfinityInVariable && !inst->has_variable(v.at))
        throw Error("residue: unknown coordinate '" + v.at + "'");
      SymbolSum r = residue(s, v);
      if (structured()) {
        json j;
        j["symbol"] = s.to_json();
        j["valuation"] = v.str();
        j["residue"] = r.to_json();
        j["is_zero"] = r.is_zero();
        emit(j.dump(2));
      } else {
        std::ostringstream os;
        os << "symbol: " << s.presentation_str() << "\n";
        os << "valuation: " << v.str() << "\n";
        os << "residue: " << r.str() << (r.is_zero() ? " (zero)" : " (nonzero)") << "\n";
        emit(os.str());
      }
      return r.is_zero() ? 0 : 1;
    }

    if (cmd_isotropy->parsed()) {
      json j = read_json_file(instance_path);
      CompleteFieldModel model = CompleteFieldModel::from_json(j.at("model"));
      MonomialForm form = MonomialForm::from_json(j);
      IsotropyDecision dec = is_isotropic_complete(form, model);
      if (structured()) {
        json o;
        o["model"] = model.to_json();
        o["form"] = form.to_json();
        o["verdict"] = to_string(dec.verdict);
        o["trace"] = dec.trace.to_json();
        emit(o.dump(2));
      } else {
        std::ostringstream os;
        os << "model: " << model.str() << "\n";
        os << "form: " << form.str() << "\n";
        os << "verdict: " << to_string(dec.verdict) << "\n";
        emit(os.str());
      }
      return dec.verdict == Verdict::Isotropic ? 0 : 1;
    }

    if (cmd_oracle->parsed()) {
      std::vector<long long> qs{3, 5, 7};
      if (seed != 0) qs = {qs[static_cast<std::size_t>(seed - 1)]};
      AgreementReport rep = oracle_agreement_sweep(qs, 4, 2, /*full_unit_alphabet=*/true);
      if (structured()) {
        json o;
        o["qs"] = qs;
        o["max_dim"] = 4;
        o["degree_bound"] = 2;
        o["total"] = rep.total;
        o["isotropic"] = rep.isotropic;
        o["anisotropic"] = rep.anisotropic;
        o["mismatches"] = rep.mismatches;
        o["unverified_witnesses"] = rep.unverified_witnesses;
        o["failures"] = rep.failures;
        o["ok"] = rep.ok();
        emit(o.dump(2));
      } else {
        std::ostringstream os;
        os << "sweep: residue characteristics";
        for (long long q : qs) os << " " << q;
        os << ", dimensions 1..4, exponents {0,1}, full unit alphabet, degree bound 2\n";
        os << rep.summary() << "\n";
        for (const auto& fmsg : rep.failures) os << "  " << fmsg << "\n";
        emit(os.str());
      }
      return rep.ok() ? 0 : 1;
    }

    if (cmd_report->parsed()) {
      FieldInstancePtr inst = resolve_instance();
      DiagonalForm q = pfister_with_disc(inst, xi_presentation(inst), extension_class(inst));
      CounterexampleReport rep = verify_theorem(inst, q);
      emit(structured() ? rep.to_json().dump(2) : rep.text());
      return rep.verified() ? 0 : 1;
    }

    if (cmd_replay->parsed()) {
      json j = read_json_file(replay_path);
      const std::string kind = j.value("kind", std::string{});
      if (kind == "unramifiedness-certificate") {
        Certificate cert = Certificate::from_json(j);
        ReplayReport rep = check_certificate(cert);
        emit(structured() ? replay_json(rep).dump(2) : replay_text(rep));
        return rep.ok ? 0 : 1;
      }
      if (kind == "anisotropy-certificate") {
        FieldInstancePtr inst = instance_from_json(j.at("instance"));
        Certificate fresh = certify_pfister_anisotropic_via_laurent(inst, xi_presentation(inst));
        auto diff = json_diff_path(j, fresh.to_json());
        bool ok = !diff && fresh.is_complete();
        ReplayReport rep;
        rep.ok = ok;
        if (diff) rep.issues.push_back({"", "recomputation differs at " + *diff});
        if (!fresh.is_complete())
          rep.issues.push_back({"", "the recomputed certificate is not complete"});
        emit(structured() ? replay_json(rep).dump(2) : replay_text(rep));
        return ok ? 0 : 1;
      }
      if (kind == "counterexample-report") {
        FieldInstancePtr inst = instance_from_json(j.at("instance"));
        DiagonalForm q = DiagonalForm::from_json(j.at("form"), inst);
        CounterexampleReport fresh = verify_theorem(inst, q);
        auto diff = json_diff_path(j, fresh.to_json());
        bool ok = !diff && fresh.verified();
        ReplayReport rep;
        rep.ok = ok;
        if (diff) rep.issues.push_back({"", "recomputation differs at " + *diff});
        if (!fresh.verified())
          rep.issues.push_back({"", "recomputed status: " + fresh.failing_stage});
        emit(structured() ? replay_json(rep).dump(2) : replay_text(rep));
        return ok ? 0 : 1;
      }
      if (kind == "construction-certificate") {
        FieldInstancePtr inst = instance_from_json(j.at("instance"));
        const CertStep* hyp = nullptr;
        Certificate cert = Certificate::from_json(j);
        hyp = cert.find("hypothesis");
        if (!hyp) throw Error("replay: construction certificate has no hypothesis step");
        std::vector<SquareClass> classes;
        for (const auto& e : hyp->inputs.value("classes", json::array()))
          classes.push_back(class_from_json(inst, e));
        const bool quad = hyp->inputs.value("branch", std::string{}) == "quadratic-extension";
        std::optional<SquareClass> disc;
        if (quad) disc = class_from_json(inst, j.at("extension_class"));
        ConstructionResult fresh = construct_from_unramified_class(
            quad ? ConstructionKind::QuadraticExtension : ConstructionKind::Direct,
            static_cast<int>(classes.size()), classes, disc);
        auto diff = json_diff_path(j, fresh.cert.to_json());
        ReplayReport rep;
        rep.ok = !diff;
        if (diff) rep.issues.push_back({"", "recomputation differs at " + *diff});
        emit(structured() ? replay_json(rep).dump(2) : replay_text(rep));
        return rep.ok ? 0 : 1;
      }
      throw Error("replay: unrecognized kind '" + kind + "'");
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "error: no subcommand\n";
  return 2;
}

}  // namespace qfcert
