#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qfcert/cli.hpp"
#include "qfcert/counterexample.hpp"

using namespace qfcert;

namespace {
struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream o, e;
  CliResult r;
  r.code = run_cli(args, o, e);
  r.out = o.str();
  r.err = e.str();
  return r;
}

std::string tmpfile(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("qfcert_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(f.good());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void spill(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  REQUIRE(f.good());
  f << content;
}
}  // namespace

TEST_CASE("build prints the instance") {
  CliResult r = run({"build", "--n", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("coordinates: x") != std::string::npos);
  CHECK(r.out.find("factors in x: x-1 x-lambda") != std::string::npos);

  CliResult s = run({"build", "--n", "2", "--format", "structured"});
  CHECK(s.code == 0);
  auto j = nlohmann::json::parse(s.out);
  auto inst = instance_from_json(j);
  auto expect = make_legendre_instance(2, default_constant_names(2));
  CHECK(same_instance(inst, expect));
}

TEST_CASE("built instance files feed the other subcommands") {
  const std::string path = tmpfile("instance.json");
  CliResult w = run({"build", "--n", "2", "--format", "structured", "--out", path});
  CHECK(w.code == 0);
  CHECK(w.out.empty());  // everything went to the file

  CliResult c = run({"certify", "--instance", path});
  CHECK(c.code == 0);
  CHECK(c.out.find("status: complete") != std::string::npos);
  CHECK(c.out.find("replay: ok") != std::string::npos);
}

TEST_CASE("certify emits a replayable certificate") {
  CliResult one = run({"certify", "--n", "1"});
  CHECK(one.code == 0);

  const std::string path = tmpfile("cert.json");
  CliResult w = run({"certify", "--n", "2", "--format", "structured", "--out", path});
  CHECK(w.code == 0);
  Certificate cert = Certificate::deserialize(slurp(path));
  CHECK(check_certificate(cert).ok);

  CliResult rep = run({"replay", path});
  CHECK(rep.code == 0);
  CHECK(rep.out.find("replay: ok") != std::string::npos);

  // tampering is caught and the offending step is named
  auto j = nlohmann::json::parse(slurp(path));
  for (auto& s : j.at("steps"))
    if (s.at("id") == "case1") s["outputs"]["assignments_covered"] = 1;
  const std::string bad = tmpfile("cert_bad.json");
  spill(bad, j.dump(2));
  CliResult caught = run({"replay", bad});
  CHECK(caught.code == 1);
  CHECK(caught.out.find("FAILED") != std::string::npos);
  CHECK(caught.out.find("case1") != std::string::npos);

  CliResult structured = run({"replay", bad, "--format", "structured"});
  CHECK(structured.code == 1);
  auto rj = nlohmann::json::parse(structured.out);
  CHECK(rj.at("ok") == false);
  CHECK(!rj.at("issues").empty());
}

TEST_CASE("residue answers through the exit code") {
  CliResult nonzero = run({"residue", "x;y", "div:x"});
  CHECK(nonzero.code == 1);
  CHECK(nonzero.out.find("(nonzero)") != std::string::npos);

  CliResult zero = run({"residue", "x-1;y", "div:x"});
  CHECK(zero.code == 0);
  CHECK(zero.out.find("(zero)") != std::string::npos);

  CliResult multi = run({"residue", "x,x-1;y", "div:x", "--format", "structured"});
  CHECK(multi.code == 1);  // the slot product has odd valuation at x
  auto j = nlohmann::json::parse(multi.out);
  CHECK(j.at("valuation") == "div:x");
  CHECK(j.at("is_zero") == false);

  CHECK(run({"residue", "q;y", "div:x"}).code == 2);
  CHECK(run({"residue", "x;y", "div:q"}).code == 2);
  CHECK(run({"residue", "x;y", "inf:q"}).code == 2);
  CHECK(run({"residue", "x;;y", "div:x"}).code == 2);
  CHECK(run({"residue", "x;y", "deg:x"}).code == 2);
}

TEST_CASE("isotropy decides a monomial form over a described model") {
  nlohmann::json model = {{"kind", "tower"},
                          {"uniformizer", "t"},
                          {"residue", {{"kind", "finite-field"}, {"q", 3}}}};
  nlohmann::json iso = {
      {"model", model},
      {"entries", nlohmann::json::array({{{"odd_vars", nlohmann::json::array()}, {"unit", 1}},
                                         {{"odd_vars", nlohmann::json::array()}, {"unit", 2}}})}};
  const std::string iso_path = tmpfile("iso.json");
  spill(iso_path, iso.dump());
  CliResult yes = run({"isotropy", "--instance", iso_path});
  CHECK(yes.code == 0);
  CHECK(yes.out.find("model: F_3((t))") != std::string::npos);
  CHECK(yes.out.find("verdict: isotropic") != std::string::npos);

  nlohmann::json aniso = iso;
  aniso["entries"][1]["unit"] = 1;
  aniso["entries"][1]["odd_vars"] = {"t"};
  const std::string aniso_path = tmpfile("aniso.json");
  spill(aniso_path, aniso.dump());
  CliResult no = run({"isotropy", "--instance", aniso_path, "--format", "structured"});
  CHECK(no.code == 1);
  auto j = nlohmann::json::parse(no.out);
  CHECK(j.at("verdict") == "anisotropic");
  CHECK(j.at("trace").at("kind") == "springer-split");

  CHECK(run({"isotropy"}).code == 2);  // --instance is required here
  const std::string garbled = tmpfile("garbled.json");
  spill(garbled, "not json");
  CHECK(run({"isotropy", "--instance", garbled}).code == 2);
}

TEST_CASE("oracle shards by residue characteristic") {
  CliResult text = run({"oracle", "--seed", "1"});
  CHECK(text.code == 0);
  CHECK(text.out.find("residue characteristics 3,") != std::string::npos);
  CHECK(text.out.find("agreement") != std::string::npos);
  CHECK(text.out.find("MISMATCH") == std::string::npos);

  CliResult structured = run({"oracle", "--seed", "2", "--format", "structured"});
  CHECK(structured.code == 0);
  auto j = nlohmann::json::parse(structured.out);
  CHECK(j.at("ok") == true);
  CHECK(j.at("qs") == nlohmann::json::array({5}));
  CHECK(j.at("mismatches") == 0);
  CHECK(j.at("total").get<int>() > 0);

  CHECK(run({"oracle", "--seed", "4"}).code == 2);
}

TEST_CASE("report runs the verification pipeline") {
  CliResult text = run({"report", "--n", "2"});
  CHECK(text.code == 0);
  CHECK(text.out.find("status: verified") != std::string::npos);
  CHECK(text.out.find("(e) axioms") != std::string::npos);

  const std::string path = tmpfile("report.json");
  CliResult structured =
      run({"report", "--n", "3", "--format", "structured", "--out", path});
  CHECK(structured.code == 0);
  auto j = nlohmann::json::parse(slurp(path));
  CHECK(j.at("kind") == "counterexample-report");
  CHECK(j.at("status") == "verified");
  CHECK(j.at("dimension") == 8);

  CliResult replayed = run({"replay", path});
  CHECK(replayed.code == 0);
  CHECK(replayed.out.find("replay: ok") != std::string::npos);

  // a doctored report no longer matches its recomputation
  j["axioms"].push_back("extra");
  const std::string doctored = tmpfile("report_bad.json");
  spill(doctored, j.dump());
  CliResult caught = run({"replay", doctored});
  CHECK(caught.code == 1);
  CHECK(caught.out.find("recomputation differs") != std::string::npos);
}

TEST_CASE("replay dispatches on the file's kind") {
  const std::string unknown = tmpfile("unknown.json");
  spill(unknown, R"({"kind":"mystery"})");
  CliResult r = run({"replay", unknown});
  CHECK(r.code == 2);
  CHECK(r.err.find("unrecognized kind") != std::string::npos);

  CHECK(run({"replay", tmpfile("does_not_exist.json")}).code == 2);
  CHECK(run({"replay"}).code == 2);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"certify", "--n", "17"}).code == 2);
  CHECK(run({"certify", "--n", "0"}).code == 2);
  CHECK(run({"build", "--format", "yaml"}).code == 2);
  CHECK(run({"build", "--n", "1", "--out", "/nonexistent-dir/x.json"}).code == 2);

  CliResult help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("build") != std::string::npos);
}
