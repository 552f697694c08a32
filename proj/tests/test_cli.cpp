#include "support.hpp"

#include "pmc/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pmc;
using namespace pmc::test;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result pmc_run(std::vector<std::string> args) {
  args.insert(args.begin(), "pmc");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string tmp_file(const std::string& name, const std::string& text) {
  std::filesystem::create_directories(PMC_TEST_TMP);
  const std::string path = std::string(PMC_TEST_TMP) + "/" + name;
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

std::string kernel_file(const std::string& name, const SubKernel& k) {
  return tmp_file(name, io::dump(io::to_json(k)));
}

std::string corpus_path(const std::string& name) { return std::string(PMC_SOURCE_DIR) + "/corpus/" + name + ".json"; }

Obj X() { return Obj{Alphabet("X", {"x1", "x2"})}; }
Obj Y() { return Obj{Alphabet("Y", {"y", "n"})}; }
SubKernel prior() { return make_kernel(I(), X(), {{{}, {{{"x1"}, Rat(1, 2)}, {{"x2"}, Rat(1, 2)}}}}); }
SubKernel sure_y() { return make_kernel(X(), Y(), {{{"x1"}, {{{"y"}, Rat(1)}}}, {{"x2"}, {{{"y"}, Rat(1)}}}}); }

}  // namespace

TEST_CASE("solve newcomb", "[cli]") {
  Result r = pmc_run({"solve", corpus_path("newcomb")});
  CHECK(r.code == 0);
  CHECK(r.out == "one-box\t1/4\t1000\ntwo-box\t1/4\t1\nprescribed:\tone-box\n");

  Result j = pmc_run({"solve", corpus_path("newcomb"), "--format", "json"});
  CHECK(j.code == 0);
  CHECK(io::parse(j.out)["chosen"] == "one-box");
}

TEST_CASE("every corpus file solves", "[cli]") {
  for (const auto& name : corpus::names()) {
    INFO(name);
    Result r = pmc_run({"solve", corpus_path(name)});
    CHECK(r.code == 0);
    CHECK(r.out.find("prescribed:\t" + solve(corpus::by_name(name)).chosen + "\n") != std::string::npos);
  }
}

TEST_CASE("invalid input exits 1", "[cli]") {
  const std::string bad = tmp_file("bad.json", R"({"dom": [], "cod": [{"name": "B", "labels": ["t", "f"]}],
    "rows": [{"in": [], "out": [{"val": ["t"], "p": "3/4"}, {"val": ["f"], "p": "1/2"}]}]})");
  Result r = pmc_run({"normalise", bad});
  CHECK(r.code == 1);
  CHECK(r.err.find("error[RowMassExceedsOne]") != std::string::npos);
  CHECK(pmc_run({"normalise", "/nonexistent.json"}).code == 1);
  CHECK(pmc_run({"frobnicate"}).code == 1);
  CHECK(pmc_run({"laws", "--law", "no-such-law"}).code == 1);
}

TEST_CASE("impossible evidence exits 2", "[cli]") {
  const std::string p = kernel_file("prior.json", prior());
  const std::string c = kernel_file("sure_y.json", sure_y());
  const std::string pred = kernel_file("obs_n.json", point_predicate(Y(), {"n"}));
  const std::string ev = kernel_file("dirac_n.json", dirac(Y(), {"n"}));
  Result pearl = pmc_run({"update", "--rule", "pearl", "--prior", p, "--channel", c, "--evidence", pred});
  CHECK(pearl.code == 2);
  CHECK(pearl.err.find("error[ImpossibleEvidence]") != std::string::npos);
  Result jeff = pmc_run({"update", "--rule", "jeffrey", "--prior", p, "--channel", c, "--evidence", ev});
  CHECK(jeff.code == 2);

  const std::string ok = kernel_file("obs_y.json", point_predicate(Y(), {"y"}));
  Result fine = pmc_run({"update", "--rule", "pearl", "--prior", p, "--channel", c, "--evidence", ok});
  CHECK(fine.code == 0);
  CHECK(io::kernel_from_json(io::parse(fine.out)) == prior());
}

TEST_CASE("no feasible action exits 2", "[cli]") {
  DecisionProblem p = corpus::newcomb();
  p.consequence = all_fail(p.consequence.dom(), p.consequence.cod());
  Result r = pmc_run({"solve", tmp_file("never.json", io::dump(io::to_json(p)))});
  CHECK(r.code == 2);
  CHECK(r.err.find("error[NoFeasibleAction]") != std::string::npos);
}

TEST_CASE("kernel subcommands", "[cli]") {
  const std::string p = kernel_file("prior.json", prior());
  const std::string c = kernel_file(
      "channel.json",
      make_kernel(X(), Y(), {{{"x1"}, {{{"y"}, Rat(1)}}}, {{"x2"}, {{{"y"}, Rat(1, 2)}, {{"n"}, Rat(1, 2)}}}}));
  Result inv = pmc_run({"invert", "--channel", c, "--prior", p});
  REQUIRE(inv.code == 0);
  SubKernel k = io::kernel_from_json(io::parse(inv.out));
  CHECK(k.at({"y"}, {"x1"}) == Rat(2, 3));

  const std::string half = kernel_file("half.json", make_kernel(I(), X(), {{{}, {{{"x1"}, Rat(1, 4)}}}}));
  Result n = pmc_run({"normalise", half});
  CHECK(io::kernel_from_json(io::parse(n.out)) == dirac(X(), {"x1"}));

  const std::string joint = kernel_file("joint.json", tensor(prior(), dirac(Y(), {"n"})));
  Result m = pmc_run({"marginal", joint, "--split", "1"});
  CHECK(io::kernel_from_json(io::parse(m.out)) == prior());
  Result cd = pmc_run({"conditional", joint, "--split", "1"});
  CHECK(io::kernel_from_json(io::parse(cd.out)).at({"x2"}, {"n"}) == Rat(1));
  CHECK(pmc_run({"marginal", joint, "--split", "5"}).code == 1);
}

TEST_CASE("eval subcommand", "[cli]") {
  io::Environment env;
  env.add_kernel("coin", coin());
  const std::string e = tmp_file("env.json", io::dump(io::to_json(env)));
  const std::string d = tmp_file("diagram.json", R"({"op": "compose", "first": {"op": "gen", "name": "coin"},
    "second": {"op": "observe", "obj": ["B"], "point": ["t"]}})");
  Result r = pmc_run({"eval", d, "--env", e});
  REQUIRE(r.code == 0);
  CHECK(io::kernel_from_json(io::parse(r.out)) == scalar(Rat(1, 2)));
  Result nf = pmc_run({"eval", d, "--env", e, "--normal-form"});
  REQUIRE(nf.code == 0);
  CHECK(io::kernel_from_json(io::parse(nf.out)["h"]).at({}, {"t"}) == Rat(1, 2));

  const std::string ill = tmp_file("ill.json", R"({"op": "compose", "first": {"op": "gen", "name": "coin"},
    "second": {"op": "discard", "obj": ["B", "B"]}})");
  Result bad = pmc_run({"eval", ill, "--env", e});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("error[IllTyped]") != std::string::npos);
}

TEST_CASE("laws subcommand", "[cli]") {
  Result r = pmc_run({"laws", "--law", "category", "--law", "frobenius", "--cases", "20", "--seed", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS category: 20/20 passed (seed 3)") != std::string::npos);

  Result list = pmc_run({"laws", "--list"});
  CHECK(list.code == 0);
  CHECK(std::count(list.out.begin(), list.out.end(), '\n') == static_cast<long>(law_names().size()));

  ::setenv("PMC_SEED", "11", 1);
  Result seeded = pmc_run({"laws", "--law", "comonoid", "--cases", "5", "--format", "json"});
  ::unsetenv("PMC_SEED");
  REQUIRE(seeded.code == 0);
  CHECK(io::parse(seeded.out)[0]["seed"] == 11);
}

TEST_CASE("corpus subcommand", "[cli]") {
  Result r = pmc_run({"corpus", "newcomb"});
  CHECK(r.code == 0);
  CHECK(r.out == io::read_file(corpus_path("newcomb")));

  const std::string out = std::string(PMC_TEST_TMP) + "/lesion.json";
  std::filesystem::create_directories(PMC_TEST_TMP);
  CHECK(pmc_run({"corpus", "smoking-lesion", "--smoke-given-desire", "1/2", "--smoke-given-no-desire", "1/2", "-o",
                 out})
            .code == 0);
  Result s = pmc_run({"solve", out});
  CHECK(s.out.find("prescribed:\tsmoke\n") != std::string::npos);

  Result printed = pmc_run({"corpus", "death-in-damascus", "--printed-table", "-o", out});
  CHECK(printed.code == 0);
  CHECK(pmc_run({"solve", out}).out.find("prescribed:\tflee\n") != std::string::npos);

  CHECK(pmc_run({"corpus", "newcomb", "--noise", "2"}).code == 1);
  CHECK(pmc_run({"corpus", "newcomb", "--noise", "x"}).code == 1);
  CHECK(pmc_run({"corpus", "chess"}).code == 1);
}
