// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "pmc/pmc.hpp"

using namespace pmc;

namespace {

struct Shell {
  int code;
  std::string out;
};

Shell shell(const std::string& cmd) {
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string corpus_path(const std::string& name) { return std::string(PMC_SOURCE_DIR) + "/corpus/" + name + ".json"; }

std::string pmc_cmd(const std::string& args) { return std::string("'") + PMC_BINARY + "' " + args + " 2>&1"; }

std::map<std::string, std::optional<Rat>> eu_table(const Prescription& p) {
  std::map<std::string, std::optional<Rat>> t;
  for (const auto& row : p.table) t[row.action] = row.expected_utility;
  return t;
}

struct Gate {
  int failures = 0;
  void check(int id, const std::string& title, const std::function<std::string()>& body) {
    std::string detail;
    try {
      detail = body();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const bool ok = detail.rfind("ok", 0) == 0;
    if (!ok) ++failures;
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " (" << detail << ")\n";
  }
};

std::string ok(const std::string& msg) { return "ok; " + msg; }

}  // namespace

int main() {
  Gate gate;

  gate.check(1, "law suite, 200 cases, seed 7, under 30 s", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const Shell r = shell(pmc_cmd("laws --cases 200 --seed 7"));
    const double s = seconds_since(t0);
    std::ostringstream msg;
    msg << "exit " << r.code << ", " << s << " s";
    const bool all_pass = r.out.find("FAIL") == std::string::npos &&
                          r.out.find("all " + std::to_string(law_names().size()) + " laws passed") != std::string::npos;
    if (r.code != 0 || !all_pass || s >= 30) return msg.str() + "\n" + r.out;
    return ok(msg.str());
  });

  gate.check(2, "synthetic Bayes on 200 instances", [] {
    std::size_t zero = 0;
    for (std::uint64_t i = 0; i < 200; ++i) {
      Rng rng(mix_seed(2002, i));
      const Obj x = random_obj(rng, 2, 4, 16);
      Obj y;
      do y = random_obj(rng, 2, 4, 16);
      while (y.is_unit());
      const SubKernel prior = random_total_kernel(rng, Obj::unit(), x);
      const SubKernel c = random_kernel(rng, x, y);
      const Tuple point = random_point(rng, y);
      const SubKernel obs = point_predicate(y, point);
      const SubKernel constrained = compose_all({prior, copy(x), tensor(identity(x), compose(c, obs))});
      const SubKernel scalar = compose_all({prior, c, obs});
      const SubKernel row = compose(dirac(y, point), bayes_invert(c, prior));
      if (constrained != tensor(scalar, row)) return "instance " + std::to_string(i) + " differs";
      if (scalar.mass(0).is_zero()) ++zero;
    }
    const Report law = check_law("synthetic-bayes", 200, kDefaultLawSeed);
    if (!law.ok()) return to_text(law);
    return ok("200/200 exact, " + std::to_string(zero) + " with scalar zero");
  });

  gate.check(3, "Pearl equals Jeffrey on 100 point-evidence instances", [] {
    std::size_t impossible = 0;
    for (std::uint64_t i = 0; i < 100; ++i) {
      Rng rng(mix_seed(3003, i));
      const Obj x = random_obj(rng, 2, 4, 16);
      Obj y;
      do y = random_obj(rng, 2, 4, 16);
      while (y.is_unit());
      const SubKernel prior = random_total_kernel(rng, Obj::unit(), x);
      const SubKernel c = random_kernel(rng, x, y);
      const Tuple point = random_point(rng, y);
      std::optional<SubKernel> pearl, jeffrey;
      try {
        pearl = pearl_update(prior, c, point_predicate(y, point));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ImpossibleEvidence) throw;
      }
      try {
        jeffrey = jeffrey_update(prior, c, dirac(y, point));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ImpossibleEvidence) throw;
      }
      if (pearl.has_value() != jeffrey.has_value())
        return "instance " + std::to_string(i) + ": only one side raised ImpossibleEvidence";
      if (!pearl) {
        ++impossible;
        continue;
      }
      if (*pearl != *jeffrey) return "instance " + std::to_string(i) + " differs";
    }
    return ok("100/100 identical, " + std::to_string(impossible) + " impossible on both sides");
  });

  gate.check(4, "normal form of 100 random terms, under 10 s", [] {
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t rows = 0;
    for (std::uint64_t i = 0; i < 100; ++i) {
      Rng rng(mix_seed(4004, i));
      const Obj dom = random_obj(rng, 2, 3, 9), cod = random_obj(rng, 2, 3, 9);
      const Term t = random_term(rng, dom, cod, 1 + static_cast<int>(rng.below(5)));
      const NormalForm nf = normal_form(t);
      const SubKernel f = evaluate(t);
      if (eval_normal_form(nf) != f) return "instance " + std::to_string(i) + ": evaluation differs";
      const SubKernel n = normalise(f);
      for (std::size_t x = 0; x < f.dom().size(); ++x) {
        if (nf.success(x).is_zero()) continue;
        ++rows;
        if (nf.g.row(x) != n.row(x)) return "instance " + std::to_string(i) + ": g differs from normalise";
      }
    }
    const double s = seconds_since(t0);
    std::ostringstream msg;
    msg << "100/100 exact, " << rows << " positive rows, " << s << " s";
    if (s >= 10) return msg.str();
    return ok(msg.str());
  });

  gate.check(5, "Newcomb prescribes one-box with EU {1000, 1}", [] {
    const Shell r = shell(pmc_cmd("solve '" + corpus_path("newcomb") + "'"));
    const std::string expected = "one-box\t1/4\t1000\ntwo-box\t1/4\t1\nprescribed:\tone-box\n";
    if (r.code != 0 || r.out != expected) return "cli output: " + r.out;
    const DecisionProblem p = corpus::newcomb();
    const std::map<std::string, Rat> payoff = {
        {"e1000", Rat(1000)}, {"e0", Rat(0)}, {"e1001", Rat(1001)}, {"e1", Rat(1)}};
    if (p.utilities != payoff) return std::string("payoffs differ");
    return ok("pmc solve corpus/newcomb.json");
  });

  gate.check(6, "Monty Hall prescribes switch, EU 2000/3 vs 1000/3", [] {
    const Shell r = shell(pmc_cmd("solve '" + corpus_path("monty-hall") + "'"));
    const auto t = eu_table(solve(corpus::monty_hall()));
    if (r.code != 0 || r.out.find("prescribed:\tswitch\n") == std::string::npos) return "cli output: " + r.out;
    if (t.at("switch") != Rat(2000, 3) || t.at("stay") != Rat(1000, 3)) return std::string("EU table differs");
    return ok("switch 2000/3, stay 1000/3");
  });

  gate.check(7, "Death in Damascus: stay (0 vs -1); fair coins give 999/2", [] {
    const Prescription plain = solve(corpus::death_in_damascus());
    const auto t = eu_table(plain);
    if (plain.chosen != "stay" || t.at("stay") != Rat(0) || t.at("flee") != Rat(-1))
      return std::string("plain variant differs");
    const Prescription coin = solve(corpus::death_in_damascus_coin(Rat(1, 2), Rat(1, 2)));
    const Rat eu = *eu_table(coin).at("use-coin");
    if (eu != Rat(999, 2)) return "use-coin EU " + eu.str();
    return ok("stay 0, flee -1, use-coin 999/2 (open target 445.5 not gated)");
  });

  gate.check(8, "smoking lesion: abstain by default, smoke under independence", [] {
    const Prescription base = solve(corpus::smoking_lesion());
    const Prescription ind = solve(corpus::smoking_lesion(Rat(1, 2), Rat(9, 10), Rat(1, 10), Rat(1, 2), Rat(1, 2)));
    if (base.chosen != "abstain") return "default prescribes " + base.chosen;
    if (ind.chosen != "smoke") return "independent prescribes " + ind.chosen;
    const auto b = eu_table(base), i = eu_table(ind);
    return ok("default smoke " + b.at("smoke")->str() + " / abstain " + b.at("abstain")->str() +
              "; independent smoke " + i.at("smoke")->str() + " / abstain " + i.at("abstain")->str());
  });

  gate.check(9, "serialization round-trip of 100 kernels and the corpus", [] {
    for (std::uint64_t i = 0; i < 100; ++i) {
      Rng rng(mix_seed(9009, i));
      const Obj x = random_obj(rng, 3, 4, 16), y = random_obj(rng, 3, 4, 16);
      const std::string a = io::dump(io::to_json(random_kernel(rng, x, y)));
      if (io::dump(io::to_json(io::kernel_from_json(io::parse(a)))) != a)
        return "kernel " + std::to_string(i) + " differs";
    }
    for (const auto& name : corpus::names()) {
      const std::string a = io::read_file(corpus_path(name));
      if (io::dump(io::to_json(io::problem_from_json(io::parse(a)))) != a) return "corpus " + name + " differs";
      if (a != io::dump(io::to_json(corpus::by_name(name)))) return "corpus " + name + " is stale";
    }
    return ok("100 kernels, " + std::to_string(corpus::names().size()) + " corpus problems");
  });

  std::cout << (gate.failures == 0 ? "acceptance: all criteria passed\n"
                                   : "acceptance: " + std::to_string(gate.failures) + " criteria FAILED\n");
  return gate.failures == 0 ? 0 : 1;
}
