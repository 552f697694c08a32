#include "support.hpp"

#include <map>

using namespace pmc;
using namespace pmc::test;

namespace {

Rat eu_of(const Prescription& p, const std::string& action) {
  for (const auto& row : p.table)
    if (row.action == action) return row.expected_utility.value();
  FAIL("no row for " << action);
  return Rat();
}

// Generic enumeration over environment outcome, action and result, using the
// kernels' entries only.
std::map<std::string, std::optional<Rat>> enumerate(const DecisionProblem& p) {
  const Obj env = p.environment.cod();
  const std::size_t nobs = p.observed().arity();
  const std::size_t nctx = env.arity() - nobs;
  std::map<std::string, Rat> num, den;
  for (std::size_t e = 0; e < env.size(); ++e) {
    const Tuple w = env.labels_of(e);
    const Tuple ctx(w.begin(), w.begin() + static_cast<long>(nctx));
    const Tuple obs(w.begin() + static_cast<long>(nctx), w.end());
    for (const auto& a : p.actions.labels()) {
      Tuple in = ctx;
      in.push_back(a);
      for (const auto& u : p.outcomes().labels()) {
        const Rat weight = p.environment.at({}, w) * p.agent.at(obs, {a}) * p.consequence.at(in, {u});
        num[a] += weight * p.utilities.at(u);
        den[a] += weight;
      }
    }
  }
  std::map<std::string, std::optional<Rat>> out;
  for (const auto& a : p.actions.labels())
    out[a] = den[a].is_zero() ? std::nullopt : std::optional<Rat>(num[a] / den[a]);
  return out;
}

void check_against_enumeration(const DecisionProblem& p) {
  const Prescription s = solve(p);
  const auto oracle = enumerate(p);
  for (const auto& row : s.table) {
    INFO(p.name << " " << row.action);
    CHECK(row.expected_utility == oracle.at(row.action));
  }
}

}  // namespace

TEST_CASE("newcomb prescribes one-box", "[edt]") {
  // Four cases: prediction × action, kept only when the prediction is right.
  std::map<std::pair<std::string, std::string>, Rat> payoff = {{{"one-box", "one-box"}, Rat(1000)},
                                                                {{"one-box", "two-box"}, Rat(1001)},
                                                                {{"two-box", "one-box"}, Rat(0)},
                                                                {{"two-box", "two-box"}, Rat(1)}};
  std::map<std::string, Rat> num, den;
  for (const auto& [key, u] : payoff)
    if (key.first == key.second) {
      num[key.second] += Rat(1, 4) * u;
      den[key.second] += Rat(1, 4);
    }

  const Prescription s = solve(corpus::newcomb());
  CHECK(s.chosen == "one-box");
  CHECK(s.prescribed == std::vector<std::string>{"one-box"});
  CHECK(eu_of(s, "one-box") == num["one-box"] / den["one-box"]);
  CHECK(eu_of(s, "two-box") == num["two-box"] / den["two-box"]);
  CHECK(eu_of(s, "one-box") == Rat(1000));
  CHECK(eu_of(s, "two-box") == Rat(1));

  const auto u = corpus::newcomb().utilities;
  CHECK(u.at("e1000") == Rat(1000));
  CHECK(u.at("e0") == Rat(0));
  CHECK(u.at("e1001") == Rat(1001));
  CHECK(u.at("e1") == Rat(1));
}

TEST_CASE("newcomb action state", "[edt]") {
  SubKernel st = action_state(corpus::newcomb(), "one-box");
  CHECK(st.mass(0) == Rat(1, 4));
  CHECK(normalise(st).at({}, {"e1000"}) == Rat(1));
  CHECK(code_of([] { action_state(corpus::newcomb(), "three-box"); }) == ErrorCode::UnknownAction);
}

TEST_CASE("noisy newcomb still one-boxes for a reliable predictor", "[edt]") {
  const Prescription s = solve(corpus::newcomb(Rat(1, 10)));
  // one-box: (1000 + 0·1/10) / (1 + 1/10); two-box: (1 + 1001/10) / (1 + 1/10)
  CHECK(eu_of(s, "one-box") == Rat(10000, 11));
  CHECK(eu_of(s, "two-box") == Rat(1011, 11));
  CHECK(s.chosen == "one-box");
  check_against_enumeration(corpus::newcomb(Rat(1, 10)));
  CHECK(code_of([] { corpus::newcomb(Rat(3, 2)); }) == ErrorCode::BadParameter);
}

TEST_CASE("transparent newcomb", "[edt]") {
  const Prescription s = solve(corpus::transparent_newcomb());
  CHECK(s.chosen == "one-box");
  CHECK(eu_of(s, "one-box") == Rat(1000));
  check_against_enumeration(corpus::transparent_newcomb());
}

TEST_CASE("monty hall prescribes switching", "[edt]") {
  // Full enumeration: prize, first pick, host's door among the allowed ones.
  const std::vector<int> doors = {0, 1, 2};
  Rat stay, change;
  for (int prize : doors)
    for (int pick : doors) {
      std::vector<int> allowed;
      for (int o : doors)
        if (o != prize && o != pick) allowed.push_back(o);
      for (int open : allowed) {
        const Rat w = Rat(1, 9) / Rat(static_cast<long>(allowed.size()));
        const int other = 3 - pick - open;
        if (pick == prize) stay += w * Rat(1000);
        if (other == prize) change += w * Rat(1000);
      }
    }

  const Prescription s = solve(corpus::monty_hall());
  CHECK(eu_of(s, "stay") == stay);
  CHECK(eu_of(s, "switch") == change);
  CHECK(eu_of(s, "stay") == Rat(1000, 3));
  CHECK(eu_of(s, "switch") == Rat(2000, 3));
  CHECK(s.chosen == "switch");
  check_against_enumeration(corpus::monty_hall());
}

TEST_CASE("death in damascus", "[edt]") {
  const Prescription s = solve(corpus::death_in_damascus());
  CHECK(eu_of(s, "stay") == Rat(0));
  CHECK(eu_of(s, "flee") == Rat(-1));
  CHECK(s.chosen == "stay");
  check_against_enumeration(corpus::death_in_damascus());

  const Prescription printed = solve(corpus::death_in_damascus(corpus::DamascusPayoffs::Printed));
  CHECK(eu_of(printed, "stay") == Rat(-1));
  CHECK(eu_of(printed, "flee") == Rat(0));
  CHECK(printed.chosen == "flee");
}

TEST_CASE("death in damascus with coins", "[edt]") {
  // Fair coins: the four fates are equally likely.
  const Rat expect = (Rat(-1) + Rat(999) + Rat(1000) + Rat(0)) / Rat(4);
  const Prescription s = solve(corpus::death_in_damascus_coin(Rat(1, 2), Rat(1, 2)));
  CHECK(eu_of(s, "use-coin") == expect);
  CHECK(expect == Rat(999, 2));
  CHECK(eu_of(s, "stay") == Rat(0));
  CHECK(eu_of(s, "flee") == Rat(-1));
  CHECK(s.chosen == "use-coin");
  for (auto [m, d] : {std::pair{Rat(1, 3), Rat(1, 2)}, std::pair{Rat(9, 10), Rat(1, 10)}, std::pair{Rat(0), Rat(1)}})
    check_against_enumeration(corpus::death_in_damascus_coin(m, d));
}

TEST_CASE("smoking lesion", "[edt]") {
  // gene (= cancer) -> desire -> smoke
  auto oracle = [](Rat g, Rat dg, Rat dn, Rat sd, Rat sn) {
    std::map<std::string, Rat> num, den;
    for (bool gene : {true, false})
      for (bool desire : {true, false})
        for (bool smoke : {true, false}) {
          Rat w = (gene ? g : Rat(1) - g);
          const Rat pd = gene ? dg : dn;
          w *= desire ? pd : Rat(1) - pd;
          const Rat ps = desire ? sd : sn;
          w *= smoke ? ps : Rat(1) - ps;
          const Rat u = Rat(gene ? -1000 : 0) + Rat(smoke ? 1 : 0);
          num[smoke ? "smoke" : "abstain"] += w * u;
          den[smoke ? "smoke" : "abstain"] += w;
        }
    return std::pair{num["smoke"] / den["smoke"], num["abstain"] / den["abstain"]};
  };

  const Prescription s = solve(corpus::smoking_lesion());
  auto [smoke, abstain] = oracle(Rat(1, 2), Rat(9, 10), Rat(1, 10), Rat(9, 10), Rat(1, 10));
  CHECK(eu_of(s, "smoke") == smoke);
  CHECK(eu_of(s, "abstain") == abstain);
  CHECK(s.chosen == "abstain");

  // Smoking independent of desire: the action carries no evidence about the gene.
  const Prescription ind = solve(corpus::smoking_lesion(Rat(1, 2), Rat(9, 10), Rat(1, 10), Rat(1, 2), Rat(1, 2)));
  auto [smoke2, abstain2] = oracle(Rat(1, 2), Rat(9, 10), Rat(1, 10), Rat(1, 2), Rat(1, 2));
  CHECK(eu_of(ind, "smoke") == smoke2);
  CHECK(eu_of(ind, "abstain") == abstain2);
  CHECK(eu_of(ind, "smoke") - eu_of(ind, "abstain") == Rat(1));
  CHECK(ind.chosen == "smoke");
}

TEST_CASE("action states condition the joint on the action", "[edt]") {
  for (const auto& name : corpus::names()) {
    const DecisionProblem p = corpus::by_name(name);
    INFO(name);
    const SubKernel joint = evaluate(exposed_action_term(p));  // I -> U ⊗ A
    const SubKernel au = compose(joint, swap(p.consequence.cod(), p.action_obj()));
    const SubKernel given = conditional(au, 1);  // A -> U
    const SubKernel m = marginal(au, 1);
    Rat total;
    for (const auto& a : p.actions.labels()) {
      const SubKernel st = action_state(p, a);
      total += st.mass(0);
      CHECK(st.mass(0) == m.at({}, {a}));
      if (st.mass(0).is_zero()) continue;
      const SubKernel row = compose(dirac(p.action_obj(), {a}), given);
      CHECK(normalise(st) == row);
    }
    CHECK(total == joint.mass(0));
  }
}

TEST_CASE("prescriptions are invariant under positive affine utility maps", "[edt]") {
  for (const auto& name : corpus::names()) {
    DecisionProblem p = corpus::by_name(name);
    const Prescription before = solve(p);
    for (auto& [k, u] : p.utilities) u = Rat(3) * u + Rat(-7, 2);
    const Prescription after = solve(p);
    INFO(name);
    CHECK(before.prescribed == after.prescribed);
    for (std::size_t i = 0; i < before.table.size(); ++i)
      CHECK(*after.table[i].expected_utility == Rat(3) * *before.table[i].expected_utility + Rat(-7, 2));
  }
}

TEST_CASE("ties prescribe every maximiser", "[edt]") {
  DecisionProblem p = corpus::newcomb();
  for (auto& [k, u] : p.utilities) u = Rat(5);
  const Prescription s = solve(p);
  CHECK(s.prescribed == std::vector<std::string>{"one-box", "two-box"});
  CHECK(s.chosen == "one-box");
}

TEST_CASE("undefined and invalid problems", "[edt]") {
  CHECK(code_of([] { expected_utility(all_fail(I(), B()), {{"t", Rat(1)}, {"f", Rat(0)}}); }) ==
        ErrorCode::UndefinedUtility);

  DecisionProblem never = corpus::newcomb();
  never.consequence = all_fail(never.consequence.dom(), never.consequence.cod());
  CHECK(code_of([&] { solve(never); }) == ErrorCode::NoFeasibleAction);

  DecisionProblem missing = corpus::newcomb();
  missing.utilities.erase("e0");
  CHECK(code_of([&] { solve(missing); }) == ErrorCode::InvalidProblem);

  DecisionProblem partial_agent = corpus::newcomb();
  partial_agent.agent = make_kernel(I(), partial_agent.action_obj(), {{{}, {{{"one-box"}, Rat(1, 2)}}}});
  CHECK(code_of([&] { solve(partial_agent); }) == ErrorCode::InvalidProblem);

  CHECK(code_of([] { corpus::by_name("prisoners-dilemma"); }) == ErrorCode::UnknownProblem);
  CHECK(code_of([] { corpus::smoking_lesion(Rat(-1, 2)); }) == ErrorCode::BadParameter);
}

TEST_CASE("zero-probability actions report no utility", "[edt]") {
  DecisionProblem p = corpus::newcomb();
  p.agent = dirac(p.action_obj(), {"two-box"});
  const Prescription s = solve(p);
  CHECK(s.table[0].mass.is_zero());
  CHECK_FALSE(s.table[0].expected_utility.has_value());
  CHECK(s.chosen == "two-box");
}
