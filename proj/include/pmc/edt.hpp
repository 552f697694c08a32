#pragma once

// Decision problems as environment / agent / consequence kernels, and the
// evidential solver: prescribe the action whose observation yields the best
// average utility of the normalised outcome distribution.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pmc/conditioning.hpp"
#include "pmc/diagram.hpp"
#include "pmc/kernel.hpp"

namespace pmc {

/// environment: I -> C ⊗ O, agent: O -> A, consequence: C ⊗ A -> U.
/// The O factors are those of the agent's domain (trailing in the
/// environment's codomain); U is a single alphabet. Environment and agent
/// are total; the consequence may fail, which is how compatibility
/// constraints (a correct prediction, say) enter the model.
struct DecisionProblem {
  std::string name;
  Alphabet actions;
  SubKernel environment;
  SubKernel agent;
  SubKernel consequence;
  std::map<std::string, Rat> utilities;

  [[nodiscard]] Obj observed() const { return agent.dom(); }
  [[nodiscard]] Obj context() const {
    return environment.cod().prefix(environment.cod().arity() - agent.dom().arity());
  }
  [[nodiscard]] Obj action_obj() const { return Obj{actions}; }
  [[nodiscard]] const Alphabet& outcomes() const { return consequence.cod().factors().front(); }
};

inline void validate(const DecisionProblem& p) {
  auto bad = [&](const std::string& msg) {
    return Error(ErrorCode::InvalidProblem, "problem '" + p.name + "': " + msg);
  };
  if (!p.environment.dom().is_unit()) throw bad("environment must be a state");
  const auto& env_cod = p.environment.cod();
  const auto& obs = p.agent.dom();
  if (obs.arity() > env_cod.arity() || env_cod.suffix_from(env_cod.arity() - obs.arity()) != obs)
    throw bad("agent domain " + obs.describe() + " is not a trailing part of " + env_cod.describe());
  if (p.agent.cod() != p.action_obj()) throw bad("agent codomain must be the action alphabet");
  if (p.consequence.dom() != tensor(p.context(), p.action_obj()))
    throw bad("consequence domain must be " + tensor(p.context(), p.action_obj()).describe());
  if (p.consequence.cod().arity() != 1) throw bad("consequence must produce a single outcome alphabet");
  if (!is_total(p.environment) || !is_total(p.agent)) throw bad("environment and agent must be total");
  for (const auto& label : p.outcomes().labels())
    if (!p.utilities.contains(label)) throw bad("no utility for outcome '" + label + "'");
  for (const auto& [label, value] : p.utilities)
    if (!p.outcomes().find(label)) throw bad("utility given for unknown outcome '" + label + "'");
}

/// The model with the action wire exposed: I -> U ⊗ A.
inline Term exposed_action_term(const DecisionProblem& p) {
  const Obj c = p.context();
  const Obj a = p.action_obj();
  return Term::chain({
      Term::gen("environment", p.environment),
      Term::tensor(Term::id(c), Term::compose(Term::gen("agent", p.agent), Term::copy(a))),
      Term::tensor(Term::gen("consequence", p.consequence), Term::id(a)),
  });
}

/// Subdistribution over outcomes with the action observed to be `action`.
/// Its mass is the probability of that action in the model.
inline SubKernel action_state(const DecisionProblem& p, const std::string& action) {
  if (!p.actions.find(action))
    throw Error(ErrorCode::UnknownAction, "'" + action + "' is not an action of '" + p.name + "'");
  const Obj u = p.consequence.cod();
  const Term t = Term::compose(exposed_action_term(p),
                               Term::tensor(Term::id(u), Term::observe(p.action_obj(), {action})));
  return evaluate(t);
}

/// Average utility of normalise(state). Throws UndefinedUtility on a zero-mass state.
inline Rat expected_utility(const SubKernel& state, const std::map<std::string, Rat>& utilities) {
  detail::check_state(state, "utility state");
  if (state.cod().arity() != 1)
    throw Error(ErrorCode::TypeMismatch, "utility state must range over a single alphabet");
  const Rat mass = state.mass(0);
  if (mass.is_zero()) throw Error(ErrorCode::UndefinedUtility, "state has zero mass");
  const Alphabet& u = state.cod().factors().front();
  Rat total;
  for (const auto& [k, p] : state.row(0)) {
    auto it = utilities.find(u.label(k));
    if (it == utilities.end())
      throw Error(ErrorCode::InvalidProblem, "no utility for outcome '" + u.label(k) + "'");
    total += it->second * p;
  }
  return total / mass;
}

struct ActionValue {
  std::string action;
  Rat mass;
  std::optional<Rat> expected_utility;  // empty when the action has probability zero
};

struct Prescription {
  std::vector<ActionValue> table;
  std::vector<std::string> prescribed;
  std::string chosen;
};

inline Prescription solve(const DecisionProblem& p) {
  validate(p);
  Prescription out;
  std::optional<Rat> best;
  for (const auto& action : p.actions.labels()) {
    const SubKernel state = action_state(p, action);
    ActionValue row{action, state.mass(0), std::nullopt};
    if (!row.mass.is_zero()) {
      row.expected_utility = expected_utility(state, p.utilities);
      if (!best || *row.expected_utility > *best) best = row.expected_utility;
    }
    out.table.push_back(std::move(row));
  }
  if (!best)
    throw Error(ErrorCode::NoFeasibleAction, "every action of '" + p.name + "' has probability zero");
  for (const auto& row : out.table)
    if (row.expected_utility && *row.expected_utility == *best) out.prescribed.push_back(row.action);
  out.chosen = out.prescribed.front();
  return out;
}

// ---------------------------------------------------------------------------
// Problem corpus

namespace corpus {

namespace detail {

inline void check_probability(const Rat& p, const char* what) {
  if (p.sign() < 0 || p > Rat(1))
    throw Error(ErrorCode::BadParameter, std::string(what) + " = " + p.str() + " is not in [0,1]");
}

inline SubKernel uniform_state(const Obj& x) {
  std::vector<Row> rows(1);
  for (std::size_t i = 0; i < x.size(); ++i) rows[0].push_back({i, Rat(1, static_cast<long>(x.size()))});
  return SubKernel::from_rows(Obj::unit(), x, std::move(rows));
}

/// Kernel from a function on label tuples returning (label tuple, p) pairs.
template <class F>
SubKernel tabulate(const Obj& dom, const Obj& cod, F&& f) {
  LabelledTable table;
  for (std::size_t x = 0; x < dom.size(); ++x) {
    const Tuple in = dom.labels_of(x);
    table.emplace_back(in, f(in));
  }
  return make_kernel(dom, cod, table);
}

inline LabelledRow bernoulli(const std::string& yes, const std::string& no, const Rat& p) {
  return {{{yes}, p}, {{no}, Rat(1) - p}};
}

}  // namespace detail

inline const Alphabet& newcomb_actions() {
  static const Alphabet a("Action", {"one-box", "two-box"});
  return a;
}

/// Uniform agent and predictor, with the consequence observing that the
/// prediction is correct. With `noise` > 0 a wrong prediction survives the
/// observation with that weight.
inline DecisionProblem newcomb(const Rat& noise = Rat(0)) {
  detail::check_probability(noise, "noise");
  const Alphabet& act = newcomb_actions();
  const Alphabet pred("Prediction", {"one-box", "two-box"});
  const Alphabet payoff("Payoff", {"e1000", "e0", "e1001", "e1"});
  const Obj p{pred};
  const Obj a{act};
  auto consequence = detail::tabulate(tensor(p, a), Obj{payoff}, [&](const Tuple& in) -> LabelledRow {
    const bool pred_one = in[0] == "one-box";
    const bool act_one = in[1] == "one-box";
    const std::string out = act_one ? (pred_one ? "e1000" : "e0") : (pred_one ? "e1001" : "e1");
    const Rat weight = pred_one == act_one ? Rat(1) : noise;
    return {{{out}, weight}};
  });
  return DecisionProblem{
      "newcomb",
      act,
      detail::uniform_state(p),
      detail::uniform_state(a),
      std::move(consequence),
      {{"e1000", Rat(1000)}, {"e0", Rat(0)}, {"e1001", Rat(1001)}, {"e1", Rat(1)}},
  };
}

/// As newcomb(), but the agent sees the prediction.
inline DecisionProblem transparent_newcomb() {
  DecisionProblem base = newcomb();
  const Alphabet pred("Prediction", {"one-box", "two-box"});
  const Obj p{pred};
  const Obj a{newcomb_actions()};
  base.name = "transparent-newcomb";
  base.environment = compose(detail::uniform_state(p), copy(p));
  base.agent = detail::tabulate(p, a, [](const Tuple&) -> LabelledRow {
    return {{{"one-box"}, Rat(1, 2)}, {{"two-box"}, Rat(1, 2)}};
  });
  return base;
}

/// Prize and first pick uniform; the host opens a uniformly random door that
/// is neither. The agent sees the opened door and stays or switches.
inline DecisionProblem monty_hall() {
  const Alphabet door("Door", {"d1", "d2", "d3"});
  const Alphabet act("Action", {"stay", "switch"});
  const Alphabet result("Result", {"car", "goat"});
  const Obj d{door};
  const Obj env_cod{door, door, door, door};  // prize, pick, opened | opened seen by the agent
  auto environment = detail::tabulate(Obj::unit(), env_cod, [&](const Tuple&) {
    LabelledRow row;
    for (const auto& prize : door.labels()) {
      for (const auto& pick : door.labels()) {
        std::vector<std::string> options;
        for (const auto& o : door.labels())
          if (o != prize && o != pick) options.push_back(o);
        for (const auto& o : options)
          row.push_back({{prize, pick, o, o}, Rat(1, 9 * static_cast<long>(options.size()))});
      }
    }
    return row;
  });
  auto agent = detail::tabulate(d, Obj{act}, [](const Tuple&) -> LabelledRow {
    return {{{"stay"}, Rat(1, 2)}, {{"switch"}, Rat(1, 2)}};
  });
  auto consequence = detail::tabulate(Obj{door, door, door, act}, Obj{result}, [&](const Tuple& in) -> LabelledRow {
    const auto& prize = in[0];
    const auto& pick = in[1];
    const auto& opened = in[2];
    std::string final_door = pick;
    if (in[3] == "switch")
      for (const auto& o : door.labels())
        if (o != pick && o != opened) final_door = o;
    return {{{final_door == prize ? "car" : "goat"}, Rat(1)}};
  });
  return DecisionProblem{"monty-hall", act, std::move(environment), std::move(agent),
                         std::move(consequence), {{"car", Rat(1000)}, {"goat", Rat(0)}}};
}

enum class DamascusPayoffs {
  /// Meeting Death in Damascus costs nothing, meeting it in Aleppo costs the trip.
  Prose,
  /// The table as printed: meeting in Aleppo 0, meeting in Damascus -1.
  Printed,
};

namespace detail {

inline const Alphabet& city() {
  static const Alphabet c("City", {"aleppo", "damascus"});
  return c;
}

inline const Alphabet& damascus_outcomes() {
  static const Alphabet u("Fate", {"meet-aleppo", "escape-to-aleppo", "escape-in-damascus", "meet-damascus"});
  return u;
}

inline std::map<std::string, Rat> damascus_utilities(DamascusPayoffs payoffs) {
  const bool prose = payoffs == DamascusPayoffs::Prose;
  return {{"meet-aleppo", Rat(prose ? -1 : 0)},
          {"escape-to-aleppo", Rat(999)},
          {"escape-in-damascus", Rat(1000)},
          {"meet-damascus", Rat(prose ? 0 : -1)}};
}

inline std::string fate(const std::string& merchant, const std::string& death) {
  if (merchant == "aleppo") return death == "aleppo" ? "meet-aleppo" : "escape-to-aleppo";
  return death == "aleppo" ? "escape-in-damascus" : "meet-damascus";
}

}  // namespace detail

/// Death predicts the merchant perfectly: the consequence observes that
/// Death's city is the merchant's.
inline DecisionProblem death_in_damascus(DamascusPayoffs payoffs = DamascusPayoffs::Prose) {
  const Alphabet act("Action", {"stay", "flee"});
  const Obj c{detail::city()};
  auto agent = detail::uniform_state(Obj{act});
  auto consequence = detail::tabulate(Obj{detail::city(), act}, Obj{detail::damascus_outcomes()},
                                      [](const Tuple& in) -> LabelledRow {
                                        const std::string merchant = in[1] == "stay" ? "damascus" : "aleppo";
                                        if (in[0] != merchant) return {};
                                        return {{{detail::fate(merchant, in[0])}, Rat(1)}};
                                      });
  return DecisionProblem{"death-in-damascus", act, detail::uniform_state(c), std::move(agent),
                         std::move(consequence), detail::damascus_utilities(payoffs)};
}

/// The merchant may instead follow a coin (landing on Aleppo with
/// `merchant_coin`). Death predicts the strategy but not the coin; facing a
/// coin-tossing merchant it tosses its own (`death_coin`).
inline DecisionProblem death_in_damascus_coin(const Rat& merchant_coin, const Rat& death_coin,
                                              DamascusPayoffs payoffs = DamascusPayoffs::Prose) {
  detail::check_probability(merchant_coin, "merchant_coin");
  detail::check_probability(death_coin, "death_coin");
  const Alphabet act("Action", {"stay", "flee", "use-coin"});
  const Alphabet strategy("Prediction", {"stay", "flee", "use-coin"});
  const Alphabet coin("Coin", {"aleppo", "damascus"});
  const Obj ctx{strategy, coin, coin};  // predicted strategy, merchant's coin, Death's coin
  auto environment = detail::tabulate(Obj::unit(), ctx, [&](const Tuple&) {
    LabelledRow row;
    const Rat third(1, 3);
    for (const auto& s : strategy.labels())
      for (const auto& mc : coin.labels())
        for (const auto& dc : coin.labels())
          row.push_back({{s, mc, dc},
                         third * (mc == "aleppo" ? merchant_coin : Rat(1) - merchant_coin) *
                             (dc == "aleppo" ? death_coin : Rat(1) - death_coin)});
    return row;
  });
  auto where = [](const std::string& s, const std::string& coin_city) -> std::string {
    if (s == "stay") return "damascus";
    if (s == "flee") return "aleppo";
    return coin_city;
  };
  auto consequence = detail::tabulate(tensor(ctx, Obj{act}), Obj{detail::damascus_outcomes()},
                                      [&](const Tuple& in) -> LabelledRow {
                                        if (in[0] != in[3]) return {};
                                        const std::string merchant = where(in[3], in[1]);
                                        const std::string death = where(in[0], in[2]);
                                        return {{{detail::fate(merchant, death)}, Rat(1)}};
                                      });
  return DecisionProblem{"death-in-damascus-coin", act, std::move(environment),
                         detail::uniform_state(Obj{act}), std::move(consequence),
                         detail::damascus_utilities(payoffs)};
}

/// gene -> (cancer, desire) -> smoke. The gene causes cancer; smoking is
/// correlated with the gene only through the desire to smoke.
inline DecisionProblem smoking_lesion(const Rat& gene_prior = Rat(1, 2),
                                      const Rat& desire_given_gene = Rat(9, 10),
                                      const Rat& desire_given_no_gene = Rat(1, 10),
                                      const Rat& smoke_given_desire = Rat(9, 10),
                                      const Rat& smoke_given_no_desire = Rat(1, 10)) {
  detail::check_probability(gene_prior, "gene_prior");
  detail::check_probability(desire_given_gene, "desire_given_gene");
  detail::check_probability(desire_given_no_gene, "desire_given_no_gene");
  detail::check_probability(smoke_given_desire, "smoke_given_desire");
  detail::check_probability(smoke_given_no_desire, "smoke_given_no_desire");
  const Alphabet health("Cancer", {"cancer", "healthy"});
  const Alphabet desire("Desire", {"desire", "no-desire"});
  const Alphabet act("Action", {"smoke", "abstain"});
  const Alphabet outcome("Outcome", {"cancer-smoke", "healthy-smoke", "cancer-abstain", "healthy-abstain"});
  auto environment = detail::tabulate(Obj::unit(), Obj{health, desire}, [&](const Tuple&) -> LabelledRow {
    const Rat g = gene_prior;
    const Rat ng = Rat(1) - gene_prior;
    return {{{"cancer", "desire"}, g * desire_given_gene},
            {{"cancer", "no-desire"}, g * (Rat(1) - desire_given_gene)},
            {{"healthy", "desire"}, ng * desire_given_no_gene},
            {{"healthy", "no-desire"}, ng * (Rat(1) - desire_given_no_gene)}};
  });
  auto agent = detail::tabulate(Obj{desire}, Obj{act}, [&](const Tuple& in) {
    return detail::bernoulli("smoke", "abstain",
                             in[0] == "desire" ? smoke_given_desire : smoke_given_no_desire);
  });
  auto consequence = detail::tabulate(Obj{health, act}, Obj{outcome}, [](const Tuple& in) -> LabelledRow {
    const std::string suffix = in[1] == "smoke" ? "-smoke" : "-abstain";
    return {{{in[0] + suffix}, Rat(1)}};
  });
  return DecisionProblem{"smoking-lesion", act, std::move(environment), std::move(agent),
                         std::move(consequence),
                         {{"cancer-smoke", Rat(-999)},
                          {"healthy-smoke", Rat(1)},
                          {"cancer-abstain", Rat(-1000)},
                          {"healthy-abstain", Rat(0)}}};
}

inline std::vector<std::string> names() {
  return {"newcomb", "transparent-newcomb", "monty-hall", "death-in-damascus",
          "death-in-damascus-coin", "smoking-lesion"};
}

/// Built-in problem by name, with default parameters.
inline DecisionProblem by_name(const std::string& name) {
  if (name == "newcomb") return newcomb();
  if (name == "transparent-newcomb") return transparent_newcomb();
  if (name == "monty-hall") return monty_hall();
  if (name == "death-in-damascus") return death_in_damascus();
  if (name == "death-in-damascus-coin") return death_in_damascus_coin(Rat(1, 2), Rat(1, 2));
  if (name == "smoking-lesion") return smoking_lesion();
  throw Error(ErrorCode::UnknownProblem, "no built-in problem named '" + name + "'");
}

}  // namespace corpus

}  // namespace pmc
