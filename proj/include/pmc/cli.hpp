#pragma once

// The `pmc` command line. Exit status: 0 on success, 1 on invalid input or a
// failing law, 2 when inference is undefined (impossible evidence, no
// feasible action, undefined utility).

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pmc/conditioning.hpp"
#include "pmc/diagram.hpp"
#include "pmc/edt.hpp"
#include "pmc/io.hpp"
#include "pmc/laws.hpp"

namespace pmc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitUndefined = 2;

inline std::string format_solution_tsv(const Prescription& s) {
  std::string out;
  for (const auto& row : s.table)
    out += row.action + "\t" + row.mass.str() + "\t" +
           (row.expected_utility ? row.expected_utility->str() : std::string("undef")) + "\n";
  out += "prescribed:\t" + s.chosen + "\n";
  return out;
}

namespace detail {

inline std::optional<Rat> optional_rat(const std::string& text) {
  if (text.empty()) return std::nullopt;
  return Rat::parse(text);
}

struct CorpusOptions {
  std::string name;
  std::string output;
  bool printed_table = false;
  std::string noise, merchant_coin, death_coin;
  std::string gene_prior, desire_given_gene, desire_given_no_gene, smoke_given_desire, smoke_given_no_desire;
};

inline DecisionProblem build_corpus(const CorpusOptions& o) {
  const auto table = o.printed_table ? corpus::DamascusPayoffs::Printed : corpus::DamascusPayoffs::Prose;
  auto rat_or = [](const std::string& text, Rat fallback) { return optional_rat(text).value_or(fallback); };
  if (o.name == "newcomb") return corpus::newcomb(rat_or(o.noise, Rat(0)));
  if (o.name == "death-in-damascus") return corpus::death_in_damascus(table);
  if (o.name == "death-in-damascus-coin")
    return corpus::death_in_damascus_coin(rat_or(o.merchant_coin, Rat(1, 2)), rat_or(o.death_coin, Rat(1, 2)),
                                          table);
  if (o.name == "smoking-lesion")
    return corpus::smoking_lesion(rat_or(o.gene_prior, Rat(1, 2)), rat_or(o.desire_given_gene, Rat(9, 10)),
                                  rat_or(o.desire_given_no_gene, Rat(1, 10)),
                                  rat_or(o.smoke_given_desire, Rat(9, 10)),
                                  rat_or(o.smoke_given_no_desire, Rat(1, 10)));
  return corpus::by_name(o.name);
}

inline std::uint64_t default_seed() {
  if (const char* env = std::getenv("PMC_SEED"); env && *env) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, std::string("PMC_SEED is not an unsigned integer: '") + env + "'");
    }
  }
  return kDefaultLawSeed;
}

inline SubKernel load_kernel(const std::string& path) { return io::kernel_from_json(io::load(path)); }

}  // namespace detail

/// Runs the command line with the given arguments (argv[0] is the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact inference and evidential decisions over finite subdistribution kernels", "pmc"};
  app.require_subcommand(1);

  std::string diagram_path, env_path;
  bool want_normal_form = false;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a diagram against a kernel environment");
  eval_cmd->add_option("diagram", diagram_path, "Diagram JSON")->required();
  eval_cmd->add_option("--env", env_path, "Environment JSON with named kernels")->required();
  eval_cmd->add_flag("--normal-form", want_normal_form, "Print the normal form (g, h) instead");

  std::string problem_path, format = "tsv";
  auto* solve_cmd = app.add_subcommand("solve", "Solve a decision problem with evidential decision theory");
  solve_cmd->add_option("problem", problem_path, "Decision problem JSON")->required();
  solve_cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"tsv", "json"}));

  std::string channel_path, prior_path, evidence_path, rule;
  auto* invert_cmd = app.add_subcommand("invert", "Bayesian inversion of a channel against a prior");
  invert_cmd->add_option("--channel", channel_path, "Channel kernel X -> Y")->required();
  invert_cmd->add_option("--prior", prior_path, "Prior state I -> X")->required();

  std::string kernel_path;
  auto* normalise_cmd = app.add_subcommand("normalise", "Normalise a kernel row by row");
  normalise_cmd->add_option("kernel", kernel_path, "Kernel JSON")->required();

  std::size_t split = 0;
  auto* marginal_cmd = app.add_subcommand("marginal", "Marginal on the leading codomain factors");
  marginal_cmd->add_option("kernel", kernel_path, "Kernel JSON")->required();
  marginal_cmd->add_option("--split", split, "Number of leading codomain factors kept")->required();
  auto* conditional_cmd = app.add_subcommand("conditional", "Conditional given the leading codomain factors");
  conditional_cmd->add_option("kernel", kernel_path, "Kernel JSON")->required();
  conditional_cmd->add_option("--split", split, "Number of leading codomain factors conditioned on")->required();

  auto* update_cmd = app.add_subcommand("update", "Update a prior with Pearl's or Jeffrey's rule");
  update_cmd->add_option("--rule", rule, "Update rule")->required()->check(CLI::IsMember({"pearl", "jeffrey"}));
  update_cmd->add_option("--prior", prior_path, "Prior state I -> X")->required();
  update_cmd->add_option("--channel", channel_path, "Channel X -> Y")->required();
  update_cmd->add_option("--evidence", evidence_path, "Predicate Y -> I (pearl) or state I -> Y (jeffrey)")
      ->required();

  std::vector<std::string> law_filter;
  std::size_t cases = 200;
  std::optional<std::uint64_t> seed;
  std::string law_format = "text";
  auto* laws_cmd = app.add_subcommand("laws", "Check the categorical law suite on seeded random instances");
  laws_cmd->add_option("--law", law_filter, "Law to check (repeatable; default all)");
  laws_cmd->add_option("--cases", cases, "Instances per law");
  laws_cmd->add_option("--seed", seed, "Seed (default: PMC_SEED or 7)");
  laws_cmd->add_option("--format", law_format, "Output format")->check(CLI::IsMember({"text", "json"}));
  bool list_laws = false;
  laws_cmd->add_flag("--list", list_laws, "List registered laws");

  detail::CorpusOptions corpus_opts;
  auto* corpus_cmd = app.add_subcommand("corpus", "Emit a built-in decision problem");
  corpus_cmd->add_option("name", corpus_opts.name, "Problem name")->required()->check(CLI::IsMember(corpus::names()));
  corpus_cmd->add_option("--output,-o", corpus_opts.output, "Write to file instead of stdout");
  corpus_cmd->add_flag("--printed-table", corpus_opts.printed_table,
                       "Death in Damascus: use the payoff orientation of the printed table");
  corpus_cmd->add_option("--noise", corpus_opts.noise, "Newcomb: weight of a wrong prediction");
  corpus_cmd->add_option("--merchant-coin", corpus_opts.merchant_coin, "P(merchant's coin shows Aleppo)");
  corpus_cmd->add_option("--death-coin", corpus_opts.death_coin, "P(Death's coin shows Aleppo)");
  corpus_cmd->add_option("--gene-prior", corpus_opts.gene_prior, "Smoking lesion: P(gene)");
  corpus_cmd->add_option("--desire-given-gene", corpus_opts.desire_given_gene, "P(desire | gene)");
  corpus_cmd->add_option("--desire-given-no-gene", corpus_opts.desire_given_no_gene, "P(desire | no gene)");
  corpus_cmd->add_option("--smoke-given-desire", corpus_opts.smoke_given_desire, "P(smoke | desire)");
  corpus_cmd->add_option("--smoke-given-no-desire", corpus_opts.smoke_given_no_desire, "P(smoke | no desire)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*eval_cmd) {
      const io::Environment env = io::environment_from_json(io::load(env_path));
      const Term t = io::term_from_json(io::load(diagram_path), env);
      if (want_normal_form) {
        const NormalForm nf = normal_form(t);
        out << io::dump(io::Json{{"g", io::to_json(nf.g)}, {"h", io::to_json(nf.h)}});
      } else {
        out << io::dump(io::to_json(evaluate(t)));
      }
    } else if (*solve_cmd) {
      const Prescription s = solve(io::problem_from_json(io::load(problem_path)));
      if (format == "json")
        out << io::dump(io::to_json(s));
      else
        out << format_solution_tsv(s);
    } else if (*invert_cmd) {
      out << io::dump(io::to_json(bayes_invert(detail::load_kernel(channel_path), detail::load_kernel(prior_path))));
    } else if (*normalise_cmd) {
      out << io::dump(io::to_json(normalise(detail::load_kernel(kernel_path))));
    } else if (*marginal_cmd) {
      out << io::dump(io::to_json(marginal(detail::load_kernel(kernel_path), split)));
    } else if (*conditional_cmd) {
      out << io::dump(io::to_json(conditional(detail::load_kernel(kernel_path), split)));
    } else if (*update_cmd) {
      const SubKernel prior = detail::load_kernel(prior_path);
      const SubKernel channel = detail::load_kernel(channel_path);
      const SubKernel evidence = detail::load_kernel(evidence_path);
      const SubKernel updated =
          rule == "pearl" ? pearl_update(prior, channel, evidence) : jeffrey_update(prior, channel, evidence);
      out << io::dump(io::to_json(updated));
    } else if (*laws_cmd) {
      if (list_laws) {
        for (const auto& l : registry()) out << l.name << "\t" << l.description << "\n";
        return kExitOk;
      }
      const std::uint64_t s = seed ? *seed : detail::default_seed();
      const std::vector<std::string> names = law_filter.empty() ? law_names() : law_filter;
      for (const auto& n : names) find_law(n);  // reject unknown names before running anything
      bool all_ok = true;
      io::Json reports = io::Json::array();
      for (const auto& n : names) {
        const Report r = check_law(n, cases, s);
        all_ok = all_ok && r.ok();
        if (law_format == "json")
          reports.push_back(to_json(r));
        else
          out << to_text(r);
      }
      if (law_format == "json")
        out << io::dump(reports);
      else
        out << (all_ok ? "all " : "some ") << names.size() << " laws " << (all_ok ? "passed" : "FAILED") << "\n";
      return all_ok ? kExitOk : kExitInvalid;
    } else if (*corpus_cmd) {
      const std::string text = io::dump(io::to_json(detail::build_corpus(corpus_opts)));
      if (corpus_opts.output.empty()) {
        out << text;
      } else {
        std::ofstream file(corpus_opts.output, std::ios::binary);
        if (!file) throw Error(ErrorCode::IoError, "cannot write '" + corpus_opts.output + "'");
        file << text;
      }
    }
  } catch (const Error& e) {
    err << "pmc: error[" << to_string(e.code()) << "]: " << e.what() << "\n";
    return is_inference_undefined(e.code()) ? kExitUndefined : kExitInvalid;
  }
  return kExitOk;
}

}  // namespace pmc::cli
