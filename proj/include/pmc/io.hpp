#pragma once

// JSON file formats for kernels, diagrams (with their kernel environments)
// and decision problems.
//
// Emission is canonical: factors in declared order, rows and outputs in
// outcome-index order (lexicographic in declared label order), all-fail rows
// omitted, rationals reduced and written as "n" or "n/d". Parsing an emitted
// document and emitting it again reproduces it byte for byte.

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pmc/diagram.hpp"
#include "pmc/edt.hpp"
#include "pmc/kernel.hpp"

namespace pmc::io {

using Json = nlohmann::ordered_json;

namespace detail {

inline Error parse_error(const std::string& msg) { return Error(ErrorCode::ParseError, msg); }

inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw parse_error(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw parse_error(where + ": missing \"" + key + "\"");
  return *it;
}

inline std::string string_of(const Json& j, const std::string& where) {
  if (!j.is_string()) throw parse_error(where + ": expected a string");
  return j.get<std::string>();
}

inline std::vector<std::string> strings_of(const Json& j, const std::string& where) {
  if (!j.is_array()) throw parse_error(where + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(string_of(e, where));
  return out;
}

inline Rat rat_of(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rat(j.get<long>());
  if (!j.is_string()) throw parse_error(where + ": expected a rational string \"num/den\"");
  return Rat::parse(j.get<std::string>());
}

}  // namespace detail

inline Json to_json(const Alphabet& a) { return Json{{"name", a.name()}, {"labels", a.labels()}}; }

inline Alphabet alphabet_from_json(const Json& j) {
  return Alphabet(detail::string_of(detail::field(j, "name", "alphabet"), "alphabet name"),
                  detail::strings_of(detail::field(j, "labels", "alphabet"), "alphabet labels"));
}

inline Json to_json(const Obj& x) {
  Json arr = Json::array();
  for (const auto& a : x.factors()) arr.push_back(to_json(a));
  return arr;
}

inline Obj obj_from_json(const Json& j) {
  if (!j.is_array()) throw detail::parse_error("object: expected an array of alphabets");
  std::vector<Alphabet> factors;
  for (const auto& a : j) factors.push_back(alphabet_from_json(a));
  return Obj(std::move(factors));
}

inline Json to_json(const SubKernel& f) {
  Json rows = Json::array();
  for (std::size_t x = 0; x < f.dom().size(); ++x) {
    if (f.row(x).empty()) continue;
    Json outs = Json::array();
    for (const auto& [y, p] : f.row(x)) outs.push_back(Json{{"val", f.cod().labels_of(y)}, {"p", p.str()}});
    rows.push_back(Json{{"in", f.dom().labels_of(x)}, {"out", std::move(outs)}});
  }
  return Json{{"dom", to_json(f.dom())}, {"cod", to_json(f.cod())}, {"rows", std::move(rows)}};
}

inline SubKernel kernel_from_json(const Json& j) {
  const Obj dom = obj_from_json(detail::field(j, "dom", "kernel"));
  const Obj cod = obj_from_json(detail::field(j, "cod", "kernel"));
  const Json& rows = detail::field(j, "rows", "kernel");
  if (!rows.is_array()) throw detail::parse_error("kernel: \"rows\" must be an array");
  LabelledTable table;
  for (const auto& r : rows) {
    Tuple in = detail::strings_of(detail::field(r, "in", "row"), "row input");
    const Json& outs = detail::field(r, "out", "row");
    if (!outs.is_array()) throw detail::parse_error("row: \"out\" must be an array");
    LabelledRow entries;
    for (const auto& o : outs)
      entries.emplace_back(detail::strings_of(detail::field(o, "val", "entry"), "entry value"),
                           detail::rat_of(detail::field(o, "p", "entry"), "entry probability"));
    table.emplace_back(std::move(in), std::move(entries));
  }
  return make_kernel(dom, cod, table);
}

// ---------------------------------------------------------------------------
// Diagrams

/// Named kernels and alphabets that diagram files refer to.
/// File schema: {"alphabets": [alphabet...], "kernels": {name: kernel}}.
class Environment {
 public:
  void add_alphabet(const Alphabet& a) {
    auto [it, inserted] = alphabets_.emplace(a.name(), a);
    if (!inserted && it->second != a)
      throw Error(ErrorCode::InvalidAlphabet, "conflicting definitions of alphabet '" + a.name() + "'");
  }

  void add_kernel(const std::string& name, const SubKernel& k) {
    for (const auto& a : k.dom().factors()) add_alphabet(a);
    for (const auto& a : k.cod().factors()) add_alphabet(a);
    kernels_.insert_or_assign(name, k);
  }

  [[nodiscard]] const Alphabet& alphabet(const std::string& name) const {
    auto it = alphabets_.find(name);
    if (it == alphabets_.end()) throw Error(ErrorCode::UnknownLabel, "unknown alphabet '" + name + "'");
    return it->second;
  }

  [[nodiscard]] const SubKernel& kernel(const std::string& name) const {
    auto it = kernels_.find(name);
    if (it == kernels_.end()) throw Error(ErrorCode::UnknownKernel, "unknown kernel '" + name + "'");
    return it->second;
  }

  [[nodiscard]] Obj obj(const std::vector<std::string>& names) const {
    std::vector<Alphabet> f;
    for (const auto& n : names) f.push_back(alphabet(n));
    return Obj(std::move(f));
  }

  [[nodiscard]] const std::map<std::string, Alphabet>& alphabets() const noexcept { return alphabets_; }
  [[nodiscard]] const std::map<std::string, SubKernel>& kernels() const noexcept { return kernels_; }

 private:
  std::map<std::string, Alphabet> alphabets_;
  std::map<std::string, SubKernel> kernels_;
};

inline Json to_json(const Environment& env) {
  Json alphabets = Json::array();
  for (const auto& [name, a] : env.alphabets()) alphabets.push_back(to_json(a));
  Json kernels = Json::object();
  for (const auto& [name, k] : env.kernels()) kernels[name] = to_json(k);
  return Json{{"alphabets", std::move(alphabets)}, {"kernels", std::move(kernels)}};
}

inline Environment environment_from_json(const Json& j) {
  Environment env;
  if (!j.is_object()) throw detail::parse_error("environment: expected an object");
  if (auto it = j.find("alphabets"); it != j.end()) {
    if (!it->is_array()) throw detail::parse_error("environment: \"alphabets\" must be an array");
    for (const auto& a : *it) env.add_alphabet(alphabet_from_json(a));
  }
  if (auto it = j.find("kernels"); it != j.end()) {
    if (!it->is_object()) throw detail::parse_error("environment: \"kernels\" must be an object");
    for (const auto& [name, k] : it->items()) env.add_kernel(name, kernel_from_json(k));
  }
  return env;
}

namespace detail {

inline Json names_of(const Obj& x) {
  Json arr = Json::array();
  for (const auto& a : x.factors()) arr.push_back(a.name());
  return arr;
}

}  // namespace detail

/// Diagram schema: {"op": ...} with
///   gen: "name"; id/copy/discard/compare: "obj"; swap: "left", "right";
///   compose: "first", "second"; tensor: "left", "right";
///   observe: "obj", "point".
inline Json to_json(const Term& t) {
  using detail::names_of;
  return t.visit(pmc::detail::overloaded{
      [](const term::Gen& g) { return Json{{"op", "gen"}, {"name", g.name}}; },
      [](const term::Id& i) { return Json{{"op", "id"}, {"obj", names_of(i.obj)}}; },
      [](const term::Compose& c) {
        return Json{{"op", "compose"}, {"first", to_json(c.first)}, {"second", to_json(c.second)}};
      },
      [](const term::Tensor& c) {
        return Json{{"op", "tensor"}, {"left", to_json(c.left)}, {"right", to_json(c.right)}};
      },
      [](const term::Copy& c) { return Json{{"op", "copy"}, {"obj", names_of(c.obj)}}; },
      [](const term::Discard& d) { return Json{{"op", "discard"}, {"obj", names_of(d.obj)}}; },
      [](const term::Swap& s) {
        return Json{{"op", "swap"}, {"left", names_of(s.left)}, {"right", names_of(s.right)}};
      },
      [](const term::Compare& c) { return Json{{"op", "compare"}, {"obj", names_of(c.obj)}}; },
      [](const term::Observe& o) {
        return Json{{"op", "observe"}, {"obj", names_of(o.obj)}, {"point", o.point}};
      },
  });
}

/// Environment of every generator and alphabet used by a term.
inline void collect_environment(const Term& t, Environment& env) {
  auto add_obj = [&](const Obj& x) {
    for (const auto& a : x.factors()) env.add_alphabet(a);
  };
  t.visit(pmc::detail::overloaded{
      [&](const term::Gen& g) { env.add_kernel(g.name, g.kernel); },
      [&](const term::Id& i) { add_obj(i.obj); },
      [&](const term::Compose& c) {
        collect_environment(c.first, env);
        collect_environment(c.second, env);
      },
      [&](const term::Tensor& c) {
        collect_environment(c.left, env);
        collect_environment(c.right, env);
      },
      [&](const term::Copy& c) { add_obj(c.obj); },
      [&](const term::Discard& d) { add_obj(d.obj); },
      [&](const term::Swap& s) {
        add_obj(s.left);
        add_obj(s.right);
      },
      [&](const term::Compare& c) { add_obj(c.obj); },
      [&](const term::Observe& o) { add_obj(o.obj); },
  });
}

inline Term term_from_json(const Json& j, const Environment& env) {
  using detail::field;
  using detail::string_of;
  using detail::strings_of;
  const std::string op = string_of(field(j, "op", "diagram"), "diagram op");
  auto obj = [&](const char* key) { return env.obj(strings_of(field(j, key, op), op)); };
  if (op == "gen") {
    const std::string name = string_of(field(j, "name", op), "gen name");
    return Term::gen(name, env.kernel(name));
  }
  if (op == "id") return Term::id(obj("obj"));
  if (op == "copy") return Term::copy(obj("obj"));
  if (op == "discard") return Term::discard(obj("obj"));
  if (op == "compare") return Term::compare(obj("obj"));
  if (op == "swap") return Term::swap(obj("left"), obj("right"));
  if (op == "compose")
    return Term::compose(term_from_json(field(j, "first", op), env), term_from_json(field(j, "second", op), env));
  if (op == "tensor")
    return Term::tensor(term_from_json(field(j, "left", op), env), term_from_json(field(j, "right", op), env));
  if (op == "observe") return Term::observe(obj("obj"), strings_of(field(j, "point", op), "observe point"));
  throw detail::parse_error("unknown diagram op '" + op + "'");
}

// ---------------------------------------------------------------------------
// Decision problems

inline Json to_json(const DecisionProblem& p) {
  Json utilities = Json::object();
  for (const auto& label : p.outcomes().labels()) {
    auto it = p.utilities.find(label);
    if (it != p.utilities.end()) utilities[label] = it->second.str();
  }
  return Json{{"name", p.name},
              {"actions", to_json(p.actions)},
              {"environment", to_json(p.environment)},
              {"agent", to_json(p.agent)},
              {"consequence", to_json(p.consequence)},
              {"utilities", std::move(utilities)}};
}

inline DecisionProblem problem_from_json(const Json& j) {
  using detail::field;
  const Json& u = field(j, "utilities", "problem");
  if (!u.is_object()) throw detail::parse_error("problem: \"utilities\" must be an object");
  std::map<std::string, Rat> utilities;
  for (const auto& [label, value] : u.items()) utilities.emplace(label, detail::rat_of(value, "utility"));
  DecisionProblem p{detail::string_of(field(j, "name", "problem"), "problem name"),
                    alphabet_from_json(field(j, "actions", "problem")),
                    kernel_from_json(field(j, "environment", "problem")),
                    kernel_from_json(field(j, "agent", "problem")),
                    kernel_from_json(field(j, "consequence", "problem")),
                    std::move(utilities)};
  validate(p);
  return p;
}

inline Json to_json(const Prescription& s) {
  Json table = Json::array();
  for (const auto& row : s.table) {
    Json eu = row.expected_utility ? Json(row.expected_utility->str()) : Json(nullptr);
    table.push_back(Json{{"action", row.action}, {"mass", row.mass.str()}, {"expected_utility", std::move(eu)}});
  }
  return Json{{"table", std::move(table)}, {"prescribed", s.prescribed}, {"chosen", s.chosen}};
}

// ---------------------------------------------------------------------------
// Text helpers

/// Canonical text of a document: two-space indentation and a final newline.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json parse(const std::string& text, const std::string& origin = "input") {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, origin + ": " + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json load(const std::string& path) { return parse(read_file(path), path); }

}  // namespace pmc::io
