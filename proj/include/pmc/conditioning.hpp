#pragma once

// Marginals, canonical conditionals, normalisation, Bayesian inversion and
// the Pearl/Jeffrey update rules.
//
// Conditionals and inversions are canonical: wherever the conditioning mass
// is zero the returned row is all-fail, which keeps them quasi-total and
// makes them functions of their inputs.

#include <cstddef>
#include <string>
#include <vector>

#include "pmc/kernel.hpp"

namespace pmc {

namespace detail {

inline void check_split(const SubKernel& f, std::size_t split) {
  if (split > f.cod().arity())
    throw Error(ErrorCode::BadSplit, "split " + std::to_string(split) + " exceeds the " +
                                         std::to_string(f.cod().arity()) + " factors of " +
                                         f.cod().describe());
}

inline void check_state(const SubKernel& s, std::string_view what) {
  if (!s.dom().is_unit())
    throw Error(ErrorCode::TypeMismatch,
                std::string(what) + " must be a state I -> X, got domain " + s.dom().describe());
}

}  // namespace detail

/// f ; (id_A ⊗ discard_B) where A is the first `split` cod factors.
inline SubKernel marginal(const SubKernel& f, std::size_t split) {
  detail::check_split(f, split);
  const Obj a = f.cod().prefix(split);
  const std::size_t nb = f.cod().suffix_from(split).size();
  std::vector<Row> rows(f.dom().size());
  std::vector<Rat> acc(a.size());
  for (std::size_t x = 0; x < rows.size(); ++x) {
    std::fill(acc.begin(), acc.end(), Rat());
    for (const auto& [ab, p] : f.row(x)) acc[ab / nb] += p;
    for (std::size_t i = 0; i < acc.size(); ++i)
      if (!acc[i].is_zero()) rows[x].push_back({i, acc[i]});
  }
  return SubKernel::from_rows(f.dom(), a, std::move(rows));
}

/// Canonical conditional A ⊗ X -> B of f: X -> A ⊗ B,
/// c(b | a, x) = f(a, b | x) / m(a | x), all-fail where m(a | x) = 0.
inline SubKernel conditional(const SubKernel& f, std::size_t split) {
  detail::check_split(f, split);
  const Obj a = f.cod().prefix(split);
  const Obj b = f.cod().suffix_from(split);
  const std::size_t nx = f.dom().size();
  const std::size_t nb = b.size();
  const SubKernel m = marginal(f, split);
  std::vector<Row> rows(a.size() * nx);
  for (std::size_t x = 0; x < nx; ++x) {
    for (const auto& [ab, p] : f.row(x)) {
      const std::size_t ai = ab / nb;
      rows[ai * nx + x].push_back({ab % nb, p / m.at(x, ai)});
    }
  }
  return SubKernel::from_rows(tensor(a, f.dom()), b, std::move(rows));
}

/// m ▷ c = copy ; (m ⊗ id) ; (copy ⊗ id) ; (id ⊗ c), with value m(a|x) c(b|a,x).
inline SubKernel cond_compose(const SubKernel& m, const SubKernel& c) {
  require_same(tensor(m.cod(), m.dom()), c.dom(), "cond_compose conditional domain");
  const std::size_t nx = m.dom().size();
  const std::size_t nb = c.cod().size();
  std::vector<Row> rows(nx);
  for (std::size_t x = 0; x < nx; ++x)
    for (const auto& [ai, p] : m.row(x))
      for (const auto& [bi, q] : c.row(ai * nx + x)) rows[x].push_back({ai * nb + bi, p * q});
  return SubKernel::from_rows(m.dom(), tensor(m.cod(), c.cod()), std::move(rows));
}

/// Rescales each row to mass one; zero rows stay all-fail.
inline SubKernel normalise(const SubKernel& f) {
  std::vector<Row> rows = f.rows();
  for (std::size_t x = 0; x < rows.size(); ++x) {
    const Rat mass = f.mass(x);
    if (mass.is_zero() || mass.is_one()) continue;
    for (auto& e : rows[x]) e.p /= mass;
  }
  return SubKernel::from_rows(f.dom(), f.cod(), std::move(rows));
}

/// Bayesian inversion Y -> X of g: X -> Y against prior: I -> X,
///   g†(x | y) = g(y | x) σ(x) / Σ_x' g(y | x') σ(x').
/// Rows y with zero pushforward mass are all-fail.
inline SubKernel bayes_invert(const SubKernel& g, const SubKernel& prior) {
  detail::check_state(prior, "prior");
  require_same(g.dom(), prior.cod(), "bayes_invert prior");
  const std::size_t ny = g.cod().size();
  std::vector<Row> rows(ny);
  std::vector<Rat> evidence(ny);
  for (const auto& [x, s] : prior.row(0)) {
    for (const auto& [y, p] : g.row(x)) {
      Rat joint = s * p;
      evidence[y] += joint;
      rows[y].push_back({x, std::move(joint)});
    }
  }
  for (std::size_t y = 0; y < ny; ++y)
    for (auto& e : rows[y]) e.p /= evidence[y];
  return SubKernel::from_rows(g.cod(), g.dom(), std::move(rows));
}

/// Pearl's rule: the total Bayes inversion of channel ; predicate against the
/// prior, i.e. σ(x) p(* | x) / Z. Throws ImpossibleEvidence when Z = 0.
inline SubKernel pearl_update(const SubKernel& prior, const SubKernel& channel,
                              const SubKernel& predicate) {
  detail::check_state(prior, "prior");
  if (!predicate.cod().is_unit())
    throw Error(ErrorCode::TypeMismatch,
                "predicate must have codomain I, got " + predicate.cod().describe());
  const SubKernel likelihood = compose(channel, predicate);
  SubKernel updated = bayes_invert(likelihood, prior);
  if (updated.mass(0).is_zero())
    throw Error(ErrorCode::ImpossibleEvidence, "predicate has zero probability under the prior");
  return updated;
}

/// Jeffrey's rule: evidence ; g†σ. Throws ImpossibleEvidence when the
/// evidence weights an outcome the prior predicts with probability zero.
inline SubKernel jeffrey_update(const SubKernel& prior, const SubKernel& channel,
                                const SubKernel& evidence) {
  detail::check_state(prior, "prior");
  detail::check_state(evidence, "evidence");
  require_same(channel.cod(), evidence.cod(), "jeffrey_update evidence");
  if (!is_total(evidence))
    throw Error(ErrorCode::NonTotalEvidence, "evidence state has mass " + evidence.mass(0).str());
  const SubKernel inversion = bayes_invert(channel, prior);
  for (const auto& [y, p] : evidence.row(0)) {
    if (inversion.row(y).empty())
      throw Error(ErrorCode::ImpossibleEvidence,
                  "evidence weights " + format_tuple(channel.cod().labels_of(y)) +
                      ", which has zero probability under the prior");
  }
  return compose(evidence, inversion);
}

/// Predicate Y -> I with mass 1 exactly at `point`.
inline SubKernel point_predicate(const Obj& y, const Tuple& point) {
  const std::size_t p = y.index_of(point);
  std::vector<Row> rows(y.size());
  rows[p].push_back({0, Rat(1)});
  return SubKernel::from_rows(y, Obj::unit(), std::move(rows));
}

}  // namespace pmc
