#pragma once

// Seeded random instances and the registry of categorical laws. Every law is
// an exact equation between kernels (or a biconditional between a predicate
// and an equation); a failing instance is reported with every kernel it
// involved, serialized in the kernel file format.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pmc/conditioning.hpp"
#include "pmc/diagram.hpp"
#include "pmc/io.hpp"
#include "pmc/kernel.hpp"

namespace pmc {

inline constexpr std::uint64_t kDefaultLawSeed = 7;
inline constexpr long kUnitsPerRow = 64;  // entries are multiples of 1/64

/// Deterministic generator; the draw helpers avoid the library
/// distributions, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  bool chance(const Rat& p) {
    constexpr long kScale = 1L << 20;
    return Rat(static_cast<long>(below(kScale)), kScale) < p;
  }

 private:
  std::mt19937_64 engine_;
};

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + stream + 0x632BE59BD9B4E019ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------
// Random instances

/// Alphabet "S<n>" with labels a, b, c, ...
inline Alphabet sized_alphabet(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.emplace_back(1, static_cast<char>('a' + i));
  return Alphabet("S" + std::to_string(n), std::move(labels));
}

inline Obj random_obj(Rng& rng, std::size_t max_factors, std::size_t max_alphabet, std::size_t max_outcomes) {
  for (;;) {
    const std::size_t arity = rng.below(max_factors + 1);
    std::vector<Alphabet> f;
    for (std::size_t i = 0; i < arity; ++i) f.push_back(sized_alphabet(1 + rng.below(max_alphabet)));
    Obj x(std::move(f));
    if (x.size() <= max_outcomes) return x;
  }
}

namespace detail {

/// `total` forces every row to mass one (when it has support).
inline SubKernel random_kernel_from(Rng& rng, const Obj& dom, const Obj& cod, const Rat& density, bool total) {
  std::vector<Row> rows(dom.size());
  for (auto& row : rows) {
    std::vector<std::size_t> support;
    for (std::size_t y = 0; y < cod.size(); ++y)
      if (rng.chance(density)) support.push_back(y);
    if (total && support.empty()) support.push_back(rng.below(cod.size()));
    if (support.empty()) continue;
    long units = kUnitsPerRow;
    if (!total) {
      const std::size_t mode = rng.below(6);
      if (mode == 0)
        units = 0;
      else if (mode >= 3)
        units = 1 + static_cast<long>(rng.below(kUnitsPerRow - 1));
    }
    std::vector<long> share(support.size(), 0);
    for (long u = 0; u < units; ++u) ++share[rng.below(support.size())];
    for (std::size_t i = 0; i < support.size(); ++i)
      if (share[i]) row.push_back({support[i], Rat(share[i], kUnitsPerRow)});
  }
  return SubKernel::from_rows(dom, cod, std::move(rows));
}

inline void check_density(const Rat& density) {
  if (density.sign() < 0 || density > Rat(1))
    throw Error(ErrorCode::BadDensity, "density " + density.str() + " is not in [0,1]");
}

}  // namespace detail

/// Seeded random subkernel. Each output is in a row's support with
/// probability `density`; entries are multiples of 1/64 and rows mix
/// all-fail, total and partial masses.
inline SubKernel random_kernel(std::uint64_t seed, const Obj& dom, const Obj& cod, const Rat& density) {
  detail::check_density(density);
  Rng rng(seed);
  return detail::random_kernel_from(rng, dom, cod, density, false);
}

inline SubKernel random_total_kernel(std::uint64_t seed, const Obj& dom, const Obj& cod, const Rat& density) {
  detail::check_density(density);
  if (density.is_zero()) throw Error(ErrorCode::BadDensity, "a total kernel needs positive density");
  Rng rng(seed);
  return detail::random_kernel_from(rng, dom, cod, density, true);
}

inline Rat random_density(Rng& rng) {
  static const Rat choices[] = {Rat(1, 4), Rat(1, 2), Rat(3, 4), Rat(1)};
  return choices[rng.below(4)];
}

inline SubKernel random_kernel(Rng& rng, const Obj& dom, const Obj& cod) {
  return detail::random_kernel_from(rng, dom, cod, random_density(rng), false);
}

inline SubKernel random_total_kernel(Rng& rng, const Obj& dom, const Obj& cod) {
  return detail::random_kernel_from(rng, dom, cod, random_density(rng), true);
}

inline Tuple random_point(Rng& rng, const Obj& x) { return x.labels_of(rng.below(x.size())); }

struct TermOptions {
  std::size_t max_alphabet = 3;
  std::size_t max_outcomes = 27;
  bool allow_compare = false;
};

namespace detail {

class TermGenerator {
 public:
  TermGenerator(Rng& rng, TermOptions opts) : rng_(rng), opts_(opts) {}

  Term generate(const Obj& dom, const Obj& cod, int depth) {
    if (depth <= 0) return leaf(dom, cod);
    switch (rng_.below(10)) {
      case 0:
      case 1:
      case 2: {
        const Obj mid = random_obj(rng_, 2, opts_.max_alphabet, 9);
        return Term::compose(generate(dom, mid, depth - 1), generate(mid, cod, depth - 1));
      }
      case 3:
      case 4: {
        const std::size_t i = rng_.below(dom.arity() + 1);
        const std::size_t j = rng_.below(cod.arity() + 1);
        return Term::tensor(generate(dom.prefix(i), cod.prefix(j), depth - 1),
                            generate(dom.suffix_from(i), cod.suffix_from(j), depth - 1));
      }
      case 5:
      case 6: {
        const Obj m = random_obj(rng_, 1, opts_.max_alphabet, 3);
        const Obj wide = tensor(cod, m);
        if (wide.size() > opts_.max_outcomes) return leaf(dom, cod);
        Term constraint = rng_.below(3) < 2 ? Term::observe(m, random_point(rng_, m))
                                            : generate(m, Obj::unit(), depth - 1);
        return Term::compose(generate(dom, wide, depth - 1),
                             Term::tensor(Term::id(cod), std::move(constraint)));
      }
      case 7: {
        if (tensor(dom, dom).size() > opts_.max_outcomes) return leaf(dom, cod);
        return Term::compose(Term::copy(dom),
                             Term::tensor(generate(dom, cod, depth - 1),
                                          Term::observe(dom, random_point(rng_, dom))));
      }
      default:
        return leaf(dom, cod);
    }
  }

 private:
  Term leaf(const Obj& dom, const Obj& cod) {
    std::vector<Term> options;
    if (dom == cod) options.push_back(Term::id(dom));
    if (cod == tensor(dom, dom)) options.push_back(Term::copy(dom));
    if (cod.is_unit()) {
      options.push_back(Term::discard(dom));
      options.push_back(Term::observe(dom, random_point(rng_, dom)));
    }
    for (std::size_t i = 1; i < dom.arity(); ++i) {
      const Obj a = dom.prefix(i);
      const Obj b = dom.suffix_from(i);
      if (cod == tensor(b, a)) options.push_back(Term::swap(a, b));
    }
    if (opts_.allow_compare && dom.arity() % 2 == 0 && dom.arity() > 0) {
      const Obj half = dom.prefix(dom.arity() / 2);
      if (dom == tensor(half, half) && cod == half) options.push_back(Term::compare(half));
    }
    if (options.empty() || rng_.below(3) == 0)
      return Term::gen("k" + std::to_string(counter_++), random_total_kernel(rng_, dom, cod));
    return options[rng_.below(options.size())];
  }

  Rng& rng_;
  TermOptions opts_;
  std::size_t counter_ = 0;
};

}  // namespace detail

/// Random well-typed constrained-process term dom -> cod over total generators.
inline Term random_term(Rng& rng, const Obj& dom, const Obj& cod, int depth, TermOptions opts = {}) {
  return detail::TermGenerator(rng, opts).generate(dom, cod, depth);
}

// ---------------------------------------------------------------------------
// Law registry

/// The structural maps the laws are checked against. Swapping one for a
/// faulty variant must make the corresponding laws fail.
struct Structure {
  std::function<SubKernel(const Obj&)> copy = [](const Obj& x) { return pmc::copy(x); };
  std::function<SubKernel(const Obj&)> discard = [](const Obj& x) { return pmc::discard(x); };
  std::function<SubKernel(const Obj&)> compare = [](const Obj& x) { return pmc::compare(x); };
  std::function<SubKernel(const Obj&, const Obj&)> swap = [](const Obj& x, const Obj& y) {
    return pmc::swap(x, y);
  };
};

struct Counterexample {
  std::size_t instance = 0;
  std::string equation;
  io::Json witnesses;
  io::Json lhs;
  io::Json rhs;
};

/// State of one law instance: its generator, the structure under test and
/// the witnesses recorded so far.
class Instance {
 public:
  Instance(std::uint64_t seed, const Structure& s) : rng(seed), s(s) {}

  Rng rng;
  const Structure& s;

  const SubKernel& record(const std::string& name, const SubKernel& k) {
    witnesses_[name] = io::to_json(k);
    return k;
  }
  void record_term(const std::string& name, const Term& t) {
    io::Environment env;
    io::collect_environment(t, env);
    witnesses_[name] = io::Json{{"diagram", io::to_json(t)}, {"environment", io::to_json(env)}};
  }
  void note(const std::string& name, io::Json value) { witnesses_[name] = std::move(value); }

  bool equal(const std::string& equation, const SubKernel& lhs, const SubKernel& rhs) {
    if (lhs == rhs) return true;
    fail(equation, io::to_json(lhs), io::to_json(rhs));
    return false;
  }

  /// Both sides of a biconditional, e.g. a predicate and its defining equation.
  bool agree(const std::string& equation, bool lhs, bool rhs) {
    if (lhs == rhs) return true;
    fail(equation, io::Json(lhs), io::Json(rhs));
    return false;
  }

  bool holds(const std::string& property, bool value) { return agree(property, value, true); }

  void fail(const std::string& equation, io::Json lhs, io::Json rhs) {
    if (failure_) return;
    failure_ = Counterexample{0, equation, witnesses_, std::move(lhs), std::move(rhs)};
  }

  [[nodiscard]] const std::optional<Counterexample>& failure() const noexcept { return failure_; }

 private:
  io::Json witnesses_ = io::Json::object();
  std::optional<Counterexample> failure_;
};

struct Law {
  std::string name;
  std::string description;
  std::function<void(Instance&)> check;
};

struct Report {
  std::string law;
  std::size_t instances = 0;
  std::uint64_t seed = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::optional<Counterexample> counterexample;  // from the least failing instance

  [[nodiscard]] bool ok() const { return failed == 0; }
};

namespace laws {

// Shapes kept small enough for exact arithmetic to stay fast.
inline Obj small_obj(Rng& rng) { return random_obj(rng, 2, 4, 16); }
inline Obj nonunit_obj(Rng& rng) {
  for (;;) {
    Obj x = small_obj(rng);
    if (!x.is_unit()) return x;
  }
}

inline SubKernel kernel(Instance& in, const std::string& name, const Obj& dom, const Obj& cod) {
  return in.record(name, random_kernel(in.rng, dom, cod));
}

inline SubKernel state(Instance& in, const std::string& name, const Obj& x) {
  return kernel(in, name, Obj::unit(), x);
}

inline void category(Instance& in) {
  const Obj x = small_obj(in.rng), y = small_obj(in.rng), z = small_obj(in.rng), w = small_obj(in.rng);
  const SubKernel f = kernel(in, "f", x, y);
  const SubKernel g = kernel(in, "g", y, z);
  const SubKernel h = kernel(in, "h", z, w);
  in.equal("(f;g);h = f;(g;h)", compose(compose(f, g), h), compose(f, compose(g, h)));
  in.equal("id;f = f", compose(identity(x), f), f);
  in.equal("f;id = f", compose(f, identity(y)), f);
}

inline void interchange(Instance& in) {
  const Obj x1 = small_obj(in.rng), x2 = small_obj(in.rng), y1 = small_obj(in.rng),
            y2 = small_obj(in.rng), z1 = small_obj(in.rng), z2 = small_obj(in.rng);
  const SubKernel f = kernel(in, "f", x1, y1);
  const SubKernel g = kernel(in, "g", x2, y2);
  const SubKernel h = kernel(in, "h", y1, z1);
  const SubKernel k = kernel(in, "k", y2, z2);
  in.equal("(f⊗g);(h⊗k) = (f;h)⊗(g;k)", compose(tensor(f, g), tensor(h, k)),
           tensor(compose(f, h), compose(g, k)));
  in.equal("f⊗id_I = f", tensor(f, identity(Obj::unit())), f);
}

inline void swap_naturality(Instance& in) {
  const Obj x1 = small_obj(in.rng), x2 = small_obj(in.rng), y1 = small_obj(in.rng), y2 = small_obj(in.rng);
  const SubKernel f = kernel(in, "f", x1, y1);
  const SubKernel g = kernel(in, "g", x2, y2);
  in.equal("(f⊗g);swap = swap;(g⊗f)", compose(tensor(f, g), in.s.swap(y1, y2)),
           compose(in.s.swap(x1, x2), tensor(g, f)));
  in.equal("swap;swap = id", compose(in.s.swap(x1, x2), in.s.swap(x2, x1)), identity(tensor(x1, x2)));
}

inline void comonoid(Instance& in) {
  const Obj x = small_obj(in.rng);
  in.note("object", io::to_json(x));
  const auto& s = in.s;
  const SubKernel id = identity(x);
  in.equal("copy;(copy⊗id) = copy;(id⊗copy)", compose(s.copy(x), tensor(s.copy(x), id)),
           compose(s.copy(x), tensor(id, s.copy(x))));
  in.equal("copy;(discard⊗id) = id", compose(s.copy(x), tensor(s.discard(x), id)), id);
  in.equal("copy;(id⊗discard) = id", compose(s.copy(x), tensor(id, s.discard(x))), id);
  in.equal("copy;swap = copy", compose(s.copy(x), s.swap(x, x)), s.copy(x));
}

inline void uniformity(Instance& in) {
  const Obj x = small_obj(in.rng), y = small_obj(in.rng);
  in.note("objects", io::Json::array({io::to_json(x), io::to_json(y)}));
  const auto& s = in.s;
  const Obj xy = tensor(x, y);
  const SubKernel middle_swap = tensor(tensor(identity(x), s.swap(x, y)), identity(y));
  in.equal("copy(X⊗Y) = (copy⊗copy);(id⊗swap⊗id)", s.copy(xy),
           compose(tensor(s.copy(x), s.copy(y)), middle_swap));
  in.equal("discard(X⊗Y) = discard⊗discard", s.discard(xy), tensor(s.discard(x), s.discard(y)));
  in.equal("compare(X⊗Y) = (id⊗swap⊗id);(compare⊗compare)", s.compare(xy),
           compose(tensor(tensor(identity(x), s.swap(y, x)), identity(y)), tensor(s.compare(x), s.compare(y))));
  in.equal("copy(I) = id(I)", s.copy(Obj::unit()), identity(Obj::unit()));
}

inline void frobenius(Instance& in) {
  const Obj x = small_obj(in.rng);
  in.note("object", io::to_json(x));
  const auto& s = in.s;
  const SubKernel id = identity(x);
  const SubKernel middle = compose(s.compare(x), s.copy(x));
  in.equal("(copy⊗id);(id⊗compare) = compare;copy",
           compose(tensor(s.copy(x), id), tensor(id, s.compare(x))), middle);
  in.equal("(id⊗copy);(compare⊗id) = compare;copy",
           compose(tensor(id, s.copy(x)), tensor(s.compare(x), id)), middle);
  in.equal("copy;compare = id", compose(s.copy(x), s.compare(x)), id);
}

inline void comparator_monoid(Instance& in) {
  const Obj x = small_obj(in.rng);
  in.note("object", io::to_json(x));
  const auto& s = in.s;
  const SubKernel id = identity(x);
  in.equal("swap;compare = compare", compose(s.swap(x, x), s.compare(x)), s.compare(x));
  in.equal("(compare⊗id);compare = (id⊗compare);compare", compose(tensor(s.compare(x), id), s.compare(x)),
           compose(tensor(id, s.compare(x)), s.compare(x)));
}

inline void predicate_agreement(Instance& in) {
  const Obj x = small_obj(in.rng), y = small_obj(in.rng);
  const SubKernel f = kernel(in, "f", x, y);
  const auto& s = in.s;
  in.agree("is_deterministic(f) ⇔ f;copy = copy;(f⊗f)", is_deterministic(f),
           compose(f, s.copy(y)) == compose(s.copy(x), tensor(f, f)));
  in.agree("is_total(f) ⇔ f;discard = discard", is_total(f), compose(f, s.discard(y)) == s.discard(x));
  in.agree("is_quasi_total(f) ⇔ f = copy;(f⊗(f;discard))", is_quasi_total(f),
           f == compose(s.copy(x), tensor(f, compose(f, s.discard(y)))));
}

inline void quasi_total_iff_deterministic_failure(Instance& in) {
  const SubKernel f = kernel(in, "f", small_obj(in.rng), small_obj(in.rng));
  in.agree("is_quasi_total(f) ⇔ is_deterministic(f;discard)", is_quasi_total(f),
           is_deterministic(failure_probability(f)));
}

inline void deterministic_copyable(Instance& in) {
  const Obj y = small_obj(in.rng);
  const SubKernel point = in.record("y", dirac(y, random_point(in.rng, y)));
  in.holds("dirac is deterministic and total", is_deterministic(point) && is_total(point));
  in.equal("y;copy = y⊗y", compose(point, in.s.copy(y)), tensor(point, point));
}

/// f: X -> A ⊗ B with a random split point.
inline std::pair<SubKernel, std::size_t> joint(Instance& in) {
  const Obj x = random_obj(in.rng, 1, 4, 4);
  const Obj cod = random_obj(in.rng, 3, 4, 16);
  const std::size_t k = in.rng.below(cod.arity() + 1);
  in.note("split", io::Json(k));
  return {kernel(in, "f", x, cod), k};
}

/// m ▷ c as the literal string diagram copy;(m⊗id);(copy⊗id);(id⊗c).
inline SubKernel cond_compose_diagram(const Structure& s, const SubKernel& m, const SubKernel& c) {
  const Obj& x = m.dom();
  const Obj& a = m.cod();
  return compose_all({s.copy(x), tensor(m, identity(x)), tensor(s.copy(a), identity(x)),
                      tensor(identity(a), c)});
}

inline void splitting(Instance& in) {
  const auto [f, k] = joint(in);
  const SubKernel m = marginal(f, k);
  const SubKernel c = conditional(f, k);
  in.equal("m ▷ c = f", cond_compose(m, c), f);
  in.equal("m ▷ c = copy;(m⊗id);(copy⊗id);(id⊗c)", cond_compose(m, c), cond_compose_diagram(in.s, m, c));
}

inline void quasi_total_conditional(Instance& in) {
  const auto [f, k] = joint(in);
  in.holds("conditional(f) is quasi-total", is_quasi_total(conditional(f, k)));
}

inline void marginal_by_discard(Instance& in) {
  const auto [f, k] = joint(in);
  const Obj a = f.cod().prefix(k);
  const Obj b = f.cod().suffix_from(k);
  const SubKernel by_discard = compose(f, tensor(identity(a), in.s.discard(b)));
  in.equal("marginal(f) = f;(id⊗discard)", marginal(f, k), by_discard);
  in.equal("(f;(id⊗discard)) ▷ conditional(f) = f", cond_compose(by_discard, conditional(f, k)), f);
}

inline void normalisation_equation(Instance& in) {
  const Obj x = small_obj(in.rng);
  const SubKernel f = kernel(in, "f", x, small_obj(in.rng));
  const SubKernel n = normalise(f);
  in.holds("normalise(f) is quasi-total", is_quasi_total(n));
  in.equal("f = copy;(normalise(f)⊗(f;discard))", f, compose(in.s.copy(x), tensor(n, failure_probability(f))));
}

inline void normalisation_idempotent(Instance& in) {
  const SubKernel f = kernel(in, "f", small_obj(in.rng), small_obj(in.rng));
  in.equal("normalise(normalise(f)) = normalise(f)", normalise(normalise(f)), normalise(f));
}

inline void conditional_of_normalisation(Instance& in) {
  const auto [f, k] = joint(in);
  in.equal("marginal(f) ▷ conditional(normalise(f)) = f", cond_compose(marginal(f, k), conditional(normalise(f), k)),
           f);
}

/// Both sides of the inversion equation: σ;copy;(id⊗g) and (σ;g);copy;(g†⊗id).
inline std::pair<SubKernel, SubKernel> inversion_sides(const Structure& s, const SubKernel& g,
                                                       const SubKernel& prior, const SubKernel& inverse) {
  const Obj& x = g.dom();
  const Obj& y = g.cod();
  SubKernel lhs = compose_all({prior, s.copy(x), tensor(identity(x), g)});
  SubKernel rhs = compose_all({prior, g, s.copy(y), tensor(inverse, identity(y))});
  return {std::move(lhs), std::move(rhs)};
}

inline void bayes_inversion_equation(Instance& in) {
  const Obj x = small_obj(in.rng), y = small_obj(in.rng);
  const SubKernel prior = state(in, "prior", x);
  const SubKernel g = kernel(in, "g", x, y);
  const SubKernel inv = in.record("inversion", bayes_invert(g, prior));
  const auto [lhs, rhs] = inversion_sides(in.s, g, prior, inv);
  in.equal("σ;copy;(id⊗g) = (σ;g);copy;(g†⊗id)", lhs, rhs);
}

inline void compositional_inversion(Instance& in) {
  const Obj x = small_obj(in.rng), y = small_obj(in.rng), z = small_obj(in.rng);
  const SubKernel prior = state(in, "prior", x);
  const SubKernel c = kernel(in, "c", x, y);
  const SubKernel d = kernel(in, "d", y, z);
  const SubKernel composite =
      in.record("composite", compose(bayes_invert(d, compose(prior, c)), bayes_invert(c, prior)));
  const auto [lhs, rhs] = inversion_sides(in.s, compose(c, d), prior, composite);
  in.equal("d†(σ;c);c†σ satisfies the inversion equation of c;d", lhs, rhs);
}

inline void synthetic_bayes(Instance& in) {
  const Obj x = small_obj(in.rng), y = nonunit_obj(in.rng);
  const SubKernel prior = state(in, "prior", x);
  const SubKernel c = kernel(in, "c", x, y);
  const Tuple point = random_point(in.rng, y);
  in.note("point", io::Json(point));
  const SubKernel observe = point_predicate(y, point);
  // σ ; copy ; (id ⊗ (c ; observe y)): the prior constrained by the observation.
  const SubKernel constrained = compose_all({prior, in.s.copy(x), tensor(identity(x), compose(c, observe))});
  const SubKernel scalar = compose_all({prior, c, observe});
  const SubKernel row = compose(dirac(y, point), bayes_invert(c, prior));
  in.equal("observing y = (σ;c;obs y) ⊗ (y;c†σ)", constrained, tensor(scalar, row));
}

inline void pearl_equals_jeffrey(Instance& in) {
  const Obj x = small_obj(in.rng), y = nonunit_obj(in.rng);
  const SubKernel prior = state(in, "prior", x);
  const SubKernel c = kernel(in, "c", x, y);
  const Tuple point = random_point(in.rng, y);
  in.note("point", io::Json(point));
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
  if (!in.agree("pearl defined ⇔ jeffrey defined", pearl.has_value(), jeffrey.has_value())) return;
  if (pearl) {
    in.holds("pearl update is total", is_total(*pearl));
    in.equal("pearl(σ, c, obs y) = jeffrey(σ, c, y)", *pearl, *jeffrey);
  }
}

inline Term cproc_term(Instance& in) {
  const Obj dom = random_obj(in.rng, 2, 3, 9);
  const Obj cod = random_obj(in.rng, 2, 3, 9);
  const int depth = 1 + static_cast<int>(in.rng.below(5));
  Term t = random_term(in.rng, dom, cod, depth);
  in.record_term("term", t);
  return t;
}

inline void normal_form_soundness(Instance& in) {
  const Term t = cproc_term(in);
  const NormalForm nf = normal_form(t);
  in.record("g", nf.g);
  in.record("h", nf.h);
  in.holds("g and h are total", is_total(nf.g) && is_total(nf.h));
  in.equal("eval_normal_form(normal_form(t)) = evaluate(t)", eval_normal_form(nf), evaluate(t));
}

inline void normal_form_extraction(Instance& in) {
  const Term t = cproc_term(in);
  const NormalForm nf = normal_form(t);
  const SubKernel f = evaluate(t);
  const SubKernel n = normalise(f);
  for (std::size_t x = 0; x < f.dom().size(); ++x) {
    if (nf.success(x).is_zero()) continue;
    if (nf.g.row(x) != n.row(x)) {
      in.record("g", nf.g);
      in.fail("g = normalise(evaluate(t)) on successful rows (input " + format_tuple(f.dom().labels_of(x)) + ")",
              io::to_json(nf.g), io::to_json(n));
      return;
    }
  }
  const std::size_t k = in.rng.below(f.cod().arity() + 1);
  const SubKernel via_nf = eval_normal_form(nf);
  in.equal("conditional(eval_normal_form(nf)) = conditional(evaluate(t))", conditional(via_nf, k),
           conditional(f, k));
  in.equal("marginal ▷ conditional = evaluate(t)", cond_compose(marginal(f, k), conditional(via_nf, k)), f);
}

inline void embedding_faithfulness(Instance& in) {
  const Obj y = random_obj(in.rng, 2, 4, 16);
  const Tuple point = random_point(in.rng, y);
  in.note("object", io::to_json(y));
  in.note("point", io::Json(point));
  const SubKernel observed = evaluate(Term::observe(y, point));
  in.equal("Observe(y) = (id⊗y);compare;discard", observed, evaluate(observe_as_comparator(y, point)));
  in.equal("y;Observe(y) = id(I)",
           evaluate(Term::compose(Term::gen("y", dirac(y, point)), Term::observe(y, point))),
           identity(Obj::unit()));
  for (std::size_t z = 0; z < y.size(); ++z) {
    const Tuple other = y.labels_of(z);
    if (other == point) continue;
    if (!in.agree("Observe(y) ≠ Observe(z) for z ≠ y",
                  evaluate(Term::observe(y, other)) == observed, false))
      return;
  }
}

}  // namespace laws

inline const std::vector<Law>& registry() {
  static const std::vector<Law> all = {
      {"category", "associativity and identity of composition", laws::category},
      {"interchange", "(f⊗g);(h⊗k) = (f;h)⊗(g;k)", laws::interchange},
      {"swap-naturality", "swap is natural and involutive", laws::swap_naturality},
      {"comonoid", "coassociativity, counitality, cocommutativity of copy", laws::comonoid},
      {"uniformity", "copy, discard, compare on X⊗Y from their factors", laws::uniformity},
      {"frobenius", "partial Frobenius equations and specialness", laws::frobenius},
      {"comparator-monoid", "compare is commutative and associative", laws::comparator_monoid},
      {"predicate-agreement", "total/deterministic/quasi-total match their defining equations",
       laws::predicate_agreement},
      {"quasi-total-iff-deterministic-failure", "quasi-total iff failure probability deterministic",
       laws::quasi_total_iff_deterministic_failure},
      {"deterministic-copyable", "deterministic total states commute with copy", laws::deterministic_copyable},
      {"splitting", "marginal ▷ conditional = f", laws::splitting},
      {"quasi-total-conditional", "canonical conditionals are quasi-total", laws::quasi_total_conditional},
      {"marginal-by-discard", "discarding gives the marginal of a quasi-total conditional",
       laws::marginal_by_discard},
      {"normalisation-equation", "f = copy;(normalise(f)⊗(f;discard))", laws::normalisation_equation},
      {"normalisation-idempotent", "normalise is idempotent", laws::normalisation_idempotent},
      {"prop30-conditional-of-normalisation", "conditionals of the normalisation are conditionals of f",
       laws::conditional_of_normalisation},
      {"bayes-inversion-equation", "bayes_invert satisfies the inversion equation", laws::bayes_inversion_equation},
      {"compositional-inversion", "inverting a composite stepwise", laws::compositional_inversion},
      {"synthetic-bayes", "observation equals scalar times inversion row", laws::synthetic_bayes},
      {"pearl-equals-jeffrey", "Pearl and Jeffrey agree on deterministic evidence", laws::pearl_equals_jeffrey},
      {"normal-form-soundness", "normal forms evaluate to the term", laws::normal_form_soundness},
      {"normal-form-extraction", "normal form g is the normalisation; conditionals agree",
       laws::normal_form_extraction},
      {"embedding-faithfulness", "observe agrees with its comparator image and separates points",
       laws::embedding_faithfulness},
  };
  return all;
}

inline std::vector<std::string> law_names() {
  std::vector<std::string> names;
  for (const auto& l : registry()) names.push_back(l.name);
  return names;
}

inline const Law& find_law(const std::string& name) {
  for (const auto& l : registry())
    if (l.name == name) return l;
  throw Error(ErrorCode::UnknownLaw, "no law named '" + name + "'");
}

/// Checks `instances` seeded instances of a law. Instance i draws from
/// mix_seed(seed, i), so reports are reproducible and independent of
/// evaluation order.
inline Report check_law(const std::string& name, std::size_t instances, std::uint64_t seed,
                        const Structure& structure = Structure{}) {
  const Law& law = find_law(name);
  Report report{law.name, instances, seed, 0, 0, std::nullopt};
  for (std::size_t i = 0; i < instances; ++i) {
    Instance in(mix_seed(seed, i), structure);
    try {
      law.check(in);
    } catch (const Error& e) {
      in.fail(std::string("exception ") + std::string(to_string(e.code())) + ": " + e.what(), nullptr, nullptr);
    }
    if (in.failure()) {
      ++report.failed;
      if (!report.counterexample) {
        report.counterexample = in.failure();
        report.counterexample->instance = i;
      }
    } else {
      ++report.passed;
    }
  }
  return report;
}

inline io::Json to_json(const Report& r) {
  io::Json cx = nullptr;
  if (r.counterexample) {
    const auto& c = *r.counterexample;
    cx = io::Json{{"instance", c.instance},
                  {"instance_seed", mix_seed(r.seed, c.instance)},
                  {"equation", c.equation},
                  {"witnesses", c.witnesses},
                  {"lhs", c.lhs},
                  {"rhs", c.rhs}};
  }
  return io::Json{{"law", r.law},   {"instances", r.instances}, {"seed", r.seed},
                  {"passed", r.passed}, {"failed", r.failed},   {"counterexample", std::move(cx)}};
}

inline std::string to_text(const Report& r) {
  std::string s = (r.ok() ? "PASS " : "FAIL ") + r.law + ": " + std::to_string(r.passed) + "/" +
                  std::to_string(r.instances) + " passed (seed " + std::to_string(r.seed) + ")\n";
  if (r.counterexample) {
    const auto& c = *r.counterexample;
    s += "  counterexample at instance " + std::to_string(c.instance) + ": " + c.equation + "\n";
    s += "  witnesses: " + c.witnesses.dump() + "\n";
    s += "  lhs: " + c.lhs.dump() + "\n";
    s += "  rhs: " + c.rhs.dump() + "\n";
  }
  return s;
}

}  // namespace pmc
