#pragma once

// Constrained-process terms: string diagrams over kernel generators and the
// structural maps, extended with observations of deterministic points.
//
// Observe(Y, y) is interpreted as the partial map Y -> I that succeeds exactly
// on y, i.e. (id ⊗ y) ; compare ; discard.

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pmc/conditioning.hpp"
#include "pmc/kernel.hpp"

namespace pmc {

class Term;

namespace term {

struct Gen {
  std::string name;
  SubKernel kernel;
};
struct Id {
  Obj obj;
};
struct Compose;
struct Tensor;
struct Copy {
  Obj obj;
};
struct Discard {
  Obj obj;
};
struct Swap {
  Obj left;
  Obj right;
};
struct Compare {
  Obj obj;
};
struct Observe {
  Obj obj;
  Tuple point;
};

}  // namespace term

class Term {
 public:
  struct Node;

  static Term gen(std::string name, SubKernel kernel);
  static Term id(Obj obj);
  static Term compose(Term first, Term second);
  static Term tensor(Term left, Term right);
  static Term copy(Obj obj);
  static Term discard(Obj obj);
  static Term swap(Obj left, Obj right);
  static Term compare(Obj obj);
  static Term observe(Obj obj, Tuple point);

  /// Left-nested composition of a non-empty chain.
  static Term chain(std::initializer_list<Term> terms);

  [[nodiscard]] const Node& node() const noexcept { return *node_; }

  template <class Visitor>
  decltype(auto) visit(Visitor&& v) const;

 private:
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

namespace term {
struct Compose {
  Term first;
  Term second;
};
struct Tensor {
  Term left;
  Term right;
};
}  // namespace term

struct Term::Node {
  std::variant<term::Gen, term::Id, term::Compose, term::Tensor, term::Copy, term::Discard,
               term::Swap, term::Compare, term::Observe>
      value;
};

template <class Visitor>
decltype(auto) Term::visit(Visitor&& v) const {
  return std::visit(std::forward<Visitor>(v), node_->value);
}

inline Term Term::gen(std::string name, SubKernel kernel) {
  return Term(std::make_shared<const Node>(Node{term::Gen{std::move(name), std::move(kernel)}}));
}
inline Term Term::id(Obj obj) {
  return Term(std::make_shared<const Node>(Node{term::Id{std::move(obj)}}));
}
inline Term Term::compose(Term first, Term second) {
  return Term(std::make_shared<const Node>(Node{term::Compose{std::move(first), std::move(second)}}));
}
inline Term Term::tensor(Term left, Term right) {
  return Term(std::make_shared<const Node>(Node{term::Tensor{std::move(left), std::move(right)}}));
}
inline Term Term::copy(Obj obj) {
  return Term(std::make_shared<const Node>(Node{term::Copy{std::move(obj)}}));
}
inline Term Term::discard(Obj obj) {
  return Term(std::make_shared<const Node>(Node{term::Discard{std::move(obj)}}));
}
inline Term Term::swap(Obj left, Obj right) {
  return Term(std::make_shared<const Node>(Node{term::Swap{std::move(left), std::move(right)}}));
}
inline Term Term::compare(Obj obj) {
  return Term(std::make_shared<const Node>(Node{term::Compare{std::move(obj)}}));
}
inline Term Term::observe(Obj obj, Tuple point) {
  static_cast<void>(obj.index_of(point));  // validates the point
  return Term(std::make_shared<const Node>(Node{term::Observe{std::move(obj), std::move(point)}}));
}
inline Term Term::chain(std::initializer_list<Term> terms) {
  auto it = terms.begin();
  Term acc = *it;
  for (++it; it != terms.end(); ++it) acc = compose(acc, *it);
  return acc;
}

struct Signature {
  Obj dom;
  Obj cod;
  friend bool operator==(const Signature&, const Signature&) = default;
};

namespace detail {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline Signature infer_type_at(const Term& t, const std::string& path) {
  return t.visit(overloaded{
      [](const term::Gen& g) { return Signature{g.kernel.dom(), g.kernel.cod()}; },
      [](const term::Id& i) { return Signature{i.obj, i.obj}; },
      [&](const term::Compose& c) {
        Signature a = infer_type_at(c.first, path + ".first");
        Signature b = infer_type_at(c.second, path + ".second");
        if (a.cod != b.dom)
          throw Error(ErrorCode::IllTyped, "at " + path + ": cannot compose " + a.cod.describe() +
                                               " output with " + b.dom.describe() + " input");
        return Signature{std::move(a.dom), std::move(b.cod)};
      },
      [&](const term::Tensor& c) {
        Signature a = infer_type_at(c.left, path + ".left");
        Signature b = infer_type_at(c.right, path + ".right");
        return Signature{tensor(a.dom, b.dom), tensor(a.cod, b.cod)};
      },
      [](const term::Copy& c) { return Signature{c.obj, tensor(c.obj, c.obj)}; },
      [](const term::Discard& d) { return Signature{d.obj, Obj::unit()}; },
      [](const term::Swap& s) { return Signature{tensor(s.left, s.right), tensor(s.right, s.left)}; },
      [](const term::Compare& c) { return Signature{tensor(c.obj, c.obj), c.obj}; },
      [](const term::Observe& o) { return Signature{o.obj, Obj::unit()}; },
  });
}

}  // namespace detail

/// Type of a term; throws IllTyped naming the offending subterm path
/// (e.g. "root.first.second").
inline Signature infer_type(const Term& t) { return detail::infer_type_at(t, "root"); }

/// Indicator predicate Y -> I of a single point.
inline SubKernel observe_kernel(const Obj& y, const Tuple& point) { return point_predicate(y, point); }

namespace detail {

inline SubKernel evaluate_checked(const Term& t) {
  return t.visit(overloaded{
      [](const term::Gen& g) { return g.kernel; },
      [](const term::Id& i) { return identity(i.obj); },
      [](const term::Compose& c) { return compose(evaluate_checked(c.first), evaluate_checked(c.second)); },
      [](const term::Tensor& c) { return tensor(evaluate_checked(c.left), evaluate_checked(c.right)); },
      [](const term::Copy& c) { return copy(c.obj); },
      [](const term::Discard& d) { return discard(d.obj); },
      [](const term::Swap& s) { return swap(s.left, s.right); },
      [](const term::Compare& c) { return compare(c.obj); },
      [](const term::Observe& o) { return observe_kernel(o.obj, o.point); },
  });
}

}  // namespace detail

/// Compositional semantics in subdistribution kernels.
inline SubKernel evaluate(const Term& t) {
  infer_type(t);
  return detail::evaluate_checked(t);
}

/// The partial-process image of Observe(Y, y): (id_Y ⊗ y) ; compare_Y ; discard_Y.
inline Term observe_as_comparator(const Obj& y, const Tuple& point) {
  return Term::chain({Term::tensor(Term::id(y), Term::gen("dirac", dirac(y, point))),
                      Term::compare(y), Term::discard(y)});
}

/// Boolean success wire of normal forms; success is the point "t".
inline const Alphabet& success_alphabet() {
  static const Alphabet b("B", {"t", "f"});
  return b;
}
inline Obj success_obj() { return Obj{success_alphabet()}; }
inline constexpr std::size_t kSuccess = 0;
inline constexpr std::size_t kFailure = 1;

/// f(z | x) = g(z | x) · h(t | x) with g and h total.
struct NormalForm {
  SubKernel g;
  SubKernel h;

  [[nodiscard]] Tuple point() const { return {"t"}; }
  [[nodiscard]] Rat success(std::size_t x) const { return h.at(x, kSuccess); }
};

/// Total kernel X -> B with h(t | x) = s[x].
inline SubKernel success_kernel(const Obj& x, const std::vector<Rat>& s) {
  std::vector<Row> rows(x.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].push_back({kSuccess, s[i]});
    rows[i].push_back({kFailure, Rat(1) - s[i]});
  }
  return SubKernel::from_rows(x, success_obj(), std::move(rows));
}

inline SubKernel always_succeeds(const Obj& x) { return success_kernel(x, std::vector<Rat>(x.size(), Rat(1))); }

inline SubKernel uniform_row_default(const Obj& x, const Obj& z, std::vector<Row> rows,
                                     const std::vector<bool>& needs_default) {
  const Rat u(1, static_cast<long>(z.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!needs_default[i]) continue;
    rows[i].clear();
    for (std::size_t k = 0; k < z.size(); ++k) rows[i].push_back({k, u});
  }
  return SubKernel::from_rows(x, z, std::move(rows));
}

namespace detail {

inline NormalForm total_normal_form(SubKernel k) {
  SubKernel h = always_succeeds(k.dom());
  return NormalForm{std::move(k), std::move(h)};
}

inline std::vector<Rat> successes(const NormalForm& nf) {
  std::vector<Rat> s(nf.h.dom().size());
  for (std::size_t x = 0; x < s.size(); ++x) s[x] = nf.success(x);
  return s;
}

/// Sequential case. The new g row is the conditional, on the success bit of
/// the second factor, of the total kernel g1 ; copy ; (h2 ⊗ g2).
inline NormalForm compose_normal_forms(const NormalForm& a, const NormalForm& b) {
  const Obj& x = a.g.dom();
  const Obj& mid = a.g.cod();
  const Obj& z = b.g.cod();
  const SubKernel joint = compose(a.g, compose(copy(mid), tensor(b.h, b.g)));  // X -> B ⊗ Z, total
  const SubKernel passes = marginal(joint, 1);                                  // X -> B
  const SubKernel cond = conditional(joint, 1);                                 // B ⊗ X -> Z
  const std::size_t nx = x.size();
  std::vector<Row> rows(nx);
  std::vector<bool> needs_default(nx, false);
  std::vector<Rat> s(nx);
  for (std::size_t i = 0; i < nx; ++i) {
    const Rat t = passes.at(i, kSuccess);
    s[i] = a.success(i) * t;
    if (t.is_zero())
      needs_default[i] = true;
    else
      rows[i] = cond.row(kSuccess * nx + i);
  }
  return NormalForm{uniform_row_default(x, z, std::move(rows), needs_default), success_kernel(x, s)};
}

inline NormalForm tensor_normal_forms(const NormalForm& a, const NormalForm& b) {
  const std::vector<Rat> s1 = successes(a);
  const std::vector<Rat> s2 = successes(b);
  std::vector<Rat> s;
  s.reserve(s1.size() * s2.size());
  for (const auto& p : s1)
    for (const auto& q : s2) s.push_back(p * q);
  SubKernel g = tensor(a.g, b.g);
  SubKernel h = success_kernel(g.dom(), s);
  return NormalForm{std::move(g), std::move(h)};
}

inline NormalForm normal_form_checked(const Term& t, const std::string& path) {
  return t.visit(overloaded{
      [&](const term::Gen& g) {
        if (!is_total(g.kernel))
          throw Error(ErrorCode::NonTotalGenerator,
                      "at " + path + ": generator '" + g.name + "' is not total");
        return total_normal_form(g.kernel);
      },
      [](const term::Id& i) { return total_normal_form(identity(i.obj)); },
      [&](const term::Compose& c) {
        return compose_normal_forms(normal_form_checked(c.first, path + ".first"),
                                    normal_form_checked(c.second, path + ".second"));
      },
      [&](const term::Tensor& c) {
        return tensor_normal_forms(normal_form_checked(c.left, path + ".left"),
                                   normal_form_checked(c.right, path + ".right"));
      },
      [](const term::Copy& c) { return total_normal_form(copy(c.obj)); },
      [](const term::Discard& d) { return total_normal_form(discard(d.obj)); },
      [](const term::Swap& s) { return total_normal_form(swap(s.left, s.right)); },
      [](const term::Compare& c) {
        // Succeeds iff both inputs agree; on success the output is either one.
        const std::size_t n = c.obj.size();
        std::vector<Row> rows(n * n);
        std::vector<Rat> s(n * n);
        for (std::size_t i = 0; i < n * n; ++i) {
          rows[i].push_back({i / n, Rat(1)});
          s[i] = Rat(i / n == i % n ? 1 : 0);
        }
        const Obj xx = tensor(c.obj, c.obj);
        return NormalForm{SubKernel::from_rows(xx, c.obj, std::move(rows)), success_kernel(xx, s)};
      },
      [](const term::Observe& o) {
        std::vector<Rat> s(o.obj.size());
        s[o.obj.index_of(o.point)] = Rat(1);
        return NormalForm{discard(o.obj), success_kernel(o.obj, s)};
      },
  });
}

}  // namespace detail

/// Normal form by structural induction, using only conditionals of total
/// kernels. Rows where the term always fails get a uniform g row.
/// Throws NonTotalGenerator if some generator is partial.
inline NormalForm normal_form(const Term& t) {
  infer_type(t);
  return detail::normal_form_checked(t, "root");
}

/// copy ; (g ⊗ (h ; observe t)).
inline SubKernel eval_normal_form(const NormalForm& nf) {
  const Obj& x = nf.g.dom();
  return compose(copy(x), tensor(nf.g, compose(nf.h, observe_kernel(success_obj(), {"t"}))));
}

}  // namespace pmc
