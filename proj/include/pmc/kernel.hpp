#pragma once

// Finite subdistribution kernels: the Kleisli category of the finitary
// subdistribution monad, with its copy/discard/compare structure.
//
// Outcomes of an object are encoded as a flat mixed-radix index, first factor
// most significant. Tensoring objects concatenates factor lists, so
// associators and unitors are identities on this representation and
// (a, b) in X ⊗ Y has index a * |Y| + b.
//
// Failure is never stored: a row with mass m fails with probability 1 - m.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pmc/error.hpp"
#include "pmc/rational.hpp"

namespace pmc {

using Tuple = std::vector<std::string>;

inline std::string format_tuple(const Tuple& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ", ";
    s += t[i];
  }
  return s + ")";
}

class Alphabet {
 public:
  Alphabet(std::string name, std::vector<std::string> labels)
      : name_(std::move(name)), labels_(std::move(labels)) {
    if (name_.empty()) throw Error(ErrorCode::InvalidAlphabet, "alphabet name is empty");
    if (labels_.empty())
      throw Error(ErrorCode::InvalidAlphabet, "alphabet '" + name_ + "' has no labels");
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i].empty())
        throw Error(ErrorCode::InvalidAlphabet, "alphabet '" + name_ + "' has an empty label");
      for (std::size_t j = 0; j < i; ++j)
        if (labels_[i] == labels_[j])
          throw Error(ErrorCode::InvalidAlphabet,
                      "alphabet '" + name_ + "' repeats label '" + labels_[i] + "'");
    }
  }

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }
  [[nodiscard]] std::size_t size() const noexcept { return labels_.size(); }
  [[nodiscard]] const std::string& label(std::size_t i) const { return labels_.at(i); }

  [[nodiscard]] std::optional<std::size_t> find(std::string_view label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return i;
    return std::nullopt;
  }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::string name_;
  std::vector<std::string> labels_;
};

/// A tensor product of alphabets. The empty product is the monoidal unit.
class Obj {
 public:
  Obj() = default;
  Obj(std::initializer_list<Alphabet> factors) : factors_(factors) {}
  explicit Obj(std::vector<Alphabet> factors) : factors_(std::move(factors)) {}

  static Obj unit() { return Obj{}; }

  [[nodiscard]] const std::vector<Alphabet>& factors() const noexcept { return factors_; }
  [[nodiscard]] std::size_t arity() const noexcept { return factors_.size(); }
  [[nodiscard]] bool is_unit() const noexcept { return factors_.empty(); }

  /// Number of outcomes; the unit has exactly one (the empty tuple).
  [[nodiscard]] std::size_t size() const {
    std::size_t n = 1;
    for (const auto& a : factors_) n *= a.size();
    return n;
  }

  [[nodiscard]] std::vector<std::size_t> decode(std::size_t index) const {
    std::vector<std::size_t> digits(factors_.size());
    for (std::size_t i = factors_.size(); i-- > 0;) {
      digits[i] = index % factors_[i].size();
      index /= factors_[i].size();
    }
    return digits;
  }

  [[nodiscard]] std::size_t encode(std::span<const std::size_t> digits) const {
    std::size_t index = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i) index = index * factors_[i].size() + digits[i];
    return index;
  }

  [[nodiscard]] Tuple labels_of(std::size_t index) const {
    const auto digits = decode(index);
    Tuple t;
    t.reserve(digits.size());
    for (std::size_t i = 0; i < digits.size(); ++i) t.push_back(factors_[i].label(digits[i]));
    return t;
  }

  /// Index of a label tuple; throws UnknownLabel on arity or label mismatch.
  [[nodiscard]] std::size_t index_of(const Tuple& labels) const {
    if (labels.size() != factors_.size())
      throw Error(ErrorCode::UnknownLabel, "tuple " + format_tuple(labels) + " has arity " +
                                               std::to_string(labels.size()) + ", expected " +
                                               std::to_string(factors_.size()) + " for " +
                                               describe());
    std::size_t index = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      const auto d = factors_[i].find(labels[i]);
      if (!d)
        throw Error(ErrorCode::UnknownLabel,
                    "label '" + labels[i] + "' is not in alphabet '" + factors_[i].name() + "'");
      index = index * factors_[i].size() + *d;
    }
    return index;
  }

  /// Leading `count` factors.
  [[nodiscard]] Obj prefix(std::size_t count) const {
    return Obj(std::vector<Alphabet>(factors_.begin(), factors_.begin() + static_cast<std::ptrdiff_t>(count)));
  }
  [[nodiscard]] Obj suffix_from(std::size_t count) const {
    return Obj(std::vector<Alphabet>(factors_.begin() + static_cast<std::ptrdiff_t>(count), factors_.end()));
  }

  [[nodiscard]] std::string describe() const {
    if (factors_.empty()) return "I";
    std::string s;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) s += "⊗";
      s += factors_[i].name();
    }
    return s;
  }

  friend bool operator==(const Obj&, const Obj&) = default;

 private:
  std::vector<Alphabet> factors_;
};

inline Obj tensor(const Obj& x, const Obj& y) {
  std::vector<Alphabet> f = x.factors();
  f.insert(f.end(), y.factors().begin(), y.factors().end());
  return Obj(std::move(f));
}

struct Entry {
  std::size_t out;
  Rat p;
  friend bool operator==(const Entry&, const Entry&) = default;
};
using Row = std::vector<Entry>;

/// Entries of a row given by labels, as accepted by make_kernel.
using LabelledRow = std::vector<std::pair<Tuple, Rat>>;
using LabelledTable = std::vector<std::pair<Tuple, LabelledRow>>;

/// Exact substochastic matrix dom -> cod. Rows are indexed by dom outcome,
/// each holding the nonzero entries sorted by cod outcome.
class SubKernel {
 public:
  /// Builds a kernel from index-addressed rows. Entries are sorted, zero
  /// entries dropped and every row checked: probabilities nonnegative, no
  /// repeated output, mass at most one.
  static SubKernel from_rows(Obj dom, Obj cod, std::vector<Row> rows) {
    if (rows.size() != dom.size())
      throw Error(ErrorCode::TypeMismatch, "kernel has " + std::to_string(rows.size()) +
                                               " rows, domain " + dom.describe() + " has " +
                                               std::to_string(dom.size()) + " outcomes");
    const std::size_t ncod = cod.size();
    for (std::size_t x = 0; x < rows.size(); ++x) {
      auto& row = rows[x];
      std::erase_if(row, [](const Entry& e) { return e.p.is_zero(); });
      std::sort(row.begin(), row.end(), [](const Entry& a, const Entry& b) { return a.out < b.out; });
      Rat mass;
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i].out >= ncod)
          throw Error(ErrorCode::TypeMismatch, "output index out of range for " + cod.describe());
        if (i && row[i].out == row[i - 1].out)
          throw Error(ErrorCode::DuplicateEntry, "output " + format_tuple(cod.labels_of(row[i].out)) +
                                                     " listed twice at input " +
                                                     format_tuple(dom.labels_of(x)));
        if (row[i].p.sign() < 0)
          throw Error(ErrorCode::NegativeProbability,
                      "negative probability " + row[i].p.str() + " at input " +
                          format_tuple(dom.labels_of(x)));
        mass += row[i].p;
      }
      if (mass > Rat(1))
        throw Error(ErrorCode::RowMassExceedsOne, "row mass " + mass.str() + " exceeds 1 at input " +
                                                      format_tuple(dom.labels_of(x)));
    }
    return SubKernel(std::move(dom), std::move(cod), std::move(rows));
  }

  [[nodiscard]] const Obj& dom() const noexcept { return dom_; }
  [[nodiscard]] const Obj& cod() const noexcept { return cod_; }
  [[nodiscard]] const std::vector<Row>& rows() const noexcept { return rows_; }
  [[nodiscard]] const Row& row(std::size_t in) const { return rows_.at(in); }

  [[nodiscard]] Rat at(std::size_t in, std::size_t out) const {
    const auto& r = rows_.at(in);
    auto it = std::lower_bound(r.begin(), r.end(), out,
                               [](const Entry& e, std::size_t o) { return e.out < o; });
    return (it != r.end() && it->out == out) ? it->p : Rat();
  }
  [[nodiscard]] Rat at(const Tuple& in, const Tuple& out) const {
    return at(dom_.index_of(in), cod_.index_of(out));
  }

  /// Success probability 1 - f(⊥|in).
  [[nodiscard]] Rat mass(std::size_t in) const {
    Rat m;
    for (const auto& e : rows_.at(in)) m += e.p;
    return m;
  }

  friend bool operator==(const SubKernel&, const SubKernel&) = default;

 private:
  SubKernel(Obj dom, Obj cod, std::vector<Row> rows)
      : dom_(std::move(dom)), cod_(std::move(cod)), rows_(std::move(rows)) {}

  Obj dom_;
  Obj cod_;
  std::vector<Row> rows_;
};

/// Validated construction from a label-addressed table. Inputs missing from
/// the table are all-fail rows.
inline SubKernel make_kernel(const Obj& dom, const Obj& cod, const LabelledTable& table) {
  std::vector<Row> rows(dom.size());
  std::vector<bool> seen(dom.size(), false);
  for (const auto& [in, entries] : table) {
    const std::size_t x = dom.index_of(in);
    if (seen[x]) throw Error(ErrorCode::DuplicateEntry, "input " + format_tuple(in) + " listed twice");
    seen[x] = true;
    for (const auto& [out, p] : entries) {
      if (p.sign() < 0)
        throw Error(ErrorCode::NegativeProbability,
                    "negative probability " + p.str() + " at input " + format_tuple(in));
      rows[x].push_back({cod.index_of(out), p});
    }
  }
  return SubKernel::from_rows(dom, cod, std::move(rows));
}

inline void require_same(const Obj& expected, const Obj& actual, std::string_view what) {
  if (expected != actual)
    throw Error(ErrorCode::TypeMismatch, std::string(what) + ": expected " + expected.describe() +
                                             ", got " + actual.describe());
}

// Sequential composition f ; g.
inline SubKernel compose(const SubKernel& f, const SubKernel& g) {
  require_same(f.cod(), g.dom(), "compose");
  const std::size_t nz = g.cod().size();
  std::vector<Rat> acc(nz);
  std::vector<char> touched(nz, 0);
  std::vector<std::size_t> order;
  std::vector<Row> rows(f.dom().size());
  for (std::size_t x = 0; x < rows.size(); ++x) {
    order.clear();
    for (const auto& [y, p] : f.row(x)) {
      for (const auto& [z, q] : g.row(y)) {
        if (!touched[z]) {
          touched[z] = 1;
          acc[z] = Rat();
          order.push_back(z);
        }
        acc[z] += p * q;
      }
    }
    Row& out = rows[x];
    out.reserve(order.size());
    for (std::size_t z : order) {
      out.push_back({z, acc[z]});
      touched[z] = 0;
    }
  }
  return SubKernel::from_rows(f.dom(), g.cod(), std::move(rows));
}

inline SubKernel tensor(const SubKernel& f, const SubKernel& g) {
  const std::size_t nx2 = g.dom().size();
  const std::size_t ny2 = g.cod().size();
  std::vector<Row> rows(f.dom().size() * nx2);
  for (std::size_t x1 = 0; x1 < f.dom().size(); ++x1) {
    for (std::size_t x2 = 0; x2 < nx2; ++x2) {
      Row& out = rows[x1 * nx2 + x2];
      out.reserve(f.row(x1).size() * g.row(x2).size());
      for (const auto& [y1, p] : f.row(x1))
        for (const auto& [y2, q] : g.row(x2)) out.push_back({y1 * ny2 + y2, p * q});
    }
  }
  return SubKernel::from_rows(tensor(f.dom(), g.dom()), tensor(f.cod(), g.cod()), std::move(rows));
}

namespace detail {

template <class Map>
SubKernel point_kernel(const Obj& dom, const Obj& cod, Map&& map) {
  std::vector<Row> rows(dom.size());
  for (std::size_t x = 0; x < rows.size(); ++x)
    if (std::optional<std::size_t> y = map(x)) rows[x].push_back({*y, Rat(1)});
  return SubKernel::from_rows(dom, cod, std::move(rows));
}

}  // namespace detail

inline SubKernel identity(const Obj& x) {
  return detail::point_kernel(x, x, [](std::size_t i) { return std::optional(i); });
}

/// Braid X ⊗ Y -> Y ⊗ X.
inline SubKernel swap(const Obj& x, const Obj& y) {
  const std::size_t nx = x.size();
  const std::size_t ny = y.size();
  return detail::point_kernel(tensor(x, y), tensor(y, x), [&](std::size_t i) {
    return std::optional(i % ny * nx + i / ny);
  });
}

inline SubKernel copy(const Obj& x) {
  const std::size_t n = x.size();
  return detail::point_kernel(x, tensor(x, x), [n](std::size_t i) { return std::optional(i * n + i); });
}

inline SubKernel discard(const Obj& x) {
  return detail::point_kernel(x, Obj::unit(), [](std::size_t) { return std::optional<std::size_t>(0); });
}

/// Deterministic total state at `point`.
inline SubKernel dirac(const Obj& x, const Tuple& point) {
  const std::size_t p = x.index_of(point);
  return detail::point_kernel(Obj::unit(), x, [p](std::size_t) { return std::optional(p); });
}

/// Comparator X ⊗ X -> X: passes a value through when both copies agree,
/// fails otherwise.
inline SubKernel compare(const Obj& x) {
  const std::size_t n = x.size();
  return detail::point_kernel(tensor(x, x), x, [n](std::size_t i) {
    return i / n == i % n ? std::optional(i / n) : std::nullopt;
  });
}

inline SubKernel failure_probability(const SubKernel& f) { return compose(f, discard(f.cod())); }

inline bool is_total(const SubKernel& f) {
  for (std::size_t x = 0; x < f.dom().size(); ++x)
    if (!f.mass(x).is_one()) return false;
  return true;
}

inline bool is_deterministic(const SubKernel& f) {
  return std::all_of(f.rows().begin(), f.rows().end(), [](const Row& r) {
    return r.empty() || (r.size() == 1 && r.front().p.is_one());
  });
}

inline bool is_quasi_total(const SubKernel& f) {
  for (std::size_t x = 0; x < f.dom().size(); ++x) {
    const Rat m = f.mass(x);
    if (!m.is_zero() && !m.is_one()) return false;
  }
  return true;
}

/// Kernel with no successful outcome anywhere.
inline SubKernel all_fail(const Obj& dom, const Obj& cod) {
  return SubKernel::from_rows(dom, cod, std::vector<Row>(dom.size()));
}

/// Composes a non-empty chain left to right.
inline SubKernel compose_all(std::initializer_list<SubKernel> chain) {
  auto it = chain.begin();
  SubKernel acc = *it;
  for (++it; it != chain.end(); ++it) acc = compose(acc, *it);
  return acc;
}

}  // namespace pmc
