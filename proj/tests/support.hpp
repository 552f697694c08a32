#pragma once

#include <catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "pmc/pmc.hpp"

namespace pmc::test {

inline const Alphabet& bool_alphabet() {
  static const Alphabet b("B", {"t", "f"});
  return b;
}
inline Obj B() { return Obj{bool_alphabet()}; }
inline Obj I() { return Obj::unit(); }

inline SubKernel coin() { return make_kernel(I(), B(), {{{}, {{{"t"}, Rat(1, 2)}, {{"f"}, Rat(1, 2)}}}}); }

inline SubKernel not_gate() {
  return make_kernel(B(), B(), {{{"t"}, {{{"f"}, Rat(1)}}}, {{"f"}, {{{"t"}, Rat(1)}}}});
}

/// t -> (t: 1/2, f: 1/4), f -> (f: 1): fails with probability 1/4 at t.
inline SubKernel leaky() {
  return make_kernel(B(), B(), {{{"t"}, {{{"t"}, Rat(1, 2)}, {{"f"}, Rat(1, 4)}}}, {{"f"}, {{{"f"}, Rat(1)}}}});
}

/// Scalar I -> I with the given mass.
inline SubKernel scalar(const Rat& mass) { return make_kernel(I(), I(), {{{}, {{{}, mass}}}}); }

/// Dense brute-force value table f(y | x) over label tuples.
inline std::vector<std::vector<Rat>> dense(const SubKernel& f) {
  std::vector<std::vector<Rat>> t(f.dom().size(), std::vector<Rat>(f.cod().size()));
  for (std::size_t x = 0; x < f.dom().size(); ++x)
    for (std::size_t y = 0; y < f.cod().size(); ++y) t[x][y] = f.at(f.dom().labels_of(x), f.cod().labels_of(y));
  return t;
}

inline ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a pmc::Error");
  return ErrorCode::ParseError;
}

}  // namespace pmc::test
