#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "pmc/error.hpp"

namespace pmc {

/// Exact rational number, always kept in canonical (reduced) form.
class Rat {
 public:
  Rat() = default;
  Rat(long numerator) : value_(numerator) {}  // NOLINT(google-explicit-constructor)
  Rat(long numerator, long denominator) {
    if (denominator == 0) throw Error(ErrorCode::ParseError, "zero denominator");
    value_ = mpq_class(numerator, denominator);
    value_.canonicalize();
  }
  explicit Rat(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

  /// Parses "n" or "n/d" (optionally signed, d > 0).
  static Rat parse(std::string_view text) {
    auto fail = [&] {
      return Error(ErrorCode::ParseError, "invalid rational '" + std::string(text) + "'");
    };
    if (text.empty()) throw fail();
    const auto slash = text.find('/');
    auto digits_ok = [](std::string_view part, bool allow_sign) {
      if (allow_sign && !part.empty() && part.front() == '-') part.remove_prefix(1);
      if (part.empty()) return false;
      for (char c : part)
        if (c < '0' || c > '9') return false;
      return true;
    };
    if (slash == std::string_view::npos) {
      if (!digits_ok(text, true)) throw fail();
      return Rat(mpq_class(mpz_class(std::string(text), 10)));
    }
    const auto num = text.substr(0, slash);
    const auto den = text.substr(slash + 1);
    if (!digits_ok(num, true) || !digits_ok(den, false)) throw fail();
    mpz_class d(std::string(den), 10);
    if (d == 0) throw fail();
    return Rat(mpq_class(mpz_class(std::string(num), 10), d));
  }

  /// "n" for integers, "n/d" otherwise.
  [[nodiscard]] std::string str() const {
    if (value_.get_den() == 1) return value_.get_num().get_str();
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
  }

  [[nodiscard]] const mpq_class& value() const noexcept { return value_; }
  [[nodiscard]] bool is_zero() const { return sgn(value_) == 0; }
  [[nodiscard]] bool is_one() const { return value_ == 1; }
  [[nodiscard]] int sign() const { return sgn(value_); }
  [[nodiscard]] double to_double() const { return value_.get_d(); }

  Rat& operator+=(const Rat& o) { value_ += o.value_; return *this; }
  Rat& operator-=(const Rat& o) { value_ -= o.value_; return *this; }
  Rat& operator*=(const Rat& o) { value_ *= o.value_; return *this; }
  Rat& operator/=(const Rat& o) {
    if (o.is_zero()) throw Error(ErrorCode::BadParameter, "division by zero");
    value_ /= o.value_;
    return *this;
  }

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
  friend Rat operator-(const Rat& a) { return Rat(mpq_class(-a.value_)); }

  friend bool operator==(const Rat& a, const Rat& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

 private:
  mpq_class value_{0};
};

}  // namespace pmc
