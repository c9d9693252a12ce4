#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "mmsfair/errors.hpp"

namespace mmsfair {

/// Exact arbitrary-precision rational. Always kept in lowest terms with a
/// positive denominator; no operation ever rounds.
class Value {
 public:
  Value() = default;
  Value(int v) : q_(static_cast<long>(v)) {}  // NOLINT: implicit by design of literals
  Value(long v) : q_(v) {}                   // NOLINT
  Value(long long v) : q_(static_cast<long>(v)) {}  // NOLINT
  Value(unsigned long v) : q_(v) {}          // NOLINT

  Value(long num, long den) {
    if (den == 0) throw ValidationError("value", "zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }

  static Value from_mpq(mpq_class q) {
    q.canonicalize();
    Value v;
    v.q_ = std::move(q);
    return v;
  }

  static Value from_integers(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw ValidationError("value", "zero denominator");
    mpq_class q(num, den);
    return from_mpq(std::move(q));
  }

  /// Accepts "p", "-p", "p/q" with decimal integers. Whitespace is rejected.
  static Value parse(std::string_view text) {
    auto digits = [](std::string_view s, bool allow_sign) {
      if (allow_sign && !s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
      if (s.empty()) return false;
      for (char c : s) {
        if (c < '0' || c > '9') return false;
      }
      return true;
    };
    const auto slash = text.find('/');
    const std::string_view num = text.substr(0, slash);
    const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!digits(num, true) || !digits(den, false)) {
      throw ValidationError("value", "cannot parse rational '" + std::string(text) + "'");
    }
    std::string num_s(num);
    if (num_s.front() == '+') num_s.erase(0, 1);
    return from_integers(mpz_class(num_s, 10), mpz_class(std::string(den), 10));
  }

  /// Lowest-terms "p/q" (denominator always present).
  std::string str() const { return numerator().get_str() + "/" + denominator().get_str(); }

  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }
  const mpq_class& raw() const noexcept { return q_; }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sign() == 0; }
  double to_double() const { return q_.get_d(); }

  Value& operator+=(const Value& o) { q_ += o.q_; return *this; }
  Value& operator-=(const Value& o) { q_ -= o.q_; return *this; }
  Value& operator*=(const Value& o) { q_ *= o.q_; return *this; }
  Value& operator/=(const Value& o) {
    if (o.is_zero()) throw ContractError("division of a rational by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Value operator+(Value a, const Value& b) { return a += b; }
  friend Value operator-(Value a, const Value& b) { return a -= b; }
  friend Value operator*(Value a, const Value& b) { return a *= b; }
  friend Value operator/(Value a, const Value& b) { return a /= b; }
  friend Value operator-(Value a) {
    a.q_ = -a.q_;
    return a;
  }

  friend bool operator==(const Value& a, const Value& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Value& a, const Value& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Value& v) { return os << v.str(); }

 private:
  mpq_class q_{0};
};

inline Value min(const Value& a, const Value& b) { return b < a ? b : a; }
inline Value max(const Value& a, const Value& b) { return a < b ? b : a; }

}  // namespace mmsfair
