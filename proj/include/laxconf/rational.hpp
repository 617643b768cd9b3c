#pragma once

#include <cstdint>
#include <compare>
#include <string>
#include <string_view>

#include "laxconf/error.hpp"

namespace laxconf {

// Exact rational number on 64-bit numerator/denominator, kept normalized
// (gcd(num, den) == 1, den > 0). Intermediate products run through 128-bit
// integers; results that do not fit back into 64 bits raise cap_error, so
// arithmetic never silently loses exactness.
class rational {
 public:
  constexpr rational() : num_(0), den_(1) {}
  rational(long long n) : num_(n), den_(1) {}
  rational(long long n, long long d);

  // Accepts "p", "-p", "p/q" with optional whitespace.
  static rational parse(std::string_view text);

  // Nearest rational with denominator <= max_den (Stern-Brocot walk).
  // This is the documented conversion applied at the --allow-float boundary.
  static rational from_double(double x, long long max_den = 1000000);

  long long num() const { return num_; }
  long long den() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }

  std::string str() const;
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend rational operator+(const rational& a, const rational& b);
  friend rational operator-(const rational& a, const rational& b);
  friend rational operator*(const rational& a, const rational& b);
  friend rational operator/(const rational& a, const rational& b);
  rational operator-() const;
  rational& operator+=(const rational& b) { return *this = *this + b; }
  rational& operator-=(const rational& b) { return *this = *this - b; }
  rational& operator*=(const rational& b) { return *this = *this * b; }
  rational& operator/=(const rational& b) { return *this = *this / b; }

  friend bool operator==(const rational& a, const rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const rational& a, const rational& b);

 private:
  static rational make(__int128 n, __int128 d);
  long long num_;
  long long den_;
};

rational min(const rational& a, const rational& b);
rational max(const rational& a, const rational& b);

}  // namespace laxconf
