#include "laxconf/rational.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace laxconf {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

long long narrow(__int128 v) {
  if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min()) {
    throw cap_error("rational arithmetic overflow: value outside 64-bit range");
  }
  return static_cast<long long>(v);
}

long long parse_ll(std::string_view s) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw parse_error("invalid integer literal: '" + std::string(s) + "'");
  }
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

rational rational::make(__int128 n, __int128 d) {
  if (d == 0) throw validation_error("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  rational r;
  r.num_ = narrow(n);
  r.den_ = narrow(d);
  return r;
}

rational::rational(long long n, long long d) { *this = make(n, d); }

rational rational::parse(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw parse_error("empty rational literal");
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return rational(parse_ll(text));
  }
  long long n = parse_ll(trim(text.substr(0, slash)));
  long long d = parse_ll(trim(text.substr(slash + 1)));
  if (d == 0) throw parse_error("rational literal with zero denominator");
  return rational(n, d);
}

rational rational::from_double(double x, long long max_den) {
  if (!std::isfinite(x)) throw validation_error("cannot convert non-finite double to rational");
  bool neg = x < 0;
  if (neg) x = -x;
  // Stern-Brocot / continued-fraction best approximation with bounded denominator.
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = x;
  for (int it = 0; it < 64; ++it) {
    double ip = std::floor(frac);
    if (ip > static_cast<double>(std::numeric_limits<long long>::max() / 4)) break;
    long long a = static_cast<long long>(ip);
    __int128 p2 = static_cast<__int128>(a) * p1 + p0;
    __int128 q2 = static_cast<__int128>(a) * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = narrow(p2);
    q1 = narrow(q2);
    double rem = frac - ip;
    if (rem < 1e-15) break;
    frac = 1.0 / rem;
  }
  if (q1 == 0) throw validation_error("double out of representable rational range");
  return rational(neg ? -p1 : p1, q1);
}

std::string rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

rational operator+(const rational& a, const rational& b) {
  return rational::make(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                        static_cast<__int128>(a.den_) * b.den_);
}

rational operator-(const rational& a, const rational& b) {
  return rational::make(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                        static_cast<__int128>(a.den_) * b.den_);
}

rational operator*(const rational& a, const rational& b) {
  return rational::make(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

rational operator/(const rational& a, const rational& b) {
  if (b.num_ == 0) throw validation_error("rational division by zero");
  return rational::make(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
}

rational rational::operator-() const {
  rational r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

std::strong_ordering operator<=>(const rational& a, const rational& b) {
  __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
  __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

rational min(const rational& a, const rational& b) { return a <= b ? a : b; }
rational max(const rational& a, const rational& b) { return a >= b ? a : b; }

}  // namespace laxconf
