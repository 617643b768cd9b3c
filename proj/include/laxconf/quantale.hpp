#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "laxconf/rational.hpp"

namespace laxconf {

// The three value algebras. All relations, distances and verdicts in this
// library are valued in one of them:
//   boolean    : {0,1}, 0 below 1, tensor = and, unit 1.
//   ext_real   : [0,inf] with the numeric order REVERSED (a below b iff
//                a >= b numerically), tensor = extended addition, unit 0.
//                Top is 0, bottom is inf.
//   unit_trunc : [0,1] with the reversed numeric order, tensor = truncated
//                addition min(a+b,1), unit 0.
enum class quantale_kind { boolean, ext_real, unit_trunc };

std::string_view quantale_name(quantale_kind k);           // "bool" | "extreal" | "unit-trunc"
quantale_kind parse_quantale(std::string_view name);

// One element of a fixed quantale. Infinity is an explicit tag, never a
// sentinel float; the finite part is an exact rational.
class qvalue {
 public:
  qvalue() : kind_(quantale_kind::boolean), inf_(false), v_(0) {}

  static qvalue boolean(bool b);
  static qvalue ext_real(rational r);
  static qvalue infinity();  // bottom of ext_real
  static qvalue unit_trunc(rational r);
  static qvalue of(quantale_kind k, const rational& r);  // carrier-checked finite value

  static qvalue top(quantale_kind k);
  static qvalue bottom(quantale_kind k);
  static qvalue unit(quantale_kind k);

  quantale_kind kind() const { return kind_; }
  bool is_inf() const { return inf_; }
  const rational& finite() const;
  bool truth() const;  // boolean only

  bool is_top() const;
  bool is_bottom() const;
  bool is_unit() const;

  // "0"/"1" for boolean, "p/q" or "inf" otherwise.
  std::string str() const;
  static qvalue parse(quantale_kind k, std::string_view text);

  friend bool operator==(const qvalue& a, const qvalue& b);
  friend bool operator!=(const qvalue& a, const qvalue& b) { return !(a == b); }

 private:
  quantale_kind kind_;
  bool inf_;
  rational v_;
};

// Monoid operation of the quantale.
qvalue tensor(const qvalue& a, const qvalue& b);

// Right adjoint of tensor: tensor(a,c) below b  iff  c below hom(a,b).
qvalue hom(const qvalue& a, const qvalue& b);

// Quantale order (below-or-equal).
bool leq(const qvalue& a, const qvalue& b);

qvalue join(std::span<const qvalue> values, quantale_kind k);  // join({}) = bottom
qvalue meet(std::span<const qvalue> values, quantale_kind k);  // meet({}) = top
qvalue join(const qvalue& a, const qvalue& b);
qvalue meet(const qvalue& a, const qvalue& b);

inline qvalue join(const std::vector<qvalue>& values, quantale_kind k) {
  return join(std::span<const qvalue>(values), k);
}
inline qvalue meet(const std::vector<qvalue>& values, quantale_kind k) {
  return meet(std::span<const qvalue>(values), k);
}

}  // namespace laxconf
