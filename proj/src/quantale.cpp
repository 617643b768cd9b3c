#include "laxconf/quantale.hpp"

namespace laxconf {

namespace {

void require_same(const qvalue& a, const qvalue& b) {
  if (a.kind() != b.kind()) {
    throw validation_error(std::string("quantale mismatch: ") + std::string(quantale_name(a.kind())) +
                           " vs " + std::string(quantale_name(b.kind())));
  }
}

const rational kOne(1);

}  // namespace

std::string_view quantale_name(quantale_kind k) {
  switch (k) {
    case quantale_kind::boolean: return "bool";
    case quantale_kind::ext_real: return "extreal";
    case quantale_kind::unit_trunc: return "unit-trunc";
  }
  throw internal_error("unknown quantale kind");
}

quantale_kind parse_quantale(std::string_view name) {
  if (name == "bool") return quantale_kind::boolean;
  if (name == "extreal") return quantale_kind::ext_real;
  if (name == "unit-trunc") return quantale_kind::unit_trunc;
  throw parse_error("unknown quantale '" + std::string(name) + "' (expected bool|extreal|unit-trunc)");
}

qvalue qvalue::boolean(bool b) {
  qvalue v;
  v.kind_ = quantale_kind::boolean;
  v.v_ = rational(b ? 1 : 0);
  return v;
}

qvalue qvalue::ext_real(rational r) {
  if (r.is_negative()) throw validation_error("ext_real value must be nonnegative");
  qvalue v;
  v.kind_ = quantale_kind::ext_real;
  v.v_ = r;
  return v;
}

qvalue qvalue::infinity() {
  qvalue v;
  v.kind_ = quantale_kind::ext_real;
  v.inf_ = true;
  return v;
}

qvalue qvalue::unit_trunc(rational r) {
  if (r.is_negative() || r > kOne) throw validation_error("unit-trunc value must lie in [0,1]");
  qvalue v;
  v.kind_ = quantale_kind::unit_trunc;
  v.v_ = r;
  return v;
}

qvalue qvalue::of(quantale_kind k, const rational& r) {
  switch (k) {
    case quantale_kind::boolean:
      if (r != rational(0) && r != kOne) throw validation_error("boolean value must be 0 or 1");
      return boolean(r == kOne);
    case quantale_kind::ext_real: return ext_real(r);
    case quantale_kind::unit_trunc: return unit_trunc(r);
  }
  throw internal_error("unknown quantale kind");
}

qvalue qvalue::top(quantale_kind k) {
  switch (k) {
    case quantale_kind::boolean: return boolean(true);
    case quantale_kind::ext_real: return ext_real(rational(0));
    case quantale_kind::unit_trunc: return unit_trunc(rational(0));
  }
  throw internal_error("unknown quantale kind");
}

qvalue qvalue::bottom(quantale_kind k) {
  switch (k) {
    case quantale_kind::boolean: return boolean(false);
    case quantale_kind::ext_real: return infinity();
    case quantale_kind::unit_trunc: return unit_trunc(kOne);
  }
  throw internal_error("unknown quantale kind");
}

qvalue qvalue::unit(quantale_kind k) {
  switch (k) {
    case quantale_kind::boolean: return boolean(true);
    case quantale_kind::ext_real: return ext_real(rational(0));
    case quantale_kind::unit_trunc: return unit_trunc(rational(0));
  }
  throw internal_error("unknown quantale kind");
}

const rational& qvalue::finite() const {
  if (inf_) throw validation_error("finite() called on infinity");
  return v_;
}

bool qvalue::truth() const {
  if (kind_ != quantale_kind::boolean) throw validation_error("truth() requires the boolean quantale");
  return v_ == kOne;
}

bool qvalue::is_top() const { return *this == top(kind_); }
bool qvalue::is_bottom() const { return *this == bottom(kind_); }
bool qvalue::is_unit() const { return *this == unit(kind_); }

std::string qvalue::str() const {
  if (inf_) return "inf";
  return v_.str();
}

qvalue qvalue::parse(quantale_kind k, std::string_view text) {
  if (text == "inf") {
    if (k != quantale_kind::ext_real) throw parse_error("'inf' only exists in the extreal quantale");
    return infinity();
  }
  return of(k, rational::parse(text));
}

bool operator==(const qvalue& a, const qvalue& b) {
  return a.kind_ == b.kind_ && a.inf_ == b.inf_ && (a.inf_ || a.v_ == b.v_);
}

qvalue tensor(const qvalue& a, const qvalue& b) {
  require_same(a, b);
  switch (a.kind()) {
    case quantale_kind::boolean: return qvalue::boolean(a.truth() && b.truth());
    case quantale_kind::ext_real:
      if (a.is_inf() || b.is_inf()) return qvalue::infinity();
      return qvalue::ext_real(a.finite() + b.finite());
    case quantale_kind::unit_trunc:
      return qvalue::unit_trunc(min(a.finite() + b.finite(), kOne));
  }
  throw internal_error("unknown quantale kind");
}

qvalue hom(const qvalue& a, const qvalue& b) {
  require_same(a, b);
  switch (a.kind()) {
    case quantale_kind::boolean: return qvalue::boolean(!a.truth() || b.truth());
    case quantale_kind::ext_real:
      // Truncated subtraction b - a, with inf - x = inf and y - inf = 0.
      if (a.is_inf()) return qvalue::ext_real(rational(0));
      if (b.is_inf()) return qvalue::infinity();
      return qvalue::ext_real(max(b.finite() - a.finite(), rational(0)));
    case quantale_kind::unit_trunc:
      return qvalue::unit_trunc(max(b.finite() - a.finite(), rational(0)));
  }
  throw internal_error("unknown quantale kind");
}

bool leq(const qvalue& a, const qvalue& b) {
  require_same(a, b);
  switch (a.kind()) {
    case quantale_kind::boolean: return !a.truth() || b.truth();
    case quantale_kind::ext_real:
      if (a.is_inf()) return true;       // bottom
      if (b.is_inf()) return false;
      return a.finite() >= b.finite();   // reversed numeric order
    case quantale_kind::unit_trunc:
      return a.finite() >= b.finite();
  }
  throw internal_error("unknown quantale kind");
}

qvalue join(const qvalue& a, const qvalue& b) {
  require_same(a, b);
  return leq(a, b) ? b : (leq(b, a) ? a : throw internal_error("non-total quantale order"));
}

qvalue meet(const qvalue& a, const qvalue& b) {
  require_same(a, b);
  return leq(a, b) ? a : (leq(b, a) ? b : throw internal_error("non-total quantale order"));
}

qvalue join(std::span<const qvalue> values, quantale_kind k) {
  qvalue acc = qvalue::bottom(k);
  for (const qvalue& v : values) acc = join(acc, v);
  return acc;
}

qvalue meet(std::span<const qvalue> values, quantale_kind k) {
  qvalue acc = qvalue::top(k);
  for (const qvalue& v : values) acc = meet(acc, v);
  return acc;
}

}  // namespace laxconf
