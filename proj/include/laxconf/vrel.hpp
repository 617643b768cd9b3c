#pragma once

#include <optional>
#include <string>
#include <vector>

#include "laxconf/quantale.hpp"

namespace laxconf {

// A finite, ordered set of named elements. Relations and coalgebras address
// elements by index; keys only surface at the JSON boundary.
struct carrier {
  std::string id;
  std::vector<std::string> keys;

  carrier() = default;
  carrier(std::string id_, std::vector<std::string> keys_);

  std::size_t size() const { return keys.size(); }
  int index_of(std::string_view key) const;  // throws validation_error if absent

  friend bool operator==(const carrier& a, const carrier& b) { return a.keys == b.keys; }
  friend bool operator!=(const carrier& a, const carrier& b) { return !(a == b); }
};

// Pairs every key of a with every key of b, row-major: index = i*|b| + j.
carrier product_carrier(const carrier& a, const carrier& b);

// A total map X -> Y, as target indices per source index.
using set_map = std::vector<int>;

set_map identity_map(std::size_t n);
set_map compose_maps(const set_map& g, const set_map& f);  // g after f
bool is_surjective(const set_map& f, std::size_t target_size);

// Dense quantale-valued matrix between two carriers.
class vrel {
 public:
  vrel() = default;
  vrel(carrier src, carrier tgt, quantale_kind q, const qvalue& fill);
  static vrel delta(const carrier& x, quantale_kind q);
  static vrel constant(const carrier& src, const carrier& tgt, const qvalue& v);

  const carrier& src() const { return src_; }
  const carrier& tgt() const { return tgt_; }
  quantale_kind kind() const { return q_; }
  std::size_t rows() const { return src_.size(); }
  std::size_t cols() const { return tgt_.size(); }

  const qvalue& at(std::size_t i, std::size_t j) const { return m_[i * tgt_.size() + j]; }
  void set(std::size_t i, std::size_t j, const qvalue& v);

  friend bool operator==(const vrel& a, const vrel& b);
  friend bool operator!=(const vrel& a, const vrel& b) { return !(a == b); }

 private:
  carrier src_, tgt_;
  quantale_kind q_ = quantale_kind::boolean;
  std::vector<qvalue> m_;
};

// (s . r)(x,z) = join over y of tensor(r(x,y), s(y,z)); r first, then s.
vrel compose(const vrel& s, const vrel& r);
vrel converse(const vrel& r);

vrel graph_rel(const set_map& f, const carrier& x, const carrier& y, quantale_kind q);
vrel cograph_rel(const set_map& f, const carrier& x, const carrier& y, quantale_kind q);

// Diagonal relation with entries g(y) on the diagonal, bottom elsewhere.
vrel diag(const std::vector<qvalue>& g, const carrier& y, quantale_kind q);

// r[f](b) = join over a of tensor(f(a), r(a,b)).
std::vector<qvalue> rel_image(const vrel& r, const std::vector<qvalue>& f);

bool leq_rel(const vrel& a, const vrel& b);  // pointwise order
vrel meet_rel(const vrel& a, const vrel& b);

struct vcat_report {
  bool reflexive = false;
  bool transitive = false;
  bool symmetric = false;
  bool separated = false;
};

vcat_report check_vcategory(const vrel& d);  // throws on non-square input

// A reflexive, transitive endorelation (preorder / hemimetric depending on
// the quantale).
class vcat {
 public:
  vcat() = default;
  static vcat checked(vrel d);   // validates reflexivity + transitivity
  static vcat trusted(vrel d);   // caller guarantees the invariants
  static vcat discrete(const carrier& x, quantale_kind q);

  const vrel& rel() const { return d_; }
  const carrier& base() const { return d_.src(); }
  quantale_kind kind() const { return d_.kind(); }

 private:
  vrel d_;
};

// Condition: r.dx below r and dy.r below r.
bool is_distributor(const vrel& r, const vcat& dx, const vcat& dy);

// Four equivalent formulations of the distributor condition, evaluated
// independently so their agreement can be asserted.
struct distributor_agreement {
  bool absorb_inequality = false;  // r.dx below r and dy.r below r
  bool absorb_equality = false;    // r.dx == r and dy.r == r
  bool hom_functorial = false;     // tensor(dx(x',x), dy(y,y')) below hom(r(x,y), r(x',y'))
  bool glued_category = false;     // the glued endorelation on X+Y is a vcat
  bool agree() const {
    return absorb_inequality == absorb_equality && absorb_equality == hom_functorial &&
           hom_functorial == glued_category;
  }
  bool verdict() const { return absorb_inequality; }
};

distributor_agreement check_distributor_consistent(const vrel& r, const vcat& dx, const vcat& dy);

}  // namespace laxconf
