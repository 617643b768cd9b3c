#include "laxconf/vrel.hpp"

#include <algorithm>
#include <unordered_set>

namespace laxconf {

namespace {

void require_same_kind(const vrel& a, const vrel& b) {
  if (a.kind() != b.kind()) throw validation_error("quantale mismatch between relations");
}

void require_square(const vrel& d) {
  if (d.src() != d.tgt()) throw validation_error("endorelation expected (source != target)");
}

}  // namespace

carrier::carrier(std::string id_, std::vector<std::string> keys_) : id(std::move(id_)), keys(std::move(keys_)) {
  std::unordered_set<std::string> seen;
  for (const auto& k : keys) {
    if (!seen.insert(k).second) throw validation_error("duplicate key '" + k + "' in carrier '" + id + "'");
  }
}

int carrier::index_of(std::string_view key) const {
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (keys[i] == key) return static_cast<int>(i);
  }
  throw validation_error("key '" + std::string(key) + "' not in carrier '" + id + "'");
}

carrier product_carrier(const carrier& a, const carrier& b) {
  std::vector<std::string> keys;
  keys.reserve(a.size() * b.size());
  for (const auto& ka : a.keys) {
    for (const auto& kb : b.keys) {
      // \x1f keeps pair keys injective even when element keys contain separators.
      keys.push_back(ka + '\x1f' + kb);
    }
  }
  return carrier(a.id + "*" + b.id, std::move(keys));
}

set_map identity_map(std::size_t n) {
  set_map f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = static_cast<int>(i);
  return f;
}

set_map compose_maps(const set_map& g, const set_map& f) {
  set_map h(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] < 0 || static_cast<std::size_t>(f[i]) >= g.size()) {
      throw validation_error("map composition: intermediate index out of range");
    }
    h[i] = g[f[i]];
  }
  return h;
}

bool is_surjective(const set_map& f, std::size_t target_size) {
  std::vector<bool> hit(target_size, false);
  for (int y : f) {
    if (y < 0 || static_cast<std::size_t>(y) >= target_size) return false;
    hit[y] = true;
  }
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

vrel::vrel(carrier src, carrier tgt, quantale_kind q, const qvalue& fill)
    : src_(std::move(src)), tgt_(std::move(tgt)), q_(q), m_(src_.size() * tgt_.size(), fill) {
  if (fill.kind() != q) throw validation_error("fill value from wrong quantale");
}

vrel vrel::delta(const carrier& x, quantale_kind q) {
  vrel d(x, x, q, qvalue::bottom(q));
  for (std::size_t i = 0; i < x.size(); ++i) d.set(i, i, qvalue::unit(q));
  return d;
}

vrel vrel::constant(const carrier& src, const carrier& tgt, const qvalue& v) {
  return vrel(src, tgt, v.kind(), v);
}

void vrel::set(std::size_t i, std::size_t j, const qvalue& v) {
  if (v.kind() != q_) throw validation_error("entry from wrong quantale");
  m_[i * tgt_.size() + j] = v;
}

bool operator==(const vrel& a, const vrel& b) {
  return a.q_ == b.q_ && a.src_ == b.src_ && a.tgt_ == b.tgt_ && a.m_ == b.m_;
}

vrel compose(const vrel& s, const vrel& r) {
  require_same_kind(s, r);
  if (r.tgt() != s.src()) throw validation_error("carrier mismatch in composition");
  vrel out(r.src(), s.tgt(), r.kind(), qvalue::bottom(r.kind()));
  for (std::size_t x = 0; x < r.rows(); ++x) {
    for (std::size_t z = 0; z < s.cols(); ++z) {
      qvalue acc = qvalue::bottom(r.kind());
      for (std::size_t y = 0; y < r.cols(); ++y) {
        acc = join(acc, tensor(r.at(x, y), s.at(y, z)));
      }
      out.set(x, z, acc);
    }
  }
  return out;
}

vrel converse(const vrel& r) {
  vrel out(r.tgt(), r.src(), r.kind(), qvalue::bottom(r.kind()));
  for (std::size_t i = 0; i < r.rows(); ++i) {
    for (std::size_t j = 0; j < r.cols(); ++j) out.set(j, i, r.at(i, j));
  }
  return out;
}

vrel graph_rel(const set_map& f, const carrier& x, const carrier& y, quantale_kind q) {
  if (f.size() != x.size()) throw validation_error("graph: map size != source carrier size");
  vrel out(x, y, q, qvalue::bottom(q));
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] < 0 || static_cast<std::size_t>(f[i]) >= y.size()) {
      throw validation_error("graph: map value outside target carrier");
    }
    out.set(i, static_cast<std::size_t>(f[i]), qvalue::unit(q));
  }
  return out;
}

vrel cograph_rel(const set_map& f, const carrier& x, const carrier& y, quantale_kind q) {
  return converse(graph_rel(f, x, y, q));
}

vrel diag(const std::vector<qvalue>& g, const carrier& y, quantale_kind q) {
  if (g.size() != y.size()) throw validation_error("diag: predicate size != carrier size");
  vrel out(y, y, q, qvalue::bottom(q));
  for (std::size_t i = 0; i < g.size(); ++i) out.set(i, i, g[i]);
  return out;
}

std::vector<qvalue> rel_image(const vrel& r, const std::vector<qvalue>& f) {
  if (f.size() != r.rows()) throw validation_error("rel_image: predicate size != source size");
  std::vector<qvalue> out(r.cols(), qvalue::bottom(r.kind()));
  for (std::size_t b = 0; b < r.cols(); ++b) {
    qvalue acc = qvalue::bottom(r.kind());
    for (std::size_t a = 0; a < r.rows(); ++a) acc = join(acc, tensor(f[a], r.at(a, b)));
    out[b] = acc;
  }
  return out;
}

bool leq_rel(const vrel& a, const vrel& b) {
  require_same_kind(a, b);
  if (a.src() != b.src() || a.tgt() != b.tgt()) throw validation_error("carrier mismatch in relation order");
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (!leq(a.at(i, j), b.at(i, j))) return false;
    }
  }
  return true;
}

vrel meet_rel(const vrel& a, const vrel& b) {
  require_same_kind(a, b);
  if (a.src() != b.src() || a.tgt() != b.tgt()) throw validation_error("carrier mismatch in relation meet");
  vrel out(a.src(), a.tgt(), a.kind(), qvalue::bottom(a.kind()));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out.set(i, j, meet(a.at(i, j), b.at(i, j)));
  }
  return out;
}

vcat_report check_vcategory(const vrel& d) {
  require_square(d);
  vcat_report rep;
  const std::size_t n = d.rows();
  const qvalue k = qvalue::unit(d.kind());

  rep.reflexive = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (!leq(k, d.at(i, i))) rep.reflexive = false;
  }
  rep.transitive = leq_rel(compose(d, d), d);
  rep.symmetric = leq_rel(converse(d), d);
  rep.separated = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && leq(k, d.at(i, j))) rep.separated = false;
    }
  }
  return rep;
}

vcat vcat::checked(vrel d) {
  vcat_report rep = check_vcategory(d);
  if (!rep.reflexive || !rep.transitive) {
    throw validation_error("relation is not reflexive+transitive");
  }
  vcat c;
  c.d_ = std::move(d);
  return c;
}

vcat vcat::trusted(vrel d) {
  vcat c;
  c.d_ = std::move(d);
  return c;
}

vcat vcat::discrete(const carrier& x, quantale_kind q) { return trusted(vrel::delta(x, q)); }

bool is_distributor(const vrel& r, const vcat& dx, const vcat& dy) {
  if (r.src() != dx.base() || r.tgt() != dy.base()) throw validation_error("carrier mismatch in distributor check");
  return leq_rel(compose(r, dx.rel()), r) && leq_rel(compose(dy.rel(), r), r);
}

distributor_agreement check_distributor_consistent(const vrel& r, const vcat& dx, const vcat& dy) {
  if (r.src() != dx.base() || r.tgt() != dy.base()) throw validation_error("carrier mismatch in distributor check");
  distributor_agreement out;

  const vrel rdx = compose(r, dx.rel());
  const vrel dyr = compose(dy.rel(), r);
  out.absorb_inequality = leq_rel(rdx, r) && leq_rel(dyr, r);
  out.absorb_equality = (rdx == r) && (dyr == r);

  out.hom_functorial = true;
  const std::size_t nx = r.rows(), ny = r.cols();
  for (std::size_t x = 0; x < nx && out.hom_functorial; ++x) {
    for (std::size_t xp = 0; xp < nx && out.hom_functorial; ++xp) {
      for (std::size_t y = 0; y < ny && out.hom_functorial; ++y) {
        for (std::size_t yp = 0; yp < ny; ++yp) {
          // converse(dx)(x,x') = dx(x',x)
          qvalue lhs = tensor(dx.rel().at(xp, x), dy.rel().at(y, yp));
          if (!leq(lhs, hom(r.at(x, y), r.at(xp, yp)))) {
            out.hom_functorial = false;
            break;
          }
        }
      }
    }
  }

  // Glue X and Y into one carrier and check the combined endorelation.
  std::vector<std::string> keys;
  for (const auto& k : r.src().keys) keys.push_back("L\x1f" + k);
  for (const auto& k : r.tgt().keys) keys.push_back("R\x1f" + k);
  carrier glued("glued", std::move(keys));
  vrel s(glued, glued, r.kind(), qvalue::bottom(r.kind()));
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < nx; ++j) s.set(i, j, dx.rel().at(i, j));
  }
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) s.set(i, nx + j, r.at(i, j));
  }
  for (std::size_t i = 0; i < ny; ++i) {
    for (std::size_t j = 0; j < ny; ++j) s.set(nx + i, nx + j, dy.rel().at(i, j));
  }
  vcat_report rep = check_vcategory(s);
  out.glued_category = rep.reflexive && rep.transitive;

  return out;
}

}  // namespace laxconf
