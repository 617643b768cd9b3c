#include "laxconf/conformance.hpp"

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace laxconf {

void require_compatible(const coalgebra& a, const coalgebra& b, const extension& ext) {
  if (a.instance.kind != b.instance.kind || a.instance.kind != ext.instance.kind) {
    throw validation_error("coalgebras and extension must agree on the instance kind");
  }
  if (a.instance.labels.labels != b.instance.labels.labels ||
      a.instance.labels.labels != ext.instance.labels.labels) {
    throw validation_error("coalgebras and extension must agree on the label set");
  }
  if (a.instance.kind == functor_kind::lts_pow &&
      (a.instance.order != b.instance.order || a.instance.order != ext.instance.order)) {
    throw validation_error("coalgebras and extension must agree on the order variant");
  }
  if (a.instance.kind == functor_kind::monoid_val && a.instance.monoid != b.instance.monoid) {
    throw validation_error("coalgebras must agree on the weight monoid");
  }
}

vrel fixpoint_step_serial(const coalgebra& a, const coalgebra& b, const extension& ext, const vrel& current,
                          const element_limits& limits) {
  vrel out(a.states, b.states, current.kind(), qvalue::bottom(current.kind()));
  for (std::size_t x = 0; x < a.states.size(); ++x) {
    for (std::size_t y = 0; y < b.states.size(); ++y) {
      out.set(x, y, apply_extension(ext, current, a.structure[x], b.structure[y], limits));
    }
  }
  return out;
}

vrel fixpoint_step_parallel(const coalgebra& a, const coalgebra& b, const extension& ext, const vrel& current,
                            const element_limits& limits) {
  const std::size_t nx = a.states.size(), ny = b.states.size();
  std::vector<qvalue> cells(nx * ny);
  std::exception_ptr failure;

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long long idx = 0; idx < static_cast<long long>(nx * ny); ++idx) {
    try {
      std::size_t x = static_cast<std::size_t>(idx) / ny;
      std::size_t y = static_cast<std::size_t>(idx) % ny;
      cells[idx] = apply_extension(ext, current, a.structure[x], b.structure[y], limits);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      {
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);

  vrel out(a.states, b.states, current.kind(), qvalue::bottom(current.kind()));
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) out.set(x, y, cells[x * ny + y]);
  }
  return out;
}

bool is_simulation(const coalgebra& a, const coalgebra& b, const extension& ext, const vrel& r,
                   const element_limits& limits) {
  require_compatible(a, b, ext);
  if (r.src() != a.states || r.tgt() != b.states) throw validation_error("relation carriers must match the state spaces");
  for (std::size_t x = 0; x < a.states.size(); ++x) {
    for (std::size_t y = 0; y < b.states.size(); ++y) {
      const qvalue& v = r.at(x, y);
      if (v.is_bottom()) continue;  // bottom is below everything
      qvalue step = apply_extension(ext, r, a.structure[x], b.structure[y], limits);
      if (!leq(v, step)) return false;
    }
  }
  return true;
}

namespace {

bool within_tolerance(const vrel& a, const vrel& b, const qvalue& tol) {
  if (tol.kind() == quantale_kind::ext_real && !tol.is_inf() && tol.finite().is_zero()) return a == b;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a.kind() != quantale_kind::ext_real) {
        if (a.at(i, j) != b.at(i, j)) return false;
        continue;
      }
      // both directions of the hom gap within the slack
      if (!leq(hom(a.at(i, j), b.at(i, j)), tol) || !leq(hom(b.at(i, j), a.at(i, j)), tol)) return false;
    }
  }
  return true;
}

}  // namespace

distance_report behavioural_distance(const coalgebra& a, const coalgebra& b, const extension& ext,
                                     const fixpoint_config& cfg, const element_limits& limits) {
  require_compatible(a, b, ext);
  a.validate();
  b.validate();
  const quantale_kind q = ext.instance.value_kind();

  vrel current = vrel::constant(a.states, b.states, qvalue::top(q));
  distance_report rep{current, 0, false, false, {}};

  for (long long it = 0; it < cfg.max_iterations; ++it) {
    try {
      vrel stepped = cfg.parallel ? fixpoint_step_parallel(a, b, ext, current, limits)
                                  : fixpoint_step_serial(a, b, ext, current, limits);
      vrel next = meet_rel(current, stepped);
      if (!leq_rel(next, current)) throw internal_error("fixpoint iteration failed to descend");
      ++rep.iterations;
      if (within_tolerance(next, current, cfg.tolerance)) {
        rep.distances = next;
        rep.converged_exact = (next == current);
        return rep;
      }
      current = std::move(next);
    } catch (const cap_error& e) {
      // divergent chains can exhaust exact arithmetic before the iteration
      // cap; report the last completed iterate, flagged
      rep.distances = current;
      rep.iteration_capped = true;
      rep.note = e.what();
      return rep;
    }
  }
  rep.distances = current;
  rep.iteration_capped = true;
  rep.note = "iteration budget exhausted before reaching a fixpoint";
  return rep;
}

}  // namespace laxconf
