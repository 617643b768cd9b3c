#pragma once

#include "laxconf/instances.hpp"

namespace laxconf {

enum class extension_kind { wasserstein_exact, wasserstein_lax, kantorovich, closed_form };

enum class closed_form_id {
  sim_step,            // quantified step formula per order variant (lts_pow)
  modal_refine_step,   // the two refinement clauses (mts)
  stream_tensor,       // label distance plus relation value (stream)
  mlmc_tiered,         // four-layer network realization (mlmc)
  edit_distance_dp,    // textbook alignment recurrence (list)
  unbalanced_transport // slack network (monoid_val)
};

// Sample of predicate values used to approximate the infimum over all
// real-valued predicates in the Kantorovich engine. Always contains top,
// bottom and the unit.
struct grid_spec {
  std::vector<qvalue> values;

  static grid_spec standard(quantale_kind k);
  void validate(quantale_kind k) const;
};

struct extension {
  extension_kind kind = extension_kind::wasserstein_lax;
  functor_instance instance;
  lifting lift_id;                // wasserstein engines
  std::vector<lifting> kliftings; // kantorovich engine
  grid_spec grid;                 // kantorovich engine, real quantales
  closed_form_id closed = closed_form_id::sim_step;

  static extension wasserstein_exact(functor_instance inst);
  static extension wasserstein_lax(functor_instance inst);
  static extension kantorovich(functor_instance inst);  // shipped dual lifting set
  static extension kantorovich(functor_instance inst, std::vector<lifting> lifts, grid_spec grid);
  static extension closed_form_for(functor_instance inst);  // matching closed form
};

// The lifting sets for which a Kantorovich representation is shipped:
// diamond for the subset order, box for the superset order, both for the
// discrete order, and the label-shifted diamonds for streams.
std::vector<lifting> dual_liftings(const functor_instance& inst);

// Complete enumeration of exact couplings of t1 and t2, as elements over
// product_carrier(x, y). Weight-valued kinds enumerate the grid couplings on
// the common denominator lattice, which contains every vertex of the
// coupling polytope.
std::vector<functor_element> couplings(const functor_instance& inst, const functor_element& t1,
                                       const carrier& x, const functor_element& t2, const carrier& y,
                                       const element_limits& limits = {});

// Join over exact couplings of the lifted relation; transport-backed for the
// weight-valued kinds.
qvalue wasserstein_exact(const extension& ext, const vrel& r, const functor_element& t1,
                         const functor_element& t2, const element_limits& limits = {});

// Same value through coupling enumeration regardless of kind (oracle route).
qvalue wasserstein_exact_enumerated(const extension& ext, const vrel& r, const functor_element& t1,
                                    const functor_element& t2, const element_limits& limits = {});

// Witness-reporting mode: one coupling attaining the exact optimum, chosen
// as the lexicographically least serialized optimizer so reruns are
// reproducible. Absent when no coupling exists.
std::optional<functor_element> optimal_coupling(const extension& ext, const vrel& r,
                                                const functor_element& t1, const functor_element& t2,
                                                const element_limits& limits = {});

// Lax-coupling optimum: structure cost on the left, exact coupling in the
// middle, structure cost on the right.
qvalue wasserstein_lax(const extension& ext, const vrel& r, const functor_element& t1,
                       const functor_element& t2, const element_limits& limits = {});

// Oracle route for the lax engine: explicit relational composition of the
// structure, the exact engine, and the structure over supplied element pools.
qvalue wasserstein_lax_pooled(const extension& ext, const vrel& r, const functor_element& t1,
                              const functor_element& t2, const std::vector<functor_element>& pool1,
                              const std::vector<functor_element>& pool2, const element_limits& limits = {});

// Meet over lifted predicates; exact over the boolean quantale, grid-sampled
// otherwise (the sampled meet sits above the true value in the quantale
// order, i.e. it under-reports distances).
qvalue kantorovich(const extension& ext, const vrel& r, const functor_element& t1,
                   const functor_element& t2, const element_limits& limits = {});

qvalue closed_form(const extension& ext, const vrel& r, const functor_element& t1,
                   const functor_element& t2, const element_limits& limits = {});

qvalue apply_extension(const extension& ext, const vrel& r, const functor_element& t1,
                       const functor_element& t2, const element_limits& limits = {});

}  // namespace laxconf
