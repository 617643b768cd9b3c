#pragma once

#include "laxconf/extensions.hpp"

namespace laxconf {

struct fixpoint_config {
  long long max_iterations = 10000;
  // convergence slack compared with hom; exact zero with rational data
  qvalue tolerance = qvalue::ext_real(rational(0));
  bool convergence_report = true;
  bool parallel = true;  // OpenMP step kernel when built with OpenMP
};

struct distance_report {
  vrel distances;
  long long iterations = 0;
  bool converged_exact = false;  // fixpoint reached (successive iterates equal)
  bool iteration_capped = false; // stopped early; the result is an upper bound
                                 // in the quantale order (distances possibly
                                 // under-reported)
  std::string note;              // why the run stopped early, if it did
};

void require_compatible(const coalgebra& a, const coalgebra& b, const extension& ext);

// One evaluation of the step operator: out(x,y) = L r (alpha(x), beta(y)).
// The parallel kernel evaluates state pairs concurrently and is the
// OpenMP-backed twin of the serial reference.
vrel fixpoint_step_serial(const coalgebra& a, const coalgebra& b, const extension& ext, const vrel& current,
                          const element_limits& limits = {});
vrel fixpoint_step_parallel(const coalgebra& a, const coalgebra& b, const extension& ext, const vrel& current,
                            const element_limits& limits = {});

// Checks r below (step of r) pointwise, evaluating only where r is not bottom.
bool is_simulation(const coalgebra& a, const coalgebra& b, const extension& ext, const vrel& r,
                   const element_limits& limits = {});

// Greatest simulation as the limit of the descending iteration from the
// constant top relation, meeting with the step value each round.
distance_report behavioural_distance(const coalgebra& a, const coalgebra& b, const extension& ext,
                                     const fixpoint_config& cfg = {}, const element_limits& limits = {});

}  // namespace laxconf
