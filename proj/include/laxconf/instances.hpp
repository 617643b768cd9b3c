#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "laxconf/transport.hpp"
#include "laxconf/vrel.hpp"

namespace laxconf {

enum class functor_kind { lts_pow, mts, list, monoid_val, stream, mlmc };
enum class lts_order { sub, sup, cpl, cpl_rev, rd, rd_rev, discrete };
enum class monoid_kind { nat, nonneg_real };

std::string_view lts_order_name(lts_order o);
lts_order parse_lts_order(std::string_view name);

struct label_meta {
  carrier labels;                        // empty for list / monoid_val
  std::optional<vrel> label_order;       // boolean preorder on labels (mts)
  std::optional<vcat> label_dist;        // ext_real hemimetric on labels (stream, mlmc)
};

// One of the six system types, together with its label metadata. The
// quantale of the induced structures is boolean for lts_pow/mts and
// ext_real for the rest.
struct functor_instance {
  functor_kind kind = functor_kind::lts_pow;
  lts_order order = lts_order::sub;      // lts_pow only
  monoid_kind monoid = monoid_kind::nat; // monoid_val only
  label_meta labels;

  quantale_kind value_kind() const;

  static functor_instance lts(carrier labels, lts_order order);
  static functor_instance mts(carrier labels, vrel label_order);
  static functor_instance list();
  static functor_instance weighted(monoid_kind m);
  static functor_instance stream(carrier labels, vcat label_dist);
  static functor_instance mlmc(carrier labels, vcat label_dist);
};

// ---- functor elements -------------------------------------------------

// Finite set of (label, state) pairs, sorted and unique.
struct label_set {
  std::vector<std::pair<int, int>> pairs;

  label_set() = default;
  explicit label_set(std::vector<std::pair<int, int>> p);
  bool contains(int label, int state) const;
  bool subset_of(const label_set& other) const;
  bool empty() const { return pairs.empty(); }
  std::vector<int> states_for(int label) const;
  friend bool operator==(const label_set&, const label_set&) = default;
};

struct mts_pair {
  label_set must;
  label_set may;  // invariant: must subset of may
  friend bool operator==(const mts_pair&, const mts_pair&) = default;
};

using list_elem = std::vector<int>;

// Finitely supported map state -> monoid value; entries strictly positive,
// sorted by state.
struct monoid_map {
  std::vector<std::pair<int, rational>> entries;

  monoid_map() = default;
  explicit monoid_map(std::vector<std::pair<int, rational>> e);
  rational at(int state) const;
  rational total() const;
  friend bool operator==(const monoid_map&, const monoid_map&) = default;
};

struct labeled_pair {
  int label = 0;
  int state = 0;
  friend bool operator==(const labeled_pair&, const labeled_pair&) = default;
};

// Finitely supported probability distribution on (label, state) pairs;
// entries strictly positive, sorted, summing to exactly 1.
struct labeled_dist {
  std::vector<std::pair<std::pair<int, int>, rational>> entries;

  labeled_dist() = default;
  explicit labeled_dist(std::vector<std::pair<std::pair<int, int>, rational>> e);
  rational at(int label, int state) const;
  friend bool operator==(const labeled_dist&, const labeled_dist&) = default;
};

using functor_element = std::variant<label_set, mts_pair, list_elem, monoid_map, labeled_pair, labeled_dist>;

bool element_matches_kind(const functor_instance& inst, const functor_element& t);

struct coalgebra {
  carrier states;
  functor_instance instance;
  std::vector<functor_element> structure;  // one element per state

  void validate() const;  // kinds match, indices in range
};

// ---- operations --------------------------------------------------------

// Functorial action: image for the set-like kinds, elementwise relabeling
// for lists and pairs, pushforward for weights and distributions.
functor_element fmap(const functor_instance& inst, const set_map& f, const functor_element& t);

// The structure d_FX of the instance, evaluated at two elements over the
// same carrier (boolean order value or ext_real distance).
qvalue element_distance(const functor_instance& inst, const functor_element& t1, const functor_element& t2);

// ---- predicate liftings -------------------------------------------------

enum class lifting_id {
  box,            // every successor satisfies f (label-blind)
  diamond,        // some successor satisfies f (label-blind)
  box_label,      // every successor along one label satisfies f
  diamond_label,  // some successor along one label satisfies f
  mts_box,        // every admissible successor satisfies f
  list_sum,       // sum of f along the word
  expect,         // weight-weighted sum of f
  stream_proj,    // f at the successor state
  mlmc_expect,    // probability-weighted sum of f over states
  diamond_at      // label move cost plus f at the state (streams)
};

struct lifting {
  lifting_id id = lifting_id::box;
  int at_label = -1;  // label-indexed liftings only

  static lifting of(lifting_id id) { return {id, -1}; }
  static lifting at(lifting_id id, int label) { return {id, label}; }
};

// Default lifting used by the Wasserstein engines for each instance.
lifting default_lifting(const functor_instance& inst);

// Applies the lifted predicate: f is indexed by the element's state carrier.
qvalue lift(const functor_instance& inst, const lifting& l, const std::vector<qvalue>& f,
            const functor_element& t);

// ---- lax neighborhoods --------------------------------------------------

struct element_limits {
  std::size_t max_neighbors = 100000;
  std::size_t max_couplings = 100000;
};

struct neighbor {
  functor_element elem;
  qvalue cost;  // d_FX(t, elem), or d_FX(elem, t) when mirrored
};

// All elements t' with d(t,t') at or above `budget` in the quantale order
// (mirrored: d(t',t)). Complete for lts_pow, mts, list and stream; the
// weight-valued kinds go through the transport module instead and are
// rejected here. List supersequences draw symbols from `pool`.
std::vector<neighbor> lax_neighbors(const functor_instance& inst, const functor_element& t,
                                    const qvalue& budget, const carrier& states,
                                    const std::vector<int>& pool, bool mirrored,
                                    const element_limits& limits = {});

std::vector<int> initial_actions(const coalgebra& c, int state);

// ---- witness constructions ----------------------------------------------

// A commuting square u:P->X, v:P->Y, f:X->Z, g:Y->Z; generators only ever
// build genuine pullbacks (P = pairs with f(x) = g(y)).
struct exact_square {
  carrier p, x, y, z;
  set_map u, v, f, g;
};

exact_square pullback_square(const carrier& x, const carrier& y, const carrier& z, const set_map& f,
                             const set_map& g);

// Element w over P with d(t1, fmap(u,w)) tensor d(fmap(v,w), t2) at or above
// d(fmap(f,t1), fmap(g,t2)); absent when that bound is the bottom value.
std::optional<functor_element> exactness_witness(const functor_instance& inst, const exact_square& sq,
                                                 const functor_element& t1, const functor_element& t2);

// Forward: element t' with fmap(f,t') = t_target and d(t,t') at or above
// d(fmap(f,t), t_target). Mirrored: fmap(f,t') = t_target and d(t',t) at or
// above d(t_target, fmap(f,t)). Requires f surjective.
functor_element coolness_witness(const functor_instance& inst, const set_map& f, const carrier& x,
                                 const carrier& y, const functor_element& t,
                                 const functor_element& t_target, bool mirrored);

// ---- helpers shared by engines and law suites ----------------------------

// Dense weight vector over a carrier from a monoid_map.
std::vector<rational> dense_weights(const monoid_map& m, std::size_t n);

// Dense label-state matrix from a labeled_dist.
rational_matrix dense_dist(const labeled_dist& d, std::size_t labels, std::size_t states);

// Exhaustive element pool for an instance over a carrier: full powersets
// for the boolean kinds, all lists up to max_list_len, all pairs for
// streams. Throws cap_error past `max_pool`; weight-valued kinds are
// rejected.
std::vector<functor_element> enumerate_elements(const functor_instance& inst, const carrier& states,
                                                std::size_t max_list_len, std::size_t max_pool = 100000);

}  // namespace laxconf
