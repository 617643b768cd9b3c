#pragma once

#include <cstdint>

#include "laxconf/conformance.hpp"

namespace laxconf {

enum class suite_id {
  lax_axioms,            // monotonicity, lax composition, graph bounds, absorption
  distributoriality,     // absorption and the distributor form agree; negative control
  exact_squares,         // witness constructions across pullback squares
  coolness,              // structure transport along surjections, both directions
  well_behaved,          // lifting laws: monotone, unit, normality (with witnesses)
  characterizations,     // step formulas against engine routes
  dualities,             // predicate-lifting meets against coupling optima
  g_diag,                // diagonal relations commute with graphs
  distributor_agreement  // four formulations of the distributor condition
};

std::string_view suite_name(suite_id id);
suite_id parse_suite(std::string_view name);

struct law_suite {
  suite_id id = suite_id::lax_axioms;
  std::string target;  // empty: every shipped target of the suite
  long long trials = 200;
  std::uint64_t seed = 1;
  int carrier_bound = 3;
};

struct law_report {
  std::string suite;
  std::string target;
  std::string law_tag;
  long long passed = 0;
  long long failed = 0;
  bool expect_counterexample = false;  // inverted polarity (negative control)
  std::vector<std::string> counterexamples;

  bool ok() const { return expect_counterexample ? !counterexamples.empty() : failed == 0; }
};

std::vector<std::string> suite_targets(suite_id id);
law_report run_target(const law_suite& suite, const std::string& target);
std::vector<law_report> run_suite(const law_suite& suite);

struct coverage_entry {
  std::string law;
  std::string suite;
  std::string target;
};
// Static map from checked laws to the suites exercising them.
std::vector<coverage_entry> coverage_table();

// Deterministic generator stream; the same (seed, target, trial) triple
// always reproduces the same inputs.
class splitmix64 {
 public:
  explicit splitmix64(std::uint64_t seed) : x_(seed) {}
  std::uint64_t next();
  std::uint64_t below(std::uint64_t n);
  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

 private:
  std::uint64_t x_;
};

std::uint64_t trial_seed(std::uint64_t seed, std::string_view target, long long trial);

// generators (shared with the test suites)
qvalue gen_value(splitmix64& rng, quantale_kind k);
vrel gen_rel(splitmix64& rng, const carrier& src, const carrier& tgt, quantale_kind k);
vcat gen_cat(splitmix64& rng, const carrier& base, quantale_kind k);
carrier gen_carrier(splitmix64& rng, const std::string& prefix, int max_size);
set_map gen_map(splitmix64& rng, std::size_t from, std::size_t to);
set_map gen_surjection(splitmix64& rng, std::size_t from, std::size_t to);
functor_instance gen_instance(splitmix64& rng, const std::string& instance_key);
functor_element gen_element(splitmix64& rng, const functor_instance& inst, const carrier& states);
coalgebra gen_coalgebra(splitmix64& rng, const functor_instance& inst, int state_bound);

// instance keys shipped by the law suites
std::vector<std::string> instance_keys();
extension engine_for(const functor_instance& inst, std::string_view engine_key);

}  // namespace laxconf
