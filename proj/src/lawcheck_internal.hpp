#pragma once

#include <functional>

#include "laxconf/json_io.hpp"
#include "laxconf/lawcheck.hpp"

namespace laxconf {
namespace detail {

using trial_fn = std::function<std::optional<std::string>(splitmix64&, int)>;

law_report run_trials(const law_suite& s, const std::string& target, const char* tag, const trial_fn& trial);

std::string cx(std::initializer_list<std::pair<std::string, json>> fields);

std::vector<functor_element> pool_for(splitmix64& rng, const functor_instance& inst, const carrier& c,
                                      std::size_t sampled);

vrel join_rel(const vrel& a, const vrel& b);

}  // namespace detail
}  // namespace laxconf
