#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "laxconf/json_io.hpp"
#include "laxconf/lawcheck.hpp"

using namespace laxconf;

namespace {

// exit codes: 0 ok, 1 law-suite failure, 2 parse, 3 validation,
// 4 cap or iteration exhaustion, 5 internal invariant breach

struct common_opts {
  bool allow_float = false;
  bool serial = false;
  bool table = false;
  long long max_iterations = 10000;
  std::string tolerance = "0";
};

element_limits limits_from_env() {
  element_limits lim;
  if (const char* cap = std::getenv("LAXCONF_MAX_NEIGHBORS")) {
    lim.max_neighbors = static_cast<std::size_t>(std::stoull(cap));
    lim.max_couplings = lim.max_neighbors;
  }
  return lim;
}

json matrix_result(const vrel& r) { return to_json(r); }

void print_table(const vrel& r) {
  std::size_t width = 6;
  for (std::size_t i = 0; i < r.rows(); ++i) {
    for (std::size_t j = 0; j < r.cols(); ++j) width = std::max(width, r.at(i, j).str().size() + 2);
  }
  for (const auto& k : r.src().keys) width = std::max(width, k.size() + 2);
  auto pad = [&](const std::string& s) {
    std::string out = s;
    out.resize(width, ' ');
    return out;
  };
  std::string head = pad("");
  for (const auto& k : r.tgt().keys) head += pad(k);
  std::cerr << head << "\n";
  for (std::size_t i = 0; i < r.rows(); ++i) {
    std::string line = pad(r.src().keys[i]);
    for (std::size_t j = 0; j < r.cols(); ++j) line += pad(r.at(i, j).str());
    std::cerr << line << "\n";
  }
}

extension engine_for_system(const coalgebra& c, const std::string& engine) {
  return engine_for(c.instance, engine);
}

void require_same_shape(const coalgebra& a, const coalgebra& b) {
  if (a.instance.kind != b.instance.kind) throw validation_error("the two systems have different kinds");
  if (a.instance.labels.labels != b.instance.labels.labels) {
    throw validation_error("the two systems have different label sets");
  }
  if (a.instance.kind == functor_kind::lts_pow && a.instance.order != b.instance.order) {
    throw validation_error("the two systems use different order variants");
  }
}

fixpoint_config fixpoint_from(const common_opts& opts, parse_context& ctx) {
  fixpoint_config cfg;
  cfg.max_iterations = opts.max_iterations;
  cfg.parallel = !opts.serial;
  cfg.tolerance = qvalue_from_json(quantale_kind::ext_real, json(opts.tolerance), ctx);
  return cfg;
}

int emit(const json& envelope, int code) {
  std::cout << envelope.dump(2) << std::endl;
  return code;
}

json provenance(const std::string& engine, long long iterations, bool exact, json solver = json::object()) {
  return json{{"engine", engine}, {"iterations", iterations}, {"exact", exact}, {"solver", std::move(solver)}};
}

int run_dist(const std::string& file_a, const std::string& file_b, const std::string& engine,
             const common_opts& opts, bool refine_mode) {
  parse_context ctx{opts.allow_float};
  coalgebra a = coalgebra_from_json(load_json_file(file_a), ctx);
  coalgebra b = coalgebra_from_json(load_json_file(file_b), ctx);
  require_same_shape(a, b);
  if (refine_mode && a.instance.kind != functor_kind::mts) {
    throw validation_error("refine expects modal transition systems");
  }
  extension ext = engine_for_system(a, engine);
  fixpoint_config cfg = fixpoint_from(opts, ctx);
  distance_report rep = behavioural_distance(a, b, ext, cfg, limits_from_env());

  bool exact = !rep.iteration_capped && !ctx.saw_float &&
               !(engine == "kant" && a.instance.value_kind() != quantale_kind::boolean);
  json solver;
  if (!rep.note.empty()) solver["note"] = rep.note;
  if (rep.iteration_capped) solver["iteration-capped"] = true;
  solver["converged-exact"] = rep.converged_exact;
  json envelope{{"command", json{{"name", refine_mode ? "refine" : "dist"},
                                 {"systemA", file_a},
                                 {"systemB", file_b},
                                 {"engine", engine}}},
                {"quantale", std::string(quantale_name(a.instance.value_kind()))},
                {"result", matrix_result(rep.distances)},
                {"provenance", provenance(engine, rep.iterations, exact, solver)}};
  if (opts.table) print_table(rep.distances);
  return emit(envelope, rep.iteration_capped ? 4 : 0);
}

int run_simcheck(const std::string& file_a, const std::string& file_b, const std::string& rel_file,
                 const std::string& engine, const common_opts& opts) {
  parse_context ctx{opts.allow_float};
  coalgebra a = coalgebra_from_json(load_json_file(file_a), ctx);
  coalgebra b = coalgebra_from_json(load_json_file(file_b), ctx);
  require_same_shape(a, b);
  vrel r = vrel_from_json(load_json_file(rel_file), ctx);
  if (r.src() != a.states || r.tgt() != b.states) {
    throw validation_error("relation carriers must match the two state spaces");
  }
  extension ext = engine_for_system(a, engine);
  bool verdict = is_simulation(a, b, ext, r, limits_from_env());
  bool exact = !ctx.saw_float && !(engine == "kant" && a.instance.value_kind() != quantale_kind::boolean);
  json envelope{{"command", json{{"name", "simcheck"},
                                 {"systemA", file_a},
                                 {"systemB", file_b},
                                 {"relation", rel_file},
                                 {"engine", engine}}},
                {"quantale", std::string(quantale_name(a.instance.value_kind()))},
                {"result", json{{"simulation", verdict}}},
                {"provenance", provenance(engine, 1, exact)}};
  return emit(envelope, 0);
}

int run_edit(const std::string& file_a, const std::string& file_b, const std::string& sub_cost,
             const common_opts& opts, const std::string& engine) {
  parse_context ctx{opts.allow_float};
  auto [alpha_a, word_a] = list_file_from_json(load_json_file(file_a));
  auto [alpha_b, word_b] = list_file_from_json(load_json_file(file_b));

  vrel cost;
  carrier left = alpha_a, right = alpha_b;
  if (sub_cost == "id01") {
    // merge the two alphabets; mismatching symbols cost one mutation
    std::vector<std::string> keys = alpha_a.keys;
    for (const auto& k : alpha_b.keys) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    }
    carrier merged("alphabet", keys);
    cost = vrel(merged, merged, quantale_kind::ext_real, qvalue::ext_real(rational(1)));
    for (std::size_t i = 0; i < merged.size(); ++i) cost.set(i, i, qvalue::ext_real(rational(0)));
    auto reindex = [&](const carrier& from, list_elem& w) {
      for (int& s : w) s = merged.index_of(from.keys[s]);
    };
    reindex(alpha_a, word_a);
    reindex(alpha_b, word_b);
    left = right = merged;
  } else {
    cost = vrel_from_json(load_json_file(sub_cost), ctx);
    if (cost.kind() != quantale_kind::ext_real) throw validation_error("substitution costs must be extreal");
    auto reindex = [&](const carrier& from, const carrier& to, list_elem& w) {
      for (int& s : w) s = to.index_of(from.keys[s]);
    };
    reindex(alpha_a, cost.src(), word_a);
    reindex(alpha_b, cost.tgt(), word_b);
    left = cost.src();
    right = cost.tgt();
  }

  functor_instance inst = functor_instance::list();
  qvalue value = engine == "closed"
                     ? closed_form(extension::closed_form_for(inst), cost, word_a, word_b, limits_from_env())
                     : wasserstein_lax(extension::wasserstein_lax(inst), cost, word_a, word_b, limits_from_env());
  json envelope{{"command", json{{"name", "edit"}, {"listA", file_a}, {"listB", file_b}, {"subCost", sub_cost},
                                 {"engine", engine}}},
                {"quantale", "extreal"},
                {"result", value.str()},
                {"provenance", provenance(engine, 1, !ctx.saw_float)}};
  return emit(envelope, 0);
}

int run_ot(const std::string& file_a, const std::string& file_b, const std::string& cost_file,
           const std::string& mode, bool dump, const common_opts& opts) {
  parse_context ctx{opts.allow_float};
  measure_file mu = measure_from_json(load_json_file(file_a), ctx);
  measure_file nu = measure_from_json(load_json_file(file_b), ctx);
  vrel cost = vrel_from_json(load_json_file(cost_file), ctx);
  auto align = [&](const measure_file& m, const carrier& c) {
    std::vector<rational> out(c.size(), rational(0));
    for (std::size_t i = 0; i < m.keys.size(); ++i) out[c.index_of(m.keys[i])] = m.mass[i];
    return out;
  };
  std::vector<rational> mv = align(mu, cost.src());
  std::vector<rational> nvv = align(nu, cost.tgt());
  if (dump) {
    // rebuild the solved network shape for inspection
    flow_network net;
    std::vector<int> xs, ys;
    for (std::size_t i = 0; i < mv.size(); ++i) xs.push_back(net.add_node(cost.src().keys[i], mv[i]));
    for (std::size_t j = 0; j < nvv.size(); ++j) ys.push_back(net.add_node(cost.tgt().keys[j], -nvv[j]));
    for (std::size_t i = 0; i < mv.size(); ++i) {
      for (std::size_t j = 0; j < nvv.size(); ++j) net.add_arc(xs[i], ys[j], std::nullopt, cost.at(i, j));
    }
    std::cerr << dump_network(net);
  }
  qvalue value = mode == "balanced" ? balanced_ot(cost, mv, nvv) : unbalanced_ot(cost, mv, nvv);
  json envelope{{"command", json{{"name", "ot"}, {"measureA", file_a}, {"measureB", file_b},
                                 {"cost", cost_file}, {"mode", mode}}},
                {"quantale", "extreal"},
                {"result", value.str()},
                {"provenance", provenance(mode, 1, !ctx.saw_float)}};
  return emit(envelope, 0);
}

int run_mlmc(const std::string& file_a, const std::string& file_b, const std::string& network,
             const common_opts& opts) {
  parse_context ctx{opts.allow_float};
  coalgebra a = coalgebra_from_json(load_json_file(file_a), ctx);
  coalgebra b = coalgebra_from_json(load_json_file(file_b), ctx);
  require_same_shape(a, b);
  if (a.instance.kind != functor_kind::mlmc) throw validation_error("mlmc expects metric-labelled chains");
  extension ext = network == "tiered" ? extension::closed_form_for(a.instance)
                                      : extension::wasserstein_lax(a.instance);
  fixpoint_config cfg = fixpoint_from(opts, ctx);
  distance_report rep = behavioural_distance(a, b, ext, cfg, limits_from_env());

  // network statistics of the root-pair solve at the computed distances
  json solver{{"network", network}, {"converged-exact", rep.converged_exact}};
  try {
    auto mu = dense_dist(std::get<labeled_dist>(a.structure[0]), a.instance.labels.labels.size(), a.states.size());
    auto nuv = dense_dist(std::get<labeled_dist>(b.structure[0]), b.instance.labels.labels.size(), b.states.size());
    transport_result root = network == "tiered"
                                ? mlmc_tiered(rep.distances, *a.instance.labels.label_dist, mu, nuv)
                                : mlmc_bipartite(rep.distances, *a.instance.labels.label_dist, mu, nuv);
    solver["nodes"] = root.stats.node_count;
    solver["finiteArcs"] = root.stats.finite_arc_count;
    solver["rootSolveIterations"] = root.stats.iterations;
  } catch (const cap_error& e) {
    solver["statsUnavailable"] = e.what();
  }
  if (!rep.note.empty()) solver["note"] = rep.note;
  json envelope{{"command", json{{"name", "mlmc"}, {"chainA", file_a}, {"chainB", file_b},
                                 {"network", network}}},
                {"quantale", "extreal"},
                {"result", matrix_result(rep.distances)},
                {"provenance", provenance(network, rep.iterations, !rep.iteration_capped && !ctx.saw_float,
                                          solver)}};
  if (opts.table) print_table(rep.distances);
  return emit(envelope, rep.iteration_capped ? 4 : 0);
}

int run_laws(const std::string& suite, const std::string& target, std::uint64_t seed, long long trials,
             int bound) {
  law_suite s;
  s.id = parse_suite(suite);
  s.target = target;
  s.seed = seed;
  s.trials = trials;
  s.carrier_bound = bound;
  auto reports = run_suite(s);
  bool ok = true;
  json out = json::array();
  for (const auto& rep : reports) {
    ok = ok && rep.ok();
    json r{{"suite", rep.suite},
           {"target", rep.target},
           {"law", rep.law_tag},
           {"passed", rep.passed},
           {"failed", rep.failed},
           {"expectCounterexample", rep.expect_counterexample},
           {"ok", rep.ok()}};
    json cxs = json::array();
    for (const auto& c : rep.counterexamples) cxs.push_back(c);
    r["counterexamples"] = std::move(cxs);
    out.push_back(std::move(r));
  }
  json envelope{{"command", json{{"name", "laws"}, {"suite", suite}, {"target", target}, {"seed", seed},
                                 {"trials", trials}, {"bound", bound}}},
                {"result", std::move(out)},
                {"provenance", provenance("lawcheck", trials, true)}};
  return emit(envelope, ok ? 0 : 1);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"behavioural conformances via lax couplings: distances, simulations, refinements, transport"};
  app.require_subcommand(1);

  common_opts opts;
  std::string engine = "wass-lax";
  std::string sys_a, sys_b, rel_file, cost_file = "id01", mode = "balanced", network = "bipartite";
  std::string suite, target;
  std::uint64_t seed = 1;
  long long trials = 200;
  int bound = 3;
  bool dump = false;

  auto add_common = [&](CLI::App* cmd, bool fixpoint) {
    cmd->add_flag("--allow-float", opts.allow_float,
                  "accept floating-point numerics (converted to bounded rationals; downgrades exactness)");
    if (fixpoint) {
      cmd->add_option("--max-iterations", opts.max_iterations, "iteration budget for the fixpoint");
      cmd->add_option("--tolerance", opts.tolerance, "convergence slack as a rational (default exact 0)");
      cmd->add_flag("--serial", opts.serial, "use the serial step kernel");
      cmd->add_flag("--table", opts.table, "also print an aligned text table on stderr");
    }
  };

  CLI::App* dist = app.add_subcommand("dist", "behavioural distance matrix between two systems");
  dist->add_option("systemA", sys_a)->required();
  dist->add_option("systemB", sys_b)->required();
  dist->add_option("--engine", engine, "wass-exact|wass-lax|kant|closed");
  add_common(dist, true);

  CLI::App* simcheck = app.add_subcommand("simcheck", "check a candidate simulation relation");
  simcheck->add_option("systemA", sys_a)->required();
  simcheck->add_option("systemB", sys_b)->required();
  simcheck->add_option("relation", rel_file)->required();
  simcheck->add_option("--engine", engine, "wass-exact|wass-lax|kant|closed");
  add_common(simcheck, false);

  CLI::App* refine = app.add_subcommand("refine", "greatest modal refinement between two systems");
  refine->add_option("mtsA", sys_a)->required();
  refine->add_option("mtsB", sys_b)->required();
  refine->add_option("--engine", engine, "wass-lax|closed");
  add_common(refine, true);

  CLI::App* edit = app.add_subcommand("edit", "edit distance between two words");
  edit->add_option("listA", sys_a)->required();
  edit->add_option("listB", sys_b)->required();
  edit->add_option("--sub-cost", cost_file, "substitution costs: id01 or a relation file");
  edit->add_option("--engine", engine, "wass-lax|closed");
  add_common(edit, false);

  CLI::App* ot = app.add_subcommand("ot", "optimal transport between two measures");
  ot->add_option("measureA", sys_a)->required();
  ot->add_option("measureB", sys_b)->required();
  ot->add_option("cost", rel_file)->required();
  ot->add_option("--mode", mode, "balanced|unbalanced")->check(CLI::IsMember({"balanced", "unbalanced"}));
  ot->add_flag("--dump-network", dump, "write the solved network to stderr");
  add_common(ot, false);

  CLI::App* mlmc = app.add_subcommand("mlmc", "distances between metric-labelled chains");
  mlmc->add_option("chainA", sys_a)->required();
  mlmc->add_option("chainB", sys_b)->required();
  mlmc->add_option("--network", network, "bipartite|tiered")->check(CLI::IsMember({"bipartite", "tiered"}));
  add_common(mlmc, true);

  CLI::App* laws = app.add_subcommand("laws", "run a law suite");
  laws->add_option("suite", suite,
                   "lax-axioms|distributoriality|exact-squares|coolness|well-behaved|characterizations|"
                   "dualities|g-diag|distributor-agreement")
      ->required();
  laws->add_option("--target", target, "restrict to one shipped target");
  laws->add_option("--seed", seed);
  laws->add_option("--trials", trials);
  laws->add_option("--bound", bound, "carrier size bound");

  CLI11_PARSE(app, argc, argv);

  try {
    if (dist->parsed()) return run_dist(sys_a, sys_b, engine, opts, false);
    if (simcheck->parsed()) return run_simcheck(sys_a, sys_b, rel_file, engine, opts);
    if (refine->parsed()) return run_dist(sys_a, sys_b, engine, opts, true);
    if (edit->parsed()) return run_edit(sys_a, sys_b, cost_file, opts, engine);
    if (ot->parsed()) return run_ot(sys_a, sys_b, rel_file, mode, dump, opts);
    if (mlmc->parsed()) return run_mlmc(sys_a, sys_b, network, opts);
    if (laws->parsed()) return run_laws(suite, target, seed, trials, bound);
  } catch (const parse_error& e) {
    std::cout << json{{"error", e.what()}, {"class", "parse"}}.dump(2) << std::endl;
    return 2;
  } catch (const validation_error& e) {
    std::cout << json{{"error", e.what()}, {"class", "validation"}}.dump(2) << std::endl;
    return 3;
  } catch (const cap_error& e) {
    std::cout << json{{"error", e.what()}, {"class", "cap"}}.dump(2) << std::endl;
    return 4;
  } catch (const internal_error& e) {
    std::cout << json{{"error", e.what()}, {"class", "internal"}}.dump(2) << std::endl;
    return 5;
  } catch (const std::exception& e) {
    std::cout << json{{"error", e.what()}, {"class", "internal"}}.dump(2) << std::endl;
    return 5;
  }
  return 0;
}
