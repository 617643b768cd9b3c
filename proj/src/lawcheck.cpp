#include "laxconf/lawcheck.hpp"

#include <algorithm>

#include "laxconf/json_io.hpp"

namespace laxconf {

std::string_view suite_name(suite_id id) {
  switch (id) {
    case suite_id::lax_axioms: return "lax-axioms";
    case suite_id::distributoriality: return "distributoriality";
    case suite_id::exact_squares: return "exact-squares";
    case suite_id::coolness: return "coolness";
    case suite_id::well_behaved: return "well-behaved";
    case suite_id::characterizations: return "characterizations";
    case suite_id::dualities: return "dualities";
    case suite_id::g_diag: return "g-diag";
    case suite_id::distributor_agreement: return "distributor-agreement";
  }
  throw internal_error("unknown suite id");
}

suite_id parse_suite(std::string_view name) {
  for (suite_id id : {suite_id::lax_axioms, suite_id::distributoriality, suite_id::exact_squares,
                      suite_id::coolness, suite_id::well_behaved, suite_id::characterizations,
                      suite_id::dualities, suite_id::g_diag, suite_id::distributor_agreement}) {
    if (suite_name(id) == name) return id;
  }
  throw parse_error("unknown law suite '" + std::string(name) + "'");
}

std::uint64_t splitmix64::next() {
  x_ += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = x_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t splitmix64::below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

std::uint64_t trial_seed(std::uint64_t seed, std::string_view target, long long trial) {
  std::uint64_t h = seed;
  for (char c : target) h = (h ^ static_cast<std::uint64_t>(static_cast<unsigned char>(c))) * 0x100000001b3ull;
  return h + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(trial + 1);
}

// ---- generators ------------------------------------------------------------

qvalue gen_value(splitmix64& rng, quantale_kind k) {
  switch (k) {
    case quantale_kind::boolean: return qvalue::boolean(rng.below(2) == 1);
    case quantale_kind::ext_real:
      // small rationals keep arithmetic exact and still exercise absorption
      switch (rng.below(5)) {
        case 0: return qvalue::ext_real(rational(0));
        case 1: return qvalue::ext_real(rational(1, 2));
        case 2: return qvalue::ext_real(rational(1));
        case 3: return qvalue::ext_real(rational(2));
        default: return qvalue::infinity();
      }
    case quantale_kind::unit_trunc:
      switch (rng.below(3)) {
        case 0: return qvalue::unit_trunc(rational(0));
        case 1: return qvalue::unit_trunc(rational(1, 2));
        default: return qvalue::unit_trunc(rational(1));
      }
  }
  throw internal_error("unknown quantale kind");
}

vrel gen_rel(splitmix64& rng, const carrier& src, const carrier& tgt, quantale_kind k) {
  vrel out(src, tgt, k, qvalue::bottom(k));
  for (std::size_t i = 0; i < src.size(); ++i) {
    for (std::size_t j = 0; j < tgt.size(); ++j) out.set(i, j, gen_value(rng, k));
  }
  return out;
}

vcat gen_cat(splitmix64& rng, const carrier& base, quantale_kind k) {
  vrel d = gen_rel(rng, base, base, k);
  for (std::size_t i = 0; i < base.size(); ++i) d.set(i, i, qvalue::unit(k));
  for (std::size_t round = 0; round <= base.size(); ++round) {
    vrel sq = compose(d, d);
    vrel next(base, base, k, qvalue::bottom(k));
    for (std::size_t i = 0; i < base.size(); ++i) {
      for (std::size_t j = 0; j < base.size(); ++j) next.set(i, j, join(d.at(i, j), sq.at(i, j)));
    }
    if (next == d) break;
    d = std::move(next);
  }
  return vcat::checked(std::move(d));
}

carrier gen_carrier(splitmix64& rng, const std::string& prefix, int max_size) {
  std::size_t n = 1 + rng.below(static_cast<std::uint64_t>(std::max(1, max_size)));
  std::vector<std::string> keys;
  for (std::size_t i = 0; i < n; ++i) keys.push_back(prefix + std::to_string(i));
  return carrier(prefix, std::move(keys));
}

set_map gen_map(splitmix64& rng, std::size_t from, std::size_t to) {
  set_map f(from);
  for (std::size_t i = 0; i < from; ++i) f[i] = static_cast<int>(rng.below(to));
  return f;
}

set_map gen_surjection(splitmix64& rng, std::size_t from, std::size_t to) {
  if (from < to) throw validation_error("surjection needs a source at least as large as the target");
  set_map f(from);
  std::vector<int> slots(from);
  for (std::size_t i = 0; i < from; ++i) slots[i] = static_cast<int>(i);
  for (std::size_t i = from; i > 1; --i) std::swap(slots[i - 1], slots[rng.below(i)]);
  for (std::size_t y = 0; y < to; ++y) f[slots[y]] = static_cast<int>(y);
  for (std::size_t i = to; i < from; ++i) f[slots[i]] = static_cast<int>(rng.below(to));
  return f;
}

std::vector<std::string> instance_keys() {
  return {"lts-sub", "lts-sup", "lts-cpl", "lts-cpl-rev", "lts-rd", "lts-rd-rev", "lts-discrete",
          "mts",     "list",    "weighted-nat", "weighted-real", "stream", "mlmc"};
}

functor_instance gen_instance(splitmix64& rng, const std::string& key) {
  auto labels = [&](int max_size) { return gen_carrier(rng, "a", max_size); };
  if (key.rfind("lts-", 0) == 0) {
    return functor_instance::lts(labels(2), parse_lts_order(key.substr(4)));
  }
  if (key == "mts") {
    carrier ls = labels(2);
    vcat order = gen_cat(rng, ls, quantale_kind::boolean);
    return functor_instance::mts(ls, order.rel());
  }
  if (key == "list") return functor_instance::list();
  if (key == "weighted-nat") return functor_instance::weighted(monoid_kind::nat);
  if (key == "weighted-real") return functor_instance::weighted(monoid_kind::nonneg_real);
  if (key == "stream" || key == "mlmc") {
    carrier ls = labels(2);
    vcat dist = gen_cat(rng, ls, quantale_kind::ext_real);
    return key == "stream" ? functor_instance::stream(ls, dist) : functor_instance::mlmc(ls, dist);
  }
  if (key == "stream-metric") {
    // symmetric label distances; the predicate-meet representation of the
    // stream optimum needs them
    carrier ls = labels(2);
    vrel d(ls, ls, quantale_kind::ext_real, qvalue::ext_real(rational(0)));
    for (std::size_t i = 0; i < ls.size(); ++i) {
      for (std::size_t j = i + 1; j < ls.size(); ++j) {
        qvalue v = gen_value(rng, quantale_kind::ext_real);
        d.set(i, j, v);
        d.set(j, i, v);
      }
    }
    for (std::size_t round = 0; round <= ls.size(); ++round) {
      vrel sq = compose(d, d);
      vrel next(ls, ls, quantale_kind::ext_real, qvalue::infinity());
      for (std::size_t i = 0; i < ls.size(); ++i) {
        for (std::size_t j = 0; j < ls.size(); ++j) next.set(i, j, join(d.at(i, j), sq.at(i, j)));
      }
      if (next == d) break;
      d = std::move(next);
    }
    return functor_instance::stream(ls, vcat::checked(std::move(d)));
  }
  throw parse_error("unknown instance key '" + key + "'");
}

functor_element gen_element(splitmix64& rng, const functor_instance& inst, const carrier& states) {
  const std::size_t nx = states.size();
  const std::size_t na = inst.labels.labels.size();
  switch (inst.kind) {
    case functor_kind::lts_pow: {
      std::vector<std::pair<int, int>> pairs;
      for (std::size_t a = 0; a < na; ++a) {
        for (std::size_t x = 0; x < nx; ++x) {
          if (rng.chance(1, 3)) pairs.emplace_back(static_cast<int>(a), static_cast<int>(x));
        }
      }
      return label_set(std::move(pairs));
    }
    case functor_kind::mts: {
      std::vector<std::pair<int, int>> may, must;
      for (std::size_t a = 0; a < na; ++a) {
        for (std::size_t x = 0; x < nx; ++x) {
          if (rng.chance(1, 3)) {
            may.emplace_back(static_cast<int>(a), static_cast<int>(x));
            if (rng.chance(1, 2)) must.emplace_back(static_cast<int>(a), static_cast<int>(x));
          }
        }
      }
      return mts_pair{label_set(std::move(must)), label_set(std::move(may))};
    }
    case functor_kind::list: {
      list_elem l;
      std::size_t len = rng.below(4);
      for (std::size_t i = 0; i < len; ++i) l.push_back(static_cast<int>(rng.below(nx)));
      return l;
    }
    case functor_kind::monoid_val: {
      std::vector<std::pair<int, rational>> entries;
      for (std::size_t x = 0; x < nx; ++x) {
        rational m = inst.monoid == monoid_kind::nat
                         ? rational(static_cast<long long>(rng.below(3)))
                         : rational(static_cast<long long>(rng.below(5)), 2);
        if (!m.is_zero()) entries.emplace_back(static_cast<int>(x), m);
      }
      return monoid_map(std::move(entries));
    }
    case functor_kind::stream:
      return labeled_pair{static_cast<int>(rng.below(na)), static_cast<int>(rng.below(nx))};
    case functor_kind::mlmc: {
      std::size_t support = 1 + rng.below(3);
      std::vector<std::pair<std::pair<int, int>, rational>> raw;
      rational total(0);
      for (std::size_t i = 0; i < support; ++i) {
        std::pair<int, int> pt{static_cast<int>(rng.below(na)), static_cast<int>(rng.below(nx))};
        rational w(static_cast<long long>(1 + rng.below(3)));
        bool merged = false;
        for (auto& [p, m] : raw) {
          if (p == pt) {
            m += w;
            merged = true;
            break;
          }
        }
        if (!merged) raw.push_back({pt, w});
        total += w;
      }
      for (auto& [p, m] : raw) m /= total;
      return labeled_dist(std::move(raw));
    }
  }
  throw internal_error("unknown functor kind");
}

coalgebra gen_coalgebra(splitmix64& rng, const functor_instance& inst, int state_bound) {
  coalgebra c;
  c.states = gen_carrier(rng, "s", state_bound);
  c.instance = inst;
  for (std::size_t x = 0; x < c.states.size(); ++x) c.structure.push_back(gen_element(rng, inst, c.states));
  c.validate();
  return c;
}

extension engine_for(const functor_instance& inst, std::string_view engine_key) {
  if (engine_key == "wass-exact") return extension::wasserstein_exact(inst);
  if (engine_key == "wass-lax") return extension::wasserstein_lax(inst);
  if (engine_key == "kant") return extension::kantorovich(inst);
  if (engine_key == "closed") return extension::closed_form_for(inst);
  throw parse_error("unknown engine '" + std::string(engine_key) + "' (wass-exact|wass-lax|kant|closed)");
}

// ---- dispatch ----------------------------------------------------------------

namespace detail {
law_report run_lax_axioms(const law_suite& s, const std::string& target);
law_report run_distributoriality(const law_suite& s, const std::string& target);
law_report run_exact_squares(const law_suite& s, const std::string& target);
law_report run_coolness(const law_suite& s, const std::string& target);
law_report run_well_behaved(const law_suite& s, const std::string& target);
law_report run_characterizations(const law_suite& s, const std::string& target);
law_report run_dualities(const law_suite& s, const std::string& target);
law_report run_g_diag(const law_suite& s, const std::string& target);
law_report run_distributor_agreement(const law_suite& s, const std::string& target);
}  // namespace detail

std::vector<std::string> suite_targets(suite_id id) {
  std::vector<std::string> lax = instance_keys();
  switch (id) {
    case suite_id::lax_axioms: {
      for (const char* k : {"kant-lts-sub", "kant-lts-sup", "kant-lts-discrete", "kant-stream"}) {
        lax.push_back(k);
      }
      return lax;
    }
    case suite_id::distributoriality: {
      lax.push_back("list-wass-exact");  // negative control
      return lax;
    }
    case suite_id::exact_squares:
    case suite_id::coolness:
      return lax;
    case suite_id::well_behaved:
      return {"box", "mts-box", "list-sum", "expect-nat", "expect-real", "stream-proj", "mlmc-expect"};
    case suite_id::characterizations:
      return {"lts-sim", "mts-refine", "stream-tensor", "mlmc-exact", "mlmc-lax"};
    case suite_id::dualities:
      return {"bool-sub", "bool-sup", "bool-discrete", "stream"};
    case suite_id::g_diag:
      return {"bool", "extreal", "unit-trunc"};
    case suite_id::distributor_agreement:
      return {"bool", "extreal", "unit-trunc"};
  }
  throw internal_error("unknown suite id");
}

law_report run_target(const law_suite& s, const std::string& target) {
  switch (s.id) {
    case suite_id::lax_axioms: return detail::run_lax_axioms(s, target);
    case suite_id::distributoriality: return detail::run_distributoriality(s, target);
    case suite_id::exact_squares: return detail::run_exact_squares(s, target);
    case suite_id::coolness: return detail::run_coolness(s, target);
    case suite_id::well_behaved: return detail::run_well_behaved(s, target);
    case suite_id::characterizations: return detail::run_characterizations(s, target);
    case suite_id::dualities: return detail::run_dualities(s, target);
    case suite_id::g_diag: return detail::run_g_diag(s, target);
    case suite_id::distributor_agreement: return detail::run_distributor_agreement(s, target);
  }
  throw internal_error("unknown suite id");
}

std::vector<law_report> run_suite(const law_suite& s) {
  std::vector<law_report> out;
  if (!s.target.empty()) {
    out.push_back(run_target(s, s.target));
    return out;
  }
  for (const std::string& t : suite_targets(s.id)) out.push_back(run_target(s, t));
  return out;
}

std::vector<coverage_entry> coverage_table() {
  std::vector<coverage_entry> t;
  auto add = [&](const char* law, suite_id id, const char* target) {
    t.push_back({law, std::string(suite_name(id)), target});
  };
  add("relation/distributor-four-way", suite_id::distributor_agreement, "*");
  add("relation/graph-diagonal-commutation", suite_id::g_diag, "*");
  add("extension/monotone", suite_id::lax_axioms, "*");
  add("extension/lax-composition", suite_id::lax_axioms, "*");
  add("extension/graph-bounds", suite_id::lax_axioms, "*");
  add("extension/structure-absorption", suite_id::distributoriality, "*");
  add("extension/structure-absorption-negative", suite_id::distributoriality, "list-wass-exact");
  add("extension/step-monotone", suite_id::lax_axioms, "*");
  for (const char* k : {"lts-sub", "lts-sup", "lts-cpl", "lts-cpl-rev", "lts-rd", "lts-rd-rev",
                        "lts-discrete", "mts", "list", "weighted-nat", "weighted-real", "stream", "mlmc"}) {
    add("functor/exact-squares", suite_id::exact_squares, k);
    add("functor/coolness", suite_id::coolness, k);
  }
  for (const char* k : {"box", "mts-box", "list-sum", "expect-nat", "expect-real", "stream-proj", "mlmc-expect"}) {
    add("lifting/well-behaved", suite_id::well_behaved, k);
  }
  add("lifting/hom-functorial", suite_id::dualities, "*");
  add("lifting/composite-normality", suite_id::lax_axioms, "enumerable instances");
  add("characterization/similarity-variants", suite_id::characterizations, "lts-sim");
  add("characterization/modal-refinement", suite_id::characterizations, "mts-refine");
  add("characterization/stream-tensor", suite_id::characterizations, "stream-tensor");
  add("characterization/label-slice-transport", suite_id::characterizations, "mlmc-exact");
  add("characterization/tensor-transport", suite_id::characterizations, "mlmc-lax");
  add("duality/diamond-vs-box", suite_id::dualities, "bool-sub");
  add("duality/box-vs-box-converse", suite_id::dualities, "bool-sup");
  add("duality/box-diamond-discrete", suite_id::dualities, "bool-discrete");
  add("duality/stream-shift-family", suite_id::dualities, "stream");
  return t;
}

}  // namespace laxconf
