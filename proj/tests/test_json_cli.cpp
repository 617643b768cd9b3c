#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "laxconf/json_io.hpp"
#include "laxconf/lawcheck.hpp"

using namespace laxconf;

namespace {

json reparse(const json& j) { return json::parse(j.dump()); }

coalgebra roundtrip(const coalgebra& c) {
  parse_context ctx;
  return coalgebra_from_json(reparse(to_json(c)), ctx);
}

bool same_system(const coalgebra& a, const coalgebra& b) {
  return a.states == b.states && a.structure == b.structure &&
         a.instance.kind == b.instance.kind && a.instance.labels.labels == b.instance.labels.labels;
}

}  // namespace

TEST_CASE("values round-trip as strings") {
  parse_context ctx;
  for (const char* s : {"0", "1", "1/2", "7/3", "inf"}) {
    qvalue v = qvalue_from_json(quantale_kind::ext_real, json(s), ctx);
    CHECK(qvalue_from_json(quantale_kind::ext_real, to_json(v), ctx) == v);
  }
  CHECK(qvalue_from_json(quantale_kind::ext_real, json(3), ctx) == qvalue::ext_real(rational(3)));
  CHECK_THROWS_AS(qvalue_from_json(quantale_kind::ext_real, json(0.25), ctx), parse_error);
  parse_context loose{true};
  CHECK(qvalue_from_json(quantale_kind::ext_real, json(0.25), loose) == qvalue::ext_real(rational(1, 4)));
  CHECK(loose.saw_float);
}

TEST_CASE("relations round-trip") {
  splitmix64 rng(3);
  for (quantale_kind q : {quantale_kind::boolean, quantale_kind::ext_real, quantale_kind::unit_trunc}) {
    for (int i = 0; i < 20; ++i) {
      carrier x = gen_carrier(rng, "x", 4);
      carrier y = gen_carrier(rng, "y", 4);
      vrel r = gen_rel(rng, x, y, q);
      parse_context ctx;
      CHECK(vrel_from_json(reparse(to_json(r)), ctx) == r);
    }
  }
}

TEST_CASE("systems round-trip for every kind") {
  splitmix64 rng(5);
  for (const char* key : {"lts-sub", "lts-cpl", "mts", "list", "weighted-nat", "weighted-real", "stream",
                          "mlmc"}) {
    for (int i = 0; i < 10; ++i) {
      functor_instance inst = gen_instance(rng, key);
      coalgebra c = gen_coalgebra(rng, inst, 3);
      coalgebra back = roundtrip(c);
      CHECK(same_system(c, back));
      if (inst.kind == functor_kind::lts_pow) CHECK(back.instance.order == inst.order);
      if (inst.kind == functor_kind::mts) {
        CHECK(*back.instance.labels.label_order == *inst.labels.label_order);
      }
      if (inst.kind == functor_kind::stream || inst.kind == functor_kind::mlmc) {
        CHECK(back.instance.labels.label_dist->rel() == inst.labels.label_dist->rel());
      }
    }
  }
}

TEST_CASE("schema violations are reported as the right error class") {
  parse_context ctx;
  CHECK_THROWS_AS(coalgebra_from_json(json{{"kind", "nope"}, {"states", json::array()}}, ctx), parse_error);
  json bad_stream{{"kind", "stream"},
                  {"labels", json::array({"a"})},
                  {"labelDist", json::array({json::array({"0"})})},
                  {"states", json::array({"x"})},
                  {"transitions", json::array()}};
  CHECK_THROWS_AS(coalgebra_from_json(bad_stream, ctx), validation_error);
  json bad_mlmc{{"kind", "mlmc"},
                {"labels", json::array({"a"})},
                {"labelDist", json::array({json::array({"0"})})},
                {"states", json::array({"x"})},
                {"transitions",
                 json::array({json{{"from", "x"}, {"label", "a"}, {"to", "x"}, {"prob", "1/2"}}})}};
  CHECK_THROWS_AS(coalgebra_from_json(bad_mlmc, ctx), validation_error);
}

TEST_CASE("the closed and lax engines agree wherever both are defined") {
  splitmix64 rng(7);
  for (const char* key : {"lts-sub", "lts-sup", "lts-cpl", "lts-rd", "lts-discrete", "mts", "stream",
                          "weighted-nat", "weighted-real", "mlmc", "list"}) {
    for (int i = 0; i < 8; ++i) {
      functor_instance inst = gen_instance(rng, key);
      coalgebra a = gen_coalgebra(rng, inst, 3);
      coalgebra b = gen_coalgebra(rng, inst, 3);
      fixpoint_config cfg;
      cfg.max_iterations = 25;
      distance_report lax = behavioural_distance(a, b, extension::wasserstein_lax(inst), cfg);
      distance_report closed = behavioural_distance(a, b, extension::closed_form_for(inst), cfg);
      REQUIRE(lax.distances == closed.distances);
    }
  }
}

#ifdef LAXCONF_CLI_PATH
namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("command line produces machine-readable envelopes") {
  const std::string dir = "cli_scratch";
  REQUIRE(std::system(("mkdir -p " + dir).c_str()) == 0);
  spit(dir + "/a.json", R"({"symbols": ["a","b","c"]})");
  spit(dir + "/b.json", R"({"symbols": ["a","c"]})");
  std::string cmd = std::string(LAXCONF_CLI_PATH) + " edit " + dir + "/a.json " + dir +
                    "/b.json --sub-cost id01 > " + dir + "/out.json";
  REQUIRE(std::system(cmd.c_str()) == 0);
  json out = json::parse(slurp(dir + "/out.json"));
  CHECK(out.at("result").get<std::string>() == "1");
  CHECK(out.at("provenance").at("exact").get<bool>());

  spit(dir + "/m1.json", R"({"monoid":"nat","mass":{"x":"1"}})");
  spit(dir + "/m2.json", R"({"monoid":"nat","mass":{"y":"1"}})");
  spit(dir + "/cost.json",
       R"({"source":["x"],"target":["y"],"quantale":"extreal","entries":[["5"]]})");
  cmd = std::string(LAXCONF_CLI_PATH) + " ot " + dir + "/m1.json " + dir + "/m2.json " + dir +
        "/cost.json --mode unbalanced > " + dir + "/ot.json";
  REQUIRE(std::system(cmd.c_str()) == 0);
  CHECK(json::parse(slurp(dir + "/ot.json")).at("result").get<std::string>() == "1");

  // parse errors exit with the dedicated code
  spit(dir + "/broken.json", "{nope");
  cmd = std::string(LAXCONF_CLI_PATH) + " edit " + dir + "/broken.json " + dir + "/b.json > " + dir +
        "/err.json 2>/dev/null";
  int rc = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(rc) == 2);

  // the enumeration cap override is honored and surfaces as the cap code;
  // expensive substitutions make insertion routes worth enumerating
  spit(dir + "/long1.json", R"({"symbols": ["a"]})");
  spit(dir + "/long2.json", R"({"symbols": ["x","y"]})");
  spit(dir + "/expensive.json",
       R"({"source":["a","b"],"target":["x","y"],"quantale":"extreal",)"
       R"("entries":[["5","5"],["5","5"]]})");
  cmd = std::string("LAXCONF_MAX_NEIGHBORS=1 ") + LAXCONF_CLI_PATH + " edit " + dir + "/long1.json " +
        dir + "/long2.json --sub-cost " + dir + "/expensive.json > " + dir + "/cap.json 2>/dev/null";
  rc = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(rc) == 4);
  CHECK(json::parse(slurp(dir + "/cap.json")).at("class").get<std::string>() == "cap");
  // with the default cap the same instance solves fine
  cmd = std::string(LAXCONF_CLI_PATH) + " edit " + dir + "/long1.json " + dir +
        "/long2.json --sub-cost " + dir + "/expensive.json > " + dir + "/nocap.json";
  REQUIRE(std::system(cmd.c_str()) == 0);
  CHECK(json::parse(slurp(dir + "/nocap.json")).at("result").get<std::string>() == "3");
}
#endif
