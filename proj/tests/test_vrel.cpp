#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "laxconf/lawcheck.hpp"
#include "laxconf/vrel.hpp"

using namespace laxconf;

namespace {

carrier abc() { return carrier("abc", {"a", "b", "c"}); }

vrel bool_rel(const carrier& src, const carrier& tgt, std::initializer_list<std::pair<int, int>> pairs) {
  vrel r(src, tgt, quantale_kind::boolean, qvalue::boolean(false));
  for (auto [i, j] : pairs) r.set(i, j, qvalue::boolean(true));
  return r;
}

vrel ext_rel(const carrier& src, const carrier& tgt, std::vector<std::vector<const char*>> rows) {
  vrel r(src, tgt, quantale_kind::ext_real, qvalue::infinity());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      r.set(i, j, qvalue::parse(quantale_kind::ext_real, rows[i][j]));
    }
  }
  return r;
}

}  // namespace

TEST_CASE("boolean composition is relational composition on a chain") {
  carrier c = abc();
  vrel r = bool_rel(c, c, {{0, 1}});  // a -> b
  vrel s = bool_rel(c, c, {{1, 2}});  // b -> c
  vrel sr = compose(s, r);
  CHECK(sr.at(0, 2).truth());
  CHECK_FALSE(sr.at(0, 1).truth());
  CHECK_FALSE(sr.at(1, 2).truth());
}

TEST_CASE("min-plus composition of an idempotent distance matrix") {
  carrier c("xy", {"x", "y"});
  vrel d = ext_rel(c, c, {{"0", "1"}, {"inf", "0"}});
  CHECK(compose(d, d) == d);
}

TEST_CASE("identity relation is neutral for composition") {
  splitmix64 rng(7);
  for (int i = 0; i < 50; ++i) {
    carrier x = gen_carrier(rng, "x", 4);
    carrier y = gen_carrier(rng, "y", 4);
    for (quantale_kind q : {quantale_kind::boolean, quantale_kind::ext_real, quantale_kind::unit_trunc}) {
      vrel r = gen_rel(rng, x, y, q);
      CHECK(compose(r, vrel::delta(x, q)) == r);
      CHECK(compose(vrel::delta(y, q), r) == r);
    }
  }
}

TEST_CASE("composition is associative") {
  splitmix64 rng(11);
  for (int i = 0; i < 50; ++i) {
    carrier x = gen_carrier(rng, "x", 3), y = gen_carrier(rng, "y", 3), z = gen_carrier(rng, "z", 3),
            w = gen_carrier(rng, "w", 3);
    for (quantale_kind q : {quantale_kind::boolean, quantale_kind::ext_real}) {
      vrel r = gen_rel(rng, x, y, q), s = gen_rel(rng, y, z, q), t = gen_rel(rng, z, w, q);
      CHECK(compose(t, compose(s, r)) == compose(compose(t, s), r));
    }
  }
}

TEST_CASE("converse is an involution and reverses composition") {
  splitmix64 rng(13);
  carrier c("ab", {"a", "b"});
  vrel asym = ext_rel(c, c, {{"0", "1"}, {"2", "0"}});
  vrel conv = converse(asym);
  CHECK(conv.at(0, 1) == qvalue::ext_real(rational(2)));
  CHECK(conv.at(1, 0) == qvalue::ext_real(rational(1)));
  carrier s2("st", {"s", "t"});
  vrel b = bool_rel(s2, s2, {{0, 1}});
  CHECK(converse(b).at(1, 0).truth());
  for (int i = 0; i < 50; ++i) {
    carrier x = gen_carrier(rng, "x", 3), y = gen_carrier(rng, "y", 3), z = gen_carrier(rng, "z", 3);
    vrel r = gen_rel(rng, x, y, quantale_kind::ext_real);
    vrel s = gen_rel(rng, y, z, quantale_kind::ext_real);
    CHECK(converse(converse(r)) == r);
    CHECK(converse(compose(s, r)) == compose(converse(r), converse(s)));
  }
}

TEST_CASE("graphs and cographs") {
  carrier x("x", {"x0", "x1"});
  carrier y("y", {"y0"});
  CHECK(graph_rel(identity_map(2), x, x, quantale_kind::boolean) == vrel::delta(x, quantale_kind::boolean));
  vrel g = graph_rel(set_map{0, 0}, x, y, quantale_kind::ext_real);
  CHECK(g.at(0, 0) == qvalue::ext_real(rational(0)));
  CHECK(g.at(1, 0) == qvalue::ext_real(rational(0)));
  // total maps: cograph after graph covers the diagonal
  splitmix64 rng(17);
  for (int i = 0; i < 30; ++i) {
    carrier a = gen_carrier(rng, "a", 4), b = gen_carrier(rng, "b", 4);
    set_map f = gen_map(rng, a.size(), b.size());
    vrel gf = graph_rel(f, a, b, quantale_kind::ext_real);
    vrel cf = cograph_rel(f, a, b, quantale_kind::ext_real);
    CHECK(leq_rel(vrel::delta(a, quantale_kind::ext_real), compose(cf, gf)));
  }
}

TEST_CASE("diagonal relations") {
  carrier y("y", {"y1", "y2"});
  std::vector<qvalue> units(2, qvalue::unit(quantale_kind::ext_real));
  CHECK(diag(units, y, quantale_kind::ext_real) == vrel::delta(y, quantale_kind::ext_real));
  std::vector<qvalue> g{qvalue::ext_real(rational(2)), qvalue::infinity()};
  vrel d = diag(g, y, quantale_kind::ext_real);
  CHECK(d.at(0, 0) == qvalue::ext_real(rational(2)));
  CHECK(d.at(0, 1).is_inf());
  CHECK(d.at(1, 1).is_inf());
}

TEST_CASE("graphs commute with diagonals, exhaustively up to size 4") {
  const std::vector<qvalue> vals{qvalue::ext_real(rational(0)), qvalue::ext_real(rational(1)), qvalue::infinity()};
  for (std::size_t nx = 1; nx <= 4; ++nx) {
    for (std::size_t ny = 1; ny <= 2; ++ny) {
      std::vector<std::string> xk, yk;
      for (std::size_t i = 0; i < nx; ++i) xk.push_back("x" + std::to_string(i));
      for (std::size_t i = 0; i < ny; ++i) yk.push_back("y" + std::to_string(i));
      carrier x("x", xk), y("y", yk);
      // all maps f: X -> Y
      std::size_t nmaps = 1;
      for (std::size_t i = 0; i < nx; ++i) nmaps *= ny;
      for (std::size_t code = 0; code < nmaps; ++code) {
        set_map f(nx);
        std::size_t c = code;
        for (std::size_t i = 0; i < nx; ++i) {
          f[i] = static_cast<int>(c % ny);
          c /= ny;
        }
        // all predicates g: Y -> sampled values
        std::size_t npreds = 1;
        for (std::size_t i = 0; i < ny; ++i) npreds *= vals.size();
        for (std::size_t pc = 0; pc < npreds; ++pc) {
          std::vector<qvalue> g;
          std::size_t p = pc;
          for (std::size_t i = 0; i < ny; ++i) {
            g.push_back(vals[p % vals.size()]);
            p /= vals.size();
          }
          std::vector<qvalue> gf;
          for (std::size_t i = 0; i < nx; ++i) gf.push_back(g[f[i]]);
          vrel lhs = compose(graph_rel(f, x, y, quantale_kind::ext_real), diag(gf, x, quantale_kind::ext_real));
          vrel rhs = compose(diag(g, y, quantale_kind::ext_real), graph_rel(f, x, y, quantale_kind::ext_real));
          REQUIRE(lhs == rhs);
        }
      }
    }
  }
}

TEST_CASE("relational image") {
  splitmix64 rng(23);
  for (int i = 0; i < 30; ++i) {
    carrier x = gen_carrier(rng, "x", 4);
    vrel d = vrel::delta(x, quantale_kind::ext_real);
    std::vector<qvalue> f;
    for (std::size_t k = 0; k < x.size(); ++k) f.push_back(gen_value(rng, quantale_kind::ext_real));
    CHECK(rel_image(d, f) == f);
  }
  carrier x("x", {"x1", "x2"});
  carrier y("y", {"y1", "y2"});
  vrel r = bool_rel(x, y, {{0, 0}, {0, 1}});
  std::vector<qvalue> pred{qvalue::boolean(true), qvalue::boolean(false)};
  auto img = rel_image(r, pred);
  CHECK(img[0].truth());
  CHECK(img[1].truth());
  carrier x1("x", {"x"});
  carrier y1("y", {"y"});
  vrel r2(x1, y1, quantale_kind::ext_real, qvalue::ext_real(rational(2)));
  auto img2 = rel_image(r2, {qvalue::ext_real(rational(1))});
  CHECK(img2[0] == qvalue::ext_real(rational(3)));
}

TEST_CASE("structure reports on endorelations") {
  carrier c("xy", {"x", "y"});
  auto rep = check_vcategory(vrel::delta(c, quantale_kind::boolean));
  CHECK(rep.reflexive);
  CHECK(rep.transitive);
  CHECK(rep.symmetric);
  CHECK(rep.separated);

  vrel metric = ext_rel(c, c, {{"0", "1"}, {"1", "0"}});
  rep = check_vcategory(metric);
  CHECK(rep.reflexive);
  CHECK(rep.transitive);
  CHECK(rep.symmetric);
  CHECK(rep.separated);

  vrel hemi = ext_rel(c, c, {{"0", "1"}, {"3", "0"}});
  rep = check_vcategory(hemi);
  CHECK(rep.reflexive);
  CHECK(rep.transitive);
  CHECK_FALSE(rep.symmetric);

  carrier xyz("xyz", {"x", "y", "z"});
  CHECK_THROWS_AS(check_vcategory(bool_rel(c, xyz, {})), validation_error);
}

TEST_CASE("pointwise order on relations") {
  carrier c("xy", {"x", "y"});
  vrel lo = ext_rel(c, c, {{"1", "2"}, {"3", "4"}});
  vrel hi = ext_rel(c, c, {{"0", "2"}, {"1", "4"}});
  CHECK(leq_rel(lo, hi));
  CHECK(leq_rel(lo, lo));
  CHECK_FALSE(leq_rel(hi, lo));
  vrel mixed = ext_rel(c, c, {{"0", "3"}, {"3", "4"}});
  CHECK_FALSE(leq_rel(lo, mixed));
  CHECK_FALSE(leq_rel(mixed, lo));
}

TEST_CASE("distributor check and the four-way agreement") {
  carrier x("x", {"x1", "x2"});
  carrier y("y", {"y"});
  // with discrete structures every relation is a distributor
  splitmix64 rng(31);
  for (int i = 0; i < 30; ++i) {
    vrel r = gen_rel(rng, x, y, quantale_kind::ext_real);
    CHECK(is_distributor(r, vcat::discrete(x, quantale_kind::ext_real), vcat::discrete(y, quantale_kind::ext_real)));
  }

  // a hemimetric source structure rules out relations that shortcut it:
  // moving from x1 to x2 costs 1, so r(x1,y) may exceed r(x2,y) by at most 1
  vrel dxr = ext_rel(x, x, {{"0", "1"}, {"inf", "0"}});
  vcat dx = vcat::checked(dxr);
  vcat dy = vcat::discrete(y, quantale_kind::ext_real);
  vrel bad(x, y, quantale_kind::ext_real, qvalue::ext_real(rational(0)));
  bad.set(0, 0, qvalue::ext_real(rational(2)));  // r(x1,y)=2 > 1 + r(x2,y)=1
  CHECK_FALSE(is_distributor(bad, dx, dy));
  auto agreement = check_distributor_consistent(bad, dx, dy);
  CHECK(agreement.agree());
  CHECK_FALSE(agreement.verdict());

  // down/up-closed boolean relation between preorders
  vrel ordx = bool_rel(x, x, {{0, 0}, {1, 1}, {0, 1}});
  carrier y2("y2", {"y1", "y2"});
  vrel ordy = bool_rel(y2, y2, {{0, 0}, {1, 1}, {0, 1}});
  vrel rel = bool_rel(x, y2, {{0, 0}, {0, 1}, {1, 1}});
  // close r under the preorders so it becomes a genuine distributor
  vrel closed = compose(ordy, compose(rel, ordx));
  CHECK(is_distributor(closed, vcat::checked(ordx), vcat::checked(ordy)));

  for (quantale_kind q : {quantale_kind::boolean, quantale_kind::ext_real, quantale_kind::unit_trunc}) {
    splitmix64 rng2(41);
    for (int i = 0; i < 200; ++i) {
      carrier cx = gen_carrier(rng2, "x", 4);
      carrier cy = gen_carrier(rng2, "y", 4);
      vcat gx = gen_cat(rng2, cx, q);
      vcat gy = gen_cat(rng2, cy, q);
      vrel r = gen_rel(rng2, cx, cy, q);
      if (i % 2 == 0) r = compose(gy.rel(), compose(r, gx.rel()));
      REQUIRE(check_distributor_consistent(r, gx, gy).agree());
    }
  }
}

TEST_CASE("composition order agrees with its pointwise hom reformulation") {
  splitmix64 rng(47);
  for (quantale_kind q : {quantale_kind::boolean, quantale_kind::ext_real, quantale_kind::unit_trunc}) {
    for (int i = 0; i < 80; ++i) {
      carrier x = gen_carrier(rng, "x", 3), y = gen_carrier(rng, "y", 3), z = gen_carrier(rng, "z", 3);
      vrel r = gen_rel(rng, x, y, q);
      vrel s = gen_rel(rng, y, z, q);
      vrel t = gen_rel(rng, x, z, q);
      bool direct = leq_rel(compose(s, r), t);
      // s(y,z) below hom(r(x,y), t(x,z)) for every triple
      bool residual = true;
      for (std::size_t a = 0; a < x.size() && residual; ++a) {
        for (std::size_t b = 0; b < y.size() && residual; ++b) {
          for (std::size_t c = 0; c < z.size(); ++c) {
            if (!leq(s.at(b, c), hom(r.at(a, b), t.at(a, c)))) {
              residual = false;
              break;
            }
          }
        }
      }
      REQUIRE(direct == residual);
    }
  }
}
