#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "laxconf/quantale.hpp"

using namespace laxconf;

namespace {

std::vector<qvalue> samples(quantale_kind k) {
  switch (k) {
    case quantale_kind::boolean: return {qvalue::boolean(false), qvalue::boolean(true)};
    case quantale_kind::ext_real:
      return {qvalue::ext_real(rational(0)), qvalue::ext_real(rational(1, 2)), qvalue::ext_real(rational(1)),
              qvalue::ext_real(rational(2)), qvalue::infinity()};
    case quantale_kind::unit_trunc:
      return {qvalue::unit_trunc(rational(0)), qvalue::unit_trunc(rational(1, 2)), qvalue::unit_trunc(rational(1))};
  }
  return {};
}

const quantale_kind all_kinds[] = {quantale_kind::boolean, quantale_kind::ext_real, quantale_kind::unit_trunc};

}  // namespace

TEST_CASE("rational arithmetic stays normalized and exact") {
  CHECK(rational(3, 6) == rational(1, 2));
  CHECK(rational::parse("7/21") == rational(1, 3));
  CHECK(rational::parse("-4/2") == rational(-2));
  CHECK((rational(1, 3) + rational(1, 6)) == rational(1, 2));
  CHECK((rational(2, 3) * rational(3, 4)) == rational(1, 2));
  CHECK(rational(1, 2).str() == "1/2");
  CHECK(rational(5).str() == "5");
  CHECK(rational::from_double(0.5) == rational(1, 2));
  CHECK(rational::from_double(0.1, 1000000) == rational(1, 10));
  CHECK_THROWS_AS(rational(1, 0), validation_error);
  CHECK_THROWS_AS((void)(rational(1, 3) + rational(1, 2000000011) * rational(1, 2000000033)), cap_error);
}

TEST_CASE("tensor on the three quantales") {
  CHECK(tensor(qvalue::boolean(true), qvalue::boolean(true)) == qvalue::boolean(true));
  CHECK(tensor(qvalue::ext_real(rational(2)), qvalue::ext_real(rational(3))) == qvalue::ext_real(rational(5)));
  CHECK(tensor(qvalue::infinity(), qvalue::ext_real(rational(4))) == qvalue::infinity());
  CHECK(tensor(qvalue::unit_trunc(rational(3, 4)), qvalue::unit_trunc(rational(1, 2))) ==
        qvalue::unit_trunc(rational(1)));
  CHECK_THROWS_AS(tensor(qvalue::boolean(true), qvalue::ext_real(rational(1))), validation_error);
}

TEST_CASE("hom on the three quantales") {
  CHECK(hom(qvalue::boolean(true), qvalue::boolean(false)) == qvalue::boolean(false));
  CHECK(hom(qvalue::boolean(false), qvalue::boolean(false)) == qvalue::boolean(true));
  CHECK(hom(qvalue::ext_real(rational(3)), qvalue::ext_real(rational(5))) == qvalue::ext_real(rational(2)));
  CHECK(hom(qvalue::ext_real(rational(5)), qvalue::ext_real(rational(3))) == qvalue::ext_real(rational(0)));
  CHECK(hom(qvalue::infinity(), qvalue::ext_real(rational(3))) == qvalue::ext_real(rational(0)));
  CHECK(hom(qvalue::ext_real(rational(3)), qvalue::infinity()) == qvalue::infinity());
}

TEST_CASE("join and meet, including empty input") {
  std::vector<qvalue> v{qvalue::ext_real(rational(2)), qvalue::ext_real(rational(5))};
  CHECK(join(v, quantale_kind::ext_real) == qvalue::ext_real(rational(2)));
  CHECK(join(std::vector<qvalue>{}, quantale_kind::ext_real) == qvalue::infinity());
  CHECK(meet(std::vector<qvalue>{}, quantale_kind::ext_real) == qvalue::ext_real(rational(0)));
  std::vector<qvalue> b{qvalue::boolean(true), qvalue::boolean(false), qvalue::boolean(true)};
  CHECK(meet(b, quantale_kind::boolean) == qvalue::boolean(false));
  CHECK(join(std::vector<qvalue>{}, quantale_kind::unit_trunc) == qvalue::unit_trunc(rational(1)));
}

TEST_CASE("adjunction between tensor and hom, all sampled triples") {
  for (quantale_kind k : all_kinds) {
    auto vs = samples(k);
    for (const auto& a : vs) {
      for (const auto& b : vs) {
        for (const auto& c : vs) {
          CHECK(leq(tensor(a, c), b) == leq(c, hom(a, b)));
        }
      }
    }
  }
}

TEST_CASE("tensor distributes over finite joins") {
  for (quantale_kind k : all_kinds) {
    auto vs = samples(k);
    for (const auto& a : vs) {
      for (const auto& s1 : vs) {
        for (const auto& s2 : vs) {
          std::vector<qvalue> set{s1, s2};
          std::vector<qvalue> mapped{tensor(a, s1), tensor(a, s2)};
          CHECK(tensor(a, join(set, k)) == join(mapped, k));
        }
      }
    }
  }
}

TEST_CASE("commutative monoid laws with two-sided unit") {
  for (quantale_kind k : all_kinds) {
    auto vs = samples(k);
    const qvalue unit = qvalue::unit(k);
    for (const auto& a : vs) {
      CHECK(tensor(a, unit) == a);
      CHECK(tensor(unit, a) == a);
      for (const auto& b : vs) {
        CHECK(tensor(a, b) == tensor(b, a));
        for (const auto& c : vs) {
          CHECK(tensor(tensor(a, b), c) == tensor(a, tensor(b, c)));
        }
      }
    }
  }
}

TEST_CASE("carrier membership is enforced") {
  CHECK_THROWS_AS(qvalue::unit_trunc(rational(3, 2)), validation_error);
  CHECK_THROWS_AS(qvalue::ext_real(rational(-1)), validation_error);
  CHECK_THROWS_AS(qvalue::of(quantale_kind::boolean, rational(1, 2)), validation_error);
  CHECK(qvalue::parse(quantale_kind::ext_real, "inf").is_inf());
  CHECK_THROWS_AS(qvalue::parse(quantale_kind::boolean, "inf"), parse_error);
}
