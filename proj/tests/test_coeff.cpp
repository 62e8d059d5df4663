#include <random>

#include "doctest.h"
#include "dvr/field.hpp"

using dvr::FieldConfig;
using dvr::NovikovElem;
using dvr::Rational;

namespace {

NovikovElem nov(const char* text, int tprec = 4) {
  return dvr::FieldTraits<NovikovElem>::parse(text, FieldConfig::novikov(Rational(tprec), 0));
}

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  return Rational(num(rng), den(rng));
}

NovikovElem random_novikov(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nterms(1, 4), expn(-6, 12), den(1, 3);
  std::vector<NovikovElem::Term> terms;
  int n = nterms(rng);
  for (int i = 0; i < n; ++i) terms.push_back({Rational(expn(rng), den(rng)), random_rational(rng)});
  return NovikovElem::from_terms(terms, Rational(6), 0);
}

}  // namespace

TEST_CASE("rational arithmetic is exact and reduced") {
  CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
  CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
  CHECK(Rational(6, -4) == Rational(-3, 2));
  CHECK(Rational(-3, 2).den_small() == 2);
  CHECK(Rational::parse("10/4") == Rational(5, 2));
  CHECK(Rational::parse(" -7 ") == Rational(-7));
  CHECK_THROWS_AS(Rational(0).inv(), dvr::DomainError);
  CHECK_THROWS_AS(Rational::parse("1/0"), dvr::InputError);
}

TEST_CASE("rational overflow spills to GMP and back") {
  Rational big(std::int64_t(1) << 62);
  Rational sq = big * big * big;
  CHECK_FALSE(sq.fits_small());
  Rational back = sq / (big * big);
  CHECK(back.fits_small());
  CHECK(back == big);
  CHECK((sq - sq).is_zero());
  CHECK(sq.to_string() == "98079714615416886934934209737619787751599303819750539264");
}

TEST_CASE_TEMPLATE("field axioms hold exactly on random rationals", T, Rational) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    T a = random_rational(rng), b = random_rational(rng), c = random_rational(rng);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    if (!a.is_zero()) CHECK(a * a.inv() == T(1));
  }
}

TEST_CASE("novikov addition") {
  CHECK(nov("1 + T") + nov("-1 + T") == nov("2*T"));
  NovikovElem a = NovikovElem::monomial(Rational(1), Rational(1, 2), Rational(3), 0);
  NovikovElem b = NovikovElem::monomial(Rational(1), Rational(5, 2), Rational(2), 0);
  NovikovElem s = a + b;
  REQUIRE(s.terms().size() == 1);
  CHECK(s.terms()[0].first == Rational(1, 2));
  CHECK(*s.precision() == Rational(2));
}

TEST_CASE("novikov multiplication") {
  NovikovElem t = NovikovElem::monomial(Rational(1), Rational(1));
  CHECK(t * t == NovikovElem::monomial(Rational(1), Rational(2)));
  NovikovElem p = nov("1 + T") * nov("1 - T");
  CHECK(p == nov("1 - T^2"));
  CHECK(*p.precision() == Rational(4));
}

TEST_CASE("novikov inverse") {
  NovikovElem i = nov("1 + T").inv();
  CHECK(i == nov("1 - T + T^2 - T^3"));
  NovikovElem t = NovikovElem::monomial(Rational(1), Rational(1));
  CHECK(t.inv() == NovikovElem::monomial(Rational(1), Rational(-1)));
  CHECK_THROWS_AS(NovikovElem(0).inv(), dvr::DomainError);
  CHECK_THROWS_AS(NovikovElem::unknown(Rational(3), 0).inv(), dvr::PrecisionError);
  NovikovElem f = nov("3/2*T^(1/3) - T^2", 5);
  CHECK(f.terms().size() == 2);
  CHECK(f.terms()[0].first == Rational(1, 3));
}

TEST_CASE("novikov inverse precision is P - 2v") {
  NovikovElem a = nov("2*T + T^2", 5);
  NovikovElem i = a.inv();
  CHECK(*i.precision() == Rational(3));
  CHECK(i.valuation() == Rational(-1));
  CHECK(dvr::agree(a * i, NovikovElem(1)));
}

TEST_CASE("novikov mismatched gradings are rejected") {
  NovikovElem a = NovikovElem::monomial(Rational(1), Rational(1), std::nullopt, 0);
  NovikovElem b = NovikovElem::monomial(Rational(1), Rational(1), std::nullopt, 2);
  CHECK_THROWS_AS(a + b, dvr::ConfigError);
  CHECK_THROWS_AS(a * b, dvr::ConfigError);
}

TEST_CASE("random novikov: a * inv(a) = 1 and valuations add") {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    NovikovElem a = random_novikov(rng), b = random_novikov(rng);
    if (a.is_zero()) continue;
    NovikovElem ai = a.inv();
    CHECK(dvr::agree(a * ai, NovikovElem(1)));
    CHECK(ai.valuation() == -a.valuation());
    if (!b.is_zero()) {
      NovikovElem ab = a * b;
      if (!ab.is_zero()) CHECK(ab.valuation() == a.valuation() + b.valuation());
    }
    ++checked;
  }
  CHECK(checked > 900);
}
