#include <random>

#include "doctest.h"
#include "dvr/useries.hpp"

using dvr::FieldConfig;
using dvr::QSeries;
using dvr::Rational;
using dvr::SeriesKind;
using dvr::Valuation;

namespace {

QSeries q(const char* text, SeriesKind kind = SeriesKind::power) {
  return dvr::parse_series<Rational>(text, FieldConfig::rational(), kind);
}

QSeries random_series(std::mt19937_64& rng, int prec, int min_exp = 0) {
  std::uniform_int_distribution<int> coef(-4, 4), nterms(0, 5), e(min_exp, min_exp + prec - 1);
  std::vector<QSeries::Term> t;
  int n = nterms(rng);
  for (int i = 0; i < n; ++i) t.push_back({e(rng), Rational(coef(rng))});
  return QSeries::from_terms(t, min_exp + prec, min_exp < 0 ? SeriesKind::laurent : SeriesKind::power);
}

}  // namespace

TEST_CASE("series multiplication") {
  CHECK(q("u*(1+u)") * q("1") == q("u + u^2"));
  CHECK(q("3 + u") * q("u^2") == q("3*u^2 + u^3"));
  CHECK_THROWS_AS(q("u^-1", SeriesKind::tail) * q("1", SeriesKind::tail), dvr::DomainError);
  QSeries a = q("1 + u + O(u^5)");
  QSeries b = q("u^2 + O(u^4)");
  CHECK((a * b).precision() == 4);
  CHECK((q("u^3") * q("O(u^2)")).precision() == 5);
}

TEST_CASE("series inverse") {
  CHECK(q("1 + u + O(u^4)").inv() == q("1 - u + u^2 - u^3 + O(u^4)"));
  CHECK_THROWS_AS(q("u").inv(), dvr::DomainError);
  CHECK(q("u", SeriesKind::laurent).inv() == q("u^-1", SeriesKind::laurent));
  QSeries capped = q("1 + u").inv(6);
  CHECK(capped.precision() == 6);
  CHECK(capped.terms().size() == 6);
  CHECK_THROWS_AS(q("O(u^3)").inv(), dvr::PrecisionError);
}

TEST_CASE("laurent inverse tracks precision") {
  QSeries a = q("2*u^2 + u^3 + O(u^6)", SeriesKind::laurent);
  QSeries ai = a.inv();
  CHECK(ai.precision() == 2);
  CHECK(ai.valuation() == Valuation::finite(-2));
  CHECK((a * ai).agrees_with(q("1", SeriesKind::laurent)));
}

TEST_CASE("valuation") {
  CHECK(q("u^2*(3 + u)").valuation() == Valuation::finite(2));
  CHECK(q("0").valuation() == Valuation::infinite());
  CHECK(q("O(u^12)").valuation() == Valuation::at_least(12));
  CHECK(q("0*u + O(u^12)").valuation() == Valuation::at_least(12));
}

TEST_CASE("localise and tail projection") {
  CHECK(q("1 + u").localise() == q("1 + u", SeriesKind::laurent));
  CHECK(q("0").localise().is_exact_zero());
  CHECK(q("u^3").localise().inv() == q("u^-3", SeriesKind::laurent));
  CHECK(q("u^-2 + 5 + 7*u", SeriesKind::laurent).tail_project() == q("u^-2 + 5", SeriesKind::tail));
  CHECK(q("u^3", SeriesKind::laurent).tail_project().no_terms());
  CHECK(q("3", SeriesKind::laurent).tail_project() == q("3", SeriesKind::tail));
  CHECK_THROWS_AS(q("u^-2 + O(u^0)", SeriesKind::laurent).tail_project(), dvr::PrecisionError);
}

TEST_CASE("u acting on tails") {
  CHECK(q("u^-2 + 1", SeriesKind::tail).tail_u_mul(1) == q("u^-1", SeriesKind::tail));
  CHECK(q("1", SeriesKind::tail).tail_u_mul(1).no_terms());
  CHECK(q("u^-3", SeriesKind::tail).tail_u_mul(3) == q("1", SeriesKind::tail));
  CHECK(q("1 + u", SeriesKind::power) * q("u^-1", SeriesKind::tail) == q("u^-1 + 1", SeriesKind::tail));
  CHECK_THROWS_AS(q("1 + O(u^1)") * q("u^-2", SeriesKind::tail), dvr::PrecisionError);
}

TEST_CASE("literal grammar") {
  CHECK(q("2*u^1 + (1/2)*u^3") == QSeries::from_terms({{1, Rational(2)}, {3, Rational(1, 2)}}));
  CHECK(q("-u^2 + O(u^4)").to_string() == "-u^2 + O(u^4)");
  CHECK(q("3/4 - 2*u^2").to_string() == "3/4 - 2*u^2");
  CHECK_THROWS_AS(q("u^-1"), dvr::InputError);
  CHECK_THROWS_AS(q("2*T"), dvr::InputError);
  CHECK_THROWS_AS(q("1 + O(u^3) + u"), dvr::InputError);
  CHECK_THROWS_AS(q("u^-1 + O(u^2)", SeriesKind::tail), dvr::InputError);
}

TEST_CASE("novikov coefficients in series") {
  FieldConfig cfg = FieldConfig::novikov(Rational(6), 2);
  auto s = dvr::parse_series<dvr::NovikovElem>("T + (2 - T^(1/3))*u^2 + O(u^5)", cfg);
  CHECK(s.precision() == 5);
  CHECK(s.terms().size() == 2);
  auto si = s.inv();
  CHECK((s * si).agrees_with(dvr::NSeries::constant(dvr::NovikovElem(1))));
}

TEST_CASE("valuation axioms on random series") {
  std::mt19937_64 rng(3);
  int mult_checked = 0;
  for (int i = 0; i < 1000; ++i) {
    QSeries a = random_series(rng, 10), b = random_series(rng, 10);
    Valuation va = a.valuation(), vb = b.valuation();
    if (va.is_finite() && vb.is_finite()) {
      CHECK((a * b).valuation() == Valuation::finite(va.value + vb.value));
      ++mult_checked;
      Valuation vs = (a + b).valuation();
      int m = std::min(va.value, vb.value);
      CHECK(vs.lower_bound() >= m);
      if (va.value != vb.value) CHECK(vs == Valuation::finite(m));
    }
  }
  CHECK(mult_checked > 500);
}

TEST_CASE("inverse of random units") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 1000; ++i) {
    QSeries a = random_series(rng, 12) + QSeries::constant(Rational(1 + i % 5));
    if (a.coefficient(0).is_zero()) continue;
    CHECK((a.inv() * a).agrees_with(QSeries::constant(Rational(1))));
  }
}

TEST_CASE("localise, tail_project, u^{j+1} kill exactly valuation >= -j") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 500; ++i) {
    QSeries a = random_series(rng, 12, -6);
    if (a.kind() == SeriesKind::power) a = a.localise();
    for (int j = 0; j <= 6; ++j) {
      bool killed = a.tail_project().tail_u_mul(j + 1).no_terms();
      Valuation v = a.valuation();
      bool expected = v.is_infinite() || v.lower_bound() >= -j;
      CHECK(killed == expected);
    }
  }
}
