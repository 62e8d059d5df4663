#include "doctest.h"
#include "dvr/sampling.hpp"
#include "dvr/smith.hpp"

using namespace dvr;

namespace {

QSeries q(const char* text) { return parse_series<Rational>(text, FieldConfig::rational()); }

QMatrix m2(const char* a, const char* b, const char* c, const char* d) {
  return QMatrix::from_rows({{q(a), q(b)}, {q(c), q(d)}});
}

bool unit_det(const QMatrix& m) { return det(m).order == Valuation::finite(0); }

}  // namespace

TEST_CASE("smith normal form on small examples") {
  QMatrix d = QMatrix::diag_u({1, 3, 4}, 3, 3);
  CHECK(smith_normal_form(d).exponents == std::vector<int>{1, 3, 4});
  CHECK(smith_normal_form(QMatrix::identity(3)).exponents == std::vector<int>{0, 0, 0});
  CHECK(smith_normal_form(m2("0", "1", "u", "0")).exponents == std::vector<int>{0, 1});
  CHECK(smith_normal_form(QMatrix::diag_u({4, 1, 3}, 3, 3)).exponents == std::vector<int>{1, 3, 4});
  CHECK_THROWS_AS(smith_normal_form(QMatrix(0, 2)), DomainError);
}

TEST_CASE("zero factors need an exactly zero residual") {
  CHECK(smith_normal_form(m2("1", "0", "0", "0")).exponents == std::vector<int>{0, kInfinite});
  // Exact but not monomial: the residual is O(u^16) after inversion, certified by exact rank.
  CHECK(smith_normal_form(m2("1 + u", "1 + u", "1", "1")).exponents ==
        std::vector<int>{0, kInfinite});
  CHECK_THROWS_AS(smith_normal_form(m2("1", "0", "0", "O(u^5)")), PrecisionError);
  CHECK_THROWS_AS(smith_normal_form(m2("u^3", "0", "0", "O(u^2)")), PrecisionError);
  CHECK_THROWS_AS(smith_normal_form(m2("u", "0", "0", "O(u^2)")), PrecisionError);
  CHECK(smith_normal_form(m2("u", "0", "0", "u^2 + O(u^4)")).exponents == std::vector<int>{1, 2});
}

TEST_CASE("rectangular matrices use the main diagonal") {
  QMatrix a(2, 3);
  a(0, 1) = q("u^2");
  a(1, 2) = q("u + u^2");
  a(1, 0) = q("u^2");
  auto r = smith_normal_form(a);
  CHECK(r.exponents == std::vector<int>{1, 2});
  CHECK((r.U * a * r.V).agrees_with(r.D));
  CHECK(factors_via_minors(a) == r.exponents);
}

TEST_CASE("factors via minors") {
  CHECK(factors_via_minors(QMatrix::diag_u({1, 3, 4}, 3, 3)) == std::vector<int>{1, 3, 4});
  CHECK(factors_via_minors(QMatrix::identity(4)) == std::vector<int>{0, 0, 0, 0});
  CHECK(factors_via_minors(m2("1", "1", "1", "1")) == std::vector<int>{0, kInfinite});
  CHECK(factors_via_minors(QMatrix(2, 2)) == std::vector<int>{kInfinite, kInfinite});
}

TEST_CASE("determinant and order factor") {
  auto d = det(m2("0", "1", "u", "0"));
  CHECK(d.value == q("-u"));
  CHECK(d.order == Valuation::finite(1));
  CHECK(det(QMatrix::identity(3)).value == q("1"));
  auto d3 = det(QMatrix::diag_u({1, 3, 4}, 3, 3));
  CHECK(d3.value == q("u^8"));
  CHECK(d3.order == Valuation::finite(8));
  CHECK(det(m2("1", "1", "1", "1")).order == Valuation::infinite());
}

TEST_CASE("adjugate") {
  CHECK(adjugate(m2("1 + u", "2", "u^2", "3")) == m2("3", "-2", "-u^2", "1 + u"));
  CHECK(adjugate(QMatrix::identity(3)) == QMatrix::identity(3));
  Sampler s(21);
  for (int i = 0; i < 50; ++i) {
    QMatrix a = s.matrix(3, 3, 12);
    QSeries dv = det(a).value;
    QMatrix di = QMatrix::identity(3).scaled(dv);
    CHECK((a * adjugate(a)).agrees_with(di));
    CHECK((adjugate(a) * a).agrees_with(di));
  }
}

TEST_CASE("two by two fast path") {
  CHECK(two_by_two_factors(m2("u", "u^2", "u^2", "u")) == std::pair{1, 1});
  CHECK(two_by_two_factors(m2("0", "1", "u", "0")) == std::pair{0, 1});
  CHECK(two_by_two_factors(QMatrix::identity(2)) == std::pair{0, 0});
  Sampler s(5);
  for (int i = 0; i < 200; ++i) {
    QMatrix a = s.matrix(2, 2, 12);
    std::vector<int> ex;
    try {
      ex = smith_normal_form(a).exponents;
    } catch (const PrecisionError&) {
      continue;
    }
    auto [x, y] = two_by_two_factors(a);
    CHECK(ex[0] == x);
    CHECK(ex[1] == y);
  }
}

TEST_CASE("snf agrees with minors on random matrices, with valid transforms") {
  Sampler s(1);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    int r = s.integer(1, 5), c = s.integer(1, 5);
    QMatrix a = s.matrix(r, c, 16, 3, 0.3);
    SNFOptions opt;
    opt.track_u_inverse = true;
    SNFResult<Rational> res;
    std::vector<int> minors;
    try {
      res = smith_normal_form(a, opt);
      minors = factors_via_minors(a);
    } catch (const PrecisionError&) {
      continue;
    }
    ++checked;
    CHECK(res.exponents == minors);
    CHECK(std::is_sorted(res.exponents.begin(), res.exponents.end()));
    CHECK((res.U * a * res.V).agrees_with(res.D));
    CHECK(unit_det(res.U));
    CHECK(unit_det(res.V));
    CHECK((res.U * *res.U_inv).agrees_with(QMatrix::identity(r)));
  }
  CHECK(checked > 250);
}

TEST_CASE("invariant factors survive automorphisms") {
  Sampler s(2);
  for (int i = 0; i < 100; ++i) {
    int n = s.integer(1, 4);
    QMatrix a = s.matrix(n, n, 16);
    QMatrix p = s.invertible(n, 16), r = s.invertible(n, 16);
    std::vector<int> before, after;
    try {
      before = smith_normal_form(a).exponents;
      after = smith_normal_form(p * a * r).exponents;
    } catch (const PrecisionError&) {
      continue;
    }
    CHECK(before == after);
  }
}

TEST_CASE("injective square matrices: no zero factor and ν(det) is the exponent sum") {
  Sampler s(3);
  for (int i = 0; i < 100; ++i) {
    int n = s.integer(1, 4);
    QMatrix a = s.matrix(n, n, 16, 2, 0.0);
    auto d = det(a);
    if (!d.order.is_finite()) continue;
    auto ex = smith_normal_form(a).exponents;
    int sum = 0;
    for (int e : ex) {
      CHECK(e != kInfinite);
      sum += e;
    }
    CHECK(sum == d.order.value);
  }
}

TEST_CASE("exact rank") {
  CHECK(exact_rank(m2("1 + u", "1 + u", "1", "1")) == 1);
  CHECK(exact_rank(m2("u", "1", "u^2", "u")) == 1);
  CHECK(exact_rank(QMatrix::diag_u({2, 5}, 2, 2)) == 2);
  CHECK_THROWS_AS(exact_rank(m2("O(u^3)", "0", "0", "1")), DomainError);
}

TEST_CASE("novikov coefficients") {
  FieldConfig cfg = FieldConfig::novikov(Rational(8), 0);
  auto p = [&](const char* t) { return parse_series<NovikovElem>(t, cfg); };
  NMatrix a = NMatrix::from_rows({{p("T"), p("u")}, {p("u*T^(1/3)"), p("T^(-2/3)*u^2 + u^2")}}, cfg);
  auto r = smith_normal_form(a);
  CHECK(r.exponents == factors_via_minors(a));
  CHECK(r.exponents == std::vector<int>{0, 2});
}
