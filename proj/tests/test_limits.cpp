#include <random>

#include "doctest.h"
#include "dvr/limits.hpp"
#include "dvr/literal.hpp"

using namespace dvr;

namespace {

QSeries q(const char* text) { return parse_series<Rational>(text, FieldConfig::rational()); }

QMatrix m2(const char* a, const char* b, const char* c, const char* d) {
  return QMatrix::from_rows({{q(a), q(b)}, {q(c), q(d)}});
}

struct Rng {
  std::mt19937_64 g;
  explicit Rng(std::uint64_t s) : g(s) {}
  int uni(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(g); }
  Rational coef() { return Rational(uni(1, 3) * (coin() ? 1 : -1), uni(1, 2)); }
  QSeries poly(int lo, int hi) {
    QSeries s;
    for (int k = lo; k <= hi; ++k)
      if (coin()) s += QSeries::monomial(coef(), k);
    return s;
  }
};

// A = I + N, N strictly upper triangular with polynomial entries; returns (A, A^{-1}).
std::pair<QMatrix, QMatrix> unipotent(Rng& r, int n) {
  QMatrix N(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (r.coin()) N(i, j) = r.poly(0, 2);
  QMatrix A = QMatrix::identity(n) + N, inv = QMatrix::identity(n), term = QMatrix::identity(n);
  QMatrix negN = N.scaled(QSeries::constant(Rational(-1)));
  for (int l = 1; l < n; ++l) {
    term = term * negN;
    inv = inv + term;
  }
  return {A, inv};
}

// Diagonal system with known coordinate exponents, conjugated stage by stage:
// Q'_k = A_{k+1} Q_k A_k^{-1}.  e[k][i] = kInfinite marks a zero entry.
DirectedSystem<Rational> disguised(Rng& r, const std::vector<std::vector<int>>& e) {
  const int n = int(e[0].size()), K = int(e.size());
  std::vector<std::pair<QMatrix, QMatrix>> A;
  A.push_back({QMatrix::identity(n), QMatrix::identity(n)});
  for (int k = 1; k <= K; ++k) A.push_back(unipotent(r, n));
  DirectedSystem<Rational> sys;
  sys.rank = n;
  for (int k = 0; k < K; ++k) {
    QMatrix D(n, n);
    for (int i = 0; i < n; ++i)
      if (e[k][i] != kInfinite) D(i, i) = QSeries::monomial(r.coef(), e[k][i]);
    sys.steps.push_back(A[k + 1].first * D * A[k].second);
  }
  return sys;
}

}  // namespace

TEST_CASE("composite factors on small systems") {
  auto sys = DirectedSystem<Rational>::constant(QMatrix::diag_u({0, 1}, 2, 2), 6);
  CHECK(composite_factors(sys, 4) == std::vector<int>{0, 4});
  CHECK(composite_factors(sys, 0) == std::vector<int>{0, 0});

  DirectedSystem<Rational> alt;
  alt.rank = 2;
  for (int k = 0; k < 4; ++k) alt.steps.push_back(k % 2 ? m2("0", "1", "u", "0") : m2("0", "u", "1", "0"));
  CHECK(composite(alt, 2) == QMatrix::diag_u({0, 2}, 2, 2));
  CHECK(composite_factors(alt, 2) == std::vector<int>{0, 2});
  CHECK(composite_factors(alt, 4) == std::vector<int>{0, 4});

  CHECK_THROWS_AS(composite_factors(alt, 5), InputError);
  DirectedSystem<Rational> bad;
  bad.rank = 2;
  bad.steps.push_back(QMatrix::identity(3));
  CHECK_THROWS_AS(bad.validate(), InputError);

  auto gen = DirectedSystem<Rational>::from_generator(
      1, [](int k) { return QMatrix::diag_u({k % 2}, 1, 1); });
  CHECK(composite_factors(gen, 7) == std::vector<int>{3});
}

TEST_CASE("composite factors agree with minors and satisfy the adjugate identity") {
  Rng r(11);
  for (int trial = 0; trial < 40; ++trial) {
    int n = r.uni(1, 3);
    DirectedSystem<Rational> sys;
    sys.rank = n;
    for (int k = 0; k < 5; ++k) {
      QMatrix Q(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Q(i, j) = r.poly(0, 2);
      sys.steps.push_back(Q);
    }
    auto table = composite_factor_table(sys, 5);
    auto par = composite_factor_table(sys, 5, Exec::parallel);
    CHECK(table == par);
    for (int k = 0; k <= 5; ++k) {
      QMatrix R = composite(sys, k);
      CHECK(table[k] == factors_via_minors(R));
      QMatrix lhs = adjugate(R) * R;
      QMatrix rhs = QMatrix::identity(n).scaled(det(R).value);
      CHECK((lhs - rhs).is_exact_zero());
    }
  }
}

TEST_CASE("limit shapes") {
  auto diag = DirectedSystem<Rational>::constant(QMatrix::diag_u({0, 1}, 2, 2), 8);
  auto L = limit_shape(diag, 8);
  CHECK(L.to_string() == "K[[u]] ⊕ K((u))");
  CHECK(L.status == std::vector<LimitShape::Status>{LimitShape::Status::stabilized,
                                                    LimitShape::Status::diverging_at_window});
  CHECK_FALSE(L.certified);

  auto id = DirectedSystem<Rational>::constant(QMatrix::identity(3), 4);
  CHECK(limit_shape(id, 4).to_string() == "K[[u]]^3");

  auto nil = DirectedSystem<Rational>::constant(m2("0", "1", "u", "0"), 8);
  auto N = limit_shape(nil, 8);
  CHECK(N.certified);
  CHECK(N.to_string() == "K((u))^2");
  // The windowed route reaches the same verdict on its own.
  for (auto s : N.status) CHECK(s == LimitShape::Status::diverging_at_window);
  auto table = composite_factor_table(nil, 8);
  CHECK(table[8] == std::vector<int>{4, 4});

  // Exponents (1, 3) reached after two steps, then identity.
  DirectedSystem<Rational> late;
  late.rank = 2;
  late.steps = {QMatrix::diag_u({1, 2}, 2, 2), m2("1", "0", "0", "u"), QMatrix::identity(2),
                QMatrix::identity(2), QMatrix::identity(2)};
  CHECK(limit_shape(late, 5).to_string() == "u^{-1}K[[u]] ⊕ u^{-3}K[[u]]");
  CHECK_THROWS_AS(limit_shape(late, 5, 6), InputError);
}

TEST_CASE("localisation at an element") {
  CHECK(localise_at_element(QMatrix::diag_u({1}, 1, 1), 6).to_string() == "K((u))");
  CHECK(localise_at_element(QMatrix::identity(1), 6).to_string() == "K[[u]]");
  // Nilpotent mod u, det = u^2 != 0.
  auto L = localise_at_element(m2("u", "1", "u^2", "2*u"), 8);
  CHECK(L.certified);
  CHECK(L.to_string() == "K((u))^2");
  // Non-injective: the kernel of Q^r drops out.
  auto K1 = localise_at_element(m2("1", "0", "0", "0"), 6);
  CHECK(K1.to_string() == "K[[u]]");
  CHECK(K1.canonical_rank() == 1);
  // det = 0 with nilpotent u^0-part: the rank-one quotient is still a K((u))-module.
  CHECK(localise_at_element(m2("u", "1", "u^2", "u"), 8).to_string() == "K((u))");
  auto K2 = localise_at_element(m2("u", "1", "0", "0"), 6);
  CHECK(K2.to_string() == "K((u))");
  CHECK(localise_at_element(QMatrix(2, 2), 4).to_string() == "0");
}

TEST_CASE("windowed limits of disguised diagonal systems") {
  Rng r(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = r.uni(1, 3), K = 9;
    std::vector<std::vector<int>> e(K, std::vector<int>(n));
    std::vector<int> expect_stable;
    int expect_laurent = 0;
    for (int i = 0; i < n; ++i) {
      bool diverge = r.coin();
      int stop = r.uni(0, 4), total = 0;
      for (int k = 0; k < K; ++k) {
        e[k][i] = diverge ? r.uni(k < stop ? 0 : 1, 1) : (k < stop ? r.uni(0, 2) : 0);
        total += e[k][i];
      }
      if (diverge) {
        for (int k = K - n - 1; k < K; ++k) e[k][i] = 1;
        ++expect_laurent;
      } else {
        expect_stable.push_back(total);
      }
    }
    std::sort(expect_stable.begin(), expect_stable.end());
    auto sys = disguised(r, e);
    auto L = limit_shape(sys, K);
    CAPTURE(trial);
    CHECK(L.laurent_count == expect_laurent);
    CHECK(L.stable_exponents == expect_stable);
  }
}

TEST_CASE("single non-injective step") {
  // 0 then identity: the cokernel is reborn as K[[u]].
  DirectedSystem<Rational> z;
  z.rank = 1;
  z.steps = {QMatrix(1, 1), QMatrix::identity(1), QMatrix::identity(1), QMatrix::identity(1)};
  auto L = noninjective_limit(z, 1, 4);
  CHECK(L.kernel_rank == 1);
  CHECK(L.canonical_rank() == 0);
  CHECK(L.cokernel_stable == std::vector<int>{0});
  CHECK(L.to_string() == "K[[u]]");
  CHECK(limit_shape(z, 4).to_string() == "K[[u]]");

  // Zero step, then u·unit steps: K((u)) with vanishing canonical map.
  DirectedSystem<Rational> c;
  c.rank = 1;
  c.steps.push_back(QMatrix(1, 1));
  for (int k = 0; k < 6; ++k) c.steps.push_back(QMatrix::from_rows({{q("u + 2*u^2")}}));
  auto C = noninjective_limit(c, 1, 7);
  CHECK(C.to_string() == "K((u))");
  CHECK(C.canonical_rank() == 0);
  CHECK(C.cokernel_laurent == 1);

  // Errors.
  CHECK_THROWS_AS(noninjective_limit(c, 0, 7), InputError);
  CHECK_THROWS_AS(noninjective_limit(c, 2, 7), InputError);
  auto id = DirectedSystem<Rational>::constant(QMatrix::identity(2), 4);
  CHECK_THROWS_AS(noninjective_limit(id, 1, 4), InputError);
  CHECK(noninjective_limit(id, 0, 4).to_string() == "K[[u]]^2");
  DirectedSystem<Rational> two;
  two.rank = 1;
  two.steps = {QMatrix(1, 1), QMatrix::identity(1), QMatrix(1, 1), QMatrix::identity(1)};
  CHECK_THROWS_AS(noninjective_limit(two, 1, 4), DomainError);
  CHECK_THROWS_AS(limit_shape(two, 4), DomainError);

  // Disguised two-block systems with known image and cokernel exponents.
  Rng r(23);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = r.uni(2, 3), K = 10, p = r.uni(1, 3);
    std::vector<std::vector<int>> e(K, std::vector<int>(n));
    std::vector<int> kill(n);
    for (int i = 0; i < n; ++i) kill[i] = i == 0 ? 1 : int(r.coin());
    std::vector<int> stable_img, stable_cok;
    int laurent_img = 0, laurent_cok = 0;
    for (int i = 0; i < n; ++i) {
      bool diverge = r.coin();
      int sum_before = 0, sum_after = 0;
      for (int k = 0; k < K; ++k) {
        if (k == p - 1 && kill[i]) {
          e[k][i] = kInfinite;
          continue;
        }
        int v = diverge && k >= K - n - 2 ? 1 : (k < p + 2 && !diverge ? r.uni(0, 1) : 0);
        e[k][i] = v;
        (k < p ? sum_before : sum_after) += v;
      }
      if (kill[i]) {
        if (diverge) ++laurent_cok;
        else stable_cok.push_back(sum_after);
      } else {
        if (diverge) ++laurent_img;
        else stable_img.push_back(sum_before + sum_after);
      }
    }
    std::sort(stable_img.begin(), stable_img.end());
    std::sort(stable_cok.begin(), stable_cok.end());
    auto sys = disguised(r, e);
    CAPTURE(trial);
    auto L = noninjective_limit(sys, p, K);
    CHECK(L.kernel_rank == int(std::count(kill.begin(), kill.end(), 1)));
    CHECK(L.stable_exponents == stable_img);
    CHECK(L.laurent_count == laurent_img);
    CHECK(L.cokernel_stable == stable_cok);
    CHECK(L.cokernel_laurent == laurent_cok);
  }
}

TEST_CASE("composites of block steps") {
  Rng r(3);
  auto block_step = [&](int t, int s, bool zero_cd) {
    int n = t + s;
    QMatrix f(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        bool lower = i >= t;
        if (zero_cd && lower) continue;
        f(i, j) = r.poly(1, 3);
        if (i == j && i < t) f(i, j) += QSeries::constant(Rational(1));
      }
    return f;
  };
  for (int trial = 0; trial < 40; ++trial) {
    int t = r.uni(0, 3), s = r.uni(0, 3), k = r.uni(1, 6);
    if (t + s == 0) s = 1;
    auto rep = block_composite_factors<Rational>(t, s, k, [&](int) { return block_step(t, s, false); });
    CAPTURE(trial);
    CHECK(rep.ok());
    CHECK(int(rep.exponents.size()) == t + s);
  }
  auto dead = block_composite_factors<Rational>(2, 2, 5, [&](int) { return block_step(2, 2, true); });
  CHECK(dead.ok());
  CHECK(dead.exponents == std::vector<int>{0, 0, kInfinite, kInfinite});
  CHECK(dead.nullity == 2);
  auto none = block_composite_factors<Rational>(0, 2, 4, [&](int) { return block_step(0, 2, false); });
  CHECK(none.unit_count == 0);
  CHECK(none.min_nonunit >= 4);
  CHECK_THROWS_AS(block_composite_factors<Rational>(1, 1, 2, [](int) { return QMatrix::identity(2); }),
                  InputError);
}

TEST_CASE("persistence lattice") {
  auto diag = DirectedSystem<Rational>::constant(QMatrix::diag_u({0, 1}, 2, 2), 4);
  auto P = persistence_lattice(diag, 4);
  CHECK(P.shapes[3] == std::vector<int>{3});
  CHECK(P.duals[3] == std::vector<int>{1, 1, 1});
  CHECK(P.bars.size() == 4);
  CHECK(P.bars[2].column == 3);
  CHECK(P.bars[2].birth == 3);
  CHECK(P.barcode().rfind("row 1 col 1 born 1\n", 0) == 0);
  auto id = persistence_lattice(DirectedSystem<Rational>::constant(QMatrix::identity(2), 3), 3);
  CHECK(id.bars.empty());
  DirectedSystem<Rational> z;
  z.rank = 1;
  z.steps = {QMatrix(1, 1)};
  CHECK_THROWS_AS(persistence_lattice(z, 1), DomainError);

  Rng r(8);
  for (int trial = 0; trial < 20; ++trial) {
    DirectedSystem<Rational> sys;
    sys.rank = 3;
    for (int k = 0; k < 4; ++k) {
      QMatrix Q = QMatrix::diag_u({r.uni(0, 1), r.uni(0, 1), r.uni(0, 2)}, 3, 3);
      auto [A, Ainv] = unipotent(r, 3);
      sys.steps.push_back(A * Q * Ainv);
    }
    auto L = persistence_lattice(sys, 4);
    for (std::size_t k = 0; k < L.shapes.size(); ++k) {
      int cells = 0;
      for (int x : L.shapes[k]) cells += x;
      int born = 0;
      for (const Bar& b : L.bars) born += b.birth <= int(k);
      CHECK(cells == born);
    }
  }
}

TEST_CASE("crude composition bounds") {
  Rng r(19);
  for (int trial = 0; trial < 40; ++trial) {
    int n = r.uni(1, 3);
    DirectedSystem<Rational> sys;
    sys.rank = n;
    for (int k = 0; k < 5; ++k) {
      QMatrix Q(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Q(i, j) = r.poly(0, 2);
      for (int i = 0; i < n; ++i) Q(i, i) += QSeries::monomial(Rational(1), r.uni(0, 2));
      if (factors_via_minors(Q).back() == kInfinite) Q = QMatrix::identity(n);
      sys.steps.push_back(Q);
    }
    auto rep = weight_change_bounds(sys, 5);
    CHECK(rep.ok);
  }
  // Constant steps: j_i(k+1) - j_i(k) ∈ [alpha, beta].
  auto c = DirectedSystem<Rational>::constant(m2("u", "1", "0", "u^2"), 6);
  auto table = composite_factor_table(c, 6);
  auto e0 = table[1];
  for (int k = 0; k < 6; ++k)
    for (std::size_t i = 0; i < table[k].size(); ++i) {
      int d = table[k + 1][i] - table[k][i];
      CHECK(d >= e0.front());
      CHECK(d <= e0.back());
    }
}

TEST_CASE("Novikov systems") {
  FieldConfig cfg = FieldConfig::novikov(Rational(16), 0);
  NMatrix Q(2, 2, cfg);
  Q(0, 1) = parse_series<NovikovElem>("T^(1/2)", cfg);
  Q(1, 0) = parse_series<NovikovElem>("T^(-1)*u", cfg);
  auto L = localise_at_element(Q, 6);
  CHECK(L.certified);
  CHECK(L.to_string() == "K((u))^2");
  NMatrix I = NMatrix::identity(2, cfg);
  I(1, 1) = parse_series<NovikovElem>("T*u", cfg);
  auto sys = DirectedSystem<NovikovElem>::constant(I, 5);
  CHECK(limit_shape(sys, 5).to_string() == "K[[u]] ⊕ K((u))");
}
