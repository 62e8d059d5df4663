#include "oracle/oracle.hpp"

#include <algorithm>
#include <numeric>

namespace dvr::oracle {

namespace {

// Row reduction in place; returns pivot columns.
std::vector<int> eliminate(QMat& m) {
  std::vector<int> piv;
  int row = 0;
  for (int col = 0; col < m.cols && row < m.rows; ++col) {
    int p = row;
    while (p < m.rows && m(p, col).is_zero()) ++p;
    if (p == m.rows) continue;
    for (int j = 0; j < m.cols; ++j) std::swap(m(p, j), m(row, j));
    Rational inv = Rational(1) / m(row, col);
    for (int j = 0; j < m.cols; ++j) m(row, j) *= inv;
    for (int i = 0; i < m.rows; ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      Rational f = m(i, col);
      for (int j = 0; j < m.cols; ++j) m(i, j) -= f * m(row, j);
    }
    piv.push_back(col);
    ++row;
  }
  return piv;
}

int floor_div2(int x) { return x >= 0 ? x / 2 : -((-x + 1) / 2); }

}  // namespace

int rank(QMat m) {
  if (m.rows == 0 || m.cols == 0) return 0;
  return int(eliminate(m).size());
}

QMat kernel(const QMat& m) {
  QMat r = m;
  std::vector<int> piv = eliminate(r);
  std::vector<char> is_piv(m.cols, 0);
  for (int p : piv) is_piv[p] = 1;
  std::vector<int> free;
  for (int j = 0; j < m.cols; ++j)
    if (!is_piv[j]) free.push_back(j);
  QMat k(m.cols, int(free.size()));
  for (std::size_t f = 0; f < free.size(); ++f) {
    k(free[f], int(f)) = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) k(piv[i], int(f)) = -r(int(i), free[f]);
  }
  return k;
}

QMat mul(const QMat& a, const QMat& b) {
  QMat r(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      if (a(i, k).is_zero()) continue;
      for (int j = 0; j < b.cols; ++j) r(i, j) += a(i, k) * b(k, j);
    }
  return r;
}

QMat hcat(const QMat& a, const QMat& b) {
  QMat r(a.rows, a.cols + b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int j = 0; j < a.cols; ++j) r(i, j) = a(i, j);
    for (int j = 0; j < b.cols; ++j) r(i, a.cols + j) = b(i, j);
  }
  return r;
}

bool in_span(const QMat& m, const QMat& v) { return rank(m) == rank(hcat(m, v)); }

TruncatedComplex::TruncatedComplex(const EqChainComplex<Rational>& C, int a, int b) {
  for (int g = 0; g < C.size(); ++g)
    for (int k = a; k < b; ++k) cells_.push_back({g, k, C.gens[g].degree + 2 * k});
  int n = int(cells_.size());
  D_ = QMat(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      int shift = cells_[i].k - cells_[j].k;
      if (shift < 0) continue;
      const QSeries& e = C.d(cells_[i].gen, cells_[j].gen);
      for (auto& [exp, c] : e.terms())
        if (exp == shift) D_(i, j) = c;
    }
}

std::vector<int> TruncatedComplex::cells_in_degree(int m) const {
  std::vector<int> out;
  for (int i = 0; i < int(cells_.size()); ++i)
    if (cells_[i].degree == m) out.push_back(i);
  return out;
}

QMat TruncatedComplex::block(int m) const {
  std::vector<int> src = cells_in_degree(m), dst = cells_in_degree(m + 1);
  QMat r(int(dst.size()), int(src.size()));
  for (std::size_t i = 0; i < dst.size(); ++i)
    for (std::size_t j = 0; j < src.size(); ++j) r(int(i), int(j)) = D_(dst[i], src[j]);
  return r;
}

QMat TruncatedComplex::cycles(int m) const { return kernel(block(m)); }

QMat TruncatedComplex::boundaries(int m) const { return block(m - 1); }

int TruncatedComplex::homology_dim(int m) const {
  return cycles(m).cols - rank(boundaries(m));
}

namespace {

std::pair<int, int> gen_degrees(const EqChainComplex<Rational>& C) {
  int lo = 0, hi = 0;
  for (int i = 0; i < C.size(); ++i) {
    int d = C.gens[i].degree;
    if (i == 0 || d < lo) lo = d;
    if (i == 0 || d > hi) hi = d;
  }
  return {lo, hi};
}

}  // namespace

// Degree m of each model only involves cells of degrees m - 1 .. m + 1, so a
// window that contains every such cell makes the truncation exact there.
int minus_dim(const EqChainComplex<Rational>& C, int m) {
  auto [lo, hi] = gen_degrees(C);
  (void)hi;
  int b = std::max(1, floor_div2(m + 1 - lo) + 2);
  return TruncatedComplex(C, 0, b).homology_dim(m);
}

int infty_dim(const EqChainComplex<Rational>& C, int m) {
  auto [lo, hi] = gen_degrees(C);
  int a = floor_div2(m - 1 - hi) - 1, b = floor_div2(m + 1 - lo) + 2;
  return TruncatedComplex(C, a, b).homology_dim(m);
}

int plus_dim(const EqChainComplex<Rational>& C, int m) {
  auto [lo, hi] = gen_degrees(C);
  (void)lo;
  int a = std::min(0, floor_div2(m - 1 - hi) - 1);
  return TruncatedComplex(C, a, 1).homology_dim(m);
}

int ord_dim(const EqChainComplex<Rational>& C, int m) {
  return TruncatedComplex(C, 0, 1).homology_dim(m);
}

RandomComplex random_complex(std::mt19937_64& rng, const RandomComplexParams& p) {
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto coin = [&](double q) { return std::bernoulli_distribution(q)(rng); };
  auto coef = [&]() {
    int num = uni(1, 4) * (coin(0.5) ? 1 : -1);
    return Rational(num, uni(1, 3));
  };

  RandomComplex out;
  std::vector<Generator> gens;
  std::vector<std::pair<int, int>> arrows;  // (source, target) indices
  std::vector<std::pair<int, Rational>> arrow_data;  // (k, c)
  int pieces = uni(p.min_pieces, p.max_pieces);
  for (int i = 0; i < pieces; ++i) {
    int deg = uni(p.deg_lo, p.deg_hi);
    if (coin(p.p_free)) {
      gens.push_back({"f" + std::to_string(i), deg});
      out.expected_minus.free_power.push_back(deg);
      continue;
    }
    int k = p.allow_torsion ? uni(0, p.max_k) : 0;
    int tdeg = deg + 1 - 2 * k;
    gens.push_back({"e" + std::to_string(i), deg});
    gens.push_back({"t" + std::to_string(i), tdeg});
    arrows.push_back({int(gens.size()) - 2, int(gens.size()) - 1});
    arrow_data.push_back({k, coef()});
    if (k > 0) out.expected_minus.torsion.push_back({k, tdeg});
  }
  int n = int(gens.size());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<int> pos(n);
  for (int i = 0; i < n; ++i) pos[perm[i]] = i;

  EqChainComplex<Rational>& C = out.C;
  C.name = "random";
  C.gens.resize(n);
  for (int i = 0; i < n; ++i) C.gens[pos[i]] = gens[i];
  QMatrix d(n, n);
  for (std::size_t a = 0; a < arrows.size(); ++a) {
    auto [src, dst] = arrows[a];
    auto [k, c] = arrow_data[a];
    d(pos[dst], pos[src]) = QSeries::monomial(c, k);
  }
  // P = I + N with N strictly upper triangular and degree preserving.
  QMatrix N(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      int diff = C.gens[j].degree - C.gens[i].degree;
      if (diff < 0 || diff % 2 != 0 || !coin(p.p_mix)) continue;
      N(i, j) = QSeries::monomial(coef(), diff / 2);
    }
  QMatrix P = QMatrix::identity(n) + N;
  QMatrix Pinv = QMatrix::identity(n), term = QMatrix::identity(n), negN = N.scaled(QSeries::constant(-1));
  for (int l = 1; l < n; ++l) {
    term = term * negN;
    Pinv = Pinv + term;
  }
  C.d = Pinv * d * P;
  out.expected_minus.normalize();
  return out;
}

std::pair<int, int> degree_span(const EqChainComplex<Rational>& C) { return gen_degrees(C); }

QMat brute_filtration(const QMatrix& ct, int N, int j) {
  const int r = ct.rows(), n = ct.cols(), neq = std::max(j, 0);
  QMat A(r * neq, n * N);
  for (int g = 0; g < n; ++g)
    for (int e = 0; e < N; ++e)
      for (int i = 0; i < r; ++i) {
        QSeries y = ct(i, g) * QSeries::monomial(Rational(1), e);
        for (int t = 0; t < neq; ++t) A(i * neq + t, g * N + e) = y.coefficient(t);
      }
  return kernel(A);
}

QMat brute_tail_kernel(const QMatrix& ct, int J, int s) {
  // u^s u^{-e} y = u^{-J}·(u^{J+s-e} y): its class in 𝔽 vanishes iff the
  // coefficients of u^{J+s-e} y below u^{J+1} do.
  const int r = ct.rows(), n = ct.cols(), w = J + 1;
  QMat A(r * w, n * w);
  for (int g = 0; g < n; ++g)
    for (int e = 0; e <= J; ++e)
      for (int i = 0; i < r; ++i) {
        QSeries y = ct(i, g) * QSeries::monomial(Rational(1), J + s - e);
        for (int t = 0; t <= J; ++t) A(i * w + t, g * w + e) = y.coefficient(t);
      }
  return kernel(A);
}

QMat brute_plus_layer(const QMatrix& ct, int j, int J) {
  if (j <= 1) return brute_tail_kernel(ct, J, 1 - j);
  const int n = ct.cols(), sh = j - 1, wide = J + sh + 1;
  QMat E = brute_tail_kernel(ct, J + sh, 0);
  QMat out(n * (J + 1), E.cols);
  // u·u^{-e} = u^{-(e-1)}, and u^0 -> 0 in 𝔽.
  for (int c = 0; c < E.cols; ++c)
    for (int g = 0; g < n; ++g)
      for (int e = sh; e < wide; ++e) out(g * (J + 1) + e - sh, c) = E(g * wide + e, c);
  return out;
}

int span_dim(const QMat& m) { return rank(m); }

int meet_dim(const QMat& a, const QMat& b) { return rank(a) + rank(b) - rank(hcat(a, b)); }

QMat deep_cells(int n, int N, int k) {
  int per = std::max(0, N - std::max(k, 0));
  QMat m(n * N, n * per);
  int c = 0;
  for (int g = 0; g < n; ++g)
    for (int e = std::max(k, 0); e < N; ++e) m(g * N + e, c++) = 1;
  return m;
}

RandomMap random_map(std::mt19937_64& rng, int rows, int cols, int max_j, double p_zero) {
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto coin = [&](double q) { return std::bernoulli_distribution(q)(rng); };
  auto coef = [&]() { return Rational(uni(1, 3) * (coin(0.5) ? 1 : -1), uni(1, 2)); };
  auto poly = [&](int deg) {
    QSeries s;
    for (int k = 0; k <= deg; ++k)
      if (coin(0.5)) s += QSeries::monomial(coef(), k);
    return s;
  };
  // Unipotent upper triangular times lower triangular with unit diagonal.
  auto automorphism = [&](int n) {
    QMatrix U = QMatrix::identity(n), L = QMatrix::identity(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i < j && coin(0.5)) U(i, j) = poly(2);
        if (i > j && coin(0.5)) L(i, j) = poly(2);
      }
    return U * L;
  };
  RandomMap out;
  QMatrix D(rows, cols);
  for (int i = 0; i < std::min(rows, cols); ++i) {
    if (coin(p_zero)) continue;
    int k = uni(0, max_j);
    D(i, i) = QSeries::monomial(coef(), k);
    out.exponents.push_back(k);
  }
  std::sort(out.exponents.begin(), out.exponents.end());
  out.kernel_rank = cols - int(out.exponents.size());
  out.c = automorphism(rows) * D * automorphism(cols);
  return out;
}

}  // namespace dvr::oracle
