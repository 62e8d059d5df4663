#pragma once

// Brute-force references used only by tests.  Nothing here calls the SNF or
// the degreewise engine of the library; linear algebra is plain Gaussian
// elimination over Q on dense matrices.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "dvr/homology.hpp"

namespace dvr::oracle {

struct QMat {
  int rows = 0, cols = 0;
  std::vector<Rational> a;

  QMat() = default;
  QMat(int r, int c) : rows(r), cols(c), a(std::size_t(r) * c) {}
  Rational& operator()(int i, int j) { return a[std::size_t(i) * cols + j]; }
  const Rational& operator()(int i, int j) const { return a[std::size_t(i) * cols + j]; }
};

int rank(QMat m);
// Columns spanning the null space.
QMat kernel(const QMat& m);
QMat mul(const QMat& a, const QMat& b);
QMat hcat(const QMat& a, const QMat& b);
// Is v (a single column) in the column span of m?
bool in_span(const QMat& m, const QMat& v);

// The quotient complex u^a C / u^b C over Q, as one big matrix on the
// cells u^k g (a <= k < b).  Valid for any window; degree pieces are read
// off by cell degree.
class TruncatedComplex {
 public:
  TruncatedComplex(const EqChainComplex<Rational>& C, int a, int b);

  struct Cell {
    int gen, k, degree;
  };
  const std::vector<Cell>& cells() const { return cells_; }
  std::vector<int> cells_in_degree(int m) const;
  // Differential restricted to degree m -> m + 1 (cell coordinates).
  QMat block(int m) const;
  int homology_dim(int m) const;
  // Cycles of degree m as columns; boundaries of degree m as columns.
  QMat cycles(int m) const;
  QMat boundaries(int m) const;

 private:
  std::vector<Cell> cells_;
  QMat D_;
};

// H_m(u^a C / u^b C) for the windows matching the four models.
int minus_dim(const EqChainComplex<Rational>& C, int m);
int infty_dim(const EqChainComplex<Rational>& C, int m);
int plus_dim(const EqChainComplex<Rational>& C, int m);
int ord_dim(const EqChainComplex<Rational>& C, int m);

// Random complex over Q with T-grading 0, assembled from elementary pieces
// (a free generator, or a pair e -> c·u^k·ẽ) and conjugated by a random
// graded unipotent change of basis, so the expected W⁻ shape is known.
struct RandomComplex {
  EqChainComplex<Rational> C;
  FGModuleShape expected_minus;
};

struct RandomComplexParams {
  int min_pieces = 1, max_pieces = 4;
  int deg_lo = -4, deg_hi = 4;
  int max_k = 3;
  double p_free = 0.35;
  bool allow_torsion = true;  // false: only k = 0 pairs
  double p_mix = 0.6;         // chance of a nonzero entry in the change of basis
};

RandomComplex random_complex(std::mt19937_64& rng, const RandomComplexParams& p = {});

// Degree window covering every class of the complex.
std::pair<int, int> degree_span(const EqChainComplex<Rational>& C);

// Filtrations of a map ct : K[[u]]^n -> K[[u]]^r with exact entries, from
// the coefficients of ct·(u^e g) computed by series multiplication.
// {v ∈ V/u^N : ct v ≡ 0 mod u^j}; cell u^e g at g·N + e.
QMat brute_filtration(const QMatrix& ct, int N, int j);
// {v ∈ 𝔽_J^n : [u^s ct v] = 0 ∈ 𝔽^r}; cell u^{-e} g at g·(J+1) + e.
QMat brute_tail_kernel(const QMatrix& ct, int J, int s);
// F_j(V⁺) ∩ 𝔽_J: the tail kernel for j <= 1, u^{j-1}·E_1 for j >= 2.
QMat brute_plus_layer(const QMatrix& ct, int j, int J);
// Dimension of the column span.
int span_dim(const QMat& m);
// dim(span A ∩ span B).
int meet_dim(const QMat& a, const QMat& b);
// Unit vectors of cells u^e g with e >= k (cells g·N + e).
QMat deep_cells(int n, int N, int k);

// Random matrix with exact polynomial entries: a diagonal of u^{j_i} and
// zeros (the kernel), conjugated by random unipotent K[u]-automorphisms.
struct RandomMap {
  QMatrix c;
  std::vector<int> exponents;  // sorted finite j_i
  int kernel_rank = 0;
};
RandomMap random_map(std::mt19937_64& rng, int rows, int cols, int max_j, double p_zero = 0.2);

}  // namespace dvr::oracle
