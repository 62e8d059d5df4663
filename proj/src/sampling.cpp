#include "dvr/sampling.hpp"

namespace dvr {

int Sampler::integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

bool Sampler::coin(double p) { return std::bernoulli_distribution(p)(rng_); }

Rational Sampler::nonzero_rational(int max_num, int max_den) {
  int p = integer(1, max_num);
  if (coin()) p = -p;
  return Rational(p, integer(1, max_den));
}

Rational Sampler::rational(int max_num, int max_den) {
  return Rational(integer(-max_num, max_num), integer(1, max_den));
}

QSeries Sampler::series(int min_exp, int prec, int terms) {
  std::vector<QSeries::Term> t;
  int n = integer(0, terms);
  for (int i = 0; i < n; ++i) t.push_back({integer(min_exp, prec - 1), nonzero_rational()});
  return QSeries::from_terms(std::move(t), prec);
}

QSeries Sampler::unit(int prec, int terms) {
  QSeries s = series(1, prec, terms);
  return s + QSeries::constant(nonzero_rational()).truncated(prec);
}

QMatrix Sampler::matrix(int rows, int cols, int prec, int max_val, double p_zero) {
  QMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      if (coin(p_zero)) continue;
      m(i, j) = unit(prec).shifted(integer(0, max_val)).truncated(prec);
    }
  return m;
}

QMatrix Sampler::invertible(int n, int prec) {
  QMatrix m = QMatrix::identity(n);
  for (int i = 0; i < n; ++i) m(i, i) = unit(prec);
  QMatrix e = QMatrix::identity(n);
  for (int step = 0; step < 2 * n; ++step) {
    int a = integer(0, n - 1), b = integer(0, n - 1);
    if (a == b) continue;
    QMatrix el = QMatrix::identity(n);
    el(a, b) = series(0, prec, 2);
    e = el * e;
  }
  return m * e;
}

}  // namespace dvr
