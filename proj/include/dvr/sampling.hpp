#pragma once

#include <cstdint>
#include <random>

#include "dvr/matrix.hpp"

namespace dvr {

// Seeded source of small random coefficients, series and matrices.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  int integer(int lo, int hi);  // inclusive
  bool coin(double p = 0.5);
  // p/q with 1 <= |p| <= max_num, 1 <= q <= max_den.
  Rational nonzero_rational(int max_num = 5, int max_den = 3);
  Rational rational(int max_num = 5, int max_den = 3);

  // Sparse power series with up to `terms` terms in [min_exp, prec) and precision prec.
  QSeries series(int min_exp, int prec, int terms = 3);
  // Unit of K[[u]] (nonzero constant term).
  QSeries unit(int prec, int terms = 3);
  // Entries u^{e} * unit with e drawn from [0, max_val], or 0 with probability p_zero.
  QMatrix matrix(int rows, int cols, int prec, int max_val = 3, double p_zero = 0.2);
  // Product of random elementary operations; invertible over K[[u]].
  QMatrix invertible(int n, int prec);

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace dvr
