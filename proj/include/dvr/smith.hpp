#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dvr/matrix.hpp"

namespace dvr {

struct SNFOptions {
  // Truncation applied when inverting exact non-monomial pivots.
  int precision = kDefaultPrecision;
  bool track_transforms = true;
  // Also accumulate U^{-1} (used to read cycles off the kernel of d).
  bool track_u_inverse = false;
};

// U * A * V = D with U, V invertible and D = diag(u^{j_1}, ..., u^{j_r}, 0, ...).
template <class F>
struct SNFResult {
  DVRMatrix<F> U, D, V;
  std::optional<DVRMatrix<F>> U_inv;
  // Nondecreasing, length min(rows, cols); kInfinite marks a zero factor.
  std::vector<int> exponents;

  int rank() const;                 // number of finite exponents
  int count_infinite() const { return int(exponents.size()) - rank(); }
};

template <class F>
SNFResult<F> smith_normal_form(const DVRMatrix<F>& A, const SNFOptions& opt = {});

// Invariant factor exponents from valuations of gcds of minors; independent
// of the elimination in smith_normal_form.
template <class F>
std::vector<int> factors_via_minors(const DVRMatrix<F>& A);

template <class F>
struct Determinant {
  USeries<F> value;
  Valuation order;  // ν(det)
};

template <class F>
Determinant<F> det(const DVRMatrix<F>& A);

template <class F>
DVRMatrix<F> adjugate(const DVRMatrix<F>& A);

// (ν(gcd of entries), ν(det) - ν(gcd)) for a 2x2 matrix.
template <class F>
std::pair<int, int> two_by_two_factors(const DVRMatrix<F>& A);

// Rank over K((u)) of an exact matrix, by division-free elimination.
template <class F>
int exact_rank(const DVRMatrix<F>& A);

std::string exponents_to_string(const std::vector<int>& e);

}  // namespace dvr
