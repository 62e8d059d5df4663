#pragma once

#include <string>
#include <vector>

#include "dvr/useries.hpp"

namespace dvr {

// Exponent of the zero invariant factor (u^∞ := 0).
inline constexpr int kInfinite = INT_MAX;

// Dense matrix over K[[u]] (power-kind entries).
template <class F>
class DVRMatrix {
 public:
  using Series = USeries<F>;

  DVRMatrix() = default;
  DVRMatrix(int rows, int cols, FieldConfig cfg = FieldConfig::rational());

  static DVRMatrix identity(int n, FieldConfig cfg = FieldConfig::rational());
  // Diagonal matrix with entries u^e (e == kInfinite gives 0).
  static DVRMatrix diag_u(const std::vector<int>& exps, int rows, int cols,
                          FieldConfig cfg = FieldConfig::rational());
  static DVRMatrix from_rows(const std::vector<std::vector<Series>>& rows,
                             FieldConfig cfg = FieldConfig::rational());

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }
  const FieldConfig& config() const { return cfg_; }

  Series& operator()(int i, int j) { return e_[std::size_t(i) * cols_ + j]; }
  const Series& operator()(int i, int j) const { return e_[std::size_t(i) * cols_ + j]; }

  DVRMatrix operator*(const DVRMatrix& o) const;
  DVRMatrix operator+(const DVRMatrix& o) const;
  DVRMatrix operator-(const DVRMatrix& o) const;
  DVRMatrix scaled(const Series& s) const;
  DVRMatrix transpose() const;
  DVRMatrix submatrix(const std::vector<int>& rows, const std::vector<int>& cols) const;
  // Column vector as an n x 1 matrix.
  std::vector<Series> column(int j) const;

  // Smallest entry precision (kExact if every entry is exact).
  int min_precision() const;
  bool is_exact() const { return min_precision() == kExact; }
  bool is_exact_zero() const;
  DVRMatrix truncated(int n) const;
  // Coefficient of u^k in every entry.
  std::vector<std::vector<F>> coefficient_matrix(int k) const;

  bool operator==(const DVRMatrix& o) const;
  // Every entry of this - o has no stored coefficient.
  bool agrees_with(const DVRMatrix& o) const;

  std::string to_string() const;

 private:
  void check_shape(const DVRMatrix& o, const char* op) const;

  int rows_ = 0, cols_ = 0;
  std::vector<Series> e_;
  FieldConfig cfg_ = FieldConfig::rational();
};

using QMatrix = DVRMatrix<Rational>;
using NMatrix = DVRMatrix<NovikovElem>;

extern template class DVRMatrix<Rational>;
extern template class DVRMatrix<NovikovElem>;

}  // namespace dvr
