#pragma once

#include <vector>

#include "dvr/field.hpp"

namespace dvr {

// Dense matrix over a coefficient field.
template <class F>
class KMatrix {
 public:
  KMatrix() = default;
  KMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols, F(0)) {}

  static KMatrix identity(int n);
  // Columns given as vectors of length `rows`.
  static KMatrix from_columns(int rows, const std::vector<std::vector<F>>& cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  F& operator()(int i, int j) { return a_[std::size_t(i) * cols_ + j]; }
  const F& operator()(int i, int j) const { return a_[std::size_t(i) * cols_ + j]; }

  KMatrix operator*(const KMatrix& o) const;
  KMatrix transpose() const;
  // [this | o]
  KMatrix hcat(const KMatrix& o) const;
  KMatrix select_rows(const std::vector<int>& rows) const;
  KMatrix select_cols(const std::vector<int>& cols) const;
  std::vector<F> column(int j) const;
  bool is_zero() const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<F> a_;
};

template <class F>
struct RowEchelon {
  KMatrix<F> R;             // reduced row echelon form
  std::vector<int> pivots;  // pivot column of each nonzero row
};

template <class F>
RowEchelon<F> rref(KMatrix<F> A);

template <class F>
int rank(const KMatrix<F>& A);

// Columns form a basis of the null space.
template <class F>
KMatrix<F> kernel_basis(const KMatrix<F>& A);

// Linearly independent columns spanning the column space.
template <class F>
KMatrix<F> column_basis(const KMatrix<F>& A);

// dim(span A ∩ span B) for column spans in a common space.
template <class F>
int intersection_dim(const KMatrix<F>& A, const KMatrix<F>& B);

// Columns form a basis of span A ∩ span B.
template <class F>
KMatrix<F> intersection_basis(const KMatrix<F>& A, const KMatrix<F>& B);

extern template class KMatrix<Rational>;
extern template class KMatrix<NovikovElem>;

}  // namespace dvr
