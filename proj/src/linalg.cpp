#include "dvr/linalg.hpp"

#include <utility>

namespace dvr {

template <class F>
KMatrix<F> KMatrix<F>::identity(int n) {
  KMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = F(1);
  return m;
}

template <class F>
KMatrix<F> KMatrix<F>::from_columns(int rows, const std::vector<std::vector<F>>& cols) {
  KMatrix m(rows, int(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (int(cols[j].size()) != rows) throw DomainError("column length mismatch");
    for (int i = 0; i < rows; ++i) m(i, int(j)) = cols[j][i];
  }
  return m;
}

template <class F>
KMatrix<F> KMatrix<F>::operator*(const KMatrix& o) const {
  if (cols_ != o.rows_) throw DomainError("shape mismatch in K-matrix product");
  KMatrix r(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const F& a = (*this)(i, k);
      if (a.is_zero()) continue;
      for (int j = 0; j < o.cols_; ++j)
        if (!o(k, j).is_zero()) r(i, j) += a * o(k, j);
    }
  return r;
}

template <class F>
KMatrix<F> KMatrix<F>::transpose() const {
  KMatrix r(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

template <class F>
KMatrix<F> KMatrix<F>::hcat(const KMatrix& o) const {
  if (rows_ != o.rows_) throw DomainError("row mismatch in hcat");
  KMatrix r(rows_, cols_ + o.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j);
    for (int j = 0; j < o.cols_; ++j) r(i, cols_ + j) = o(i, j);
  }
  return r;
}

template <class F>
KMatrix<F> KMatrix<F>::select_rows(const std::vector<int>& rows) const {
  KMatrix r(int(rows.size()), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < cols_; ++j) r(int(i), j) = (*this)(rows[i], j);
  return r;
}

template <class F>
KMatrix<F> KMatrix<F>::select_cols(const std::vector<int>& cols) const {
  KMatrix r(rows_, int(cols.size()));
  for (int i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) r(i, int(j)) = (*this)(i, cols[j]);
  return r;
}

template <class F>
std::vector<F> KMatrix<F>::column(int j) const {
  std::vector<F> v(rows_);
  for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

template <class F>
bool KMatrix<F>::is_zero() const {
  for (auto& x : a_)
    if (!x.is_zero()) return false;
  return true;
}

template <class F>
RowEchelon<F> rref(KMatrix<F> A) {
  RowEchelon<F> out;
  int m = A.rows(), n = A.cols(), row = 0;
  for (int col = 0; col < n && row < m; ++col) {
    int piv = -1;
    for (int i = row; i < m; ++i)
      if (!A(i, col).is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != row)
      for (int j = 0; j < n; ++j) std::swap(A(piv, j), A(row, j));
    F inv = A(row, col).inv();
    for (int j = col; j < n; ++j) A(row, j) = A(row, j) * inv;
    for (int i = 0; i < m; ++i) {
      if (i == row || A(i, col).is_zero()) continue;
      F f = A(i, col);
      for (int j = col; j < n; ++j)
        if (!A(row, j).is_zero()) A(i, j) -= f * A(row, j);
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.R = std::move(A);
  return out;
}

template <class F>
int rank(const KMatrix<F>& A) {
  if (A.rows() == 0 || A.cols() == 0) return 0;
  // Eliminate on the thinner orientation.
  if (A.rows() < A.cols()) return int(rref(A.transpose()).pivots.size());
  return int(rref(A).pivots.size());
}

template <class F>
KMatrix<F> kernel_basis(const KMatrix<F>& A) {
  int n = A.cols();
  RowEchelon<F> e = rref(A);
  std::vector<bool> is_pivot(n, false);
  for (int p : e.pivots) is_pivot[p] = true;
  std::vector<int> free_cols;
  for (int j = 0; j < n; ++j)
    if (!is_pivot[j]) free_cols.push_back(j);
  KMatrix<F> K(n, int(free_cols.size()));
  for (std::size_t f = 0; f < free_cols.size(); ++f) {
    int fc = free_cols[f];
    K(fc, int(f)) = F(1);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) K(e.pivots[r], int(f)) = -e.R(int(r), fc);
  }
  return K;
}

template <class F>
KMatrix<F> column_basis(const KMatrix<F>& A) {
  if (A.cols() == 0) return A;
  return A.select_cols(rref(A).pivots);
}

template <class F>
int intersection_dim(const KMatrix<F>& A, const KMatrix<F>& B) {
  return rank(A) + rank(B) - rank(A.hcat(B));
}

template <class F>
KMatrix<F> intersection_basis(const KMatrix<F>& A, const KMatrix<F>& B) {
  KMatrix<F> a = column_basis(A), b = column_basis(B);
  if (a.cols() == 0 || b.cols() == 0) return KMatrix<F>(A.rows(), 0);
  // a x = b y  <=>  [a | -b] (x; y) = 0
  KMatrix<F> nb(b.rows(), b.cols());
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) nb(i, j) = -b(i, j);
  KMatrix<F> k = kernel_basis(a.hcat(nb));
  std::vector<int> top;
  for (int i = 0; i < a.cols(); ++i) top.push_back(i);
  return column_basis(a * k.select_rows(top));
}

#define DVR_INSTANTIATE(F)                                                   \
  template class KMatrix<F>;                                                 \
  template RowEchelon<F> rref<F>(KMatrix<F>);                                \
  template int rank<F>(const KMatrix<F>&);                                   \
  template KMatrix<F> kernel_basis<F>(const KMatrix<F>&);                    \
  template KMatrix<F> column_basis<F>(const KMatrix<F>&);                    \
  template int intersection_dim<F>(const KMatrix<F>&, const KMatrix<F>&);    \
  template KMatrix<F> intersection_basis<F>(const KMatrix<F>&, const KMatrix<F>&);

DVR_INSTANTIATE(Rational)
DVR_INSTANTIATE(NovikovElem)
#undef DVR_INSTANTIATE

}  // namespace dvr
