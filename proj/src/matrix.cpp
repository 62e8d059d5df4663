#include "dvr/matrix.hpp"

#include <algorithm>

namespace dvr {

template <class F>
DVRMatrix<F>::DVRMatrix(int rows, int cols, FieldConfig cfg)
    : rows_(rows), cols_(cols), e_(std::size_t(rows) * cols), cfg_(cfg) {
  if (rows < 0 || cols < 0) throw DomainError("negative matrix dimension");
}

template <class F>
DVRMatrix<F> DVRMatrix<F>::identity(int n, FieldConfig cfg) {
  DVRMatrix m(n, n, cfg);
  for (int i = 0; i < n; ++i) m(i, i) = Series::constant(F(1));
  return m;
}

template <class F>
DVRMatrix<F> DVRMatrix<F>::diag_u(const std::vector<int>& exps, int rows, int cols,
                                  FieldConfig cfg) {
  DVRMatrix m(rows, cols, cfg);
  int n = std::min<int>({rows, cols, int(exps.size())});
  for (int i = 0; i < n; ++i)
    if (exps[i] != kInfinite) m(i, i) = Series::monomial(F(1), exps[i]);
  return m;
}

template <class F>
DVRMatrix<F> DVRMatrix<F>::from_rows(const std::vector<std::vector<Series>>& rows,
                                     FieldConfig cfg) {
  int r = int(rows.size());
  int c = r ? int(rows[0].size()) : 0;
  DVRMatrix m(r, c, cfg);
  for (int i = 0; i < r; ++i) {
    if (int(rows[i].size()) != c) throw DomainError("ragged matrix rows");
    for (int j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

template <class F>
void DVRMatrix<F>::check_shape(const DVRMatrix& o, const char* op) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw DomainError(std::string("shape mismatch in matrix ") + op);
}

template <class F>
DVRMatrix<F> DVRMatrix<F>::operator*(const DVRMatrix& o) const {
  if (cols_ != o.rows_) throw DomainError("shape mismatch in matrix product");
  DVRMatrix r(rows_, o.cols_, cfg_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Series& a = (*this)(i, k);
      if (a.is_exact_zero()) continue;
      for (int j = 0; j < o.cols_; ++j) {
        const Series& b = o(k, j);
        if (b.is_exact_zero()) continue;
        r(i, j) += a * b;
      }
    }
  return r;
}

template <class F>
DVRMatrix<F> DVRMatrix<F>::operator+(const DVRMatrix& o) const {
  check_shape(o, "sum");
  DVRMatrix r = *this;
  for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] += o.e_[i];
  return r;
}

template <class F>
DVRMatrix<F> DVRMatrix<F>::operator-(const DVRMatrix& o) const {
  check_shape(o, "difference");
  DVRMatrix r = *this;
  for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] -= o.e_[i];
  return r;
}

template <class F>
DVRMatrix<F> DVRMatrix<F>::scaled(const Series& s) const {
  DVRMatrix r = *this;
  for (auto& x : r.e_) x = x * s;
  return r;
}

template <class F>
DVRMatrix<F> DVRMatrix<F>::transpose() const {
  DVRMatrix r(cols_, rows_, cfg_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

template <class F>
DVRMatrix<F> DVRMatrix<F>::submatrix(const std::vector<int>& rows,
                                     const std::vector<int>& cols) const {
  DVRMatrix r(int(rows.size()), int(cols.size()), cfg_);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) r(int(i), int(j)) = (*this)(rows[i], cols[j]);
  return r;
}

template <class F>
std::vector<USeries<F>> DVRMatrix<F>::column(int j) const {
  std::vector<Series> v(rows_);
  for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

template <class F>
int DVRMatrix<F>::min_precision() const {
  int p = kExact;
  for (auto& x : e_) p = std::min(p, x.precision());
  return p;
}

template <class F>
bool DVRMatrix<F>::is_exact_zero() const {
  return std::all_of(e_.begin(), e_.end(), [](const Series& x) { return x.is_exact_zero(); });
}

template <class F>
DVRMatrix<F> DVRMatrix<F>::truncated(int n) const {
  DVRMatrix r = *this;
  for (auto& x : r.e_) x = x.truncated(n);
  return r;
}

template <class F>
std::vector<std::vector<F>> DVRMatrix<F>::coefficient_matrix(int k) const {
  std::vector<std::vector<F>> out(rows_, std::vector<F>(cols_, F(0)));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j).coefficient(k);
  return out;
}

template <class F>
bool DVRMatrix<F>::operator==(const DVRMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
}

template <class F>
bool DVRMatrix<F>::agrees_with(const DVRMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) return false;
  for (std::size_t i = 0; i < e_.size(); ++i)
    if (!e_[i].agrees_with(o.e_[i])) return false;
  return true;
}

template <class F>
std::string DVRMatrix<F>::to_string() const {
  std::string s;
  for (int i = 0; i < rows_; ++i) {
    s += "[";
    for (int j = 0; j < cols_; ++j) {
      if (j) s += ", ";
      s += (*this)(i, j).to_string();
    }
    s += "]\n";
  }
  return s;
}

template class DVRMatrix<Rational>;
template class DVRMatrix<NovikovElem>;

}  // namespace dvr
