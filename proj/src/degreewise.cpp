#include "dvr/degreewise.hpp"

#include <algorithm>

namespace dvr {

const char* model_name(Model m) {
  switch (m) {
    case Model::minus: return "minus";
    case Model::infty: return "infty";
    case Model::plus: return "plus";
    case Model::ord: return "ord";
  }
  return "?";
}

template <class F>
DegreewiseModel<F>::DegreewiseModel(const EqChainComplex<F>& C, Model model)
    : C_(&C), model_(model) {
  const FieldConfig& cfg = C.config();
  if (cfg.kind == FieldKind::novikov && cfg.t_grading != 0)
    throw DomainError("degreewise models need T-grading 0 (|T| = 2 makes degrees infinite-dimensional)");
}

template <class F>
bool DegreewiseModel<F>::keeps(int k) const {
  switch (model_) {
    case Model::minus: return k >= 0;
    case Model::infty: return true;
    case Model::plus: return k <= 0;
    case Model::ord: return k == 0;
  }
  return false;
}

template <class F>
std::vector<int> DegreewiseModel<F>::cells(int m) const {
  std::vector<int> out;
  for (int g = 0; g < C_->size(); ++g) {
    int diff = m - C_->gens[g].degree;
    if (diff % 2 != 0) continue;
    if (keeps(diff / 2)) out.push_back(g);
  }
  return out;
}

template <class F>
KMatrix<F> DegreewiseModel<F>::differential(int m) const {
  return map_to(*this, m, 0, true);
}

template <class F>
KMatrix<F> DegreewiseModel<F>::map_to(const DegreewiseModel& dst, int m, int shift,
                                      bool apply_d) const {
  if (dst.C_ != C_) throw DomainError("degreewise map between different complexes");
  int m2 = m + 2 * shift + (apply_d ? 1 : 0);
  std::vector<int> src = cells(m), tgt = dst.cells(m2);
  KMatrix<F> A(int(tgt.size()), int(src.size()));
  for (std::size_t j = 0; j < src.size(); ++j) {
    int g = src[j];
    int kg = u_exponent(g, m);
    for (std::size_t i = 0; i < tgt.size(); ++i) {
      int h = tgt[i];
      if (!apply_d) {
        if (h == g) A(int(i), int(j)) = F(1);
        continue;
      }
      int kp = dst.u_exponent(h, m2) - shift - kg;
      if (kp < 0) continue;
      const auto& e = C_->d(h, g);
      if (e.is_exact_zero()) continue;
      A(int(i), int(j)) = e.coefficient(kp);
    }
  }
  return A;
}

template <class F>
KMatrix<F> DegreewiseModel<F>::cycles(int m) const {
  return kernel_basis(differential(m));
}

template <class F>
KMatrix<F> DegreewiseModel<F>::boundaries(int m) const {
  return column_basis(differential(m - 1));
}

template <class F>
int DegreewiseModel<F>::homology_dim(int m) const {
  return cycles(m).cols() - boundaries(m).cols();
}

template <class F>
int induced_rank(const DegreewiseModel<F>& src, int m, const DegreewiseModel<F>& dst, int m2,
                 const KMatrix<F>& f) {
  KMatrix<F> Z = src.cycles(m);
  KMatrix<F> B = dst.boundaries(m2);
  KMatrix<F> fz = f * Z;
  return rank(fz.hcat(B)) - B.cols();
}

namespace {

template <class F>
KMatrix<F> filtered_cycles(const FilteredCells<F>& fc, int m, int p, int r) {
  std::vector<int> lev = fc.levels(m), lev_next = fc.levels(m + 1);
  std::vector<int> sel, rows;
  for (std::size_t i = 0; i < lev.size(); ++i)
    if (lev[i] <= p) sel.push_back(int(i));
  int bound = p - std::max(r, 0);
  for (std::size_t i = 0; i < lev_next.size(); ++i)
    if (lev_next[i] > bound) rows.push_back(int(i));
  KMatrix<F> Z(int(lev.size()), 0);
  if (sel.empty()) return Z;
  KMatrix<F> sub = fc.differential(m).select_rows(rows).select_cols(sel);
  KMatrix<F> K = kernel_basis(sub);
  KMatrix<F> out(int(lev.size()), K.cols());
  for (std::size_t a = 0; a < sel.size(); ++a)
    for (int c = 0; c < K.cols(); ++c) out(sel[a], c) = K(int(a), c);
  return out;
}

}  // namespace

template <class F>
int page_dim(const FilteredCells<F>& fc, int m, int p, int r) {
  KMatrix<F> num = filtered_cycles(fc, m, p, r);
  if (num.cols() == 0) return 0;
  KMatrix<F> den = filtered_cycles(fc, m, p - 1, r - 1);
  KMatrix<F> src = filtered_cycles(fc, m - 1, p + r - 1, r - 1);
  if (src.cols() > 0) den = den.hcat(fc.differential(m - 1) * src);
  return num.cols() - rank(den);
}

template <class F>
std::optional<std::vector<F>> solve_linear(const KMatrix<F>& A, const std::vector<F>& b) {
  if (int(b.size()) != A.rows()) throw InputError("solve_linear: size mismatch");
  if (A.rows() == 0) return std::vector<F>(A.cols(), F(0));
  KMatrix<F> aug = A.hcat(KMatrix<F>::from_columns(A.rows(), {b}));
  KMatrix<F> K = kernel_basis(aug);
  const int n = A.cols();
  for (int c = 0; c < K.cols(); ++c) {
    if (K(n, c) == F(0)) continue;
    F s = F(-1) / K(n, c);
    std::vector<F> x(n);
    for (int i = 0; i < n; ++i) x[i] = K(i, c) * s;
    return x;
  }
  return std::nullopt;
}

template <class F>
std::optional<std::vector<F>> zigzag(const FilteredCells<F>& fc, int m, int p, int r,
                                     const std::vector<F>& f) {
  std::vector<int> lev = fc.levels(m), lev_next = fc.levels(m + 1);
  if (f.size() != lev.size()) throw InputError("zigzag: representative has the wrong size");
  for (std::size_t i = 0; i < lev.size(); ++i)
    if (lev[i] > p && !(f[i] == F(0))) throw InputError("zigzag: representative not in F_p");
  KMatrix<F> D = fc.differential(m);
  std::vector<int> corr, rows;
  for (std::size_t i = 0; i < lev.size(); ++i)
    if (lev[i] <= p - 1) corr.push_back(int(i));
  for (std::size_t i = 0; i < lev_next.size(); ++i)
    if (lev_next[i] > p - r) rows.push_back(int(i));
  KMatrix<F> fcol = KMatrix<F>::from_columns(int(f.size()), {f});
  KMatrix<F> df = D * fcol;
  std::vector<F> g(lev.size(), F(0));
  if (!rows.empty()) {
    std::vector<F> rhs;
    for (int i : rows) rhs.push_back(-df(i, 0));
    auto x = solve_linear(D.select_rows(rows).select_cols(corr), rhs);
    if (!x) return std::nullopt;
    for (std::size_t a = 0; a < corr.size(); ++a) g[corr[a]] = (*x)[a];
  }
  std::vector<F> fg(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) fg[i] = f[i] + g[i];
  KMatrix<F> out = D * KMatrix<F>::from_columns(int(fg.size()), {fg});
  std::vector<F> res(lev_next.size(), F(0));
  for (std::size_t i = 0; i < lev_next.size(); ++i)
    if (lev_next[i] == p - r) res[i] = out(int(i), 0);
  return res;
}

#define DVR_INSTANTIATE(F)                                                                   \
  template class DegreewiseModel<F>;                                                         \
  template int induced_rank<F>(const DegreewiseModel<F>&, int, const DegreewiseModel<F>&, int, \
                               const KMatrix<F>&);                                           \
  template int page_dim<F>(const FilteredCells<F>&, int, int, int);                         \
  template std::optional<std::vector<F>> zigzag<F>(const FilteredCells<F>&, int, int, int,   \
                                                   const std::vector<F>&);                  \
  template std::optional<std::vector<F>> solve_linear<F>(const KMatrix<F>&, const std::vector<F>&);

DVR_INSTANTIATE(Rational)
DVR_INSTANTIATE(NovikovElem)
#undef DVR_INSTANTIATE

}  // namespace dvr
