#include "dvr/filtration.hpp"

#include <algorithm>
#include <cstdlib>

namespace dvr {

long long IntPoly::sum() const {
  long long s = 0;
  for (long long c : coeffs) s += c;
  return s;
}

namespace {

std::string monomial_text(long long c, int j, bool leading) {
  std::string s;
  long long a = c < 0 ? -c : c;
  if (!leading) s += c < 0 ? " - " : " + ";
  else if (c < 0) s += "-";
  if (j == 0 || a != 1) s += std::to_string(a);
  if (j >= 1) s += "t";
  if (j >= 2) s += "^" + std::to_string(j);
  return s;
}

}  // namespace

std::string IntPoly::to_string() const {
  std::string s;
  for (std::size_t j = 0; j < coeffs.size(); ++j)
    if (coeffs[j] != 0) s += monomial_text(coeffs[j], int(j), s.empty());
  return s.empty() ? "0" : s;
}

bool operator==(const IntPoly& a, const IntPoly& b) {
  std::size_t n = std::max(a.coeffs.size(), b.coeffs.size());
  for (std::size_t j = 0; j < n; ++j)
    if (a[j] != b[j]) return false;
  return true;
}

template <class F>
int InducedFiltration<F>::slice_dim(int j) const {
  if (j <= 0) return source_rank;
  int d = kernel_rank;
  for (int e : exponents) d += (j <= e);
  return d;
}

template <class F>
DVRMatrix<F> torsion_free_part(const DVRMatrix<F>& c, const FGModuleShape& W) {
  if (!W.free_laurent.empty() || !W.tails.empty())
    throw InputError("codomain of a K[[u]]-map must have only free and torsion summands");
  int r = int(W.free_power.size());
  int rows = r + int(W.torsion.size());
  if (c.rows() != rows)
    throw InputError("map has " + std::to_string(c.rows()) + " rows but the codomain has " +
                     std::to_string(rows) + " summands");
  std::vector<int> keep(r), cols(c.cols());
  for (int i = 0; i < r; ++i) keep[i] = i;
  for (int j = 0; j < c.cols(); ++j) cols[j] = j;
  return c.submatrix(keep, cols);
}

template <class F>
InducedFiltration<F> induced_filtration(const DVRMatrix<F>& c, const FGModuleShape& W,
                                        const std::vector<int>& domain_degrees,
                                        const SNFOptions& opt) {
  DVRMatrix<F> ct = torsion_free_part(c, W);
  const int n = c.cols();
  if (!domain_degrees.empty() && int(domain_degrees.size()) != n)
    throw InputError("domain has " + std::to_string(domain_degrees.size()) +
                     " generators but the map has " + std::to_string(n) + " columns");
  InducedFiltration<F> out;
  out.source_rank = n;
  if (ct.rows() == 0 || n == 0) {
    out.kernel_rank = n;
    out.basis = DVRMatrix<F>::identity(n, c.config());
  } else {
    SNFOptions o = opt;
    o.track_transforms = true;
    SNFResult<F> snf = smith_normal_form(ct, o);
    for (int e : snf.exponents)
      if (e != kInfinite) out.exponents.push_back(e);
    out.kernel_rank = n - out.finite_rank();
    out.basis = snf.V;
  }
  if (!domain_degrees.empty()) {
    const FieldConfig& cfg = c.config();
    const int grading = cfg.kind == FieldKind::novikov ? cfg.t_grading : 0;
    for (int i = 0; i < n; ++i) {
      int deg = 0;
      bool found = false;
      for (int g = 0; g < n && !found; ++g) {
        const auto& s = out.basis(g, i);
        if (s.no_terms()) continue;
        const auto& [k, coef] = s.terms().front();
        deg = monomial_degree(domain_degrees[g], k, FieldTraits<F>::t_exponents(coef).front(),
                              grading);
        found = true;
      }
      if (!found) throw InvariantError("basis vector with no certified entry");
      out.basis_degrees.push_back(deg);
    }
  }
  return out;
}

int SliceSeries::coefficient(int j) const {
  if (prefix.empty()) return tail;
  if (j < 0) return prefix[0];
  return j < int(prefix.size()) ? prefix[j] : tail;
}

int SliceSeries::positive_sum() const {
  int s = 0;
  for (std::size_t j = 1; j < prefix.size(); ++j) s += prefix[j];
  return s;
}

std::string SliceSeries::to_string() const {
  std::string s;
  for (std::size_t j = 0; j < prefix.size(); ++j)
    if (prefix[j] != 0) s += monomial_text(prefix[j], int(j), s.empty());
  if (tail != 0) {
    int next = int(prefix.size());
    std::string t = next == 1 ? "t" : "t^" + std::to_string(next);
    s += (s.empty() ? "" : " + ") + std::to_string(tail) + "·(" + t + " + …)";
  }
  return s.empty() ? "0" : s;
}

template <class F>
SliceSeries slice_series(const InducedFiltration<F>& f) {
  SliceSeries s;
  for (int j = 0; j <= f.max_exponent(); ++j) s.prefix.push_back(f.slice_dim(j));
  s.tail = f.kernel_rank;
  return s;
}

template <class F>
IntPoly reduced_slice(const InducedFiltration<F>& f) {
  IntPoly p;
  if (f.finite_rank() == 0) return p;
  for (int j = 0; j <= f.max_exponent(); ++j) p.coeffs.push_back(f.slice_dim(j) - f.kernel_rank);
  return p;
}

template <class F>
IntPoly filtration_polynomial(const InducedFiltration<F>& f) {
  IntPoly p;
  if (f.finite_rank() == 0) return p;
  for (int j = 0; j <= f.max_exponent(); ++j)
    p.coeffs.push_back(f.slice_dim(j) - f.slice_dim(j + 1));
  return p;
}

std::vector<int> conjugate_partition(const std::vector<int>& p) {
  std::vector<int> rows = p;
  std::sort(rows.rbegin(), rows.rend());
  std::vector<int> out;
  int longest = rows.empty() ? 0 : rows.front();
  for (int col = 1; col <= longest; ++col) {
    int n = 0;
    for (int r : rows) n += (r >= col);
    out.push_back(n);
  }
  return out;
}

template <class F>
YoungDiagramPair young_diagrams(const InducedFiltration<F>& f) {
  if (f.kernel_rank > 0)
    throw DomainError("c has a kernel of rank " + std::to_string(f.kernel_rank) +
                      "; its Young diagrams would be infinite");
  YoungDiagramPair y;
  for (int e : f.exponents)
    if (e > 0) y.shape.push_back(e);
  std::sort(y.shape.rbegin(), y.shape.rend());
  for (int j = 1; j <= f.max_exponent(); ++j) y.dual.push_back(f.slice_dim(j));
  if (conjugate_partition(y.shape) != y.dual)
    throw InvariantError("Young shape and slice dimensions are not conjugate");
  return y;
}

std::string render_young(const std::vector<int>& rows) {
  std::string s;
  for (int r : rows) {
    for (int i = 0; i < r; ++i) s += "□";
    s += "\n";
  }
  return s;
}

std::string render_young_french(const std::vector<int>& rows) {
  std::vector<int> rev(rows.rbegin(), rows.rend());
  return render_young(rev);
}

template <class F>
Valuation valuation_of(const std::vector<USeries<F>>& v, const DVRMatrix<F>& c,
                       const FGModuleShape& W) {
  DVRMatrix<F> ct = torsion_free_part(c, W);
  if (int(v.size()) != ct.cols()) throw DomainError("vector length does not match the map");
  int finite = kExact, bound = kExact;
  for (int i = 0; i < ct.rows(); ++i) {
    USeries<F> y;
    for (int g = 0; g < ct.cols(); ++g) y += ct(i, g) * v[g];
    Valuation nu = y.valuation();
    if (nu.is_finite()) finite = std::min(finite, nu.value);
    if (nu.is_at_least()) bound = std::min(bound, nu.value);
  }
  if (finite == kExact && bound == kExact) return Valuation::infinite();
  if (finite <= bound) return Valuation::finite(finite);
  throw PrecisionError("valuation of c(v) only known to be >= " + std::to_string(bound));
}

template <class F>
PlusLayer<F> plus_filtration(const InducedFiltration<F>& f, int j) {
  PlusLayer<F> L;
  L.j = j;
  L.kernel_tails = f.kernel_rank;
  const int n = f.source_rank;
  for (int i = 0; i < f.finite_rank(); ++i) {
    int ji = f.exponents[i];
    if (j > ji) continue;
    L.finite_dim += ji - j + 1;
    std::vector<USeries<F>> g(n);
    for (int r = 0; r < n; ++r) g[r] = f.basis(r, i).localise().shifted(j - ji).tail_project();
    L.generators.push_back(std::move(g));
  }
  return L;
}

namespace {

std::string u_power(int e) {
  if (e == 0) return "";
  return e == 1 ? "u" : "u^{" + std::to_string(e) + "}";
}

Layer lattice(Layer::Ambient a, int e) { return {a, Layer::Kind::lattice, e}; }
Layer zero(Layer::Ambient a) { return {a, Layer::Kind::zero, 0}; }
Layer whole(Layer::Ambient a) { return {a, Layer::Kind::all, 0}; }

}  // namespace

std::string Layer::to_string() const {
  if (kind == Kind::zero) return "0";
  if (kind == Kind::all) {
    switch (ambient) {
      case Ambient::minus: return "K[[u]]";
      case Ambient::infty: return "K((u))";
      case Ambient::plus: return "𝔽";
    }
  }
  std::string base = u_power(exponent) + "K[[u]]";
  return ambient == Ambient::plus ? base + "/uK[[u]]" : base;
}

template <class F>
FiltrationTableColumn filtration_table(const InducedFiltration<F>& f, int j) {
  using A = Layer::Ambient;
  FiltrationTableColumn col;
  col.j = j;
  for (int i = 0; i < f.finite_rank(); ++i) {
    int ji = f.exponents[i];
    col.v_minus.push_back(lattice(A::minus, std::max(j - 1 - ji, 0)));
    col.v_infty.push_back(lattice(A::infty, j - ji));
    col.v_plus.push_back(j <= ji ? lattice(A::plus, j - ji) : zero(A::plus));
  }
  for (int i = 0; i < f.kernel_rank; ++i) {
    col.v_minus.push_back(lattice(A::minus, 0));
    col.v_infty.push_back(whole(A::infty));
    col.v_plus.push_back(whole(A::plus));
  }
  col.w_minus = lattice(A::minus, std::max(j - 1, 0));
  col.w_infty = lattice(A::infty, j);
  col.w_plus = j <= 0 ? lattice(A::plus, j) : zero(A::plus);
  return col;
}

template <class F>
KMatrix<F> divisibility_kernel(const DVRMatrix<F>& ct, int lo, int N, int j) {
  const int n = ct.cols(), r = ct.rows(), width = N - lo;
  if (width <= 0) return KMatrix<F>(0, 0);
  int neq = std::max(0, j - lo);
  KMatrix<F> A(r * neq, n * width);
  for (int i = 0; i < r; ++i)
    for (int t = lo; t < j; ++t)
      for (int g = 0; g < n; ++g) {
        const auto& s = ct(i, g);
        if (s.is_exact_zero()) continue;
        for (int e = lo; e <= t && e < N; ++e) A(i * neq + (t - lo), g * width + (e - lo)) = s.coefficient(t - e);
      }
  return kernel_basis(A);
}

namespace {

// {v ∈ 𝔽_J^n : [u^s c~ v] = 0}, coordinates (g, e) for u^{-e} g.
template <class F>
KMatrix<F> tail_kernel(const DVRMatrix<F>& ct, int J, int s) {
  const int n = ct.cols(), r = ct.rows(), width = J + 1;
  // Products u^{s - e + k} with t = s - e + k <= 0 and t >= s - J.
  int tlo = s - J, neq = std::max(0, 1 - tlo);
  KMatrix<F> A(r * neq, n * width);
  for (int i = 0; i < r; ++i)
    for (int t = tlo; t <= 0; ++t)
      for (int g = 0; g < n; ++g) {
        const auto& sr = ct(i, g);
        if (sr.is_exact_zero()) continue;
        for (int e = 0; e <= J; ++e) {
          int k = t - s + e;
          if (k >= 0) A(i * neq + (t - tlo), g * width + e) = sr.coefficient(k);
        }
      }
  return kernel_basis(A);
}

}  // namespace

template <class F>
KMatrix<F> plus_layer_basis(const DVRMatrix<F>& ct, int j, int J) {
  if (J < 0) return KMatrix<F>(0, 0);
  if (j <= 1) return tail_kernel(ct, J, 1 - j);
  // F_j = u^{j-1} E_1, and u^{j-1} x ∈ 𝔽_J needs x ∈ 𝔽_{J+j-1}.
  const int n = ct.cols(), shift = j - 1, wide = J + shift + 1;
  KMatrix<F> E = tail_kernel(ct, J + shift, 0);
  KMatrix<F> out(n * (J + 1), E.cols());
  for (int c = 0; c < E.cols(); ++c)
    for (int g = 0; g < n; ++g)
      for (int e = shift; e < wide; ++e) out(g * (J + 1) + (e - shift), c) = E(g * wide + e, c);
  return column_basis(out);
}

template <class F>
SESReport ses_of_filtrations(const DVRMatrix<F>& c, const FGModuleShape& W, int j, int window) {
  InducedFiltration<F> f = induced_filtration(c, W);
  DVRMatrix<F> ct = torsion_free_part(c, W);
  SESReport r;
  r.j = j;
  const int M = window >= 0 ? window : f.max_exponent() + std::abs(j) + 2;
  const int N = std::max(j, 1) + 2;
  r.window = M;
  r.dim_minus = divisibility_kernel(ct, 0, N - 1, j - 1).cols();
  r.dim_infty = divisibility_kernel(ct, -M, N, j).cols();
  r.dim_plus = plus_layer_basis(ct, j, M).cols();
  const int b = f.kernel_rank;
  r.snf_minus = b * (N - 1);
  r.snf_infty = b * (N + M);
  r.snf_plus = b * (M + 1);
  for (int ji : f.exponents) {
    r.snf_minus += N - 1 - std::max(j - 1 - ji, 0);
    r.snf_infty += N - std::max(j - ji, -M);
    if (j <= ji) r.snf_plus += std::min(ji - j + 1, M + 1);
  }
  return r;
}

template <class F>
BridgeReport minus_plus_bridge(const DVRMatrix<F>& c, const FGModuleShape& W, int j, int m) {
  if (m < 0) throw DomainError("bridge index m must be >= 0");
  if (j < std::max(0, m - 1)) throw DomainError("bridge needs j >= max(0, m - 1)");
  InducedFiltration<F> f = induced_filtration(c, W);
  DVRMatrix<F> ct = torsion_free_part(c, W);
  const int n = ct.cols(), b = f.kernel_rank;
  BridgeReport r;
  r.j = j;
  r.m = m;
  // F_{j+1} mod u^N, split by whether a vector lies in u^{j+2-m}V.
  const int N = j + 2, cut = j + 2 - m;
  KMatrix<F> Fk = divisibility_kernel(ct, 0, N, j + 1);
  KMatrix<F> deep(n * N, 0);
  {
    std::vector<std::vector<F>> cols;
    for (int g = 0; g < n; ++g)
      for (int e = std::max(cut, 0); e < N; ++e) {
        std::vector<F> v(n * N);
        v[g * N + e] = F(1);
        cols.push_back(std::move(v));
      }
    if (!cols.empty()) deep = KMatrix<F>::from_columns(n * N, cols);
  }
  int inter = deep.cols() == 0 ? 0 : intersection_dim(Fk, deep);
  r.source_dim = Fk.cols() - inter;
  if (m >= 1) r.literal_kernel_dim = inter - n * (N - (j + 1));
  r.target_dim = plus_layer_basis(ct, m, j - m + 1).cols();
  r.source_snf = b * (j + 2 - m);
  r.target_snf = b * (j - m + 2);
  for (int ji : f.exponents) {
    r.source_snf += std::max(0, std::min(j + 2 - m, ji - m + 1));
    r.target_snf += std::max(0, std::min(ji - m + 1, j - m + 2));
  }
  r.stable = j >= f.max_exponent();
  if (f.injective()) {
    r.e1_dim = plus_layer_basis(ct, 1, f.max_exponent() + 1).cols();
    if (r.stable && m == 1) r.stable_ok = r.source_dim == r.e1_dim;
  }
  return r;
}

template <class F>
SliceSumReport slice_sum_identities(const DVRMatrix<F>& c, const FGModuleShape& W) {
  InducedFiltration<F> f = induced_filtration(c, W);
  DVRMatrix<F> ct = torsion_free_part(c, W);
  SliceSumReport r;
  const int J = f.max_exponent(), b = f.kernel_rank;
  for (int j = 1; j <= J; ++j) r.sum_d_positive += f.slice_dim(j) - b;
  for (int e : f.exponents) r.sum_exponents += e;
  for (int j = 0; j <= J; ++j) r.prefix_sum += f.slice_dim(j);
  // Each d_j carries b; for injective c this is rank V + Σ j_i.
  r.rank_plus_exponents = f.source_rank + r.sum_exponents + b * J;
  int running = 0;
  for (int j = 1; j <= J + 1; ++j) {
    running += f.slice_dim(j);
    if (divisibility_kernel(ct, 0, j, j).cols() != running) r.layer_sums_ok = false;
  }
  r.e1_reduced_dim = plus_layer_basis(ct, 1, J).cols() - b * (J + 1);
  return r;
}

#define DVR_INSTANTIATE(F)                                                                       \
  template struct InducedFiltration<F>;                                                          \
  template DVRMatrix<F> torsion_free_part<F>(const DVRMatrix<F>&, const FGModuleShape&);         \
  template InducedFiltration<F> induced_filtration<F>(const DVRMatrix<F>&, const FGModuleShape&, \
                                                      const std::vector<int>&, const SNFOptions&); \
  template SliceSeries slice_series<F>(const InducedFiltration<F>&);                             \
  template IntPoly reduced_slice<F>(const InducedFiltration<F>&);                                \
  template IntPoly filtration_polynomial<F>(const InducedFiltration<F>&);                        \
  template YoungDiagramPair young_diagrams<F>(const InducedFiltration<F>&);                      \
  template Valuation valuation_of<F>(const std::vector<USeries<F>>&, const DVRMatrix<F>&,        \
                                     const FGModuleShape&);                                      \
  template PlusLayer<F> plus_filtration<F>(const InducedFiltration<F>&, int);                    \
  template FiltrationTableColumn filtration_table<F>(const InducedFiltration<F>&, int);          \
  template KMatrix<F> divisibility_kernel<F>(const DVRMatrix<F>&, int, int, int);                \
  template KMatrix<F> plus_layer_basis<F>(const DVRMatrix<F>&, int, int);                        \
  template SESReport ses_of_filtrations<F>(const DVRMatrix<F>&, const FGModuleShape&, int, int); \
  template BridgeReport minus_plus_bridge<F>(const DVRMatrix<F>&, const FGModuleShape&, int, int); \
  template SliceSumReport slice_sum_identities<F>(const DVRMatrix<F>&, const FGModuleShape&);

DVR_INSTANTIATE(Rational)
DVR_INSTANTIATE(NovikovElem)
#undef DVR_INSTANTIATE

}  // namespace dvr
